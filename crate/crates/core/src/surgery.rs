//! Contact surgery along the Legendrian binding.
//!
//! The binding of the open book `(Σ_g¹, φ)` has a Legendrian realization
//! `L0` with `tb = g − 1`, and after `g` stabilization-free isotopy moves a
//! realization `L` with `tb = 2g − 1`. Smooth `r`-surgery on the section is
//! contact `r' = r − (2g − 1)` surgery on `L`. Negative `r'` becomes a chain
//! of contact (−1)-surgeries on stabilized push-offs; positive `r'` is kept
//! as a single rational surgery.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::homology::{complement_presentation, FramingConvention};
use crate::linalg::{AbelianGroupInvariant, IntMatrix};
use crate::words::{FamilyParams, GenusParity, TwistWord};

/// A rational slope `p/q` in lowest terms with `q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope(Ratio<i64>);

impl Slope {
    /// Strict constructor: rejects fractions not already in lowest terms.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 || p.gcd(&q) != 1 {
            return Err(Error::NotLowestTerms { p, q });
        }
        Ok(Slope(Ratio::new_raw(p, q)))
    }

    /// Normalizing constructor used at input boundaries.
    pub fn normalized(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(parse_err("slope", &format!("{p}/{q}"), "zero denominator"));
        }
        if p == i64::MIN || q == i64::MIN {
            return Err(Error::Overflow("normalizing a slope"));
        }
        Ok(Slope(Ratio::new(p, q)))
    }

    pub fn integer(p: i64) -> Self {
        Slope(Ratio::from_integer(p))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(self.numer().into(), self.denom().into())
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    /// `self − k`, checked.
    pub fn shift_down(&self, k: i64) -> Result<Slope> {
        let p = k
            .checked_mul(self.denom())
            .and_then(|kq| self.numer().checked_sub(kq))
            .ok_or(Error::Overflow("shifting a slope"))?;
        Slope::new(p, self.denom())
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Accepts `"p/q"` or a bare integer; normalizes to lowest terms.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let int = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| parse_err("slope", s, e.to_string()))
        };
        match t.split_once('/') {
            Some((p, q)) => Slope::normalized(int(p)?, int(q)?),
            None => Ok(Slope::integer(int(t)?)),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `tb(L0) = g − 1`.
pub fn tb_initial(g: u32) -> i64 {
    i64::from(g) - 1
}

/// `tb(L) = 2g − 1`.
pub fn tb_binding(g: u32) -> i64 {
    2 * i64::from(g) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContactFraming {
    pub tb_l0: i64,
    pub tb_l: i64,
    pub r_prime: Slope,
}

/// `r' = r − (2g − 1)` together with the Thurston–Bennequin numbers.
pub fn contact_coefficient(g: u32, r: Slope) -> Result<ContactFraming> {
    Ok(ContactFraming {
        tb_l0: tb_initial(g),
        tb_l: tb_binding(g),
        r_prime: r.shift_down(tb_binding(g))?,
    })
}

/// `a0 − 1/(a1 − 1/(⋯ − 1/ak))` with every tail entry `≤ −2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CfExpansion {
    entries: Vec<i64>,
}

impl CfExpansion {
    /// Wraps entries after checking the tail bound `a_i ≤ −2` (i ≥ 1).
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() || entries[1..].iter().any(|&a| a > -2) {
            return Err(parse_err(
                "continued fraction",
                &format!("{entries:?}"),
                "need a nonempty list with tail entries <= -2",
            ));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact value of the expansion.
    pub fn value(&self) -> BigRational {
        let mut it = self.entries.iter().rev();
        let mut acc = BigRational::from_integer(BigInt::from(*it.next().expect("nonempty")));
        for &a in it {
            acc = BigRational::from_integer(BigInt::from(a)) - acc.recip();
        }
        acc
    }

    /// Tridiagonal linking matrix: the entries on the diagonal, 1 beside it.
    pub fn linking_matrix(&self) -> IntMatrix {
        let k = self.entries.len();
        let mut m = IntMatrix::zeros(k, k);
        for (i, &a) in self.entries.iter().enumerate() {
            m[(i, i)] = BigInt::from(a);
            if i + 1 < k {
                m[(i, i + 1)] = BigInt::one();
                m[(i + 1, i)] = BigInt::one();
            }
        }
        m
    }

    /// Same expansion with the leading entry shifted by `k`.
    pub fn shift_leading(&self, k: i64) -> Result<CfExpansion> {
        let mut entries = self.entries.clone();
        entries[0] = entries[0]
            .checked_add(k)
            .ok_or(Error::Overflow("shifting a continued fraction"))?;
        Ok(CfExpansion { entries })
    }
}

/// The expansion `a0 − 1/(a1 − ⋯)` of any rational, with `a0 = ⌊r⌋` and
/// tail entries `≤ −2`.
pub fn minus_continued_fraction(r: Slope) -> CfExpansion {
    let (mut p, mut q) = (i128::from(r.numer()), i128::from(r.denom()));
    let mut entries = Vec::new();
    loop {
        let a = Integer::div_floor(&p, &q);
        entries.push(a as i64);
        let rem = p - a * q;
        if rem == 0 {
            break;
        }
        // r = a + rem/q = a − 1/t with t = −q/rem < −1
        (p, q) = (-q, rem);
    }
    CfExpansion { entries }
}

/// Expansion of a negative contact coefficient: `a0 ≤ −1`, `a_i ≤ −2`.
pub fn negative_cf_expansion(r_prime: Slope) -> Result<CfExpansion> {
    if !r_prime.is_negative() {
        return Err(Error::NonNegativeCoefficient(r_prime.to_string()));
    }
    Ok(minus_continued_fraction(r_prime))
}

/// `H_1` of the lens-space-like presentation given by the chain's linking
/// matrix.
pub fn chain_linking_h1(exp: &CfExpansion) -> AbelianGroupInvariant {
    AbelianGroupInvariant::cokernel(&exp.linking_matrix())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    SteinFillable,
    NonvanishingContactInvariant,
    ExcludedSlope,
    OutOfTheoremRange,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::SteinFillable => "SteinFillable",
            VerdictKind::NonvanishingContactInvariant => "NonvanishingContactInvariant",
            VerdictKind::ExcludedSlope => "ExcludedSlope",
            VerdictKind::OutOfTheoremRange => "OutOfTheoremRange",
        }
    }

    pub fn is_tight(&self) -> bool {
        matches!(
            self,
            VerdictKind::SteinFillable | VerdictKind::NonvanishingContactInvariant
        )
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightnessVerdict {
    pub kind: VerdictKind,
    pub citations: Vec<&'static str>,
}

const CITE_STEIN: &str = "negative contact surgery converts to contact (-1)-surgeries, which preserve Stein fillability (Ding-Geiges-Stipsicz; Eliashberg; Gompf)";
const CITE_CONWAY: &str = "r-surgery on a fibered transverse knot of genus g preserves a nonvanishing contact class when r > 2g-1 (Conway, Thm 1.6)";
const CITE_BINDING: &str = "the binding is transverse to the supported contact structure (Thurston-Winkelnkemper) and Stein fillability gives a nonzero contact invariant (Ozsvath-Szabo)";
const CITE_EXCLUDED: &str = "slope r = 2g-1 is excluded from the tightness statement";
const CITE_RANGE: &str = "tightness statement requires g >= 1 and m, n >= 1";

/// Which tightness certificate applies at slope `r`.
pub fn tightness_verdict(g: u32, r: Slope, m: i64, n: i64) -> TightnessVerdict {
    if g < 1 || m <= 0 || n <= 0 {
        return TightnessVerdict {
            kind: VerdictKind::OutOfTheoremRange,
            citations: vec![CITE_RANGE],
        };
    }
    let threshold = Ratio::from_integer(tb_binding(g));
    match r.ratio().cmp(&threshold) {
        std::cmp::Ordering::Less => TightnessVerdict {
            kind: VerdictKind::SteinFillable,
            citations: vec![CITE_STEIN],
        },
        std::cmp::Ordering::Greater => TightnessVerdict {
            kind: VerdictKind::NonvanishingContactInvariant,
            citations: vec![CITE_BINDING, CITE_CONWAY],
        },
        std::cmp::Ordering::Equal => TightnessVerdict {
            kind: VerdictKind::ExcludedSlope,
            citations: vec![CITE_EXCLUDED],
        },
    }
}

/// Requested surgery: family parameters and a smooth slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurgerySpec {
    pub params: FamilyParams,
    pub r: Slope,
}

/// Surviving contact (−1)-framed 2-handles after the handle slides and
/// cancellations, by chain curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackgroundDescriptor {
    pub normal_form: GenusParity,
    pub one_handles: i64,
    pub two_handles: i64,
    pub cancelled_pairs: i64,
    pub surviving: Vec<SurvivingComponent>,
    pub surviving_total: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivingComponent {
    pub curve: String,
    pub copies: i64,
    pub contact_coefficient: i64,
}

/// Handle bookkeeping for the Stein diagram of the Lefschetz fibration with
/// vanishing cycles `a1^m, a2, ..., a2g, a(2g+1)^n`.
pub fn background_descriptor(params: FamilyParams) -> Result<BackgroundDescriptor> {
    let g = i64::from(params.g);
    if params.g < 1 {
        return Err(Error::InvalidGenus { genus: g, min: 1 });
    }
    let (m, n) = (params.m, params.n);
    let two_handles = m
        .checked_add(n)
        .and_then(|s| s.checked_add(2 * g - 1))
        .ok_or(Error::Overflow("counting 2-handles"))?;
    let one_handles = 2 * g;
    let top = 2 * g + 1;
    let component = |curve: String, copies: i64| SurvivingComponent {
        curve,
        copies,
        contact_coefficient: -1,
    };
    // g >= 2: a3 is slid off and survives; a5, a7, ..., a(2g-1) cancel the
    // odd-indexed 1-handles, one copy each of a1 and a(2g+1) cancels B1 and
    // Bg, and each even a_i cancels A_i. For g = 1 the two B handles
    // coincide, so only a1 is spent on it.
    let mut surviving = Vec::new();
    if g >= 2 {
        surviving.push(component("a3".into(), 1));
        surviving.push(component("a1".into(), m - 1));
        surviving.push(component(format!("a{top}"), n - 1));
    } else {
        surviving.push(component("a1".into(), m - 1));
        surviving.push(component(format!("a{top}"), n));
    }
    surviving.retain(|c| c.copies > 0);
    let surviving_total: i64 = surviving.iter().map(|c| c.copies).sum();
    Ok(BackgroundDescriptor {
        normal_form: if params.g % 2 == 1 {
            GenusParity::Odd
        } else {
            GenusParity::Even
        },
        one_handles,
        two_handles,
        cancelled_pairs: one_handles,
        surviving,
        surviving_total,
    })
}

/// One Legendrian component of the surgery chain on `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainComponent {
    /// Index of the component this one is a push-off of (`None` for `L` itself).
    pub pushoff_of: Option<usize>,
    pub stabilizations: i64,
    /// Stabilizations are all taken negative.
    pub negative_stabilizations: i64,
    pub tb: i64,
    pub contact_coefficient: i64,
    pub smooth_coefficient: i64,
}

/// Surgery on `L` itself when the contact coefficient is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalComponent {
    pub tb: i64,
    pub contact_coefficient: Slope,
    pub smooth_coefficient: Slope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContactDiagram {
    pub g: u32,
    pub m: i64,
    pub n: i64,
    pub r: Slope,
    pub tb_l0: i64,
    #[serde(rename = "tb_L")]
    pub tb_l: i64,
    pub r_prime: Slope,
    pub expansion: Option<CfExpansion>,
    pub chain: Vec<ChainComponent>,
    pub rational_component: Option<RationalComponent>,
    pub background: BackgroundDescriptor,
    pub verdict: VerdictKind,
    pub citations: Vec<&'static str>,
    /// The genus-one case follows the same formulas without a drawn diagram.
    pub extrapolated: bool,
}

/// Stabilizations per component: `|a0 + 1|` for `L`, `|a_i + 2|` after.
pub fn stabilization_counts(exp: &CfExpansion) -> Vec<i64> {
    exp.entries()
        .iter()
        .enumerate()
        .map(|(i, &a)| if i == 0 { (a + 1).abs() } else { (a + 2).abs() })
        .collect()
}

/// Legendrian chain realizing contact `r'` surgery on `L` for `r' < 0`.
pub fn legendrian_chain(tb_l: i64, exp: &CfExpansion) -> Vec<ChainComponent> {
    let mut tb = tb_l;
    stabilization_counts(exp)
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            tb -= s;
            ChainComponent {
                pushoff_of: i.checked_sub(1),
                stabilizations: s,
                negative_stabilizations: s,
                tb,
                contact_coefficient: -1,
                smooth_coefficient: tb - 1,
            }
        })
        .collect()
}

pub fn compile_contact_diagram(spec: SurgerySpec) -> Result<ContactDiagram> {
    let FamilyParams { g, m, n } = spec.params;
    if g < 1 {
        return Err(Error::InvalidGenus {
            genus: g.into(),
            min: 1,
        });
    }
    let framing = contact_coefficient(g, spec.r)?;
    let verdict = tightness_verdict(g, spec.r, m, n);
    let background = background_descriptor(spec.params)?;

    let (expansion, chain, rational_component) = match verdict.kind {
        VerdictKind::SteinFillable => {
            let exp = negative_cf_expansion(framing.r_prime)?;
            let chain = legendrian_chain(framing.tb_l, &exp);
            (Some(exp), chain, None)
        }
        VerdictKind::NonvanishingContactInvariant => (
            None,
            Vec::new(),
            Some(RationalComponent {
                tb: framing.tb_l,
                contact_coefficient: framing.r_prime,
                smooth_coefficient: spec.r,
            }),
        ),
        VerdictKind::ExcludedSlope | VerdictKind::OutOfTheoremRange => (None, Vec::new(), None),
    };

    Ok(ContactDiagram {
        g,
        m,
        n,
        r: spec.r,
        tb_l0: framing.tb_l0,
        tb_l: framing.tb_l,
        r_prime: framing.r_prime,
        expansion,
        chain,
        rational_component,
        background,
        verdict: verdict.kind,
        citations: verdict.citations,
        extrapolated: g == 1,
    })
}

/// Smooth integer-chain expansion of the section surgery `r`: the compiled
/// contact expansion shifted by `tb(L)` when `r' < 0`, otherwise the direct
/// expansion of `r`.
pub fn smooth_chain_expansion(g: u32, r: Slope) -> Result<CfExpansion> {
    let framing = contact_coefficient(g, r)?;
    if framing.r_prime.is_negative() {
        negative_cf_expansion(framing.r_prime)?.shift_leading(framing.tb_l)
    } else {
        Ok(minus_continued_fraction(r))
    }
}

/// `H_1(M_φ(r))` from integer surgery on the section followed by a chain of
/// meridional unknots (the slam-dunk expansion of `r`), adjoined to the
/// monodromy presentation of the complement.
pub fn chain_presentation(
    w: &TwistWord,
    exp: &CfExpansion,
    framing: FramingConvention,
) -> IntMatrix {
    let base = complement_presentation(w);
    let fiber = base.rows() - 1;
    let s = fiber;
    let k = exp.len();
    let rows = fiber + 1 + (k - 1);
    let (mu, lambda) = framing.peripheral_images();

    let mut m = IntMatrix::zeros(rows, base.cols() + k);
    for i in 0..base.rows() {
        for j in 0..base.cols() {
            m[(i, j)] = base[(i, j)].clone();
        }
    }
    let col0 = base.cols();
    // Row index of the meridian of the i-th chain component; component 0 is
    // the section itself, whose meridian maps to mu·s.
    let meridian_row = |i: usize| fiber + i;
    let entries = exp.entries();
    // Section: a0·[μ] + [λ] + μ_1
    m[(s, col0)] = BigInt::from(entries[0]) * mu + BigInt::from(lambda);
    if k > 1 {
        m[(meridian_row(1), col0)] += BigInt::one();
    }
    for i in 1..k {
        let col = col0 + i;
        m[(meridian_row(i), col)] += BigInt::from(entries[i]);
        // longitude of unknot i links its two neighbours once
        if i == 1 {
            m[(s, col)] += BigInt::from(mu);
        } else {
            m[(meridian_row(i - 1), col)] += BigInt::one();
        }
        if i + 1 < k {
            m[(meridian_row(i + 1), col)] += BigInt::one();
        }
    }
    m
}

pub fn chain_surgery_h1(
    w: &TwistWord,
    r: Slope,
    framing: FramingConvention,
) -> Result<AbelianGroupInvariant> {
    let exp = smooth_chain_expansion(w.surface().genus(), r)?;
    Ok(AbelianGroupInvariant::cokernel(&chain_presentation(
        w, &exp, framing,
    )))
}

/// Determinant of the tridiagonal linking matrix, by the continuant
/// recursion `K_i = a_i K_(i-1) − K_(i-2)`.
pub fn continuant(exp: &CfExpansion) -> BigInt {
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for &a in exp.entries() {
        let next = BigInt::from(a) * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}
