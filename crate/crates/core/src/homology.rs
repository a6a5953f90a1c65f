//! Integral homology of the fiber, mapping tori and section surgeries.
//!
//! `H_1(Σ_g)` carries the ordered basis `x1, y1, ..., xg, yg` with
//! `<x_i, y_i> = +1`; coordinates are stored in that order. Chain classes:
//!
//! ```text
//! [a1] = x1,  [a(2i)] = y_i,  [a(2i+1)] = x_i + x(i+1),  [a(2g+1)] = x_g
//! ```
//!
//! A twist acts by the transvection `T_c(v) = v + <v, c> c`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{AbelianGroupInvariant, IntMatrix};
use crate::poly::{self, IntPoly};
use crate::surgery::Slope;
use crate::words::{CurveId, SurfaceSpec, TwistWord};

pub type HVector = Vec<BigInt>;

/// The symplectic basis of `H_1(Σ_g)` and its intersection form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticBasis {
    genus: u32,
}

impl SymplecticBasis {
    pub fn new(genus: u32) -> Self {
        Self { genus }
    }

    pub fn for_surface(surface: SurfaceSpec) -> Self {
        Self::new(surface.genus())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn rank(&self) -> usize {
        2 * self.genus as usize
    }

    pub fn symbols(&self) -> Vec<String> {
        (1..=self.genus)
            .flat_map(|i| [format!("x{i}"), format!("y{i}")])
            .collect()
    }

    /// Block-diagonal pairing matrix with blocks `[[0, 1], [-1, 0]]`.
    pub fn pairing_matrix(&self) -> IntMatrix {
        let n = self.rank();
        let mut j = IntMatrix::zeros(n, n);
        for b in 0..self.genus as usize {
            j[(2 * b, 2 * b + 1)] = BigInt::one();
            j[(2 * b + 1, 2 * b)] = -BigInt::one();
        }
        j
    }

    /// `<u, v> = uᵀ J v`.
    pub fn pairing(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        (0..self.genus as usize)
            .map(|b| &u[2 * b] * &v[2 * b + 1] - &u[2 * b + 1] * &v[2 * b])
            .sum()
    }

    /// Homology class of a chain curve.
    pub fn chain_class(&self, curve: CurveId) -> HVector {
        let g = self.genus as usize;
        let i = curve.index() as usize;
        assert!(i >= 1 && i <= 2 * g + 1, "curve outside the chain");
        let mut v = vec![BigInt::zero(); 2 * g];
        let x = |k: usize| 2 * (k - 1);
        let y = |k: usize| 2 * (k - 1) + 1;
        if i == 1 {
            v[x(1)] = BigInt::one();
        } else if i == 2 * g + 1 {
            v[x(g)] += BigInt::one();
        } else if i.is_multiple_of(2) {
            v[y(i / 2)] = BigInt::one();
        } else {
            let k = (i - 1) / 2;
            v[x(k)] += BigInt::one();
            v[x(k + 1)] += BigInt::one();
        }
        v
    }
}

/// `T_c^k`, the action of `t_c^k` on `H_1`: `v ↦ v + k <v, c> c`.
pub fn transvection_power(c: CurveId, exponent: i64, basis: &SymplecticBasis) -> IntMatrix {
    let n = basis.rank();
    let class = basis.chain_class(c);
    let j = basis.pairing_matrix();
    // <v, c> = (J c)ᵀ v
    let jc = j.mul_vec(&class);
    let k = BigInt::from(exponent);
    let mut t = IntMatrix::identity(n);
    for r in 0..n {
        if class[r].is_zero() {
            continue;
        }
        for s in 0..n {
            t[(r, s)] += &k * &class[r] * &jc[s];
        }
    }
    t
}

pub fn transvection_matrix(c: CurveId, basis: &SymplecticBasis) -> IntMatrix {
    transvection_power(c, 1, basis)
}

/// Apply `t_c^k` to a single vector.
pub fn apply_twist(c: CurveId, exponent: i64, v: &[BigInt], basis: &SymplecticBasis) -> HVector {
    let class = basis.chain_class(c);
    let coeff = basis.pairing(v, &class) * BigInt::from(exponent);
    v.iter().zip(&class).map(|(a, b)| a + &coeff * b).collect()
}

/// The induced map on `H_1` of the closed surface, as a matrix acting on
/// column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticAction {
    basis: SymplecticBasis,
    matrix: IntMatrix,
}

impl SymplecticAction {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> SymplecticBasis {
        self.basis
    }

    pub fn apply(&self, v: &[BigInt]) -> HVector {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &SymplecticAction) -> SymplecticAction {
        SymplecticAction {
            basis: self.basis,
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    /// `Mᵀ J M = J` and `det M = 1`.
    pub fn is_symplectic(&self) -> bool {
        let j = self.basis.pairing_matrix();
        let lhs = self.matrix.transpose().mul(&j).mul(&self.matrix);
        lhs == j && self.matrix.determinant().is_one()
    }

    pub fn characteristic_polynomial(&self) -> IntPoly {
        poly::characteristic_polynomial(&self.matrix)
    }
}

/// Product of transvection powers, rightmost letter applied first.
pub fn word_action(w: &TwistWord) -> SymplecticAction {
    let basis = SymplecticBasis::for_surface(w.surface());
    let mut m = IntMatrix::identity(basis.rank());
    for letter in w.letters() {
        m = m.mul(&transvection_power(
            letter.curve(),
            letter.exponent(),
            &basis,
        ));
    }
    SymplecticAction { basis, matrix: m }
}

/// Outcome of the characteristic-polynomial pseudo-Anosov test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CbVerdict {
    CertifiedPA,
    Inconclusive,
}

/// Evidence gathered by [`casson_bleiler_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CbReport {
    pub verdict: CbVerdict,
    pub characteristic_polynomial: IntPoly,
    pub irreducible: bool,
    pub power_of: Option<usize>,
    pub cyclotomic_factors: Vec<u64>,
    /// Graeffe squarings needed to exhibit a root with `|λ| > 1`.
    pub expanding_root_after: Option<u32>,
}

const SIEVE_PRIMES: usize = 120;
const GRAEFFE_STEPS: u32 = 24;

/// Sufficient homological test for pseudo-Anosov: the characteristic
/// polynomial of the action is irreducible, not a polynomial in `λ^k`
/// (k ≥ 2), has no cyclotomic factor, and has a root off the unit circle.
/// Never reports "not pseudo-Anosov".
pub fn casson_bleiler_check(w: &TwistWord) -> CbReport {
    let action = word_action(w);
    let p = action.characteristic_polynomial();
    let irreducible = poly::proven_irreducible(&p, SIEVE_PRIMES);
    let power_of = p.is_polynomial_in_power();
    let cyclotomic_factors = poly::cyclotomic_divisors(&p);
    let expanding_root_after = poly::certify_root_outside_unit_circle(&p, GRAEFFE_STEPS);
    let certified = irreducible
        && power_of.is_none()
        && cyclotomic_factors.is_empty()
        && expanding_root_after.is_some();
    CbReport {
        verdict: if certified {
            CbVerdict::CertifiedPA
        } else {
            CbVerdict::Inconclusive
        },
        characteristic_polynomial: p,
        irreducible,
        power_of,
        cyclotomic_factors,
        expanding_root_after,
    }
}

/// `(φ_* − I)` as a relation matrix on the fiber generators.
fn fiber_relations(w: &TwistWord) -> IntMatrix {
    let action = word_action(w);
    let n = action.basis.rank();
    action.matrix.sub(&IntMatrix::identity(n))
}

/// `H_1(M_φ) = coker(φ_* − I) ⊕ Z`, the extra summand from the base circle.
pub fn mapping_torus_h1(w: &TwistWord) -> AbelianGroupInvariant {
    let mut g = AbelianGroupInvariant::cokernel(&fiber_relations(w));
    g.free_rank += 1;
    g
}

/// Which curves on the boundary torus of the section neighbourhood a slope
/// `p/q` is measured against, recorded by their images in `H_1` of the
/// complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FramingConvention {
    /// Meridian of the binding ↦ section class `s`; page-framed longitude
    /// (the page boundary) ↦ 0. The surgery relation is `p·s`.
    #[default]
    BindingPage,
    /// Meridian of the section (the puncture loop of a fiber) ↦ 0;
    /// fibration-framed longitude ↦ `s`. The surgery relation is `q·s`.
    SectionFiber,
}

impl FramingConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            FramingConvention::BindingPage => "binding_page",
            FramingConvention::SectionFiber => "section_fiber",
        }
    }

    /// Coefficients of `s` in the images of `(μ, λ)`.
    pub fn peripheral_images(&self) -> (i64, i64) {
        match self {
            FramingConvention::BindingPage => (1, 0),
            FramingConvention::SectionFiber => (0, 1),
        }
    }
}

impl fmt::Display for FramingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FramingConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binding_page" => Ok(Self::BindingPage),
            "section_fiber" => Ok(Self::SectionFiber),
            other => Err(crate::error::parse_err(
                "framing convention",
                other,
                "expected binding_page or section_fiber",
            )),
        }
    }
}

/// Presentation of `H_1` of the section complement: rows are the fiber
/// generators followed by `s`; columns are the monodromy relations.
pub(crate) fn complement_presentation(w: &TwistWord) -> IntMatrix {
    let rel = fiber_relations(w);
    let n = rel.rows();
    let mut out = IntMatrix::zeros(n + 1, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = rel[(i, j)].clone();
        }
    }
    out
}

/// The presentation matrix of `H_1(M_φ(r))` before reduction.
pub fn surgered_presentation(w: &TwistWord, r: Slope, framing: FramingConvention) -> IntMatrix {
    let base = complement_presentation(w);
    let n = base.rows() - 1;
    let (mu, lambda) = framing.peripheral_images();
    let mut surgery = IntMatrix::zeros(n + 1, 1);
    // p·[μ] + q·[λ]
    surgery[(n, 0)] = BigInt::from(r.numer()) * mu + BigInt::from(r.denom()) * lambda;
    base.hstack(&surgery)
}

/// `H_1` of the manifold obtained by `r`-surgery along the section.
pub fn surgered_h1(w: &TwistWord, r: Slope, framing: FramingConvention) -> AbelianGroupInvariant {
    AbelianGroupInvariant::cokernel(&surgered_presentation(w, r, framing))
}

/// `true` when `±v == u`.
pub fn equal_up_to_sign(u: &[BigInt], v: &[BigInt]) -> bool {
    u == v || u.iter().zip(v).all(|(a, b)| a == &-b)
}

/// Content (gcd of entries) of a class; primitive classes have content 1.
pub fn content(v: &[BigInt]) -> BigInt {
    use num_integer::Integer;
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{build_monodromy, conjugation_normal_form, FamilyParams};

    fn s(g: u32) -> SurfaceSpec {
        SurfaceSpec::closed(g).unwrap()
    }

    fn v(xs: &[i64]) -> HVector {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pairing_matrix_is_unimodular_skew() {
        for g in 1..=5 {
            let b = SymplecticBasis::new(g);
            let j = b.pairing_matrix();
            assert_eq!(j.transpose(), IntMatrix::zeros(j.rows(), j.cols()).sub(&j));
            assert!(j.determinant().is_one());
        }
    }

    #[test]
    fn chain_classes_realize_chain_pairings() {
        for g in 1..=6 {
            let surf = s(g);
            let b = SymplecticBasis::new(g);
            for a in surf.curves() {
                for c in surf.curves() {
                    let p = b.pairing(&b.chain_class(a), &b.chain_class(c)).abs();
                    let expected = i64::from(a.is_adjacent(c));
                    assert_eq!(p, BigInt::from(expected), "g={g} {a} {c}");
                }
            }
        }
    }

    #[test]
    fn transvection_examples() {
        let b = SymplecticBasis::new(2);
        let a1 = s(2).curve(1).unwrap();
        let t = transvection_matrix(a1, &b);
        assert_eq!(t.mul_vec(&b.chain_class(a1)), b.chain_class(a1));
        // y1 -> y1 - x1
        assert_eq!(t.mul_vec(&v(&[0, 1, 0, 0])), v(&[-1, 1, 0, 0]));
        // x2 fixed
        assert_eq!(t.mul_vec(&v(&[0, 0, 1, 0])), v(&[0, 0, 1, 0]));
        assert_eq!(apply_twist(a1, 1, &v(&[0, 1, 0, 0]), &b), v(&[-1, 1, 0, 0]));
    }

    #[test]
    fn word_action_examples() {
        let id = TwistWord::identity(s(3));
        assert_eq!(*word_action(&id).matrix(), IntMatrix::identity(6));
        let w = TwistWord::parse(s(2), "a1 a1^-1").unwrap();
        assert_eq!(*word_action(&w).matrix(), IntMatrix::identity(4));

        let anosov = TwistWord::parse(s(1), "a1 a2^-1").unwrap();
        let a = word_action(&anosov);
        assert_eq!(a.matrix().trace(), BigInt::from(3));
        assert_eq!(
            a.characteristic_polynomial(),
            IntPoly::from_i64(&[1, -3, 1])
        );
    }

    #[test]
    fn casson_bleiler_examples() {
        let anosov = TwistWord::parse(s(1), "a1 a2^-1").unwrap();
        assert_eq!(
            casson_bleiler_check(&anosov).verdict,
            CbVerdict::CertifiedPA
        );
        for g in 1..=3 {
            let id = TwistWord::identity(s(g));
            let r = casson_bleiler_check(&id);
            assert_eq!(r.verdict, CbVerdict::Inconclusive);
            assert_eq!(r.cyclotomic_factors, vec![1]);
            let t = TwistWord::twist(s(g), 1, 5).unwrap();
            assert_eq!(casson_bleiler_check(&t).verdict, CbVerdict::Inconclusive);
        }
    }

    #[test]
    fn mapping_torus_examples() {
        assert_eq!(
            mapping_torus_h1(&TwistWord::identity(s(2))),
            AbelianGroupInvariant::free(5)
        );
        assert_eq!(
            mapping_torus_h1(&TwistWord::twist(s(2), 1, 1).unwrap()),
            AbelianGroupInvariant::free(4)
        );
        let p = FamilyParams::new(2, 1, 1);
        let a = mapping_torus_h1(&build_monodromy(p).unwrap());
        let b = mapping_torus_h1(&conjugation_normal_form(p).unwrap().word);
        assert_eq!(a, b);
    }

    #[test]
    fn surgered_examples() {
        let id2 = TwistWord::identity(s(2));
        let r3 = Slope::new(3, 1).unwrap();
        let h = surgered_h1(&id2, r3, FramingConvention::BindingPage);
        assert_eq!(h.free_rank, 4);
        assert_eq!(h.torsion, v(&[3]));
        for g in 1..=4 {
            let id = TwistWord::identity(s(g));
            let h = surgered_h1(
                &id,
                Slope::new(1, 1).unwrap(),
                FramingConvention::BindingPage,
            );
            assert_eq!(h, AbelianGroupInvariant::free(2 * g as usize));
        }
        // p = 0 degenerates to the mapping torus itself
        let w = build_monodromy(FamilyParams::new(3, 2, 1)).unwrap();
        assert_eq!(
            surgered_h1(
                &w,
                Slope::new(0, 1).unwrap(),
                FramingConvention::BindingPage
            ),
            mapping_torus_h1(&w)
        );
    }

    #[test]
    fn section_fiber_convention_kills_denominator() {
        let id = TwistWord::identity(s(2));
        let h = surgered_h1(
            &id,
            Slope::new(7, 2).unwrap(),
            FramingConvention::SectionFiber,
        );
        assert_eq!(h.free_rank, 4);
        assert_eq!(h.torsion, v(&[2]));
    }

    #[test]
    fn convention_round_trips_through_text() {
        for c in [
            FramingConvention::BindingPage,
            FramingConvention::SectionFiber,
        ] {
            assert_eq!(c.as_str().parse::<FramingConvention>().unwrap(), c);
        }
        assert!("meridian".parse::<FramingConvention>().is_err());
    }
}
