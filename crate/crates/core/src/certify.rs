//! Pseudo-Anosov certificates from filling orbits, and the hyperbolicity
//! report built on them.
//!
//! Orbits are computed symbolically with a small set of exact identities
//! for twists along chain curves:
//!
//! ```text
//! t_c^k(c) = c
//! t_c^k(d) = d                         c, d disjoint
//! t_c^k(d) = T(c^k, d)                 c, d adjacent
//! t_c^k(T(c^e, d)) = T(c^(e+k), d)     (= d when e + k = 0)
//! t_c^k(T(x^e, d)) = T(x^e, d)         c disjoint from x and d
//! t_d^ε(T(x^ε, d)) = x                 ε = ±1, x, d adjacent
//! ```
//!
//! Anything else is left unresolved and the computation reports the stuck
//! expression instead of guessing.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::curves::{build_chain_system, check_filling};
use crate::error::{Error, Result};
use crate::homology::{
    casson_bleiler_check, transvection_power, CbVerdict, HVector, SymplecticBasis,
};
use crate::surgery::Slope;
use crate::words::{build_monodromy, CurveId, FamilyParams, TwistLetter, TwistWord};

/// Length bound of the unknown exceptional window of exponents.
pub const WINDOW_LENGTH_MAX: u32 = 7;

pub const FATHI_STATEMENT: &str =
    "t_gamma^m f is pseudo-Anosov for all m outside some set of at most 7 consecutive integers";

pub const SURGERY_STATEMENT: &str =
    "M_phi(r) is hyperbolic for all but finitely many slopes r; the exceptional slopes are not computed";

/// A chain curve, or the image `t_twist^exponent(target)` of a chain curve
/// under a twist along an adjacent one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolicCurve {
    Named(CurveId),
    Twisted {
        twist: CurveId,
        exponent: i64,
        target: CurveId,
    },
}

impl SymbolicCurve {
    pub fn named(&self) -> Option<CurveId> {
        match *self {
            SymbolicCurve::Named(c) => Some(c),
            SymbolicCurve::Twisted { .. } => None,
        }
    }

    /// Twisted values only ever pair adjacent chain curves.
    pub fn is_well_formed(&self) -> bool {
        match *self {
            SymbolicCurve::Named(_) => true,
            SymbolicCurve::Twisted {
                twist,
                exponent,
                target,
            } => twist.is_adjacent(target) && exponent != 0,
        }
    }

    /// Homology class of the curve, oriented as its chain curve.
    pub fn homology_class(&self, basis: &SymplecticBasis) -> HVector {
        match *self {
            SymbolicCurve::Named(c) => basis.chain_class(c),
            SymbolicCurve::Twisted {
                twist,
                exponent,
                target,
            } => transvection_power(twist, exponent, basis).mul_vec(&basis.chain_class(target)),
        }
    }

    /// Applies one twist letter, or returns `None` when no rule matches.
    pub fn apply(&self, letter: TwistLetter) -> Option<SymbolicCurve> {
        let (c, k) = (letter.curve(), letter.exponent());
        let out = match *self {
            SymbolicCurve::Named(d) if c == d || c.is_disjoint(d) => *self,
            SymbolicCurve::Named(d) => SymbolicCurve::Twisted {
                twist: c,
                exponent: k,
                target: d,
            },
            SymbolicCurve::Twisted { twist, target, .. }
                if c.is_disjoint(twist) && c.is_disjoint(target) =>
            {
                *self
            }
            SymbolicCurve::Twisted {
                twist,
                exponent,
                target,
            } if c == twist => match exponent.checked_add(k)? {
                0 => SymbolicCurve::Named(target),
                e => SymbolicCurve::Twisted {
                    twist,
                    exponent: e,
                    target,
                },
            },
            SymbolicCurve::Twisted {
                twist,
                exponent,
                target,
            } if c == target && exponent == k && k.abs() == 1 => SymbolicCurve::Named(twist),
            SymbolicCurve::Twisted { .. } => return None,
        };
        debug_assert!(out.is_well_formed());
        Some(out)
    }

    /// Image under a whole word, rightmost letter first.
    pub fn apply_word(&self, w: &TwistWord) -> std::result::Result<SymbolicCurve, StuckState> {
        let mut cur = *self;
        for (pos, &letter) in w.letters().iter().enumerate().rev() {
            cur = cur.apply(letter).ok_or(StuckState {
                letter_position: pos,
                letter,
                expression: cur,
            })?;
        }
        Ok(cur)
    }
}

impl fmt::Display for SymbolicCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicCurve::Named(c) => write!(f, "{c}"),
            SymbolicCurve::Twisted {
                twist,
                exponent: 1,
                target,
            } => write!(f, "T({twist}, {target})"),
            SymbolicCurve::Twisted {
                twist,
                exponent,
                target,
            } => write!(f, "T({twist}^{exponent}, {target})"),
        }
    }
}

impl Serialize for SymbolicCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A letter that no rule could push through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StuckState {
    pub letter_position: usize,
    pub letter: TwistLetter,
    pub expression: SymbolicCurve,
}

impl fmt::Display for StuckState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} applied to {} (letter {})",
            self.letter, self.expression, self.letter_position
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitStop {
    /// All requested iterates were computed.
    MaxIters,
    /// The last iterate repeats an earlier curve (or γ itself).
    Closed,
    /// The last iterate is not a chain curve.
    Unnamed,
    Stuck {
        iterate: usize,
        #[serde(serialize_with = "serialize_display")]
        state: StuckState,
    },
}

fn serialize_display<T: fmt::Display, S: Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `f(γ), f²(γ), ...` as far as the rules resolve them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicOrbit {
    pub gamma: CurveId,
    pub iterates: Vec<SymbolicCurve>,
    pub stop: OrbitStop,
}

impl SymbolicOrbit {
    /// Leading run of iterates that are chain curves.
    pub fn named_prefix(&self) -> Vec<CurveId> {
        self.iterates
            .iter()
            .map_while(SymbolicCurve::named)
            .collect()
    }

    pub fn is_resolved(&self) -> bool {
        !matches!(self.stop, OrbitStop::Stuck { .. } | OrbitStop::Unnamed)
    }
}

pub fn symbolic_orbit(f: &TwistWord, gamma: CurveId, max_iters: usize) -> Result<SymbolicOrbit> {
    let gamma = f.surface().curve(gamma.index())?;
    let mut iterates: Vec<SymbolicCurve> = Vec::new();
    let mut cur = SymbolicCurve::Named(gamma);
    let stop = loop {
        if iterates.len() >= max_iters {
            break OrbitStop::MaxIters;
        }
        match cur.apply_word(f) {
            Err(state) => {
                break OrbitStop::Stuck {
                    iterate: iterates.len() + 1,
                    state,
                }
            }
            Ok(next) => {
                let repeat = next == SymbolicCurve::Named(gamma) || iterates.contains(&next);
                iterates.push(next);
                if next.named().is_none() {
                    break OrbitStop::Unnamed;
                }
                if repeat {
                    break OrbitStop::Closed;
                }
                cur = next;
            }
        }
    };
    Ok(SymbolicOrbit {
        gamma,
        iterates,
        stop,
    })
}

/// A filling orbit and the existential window statement it supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaCertificate {
    pub g: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub gamma: CurveId,
    /// Iterates `f(γ), ..., f^k(γ)` with `k = fills_after`.
    pub orbit: Vec<CurveId>,
    pub fills_after: usize,
    pub disk_count: usize,
    pub window_length_max: u32,
    /// The excluded window exists but its location is never computed.
    pub window_known: bool,
    pub statement: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InconclusiveCertificate {
    pub g: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub gamma: CurveId,
    pub orbit: Vec<SymbolicCurve>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateOutcome {
    Certified(PaCertificate),
    Inconclusive(InconclusiveCertificate),
}

impl CertificateOutcome {
    pub fn certificate(&self) -> Option<&PaCertificate> {
        match self {
            CertificateOutcome::Certified(c) => Some(c),
            CertificateOutcome::Inconclusive(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.certificate().is_some()
    }
}

/// Iterates `f` on `gamma` and certifies as soon as `γ` together with the
/// resolved iterates fills the closed surface.
pub fn certify_orbit(
    f: &TwistWord,
    gamma: CurveId,
    max_iters: usize,
) -> Result<CertificateOutcome> {
    certify_orbit_with(f, gamma, max_iters, None)
}

fn certify_orbit_with(
    f: &TwistWord,
    gamma: CurveId,
    max_iters: usize,
    n: Option<i64>,
) -> Result<CertificateOutcome> {
    let g = f.surface().genus();
    let orbit = symbolic_orbit(f, gamma, max_iters)?;
    let named = orbit.named_prefix();
    let mut indices = vec![orbit.gamma.index()];
    for (i, c) in named.iter().enumerate() {
        indices.push(c.index());
        let report = check_filling(&build_chain_system(g, &indices)?);
        if let (true, Some(disks)) = (report.fills, report.disk_count) {
            return Ok(CertificateOutcome::Certified(PaCertificate {
                g,
                n,
                gamma: orbit.gamma,
                orbit: named[..=i].to_vec(),
                fills_after: i + 1,
                disk_count: disks,
                window_length_max: WINDOW_LENGTH_MAX,
                window_known: false,
                statement: FATHI_STATEMENT,
            }));
        }
    }
    let reason = match &orbit.stop {
        OrbitStop::Stuck { iterate, state } => {
            format!("iterate {iterate} is unresolved at {state}")
        }
        OrbitStop::Unnamed => format!("iterate {} is not a chain curve", orbit.iterates.len()),
        OrbitStop::Closed => "orbit closed up without filling".to_string(),
        OrbitStop::MaxIters => format!("orbit does not fill within {max_iters} iterates"),
    };
    Ok(CertificateOutcome::Inconclusive(InconclusiveCertificate {
        g,
        n,
        gamma: orbit.gamma,
        orbit: orbit.iterates,
        reason,
    }))
}

/// `f = t_{a1} t_{a2} ... t_{a2g} t_{a(2g+1)}^n` with `γ = a1`, iterated
/// at most `2g − 1` times.
pub fn fathi_word(g: u32, n: i64) -> Result<TwistWord> {
    if g < 2 {
        return Err(Error::InvalidGenus {
            genus: g.into(),
            min: 2,
        });
    }
    build_monodromy(FamilyParams::new(g, 1, n))
}

pub fn fathi_certificate(g: u32, n: i64) -> Result<CertificateOutcome> {
    let f = fathi_word(g, n)?;
    let gamma = f.surface().curve(1)?;
    certify_orbit_with(&f, gamma, 2 * g as usize - 1, Some(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PaBasis {
    FathiCertificate,
    CassonBleiler,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BundleHyperbolic {
    Yes,
    YesForAllButWindow,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperbolicityReport {
    pub g: u32,
    pub m: i64,
    pub n: i64,
    pub r: Slope,
    /// `m − 1`: the family word is `t_{a1}^(m−1) f`, so this is the exponent
    /// the window statement speaks about.
    pub fathi_exponent: i64,
    pub pa_basis: PaBasis,
    pub bundle_hyperbolic: BundleHyperbolic,
    pub casson_bleiler: CbVerdict,
    pub certificate: Option<PaCertificate>,
    pub surgery_statement: &'static str,
}

pub fn hyperbolicity_report(params: FamilyParams, r: Slope) -> Result<HyperbolicityReport> {
    let fathi = fathi_certificate(params.g, params.n)?;
    let fathi_exponent = params.m.checked_sub(1).ok_or(Error::Overflow("m - 1"))?;
    let cb = casson_bleiler_check(&build_monodromy(params)?).verdict;
    let certificate = fathi.certificate().cloned();
    let (pa_basis, bundle_hyperbolic) = match (cb, &certificate) {
        (CbVerdict::CertifiedPA, _) => (PaBasis::CassonBleiler, BundleHyperbolic::Yes),
        (CbVerdict::Inconclusive, Some(_)) => (
            PaBasis::FathiCertificate,
            BundleHyperbolic::YesForAllButWindow,
        ),
        (CbVerdict::Inconclusive, None) => (PaBasis::None, BundleHyperbolic::Unknown),
    };
    Ok(HyperbolicityReport {
        g: params.g,
        m: params.m,
        n: params.n,
        r,
        fathi_exponent,
        pa_basis,
        bundle_hyperbolic,
        casson_bleiler: cb,
        certificate,
        surgery_statement: SURGERY_STATEMENT,
    })
}
