//! Words in Dehn twists along the standard chain a1, ..., a(2g+1).
//!
//! Composition order: the leftmost letter is the outermost map, so the
//! rightmost letter is applied first to a curve or homology class. The
//! word `a1 a2` therefore sends `x` to `t_{a1}(t_{a2}(x))`.
//!
//! Positive twists are right-handed. Only twists along chain curves are
//! representable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};

/// A closed genus-g surface, or the same surface with one puncture (a page
/// of an open book).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceSpec {
    #[serde(rename = "g")]
    genus: u32,
    punctures: u8,
}

impl SurfaceSpec {
    pub fn new(genus: u32, punctures: u8) -> Result<Self> {
        if genus < 1 {
            return Err(Error::InvalidGenus {
                genus: genus.into(),
                min: 1,
            });
        }
        if punctures > 1 {
            return Err(Error::InvalidPunctures(punctures));
        }
        Ok(Self { genus, punctures })
    }

    pub fn closed(genus: u32) -> Result<Self> {
        Self::new(genus, 0)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> u8 {
        self.punctures
    }

    /// Number of curves in the chain, 2g + 1.
    pub fn chain_len(&self) -> u32 {
        2 * self.genus + 1
    }

    pub fn curve(&self, index: u32) -> Result<CurveId> {
        if index == 0 || index > self.chain_len() {
            return Err(Error::CurveOutOfRange {
                index: index.into(),
                max: self.chain_len(),
            });
        }
        Ok(CurveId(index))
    }

    pub fn curves(&self) -> impl Iterator<Item = CurveId> {
        (1..=self.chain_len()).map(CurveId)
    }

    /// The surface underlying this one with the puncture filled in.
    pub fn closed_up(&self) -> Self {
        Self {
            genus: self.genus,
            punctures: 0,
        }
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.punctures == 0 {
            write!(f, "Sigma_{}", self.genus)
        } else {
            write!(f, "Sigma_{}^{}", self.genus, self.punctures)
        }
    }
}

/// Index of a chain curve `a_index`. Only meaningful relative to a surface;
/// obtain checked values from [`SurfaceSpec::curve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveId(u32);

impl CurveId {
    pub fn index(self) -> u32 {
        self.0
    }

    /// Chain curves meet exactly once when their indices are consecutive.
    pub fn is_adjacent(self, other: CurveId) -> bool {
        self.0.abs_diff(other.0) == 1
    }

    /// Chain curves with indices two or more apart are disjoint.
    pub fn is_disjoint(self, other: CurveId) -> bool {
        self.0.abs_diff(other.0) >= 2
    }

    /// Geometric intersection number within the chain.
    pub fn intersection(self, other: CurveId) -> u32 {
        u32::from(self.is_adjacent(other))
    }

    pub(crate) fn unchecked(index: u32) -> Self {
        CurveId(index)
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl Serialize for CurveId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CurveId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.strip_prefix('a')
            .and_then(|i| i.parse::<u32>().ok())
            .filter(|&i| i >= 1)
            .map(CurveId::unchecked)
            .ok_or_else(|| serde::de::Error::custom(format!("bad curve name {text:?}")))
    }
}

/// `t_curve^exponent`, with a nonzero exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistLetter {
    curve: CurveId,
    exponent: i64,
}

impl TwistLetter {
    pub fn new(curve: CurveId, exponent: i64) -> Result<Self> {
        if exponent == 0 || exponent == i64::MIN {
            return Err(Error::InvalidExponent(exponent));
        }
        Ok(Self { curve, exponent })
    }

    pub fn curve(&self) -> CurveId {
        self.curve
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn inverse(&self) -> Self {
        Self {
            curve: self.curve,
            exponent: -self.exponent,
        }
    }
}

impl fmt::Display for TwistLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.curve)
        } else {
            write!(f, "{}^{}", self.curve, self.exponent)
        }
    }
}

/// A freely reduced word in chain twists over a fixed surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "WordJson", try_from = "WordJson")]
pub struct TwistWord {
    surface: SurfaceSpec,
    letters: Vec<TwistLetter>,
}

impl TwistWord {
    pub fn identity(surface: SurfaceSpec) -> Self {
        Self {
            surface,
            letters: Vec::new(),
        }
    }

    pub fn twist(surface: SurfaceSpec, index: u32, exponent: i64) -> Result<Self> {
        let curve = surface.curve(index)?;
        free_reduce(surface, [TwistLetter::new(curve, exponent)?])
    }

    /// Builds a word from `(index, exponent)` pairs; zero exponents are dropped.
    pub fn from_pairs(surface: SurfaceSpec, pairs: &[(u32, i64)]) -> Result<Self> {
        let mut letters = Vec::with_capacity(pairs.len());
        for &(index, exponent) in pairs {
            let curve = surface.curve(index)?;
            if exponent != 0 {
                letters.push(TwistLetter::new(curve, exponent)?);
            }
        }
        free_reduce(surface, letters)
    }

    /// Parses the textual form `"a1^2 a2 a3 a5^-1"`, with `"1"` for the identity.
    pub fn parse(surface: SurfaceSpec, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        if text.trim() == "1" {
            return Ok(Self::identity(surface));
        }
        for token in text.split_whitespace() {
            let body = token.strip_prefix('a').ok_or_else(|| {
                parse_err("twist letter", token, "expected a<index>[^<exponent>]")
            })?;
            let (index, exponent) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let index: u32 = index
                .parse()
                .map_err(|e| parse_err("curve index", token, format!("{e}")))?;
            let exponent: i64 = exponent
                .parse()
                .map_err(|e| parse_err("twist exponent", token, format!("{e}")))?;
            pairs.push((index, exponent));
        }
        Self::from_pairs(surface, &pairs)
    }

    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }

    pub fn letters(&self) -> &[TwistLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `(index, exponent)` pairs, leftmost first.
    pub fn pairs(&self) -> Vec<(u32, i64)> {
        self.letters
            .iter()
            .map(|l| (l.curve.index(), l.exponent))
            .collect()
    }

    /// `self · other`: `other` acts first.
    pub fn compose(&self, other: &TwistWord) -> Result<TwistWord> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch {
                left: self.surface.to_string(),
                right: other.surface.to_string(),
            });
        }
        free_reduce(
            self.surface,
            self.letters.iter().chain(other.letters.iter()).copied(),
        )
    }

    pub fn invert(&self) -> TwistWord {
        TwistWord {
            surface: self.surface,
            letters: self
                .letters
                .iter()
                .rev()
                .map(TwistLetter::inverse)
                .collect(),
        }
    }

    /// Same word regarded on the closed surface.
    pub fn on_closed_surface(&self) -> TwistWord {
        TwistWord {
            surface: self.surface.closed_up(),
            letters: self.letters.clone(),
        }
    }

    /// Reduces the word modulo commutation of twists along disjoint chain
    /// curves (and free cancellation). Two words with equal reductions are
    /// equal mapping classes.
    pub fn commutation_reduce(&self) -> Result<TwistWord> {
        let mut letters = self.letters.clone();
        'restart: loop {
            for i in 0..letters.len() {
                let curve = letters[i].curve;
                for j in i + 1..letters.len() {
                    if letters[j].curve == curve {
                        let merged = letters[i]
                            .exponent
                            .checked_add(letters[j].exponent)
                            .ok_or(Error::Overflow("merging twist exponents"))?;
                        letters.remove(j);
                        if merged == 0 {
                            letters.remove(i);
                        } else {
                            letters[i] = TwistLetter::new(curve, merged)?;
                        }
                        continue 'restart;
                    }
                    if !letters[j].curve.is_disjoint(curve) {
                        break;
                    }
                }
            }
            break;
        }
        Ok(TwistWord {
            surface: self.surface,
            letters,
        })
    }

    /// Equality in the partially commutative group where twists along
    /// disjoint chain curves commute. Sound but incomplete for equality of
    /// mapping classes (braid relations are not used).
    pub fn commutation_equivalent(&self, other: &TwistWord) -> Result<bool> {
        Ok(self
            .compose(&other.invert())?
            .commutation_reduce()?
            .is_empty())
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, letter) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// Merges adjacent letters on the same curve and drops zero exponents.
pub fn free_reduce(
    surface: SurfaceSpec,
    letters: impl IntoIterator<Item = TwistLetter>,
) -> Result<TwistWord> {
    let mut out: Vec<TwistLetter> = Vec::new();
    for letter in letters {
        if letter.curve.index() > surface.chain_len() {
            return Err(Error::CurveOutOfRange {
                index: letter.curve.index().into(),
                max: surface.chain_len(),
            });
        }
        match out.last_mut() {
            Some(top) if top.curve == letter.curve => {
                let merged = top
                    .exponent
                    .checked_add(letter.exponent)
                    .ok_or(Error::Overflow("merging twist exponents"))?;
                if merged == 0 {
                    out.pop();
                } else {
                    *top = TwistLetter::new(letter.curve, merged)?;
                }
            }
            _ => out.push(letter),
        }
    }
    Ok(TwistWord {
        surface,
        letters: out,
    })
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    g: u32,
    punctures: u8,
    letters: Vec<(u32, i64)>,
}

impl From<TwistWord> for WordJson {
    fn from(w: TwistWord) -> Self {
        WordJson {
            g: w.surface.genus,
            punctures: w.surface.punctures,
            letters: w.pairs(),
        }
    }
}

impl TryFrom<WordJson> for TwistWord {
    type Error = Error;

    fn try_from(j: WordJson) -> Result<Self> {
        let surface = SurfaceSpec::new(j.g, j.punctures)?;
        TwistWord::from_pairs(surface, &j.letters)
    }
}

/// Parameters `(g, m, n)` of the monodromy family
/// `t_{a1}^m t_{a2} ... t_{a2g} t_{a(2g+1)}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub g: u32,
    pub m: i64,
    pub n: i64,
}

impl FamilyParams {
    pub fn new(g: u32, m: i64, n: i64) -> Self {
        Self { g, m, n }
    }

    pub fn surface(&self) -> Result<SurfaceSpec> {
        SurfaceSpec::closed(self.g)
    }
}

/// `t_{a1}^m t_{a2} ... t_{a2g} t_{a(2g+1)}^n` on the closed surface.
pub fn build_monodromy(params: FamilyParams) -> Result<TwistWord> {
    let surface = params.surface()?;
    let top = surface.chain_len();
    let mut pairs = vec![(1, params.m)];
    pairs.extend((2..top).map(|i| (i, 1)));
    pairs.push((top, params.n));
    TwistWord::from_pairs(surface, &pairs)
}

/// Which displayed conjugation produced a normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusParity {
    Odd,
    Even,
}

/// A parity-dependent replacement monodromy together with the conjugation
/// realizing it: `word = left · φ · conjugator` as reduced words, and
/// `left` agrees with `conjugator⁻¹` up to commuting disjoint twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatedMonodromy {
    pub parity: GenusParity,
    pub word: TwistWord,
    pub left: TwistWord,
    pub conjugator: TwistWord,
}

/// Odd g: `t_{a2} ... t_{a2g} t_{a(2g+1)}^n t_{a1}^m = t_{a1}^{-m} φ t_{a1}^m`.
/// Even g: `t_{a(2g+1)}^n t_{a2} ... t_{a2g} t_{a1}^m
///          = t_{a(2g+1)}^n t_{a1}^{-m} φ t_{a(2g+1)}^{-n} t_{a1}^m`.
pub fn conjugation_normal_form(params: FamilyParams) -> Result<ConjugatedMonodromy> {
    let surface = params.surface()?;
    let top = surface.chain_len();
    let (m, n) = (params.m, params.n);
    let middle: Vec<(u32, i64)> = (2..top).map(|i| (i, 1)).collect();
    let neg_m = m.checked_neg().ok_or(Error::Overflow("negating m"))?;
    let neg_n = n.checked_neg().ok_or(Error::Overflow("negating n"))?;

    if params.g % 2 == 1 {
        let mut pairs = middle;
        pairs.push((top, n));
        pairs.push((1, m));
        let conjugator = TwistWord::from_pairs(surface, &[(1, m)])?;
        Ok(ConjugatedMonodromy {
            parity: GenusParity::Odd,
            word: TwistWord::from_pairs(surface, &pairs)?,
            left: conjugator.invert(),
            conjugator,
        })
    } else {
        let mut pairs = vec![(top, n)];
        pairs.extend(middle);
        pairs.push((1, m));
        Ok(ConjugatedMonodromy {
            parity: GenusParity::Even,
            word: TwistWord::from_pairs(surface, &pairs)?,
            left: TwistWord::from_pairs(surface, &[(top, n), (1, neg_m)])?,
            conjugator: TwistWord::from_pairs(surface, &[(top, neg_n), (1, m)])?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(g: u32) -> SurfaceSpec {
        SurfaceSpec::closed(g).unwrap()
    }

    #[test]
    fn monodromy_letters() {
        let w = build_monodromy(FamilyParams::new(3, 2, 1)).unwrap();
        assert_eq!(
            w.pairs(),
            vec![(1, 2), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1)]
        );
        let w = build_monodromy(FamilyParams::new(2, 0, 0)).unwrap();
        assert_eq!(w.pairs(), vec![(2, 1), (3, 1), (4, 1)]);
        let w = build_monodromy(FamilyParams::new(2, 1, 3)).unwrap();
        assert_eq!(w.pairs(), vec![(1, 1), (2, 1), (3, 1), (4, 1), (5, 3)]);
    }

    #[test]
    fn genus_zero_rejected() {
        assert!(matches!(
            build_monodromy(FamilyParams::new(0, 1, 1)),
            Err(Error::InvalidGenus { .. })
        ));
    }

    #[test]
    fn group_operations() {
        let t1 = TwistWord::twist(s(2), 1, 1).unwrap();
        assert!(t1.compose(&t1.invert()).unwrap().is_empty());

        let w = TwistWord::from_pairs(s(2), &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(w.invert().pairs(), vec![(2, -1), (1, -2)]);

        let c = s(2).curve(1).unwrap();
        let d = s(2).curve(2).unwrap();
        let reduced = free_reduce(
            s(2),
            [
                TwistLetter::new(c, 1).unwrap(),
                TwistLetter::new(c, 1).unwrap(),
                TwistLetter::new(d, 1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(reduced.pairs(), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn mismatched_surfaces() {
        let a = TwistWord::twist(s(2), 1, 1).unwrap();
        let b = TwistWord::twist(s(3), 1, 1).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::SurfaceMismatch { .. })));
    }

    #[test]
    fn normal_forms() {
        let nf = conjugation_normal_form(FamilyParams::new(3, 1, 1)).unwrap();
        assert_eq!(nf.parity, GenusParity::Odd);
        assert_eq!(
            nf.word.pairs(),
            vec![(2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1), (1, 1)]
        );

        let nf = conjugation_normal_form(FamilyParams::new(2, 1, 1)).unwrap();
        assert_eq!(nf.parity, GenusParity::Even);
        assert_eq!(
            nf.word.pairs(),
            vec![(5, 1), (2, 1), (3, 1), (4, 1), (1, 1)]
        );

        let nf = conjugation_normal_form(FamilyParams::new(3, 0, 0)).unwrap();
        assert_eq!(
            nf.word.pairs(),
            vec![(2, 1), (3, 1), (4, 1), (5, 1), (6, 1)]
        );
        assert!(nf.conjugator.is_empty());
    }

    #[test]
    fn displayed_identities_hold_verbatim() {
        for g in 1..=6 {
            for m in -3..=5 {
                for n in -3..=5 {
                    let p = FamilyParams::new(g, m, n);
                    let phi = build_monodromy(p).unwrap();
                    let nf = conjugation_normal_form(p).unwrap();
                    let rhs = nf
                        .left
                        .compose(&phi)
                        .unwrap()
                        .compose(&nf.conjugator)
                        .unwrap();
                    assert_eq!(rhs, nf.word, "g={g} m={m} n={n}");
                    assert!(nf
                        .left
                        .commutation_equivalent(&nf.conjugator.invert())
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn commutation_reduce_needs_disjointness() {
        // a1 and a3 commute, a1 and a2 do not.
        let w = TwistWord::parse(s(2), "a1 a3 a1^-1 a3^-1").unwrap();
        assert!(w.commutation_reduce().unwrap().is_empty());
        let w = TwistWord::parse(s(2), "a1 a2 a1^-1 a2^-1").unwrap();
        assert_eq!(w.commutation_reduce().unwrap().len(), 4);
    }

    #[test]
    fn parse_text_form() {
        let w = TwistWord::parse(s(2), "a1^2 a2 a3 a5^-1").unwrap();
        assert_eq!(w.pairs(), vec![(1, 2), (2, 1), (3, 1), (5, -1)]);
        assert_eq!(w.to_string(), "a1^2 a2 a3 a5^-1");
        assert!(TwistWord::parse(s(2), "").unwrap().is_empty());
        assert!(TwistWord::parse(s(2), "b1").is_err());
        assert!(TwistWord::parse(s(2), "a6").is_err());
        assert!(TwistWord::parse(s(2), "a1^x").is_err());
    }

    #[test]
    fn json_shape() {
        let w = TwistWord::parse(SurfaceSpec::new(2, 1).unwrap(), "a1^2 a4").unwrap();
        let j = serde_json::to_string(&w).unwrap();
        assert_eq!(j, r#"{"g":2,"punctures":1,"letters":[[1,2],[4,1]]}"#);
        let back: TwistWord = serde_json::from_str(&j).unwrap();
        assert_eq!(back, w);
        assert!(
            serde_json::from_str::<TwistWord>(r#"{"g":2,"punctures":0,"letters":[[9,1]]}"#)
                .is_err()
        );
    }

    #[test]
    fn large_exponents_stay_exact() {
        let w = build_monodromy(FamilyParams::new(4, 1_000_000, -1_000_000)).unwrap();
        let ww = w.compose(&w).unwrap();
        assert_eq!(ww.letters()[0].exponent(), 1_000_000);
        let t = TwistWord::twist(s(2), 1, i64::MAX).unwrap();
        assert!(matches!(t.compose(&t), Err(Error::Overflow(_))));
    }
}
