//! Endomorphisms of `F_n` given by generator images, and the standard
//! generator libraries (Nielsen moves, Magnus generators of `IA_n`, inner
//! automorphisms by generators).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::GLMatrix;
use crate::scalar::Scalar;
use crate::word::{Letter, Word};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeGroupEndo {
    rank: usize,
    images: Vec<Word>,
    inverse: Option<Vec<Word>>,
}

impl FreeGroupEndo {
    pub fn identity(rank: usize) -> Self {
        let images: Vec<Word> = (0..rank)
            .map(|i| Word::generator(rank, i).expect("in range"))
            .collect();
        FreeGroupEndo {
            rank,
            inverse: Some(images.clone()),
            images,
        }
    }

    /// An endomorphism with no known inverse.
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        if rank == 0 {
            return Err(Error::InvalidRank(0));
        }
        for w in &images {
            if w.rank() != rank {
                return Err(Error::RankMismatch(rank, w.rank()));
            }
        }
        Ok(FreeGroupEndo {
            rank,
            images,
            inverse: None,
        })
    }

    /// An automorphism with an inverse; fails unless `φ∘φ⁻¹` and `φ⁻¹∘φ`
    /// both fix every generator.
    pub fn with_inverse(images: Vec<Word>, inverse: Vec<Word>) -> Result<Self> {
        let mut e = Self::new(images)?;
        let inv = Self::new(inverse)?;
        if inv.rank != e.rank {
            return Err(Error::RankMismatch(e.rank, inv.rank));
        }
        e.inverse = Some(inv.images);
        if !e.certify() {
            return Err(Error::Precondition(
                "attached inverse does not invert the endomorphism".into(),
            ));
        }
        Ok(e)
    }

    /// The inner automorphism `ι(γ): δ ↦ γδγ⁻¹`.
    pub fn inner(gamma: &Word) -> Self {
        let rank = gamma.rank();
        let conj = |g: &Word, i: usize| {
            let x = Word::generator(rank, i).expect("in range");
            g.mul(&x).and_then(|w| w.mul(&g.inv())).expect("same rank")
        };
        let g_inv = gamma.inv();
        FreeGroupEndo {
            rank,
            images: (0..rank).map(|i| conj(gamma, i)).collect(),
            inverse: Some((0..rank).map(|i| conj(&g_inv, i)).collect()),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// `φ(x_{i+1})`.
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i]
    }

    pub fn inverse_images(&self) -> Option<&[Word]> {
        self.inverse.as_deref()
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(self.rank, w.rank()));
        }
        Ok(substitute(&self.images, w))
    }

    /// `self ∘ other`, i.e. `γ ↦ self(other(γ))`.
    pub fn compose(&self, other: &FreeGroupEndo) -> Result<FreeGroupEndo> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let images = other
            .images
            .iter()
            .map(|w| substitute(&self.images, w))
            .collect();
        let inverse = match (&self.inverse, &other.inverse) {
            // (φψ)⁻¹ = ψ⁻¹φ⁻¹
            (Some(a), Some(b)) => Some(a.iter().map(|w| substitute(b, w)).collect()),
            _ => None,
        };
        Ok(FreeGroupEndo {
            rank: self.rank,
            images,
            inverse,
        })
    }

    /// The certified inverse, when one is attached.
    pub fn inverse(&self) -> Option<FreeGroupEndo> {
        self.inverse.as_ref().map(|inv| FreeGroupEndo {
            rank: self.rank,
            images: inv.clone(),
            inverse: Some(self.images.clone()),
        })
    }

    /// `self^k`; negative powers need a certified inverse.
    pub fn pow(&self, k: i64) -> Result<FreeGroupEndo> {
        let base = if k < 0 {
            self.inverse()
                .ok_or_else(|| Error::Precondition("no certified inverse".into()))?
        } else {
            self.clone()
        };
        let mut out = FreeGroupEndo::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base)?;
        }
        Ok(out)
    }

    /// The commutator `φψφ⁻¹ψ⁻¹` of two automorphisms with certified inverses.
    pub fn commutator(a: &FreeGroupEndo, b: &FreeGroupEndo) -> Result<FreeGroupEndo> {
        a.compose(b)?.compose(&a.pow(-1)?)?.compose(&b.pow(-1)?)
    }

    /// True when an inverse is attached and both composites fix every
    /// generator.
    pub fn certify(&self) -> bool {
        let Some(inv) = &self.inverse else {
            return false;
        };
        (0..self.rank).all(|i| {
            let x = Word::generator(self.rank, i).expect("in range");
            substitute(&self.images, &substitute(inv, &x)) == x
                && substitute(inv, &substitute(&self.images, &x)) == x
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::new(i, false)])
    }

    /// `|φ|`: column `i` holds the exponent sums of `φ(x_i)`.
    pub fn abelianized(&self) -> GLMatrix {
        let mut m = GLMatrix::zeros(self.rank, self.rank);
        for (j, w) in self.images.iter().enumerate() {
            for (i, e) in w.exponent_sums().into_iter().enumerate() {
                m.set(i, j, Scalar::from_int(e));
            }
        }
        m
    }
}

fn substitute(images: &[Word], w: &Word) -> Word {
    let rank = images.len();
    let letters = w.letters().iter().flat_map(|l| {
        let img = &images[l.gen];
        let v: Vec<Letter> = if l.inverse {
            img.inv().letters().to_vec()
        } else {
            img.letters().to_vec()
        };
        v
    });
    Word::from_letters(rank, letters).expect("images have the right rank")
}

impl fmt::Debug for FreeGroupEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images.iter().map(Word::to_string).collect();
        write!(f, "FreeGroupEndo[{}]", imgs.join(", "))
    }
}

/// JSON form `{"rank": n, "images": ["x2*x1*x2^-1", …], "inverse": […]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EndoJson {
    pub rank: usize,
    pub images: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<String>>,
}

impl From<&FreeGroupEndo> for EndoJson {
    fn from(e: &FreeGroupEndo) -> Self {
        EndoJson {
            rank: e.rank,
            images: e.images.iter().map(Word::render).collect(),
            inverse: e
                .inverse
                .as_ref()
                .map(|v| v.iter().map(Word::render).collect()),
        }
    }
}

impl TryFrom<EndoJson> for FreeGroupEndo {
    type Error = Error;
    fn try_from(j: EndoJson) -> Result<Self> {
        if j.images.len() != j.rank {
            return Err(Error::ShapeMismatch(format!(
                "rank {} needs {} images, got {}",
                j.rank,
                j.rank,
                j.images.len()
            )));
        }
        let parse = |v: &[String]| {
            v.iter()
                .map(|s| Word::parse(s, j.rank))
                .collect::<Result<Vec<_>>>()
        };
        let images = parse(&j.images)?;
        match &j.inverse {
            Some(inv) => FreeGroupEndo::with_inverse(images, parse(inv)?),
            None => FreeGroupEndo::new(images),
        }
    }
}

/// The Magnus generators of `IA_n` (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MagnusGenerator {
    /// `K_{i,l}: x_i ↦ x_l x_i x_l⁻¹`, `i ≠ l`.
    Conj { i: usize, l: usize },
    /// `K_{i,l,s}: x_i ↦ x_i x_l x_s x_l⁻¹ x_s⁻¹`, `i ≠ l < s ≠ i`.
    Comm { i: usize, l: usize, s: usize },
}

impl MagnusGenerator {
    /// All generators for rank `n`: every `K_{i,l}` then every `K_{i,l,s}`,
    /// each family in lexicographic order.
    pub fn all(n: usize) -> Vec<MagnusGenerator> {
        let mut out = Vec::new();
        for i in 0..n {
            for l in (0..n).filter(|&l| l != i) {
                out.push(MagnusGenerator::Conj { i, l });
            }
        }
        for i in 0..n {
            for l in (0..n).filter(|&l| l != i) {
                for s in (l + 1..n).filter(|&s| s != i) {
                    out.push(MagnusGenerator::Comm { i, l, s });
                }
            }
        }
        out
    }

    pub fn check(self, n: usize) -> Result<Self> {
        let ok = match self {
            MagnusGenerator::Conj { i, l } => i < n && l < n && i != l,
            MagnusGenerator::Comm { i, l, s } => i < n && s < n && i != l && l < s && s != i,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Precondition(format!(
                "{} is not a Magnus generator for n = {n}",
                self.label()
            )))
        }
    }

    /// Text label such as `K[1,2]` or `K[1,2,3]` (1-based).
    pub fn label(self) -> String {
        match self {
            MagnusGenerator::Conj { i, l } => format!("K[{},{}]", i + 1, l + 1),
            MagnusGenerator::Comm { i, l, s } => format!("K[{},{},{}]", i + 1, l + 1, s + 1),
        }
    }

    pub fn endo(self, n: usize) -> Result<FreeGroupEndo> {
        self.check(n)?;
        let x = |k: usize| Word::generator(n, k).expect("in range");
        let mut images: Vec<Word> = (0..n).map(x).collect();
        let mut inverse = images.clone();
        match self {
            MagnusGenerator::Conj { i, l } => {
                images[i] = x(l).mul(&x(i))?.mul(&x(l).inv())?;
                inverse[i] = x(l).inv().mul(&x(i))?.mul(&x(l))?;
            }
            MagnusGenerator::Comm { i, l, s } => {
                let c = Word::commutator(&x(l), &x(s))?;
                images[i] = x(i).mul(&c)?;
                inverse[i] = x(i).mul(&c.inv())?;
            }
        }
        FreeGroupEndo::with_inverse(images, inverse)
    }
}

impl fmt::Display for MagnusGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A library element together with its printable name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedEndo {
    pub label: String,
    pub endo: FreeGroupEndo,
}

/// Library kinds accepted by [`generator_library`].
pub const LIBRARY_KINDS: [&str; 3] = ["magnus-K", "nielsen", "inner"];

/// Generator lists with certified inverses.
///
/// * `magnus-K`: the Magnus generators of `IA_n`;
/// * `nielsen`: `R[i,j]: x_i ↦ x_i x_j` for `i ≠ j`, swaps `P[i,j]`, `i < j`,
///   and inversions `I[i]: x_i ↦ x_i⁻¹`;
/// * `inner`: `ι(x_i)`.
pub fn generator_library(kind: &str, n: usize) -> Result<Vec<NamedEndo>> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let x = |k: usize| Word::generator(n, k).expect("in range");
    let ids = || -> Vec<Word> { (0..n).map(x).collect() };
    let mut out = Vec::new();
    match kind {
        "magnus-K" => {
            for g in MagnusGenerator::all(n) {
                out.push(NamedEndo {
                    label: g.label(),
                    endo: g.endo(n)?,
                });
            }
        }
        "nielsen" => {
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let (mut img, mut inv) = (ids(), ids());
                    img[i] = x(i).mul(&x(j))?;
                    inv[i] = x(i).mul(&x(j).inv())?;
                    out.push(NamedEndo {
                        label: format!("R[{},{}]", i + 1, j + 1),
                        endo: FreeGroupEndo::with_inverse(img, inv)?,
                    });
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    let mut img = ids();
                    img.swap(i, j);
                    out.push(NamedEndo {
                        label: format!("P[{},{}]", i + 1, j + 1),
                        endo: FreeGroupEndo::with_inverse(img.clone(), img)?,
                    });
                }
            }
            for i in 0..n {
                let mut img = ids();
                img[i] = x(i).inv();
                out.push(NamedEndo {
                    label: format!("I[{}]", i + 1),
                    endo: FreeGroupEndo::with_inverse(img.clone(), img)?,
                });
            }
        }
        "inner" => {
            for i in 0..n {
                out.push(NamedEndo {
                    label: format!("inner[{}]", i + 1),
                    endo: FreeGroupEndo::inner(&x(i)),
                });
            }
        }
        other => return Err(Error::UnknownKind(other.to_string())),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, n: usize) -> Word {
        Word::parse(s, n).unwrap()
    }

    #[test]
    fn apply_examples() {
        let inner = FreeGroupEndo::inner(&w("x1", 3));
        assert_eq!(inner.apply(&w("x2", 3)).unwrap(), w("x1*x2*x1^-1", 3));
        let k12 = MagnusGenerator::Conj { i: 0, l: 1 }.endo(3).unwrap();
        assert_eq!(k12.apply(&w("x1", 3)).unwrap(), w("x2*x1*x2^-1", 3));
        let g = w("x1*x3^-2*x2", 3);
        assert_eq!(FreeGroupEndo::identity(3).apply(&g).unwrap(), g);
        assert!(k12.apply(&w("x1", 2)).is_err());
    }

    #[test]
    fn compose_examples() {
        let k12 = MagnusGenerator::Conj { i: 0, l: 1 }.endo(3).unwrap();
        let id = FreeGroupEndo::identity(3);
        assert_eq!(k12.compose(&id).unwrap().images(), k12.images());
        let back = k12.compose(&k12.inverse().unwrap()).unwrap();
        assert!(back.is_identity());
        assert!(back.certify());
        // (φψ)(γ) = φ(ψ(γ))
        let r = generator_library("nielsen", 3).unwrap();
        let (a, b) = (&r[0].endo, &r[3].endo);
        let g = w("x1*x2^-1*x3", 3);
        assert_eq!(
            a.compose(b).unwrap().apply(&g).unwrap(),
            a.apply(&b.apply(&g).unwrap()).unwrap()
        );
        assert!(a.compose(b).unwrap().certify());
    }

    #[test]
    fn abelianized_examples() {
        let inner = FreeGroupEndo::inner(&w("x1*x2^3", 2));
        assert!(inner.abelianized().is_identity());
        let r12 = &generator_library("nielsen", 2).unwrap()[0];
        assert_eq!(r12.label, "R[1,2]");
        assert_eq!(
            r12.endo.abelianized(),
            GLMatrix::from_rows(vec![vec![1, 0], vec![1, 1]])
        );
        let k = MagnusGenerator::Comm { i: 0, l: 1, s: 2 }.endo(3).unwrap();
        assert!(k.abelianized().is_identity());
    }

    #[test]
    fn library_counts() {
        assert_eq!(generator_library("magnus-K", 3).unwrap().len(), 9);
        assert_eq!(generator_library("magnus-K", 2).unwrap().len(), 2);
        for n in 2..=5 {
            let lib = generator_library("magnus-K", n).unwrap();
            assert_eq!(lib.len(), n * (n - 1) + n * (n - 1) * (n - 2) / 2);
        }
        assert!(matches!(
            generator_library("whitehead", 3),
            Err(Error::UnknownKind(_))
        ));
    }

    #[test]
    fn library_elements_are_certified_and_unimodular() {
        for kind in LIBRARY_KINDS {
            for n in 2..=4 {
                for e in generator_library(kind, n).unwrap() {
                    assert!(e.endo.certify(), "{}", e.label);
                    assert!(e.endo.abelianized().is_unimodular(), "{}", e.label);
                }
            }
        }
    }

    #[test]
    fn labels() {
        let lib = generator_library("magnus-K", 3).unwrap();
        let labels: Vec<&str> = lib.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(
            labels,
            [
                "K[1,2]", "K[1,3]", "K[2,1]", "K[2,3]", "K[3,1]", "K[3,2]", "K[1,2,3]", "K[2,1,3]",
                "K[3,1,2]"
            ]
        );
    }

    #[test]
    fn bad_inverse_rejected() {
        let img = vec![w("x1*x2", 2), w("x2", 2)];
        let inv = vec![w("x1*x2", 2), w("x2", 2)];
        assert!(FreeGroupEndo::with_inverse(img, inv).is_err());
    }

    #[test]
    fn json_round_trip() {
        let k = MagnusGenerator::Comm { i: 0, l: 1, s: 2 }.endo(3).unwrap();
        let j = EndoJson::from(&k);
        assert_eq!(j.images[0], "x1*x2*x3*x2^-1*x3^-1");
        let text = serde_json::to_string(&j).unwrap();
        let back: EndoJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FreeGroupEndo::try_from(back).unwrap(), k);
    }
}
