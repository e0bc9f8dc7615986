//! Generalized Magnus expansions `θ: F_n → 1 + T̂_1`.
//!
//! An expansion is determined by its values on the free generators,
//! `θ(x_i) = 1 + X_i + ξ_i` with `ξ_i ∈ T̂_2`; every choice of the `ξ_i`
//! gives one, and `ξ = 0` is the standard expansion `x_i ↦ 1 + X_i`.

use std::fmt;

use crate::algebra_map::AlgebraMap;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;
use crate::tensor::Tensor;
use crate::word::Word;

#[derive(Clone, PartialEq, Eq)]
pub struct MagnusExpansion {
    rank: usize,
    trunc: usize,
    gens: Vec<TruncatedSeries>,
    inverses: Vec<TruncatedSeries>,
}

impl MagnusExpansion {
    /// `θ(x_i) = 1 + X_i + ξ_i`; each `ξ_i` must vanish in degrees 0 and 1.
    pub fn new(xi: Vec<TruncatedSeries>) -> Result<Self> {
        let first = xi
            .first()
            .ok_or_else(|| Error::InvalidExpansion("no generators".into()))?;
        let (rank, trunc) = (first.rank(), first.trunc());
        if xi.len() != rank {
            return Err(Error::InvalidExpansion(format!(
                "rank {rank} needs {rank} series, got {}",
                xi.len()
            )));
        }
        let mut gens = Vec::with_capacity(rank);
        for (i, x) in xi.iter().enumerate() {
            first.check_compatible(x)?;
            if !x.in_ideal(2) {
                return Err(Error::InvalidExpansion(format!(
                    "xi_{} has a nonzero component below degree 2",
                    i + 1
                )));
            }
            let base = TruncatedSeries::one(rank, trunc)?
                .add(&TruncatedSeries::generator(rank, trunc, i)?)?;
            gens.push(base.add(x)?);
        }
        Self::from_generator_images(gens)
    }

    pub fn standard(rank: usize, trunc: usize) -> Result<Self> {
        let zero = TruncatedSeries::zero(rank, trunc)?;
        Self::new(vec![zero; rank])
    }

    /// Builds the homomorphism determined by arbitrary generator values with
    /// invertible constant term, without checking the normalization
    /// `θ(x_i) ≡ 1 + X_i`. Use [`Self::validate`] to test it.
    pub fn from_generator_images(gens: Vec<TruncatedSeries>) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::InvalidExpansion("no generators".into()))?;
        let (rank, trunc) = (first.rank(), first.trunc());
        if gens.len() != rank {
            return Err(Error::InvalidExpansion(format!(
                "rank {rank} needs {rank} series, got {}",
                gens.len()
            )));
        }
        for g in &gens {
            first.check_compatible(g)?;
        }
        let inverses = gens
            .iter()
            .map(TruncatedSeries::invert)
            .collect::<Result<Vec<_>>>()?;
        Ok(MagnusExpansion {
            rank,
            trunc,
            gens,
            inverses,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// `θ(x_i)`.
    pub fn generator_value(&self, i: usize) -> &TruncatedSeries {
        &self.gens[i]
    }

    /// `ξ_i = θ(x_i) - 1 - X_i`.
    pub fn xi(&self) -> Vec<TruncatedSeries> {
        self.gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut s = g.clone();
                s.set_component(Tensor::zero_unchecked(self.rank, 0));
                s.set_component(&s.comp(1).clone() - &Tensor::basis(self.rank, i));
                s
            })
            .collect()
    }

    pub fn is_standard(&self) -> bool {
        self.xi().iter().all(TruncatedSeries::is_zero)
    }

    /// `θ(γ)`, the ordered product of `θ(x_i)^{±1}` over the letters.
    pub fn evaluate(&self, w: &Word) -> Result<TruncatedSeries> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(self.rank, w.rank()));
        }
        let mut acc = TruncatedSeries::one(self.rank, self.trunc)?;
        for l in w.letters() {
            let f = if l.inverse {
                &self.inverses[l.gen]
            } else {
                &self.gens[l.gen]
            };
            acc = acc.mul_upto(f, self.trunc);
        }
        Ok(acc)
    }

    /// `θ_m(γ)`.
    pub fn component(&self, w: &Word, m: usize) -> Result<Tensor> {
        if m > self.trunc {
            return Err(Error::DegreeOutOfRange {
                degree: m,
                max: self.trunc,
            });
        }
        Ok(self.evaluate(w)?.comp(m).clone())
    }

    /// Checks `θ(x_i) ≡ 1 + X_i mod T̂_2` and spot-checks the homomorphism
    /// property on a few products of generators.
    pub fn validate(&self) -> bool {
        let normalized =
            self.gens.iter().enumerate().all(|(i, g)| {
                g.constant_term().is_one() && *g.comp(1) == Tensor::basis(self.rank, i)
            });
        if !normalized {
            return false;
        }
        let ident = Word::identity(self.rank);
        if !matches!(self.evaluate(&ident), Ok(s) if s.is_one()) {
            return false;
        }
        // θ(ab) = θ(a)θ(b) on a handful of short words.
        let samples: Vec<Word> = (0..self.rank)
            .flat_map(|i| {
                let x = Word::generator(self.rank, i).expect("in range");
                [x.clone(), x.inv()]
            })
            .collect();
        for a in &samples {
            for b in &samples {
                let ab = a.mul(b).expect("same rank");
                let (Ok(lhs), Ok(ta), Ok(tb)) =
                    (self.evaluate(&ab), self.evaluate(a), self.evaluate(b))
                else {
                    return false;
                };
                if ta.mul(&tb).ok() != Some(lhs) {
                    return false;
                }
            }
        }
        true
    }

    /// The algebra endomorphism `θ∘κ: X_i ↦ θ(x_i) - 1`; it lies in `IA(T̂)`.
    pub fn theta_kappa(&self) -> Result<AlgebraMap> {
        let one = TruncatedSeries::one(self.rank, self.trunc)?;
        let images = self
            .gens
            .iter()
            .map(|g| g.sub(&one))
            .collect::<Result<Vec<_>>>()?;
        AlgebraMap::new(images)
    }

    /// The unique `U ∈ IA(T̂)` with `θ'' = U∘θ'`, namely
    /// `(θ''∘κ)∘(θ'∘κ)^{-1}`.
    pub fn transition(from: &MagnusExpansion, to: &MagnusExpansion) -> Result<AlgebraMap> {
        if from.rank != to.rank {
            return Err(Error::RankMismatch(from.rank, to.rank));
        }
        if from.trunc != to.trunc {
            return Err(Error::TruncationMismatch(from.trunc, to.trunc));
        }
        to.theta_kappa()?.compose(&from.theta_kappa()?.invert()?)
    }

    /// Same expansion with every `ξ_i` re-truncated to degree `trunc`.
    pub fn with_trunc(&self, trunc: usize) -> Result<Self> {
        let xi = self
            .xi()
            .iter()
            .map(|s| s.with_trunc(trunc))
            .collect::<Result<Vec<_>>>()?;
        Self::new(xi)
    }
}

impl fmt::Debug for MagnusExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MagnusExpansion(rank={}, N={}) {{",
            self.rank, self.trunc
        )?;
        for (i, g) in self.gens.iter().enumerate() {
            writeln!(f, "  x{} -> {}", i + 1, g.render())?;
        }
        write!(f, "}}")
    }
}

/// Convenience: `ξ` with a single monomial term on generator `i`.
pub fn xi_monomial(
    rank: usize,
    trunc: usize,
    i: usize,
    idx: &[usize],
    c: i64,
) -> Result<Vec<TruncatedSeries>> {
    let mut xi = vec![TruncatedSeries::zero(rank, trunc)?; rank];
    xi[i] = TruncatedSeries::from_tensors(
        rank,
        trunc,
        [Tensor::monomial(rank, idx, Scalar::from_int(c))?],
    )?;
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, rank: usize) -> Word {
        Word::parse(s, rank).unwrap()
    }

    fn mono(rank: usize, idx: &[usize], c: i64) -> Tensor {
        Tensor::monomial(rank, idx, Scalar::from_int(c)).unwrap()
    }

    #[test]
    fn make_expansion_examples() {
        let std = MagnusExpansion::standard(2, 3).unwrap();
        assert!(std.is_standard());
        assert_eq!(std.generator_value(0).render(), "1 + X1");
        let th = MagnusExpansion::new(xi_monomial(2, 3, 0, &[1, 1], 1).unwrap()).unwrap();
        assert_eq!(th.generator_value(0).render(), "1 + X1 + X2X2");
        let bad = xi_monomial(2, 3, 0, &[0], 1).unwrap();
        assert!(matches!(
            MagnusExpansion::new(bad),
            Err(Error::InvalidExpansion(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let std = MagnusExpansion::standard(2, 3).unwrap();
        assert_eq!(
            std.evaluate(&w("x1*x2", 2)).unwrap().render(),
            "1 + X1 + X2 + X1X2"
        );
        let c = std.evaluate(&w("x1*x2*x1^-1*x2^-1", 2)).unwrap();
        assert_eq!(c.comp(1).render(), "0");
        assert_eq!(c.comp(2).render(), "X1X2 - X2X1");
        assert!(std.evaluate(&Word::identity(2)).unwrap().is_one());
        assert!(matches!(
            std.evaluate(&Word::identity(3)),
            Err(Error::RankMismatch(2, 3))
        ));
    }

    #[test]
    fn component_examples() {
        let th = MagnusExpansion::new(xi_monomial(3, 4, 1, &[0, 2], 2).unwrap()).unwrap();
        let g = w("x1*x2^-1*x3^2", 3);
        let t1 = th.component(&g, 1).unwrap();
        let expect: Tensor = Tensor::from_terms(
            3,
            1,
            vec![
                (vec![0], Scalar::one()),
                (vec![1], Scalar::from_int(-1)),
                (vec![2], Scalar::from_int(2)),
            ],
        )
        .unwrap();
        assert_eq!(t1, expect);
        let std = MagnusExpansion::standard(2, 3).unwrap();
        assert!(std.component(&w("x1", 2), 2).unwrap().is_zero());
        assert!(std.component(&w("x1", 2), 4).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(MagnusExpansion::standard(3, 4).unwrap().validate());
        let th = MagnusExpansion::new(xi_monomial(2, 3, 0, &[1, 0], -3).unwrap()).unwrap();
        assert!(th.validate());
        // θ(x1) = 1 + X2 violates the normalization.
        let mut gens = vec![TruncatedSeries::from_tensors(
            2,
            3,
            [Tensor::scalar(2, Scalar::one()), mono(2, &[1], 1)],
        )
        .unwrap()];
        gens.push(
            TruncatedSeries::from_tensors(
                2,
                3,
                [Tensor::scalar(2, Scalar::one()), mono(2, &[1], 1)],
            )
            .unwrap(),
        );
        let tampered = MagnusExpansion::from_generator_images(gens).unwrap();
        assert!(!tampered.validate());
    }

    #[test]
    fn theta_kappa_examples() {
        let std = MagnusExpansion::standard(2, 4).unwrap();
        assert!(std.theta_kappa().unwrap().is_identity());
        let th = MagnusExpansion::new(xi_monomial(2, 4, 0, &[1, 1], 1).unwrap()).unwrap();
        let tk = th.theta_kappa().unwrap();
        assert_eq!(tk.image(0).render(), "X1 + X2X2");
        assert_eq!(tk.image(1).render(), "X2");
        assert!(tk.linear_part().is_identity());
    }

    #[test]
    fn transition_examples() {
        let std = MagnusExpansion::standard(2, 4).unwrap();
        let th = MagnusExpansion::new(xi_monomial(2, 4, 0, &[1, 1], 1).unwrap()).unwrap();
        assert!(MagnusExpansion::transition(&th, &th).unwrap().is_identity());
        let u = MagnusExpansion::transition(&std, &th).unwrap();
        assert_eq!(u.image(0).render(), "X1 + X2X2");
        assert_eq!(u.image(1).render(), "X2");
        for s in ["x1", "x2", "x1*x2^-1", "x2^2*x1^-1*x2"] {
            let g = w(s, 2);
            assert_eq!(
                u.apply(&std.evaluate(&g).unwrap()).unwrap(),
                th.evaluate(&g).unwrap()
            );
        }
        let back = MagnusExpansion::transition(&th, &std).unwrap();
        assert!(u.compose(&back).unwrap().is_identity());
    }
}
