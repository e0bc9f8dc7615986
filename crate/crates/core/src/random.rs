//! Seeded random inputs: expansions, words, automorphisms.
//!
//! Every trial `t` of a run with seed `s` draws from its own ChaCha stream,
//! so results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aut::{generator_library, FreeGroupEndo};
use crate::error::Result;
use crate::magnus::MagnusExpansion;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;
use crate::tensor::Tensor;
use crate::word::{Letter, Word};

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A sparse `ξ ∈ T̂_2` with at most `k` terms per degree, coefficients in
/// `-3..=3`.
pub fn random_xi<R: Rng>(
    rng: &mut R,
    rank: usize,
    trunc: usize,
    k: usize,
) -> Result<TruncatedSeries> {
    let mut parts = Vec::new();
    for m in 2..=trunc {
        for _ in 0..rng.gen_range(0..=k) {
            let idx: Vec<usize> = (0..m).map(|_| rng.gen_range(0..rank)).collect();
            let c = rng.gen_range(-3..=3);
            parts.push(Tensor::monomial(rank, &idx, Scalar::from_int(c))?);
        }
    }
    TruncatedSeries::from_tensors(rank, trunc, parts)
}

pub fn random_expansion<R: Rng>(
    rng: &mut R,
    rank: usize,
    trunc: usize,
    k: usize,
) -> Result<MagnusExpansion> {
    let xi = (0..rank)
        .map(|_| random_xi(rng, rank, trunc, k))
        .collect::<Result<Vec<_>>>()?;
    MagnusExpansion::new(xi)
}

/// A reduced word of at most `max_len` letters (possibly shorter after
/// reduction).
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5)))
        .collect();
    Word::from_letters(rank, letters).expect("indices in range")
}

/// A nontrivial reduced word of at most `max_len` letters.
pub fn random_nontrivial_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    loop {
        let w = random_word(rng, rank, max_len.max(1));
        if !w.is_identity() {
            return w;
        }
    }
}

/// Product of `1..=max_len` random elements (or their inverses) of `lib`.
pub fn random_product<R: Rng>(
    rng: &mut R,
    lib: &[FreeGroupEndo],
    max_len: usize,
) -> Result<FreeGroupEndo> {
    let rank = lib[0].rank();
    let len = rng.gen_range(1..=max_len.max(1));
    let mut out = FreeGroupEndo::identity(rank);
    for _ in 0..len {
        let e = lib.choose(rng).expect("nonempty library");
        let e = if rng.gen_bool(0.5) {
            e.clone()
        } else {
            e.inverse().unwrap_or_else(|| e.clone())
        };
        out = out.compose(&e)?;
    }
    Ok(out)
}

/// Library elements of the given kinds, concatenated.
pub fn library(kinds: &[&str], rank: usize) -> Result<Vec<FreeGroupEndo>> {
    let mut out = Vec::new();
    for kind in kinds {
        out.extend(generator_library(kind, rank)?.into_iter().map(|e| e.endo));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = random_word(&mut trial_rng(7, 3), 3, 10);
        let b = random_word(&mut trial_rng(7, 3), 3, 10);
        assert_eq!(a, b);
        let e1 = random_expansion(&mut trial_rng(1, 0), 2, 4, 2).unwrap();
        let e2 = random_expansion(&mut trial_rng(1, 0), 2, 4, 2).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn random_expansions_are_valid() {
        for t in 0..5 {
            let e = random_expansion(&mut trial_rng(11, t), 3, 4, 2).unwrap();
            assert!(e.validate());
        }
    }

    #[test]
    fn random_products_are_certified() {
        let lib = library(&["nielsen", "magnus-K"], 3).unwrap();
        for t in 0..5 {
            let p = random_product(&mut trial_rng(5, t), &lib, 3).unwrap();
            assert!(p.certify());
            assert!(p.abelianized().is_unimodular());
        }
    }
}
