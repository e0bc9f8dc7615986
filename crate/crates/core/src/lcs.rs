//! Lower central series depth, Lie elements, the filtration `A(m)` of
//! `Aut(F_n)` and the Johnson homomorphisms `τ_m` on it.

use std::fmt;

use crate::aut::FreeGroupEndo;
use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::magnus::MagnusExpansion;
use crate::scalar::Scalar;
use crate::tensor::{decode, Tensor};
use crate::tensor_map::TensorMap;
use crate::word::Word;

/// Depth of a word in the lower central series, as seen through `θ` up to
/// degree `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcsDepth {
    Identity,
    /// `γ ∈ Γ_m \ Γ_{m+1}`.
    Exactly(usize),
    /// `θ(γ) ≡ 1` up to degree `N`, so `γ ∈ Γ_{N+1}`; deeper membership is
    /// not decided.
    AtLeast(usize),
}

impl LcsDepth {
    /// True when the word is certified to lie in `Γ_m`.
    pub fn at_least(self, m: usize) -> bool {
        match self {
            LcsDepth::Identity => true,
            LcsDepth::Exactly(d) | LcsDepth::AtLeast(d) => d >= m,
        }
    }
}

impl fmt::Display for LcsDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsDepth::Identity => f.write_str("identity"),
            LcsDepth::Exactly(m) => write!(f, "{m}"),
            LcsDepth::AtLeast(m) => write!(f, ">={m}"),
        }
    }
}

/// The largest `m ≤ N` with `θ(γ) ∈ 1 + T̂_m`.
pub fn lcs_degree(theta: &MagnusExpansion, gamma: &Word) -> Result<LcsDepth> {
    if gamma.is_identity() {
        return Ok(LcsDepth::Identity);
    }
    let s = theta.evaluate(gamma)?;
    Ok(
        match s.components()[1..].iter().position(|t| !t.is_zero()) {
            Some(k) => LcsDepth::Exactly(k + 1),
            None => LcsDepth::AtLeast(theta.trunc() + 1),
        },
    )
}

/// The left-normed bracket `[…[[X_{i_1}, X_{i_2}], X_{i_3}], …, X_{i_m}]`.
fn left_bracket(rank: usize, idx: &[usize]) -> Tensor {
    let mut b = Tensor::basis(rank, idx[0]);
    for &j in &idx[1..] {
        let x = Tensor::basis(rank, j);
        b = &b.concat(&x) - &x.concat(&b);
    }
    b
}

/// The Dynkin map, extended linearly from monomials to left-normed brackets.
pub fn dynkin(t: &Tensor) -> Tensor {
    let mut out = Tensor::zero_unchecked(t.rank(), t.degree());
    if t.degree() == 0 {
        return out;
    }
    for (&k, c) in t.raw() {
        let idx = decode(t.rank(), t.degree(), k);
        out.add_scaled_unchecked(&left_bracket(t.rank(), &idx), c);
    }
    out
}

/// Dynkin–Specht–Wever test: `t ∈ L_m` iff `D(t) = m t`.
pub fn is_lie_element(t: &Tensor) -> Result<bool> {
    if t.degree() == 0 {
        return Err(Error::Precondition("Lie test needs degree >= 1".into()));
    }
    Ok(dynkin(t) == t.scale(&Scalar::from_int(t.degree() as i64)))
}

/// A homogeneous tensor certified to be a Lie element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieTensor(Tensor);

impl LieTensor {
    pub fn new(t: Tensor) -> Result<Self> {
        if is_lie_element(&t)? {
            Ok(LieTensor(t))
        } else {
            Err(Error::Precondition(format!(
                "{} is not a Lie element",
                t.render()
            )))
        }
    }

    pub fn tensor(&self) -> &Tensor {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor {
        self.0
    }
}

/// `θ_m(γ)` for `γ ∈ Γ_m`, certified Lie.
pub fn graded_image(theta: &MagnusExpansion, gamma: &Word, m: usize) -> Result<LieTensor> {
    if m == 0 || m > theta.trunc() {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            max: theta.trunc(),
        });
    }
    if !lcs_degree(theta, gamma)?.at_least(m) {
        return Err(Error::Precondition(format!("{gamma} is not in Γ_{m}")));
    }
    LieTensor::new(theta.component(gamma, m)?)
}

/// `θ_m([γ,δ]) = θ_{m-1}(γ)[δ] - [δ]θ_{m-1}(γ)` for `γ ∈ Γ_{m-1}`.
pub fn check_commutator_formula(
    theta: &MagnusExpansion,
    gamma: &Word,
    delta: &Word,
    m: usize,
) -> Result<Verdict> {
    if m < 2 || m > theta.trunc() {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            max: theta.trunc(),
        });
    }
    if !lcs_degree(theta, gamma)?.at_least(m - 1) {
        return Err(Error::Precondition(format!(
            "{gamma} is not in Γ_{}",
            m - 1
        )));
    }
    let lhs = theta.component(&Word::commutator(gamma, delta)?, m)?;
    let g = theta.component(gamma, m - 1)?;
    let d = theta.component(delta, 1)?;
    let rhs = &g.concat(&d) - &d.concat(&g);
    Ok(Verdict::compare(
        format!(
            "theta{m}([{gamma}, {delta}]) = theta{}(gamma)[delta] - [delta]theta{}(gamma)",
            m - 1,
            m - 1
        ),
        &lhs,
        &rhs,
        Tensor::render,
    ))
}

/// `[…[[w_1, w_2], w_3], …, w_k]`.
pub fn left_normed_commutator(words: &[Word]) -> Result<Word> {
    let (first, rest) = words
        .split_first()
        .ok_or_else(|| Error::Precondition("empty commutator".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, w| Word::commutator(&acc, w))
}

fn check_filtration_degree(theta: &MagnusExpansion, m: usize) -> Result<()> {
    if m == 0 || m + 1 > theta.trunc() {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            max: theta.trunc() - 1,
        });
    }
    Ok(())
}

/// `φ ∈ A(m)`: every `x_i^{-1}φ(x_i)` lies in `Γ_{m+1}`.
pub fn in_filtration_a(theta: &MagnusExpansion, phi: &FreeGroupEndo, m: usize) -> Result<bool> {
    check_filtration_degree(theta, m)?;
    if phi.rank() != theta.rank() {
        return Err(Error::RankMismatch(theta.rank(), phi.rank()));
    }
    for (i, img) in phi.images().iter().enumerate() {
        let x = Word::generator(phi.rank(), i)?;
        if !lcs_degree(theta, &x.inv().mul(img)?)?.at_least(m + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `τ_m(φ): x_i ↦ θ_{m+1}(x_i^{-1}φ(x_i))` for `φ ∈ A(m)`; each image is
/// certified to lie in `L_{m+1}`.
pub fn johnson_hom(theta: &MagnusExpansion, phi: &FreeGroupEndo, m: usize) -> Result<TensorMap> {
    if !in_filtration_a(theta, phi, m)? {
        return Err(Error::Precondition(format!(
            "automorphism is not in A({m})"
        )));
    }
    let images = phi
        .images()
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let x = Word::generator(phi.rank(), i)?;
            graded_image(theta, &x.inv().mul(img)?, m + 1).map(LieTensor::into_tensor)
        })
        .collect::<Result<Vec<_>>>()?;
    TensorMap::from_source_images(phi.rank(), 1, m + 1, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::MagnusGenerator;
    use crate::johnson::Johnson;
    use crate::magnus::xi_monomial;

    fn w(s: &str, n: usize) -> Word {
        Word::parse(s, n).unwrap()
    }

    fn mono(n: usize, idx: &[usize], c: i64) -> Tensor {
        Tensor::monomial(n, idx, Scalar::from_int(c)).unwrap()
    }

    #[test]
    fn lcs_degree_examples() {
        let std = MagnusExpansion::standard(2, 4).unwrap();
        assert_eq!(lcs_degree(&std, &w("x1", 2)).unwrap(), LcsDepth::Exactly(1));
        let c = w("x1*x2*x1^-1*x2^-1", 2);
        assert_eq!(lcs_degree(&std, &c).unwrap(), LcsDepth::Exactly(2));
        let c3 = Word::commutator(&c, &w("x1", 2)).unwrap();
        assert_eq!(lcs_degree(&std, &c3).unwrap(), LcsDepth::Exactly(3));
        assert_eq!(
            lcs_degree(&std, &Word::identity(2)).unwrap(),
            LcsDepth::Identity
        );
        let std2 = MagnusExpansion::standard(2, 2).unwrap();
        assert_eq!(lcs_degree(&std2, &c3).unwrap(), LcsDepth::AtLeast(3));
    }

    #[test]
    fn lie_test_examples() {
        let br = &mono(2, &[0, 1], 1) - &mono(2, &[1, 0], 1);
        assert!(is_lie_element(&br).unwrap());
        assert!(!is_lie_element(&mono(2, &[0, 1], 1)).unwrap());
        assert!(is_lie_element(&mono(3, &[2], -5)).unwrap());
        assert!(is_lie_element(&Tensor::scalar(2, Scalar::one())).is_err());
    }

    #[test]
    fn graded_image_examples() {
        let std = MagnusExpansion::standard(2, 4).unwrap();
        let c = w("x1*x2*x1^-1*x2^-1", 2);
        let br = &mono(2, &[0, 1], 1) - &mono(2, &[1, 0], 1);
        assert_eq!(*graded_image(&std, &c, 2).unwrap().tensor(), br);
        let c3 = Word::commutator(&c, &w("x2", 2)).unwrap();
        let x2 = Tensor::basis(2, 1);
        let expect = &br.concat(&x2) - &x2.concat(&br);
        assert_eq!(*graded_image(&std, &c3, 3).unwrap().tensor(), expect);
        assert!(graded_image(&std, &w("x1", 2), 2).is_err());
    }

    #[test]
    fn graded_image_independent_of_expansion() {
        let std = MagnusExpansion::standard(3, 4).unwrap();
        let th = MagnusExpansion::new(xi_monomial(3, 4, 1, &[0, 2], 3).unwrap()).unwrap();
        let c = left_normed_commutator(&[w("x1*x3", 3), w("x2", 3), w("x3^-1", 3)]).unwrap();
        assert_eq!(
            graded_image(&std, &c, 3).unwrap(),
            graded_image(&th, &c, 3).unwrap()
        );
    }

    #[test]
    fn commutator_formula() {
        let th = MagnusExpansion::new(xi_monomial(3, 5, 0, &[1, 1], 1).unwrap()).unwrap();
        let g = left_normed_commutator(&[w("x1", 3), w("x2^2", 3)]).unwrap();
        assert!(
            check_commutator_formula(&th, &g, &w("x3*x1", 3), 3)
                .unwrap()
                .holds
        );
        assert!(
            check_commutator_formula(&th, &w("x1", 3), &w("x2", 3), 2)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn filtration_examples() {
        let std = MagnusExpansion::standard(3, 4).unwrap();
        let k12 = MagnusGenerator::Conj { i: 0, l: 1 }.endo(3).unwrap();
        let k13 = MagnusGenerator::Conj { i: 0, l: 2 }.endo(3).unwrap();
        assert!(in_filtration_a(&std, &k12, 1).unwrap());
        assert!(!in_filtration_a(&std, &k12, 2).unwrap());
        let c = FreeGroupEndo::commutator(&k12, &k13).unwrap();
        assert!(in_filtration_a(&std, &c, 2).unwrap());
        assert!(in_filtration_a(&std, &FreeGroupEndo::inner(&w("x1", 3)), 1).unwrap());
        assert!(in_filtration_a(&std, &k12, 4).is_err());
    }

    #[test]
    fn johnson_hom_matches_johnson_map() {
        let th = MagnusExpansion::new(xi_monomial(3, 4, 2, &[0, 1], -2).unwrap()).unwrap();
        let j = Johnson::new(&th).unwrap();
        let k12 = MagnusGenerator::Conj { i: 0, l: 1 }.endo(3).unwrap();
        let k123 = MagnusGenerator::Comm { i: 0, l: 1, s: 2 }.endo(3).unwrap();
        assert_eq!(
            johnson_hom(&th, &k12, 1).unwrap(),
            j.component(&k12, 1).unwrap()
        );
        let sum = johnson_hom(&th, &k12.compose(&k123).unwrap(), 1).unwrap();
        assert_eq!(
            sum,
            johnson_hom(&th, &k12, 1)
                .unwrap()
                .try_add(&johnson_hom(&th, &k123, 1).unwrap())
                .unwrap()
        );
        let c = FreeGroupEndo::commutator(&k12, &k123).unwrap();
        assert_eq!(
            johnson_hom(&th, &c, 2).unwrap(),
            j.component(&c, 2).unwrap()
        );
        assert!(johnson_hom(&th, &k12, 2).is_err());
    }
}
