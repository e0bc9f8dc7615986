//! Total and graded Johnson maps `τ^θ(φ) ∈ IA(T̂)` and `τ^θ_p(φ)`.
//!
//! `τ^θ(φ)` is the unique element of `IA(T̂)` with
//! `θ(φ(γ)) = (τ^θ(φ) ∘ |φ|)(θ(γ))`; it is computed as
//! `(θ∘φ∘κ) ∘ (θ∘κ)^{-1} ∘ |φ|^{-1}`, which never needs `φ^{-1}`.
//! The twisted action on coefficients is `|φ|u = |φ|^{⊗(p+1)} ∘ u ∘ |φ|^{-1}`.

use crate::algebra_map::{AlgebraMap, IACoordinates};
use crate::aut::FreeGroupEndo;
use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::magnus::MagnusExpansion;
use crate::matrix::GLMatrix;
use crate::series::TruncatedSeries;
use crate::tensor::Tensor;
use crate::tensor_map::TensorMap;
use crate::word::Word;

/// An expansion together with the cached inverse of `θ∘κ`.
#[derive(Clone, Debug)]
pub struct Johnson {
    theta: MagnusExpansion,
    // None when θ∘κ is the identity (the standard expansion).
    tk_inv: Option<AlgebraMap>,
}

/// `|φ|` together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    pub a: GLMatrix,
    pub a_inv: GLMatrix,
}

impl Linear {
    pub fn of(phi: &FreeGroupEndo) -> Result<Linear> {
        let a = phi.abelianized();
        let det = a.det()?;
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let a_inv = a.inverse()?;
        Ok(Linear { a, a_inv })
    }

    /// `|φ|u` for `u: H^{⊗a} → H^{⊗b}`.
    pub fn act(&self, u: &TensorMap) -> Result<TensorMap> {
        u.act(&self.a, &self.a_inv)
    }
}

impl Johnson {
    pub fn new(theta: &MagnusExpansion) -> Result<Johnson> {
        let tk = theta.theta_kappa()?;
        let tk_inv = if tk.is_identity() {
            None
        } else {
            Some(tk.invert()?)
        };
        Ok(Johnson {
            theta: theta.clone(),
            tk_inv,
        })
    }

    pub fn theta(&self) -> &MagnusExpansion {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.theta.rank()
    }

    pub fn trunc(&self) -> usize {
        self.theta.trunc()
    }

    fn check_rank(&self, phi: &FreeGroupEndo) -> Result<()> {
        if phi.rank() != self.rank() {
            return Err(Error::RankMismatch(self.rank(), phi.rank()));
        }
        Ok(())
    }

    /// `θ∘φ∘κ: X_i ↦ θ(φ(x_i)) - 1`.
    fn theta_phi_kappa(&self, phi: &FreeGroupEndo) -> Result<AlgebraMap> {
        let one = TruncatedSeries::one(self.rank(), self.trunc())?;
        let images = phi
            .images()
            .iter()
            .map(|w| self.theta.evaluate(w)?.sub(&one))
            .collect::<Result<Vec<_>>>()?;
        AlgebraMap::new(images)
    }

    /// `τ^θ(φ)`; requires `|φ|` unimodular.
    pub fn total(&self, phi: &FreeGroupEndo) -> Result<AlgebraMap> {
        self.check_rank(phi)?;
        let lin = Linear::of(phi)?;
        let mut m = self.theta_phi_kappa(phi)?;
        if let Some(inv) = &self.tk_inv {
            m = m.compose(inv)?;
        }
        m.compose(&AlgebraMap::from_linear(&lin.a_inv, self.trunc())?)
    }

    /// All components `τ^θ_p(φ)`, `p = 1..N-1`.
    pub fn coordinates(&self, phi: &FreeGroupEndo) -> Result<IACoordinates> {
        self.total(phi)?.to_ia_coordinates()
    }

    /// `τ^θ_p(φ): H → H^{⊗(p+1)}`.
    pub fn component(&self, phi: &FreeGroupEndo, p: usize) -> Result<TensorMap> {
        self.check_p(p)?;
        Ok(self.coordinates(phi)?.component(p)?.clone())
    }

    fn check_p(&self, p: usize) -> Result<()> {
        if p == 0 || p + 1 > self.trunc() {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                max: self.trunc() - 1,
            });
        }
        Ok(())
    }

    /// `τ^θ_p(ι(γ))` from the closed form
    /// `a ↦ Σ_{q_0 + … + q_j = p} (-1)^j θ_{q_0}(γ) a θ_{q_1}(γ) ⋯ θ_{q_j}(γ)`
    /// with `q_0 ≥ 0` and `q_1, …, q_j ≥ 1`.
    pub fn inner(&self, gamma: &Word, p: usize) -> Result<TensorMap> {
        self.check_p(p)?;
        let n = self.rank();
        let th = self.theta.evaluate(gamma)?;
        let comp = |q: usize| th.comp(q);
        // tail[r] = Σ over compositions (q_1..q_j) of r of (-1)^j θ_{q_1}⋯θ_{q_j}
        let mut tail: Vec<Tensor> = Vec::with_capacity(p + 1);
        for r in 0..=p {
            let mut acc = Tensor::zero_unchecked(n, r);
            for c in compositions(r) {
                let mut prod = Tensor::scalar(n, crate::scalar::Scalar::one());
                for &q in &c {
                    prod = prod.concat(comp(q));
                }
                if c.len() % 2 == 1 {
                    prod = -&prod;
                }
                acc.add_assign_unchecked(&prod);
            }
            tail.push(acc);
        }
        let images = (0..n)
            .map(|i| {
                let a = Tensor::basis(n, i);
                let mut img = Tensor::zero_unchecked(n, p + 1);
                for q0 in 0..=p {
                    img.add_assign_unchecked(&comp(q0).concat(&a).concat(&tail[p - q0]));
                }
                img
            })
            .collect();
        TensorMap::from_source_images(n, 1, p + 1, images)
    }

    /// `θ(φ(γ)) = (τ^θ(φ) ∘ |φ|)(θ(γ))`.
    pub fn check_defining(&self, phi: &FreeGroupEndo, gamma: &Word) -> Result<Verdict> {
        let tau = self.total(phi)?;
        let lin = Linear::of(phi)?;
        let lhs = self.theta.evaluate(&phi.apply(gamma)?)?;
        let rhs = tau
            .compose(&AlgebraMap::from_linear(&lin.a, self.trunc())?)?
            .apply(&self.theta.evaluate(gamma)?)?;
        Ok(Verdict::compare(
            format!("theta(phi(gamma)) = tau(phi)|phi|theta(gamma), gamma = {gamma}"),
            &lhs,
            &rhs,
            TruncatedSeries::render,
        ))
    }

    /// `τ^θ(φψ) = τ^θ(φ) ∘ |φ| ∘ τ^θ(ψ) ∘ |φ|^{-1}`.
    pub fn check_cocycle_total(&self, phi: &FreeGroupEndo, psi: &FreeGroupEndo) -> Result<Verdict> {
        let lhs = self.total(&phi.compose(psi)?)?;
        let lin = Linear::of(phi)?;
        let n = self.trunc();
        let rhs = self
            .total(phi)?
            .compose(&AlgebraMap::from_linear(&lin.a, n)?)?
            .compose(&self.total(psi)?)?
            .compose(&AlgebraMap::from_linear(&lin.a_inv, n)?)?;
        Ok(Verdict::compare(
            "tau(phi psi) = tau(phi)|phi|tau(psi)|phi|^-1",
            &lhs,
            &rhs,
            AlgebraMap::render,
        ))
    }

    /// `τ₁(φψ) = τ₁(φ) + |φ|τ₁(ψ)`.
    pub fn check_cocycle_tau1(&self, phi: &FreeGroupEndo, psi: &FreeGroupEndo) -> Result<Verdict> {
        let lhs = self.component(&phi.compose(psi)?, 1)?;
        let lin = Linear::of(phi)?;
        let rhs = self
            .component(phi, 1)?
            .try_add(&lin.act(&self.component(psi, 1)?)?)?;
        Ok(Verdict::compare(
            "tau1(phi psi) = tau1(phi) + |phi|tau1(psi)",
            &lhs,
            &rhs,
            TensorMap::render,
        ))
    }

    /// `τ₂(φψ) = τ₂(φ) + (τ₁(φ)⊗1 + 1⊗τ₁(φ))|φ|τ₁(ψ) + |φ|τ₂(ψ)`.
    pub fn check_tau2_relation(&self, phi: &FreeGroupEndo, psi: &FreeGroupEndo) -> Result<Verdict> {
        let lhs = self.component(&phi.compose(psi)?, 2)?;
        let lin = Linear::of(phi)?;
        let cp = self.coordinates(phi)?;
        let cq = self.coordinates(psi)?;
        let t1 = cp.component(1)?;
        let id = TensorMap::identity(self.rank(), 1)?;
        let d = t1.tensor(&id)?.try_add(&id.tensor(t1)?)?;
        let rhs = cp
            .component(2)?
            .try_add(&d.compose(&lin.act(cq.component(1)?)?)?)?
            .try_add(&lin.act(cq.component(2)?)?)?;
        Ok(Verdict::compare(
            "tau2(phi psi) = tau2(phi) + (tau1(phi)x1 + 1xtau1(phi))|phi|tau1(psi) + |phi|tau2(psi)",
            &lhs,
            &rhs,
            TensorMap::render,
        ))
    }

    /// `τ₁(φ)|φ|[γ] = θ₂(φ(γ)) - |φ|^{⊗2}θ₂(γ)` and, when `φ` has a
    /// certified inverse, `τ₁(φ)[γ] = θ₂(γ) - |φ|^{⊗2}θ₂(φ^{-1}(γ))`.
    pub fn check_lemma22(&self, phi: &FreeGroupEndo, gamma: &Word) -> Result<Verdict> {
        let lin = Linear::of(phi)?;
        let t1 = self.component(phi, 1)?;
        let ab = self.theta.component(gamma, 1)?;
        let lhs7 = t1.apply(&ab.apply_linear(&lin.a)?)?;
        let rhs7 = self
            .theta
            .component(&phi.apply(gamma)?, 2)?
            .try_sub(&self.theta.component(gamma, 2)?.apply_linear(&lin.a)?)?;
        let mut parts = vec![Verdict::compare(
            "tau1(phi)|phi|[gamma] = theta2(phi(gamma)) - |phi|theta2(gamma)",
            &lhs7,
            &rhs7,
            Tensor::render,
        )];
        if let Some(inv) = phi.inverse() {
            let lhs8 = t1.apply(&ab)?;
            let rhs8 = self.theta.component(gamma, 2)?.try_sub(
                &self
                    .theta
                    .component(&inv.apply(gamma)?, 2)?
                    .apply_linear(&lin.a)?,
            )?;
            parts.push(Verdict::compare(
                "tau1(phi)[gamma] = theta2(gamma) - |phi|theta2(phi^-1(gamma))",
                &lhs8,
                &rhs8,
                Tensor::render,
            ));
        }
        Ok(Verdict::all(
            format!("tau1 on products at gamma = {gamma}"),
            parts,
        ))
    }

    /// The closed form for inner automorphisms against the generic
    /// computation, for every `p ≤ max_p`.
    pub fn check_inner(&self, gamma: &Word, max_p: usize) -> Result<Verdict> {
        let coords = self.coordinates(&FreeGroupEndo::inner(gamma))?;
        let mut parts = Vec::new();
        for p in 1..=max_p {
            parts.push(Verdict::compare(
                format!("tau{p}(inner({gamma})) closed form"),
                &self.inner(gamma, p)?,
                coords.component(p)?,
                TensorMap::render,
            ));
        }
        Ok(Verdict::all("inner Johnson maps", parts))
    }
}

/// Ordered compositions of `r` into positive parts (`[[]]` for `r = 0`).
fn compositions(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=r {
        for mut rest in compositions(r - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `τ^θ(φ)`.
pub fn total_johnson(theta: &MagnusExpansion, phi: &FreeGroupEndo) -> Result<AlgebraMap> {
    Johnson::new(theta)?.total(phi)
}

/// `τ^θ_p(φ)`.
pub fn johnson_p(theta: &MagnusExpansion, phi: &FreeGroupEndo, p: usize) -> Result<TensorMap> {
    Johnson::new(theta)?.component(phi, p)
}

/// `τ^θ_p(ι(γ))` by the closed form.
pub fn inner_johnson(theta: &MagnusExpansion, gamma: &Word, p: usize) -> Result<TensorMap> {
    Johnson::new(theta)?.inner(gamma, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::{generator_library, MagnusGenerator};
    use crate::magnus::xi_monomial;
    use crate::scalar::Scalar;

    fn w(s: &str, n: usize) -> Word {
        Word::parse(s, n).unwrap()
    }

    fn mono(n: usize, idx: &[usize], c: i64) -> Tensor {
        Tensor::monomial(n, idx, Scalar::from_int(c)).unwrap()
    }

    fn hom(images: Vec<Tensor>) -> TensorMap {
        TensorMap::from_images(images).unwrap()
    }

    fn twisted() -> MagnusExpansion {
        let mut xi = xi_monomial(3, 4, 0, &[1, 2], 2).unwrap();
        xi[2] = TruncatedSeries::from_tensors(3, 4, [mono(3, &[0, 0, 1], -1), mono(3, &[2, 1], 1)])
            .unwrap();
        MagnusExpansion::new(xi).unwrap()
    }

    #[test]
    fn identity_has_trivial_johnson_map() {
        let j = Johnson::new(&twisted()).unwrap();
        let t = j.total(&FreeGroupEndo::identity(3)).unwrap();
        assert!(t.is_identity());
        assert!(j
            .coordinates(&FreeGroupEndo::identity(3))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn nielsen_tau1_standard() {
        let std = MagnusExpansion::standard(2, 3).unwrap();
        let phi = FreeGroupEndo::new(vec![w("x1*x2", 2), w("x2", 2)]).unwrap();
        let t1 = johnson_p(&std, &phi, 1).unwrap();
        assert_eq!(
            t1,
            hom(vec![mono(2, &[0, 1], 1), Tensor::zero(2, 2).unwrap()])
        );
    }

    #[test]
    fn magnus_generator_tau1() {
        for theta in [MagnusExpansion::standard(3, 4).unwrap(), twisted()] {
            let j = Johnson::new(&theta).unwrap();
            let k12 = MagnusGenerator::Conj { i: 0, l: 1 }.endo(3).unwrap();
            let expect = hom(vec![
                &mono(3, &[1, 0], 1) - &mono(3, &[0, 1], 1),
                Tensor::zero(3, 2).unwrap(),
                Tensor::zero(3, 2).unwrap(),
            ]);
            assert_eq!(j.component(&k12, 1).unwrap(), expect);
            let k123 = MagnusGenerator::Comm { i: 0, l: 1, s: 2 }.endo(3).unwrap();
            let expect = hom(vec![
                &mono(3, &[1, 2], 1) - &mono(3, &[2, 1], 1),
                Tensor::zero(3, 2).unwrap(),
                Tensor::zero(3, 2).unwrap(),
            ]);
            assert_eq!(j.component(&k123, 1).unwrap(), expect);
        }
    }

    #[test]
    fn inner_tau1_is_commutator_with_abelian_class() {
        let j = Johnson::new(&twisted()).unwrap();
        let x1 = w("x1", 3);
        let t1 = j.component(&FreeGroupEndo::inner(&x1), 1).unwrap();
        for i in 0..3 {
            let a = Tensor::basis(3, i);
            let x = Tensor::basis(3, 0);
            assert_eq!(*t1.image(&[i]), &x.concat(&a) - &a.concat(&x));
        }
    }

    #[test]
    fn inner_closed_form_low_degrees() {
        let theta = twisted();
        let j = Johnson::new(&theta).unwrap();
        let g = w("x1*x3^-1*x2^2", 3);
        let ab = theta.component(&g, 1).unwrap();
        let t2 = theta.component(&g, 2).unwrap();
        let i1 = j.inner(&g, 1).unwrap();
        let i2 = j.inner(&g, 2).unwrap();
        for i in 0..3 {
            let a = Tensor::basis(3, i);
            assert_eq!(*i1.image(&[i]), &ab.concat(&a) - &a.concat(&ab));
            let e212 = &(&(&t2.concat(&a) - &a.concat(&t2)) + &a.concat(&ab).concat(&ab))
                - &ab.concat(&a).concat(&ab);
            assert_eq!(*i2.image(&[i]), e212);
        }
        assert!(j.inner(&Word::identity(3), 2).unwrap().is_zero());
        assert!(j.check_inner(&g, 3).unwrap().holds);
    }

    #[test]
    fn inner_closed_form_matches_conjugation() {
        let theta = twisted();
        let j = Johnson::new(&theta).unwrap();
        let g = w("x2*x1^-1*x3", 3);
        let th = theta.evaluate(&g).unwrap();
        let th_inv = th.invert().unwrap();
        for p in 1..=3 {
            let m = j.inner(&g, p).unwrap();
            for i in 0..3 {
                let a = TruncatedSeries::generator(3, 4, i).unwrap();
                let conj = th.mul(&a).unwrap().mul(&th_inv).unwrap();
                assert_eq!(m.image(&[i]), conj.component(p + 1).unwrap());
            }
        }
    }

    #[test]
    fn cocycle_checks_on_library_pairs() {
        let j = Johnson::new(&twisted()).unwrap();
        let lib: Vec<FreeGroupEndo> = generator_library("nielsen", 3)
            .unwrap()
            .into_iter()
            .chain(generator_library("magnus-K", 3).unwrap())
            .map(|e| e.endo)
            .collect();
        for (a, b) in [(0, 5), (7, 13), (14, 2), (9, 20)] {
            let (phi, psi) = (&lib[a], &lib[b]);
            assert!(j.check_cocycle_total(phi, psi).unwrap().holds);
            assert!(j.check_cocycle_tau1(phi, psi).unwrap().holds);
            assert!(j.check_tau2_relation(phi, psi).unwrap().holds);
            for g in ["x1*x2^-1", "x3^2*x1", "x2*x3*x2^-1*x3^-1"] {
                assert!(j.check_defining(phi, &w(g, 3)).unwrap().holds);
                assert!(j.check_lemma22(phi, &w(g, 3)).unwrap().holds);
            }
        }
    }

    #[test]
    fn tau1_of_inverse() {
        let j = Johnson::new(&twisted()).unwrap();
        let phi = generator_library("nielsen", 3).unwrap()[4].endo.clone();
        let inv = phi.inverse().unwrap();
        let lin = Linear::of(&phi).unwrap();
        // τ₁(φ⁻¹) = -|φ|⁻¹τ₁(φ)
        let lhs = j.component(&inv, 1).unwrap();
        let back = Linear {
            a: lin.a_inv.clone(),
            a_inv: lin.a.clone(),
        };
        let rhs = back.act(&j.component(&phi, 1).unwrap()).unwrap().neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_unimodular_rejected() {
        let j = Johnson::new(&MagnusExpansion::standard(2, 3).unwrap()).unwrap();
        let phi = FreeGroupEndo::new(vec![w("x1^2", 2), w("x2", 2)]).unwrap();
        assert!(matches!(j.total(&phi), Err(Error::NotUnimodular(_))));
        assert!(j.component(&FreeGroupEndo::identity(2), 3).is_err());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(0), vec![Vec::<usize>::new()]);
        assert_eq!(compositions(3).len(), 4);
        assert_eq!(compositions(5).len(), 16);
    }
}
