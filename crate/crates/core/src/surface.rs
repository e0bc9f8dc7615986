//! Genus-`g` surfaces with one boundary component: `π₁ = F_{2g}` with
//! symplectic basis `x_1..x_g, x_{g+1}..x_{2g}`.
//!
//! Covectors `ℓ ∈ H^*` are stored as degree-1 tensors holding the values
//! `ℓ(X_j)`, so the dual basis element `ξ_j` is `X_j`.

use crate::aut::FreeGroupEndo;
use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::johnson::Johnson;
use crate::magnus::MagnusExpansion;
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::tensor_map::TensorMap;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceContext {
    g: usize,
    intersection: Tensor,
}

impl SurfaceContext {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::Precondition("genus must be at least 1".into()));
        }
        let n = 2 * g;
        let mut terms = Vec::new();
        for i in 0..g {
            terms.push((vec![i, g + i], Scalar::one()));
            terms.push((vec![g + i, i], Scalar::from_int(-1)));
        }
        Ok(SurfaceContext {
            g,
            intersection: Tensor::from_terms(n, 2, terms)?,
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn rank(&self) -> usize {
        2 * self.g
    }

    /// `I = Σ_i (X_i⊗X_{g+i} - X_{g+i}⊗X_i)`.
    pub fn intersection_form(&self) -> &Tensor {
        &self.intersection
    }

    /// `w₀ = Π_i x_i x_{g+i} x_i^{-1} x_{g+i}^{-1}`.
    pub fn boundary_word(&self) -> Word {
        let n = self.rank();
        (0..self.g).fold(Word::identity(n), |acc, i| {
            let a = Word::generator(n, i).expect("in range");
            let b = Word::generator(n, self.g + i).expect("in range");
            acc.mul(&Word::commutator(&a, &b).expect("same rank"))
                .expect("same rank")
        })
    }

    fn check_vector(&self, a: &Tensor) -> Result<()> {
        if a.rank() != self.rank() {
            return Err(Error::RankMismatch(self.rank(), a.rank()));
        }
        if a.degree() != 1 {
            return Err(Error::ShapeMismatch("expected an element of H".into()));
        }
        Ok(())
    }

    /// `ω(p, q)` on basis indices: `X_i·X_{g+j} = δ_{ij}`, antisymmetric.
    fn omega(&self, p: usize, q: usize) -> i64 {
        let g = self.g;
        if p < g && q == p + g {
            1
        } else if p >= g && q + g == p {
            -1
        } else {
            0
        }
    }

    /// The intersection pairing `μ(a, b) = a·b`.
    pub fn mu(&self, a: &Tensor, b: &Tensor) -> Result<Scalar> {
        self.check_vector(a)?;
        self.check_vector(b)?;
        let mut acc = Scalar::zero();
        for (p, ca) in a.iter() {
            for (q, cb) in b.iter() {
                let w = self.omega(p[0], q[0]);
                if w != 0 {
                    acc += &(&(ca * cb) * &Scalar::from_int(w));
                }
            }
        }
        Ok(acc)
    }

    /// `ϑ(ℓ) = (1_H ⊗ ℓ)(I)`.
    pub fn poincare_dual(&self, ell: &Tensor) -> Result<Tensor> {
        self.check_vector(ell)?;
        let mut out = Tensor::zero(self.rank(), 1)?;
        for (idx, c) in self.intersection.iter() {
            let v = ell.coeff(&[idx[1]]);
            if !v.is_zero() {
                out = &out + &Tensor::monomial(self.rank(), &[idx[0]], c * &v)?;
            }
        }
        Ok(out)
    }

    /// `ϑ^{-1}(Y) = Y·`, the covector `Z ↦ μ(Y, Z)`.
    pub fn poincare_dual_inv(&self, y: &Tensor) -> Result<Tensor> {
        self.check_vector(y)?;
        let n = self.rank();
        let terms = (0..n)
            .map(|j| Ok((vec![j], self.mu(y, &Tensor::basis(n, j))?)))
            .collect::<Result<Vec<_>>>()?;
        Tensor::from_terms(n, 1, terms)
    }

    fn check_theta(&self, theta: &MagnusExpansion) -> Result<()> {
        if theta.rank() != self.rank() {
            return Err(Error::RankMismatch(self.rank(), theta.rank()));
        }
        Ok(())
    }

    /// `θ₂(w₀) = I`.
    pub fn theta2_w0_check(&self, theta: &MagnusExpansion) -> Result<Verdict> {
        self.check_theta(theta)?;
        let lhs = theta.component(&self.boundary_word(), 2)?;
        Ok(Verdict::compare(
            format!("theta2(w0) = I, g = {}", self.g),
            &lhs,
            &self.intersection,
            Tensor::render,
        ))
    }

    /// `ν₀(δ)` defined by `ν₀(δ) I = -θ₂(δ)`. Requires `[δ] = 0` and
    /// `θ₂(δ) ∈ ℤ·I`; these are necessary conditions only, membership of `δ`
    /// in the normal closure of `w₀` is not decided.
    pub fn nu0(&self, delta: &Word) -> Result<i64> {
        if delta.rank() != self.rank() {
            return Err(Error::RankMismatch(self.rank(), delta.rank()));
        }
        let out_of_scope = || Error::Precondition(format!("{delta} is not in the scope of nu0"));
        if delta.exponent_sums().iter().any(|&e| e != 0) {
            return Err(out_of_scope());
        }
        // θ₂ on commutators does not depend on θ, so the standard one suffices.
        let std = MagnusExpansion::standard(self.rank(), 2)?;
        let t2 = std.component(delta, 2)?;
        let c = t2.coeff(&[0, self.g]);
        if t2 != self.intersection.scale(&c) {
            return Err(out_of_scope());
        }
        (-&c).to_i64().ok_or_else(out_of_scope)
    }

    /// `τ^θ₁(ι(w₀)) = 0` and `τ^θ₂(ι(w₀))a = Ia - aI` for every basis `a`.
    pub fn tau2_boundary_check(&self, theta: &MagnusExpansion) -> Result<Verdict> {
        self.check_theta(theta)?;
        let n = self.rank();
        let j = Johnson::new(theta)?;
        let coords = j.coordinates(&FreeGroupEndo::inner(&self.boundary_word()))?;
        let mut parts = vec![Verdict::compare(
            "tau1(inner(w0)) = 0",
            coords.component(1)?,
            &TensorMap::zero(n, 1, 2)?,
            TensorMap::render,
        )];
        let t2 = coords.component(2)?;
        for i in 0..n {
            let a = Tensor::basis(n, i);
            let rhs = &self.intersection.concat(&a) - &a.concat(&self.intersection);
            parts.push(Verdict::compare(
                format!("tau2(inner(w0))X{} = I X{} - X{} I", i + 1, i + 1, i + 1),
                t2.image(&[i]),
                &rhs,
                Tensor::render,
            ));
        }
        Ok(Verdict::all(
            format!("tau(inner(w0)), g = {}", self.g),
            parts,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::xi_monomial;
    use crate::matrix::Matrix;

    fn w(s: &str, n: usize) -> Word {
        Word::parse(s, n).unwrap()
    }

    #[test]
    fn boundary_words() {
        let s1 = SurfaceContext::new(1).unwrap();
        assert_eq!(s1.boundary_word(), w("x1*x2*x1^-1*x2^-1", 2));
        let s2 = SurfaceContext::new(2).unwrap();
        assert_eq!(s2.boundary_word().len(), 8);
        assert!(s2.boundary_word().exponent_sums().iter().all(|&e| e == 0));
        let s4 = SurfaceContext::new(4).unwrap();
        assert_eq!(s4.boundary_word().len(), 16);
        assert!(SurfaceContext::new(0).is_err());
    }

    #[test]
    fn intersection_pairing() {
        let s = SurfaceContext::new(2).unwrap();
        let x = |i| Tensor::basis(4, i);
        assert_eq!(s.mu(&x(0), &x(2)).unwrap(), Scalar::one());
        assert_eq!(s.mu(&x(2), &x(0)).unwrap(), Scalar::from_int(-1));
        assert!(s.mu(&x(0), &x(0)).unwrap().is_zero());
        assert!(s.mu(&x(0), &x(3)).unwrap().is_zero());
        assert!(s.mu(&x(0), &Tensor::basis(2, 0)).is_err());
    }

    #[test]
    fn poincare_duality() {
        let g = 2;
        let s = SurfaceContext::new(g).unwrap();
        let x = |i| Tensor::basis(4, i);
        for i in 0..g {
            // ξ_{g+i} ↦ X_i and ξ_i ↦ -X_{g+i}
            assert_eq!(s.poincare_dual(&x(g + i)).unwrap(), x(i));
            assert_eq!(s.poincare_dual(&x(i)).unwrap(), -&x(g + i));
        }
        for j in 0..4 {
            let y = x(j);
            assert_eq!(
                s.poincare_dual(&s.poincare_dual_inv(&y).unwrap()).unwrap(),
                y
            );
            assert_eq!(
                s.poincare_dual_inv(&s.poincare_dual(&y).unwrap()).unwrap(),
                y
            );
            for k in 0..4 {
                assert_eq!(
                    s.poincare_dual_inv(&x(j)).unwrap().coeff(&[k]),
                    s.mu(&x(j), &x(k)).unwrap()
                );
            }
        }
    }

    #[test]
    fn poincare_duality_is_symplectically_equivariant() {
        // a transvection, a rotation in the first symplectic pair, and their product
        let s = SurfaceContext::new(2).unwrap();
        let t = Matrix::from_rows(vec![
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        let j = Matrix::from_rows(vec![
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![-1, 0, 0, 0],
            vec![0, 0, 0, 1],
        ]);
        for a in [t.clone(), j.clone(), t.mul(&j).unwrap()] {
            let x = |i| Tensor::basis(4, i);
            for p in 0..4 {
                for q in 0..4 {
                    let ap = x(p).apply_linear(&a).unwrap();
                    let aq = x(q).apply_linear(&a).unwrap();
                    assert_eq!(s.mu(&ap, &aq).unwrap(), s.mu(&x(p), &x(q)).unwrap());
                }
            }
            // ϑ(ℓ∘A^{-1}) = A ϑ(ℓ); ℓ∘A^{-1} has coefficient vector (A^{-1})^T ℓ.
            let a_inv_t = a.inverse().unwrap().transpose();
            for k in 0..4 {
                let ell = x(k);
                let lhs = s
                    .poincare_dual(&ell.apply_linear(&a_inv_t).unwrap())
                    .unwrap();
                let rhs = s.poincare_dual(&ell).unwrap().apply_linear(&a).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn theta2_of_boundary() {
        for g in 1..=3 {
            let s = SurfaceContext::new(g).unwrap();
            let std = MagnusExpansion::standard(2 * g, 3).unwrap();
            assert!(s.theta2_w0_check(&std).unwrap().holds);
            let th = MagnusExpansion::new(xi_monomial(2 * g, 3, 0, &[1, 0], 2).unwrap()).unwrap();
            assert!(s.theta2_w0_check(&th).unwrap().holds);
        }
    }

    #[test]
    fn nu0_examples() {
        let s = SurfaceContext::new(1).unwrap();
        assert_eq!(s.nu0(&s.boundary_word()).unwrap(), -1);
        assert_eq!(s.nu0(&w("x2*x1*x2^-1*x1^-1", 2)).unwrap(), 1);
        let g = w("x1^2*x2^-1", 2);
        let conj = g.mul(&s.boundary_word()).unwrap().mul(&g.inv()).unwrap();
        assert_eq!(s.nu0(&conj).unwrap(), -1);
        assert!(s.nu0(&w("x1", 2)).is_err());
        let s2 = SurfaceContext::new(2).unwrap();
        assert!(s2.nu0(&w("x1*x2*x1^-1*x2^-1", 4)).is_err());
    }

    #[test]
    fn tau2_of_boundary_conjugation() {
        let s = SurfaceContext::new(1).unwrap();
        let std = MagnusExpansion::standard(2, 3).unwrap();
        assert!(s.tau2_boundary_check(&std).unwrap().holds);
        let j = Johnson::new(&std).unwrap();
        let t2 = j
            .component(&FreeGroupEndo::inner(&s.boundary_word()), 2)
            .unwrap();
        let m = |idx: &[usize], c| Tensor::monomial(2, idx, Scalar::from_int(c)).unwrap();
        let expect = &(&m(&[0, 1, 0], 2) - &m(&[1, 0, 0], 1)) - &m(&[0, 0, 1], 1);
        assert_eq!(*t2.image(&[0]), expect);
        let s2 = SurfaceContext::new(2).unwrap();
        let th = MagnusExpansion::new(xi_monomial(4, 3, 2, &[0, 3], 1).unwrap()).unwrap();
        assert!(s2.tau2_boundary_check(&th).unwrap().holds);
    }
}
