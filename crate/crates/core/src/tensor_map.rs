//! Linear maps `Hom(H^{⊗a}, H^{⊗b}) ≅ (H^*)^{⊗a} ⊗ H^{⊗b}`.
//!
//! Stored densely by source basis monomial (there are `rank^a` of them), each
//! image a sparse [`Tensor`]. With `a = 0` this is just a tensor in
//! `H^{⊗b}`; with `a = 1` it is an element of `H^* ⊗ H^{⊗b}`, the home of
//! Johnson map components, `ℓ_i ⊗ t` meaning `X_i ↦ t`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::tensor::{check_capacity, decode, key_span, Key, Tensor};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TensorMap {
    rank: usize,
    src: usize,
    dst: usize,
    images: Vec<Tensor>,
}

impl TensorMap {
    pub fn zero(rank: usize, src: usize, dst: usize) -> Result<Self> {
        check_capacity(rank, src + dst)?;
        let count = key_span(rank, src).ok_or(Error::CapacityExceeded { rank, degree: src })?;
        Ok(TensorMap {
            rank,
            src,
            dst,
            images: vec![Tensor::zero_unchecked(rank, dst); count as usize],
        })
    }

    /// Identity on `H^{⊗k}`.
    pub fn identity(rank: usize, k: usize) -> Result<Self> {
        let mut m = Self::zero(rank, k, k)?;
        for (key, img) in m.images.iter_mut().enumerate() {
            img.add_term(key as Key, Scalar::one());
        }
        Ok(m)
    }

    /// A tensor viewed as a map from the ground ring.
    pub fn from_tensor(t: Tensor) -> Self {
        TensorMap {
            rank: t.rank(),
            src: 0,
            dst: t.degree(),
            images: vec![t],
        }
    }

    /// A map `H -> H^{⊗dst}` from the images of `X_1, …, X_n`.
    pub fn from_images(images: Vec<Tensor>) -> Result<Self> {
        let rank = images.len();
        let dst = images.first().map_or(0, Tensor::degree);
        Self::from_source_images(rank, 1, dst, images)
    }

    pub fn from_source_images(
        rank: usize,
        src: usize,
        dst: usize,
        images: Vec<Tensor>,
    ) -> Result<Self> {
        check_capacity(rank, src + dst)?;
        let count = key_span(rank, src).ok_or(Error::CapacityExceeded { rank, degree: src })?;
        if images.len() as u128 != count {
            return Err(Error::ShapeMismatch(format!(
                "expected {count} images, got {}",
                images.len()
            )));
        }
        for t in &images {
            if t.rank() != rank {
                return Err(Error::RankMismatch(rank, t.rank()));
            }
            if t.degree() != dst {
                return Err(Error::DegreeMismatch {
                    expected: dst,
                    found: t.degree(),
                });
            }
        }
        Ok(TensorMap {
            rank,
            src,
            dst,
            images,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn dst(&self) -> usize {
        self.dst
    }

    pub fn images(&self) -> &[Tensor] {
        &self.images
    }

    /// Image of the basis monomial with the given (0-based) indices.
    pub fn image(&self, indices: &[usize]) -> &Tensor {
        assert_eq!(indices.len(), self.src);
        &self.images[crate::tensor::encode(self.rank, indices) as usize]
    }

    /// For `src = 0`, the underlying tensor.
    pub fn as_tensor(&self) -> Option<&Tensor> {
        (self.src == 0).then(|| &self.images[0])
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Tensor::is_zero)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        if (self.src, self.dst) != (other.src, other.dst) {
            return Err(Error::ShapeMismatch(format!(
                "Hom(H^{}, H^{}) vs Hom(H^{}, H^{})",
                self.src, self.dst, other.src, other.dst
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.images.iter_mut().zip(&other.images) {
            a.add_assign_unchecked(b);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        TensorMap {
            images: self.images.iter().map(|t| t.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// Evaluates the map on a homogeneous tensor of degree `src`.
    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        if t.rank() != self.rank {
            return Err(Error::RankMismatch(self.rank, t.rank()));
        }
        if t.degree() != self.src {
            return Err(Error::DegreeMismatch {
                expected: self.src,
                found: t.degree(),
            });
        }
        let mut out = Tensor::zero_unchecked(self.rank, self.dst);
        for (&k, c) in t.raw() {
            out.add_scaled_unchecked(&self.images[k as usize], c);
        }
        Ok(out)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &TensorMap) -> Result<TensorMap> {
        if self.rank != g.rank {
            return Err(Error::RankMismatch(self.rank, g.rank));
        }
        if self.src != g.dst {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose Hom(H^{}, H^{}) after Hom(H^{}, H^{})",
                self.src, self.dst, g.src, g.dst
            )));
        }
        let images = g
            .images
            .iter()
            .map(|t| self.apply(t))
            .collect::<Result<Vec<_>>>()?;
        TensorMap::from_source_images(self.rank, g.src, self.dst, images)
    }

    /// `self ⊗ g`, acting on `H^{⊗(a+a')}` factorwise.
    pub fn tensor(&self, g: &TensorMap) -> Result<TensorMap> {
        if self.rank != g.rank {
            return Err(Error::RankMismatch(self.rank, g.rank));
        }
        let mut out = TensorMap::zero(self.rank, self.src + g.src, self.dst + g.dst)?;
        let width = g.images.len();
        for (k1, a) in self.images.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k2, b) in g.images.iter().enumerate() {
                if !b.is_zero() {
                    out.images[k1 * width + k2].add_product_unchecked(a, b);
                }
            }
        }
        Ok(out)
    }

    /// The twisted action `A·f = A^{⊗dst} ∘ f ∘ (A^{-1})^{⊗src}`.
    pub fn act(&self, a: &Matrix, a_inv: &Matrix) -> Result<TensorMap> {
        let mut images = Vec::with_capacity(self.images.len());
        for key in 0..self.images.len() {
            let idx = decode(self.rank, self.src, key as Key);
            let pulled = Tensor::monomial(self.rank, &idx, Scalar::one())?.apply_linear(a_inv)?;
            images.push(self.apply(&pulled)?.apply_linear(a)?);
        }
        TensorMap::from_source_images(self.rank, self.src, self.dst, images)
    }

    /// For `self: H -> H^{⊗k}`, applies `1^{⊗slot} ⊗ self ⊗ 1^{⊗…}` to `t`.
    pub fn apply_at_slot(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        if self.src != 1 {
            return Err(Error::ShapeMismatch(
                "slot application needs a map out of H".into(),
            ));
        }
        if slot >= t.degree() {
            return Err(Error::DegreeOutOfRange {
                degree: slot,
                max: t.degree().saturating_sub(1),
            });
        }
        let before = TensorMap::identity(self.rank, slot)?;
        let after = TensorMap::identity(self.rank, t.degree() - slot - 1)?;
        before.tensor(self)?.tensor(&after)?.apply(t)
    }

    /// The contraction `f ⊗ v_0 ⊗ … ⊗ v_p ↦ f(v_0) v_1 ⊗ … ⊗ v_p` of a map
    /// `H -> H^{⊗(p+1)}`.
    pub fn contract(&self) -> Result<Tensor> {
        if self.src != 1 || self.dst == 0 {
            return Err(Error::ShapeMismatch(
                "contraction needs an element of H^* ⊗ H^{⊗(p+1)}".into(),
            ));
        }
        let mut out = Tensor::zero_unchecked(self.rank, self.dst - 1);
        for (i, img) in self.images.iter().enumerate() {
            out.add_assign_unchecked(&img.split_first()[i]);
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero())
            .map(|(k, t)| {
                let idx = decode(self.rank, self.src, k as Key);
                let src: String = idx.iter().map(|i| format!("X{}", i + 1)).collect();
                let src = if src.is_empty() { "1".to_string() } else { src };
                format!("{src} -> {}", t.render())
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("; ")
        }
    }
}

impl fmt::Debug for TensorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TensorMap(rank={}, H^{} -> H^{}: {})",
            self.rank,
            self.src,
            self.dst,
            self.render()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(rank: usize, idx: &[usize], c: i64) -> Tensor {
        Tensor::monomial(rank, idx, Scalar::from_int(c)).unwrap()
    }

    #[test]
    fn compose_and_tensor() {
        // u: X1 -> X1X2, X2 -> 0
        let u =
            TensorMap::from_images(vec![mono(2, &[0, 1], 1), Tensor::zero(2, 2).unwrap()]).unwrap();
        let id = TensorMap::identity(2, 1).unwrap();
        let u1 = u.tensor(&id).unwrap();
        // (u ⊗ 1) ∘ u : X1 -> X1 X2 X2
        let c = u1.compose(&u).unwrap();
        assert_eq!(c.image(&[0]), &mono(2, &[0, 1, 1], 1));
        assert!(c.image(&[1]).is_zero());
        // (1 ⊗ u) ∘ u : X1 -> X1 (u(X2)) = 0
        let c2 = id.tensor(&u).unwrap().compose(&u).unwrap();
        assert!(c2.is_zero());
    }

    #[test]
    fn contraction_traces_first_slot() {
        let u =
            TensorMap::from_images(vec![mono(2, &[0, 1], 1), Tensor::zero(2, 2).unwrap()]).unwrap();
        assert_eq!(u.contract().unwrap(), mono(2, &[1], 1));
        let v =
            TensorMap::from_images(vec![mono(2, &[1, 0], 1), Tensor::zero(2, 2).unwrap()]).unwrap();
        assert!(v.contract().unwrap().is_zero());
    }

    #[test]
    fn act_by_identity_is_trivial() {
        let u = TensorMap::from_images(vec![mono(2, &[0, 1], 3), mono(2, &[1, 1], -1)]).unwrap();
        let id = Matrix::identity(2);
        assert_eq!(u.act(&id, &id).unwrap(), u);
    }

    #[test]
    fn act_by_swap() {
        let u =
            TensorMap::from_images(vec![mono(2, &[0, 1], 1), Tensor::zero(2, 2).unwrap()]).unwrap();
        let swap = Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        let v = u.act(&swap, &swap).unwrap();
        // A u A^{-1}: X2 -> A X1 -> A^{⊗2}(X1X2) = X2X1
        assert!(v.image(&[0]).is_zero());
        assert_eq!(v.image(&[1]), &mono(2, &[1, 0], 1));
    }

    #[test]
    fn slot_application() {
        let u =
            TensorMap::from_images(vec![mono(2, &[0, 1], 1), Tensor::zero(2, 2).unwrap()]).unwrap();
        let t = mono(2, &[1, 0], 1);
        assert_eq!(u.apply_at_slot(&t, 1).unwrap(), mono(2, &[1, 0, 1], 1));
        assert!(u.apply_at_slot(&t, 0).unwrap().is_zero());
    }
}
