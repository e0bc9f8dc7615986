//! Filtered algebra endomorphisms of `T̂`, given by generator images.
//!
//! Composition is `(U∘V)(z) = U(V(z))` everywhere in this crate.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{GLMatrix, Matrix};
use crate::series::TruncatedSeries;
use crate::tensor::Tensor;
use crate::tensor_map::TensorMap;

/// An algebra endomorphism `X_i ↦ images[i]` with every image in `T̂_1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraMap {
    rank: usize,
    trunc: usize,
    images: Vec<TruncatedSeries>,
}

impl AlgebraMap {
    pub fn new(images: Vec<TruncatedSeries>) -> Result<Self> {
        let first = images
            .first()
            .ok_or_else(|| Error::ShapeMismatch("algebra map needs generator images".into()))?;
        let (rank, trunc) = (first.rank(), first.trunc());
        if images.len() != rank {
            return Err(Error::ShapeMismatch(format!(
                "rank {rank} needs {rank} images, got {}",
                images.len()
            )));
        }
        for (i, s) in images.iter().enumerate() {
            first.check_compatible(s)?;
            if !s.constant_term().is_zero() {
                return Err(Error::NotAugmented(i + 1));
            }
        }
        Ok(AlgebraMap {
            rank,
            trunc,
            images,
        })
    }

    pub fn identity(rank: usize, trunc: usize) -> Result<Self> {
        let images = (0..rank)
            .map(|i| TruncatedSeries::generator(rank, trunc, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }

    /// The automorphism `z_m ↦ A^{⊗m} z_m` induced by a linear map of `H`.
    pub fn from_linear(a: &Matrix, trunc: usize) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::ShapeMismatch("linear part must be square".into()));
        }
        let rank = a.rows();
        let images = (0..rank)
            .map(|j| TruncatedSeries::from_tensors(rank, trunc, [a.column(j)]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn images(&self) -> &[TruncatedSeries] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &TruncatedSeries {
        &self.images[i]
    }

    fn check_series(&self, z: &TruncatedSeries) -> Result<()> {
        if z.rank() != self.rank {
            return Err(Error::RankMismatch(self.rank, z.rank()));
        }
        if z.trunc() != self.trunc {
            return Err(Error::TruncationMismatch(self.trunc, z.trunc()));
        }
        Ok(())
    }

    fn check_map(&self, other: &AlgebraMap) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    /// Ring-homomorphic substitution `X_i ↦ U(X_i)`.
    pub fn apply(&self, z: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_series(z)?;
        Ok(self.apply_upto(z, self.trunc))
    }

    /// Substitution keeping degrees `<= max_deg` only.
    pub(crate) fn apply_upto(&self, z: &TruncatedSeries, max_deg: usize) -> TruncatedSeries {
        self.substitute(z.components(), max_deg)
    }

    // Horner along the first letter: U(z) = z_0 + Σ_i U(X_i) · U(∂_i z),
    // where ∂_i z strips a leading X_i. Since U(X_i) ∈ T̂_1 the inner call
    // only needs one degree less.
    fn substitute(&self, comps: &[Tensor], budget: usize) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero_unchecked(self.rank, self.trunc);
        out.set_component(comps[0].clone());
        if budget == 0 {
            return out;
        }
        let top = budget.min(comps.len() - 1);
        let mut subs: Vec<Vec<Tensor>> = (0..self.rank)
            .map(|_| {
                (0..top)
                    .map(|d| Tensor::zero_unchecked(self.rank, d))
                    .collect()
            })
            .collect();
        for d in 1..=top {
            if comps[d].is_zero() {
                continue;
            }
            for (i, part) in comps[d].split_first().into_iter().enumerate() {
                subs[i][d - 1] = part;
            }
        }
        for (i, sub) in subs.iter().enumerate() {
            if sub.iter().all(Tensor::is_zero) {
                continue;
            }
            let inner = self.substitute(sub, budget - 1);
            let term = self.images[i].mul_upto(&inner, budget);
            for t in term.components() {
                if !t.is_zero() {
                    out.add_to_component(t);
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgebraMap) -> Result<AlgebraMap> {
        self.check_map(other)?;
        let images = other
            .images
            .iter()
            .map(|s| self.apply_upto(s, self.trunc))
            .collect();
        Ok(AlgebraMap {
            rank: self.rank,
            trunc: self.trunc,
            images,
        })
    }

    /// The induced map `|U|` on `H = T̂_1/T̂_2`.
    pub fn linear_part(&self) -> GLMatrix {
        let cols: Vec<Tensor> = self.images.iter().map(|s| s.comp(1).clone()).collect();
        Matrix::from_columns(&cols).expect("degree-1 columns")
    }

    /// Filtered automorphism test: images in `T̂_1` (enforced on construction)
    /// and `|U|` invertible over the rationals.
    pub fn is_filtered_automorphism(&self) -> bool {
        matches!(self.linear_part().det(), Ok(d) if !d.is_zero())
    }

    /// Like [`Self::is_filtered_automorphism`] but requiring `|U|` unimodular.
    pub fn is_integral_automorphism(&self) -> bool {
        self.linear_part().is_unimodular()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, s)| {
            s.components().iter().enumerate().all(|(m, t)| {
                if m == 1 {
                    *t == Tensor::basis(self.rank, i)
                } else {
                    t.is_zero()
                }
            })
        })
    }

    /// Solves `U z = w` degree by degree: `|U|^{⊗m} z_m = w_m - (terms in
    /// z_1, …, z_{m-1})`. The inverse of `|U|` is computed once.
    pub fn preimage(&self, w: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_series(w)?;
        let lin_inv = self.linear_part().inverse()?;
        self.preimage_with(w, &lin_inv)
    }

    fn preimage_with(&self, w: &TruncatedSeries, lin_inv: &Matrix) -> Result<TruncatedSeries> {
        let mut z = TruncatedSeries::zero_unchecked(self.rank, self.trunc);
        z.set_component(w.comp(0).clone());
        z.set_component(w.comp(1).apply_linear(lin_inv)?);
        for m in 2..=self.trunc {
            let current = self.apply_upto(&z, m);
            let residual = w.comp(m).try_sub(current.comp(m))?;
            if !residual.is_zero() {
                z.set_component(residual.apply_linear(lin_inv)?);
            }
        }
        Ok(z)
    }

    /// The inverse automorphism, up to degree `N`.
    pub fn invert(&self) -> Result<AlgebraMap> {
        let lin_inv = self.linear_part().inverse()?;
        let images = (0..self.rank)
            .map(|i| {
                let x = TruncatedSeries::generator(self.rank, self.trunc, i)?;
                self.preimage_with(&x, &lin_inv)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraMap {
            rank: self.rank,
            trunc: self.trunc,
            images,
        })
    }

    /// Coordinates `u_p = (U - 1)|_H` in degree `p+1`, for `U ∈ IA(T̂)`.
    pub fn to_ia_coordinates(&self) -> Result<IACoordinates> {
        if !self.linear_part().is_identity() {
            return Err(Error::NotIa);
        }
        let u = (1..self.trunc)
            .map(|p| {
                let imgs = self.images.iter().map(|s| s.comp(p + 1).clone()).collect();
                TensorMap::from_source_images(self.rank, 1, p + 1, imgs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IACoordinates {
            rank: self.rank,
            trunc: self.trunc,
            u,
        })
    }

    pub fn from_ia_coordinates(c: &IACoordinates) -> Result<AlgebraMap> {
        let images = (0..c.rank)
            .map(|i| {
                let mut parts = vec![Tensor::basis(c.rank, i)];
                parts.extend(c.u.iter().map(|u| u.images()[i].clone()));
                TruncatedSeries::from_tensors(c.rank, c.trunc, parts)
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraMap::new(images)
    }

    /// Re-truncates every image.
    pub fn with_trunc(&self, trunc: usize) -> Result<AlgebraMap> {
        let images = self
            .images
            .iter()
            .map(|s| s.with_trunc(trunc))
            .collect::<Result<Vec<_>>>()?;
        AlgebraMap::new(images)
    }
}

impl AlgebraMap {
    pub fn render(&self) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(i, s)| format!("X{} -> {}", i + 1, s.render()))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Debug for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AlgebraMap(rank={}, N={}) {{", self.rank, self.trunc)?;
        for (i, s) in self.images.iter().enumerate() {
            writeln!(f, "  X{} -> {}", i + 1, s.render())?;
        }
        write!(f, "}}")
    }
}

/// `E(U) = U|_H - 1_H` split into components `u_p: H -> H^{⊗(p+1)}`,
/// `p = 1..N-1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IACoordinates {
    rank: usize,
    trunc: usize,
    u: Vec<TensorMap>,
}

impl IACoordinates {
    pub fn new(rank: usize, trunc: usize, u: Vec<TensorMap>) -> Result<Self> {
        if u.len() + 1 != trunc {
            return Err(Error::ShapeMismatch(format!(
                "N={trunc} needs {} components, got {}",
                trunc - 1,
                u.len()
            )));
        }
        for (p, m) in u.iter().enumerate() {
            if m.rank() != rank || m.src() != 1 || m.dst() != p + 2 {
                return Err(Error::ShapeMismatch(format!(
                    "component {} must map H to H^{}",
                    p + 1,
                    p + 2
                )));
            }
        }
        Ok(IACoordinates { rank, trunc, u })
    }

    pub fn zero(rank: usize, trunc: usize) -> Result<Self> {
        let u = (1..trunc)
            .map(|p| TensorMap::zero(rank, 1, p + 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(IACoordinates { rank, trunc, u })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Component `u_p`, `1 <= p <= N-1`.
    pub fn component(&self, p: usize) -> Result<&TensorMap> {
        if p == 0 {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                max: self.trunc - 1,
            });
        }
        self.u.get(p - 1).ok_or(Error::DegreeOutOfRange {
            degree: p,
            max: self.trunc - 1,
        })
    }

    pub fn components(&self) -> &[TensorMap] {
        &self.u
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().all(TensorMap::is_zero)
    }
}

/// Low-degree group law on `Hom(H, T̂_2) × GL(H)`: for
/// `((w, C)) = ((u, A))((v, B))` returns `(w_1, w_2, C)` with
/// `w_1 = u_1 + A v_1`, `w_2 = u_2 + (u_1⊗1 + 1⊗u_1) A v_1 + A v_2`,
/// `C = AB`, where `A v_p = A^{⊗(p+1)} v_p A^{-1}`.
pub fn compose_ia_low(
    u: &IACoordinates,
    a: &GLMatrix,
    v: &IACoordinates,
    b: &GLMatrix,
) -> Result<(TensorMap, TensorMap, GLMatrix)> {
    let need = |c: &IACoordinates, name: &str| -> Result<(TensorMap, TensorMap)> {
        let p1 =
            c.u.first()
                .ok_or_else(|| Error::MissingComponent(format!("{name}_1")))?;
        let p2 =
            c.u.get(1)
                .ok_or_else(|| Error::MissingComponent(format!("{name}_2")))?;
        Ok((p1.clone(), p2.clone()))
    };
    let (u1, u2) = need(u, "u")?;
    let (v1, v2) = need(v, "v")?;
    let a_inv = a.inverse()?;
    let av1 = v1.act(a, &a_inv)?;
    let av2 = v2.act(a, &a_inv)?;
    let w1 = u1.try_add(&av1)?;
    let id = TensorMap::identity(u.rank, 1)?;
    let d_u1 = u1.tensor(&id)?.try_add(&id.tensor(&u1)?)?;
    let w2 = u2.try_add(&d_u1.compose(&av1)?)?.try_add(&av2)?;
    Ok((w1, w2, a.mul(b)?))
}

/// `((u, A)) = E^{-1}(u) ∘ A` as an algebra map.
pub fn pair_to_map(u: &IACoordinates, a: &GLMatrix) -> Result<AlgebraMap> {
    AlgebraMap::from_ia_coordinates(u)?.compose(&AlgebraMap::from_linear(a, u.trunc)?)
}

/// Splits an automorphism `W` into `((w, C))` with `C = |W|`.
pub fn map_to_pair(w: &AlgebraMap) -> Result<(IACoordinates, GLMatrix)> {
    let c = w.linear_part();
    let c_inv = AlgebraMap::from_linear(&c.inverse()?, w.trunc)?;
    Ok((w.compose(&c_inv)?.to_ia_coordinates()?, c))
}

/// The map `X_i ↦ X_i + Σ t` adding the listed homogeneous terms to chosen
/// generator images.
pub fn ia_from_terms(rank: usize, trunc: usize, extra: Vec<(usize, Tensor)>) -> Result<AlgebraMap> {
    let mut images = (0..rank)
        .map(|i| TruncatedSeries::generator(rank, trunc, i))
        .collect::<Result<Vec<_>>>()?;
    for (i, t) in extra {
        let add = TruncatedSeries::from_tensors(rank, trunc, [t])?;
        images[i] = images[i].add(&add)?;
    }
    AlgebraMap::new(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn mono(rank: usize, idx: &[usize], c: i64) -> Tensor {
        Tensor::monomial(rank, idx, Scalar::from_int(c)).unwrap()
    }

    fn series(rank: usize, n: usize, parts: Vec<Tensor>) -> TruncatedSeries {
        TruncatedSeries::from_tensors(rank, n, parts).unwrap()
    }

    /// X1 ↦ X1 + X1², X2 ↦ X2
    fn u_sq(n: usize) -> AlgebraMap {
        ia_from_terms(2, n, vec![(0, mono(2, &[0, 0], 1))]).unwrap()
    }

    #[test]
    fn apply_identity_and_substitution() {
        let z = series(2, 4, vec![mono(2, &[0, 1], 1), mono(2, &[1], 3)]);
        assert_eq!(AlgebraMap::identity(2, 4).unwrap().apply(&z).unwrap(), z);
        let x1x2 = series(2, 4, vec![mono(2, &[0, 1], 1)]);
        let got = u_sq(4).apply(&x1x2).unwrap();
        assert_eq!(
            got,
            series(2, 4, vec![mono(2, &[0, 1], 1), mono(2, &[0, 0, 1], 1)])
        );
    }

    #[test]
    fn compose_twice_by_hand() {
        // (U∘U)(X1) = U(X1 + X1²) = X1 + X1² + (X1 + X1²)² = X1 + 2X1² + 2X1³ + X1⁴
        let u = u_sq(4);
        let uu = u.compose(&u).unwrap();
        let expect = series(
            2,
            4,
            vec![
                mono(2, &[0], 1),
                mono(2, &[0, 0], 2),
                mono(2, &[0, 0, 0], 2),
                mono(2, &[0, 0, 0, 0], 1),
            ],
        );
        assert_eq!(uu.image(0), &expect);
        // at N = 3 the X1^4 term is cut
        let uu3 = u_sq(3).compose(&u_sq(3)).unwrap();
        assert_eq!(uu3.image(0), &expect.with_trunc(3).unwrap());
    }

    #[test]
    fn linear_part_examples() {
        assert!(AlgebraMap::identity(3, 3)
            .unwrap()
            .linear_part()
            .is_identity());
        let swap = Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(
            AlgebraMap::from_linear(&swap, 3).unwrap().linear_part(),
            swap
        );
        assert!(u_sq(3).linear_part().is_identity());
    }

    #[test]
    fn filtered_automorphism_examples() {
        assert!(AlgebraMap::identity(2, 3)
            .unwrap()
            .is_filtered_automorphism());
        let unip =
            AlgebraMap::from_linear(&Matrix::from_rows(vec![vec![1, 0], vec![1, 1]]), 3).unwrap();
        assert!(unip.is_filtered_automorphism());
        let sing =
            AlgebraMap::from_linear(&Matrix::from_rows(vec![vec![1, 1], vec![1, 1]]), 3).unwrap();
        assert!(!sing.is_filtered_automorphism());
        assert_eq!(sing.invert(), Err(Error::Singular));
    }

    #[test]
    fn invert_example() {
        // V(X1) = X1 - X1² + 2X1³ at N = 3
        let v = u_sq(3).invert().unwrap();
        let expect = series(
            2,
            3,
            vec![
                mono(2, &[0], 1),
                mono(2, &[0, 0], -1),
                mono(2, &[0, 0, 0], 2),
            ],
        );
        assert_eq!(v.image(0), &expect);
        assert!(u_sq(3).compose(&v).unwrap().is_identity());
        assert!(v.compose(&u_sq(3)).unwrap().is_identity());
    }

    #[test]
    fn invert_linear_is_matrix_inverse() {
        let a = Matrix::from_rows(vec![vec![2, 1], vec![7, 4]]);
        let v = AlgebraMap::from_linear(&a, 4).unwrap().invert().unwrap();
        assert_eq!(
            v,
            AlgebraMap::from_linear(&a.inverse().unwrap(), 4).unwrap()
        );
        assert!(AlgebraMap::identity(2, 4)
            .unwrap()
            .invert()
            .unwrap()
            .is_identity());
    }

    #[test]
    fn ia_coordinates_read_off() {
        let id = AlgebraMap::identity(2, 4).unwrap();
        assert!(id.to_ia_coordinates().unwrap().is_zero());
        let u = ia_from_terms(2, 4, vec![(0, mono(2, &[1, 1], 1))]).unwrap();
        let c = u.to_ia_coordinates().unwrap();
        assert_eq!(c.component(1).unwrap().images()[0], mono(2, &[1, 1], 1));
        assert!(c.component(1).unwrap().images()[1].is_zero());
        assert!(c.component(2).unwrap().is_zero());
        assert_eq!(AlgebraMap::from_ia_coordinates(&c).unwrap(), u);
        let lin =
            AlgebraMap::from_linear(&Matrix::from_rows(vec![vec![1, 0], vec![1, 1]]), 3).unwrap();
        assert_eq!(lin.to_ia_coordinates(), Err(Error::NotIa));
    }

    #[test]
    fn compose_ia_low_hand_example() {
        // u1 = ℓ1⊗X1X2, v1 = ℓ2⊗X2X1, A = B = id.
        let rank = 2;
        let z2 = Tensor::zero(rank, 2).unwrap();
        let u1 = TensorMap::from_images(vec![mono(rank, &[0, 1], 1), z2.clone()]).unwrap();
        let v1 = TensorMap::from_images(vec![z2.clone(), mono(rank, &[1, 0], 1)]).unwrap();
        let zero2 = TensorMap::zero(rank, 1, 3).unwrap();
        let u = IACoordinates::new(rank, 3, vec![u1.clone(), zero2.clone()]).unwrap();
        let v = IACoordinates::new(rank, 3, vec![v1.clone(), zero2]).unwrap();
        let id = Matrix::identity(rank);
        let (w1, w2, c) = compose_ia_low(&u, &id, &v, &id).unwrap();
        assert_eq!(w1, u1.try_add(&v1).unwrap());
        assert_eq!(w2.images()[1], mono(rank, &[1, 0, 1], 1));
        assert!(w2.images()[0].is_zero());
        assert!(c.is_identity());
    }

    #[test]
    fn compose_ia_low_requires_degree_two() {
        let u = IACoordinates::zero(2, 2).unwrap();
        let id = Matrix::identity(2);
        assert!(matches!(
            compose_ia_low(&u, &id, &u, &id),
            Err(Error::MissingComponent(_))
        ));
    }

    #[test]
    fn preimage_preserves_filtration() {
        let u = u_sq(5);
        let w = series(
            2,
            5,
            vec![mono(2, &[0, 1, 1], 1), mono(2, &[1, 1, 1, 0], -2)],
        );
        let z = u.preimage(&w).unwrap();
        assert!(z.in_ideal(3));
        assert_eq!(u.apply(&z).unwrap(), w);
    }
}
