//! Sparse homogeneous tensors in `H^{⊗m}`.
//!
//! A basis monomial `X_{i_1} ⊗ … ⊗ X_{i_m}` is packed into a `u128` as the
//! base-`rank` number with digits `i_1 … i_m` (most significant first), so
//! the natural key order is lexicographic order on index sequences and
//! concatenation is `a * rank^|b| + b`. Indices are 0-based in the API and
//! 1-based in text and JSON.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub type Key = u128;

/// `rank^k`, or `None` if it does not fit a key.
pub(crate) fn key_span(rank: usize, k: usize) -> Option<u128> {
    (rank as u128).checked_pow(k as u32)
}

pub(crate) fn check_capacity(rank: usize, degree: usize) -> Result<()> {
    if rank == 0 {
        return Err(Error::InvalidRank(rank));
    }
    // Keys for degree m live in [0, rank^m); concatenation needs rank^m itself.
    match key_span(rank, degree) {
        Some(_) => Ok(()),
        None => Err(Error::CapacityExceeded { rank, degree }),
    }
}

pub(crate) fn encode(rank: usize, indices: &[usize]) -> Key {
    indices
        .iter()
        .fold(0u128, |acc, &i| acc * rank as u128 + i as u128)
}

pub(crate) fn decode(rank: usize, degree: usize, mut key: Key) -> Vec<usize> {
    let mut out = vec![0; degree];
    for slot in out.iter_mut().rev() {
        *slot = (key % rank as u128) as usize;
        key /= rank as u128;
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    rank: usize,
    degree: usize,
    terms: BTreeMap<Key, Scalar>,
}

impl Tensor {
    pub fn zero(rank: usize, degree: usize) -> Result<Self> {
        check_capacity(rank, degree)?;
        Ok(Self::zero_unchecked(rank, degree))
    }

    pub(crate) fn zero_unchecked(rank: usize, degree: usize) -> Self {
        Tensor {
            rank,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(rank: usize, c: Scalar) -> Self {
        let mut t = Self::zero_unchecked(rank, 0);
        t.add_term(0, c);
        t
    }

    /// The basis vector `X_i` of `H` (0-based `i`).
    pub fn basis(rank: usize, i: usize) -> Self {
        assert!(i < rank, "basis index {i} out of range for rank {rank}");
        let mut t = Self::zero_unchecked(rank, 1);
        t.add_term(i as Key, Scalar::one());
        t
    }

    pub fn monomial(rank: usize, indices: &[usize], c: Scalar) -> Result<Self> {
        let mut t = Self::zero(rank, indices.len())?;
        for &i in indices {
            if i >= rank {
                return Err(Error::IndexOutOfRange { index: i + 1, rank });
            }
        }
        t.add_term(encode(rank, indices), c);
        Ok(t)
    }

    pub fn from_terms<I>(rank: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut t = Self::zero(rank, degree)?;
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= rank) {
                return Err(Error::IndexOutOfRange {
                    index: bad + 1,
                    rank,
                });
            }
            t.add_term(encode(rank, &idx), c);
        }
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, indices: &[usize]) -> Scalar {
        if indices.len() != self.degree || indices.iter().any(|&i| i >= self.rank) {
            return Scalar::zero();
        }
        self.terms
            .get(&encode(self.rank, indices))
            .cloned()
            .unwrap_or_default()
    }

    /// The degree-0 value, for degree-0 tensors.
    pub fn scalar_value(&self) -> Scalar {
        debug_assert_eq!(self.degree, 0);
        self.terms.get(&0).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.terms
            .iter()
            .map(move |(&k, c)| (decode(self.rank, self.degree, k), c))
    }

    pub(crate) fn raw(&self) -> &BTreeMap<Key, Scalar> {
        &self.terms
    }

    pub(crate) fn add_term(&mut self, key: Key, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get_mut();
                *v += &c;
                if v.is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, key: Key, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let v = e.get_mut();
                *v += c;
                if v.is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.add_scaled_unchecked(other, &Scalar::from_int(-1));
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Tensor) {
        debug_assert_eq!((self.rank, self.degree), (other.rank, other.degree));
        for (&k, c) in &other.terms {
            self.add_term_ref(k, c);
        }
    }

    pub(crate) fn add_scaled_unchecked(&mut self, other: &Tensor, s: &Scalar) {
        debug_assert_eq!((self.rank, self.degree), (other.rank, other.degree));
        if s.is_zero() {
            return;
        }
        for (&k, c) in &other.terms {
            self.add_term(k, c * s);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Tensor {
        if s.is_zero() {
            return Self::zero_unchecked(self.rank, self.degree);
        }
        Tensor {
            rank: self.rank,
            degree: self.degree,
            terms: self.terms.iter().map(|(&k, c)| (k, c * s)).collect(),
        }
    }

    /// Tensor (concatenation) product `self ⊗ other`.
    pub fn try_concat(&self, other: &Tensor) -> Result<Tensor> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        check_capacity(self.rank, self.degree + other.degree)?;
        let mut out = Self::zero_unchecked(self.rank, self.degree + other.degree);
        out.add_product_unchecked(self, other);
        Ok(out)
    }

    pub fn concat(&self, other: &Tensor) -> Tensor {
        self.try_concat(other).expect("tensor concatenation")
    }

    /// `self += a ⊗ b`; degrees must already agree.
    pub(crate) fn add_product_unchecked(&mut self, a: &Tensor, b: &Tensor) {
        debug_assert_eq!(self.degree, a.degree + b.degree);
        let shift = key_span(self.rank, b.degree).expect("capacity checked");
        for (&ka, ca) in &a.terms {
            let base = ka * shift;
            for (&kb, cb) in &b.terms {
                self.add_term(base + kb, ca * cb);
            }
        }
    }

    /// Applies `A^{⊗m}` where column `j` of `A` is the image of `X_j`.
    pub fn apply_linear(&self, a: &Matrix) -> Result<Tensor> {
        if a.rows() != self.rank || a.cols() != self.rank {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix on rank {}",
                a.rows(),
                a.cols(),
                self.rank
            )));
        }
        let n = self.rank as u128;
        let columns: Vec<Vec<(u128, Scalar)>> = (0..self.rank)
            .map(|j| {
                (0..self.rank)
                    .filter_map(|i| {
                        let c = a.get(i, j);
                        (!c.is_zero()).then(|| (i as u128, c.clone()))
                    })
                    .collect()
            })
            .collect();
        let mut current = self.terms.clone();
        // Rewrite one slot at a time; slot s has weight n^(m-1-s).
        for slot in 0..self.degree {
            let weight = key_span(self.rank, self.degree - 1 - slot).expect("capacity");
            let mut next = Tensor::zero_unchecked(self.rank, self.degree);
            for (k, c) in current {
                let digit = (k / weight) % n;
                let cleared = k - digit * weight;
                for (i, a_ij) in &columns[digit as usize] {
                    next.add_term(cleared + i * weight, &c * a_ij);
                }
            }
            current = next.terms;
        }
        Ok(Tensor {
            rank: self.rank,
            degree: self.degree,
            terms: current,
        })
    }

    /// Splits off the first tensor factor: returns, for each `i`, the tensor
    /// `t_i` of degree `m-1` with `self = Σ_i X_i ⊗ t_i`.
    pub fn split_first(&self) -> Vec<Tensor> {
        assert!(self.degree >= 1, "split_first on a degree-0 tensor");
        let weight = key_span(self.rank, self.degree - 1).expect("capacity");
        let mut out = vec![Tensor::zero_unchecked(self.rank, self.degree - 1); self.rank];
        for (&k, c) in &self.terms {
            out[(k / weight) as usize].add_term_ref(k % weight, c);
        }
        out
    }

    /// Contracts the first slot against the covector `Σ_i f_i ℓ_i`, given by
    /// its coefficients `f` as a degree-1 tensor.
    pub fn contract_first(&self, covector: &Tensor) -> Result<Tensor> {
        if covector.degree != 1 || covector.rank != self.rank || self.degree == 0 {
            return Err(Error::ShapeMismatch(
                "contraction needs a covector and a tensor of degree >= 1".into(),
            ));
        }
        let parts = self.split_first();
        let mut out = Tensor::zero_unchecked(self.rank, self.degree - 1);
        for (&i, f) in &covector.terms {
            out.add_scaled_unchecked(&parts[i as usize], f);
        }
        Ok(out)
    }

    /// Human-readable form, e.g. `2*X1X2 - 1/2*X2`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, (idx, c)) in self.iter().enumerate() {
            let mono: String = idx.iter().map(|i| format!("X{}", i + 1)).collect();
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => s.push_str(&mag.to_string()),
                (false, true) => s.push_str(&mono),
                (false, false) => s.push_str(&format!("{mag}*{mono}")),
            }
        }
        s
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Tensor(rank={}, deg={}: {})",
            self.rank,
            self.degree,
            self.render()
        )
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// Operators panic on shape mismatch; use the `try_*` methods on untrusted input.

impl Add<&Tensor> for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        self.try_add(rhs).expect("tensor add")
    }
}

impl Sub<&Tensor> for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        self.try_sub(rhs).expect("tensor sub")
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(&Scalar::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(rank: usize, idx: &[usize]) -> Tensor {
        Tensor::monomial(rank, idx, Scalar::one()).unwrap()
    }

    #[test]
    fn key_order_is_lexicographic() {
        let t = Tensor::from_terms(
            3,
            2,
            vec![
                (vec![2, 0], Scalar::one()),
                (vec![0, 2], Scalar::one()),
                (vec![1, 1], Scalar::one()),
            ],
        )
        .unwrap();
        let order: Vec<_> = t.iter().map(|(i, _)| i).collect();
        assert_eq!(order, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn no_zero_coefficients_are_stored() {
        let a = x(2, &[0, 1]);
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn concat_is_noncommutative() {
        let a = x(2, &[0]);
        let b = x(2, &[1]);
        assert_eq!(a.concat(&b), x(2, &[0, 1]));
        assert_ne!(a.concat(&b), b.concat(&a));
    }

    #[test]
    fn apply_linear_permutation() {
        let swap = Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        let t = x(2, &[0, 0, 1]);
        assert_eq!(t.apply_linear(&swap).unwrap(), x(2, &[1, 1, 0]));
    }

    #[test]
    fn apply_linear_expands_each_slot() {
        // X1 -> X1 + X2 on slot images: (X1)^{⊗2} -> (X1+X2)^{⊗2}
        let a = Matrix::from_rows(vec![vec![1, 0], vec![1, 1]]);
        let t = x(2, &[0, 0]);
        let expect = Tensor::from_terms(
            2,
            2,
            vec![
                (vec![0, 0], Scalar::one()),
                (vec![0, 1], Scalar::one()),
                (vec![1, 0], Scalar::one()),
                (vec![1, 1], Scalar::one()),
            ],
        )
        .unwrap();
        assert_eq!(t.apply_linear(&a).unwrap(), expect);
    }

    #[test]
    fn capacity_is_checked() {
        assert!(Tensor::zero(5, 55).is_ok());
        assert!(Tensor::zero(5, 56).is_err());
    }

    #[test]
    fn contraction() {
        let t = x(2, &[0, 1]);
        let l1 = Tensor::basis(2, 0);
        let l2 = Tensor::basis(2, 1);
        assert_eq!(t.contract_first(&l1).unwrap(), x(2, &[1]));
        assert!(t.contract_first(&l2).unwrap().is_zero());
    }

    #[test]
    fn render_readable() {
        let t = Tensor::from_terms(
            2,
            2,
            vec![
                (vec![0, 1], Scalar::one()),
                (vec![1, 0], Scalar::from_int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(t.render(), "X1X2 - X2X1");
    }
}
