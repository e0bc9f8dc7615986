//! Truncated noncommutative power series `T̂ / T̂_{N+1}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{check_capacity, Tensor};

/// An element of the completed tensor algebra cut at degree `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    rank: usize,
    trunc: usize,
    comps: Vec<Tensor>,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, trunc: usize) -> Result<Self> {
        if trunc < 2 {
            return Err(Error::InvalidTruncation(trunc));
        }
        check_capacity(rank, trunc)?;
        Ok(Self::zero_unchecked(rank, trunc))
    }

    pub(crate) fn zero_unchecked(rank: usize, trunc: usize) -> Self {
        TruncatedSeries {
            rank,
            trunc,
            comps: (0..=trunc)
                .map(|m| Tensor::zero_unchecked(rank, m))
                .collect(),
        }
    }

    pub fn constant(rank: usize, trunc: usize, c: Scalar) -> Result<Self> {
        let mut s = Self::zero(rank, trunc)?;
        s.comps[0] = Tensor::scalar(rank, c);
        Ok(s)
    }

    pub fn one(rank: usize, trunc: usize) -> Result<Self> {
        Self::constant(rank, trunc, Scalar::one())
    }

    /// The generator `X_i` (0-based).
    pub fn generator(rank: usize, trunc: usize, i: usize) -> Result<Self> {
        if i >= rank {
            return Err(Error::IndexOutOfRange { index: i + 1, rank });
        }
        let mut s = Self::zero(rank, trunc)?;
        s.comps[1] = Tensor::basis(rank, i);
        Ok(s)
    }

    /// Builds a series from homogeneous pieces; pieces above `N` are dropped.
    pub fn from_tensors<I>(rank: usize, trunc: usize, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = Tensor>,
    {
        let mut s = Self::zero(rank, trunc)?;
        for t in parts {
            if t.rank() != rank {
                return Err(Error::RankMismatch(rank, t.rank()));
            }
            if t.degree() <= trunc {
                s.comps[t.degree()].add_assign_unchecked(&t);
            }
        }
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The truncation degree `N`.
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn component(&self, m: usize) -> Result<&Tensor> {
        self.comps.get(m).ok_or(Error::DegreeOutOfRange {
            degree: m,
            max: self.trunc,
        })
    }

    pub fn components(&self) -> &[Tensor] {
        &self.comps
    }

    pub(crate) fn comp(&self, m: usize) -> &Tensor {
        &self.comps[m]
    }

    pub(crate) fn set_component(&mut self, t: Tensor) {
        debug_assert_eq!(t.rank(), self.rank);
        let m = t.degree();
        self.comps[m] = t;
    }

    pub(crate) fn add_to_component(&mut self, t: &Tensor) {
        self.comps[t.degree()].add_assign_unchecked(t);
    }

    pub fn constant_term(&self) -> Scalar {
        self.comps[0].scalar_value()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Tensor::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.constant_term().is_one() && self.comps[1..].iter().all(Tensor::is_zero)
    }

    /// Lowest degree with a nonzero component, or `None` for the zero series.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.comps.iter().position(|t| !t.is_zero())
    }

    /// True when the components of degree `< p` vanish (membership in `T̂_p`).
    pub fn in_ideal(&self, p: usize) -> bool {
        self.comps.iter().take(p).all(Tensor::is_zero)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            a.add_assign_unchecked(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        TruncatedSeries {
            rank: self.rank,
            trunc: self.trunc,
            comps: self.comps.iter().map(|t| t.scale(s)).collect(),
        }
    }

    /// Concatenation product, discarding degrees above `N`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_upto(other, self.trunc))
    }

    /// Product keeping only degrees `<= max_deg` (at most `N`); higher
    /// components of the result are zero.
    pub(crate) fn mul_upto(&self, other: &Self, max_deg: usize) -> Self {
        let max_deg = max_deg.min(self.trunc);
        let mut out = Self::zero_unchecked(self.rank, self.trunc);
        for (p, a) in self.comps.iter().enumerate().take(max_deg + 1) {
            if a.is_zero() {
                continue;
            }
            for (q, b) in other.comps.iter().enumerate().take(max_deg + 1 - p) {
                if b.is_zero() {
                    continue;
                }
                out.comps[p + q].add_product_unchecked(a, b);
            }
        }
        out
    }

    /// Two-sided inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let c = self.constant_term();
        let c_inv = c.recip()?;
        // b_0 = 1/c, b_m = -(1/c) Σ_{k=1}^{m} a_k b_{m-k}
        let mut out = Self::zero_unchecked(self.rank, self.trunc);
        out.comps[0] = Tensor::scalar(self.rank, c_inv.clone());
        let minus_inv = -&c_inv;
        for m in 1..=self.trunc {
            let mut acc = Tensor::zero_unchecked(self.rank, m);
            for k in 1..=m {
                let a = &self.comps[k];
                let b = &out.comps[m - k];
                if !a.is_zero() && !b.is_zero() {
                    acc.add_product_unchecked(a, b);
                }
            }
            out.comps[m] = acc.scale(&minus_inv);
        }
        Ok(out)
    }

    /// Re-truncates to a different `N`, dropping or zero-padding components.
    pub fn with_trunc(&self, trunc: usize) -> Result<Self> {
        let mut s = Self::zero(self.rank, trunc)?;
        for t in self.comps.iter().take(trunc + 1) {
            s.comps[t.degree()] = t.clone();
        }
        Ok(s)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .filter(|t| !t.is_zero())
            .map(Tensor::render)
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Series(rank={}, N={}: {})",
            self.rank,
            self.trunc,
            self.render()
        )
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(rank: usize, n: usize, i: usize) -> TruncatedSeries {
        TruncatedSeries::generator(rank, n, i).unwrap()
    }

    fn one(rank: usize, n: usize) -> TruncatedSeries {
        TruncatedSeries::one(rank, n).unwrap()
    }

    fn mono(rank: usize, n: usize, idx: &[usize], c: i64) -> TruncatedSeries {
        TruncatedSeries::from_tensors(
            rank,
            n,
            [Tensor::monomial(rank, idx, Scalar::from_int(c)).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn add_examples() {
        let a = one(2, 3).add(&gen(2, 3, 0)).unwrap();
        let b = one(2, 3).add(&gen(2, 3, 1)).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.render(), "2 + X1 + X2");
        assert_eq!(a.add(&TruncatedSeries::zero(2, 3).unwrap()).unwrap(), a);
        assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn mul_examples() {
        let a = one(2, 3).add(&gen(2, 3, 0)).unwrap();
        let b = one(2, 3).add(&gen(2, 3, 1)).unwrap();
        let p = a.mul(&b).unwrap();
        let expect = one(2, 3)
            .add(&gen(2, 3, 0))
            .unwrap()
            .add(&gen(2, 3, 1))
            .unwrap()
            .add(&mono(2, 3, &[0, 1], 1))
            .unwrap();
        assert_eq!(p, expect);
        let x1x2 = gen(2, 3, 0).mul(&gen(2, 3, 1)).unwrap();
        let x2x1 = gen(2, 3, 1).mul(&gen(2, 3, 0)).unwrap();
        assert_ne!(x1x2, x2x1);
        // truncation at N = 2
        let t = mono(2, 2, &[0, 1], 1).mul(&gen(2, 2, 0)).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn invert_geometric_series() {
        let a = one(2, 3).add(&gen(2, 3, 0)).unwrap();
        let inv = a.invert().unwrap();
        let expect = one(2, 3)
            .sub(&gen(2, 3, 0))
            .unwrap()
            .add(&mono(2, 3, &[0, 0], 1))
            .unwrap()
            .sub(&mono(2, 3, &[0, 0, 0], 1))
            .unwrap();
        assert_eq!(inv, expect);
        assert_eq!(one(2, 3).invert().unwrap(), one(2, 3));
        assert_eq!(
            TruncatedSeries::zero(2, 3).unwrap().invert(),
            Err(Error::ZeroConstantTerm)
        );
    }

    #[test]
    fn invert_of_product_reverses_factors() {
        // Oracle: ((1+X1)(1+X2))^{-1} = (1+X2)^{-1}(1+X1)^{-1} via series_mul.
        let n = 4;
        let a = one(2, n).add(&gen(2, n, 0)).unwrap();
        let b = one(2, n).add(&gen(2, n, 1)).unwrap();
        let lhs = a.mul(&b).unwrap().invert().unwrap();
        let rhs = b.invert().unwrap().mul(&a.invert().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.mul(&a.mul(&b).unwrap()).unwrap().is_one());
    }

    #[test]
    fn non_unit_constant_inverse() {
        let a = TruncatedSeries::constant(2, 3, Scalar::from_int(2))
            .unwrap()
            .add(&gen(2, 3, 1))
            .unwrap();
        let inv = a.invert().unwrap();
        assert!(a.mul(&inv).unwrap().is_one());
        assert!(inv.mul(&a).unwrap().is_one());
    }

    #[test]
    fn mismatch_errors() {
        let a = one(2, 3);
        assert_eq!(a.add(&one(3, 3)), Err(Error::RankMismatch(2, 3)));
        assert_eq!(a.mul(&one(2, 4)), Err(Error::TruncationMismatch(3, 4)));
        assert_eq!(
            TruncatedSeries::zero(2, 1),
            Err(Error::InvalidTruncation(1))
        );
    }
}
