//! Dense exact matrices.
//!
//! Used for linear parts `|U|` of algebra maps, abelianizations `|φ|` of
//! free-group endomorphisms, and the integer matrices of the IA
//! abelianization. Column `j` is the image of the basis vector `X_j`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// A square matrix used as an element of `GL(H)`. Invertibility is checked
/// where it is required.
pub type GLMatrix = Matrix;

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, Scalar::from_int(v));
            }
        }
        m
    }

    pub fn from_scalar_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged matrix rows".into()));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// The matrix whose columns are the given degree-1 tensors.
    pub fn from_columns(cols: &[Tensor]) -> Result<Self> {
        let n = cols.first().map_or(0, Tensor::rank);
        let mut m = Self::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.degree() != 1 || col.rank() != n {
                return Err(Error::ShapeMismatch(
                    "columns must be degree-1 tensors".into(),
                ));
            }
            for (idx, c) in col.iter() {
                m.set(idx[0], j, c.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    /// Column `j` as a degree-1 tensor.
    pub fn column(&self, j: usize) -> Tensor {
        let terms = (0..self.rows).map(|i| (vec![i], self.get(i, j).clone()));
        Tensor::from_terms(self.rows, 1, terms).expect("column tensor")
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Scalar::is_integer)
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    /// Every intermediate quotient is exact, so integer input never leaves
    /// the integers.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut sign = Scalar::one();
        let mut prev = Scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = v.div(&prev)?;
                }
                a[i][k] = Scalar::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 {
            sign
        } else {
            &sign * &a[n - 1][n - 1]
        })
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && matches!(self.det(), Ok(d) if d.is_one() || (-&d).is_one())
    }

    /// Exact inverse by Gauss–Jordan elimination over the rationals.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row = self.data[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                }));
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n)
                .find(|&r| !a[r][k].is_zero())
                .ok_or(Error::Singular)?;
            a.swap(p, k);
            let inv = a[k][k].recip()?;
            for v in a[k].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let v = &a[i][j] - &(&f * &a[k][j]);
                    a[i][j] = v;
                }
            }
        }
        let rows = a.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_scalar_rows(rows)
    }

    /// Rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let inv = a[r][c].recip().expect("nonzero pivot");
            for i in r + 1..self.rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] * &inv;
                for j in c..self.cols {
                    let v = &a[i][j] - &(&f * &a[r][j]);
                    a[i][j] = v;
                }
            }
            r += 1;
        }
        r
    }

    /// Exactly one nonzero entry per row and column, each equal to ±1.
    pub fn is_signed_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let unit = |v: &Scalar| v.is_one() || (-v).is_one();
        let mut col_hits = vec![0usize; self.cols];
        for i in 0..self.rows {
            let mut hits = 0;
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if !unit(v) {
                    return false;
                }
                hits += 1;
                col_hits[j] += 1;
            }
            if hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }

    /// Applies the matrix to a degree-1 tensor.
    pub fn apply_vector(&self, v: &Tensor) -> Result<Tensor> {
        v.apply_linear(self)
    }

    pub fn to_integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_integer())
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// JSON form: `{"rows": [["1","0"],["-1/2","1"]]}`.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: Vec<Vec<String>>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson {
            rows: (0..m.rows)
                .map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Matrix> {
        let rows = j
            .rows
            .into_iter()
            .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<Scalar>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_scalar_rows(rows)
    }
}
