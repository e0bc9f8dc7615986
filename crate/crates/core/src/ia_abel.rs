//! `τ₁` on the Magnus generators of `IA_n`, coordinates in
//! `H^* ⊗ Λ²H`, and the map `ι_*: H → H^* ⊗ Λ²H`.
//!
//! `Λ²H` sits inside `H^{⊗2}` via `X_j ∧ X_k ↦ X_jX_k - X_kX_j`; the basis
//! `ℓ_i ⊗ (X_jX_k - X_kX_j)`, `j < k`, is ordered lexicographically in
//! `(i, (j, k))`.

use serde::Serialize;

use crate::aut::{FreeGroupEndo, MagnusGenerator};
use crate::error::{Error, Result};
use crate::johnson::Johnson;
use crate::magnus::MagnusExpansion;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::tensor_map::TensorMap;

/// Coordinates of an element of `H^* ⊗ Λ²H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelCoordinates {
    pub n: usize,
    pub values: Vec<i64>,
}

/// Basis triples `(i, j, k)` with `j < k` (0-based), in order.
pub fn lambda2_basis(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(n * n * (n - 1) / 2);
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

pub fn basis_label((i, j, k): (usize, usize, usize)) -> String {
    format!("l{}(X{}X{}-X{}X{})", i + 1, j + 1, k + 1, k + 1, j + 1)
}

/// Coordinates of `u: H → H^{⊗2}` in the `Λ²` basis; fails unless every
/// `u(X_i)` is antisymmetric with integer coefficients.
pub fn coordinates(u: &TensorMap) -> Result<AbelCoordinates> {
    if u.src() != 1 || u.dst() != 2 {
        return Err(Error::ShapeMismatch("expected a map H -> H^2".into()));
    }
    let n = u.rank();
    let mut values = Vec::new();
    for i in 0..n {
        let img = u.image(&[i]);
        for j in 0..n {
            if !img.coeff(&[j, j]).is_zero() {
                return Err(Error::Precondition("value is not in H* ⊗ Λ²H".into()));
            }
            for k in j + 1..n {
                let c = img.coeff(&[j, k]);
                if c != -img.coeff(&[k, j]) {
                    return Err(Error::Precondition("value is not in H* ⊗ Λ²H".into()));
                }
                values.push(
                    c.to_i64()
                        .ok_or_else(|| Error::Precondition("non-integral coordinate".into()))?,
                );
            }
        }
    }
    Ok(AbelCoordinates { n, values })
}

fn standard_johnson(n: usize) -> Result<Johnson> {
    Johnson::new(&MagnusExpansion::standard(n, 2)?)
}

/// Rows: `τ₁` of the Magnus generators (in library order) for the standard
/// expansion; columns: the `Λ²` basis.
pub fn tau1_matrix(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let j = standard_johnson(n)?;
    let rows = MagnusGenerator::all(n)
        .into_iter()
        .map(|g| {
            let c = coordinates(&j.component(&g.endo(n)?, 1)?)?;
            Ok(c.values.into_iter().map(Scalar::from_int).collect())
        })
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    Matrix::from_scalar_rows(rows)
}

/// The row predicted symbolically:
/// `τ₁(K_{i,l}) = ℓ_i⊗(X_lX_i - X_iX_l)`, `τ₁(K_{i,l,s}) = ℓ_i⊗(X_lX_s - X_sX_l)`.
pub fn predicted_row(n: usize, g: MagnusGenerator) -> Vec<i64> {
    let basis = lambda2_basis(n);
    let (slot, sign) = match g {
        MagnusGenerator::Conj { i, l } => {
            if l < i {
                ((i, l, i), 1)
            } else {
                ((i, i, l), -1)
            }
        }
        MagnusGenerator::Comm { i, l, s } => ((i, l, s), 1),
    };
    basis
        .iter()
        .map(|&b| if b == slot { sign } else { 0 })
        .collect()
}

/// A word in the Magnus generators: pairs of generator and exponent.
pub type IaWord = Vec<(MagnusGenerator, i64)>;

/// Parses `K[i,l]` / `K[i,l,s]` terms with optional `^e`, separated by `*`
/// or whitespace; the empty string is the identity.
pub fn parse_ia_word(text: &str, n: usize) -> Result<IaWord> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut pos = 0;
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    let skip = |pos: &mut usize| {
        let start = *pos;
        while *pos < bytes.len() && (bytes[*pos].is_ascii_whitespace() || bytes[*pos] == b'*') {
            *pos += 1;
        }
        *pos > start
    };
    let number = |pos: &mut usize| -> Result<i64> {
        let start = *pos;
        if *pos < bytes.len() && (bytes[*pos] == b'-' || bytes[*pos] == b'+') {
            *pos += 1;
        }
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        text[start..*pos]
            .parse()
            .map_err(|_| err(start, "expected an integer"))
    };
    skip(&mut pos);
    let mut first = true;
    while pos < bytes.len() {
        if !first && !skip(&mut pos) {
            return Err(err(pos, "expected '*' between terms"));
        }
        if pos >= bytes.len() {
            break;
        }
        first = false;
        if !text[pos..].starts_with("K[") {
            return Err(err(pos, "expected 'K['"));
        }
        let term_start = pos;
        pos += 2;
        let mut idx = vec![number(&mut pos)?];
        while pos < bytes.len() && bytes[pos] == b',' {
            pos += 1;
            idx.push(number(&mut pos)?);
        }
        if pos >= bytes.len() || bytes[pos] != b']' {
            return Err(err(pos, "expected ']'"));
        }
        pos += 1;
        let exp = if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            number(&mut pos)?
        } else {
            1
        };
        let to0 = |v: i64| -> Result<usize> {
            if v < 1 || v as usize > n {
                Err(Error::IndexOutOfRange {
                    index: v.max(0) as usize,
                    rank: n,
                })
            } else {
                Ok(v as usize - 1)
            }
        };
        let g = match idx.as_slice() {
            [i, l] => MagnusGenerator::Conj {
                i: to0(*i)?,
                l: to0(*l)?,
            },
            [i, l, s] => MagnusGenerator::Comm {
                i: to0(*i)?,
                l: to0(*l)?,
                s: to0(*s)?,
            },
            _ => return Err(err(term_start, "K takes two or three indices")),
        };
        out.push((g.check(n)?, exp));
    }
    Ok(out)
}

/// The automorphism a word in the Magnus generators denotes.
pub fn ia_word_endo(word: &IaWord, n: usize) -> Result<FreeGroupEndo> {
    word.iter()
        .try_fold(FreeGroupEndo::identity(n), |acc, &(g, e)| {
            acc.compose(&g.endo(n)?.pow(e)?)
        })
}

/// Signed sum of generator rows; cross-checked against `τ₁` of the composed
/// automorphism for the standard expansion.
pub fn abelianize_ia_word(word: &IaWord, n: usize) -> Result<AbelCoordinates> {
    let dim = n * n * (n - 1) / 2;
    let mut values = vec![0i64; dim];
    let j = standard_johnson(n)?;
    for &(g, e) in word {
        let row = coordinates(&j.component(&g.endo(n)?, 1)?)?;
        for (v, r) in values.iter_mut().zip(row.values) {
            *v += e * r;
        }
    }
    let direct = coordinates(&j.component(&ia_word_endo(word, n)?, 1)?)?;
    if direct.values != values {
        return Err(Error::Precondition(
            "additive coordinates disagree with the Johnson map of the product".into(),
        ));
    }
    Ok(AbelCoordinates { n, values })
}

/// `ι_*(Y): Z ↦ YZ - ZY`.
pub fn iota_star(y: &Tensor) -> Result<TensorMap> {
    if y.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: y.degree(),
        });
    }
    let n = y.rank();
    let images = (0..n)
        .map(|i| {
            let z = Tensor::basis(n, i);
            &y.concat(&z) - &z.concat(y)
        })
        .collect();
    TensorMap::from_source_images(n, 1, 2, images)
}

/// Matrix of `ι_*` with rows `X_1..X_n` and columns the `Λ²` basis.
pub fn iota_star_matrix(n: usize) -> Result<Matrix> {
    let rows = (0..n)
        .map(|i| {
            let c = coordinates(&iota_star(&Tensor::basis(n, i))?)?;
            Ok(c.values.into_iter().map(Scalar::from_int).collect())
        })
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    Matrix::from_scalar_rows(rows)
}
