//! JSON forms of the algebraic objects. Indices in JSON are 1-based and
//! coefficients are strings (`"3"`, `"-1/2"`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra_map::{AlgebraMap, IACoordinates};
use crate::error::{Error, Result};
use crate::magnus::MagnusExpansion;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;
use crate::tensor::Tensor;
use crate::tensor_map::TensorMap;

/// `{"rank": n, "degree": m, "terms": {"1,2,1": "3"}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TensorJson {
    pub rank: usize,
    pub degree: usize,
    pub terms: BTreeMap<String, String>,
}

fn key_text(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    parts.join(",")
}

fn parse_key(key: &str, degree: usize) -> Result<Vec<usize>> {
    if key.trim().is_empty() {
        return if degree == 0 {
            Ok(Vec::new())
        } else {
            Err(Error::Json(format!(
                "empty key in a degree {degree} tensor"
            )))
        };
    }
    key.split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::Json(format!("bad index {s:?} in key {key:?}"))),
        })
        .collect()
}

impl From<&Tensor> for TensorJson {
    fn from(t: &Tensor) -> Self {
        let terms = t
            .iter()
            .map(|(idx, c)| (key_text(&idx), c.to_string()))
            .collect();
        TensorJson {
            rank: t.rank(),
            degree: t.degree(),
            terms,
        }
    }
}

impl TryFrom<&TensorJson> for Tensor {
    type Error = Error;
    fn try_from(j: &TensorJson) -> Result<Tensor> {
        let terms = j
            .terms
            .iter()
            .map(|(k, v)| Ok((parse_key(k, j.degree)?, v.parse::<Scalar>()?)))
            .collect::<Result<Vec<_>>>()?;
        Tensor::from_terms(j.rank, j.degree, terms)
    }
}

/// `{"rank": n, "N": N, "components": [tensor, …]}`, one tensor per degree
/// `0..=N`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesJson {
    pub rank: usize,
    #[serde(rename = "N")]
    pub trunc: usize,
    pub components: Vec<TensorJson>,
}

impl From<&TruncatedSeries> for SeriesJson {
    fn from(s: &TruncatedSeries) -> Self {
        SeriesJson {
            rank: s.rank(),
            trunc: s.trunc(),
            components: s.components().iter().map(TensorJson::from).collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for TruncatedSeries {
    type Error = Error;
    fn try_from(j: &SeriesJson) -> Result<TruncatedSeries> {
        let parts = j
            .components
            .iter()
            .map(|c| {
                if c.rank != j.rank {
                    return Err(Error::RankMismatch(j.rank, c.rank));
                }
                if c.degree > j.trunc {
                    return Err(Error::DegreeOutOfRange {
                        degree: c.degree,
                        max: j.trunc,
                    });
                }
                Tensor::try_from(c)
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_tensors(j.rank, j.trunc, parts)
    }
}

/// `{"rank": n, "src": k, "dst": l, "images": [tensor, …]}`, images of the
/// degree `k` monomials in lexicographic order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TensorMapJson {
    pub rank: usize,
    pub src: usize,
    pub dst: usize,
    pub images: Vec<TensorJson>,
}

impl From<&TensorMap> for TensorMapJson {
    fn from(m: &TensorMap) -> Self {
        TensorMapJson {
            rank: m.rank(),
            src: m.src(),
            dst: m.dst(),
            images: m.images().iter().map(TensorJson::from).collect(),
        }
    }
}

impl TryFrom<&TensorMapJson> for TensorMap {
    type Error = Error;
    fn try_from(j: &TensorMapJson) -> Result<TensorMap> {
        let images = j
            .images
            .iter()
            .map(Tensor::try_from)
            .collect::<Result<Vec<_>>>()?;
        TensorMap::from_source_images(j.rank, j.src, j.dst, images)
    }
}

/// `{"rank": n, "N": N, "u": {"1": [tensor, …], …}}`; `u["p"]` lists
/// `u_p(X_1), …, u_p(X_n)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IACoordinatesJson {
    pub rank: usize,
    #[serde(rename = "N")]
    pub trunc: usize,
    pub u: BTreeMap<usize, Vec<TensorJson>>,
}

impl From<&IACoordinates> for IACoordinatesJson {
    fn from(c: &IACoordinates) -> Self {
        let u = (1..c.trunc())
            .map(|p| {
                let m = c.component(p).expect("component in range");
                (p, m.images().iter().map(TensorJson::from).collect())
            })
            .collect();
        IACoordinatesJson {
            rank: c.rank(),
            trunc: c.trunc(),
            u,
        }
    }
}

impl TryFrom<&IACoordinatesJson> for IACoordinates {
    type Error = Error;
    fn try_from(j: &IACoordinatesJson) -> Result<IACoordinates> {
        let u = (1..j.trunc)
            .map(|p| match j.u.get(&p) {
                Some(images) => {
                    let images = images
                        .iter()
                        .map(Tensor::try_from)
                        .collect::<Result<Vec<_>>>()?;
                    TensorMap::from_source_images(j.rank, 1, p + 1, images)
                }
                None => TensorMap::zero(j.rank, 1, p + 1),
            })
            .collect::<Result<Vec<_>>>()?;
        IACoordinates::new(j.rank, j.trunc, u)
    }
}

/// `{"rank": n, "N": N, "images": [series, …]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraMapJson {
    pub rank: usize,
    #[serde(rename = "N")]
    pub trunc: usize,
    pub images: Vec<SeriesJson>,
}

impl From<&AlgebraMap> for AlgebraMapJson {
    fn from(m: &AlgebraMap) -> Self {
        AlgebraMapJson {
            rank: m.rank(),
            trunc: m.trunc(),
            images: m.images().iter().map(SeriesJson::from).collect(),
        }
    }
}

impl TryFrom<&AlgebraMapJson> for AlgebraMap {
    type Error = Error;
    fn try_from(j: &AlgebraMapJson) -> Result<AlgebraMap> {
        let images = j
            .images
            .iter()
            .map(TruncatedSeries::try_from)
            .collect::<Result<Vec<_>>>()?;
        if images.len() != j.rank {
            return Err(Error::ShapeMismatch(format!(
                "rank {} needs {} images, got {}",
                j.rank,
                j.rank,
                images.len()
            )));
        }
        if images.iter().any(|s| s.trunc() != j.trunc) {
            return Err(Error::TruncationMismatch(j.trunc, images[0].trunc()));
        }
        AlgebraMap::new(images)
    }
}

/// `{"rank": n, "N": N, "xi": [series, …]}`; an empty `xi` is the standard
/// expansion.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExpansionJson {
    pub rank: usize,
    #[serde(rename = "N")]
    pub trunc: usize,
    #[serde(default)]
    pub xi: Vec<SeriesJson>,
}

impl From<&MagnusExpansion> for ExpansionJson {
    fn from(e: &MagnusExpansion) -> Self {
        let xi = if e.is_standard() {
            Vec::new()
        } else {
            e.xi().iter().map(SeriesJson::from).collect()
        };
        ExpansionJson {
            rank: e.rank(),
            trunc: e.trunc(),
            xi,
        }
    }
}

impl TryFrom<&ExpansionJson> for MagnusExpansion {
    type Error = Error;
    fn try_from(j: &ExpansionJson) -> Result<MagnusExpansion> {
        if j.xi.is_empty() {
            return MagnusExpansion::standard(j.rank, j.trunc);
        }
        let xi =
            j.xi.iter()
                .map(TruncatedSeries::try_from)
                .collect::<Result<Vec<_>>>()?;
        if xi.len() != j.rank {
            return Err(Error::InvalidExpansion(format!(
                "rank {} needs {} series, got {}",
                j.rank,
                j.rank,
                xi.len()
            )));
        }
        if xi.iter().any(|s| s.trunc() != j.trunc) {
            return Err(Error::TruncationMismatch(j.trunc, xi[0].trunc()));
        }
        MagnusExpansion::new(xi)
    }
}
