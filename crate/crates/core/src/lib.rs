//! Exact arithmetic for generalized Magnus expansions of free groups and the
//! Johnson maps they induce on `Aut(F_n)`.

pub mod algebra_map;
pub mod aut;
pub mod check;
pub mod cochain;
pub mod error;
pub mod ia_abel;
pub mod johnson;
pub mod json;
pub mod lcs;
pub mod magnus;
pub mod matrix;
pub mod random;
pub mod scalar;
pub mod series;
pub mod stasheff;
pub mod surface;
pub mod tensor;
pub mod tensor_map;
pub mod verify;
pub mod word;

pub use algebra_map::{AlgebraMap, IACoordinates};
pub use error::{Error, Result};
pub use magnus::MagnusExpansion;
pub use matrix::{GLMatrix, Matrix};
pub use scalar::Scalar;
pub use series::TruncatedSeries;
pub use tensor::Tensor;
pub use tensor_map::TensorMap;
pub use word::{Letter, Word};
