//! Exact and numerical algebraic kernels.

pub mod expm;
pub mod kac_moody;
pub mod laurent;
pub mod matrix;
pub mod su2;

pub use expm::mat_exp;
pub use kac_moody::{km_bracket, KMElement};
pub use laurent::LaurentPoly;
pub use matrix::{SquareMatrixC, C64};
pub use su2::{casimir_tensor, su2_generators};
