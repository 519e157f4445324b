pub mod bigfloat;
pub mod bivariate;
pub mod cli;
pub mod error;
pub mod exact;
pub mod multispectral;
pub mod qlimit;
pub mod univariate;

pub use error::{Error, Result};
pub use exact::Scalar;
