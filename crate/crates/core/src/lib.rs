//! Constructive layer of stable twisted endoscopy for split classical groups.

pub mod acceptance;
pub mod error;
pub mod exact_scalars;
pub mod forms_matrices;
pub mod linalg;
pub mod norm_matching;
pub mod padic_jordan;
pub mod root_datum;

pub use error::{Error, Result};
pub use linalg::Matrix;
