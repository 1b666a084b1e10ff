pub mod cli;
pub mod deriv;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod linalg;
pub mod lognorm;
pub mod ring;
pub mod root;
pub mod series;
pub mod square_zero;

pub use error::{Error, Result};
pub use field::{Bounded, FieldKind, FieldSpec, Scalar};
pub use lognorm::{LogNorm, RadiusContext, RadiusDecl};
