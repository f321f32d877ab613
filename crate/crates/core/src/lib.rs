//! Point counts and zeta functions of weighted projective hypersurfaces
//! built by twisting lower-dimensional pieces.

pub mod arith;
pub mod charset;
pub mod count;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod jacobi;
pub mod padic;
pub mod par;
pub mod poly;
pub mod resolve;
pub mod singular;
pub mod tables;
pub mod wps;
pub mod zeta;

pub use error::{Error, Result};
