pub mod error;
pub mod geom;
pub mod linalg;
pub mod par;
pub mod specfun;

pub use error::{Error, Result};
