pub mod error;
pub mod ff_poly;
pub mod heights;
pub mod linalg;
pub mod local;
pub mod moebius;
pub mod ratfunc;
pub mod sections;
pub mod series;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
