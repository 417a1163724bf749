pub mod bounds;
pub mod cli;
pub mod completion;
pub mod error;
pub mod experiment;
pub mod factor;
pub mod imgio;
pub mod ledger;
pub mod matrix;
pub mod quaternion;
pub mod sketch;
pub mod synthetic;

pub use error::{Error, Result};
pub use matrix::{ComplexAdjoint, QuatMatrix, RandomMode};
pub use quaternion::Quaternion;
