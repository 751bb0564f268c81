pub mod catalog;
pub mod charts;
pub mod compare;
pub mod couple;
pub mod elliptic;
pub mod error;
pub mod hormander;
pub mod param;
pub mod rng;
pub mod verify;

pub use compare::Comparison;
pub use error::{Error, Result};
pub use param::ParamFn;
