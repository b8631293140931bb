//! Exact branch-level divisors and linear series on plane projective curves.

pub mod algebra;
pub mod curve;
pub mod divisor;
pub mod equiv;
pub mod error;
pub mod fixtures;
pub mod maps;
pub mod oracle;
pub mod puiseux;
pub mod series;

pub use curve::{PlaneCurve, PointCluster, PointKey};
pub use error::{Error, Result};
pub use puiseux::Branch;
