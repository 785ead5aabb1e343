pub mod affectance;
pub mod cli;
pub mod distsim;
pub mod dual;
pub mod error;
pub mod instance;
pub mod instances;
pub mod measures;
pub mod metric;
pub mod sweep;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use instance::{Directionality, Instance, Link, LinkId, PowerAssignment, SinrParams};
pub use metric::{EuclideanMetric, MatrixMetric, Metric, NodeId};
