//! Sturm–Liouville operators with distributional potentials `q = s'`,
//! studied through the antiderivative `s`.

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod error;
pub mod forms;
pub mod potential;
pub mod quad;
pub mod regsolve;
pub mod report;
pub mod testkit;
pub mod verify;

pub use error::{Error, Result};
pub use potential::{Antiderivative, Interval, Jump, PieceTerm, C64};
