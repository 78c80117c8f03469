#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod invariance;
pub mod matfun;
pub mod operator;
pub mod order;
pub mod quadrature;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
