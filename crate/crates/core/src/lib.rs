//! Pricing of interest-rate derivatives under short-rate models whose rate
//! jumps, and whose numéraire rolls over, at announced dates.
//!
//! Four engines share one model description:
//!
//! * [`affine`]: closed-form bonds and bond calls for affine dynamics;
//! * [`semianalytic`]: Green's-function quadrature for Vasicek dynamics;
//! * [`fd`]: theta finite differences for any drift and volatility;
//! * [`mc`]: Euler-Maruyama Monte Carlo.
//!
//! [`localization`] picks the truncated rate domain, [`cli`] runs scenario
//! files and writes CSV tables.

// `!(a < b)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod affine;
pub mod cli;
pub mod error;
pub mod fd;
pub mod localization;
pub mod math;
pub mod mc;
pub mod model;
pub mod result;
pub mod semianalytic;

pub use error::{Error, Result};
