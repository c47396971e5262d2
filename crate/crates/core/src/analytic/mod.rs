//! Numeric L-values in arbitrary precision, used as an independent check on modular
//! symbol computations.

mod birch_manin;
mod lseries;
pub mod real;
mod recognize;

pub use birch_manin::{
    birch_manin_check, exact_twisted_sum, numeric_twisted_value, BirchManinCheck, RELATIVE_TOLERANCE,
};
pub use lseries::{LSeriesContext, NumericLValue};
pub use real::{Real, DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS};
pub use recognize::{recognize_rational, recognize_rational_f64};
