//! Exact twisted sums of modular symbols, their Hecke factorization, and executable
//! checks of the 2-adic integrality and divisibility statements about them.
mod checks;
mod engine;
mod spec;
pub mod suite;

pub use checks::{
    char_sum_closed_form, char_sum_sigma, in_multiple_of, BeforeTwistCheck, BoundCheck,
    IntegralityCheck, PrimeBoundCheck, RecursionCheck,
};
pub use engine::{Method, TwistEngine, TwistValue};
pub use spec::DivisorSpec;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::arith::{format_rational, TwoAdic, Valuation};

/// A check whose hypotheses may not hold; `NotApplicable` is never evidence either way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Gated<T> {
    Applicable(T),
    NotApplicable(String),
}

impl<T> Gated<T> {
    pub fn applicable(&self) -> Option<&T> {
        match self {
            Gated::Applicable(t) => Some(t),
            Gated::NotApplicable(_) => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, Gated::Applicable(_))
    }

    pub fn map_ref<U>(&self, f: impl FnOnce(&T) -> U) -> Gated<U> {
        match self {
            Gated::Applicable(t) => Gated::Applicable(f(t)),
            Gated::NotApplicable(why) => Gated::NotApplicable(why.clone()),
        }
    }
}

impl Gated<bool> {
    /// True when applicable and true, or when not applicable.
    pub fn holds_or_gated(&self) -> bool {
        !matches!(self, Gated::Applicable(false))
    }
}

/// (v_m, w_m) from the eigenvalues a_q of the primes dividing m: v_m is the least
/// v2(a_q - 2), and w_m is 0 when v_m = 0 and 1 otherwise. An empty list gives
/// (Infinity, 1).
pub fn frak_vw(aps: &[i64]) -> (Valuation, i64) {
    let v = Valuation::min_of(aps.iter().map(|a| (a - 2).v2()));
    (v, if v == 0 { 0 } else { 1 })
}

pub(crate) fn serialize_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

#[cfg(test)]
mod tests;
