use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::real::{abs, real, real_from_bigint, Real};

/// The unique rational with denominator at most `bound` within `window` of `x`, or `None`
/// when there is no such rational or more than one.
pub fn recognize_rational(x: &Real, window: &Real, bound: u64) -> Option<BigRational> {
    let prec = x.precision().max(64);
    let mut found: Option<BigRational> = None;
    for q in 1..=bound.max(1) {
        let scaled = x.clone() * real(q as i64, prec);
        let p = scaled.round().to_int().value();
        let p = BigInt::from_signed_bytes_le(&p.to_le_bytes());
        if p.gcd(&BigInt::from(q)) != BigInt::from(1) {
            continue;
        }
        let candidate = real_from_bigint(&p, prec) / real(q as i64, prec);
        if abs(&(candidate - x.clone())) <= *window {
            let r = BigRational::new(p, BigInt::from(q));
            match &found {
                Some(f) if *f != r => return None,
                _ => found = Some(r),
            }
        }
    }
    found
}

/// `recognize_rational` for an f64 input.
pub fn recognize_rational_f64(x: f64, window: f64, bound: u64) -> Option<BigRational> {
    let prec = 128;
    recognize_rational(
        &super::real::real_from_f64(x, prec),
        &super::real::real_from_f64(window, prec),
        bound,
    )
}
