use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

/// Binary arbitrary-precision float used by the numeric oracle.
pub type Real = FBig<HalfEven>;

pub const DEFAULT_PRECISION_BITS: usize = 128;
pub const MIN_PRECISION_BITS: usize = 64;

pub fn real(x: i64, prec: usize) -> Real {
    Real::from(x).with_precision(prec).value()
}

pub fn real_from_f64(x: f64, prec: usize) -> Real {
    Real::try_from(x)
        .expect("finite float")
        .with_precision(prec)
        .value()
}

pub fn real_from_bigint(x: &BigInt, prec: usize) -> Real {
    let (sign, digits) = x.to_u64_digits();
    let base = real(1, prec + 64) * Real::from(1u128 << 64).with_precision(prec + 64).value();
    let mut acc = real(0, prec + 64);
    for d in digits.iter().rev() {
        acc = acc * base.clone() + Real::from(*d).with_precision(prec + 64).value();
    }
    let acc = acc.with_precision(prec).value();
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

pub fn real_from_rational(x: &BigRational, prec: usize) -> Real {
    real_from_bigint(x.numer(), prec + 8) / real_from_bigint(x.denom(), prec + 8)
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn abs(x: &Real) -> Real {
    if *x < real(0, 8) {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &Real, b: &Real, prec: usize) -> Real {
    let two = real(2, prec);
    let (mut a, mut b) = (a.clone(), b.clone());
    let tol = real(1, prec) / real(2, prec).powi((prec as i64 - 4).into());
    for _ in 0..(4 * prec.ilog2() as usize + 40) {
        if abs(&(a.clone() - b.clone())) <= tol.clone() * abs(&a) {
            break;
        }
        let next_a = (a.clone() + b.clone()) / two.clone();
        b = (a * b).sqrt();
        a = next_a;
    }
    a
}

/// pi by the Gauss-Legendre iteration.
pub fn pi(prec: usize) -> Real {
    let w = prec + 32;
    let one = real(1, w);
    let two = real(2, w);
    let mut a = one.clone();
    let mut b = one.clone() / two.clone().sqrt();
    let mut t = one.clone() / real(4, w);
    let mut p = one;
    for _ in 0..(prec.ilog2() as usize + 4) {
        let an = (a.clone() + b.clone()) / two.clone();
        b = (a.clone() * b).sqrt();
        let d = a - an.clone();
        t -= p.clone() * d.clone() * d;
        p *= two.clone();
        a = an;
    }
    let s = a + b;
    (s.clone() * s / (real(4, w) * t)).with_precision(prec).value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(256);
        assert!((to_f64(&p) - std::f64::consts::PI).abs() < 1e-15);
        // compare with a longer computation
        let q = pi(512).with_precision(256).value();
        let d = abs(&(p - q));
        assert!(d < real(1, 256) / real(2, 256).powi(240.into()));
    }

    #[test]
    fn agm_of_one_and_root_two() {
        // Gauss's constant: 1 / agm(1, sqrt 2) = 0.8346268416740731...
        let g = agm(&real(1, 128), &real(2, 128).sqrt(), 128);
        assert!((1.0 / to_f64(&g) - 0.834_626_841_674_073_1).abs() < 1e-15);
    }

    #[test]
    fn big_integer_conversion() {
        let x: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let r = real_from_bigint(&x, 200);
        assert!((to_f64(&r) + 1.234_567_890_123_456_8e32).abs() < 1e17);
        let q = real_from_rational(&BigRational::new(1.into(), 3.into()), 128);
        assert!((to_f64(&q) - 1.0 / 3.0).abs() < 1e-16);
    }
}
