use serde::Serialize;

use super::model::CurveModel;
use crate::analytic::real::{agm, pi, real, real_from_bigint, to_f64, Real, MIN_PRECISION_BITS};
use crate::error::{Error, Result};
use crate::modsym::LatticeShape;

/// Least positive real period and least positive purely imaginary period (as a positive
/// real number) of the Neron lattice of a model.
#[derive(Debug, Clone)]
pub struct PeriodPair {
    pub omega_plus: Real,
    pub omega_minus: Real,
    pub shape: LatticeShape,
    pub precision: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodSummary {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub shape: LatticeShape,
}

impl PeriodPair {
    pub fn summary(&self) -> PeriodSummary {
        PeriodSummary {
            omega_plus: to_f64(&self.omega_plus),
            omega_minus: to_f64(&self.omega_minus),
            shape: self.shape,
        }
    }
}

/// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6 in f64, descending.
fn approximate_roots(b2: f64, b4: f64, b6: f64) -> Vec<f64> {
    let (p, q, r) = (b2 / 4.0, b4 / 2.0, b6 / 4.0);
    let a = q - p * p / 3.0;
    let b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let shift = -p / 3.0;
    let disc = b * b / 4.0 + a * a * a / 27.0;
    let mut roots = if disc < 0.0 && a < 0.0 {
        let m = 2.0 * (-a / 3.0).sqrt();
        let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect::<Vec<_>>()
    } else {
        let s = disc.max(0.0).sqrt();
        vec![(-b / 2.0 + s).cbrt() + (-b / 2.0 - s).cbrt() + shift]
    };
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

fn newton(coeffs: &[Real; 4], x0: f64, prec: usize) -> Real {
    let [c3, c2, c1, c0] = coeffs.clone();
    let three = real(3, prec);
    let two = real(2, prec);
    let mut x = crate::analytic::real::real_from_f64(x0, prec);
    for _ in 0..(prec.ilog2() as usize + 8) {
        let f = ((c3.clone() * x.clone() + c2.clone()) * x.clone() + c1.clone()) * x.clone()
            + c0.clone();
        let df = (three.clone() * c3.clone() * x.clone() + two.clone() * c2.clone()) * x.clone()
            + c1.clone();
        if df == real(0, prec) {
            break;
        }
        x -= f / df;
    }
    x
}

impl CurveModel {
    /// Periods by the arithmetic-geometric mean, computed with `precision` bits.
    pub fn periods(&self, precision: usize) -> Result<PeriodPair> {
        if precision < MIN_PRECISION_BITS {
            return Err(Error::PrecisionTooLow(precision as u32));
        }
        let w = precision + 64;
        let [b2, b4, b6, _] = self.b_invariants();
        let roots = approximate_roots(
            b2.to_string().parse::<f64>().unwrap_or(f64::NAN),
            b4.to_string().parse::<f64>().unwrap_or(f64::NAN),
            b6.to_string().parse::<f64>().unwrap_or(f64::NAN),
        );
        let (b2, b4, b6) = (
            real_from_bigint(&b2, w),
            real_from_bigint(&b4, w),
            real_from_bigint(&b6, w),
        );
        let coeffs = [real(4, w), b2.clone(), real(2, w) * b4.clone(), b6];
        let pi = pi(w);
        let shape = self.lattice_shape();
        let (omega_plus, omega_minus) = match shape {
            LatticeShape::Rectangular => {
                if roots.len() != 3 {
                    return Err(Error::Invalid("expected three real roots".into()));
                }
                let e: Vec<Real> = roots.iter().map(|&x| newton(&coeffs, x, w)).collect();
                let s13 = (e[0].clone() - e[2].clone()).sqrt();
                let s12 = (e[0].clone() - e[1].clone()).sqrt();
                let s23 = (e[1].clone() - e[2].clone()).sqrt();
                (
                    pi.clone() / agm(&s13, &s12, w),
                    pi.clone() / agm(&s13, &s23, w),
                )
            }
            LatticeShape::NonRectangular => {
                let e1 = newton(&coeffs, roots[0], w);
                let a = real(3, w) * e1.clone() + b2.clone() / real(4, w);
                let b = (real(3, w) * e1.clone() * e1.clone() + b2 * e1 / real(2, w)
                    + b4 / real(2, w))
                .sqrt();
                let two_b = real(2, w) * b.clone();
                let root_b = real(2, w) * b.sqrt();
                let two_pi = real(2, w) * pi.clone();
                let w1 = two_pi.clone() / agm(&root_b, &(two_b.clone() + a.clone()).sqrt(), w);
                // the lattice is spanned by w1 and (w1 + i y)/2; i y is the least purely
                // imaginary period
                let y = two_pi / agm(&root_b, &(two_b - a).sqrt(), w);
                (w1, y)
            }
        };
        Ok(PeriodPair {
            omega_plus: omega_plus.with_precision(precision).value(),
            omega_minus: omega_minus.with_precision(precision).value(),
            shape,
            precision,
        })
    }

    /// Real period counted over every component of E(R): components times the least
    /// positive real period.
    pub fn real_period(&self, precision: usize) -> Result<Real> {
        let p = self.periods(precision)?;
        Ok(p.omega_plus * real(self.real_components() as i64, precision))
    }
}
