use std::sync::RwLock;

use dashu_int::IBig;
use rayon::prelude::*;

use super::real::{pi, real, to_f64, Real, MIN_PRECISION_BITS};
use crate::arith::{factor, is_squarefree, primes_up_to, QuadraticCharacter};
use crate::curve::CurveModel;
use crate::error::{Error, Result};

type ApSupplier = Box<dyn Fn(u64) -> Result<i64> + Send + Sync>;

/// Dirichlet coefficients of a weight-two newform, built multiplicatively from a_p.
pub struct LSeriesContext {
    level: u64,
    precision: usize,
    ap: ApSupplier,
    cache: RwLock<Coefficients>,
}

#[derive(Default)]
struct Coefficients {
    primes: Vec<(u64, i64)>,
    an: Vec<i64>,
}

/// Central value of a twisted L-function with its truncation and rounding error bound.
#[derive(Debug, Clone)]
pub struct NumericLValue {
    pub value: Real,
    pub error_bound: Real,
    pub root_number: i8,
    /// epsilon(f) chi(-N), available when N is squarefree
    pub predicted_root_number: Option<i8>,
    pub terms: usize,
}

impl std::fmt::Debug for LSeriesContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LSeriesContext")
            .field("level", &self.level)
            .field("precision", &self.precision)
            .finish()
    }
}

/// Splitting parameters t in L(1) = sum a_n/n (exp(-2 pi n/(t sqrt N)) + w exp(-2 pi n t/sqrt N)).
const SPLIT: (i64, i64) = (6, 5);

fn to_fixed(x: &Real, bits: usize) -> IBig {
    let repr = x.repr();
    let shift = bits as isize + repr.exponent();
    let s = repr.significand().clone();
    if shift >= 0 {
        s << shift as usize
    } else {
        s >> (-shift) as usize
    }
}

fn from_fixed(x: IBig, bits: usize, prec: usize) -> Real {
    Real::from_parts(x, -(bits as isize)).with_precision(prec).value()
}

impl LSeriesContext {
    pub fn new(
        level: u64,
        precision: usize,
        ap: impl Fn(u64) -> Result<i64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if precision < MIN_PRECISION_BITS {
            return Err(Error::PrecisionTooLow(precision as u32));
        }
        if level == 0 {
            return Err(Error::InvalidConductor(0));
        }
        Ok(LSeriesContext {
            level,
            precision,
            ap: Box::new(ap),
            cache: RwLock::new(Coefficients::default()),
        })
    }

    /// Context whose a_p come from point counts on a minimal model of conductor N.
    pub fn from_curve(model: &CurveModel, precision: usize) -> Result<Self> {
        let m = model.clone();
        Self::new(model.conductor(), precision, move |p| m.trace_of_frobenius(p))
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// a_1, ..., a_len (index 0 holds a_0 = 0).
    pub fn coefficients(&self, len: usize) -> Result<Vec<i64>> {
        {
            let c = self.cache.read().expect("coefficient cache");
            if c.an.len() > len {
                return Ok(c.an[..=len].to_vec());
            }
        }
        let mut c = self.cache.write().expect("coefficient cache");
        if c.an.len() <= len {
            let target = (len + 1).max(2 * c.an.len());
            self.extend(&mut c, target)?;
        }
        Ok(c.an[..=len].to_vec())
    }

    pub fn an(&self, n: usize) -> Result<i64> {
        Ok(self.coefficients(n)?[n])
    }

    fn extend(&self, c: &mut Coefficients, len: usize) -> Result<()> {
        let known = c.primes.last().map_or(1, |&(p, _)| p);
        let fresh: Vec<u64> = primes_up_to(len as u64)
            .into_iter()
            .filter(|&p| p > known)
            .collect();
        let values: Result<Vec<(u64, i64)>> = fresh
            .par_iter()
            .map(|&p| (self.ap)(p).map(|a| (p, a)))
            .collect();
        c.primes.extend(values?);
        let mut an = vec![0i64; len];
        if len > 1 {
            an[1] = 1;
        }
        let mut spf = vec![0u64; len];
        for &(p, _) in &c.primes {
            if p as usize >= len {
                break;
            }
            let mut k = p as usize;
            while k < len {
                if spf[k] == 0 {
                    spf[k] = p;
                }
                k += p as usize;
            }
        }
        let ap: std::collections::HashMap<u64, i64> = c.primes.iter().copied().collect();
        for n in 2..len {
            let p = spf[n];
            let mut rest = n as u64;
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if rest > 1 {
                an[n] = an[(n as u64 / rest) as usize] * an[rest as usize];
                continue;
            }
            let a = ap[&p];
            an[n] = if e == 1 {
                a
            } else if self.level.is_multiple_of(p) {
                a * an[n / p as usize]
            } else {
                a * an[n / p as usize] - p as i64 * an[n / (p * p) as usize]
            };
        }
        c.an = an;
        Ok(())
    }

    /// Sign of the functional equation of f predicted from Atkin-Lehner eigenvalues,
    /// -prod(-a_p) over p | N, valid for squarefree N.
    pub fn predicted_root_number(&self) -> Result<Option<i8>> {
        if !is_squarefree(self.level) {
            return Ok(None);
        }
        let mut w = -1i64;
        for (p, _) in factor(self.level) {
            w *= -(self.ap)(p)?;
        }
        Ok(Some(w.signum() as i8))
    }

    /// L(f x chi, 1) evaluated at two splitting parameters; the root number is the sign
    /// under which both evaluations agree.
    pub fn l_value_central(&self, chi: &QuadraticCharacter) -> Result<NumericLValue> {
        let m = chi.conductor();
        if crate::arith::gcd(m as i64, self.level as i64) != 1 {
            return Err(Error::NotCoprime {
                a: m,
                b: self.level,
            });
        }
        let prec = self.precision;
        let w = prec + 64;
        let level = real(self.level as i64, w) * real((m * m) as i64, w);
        let sqrt_level = level.sqrt();
        let c0 = real(2, w) * pi(w) / sqrt_level;
        let (tn, td) = SPLIT;
        let t = real(tn, w) / real(td, w);
        let rates = [c0.clone(), c0.clone() / t.clone(), c0.clone() * t];
        // tail of sum |a_n|/n e^{-cn} over n > L is at most 2 e^{-c(L+1)} / (1 - e^{-c})
        let target_bits = prec / 2 + 16;
        let slow = to_f64(&rates[1]);
        let need = target_bits as f64 * std::f64::consts::LN_2 + (2.0 / (1.0 - (-slow).exp())).ln();
        let terms = (need / slow).ceil() as usize + 1;
        let an = self.coefficients(terms)?;
        let fixed = w + 16;
        let mut pow: Vec<IBig> = rates.iter().map(|r| to_fixed(&(-r.clone()).exp(), fixed)).collect();
        let base = pow.clone();
        let mut sums = [IBig::ZERO, IBig::ZERO, IBig::ZERO];
        for (n, &a) in an.iter().enumerate().skip(1) {
            let coeff = a * chi.value(n as i64) as i64;
            if coeff != 0 {
                for (s, p) in sums.iter_mut().zip(&pow) {
                    *s += IBig::from(coeff) * p / IBig::from(n);
                }
            }
            for (p, b) in pow.iter_mut().zip(&base) {
                *p = (&*p * b) >> fixed;
            }
        }
        let [s0, s_slow, s_fast] = sums.map(|s| from_fixed(s, fixed, w));
        let tail = {
            let c = slow;
            let bound = 2.0 * (-c * (terms + 1) as f64).exp() / (1.0 - (-c).exp());
            super::real::real_from_f64(bound.max(f64::MIN_POSITIVE), w)
                + real(terms as i64, w) / real(2, w).powi(((fixed - 8) as i64).into())
        };
        let err = real(2, w) * tail;
        let scale = super::real::abs(&s0).max(real(1, w));
        let tol = scale * real(1, w) / real(2, w).powi(((prec / 2) as i64).into());
        let mut agreeing = Vec::new();
        for sign in [1i8, -1] {
            let sg = real(sign as i64, w);
            let at_one = s0.clone() + sg.clone() * s0.clone();
            let at_t = s_slow.clone() + sg * s_fast.clone();
            if super::real::abs(&(at_one - at_t)) <= tol.clone() + err.clone() {
                agreeing.push(sign);
            }
        }
        if agreeing.len() != 1 {
            return Err(Error::RootNumberIndeterminate);
        }
        let eps = agreeing[0];
        let predicted = self
            .predicted_root_number()?
            .map(|e| e * chi.sign() * chi.value(self.level as i64));
        if let Some(pr) = predicted {
            if pr != eps {
                log::warn!(
                    "root number for level {} twisted by {m}: numeric {eps}, predicted {pr}",
                    self.level
                );
            }
        }
        let value = if eps == 1 {
            real(2, w) * s0
        } else {
            real(0, w)
        };
        Ok(NumericLValue {
            value: value.with_precision(prec).value(),
            error_bound: err.with_precision(prec).value(),
            root_number: eps,
            predicted_root_number: predicted,
            terms,
        })
    }
}
