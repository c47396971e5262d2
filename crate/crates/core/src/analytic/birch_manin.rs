use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lseries::LSeriesContext;
use super::real::{abs, real, real_from_rational, to_f64, Real};
use crate::arith::{gcd, QuadraticCharacter};
use crate::curve::PeriodPair;
use crate::error::{Error, Result};
use crate::modsym::{CuspPath, NewformData, Sign};

/// Relative tolerance for numeric against exact agreement.
pub const RELATIVE_TOLERANCE: f64 = 1e-6;

/// Outcome of comparing the numeric and exact sides of the twisted central value identity.
#[derive(Debug, Clone)]
pub struct BirchManinCheck {
    pub conductor: u64,
    pub sign: Sign,
    pub numeric: Real,
    pub numeric_error: Real,
    pub exact: BigRational,
    pub residual: f64,
    pub agrees: bool,
    pub root_number: i8,
}

/// sum over k mod M coprime to M of chi(k) [k/M]^sign(chi).
pub fn exact_twisted_sum(form: &NewformData, chi: &QuadraticCharacter) -> Result<BigRational> {
    let m = chi.conductor();
    let sign = Sign::from_i8(chi.sign());
    if m == 1 {
        return form.eval_symbol(CuspPath::zero(), sign);
    }
    let mut total = BigRational::zero();
    for k in 1..m {
        if gcd(k as i64, m as i64) != 1 {
            continue;
        }
        let c = chi.value(k as i64);
        let v = form.eval_symbol(CuspPath::new(k as i64, m as i64)?, sign)?;
        total += v * BigRational::from_integer(c.into());
    }
    Ok(total)
}

/// sqrt(M) L(f x chi, 1) / Omega^sign(chi), with its error bound and root number.
pub fn numeric_twisted_value(
    ctx: &LSeriesContext,
    periods: &PeriodPair,
    chi: &QuadraticCharacter,
) -> Result<(Real, Real, i8)> {
    let l = ctx.l_value_central(chi)?;
    let prec = ctx.precision();
    let omega = if chi.sign() == 1 {
        periods.omega_plus.clone()
    } else {
        periods.omega_minus.clone()
    };
    let factor = real(chi.conductor() as i64, prec).sqrt() / omega;
    Ok((
        l.value * factor.clone(),
        l.error_bound * factor,
        l.root_number,
    ))
}

/// Compares sqrt(M) L(f x chi, 1)/Omega^sign with sum chi(k) [k/M]^sign for a calibrated form.
pub fn birch_manin_check(
    form: &NewformData,
    ctx: &LSeriesContext,
    periods: &PeriodPair,
    chi: &QuadraticCharacter,
) -> Result<BirchManinCheck> {
    if !form.is_calibrated() {
        return Err(Error::NotNormalized);
    }
    let exact = exact_twisted_sum(form, chi)?;
    let (numeric, err, root_number) = numeric_twisted_value(ctx, periods, chi)?;
    let prec = ctx.precision();
    let diff = abs(&(numeric.clone() - real_from_rational(&exact, prec)));
    let (residual, agrees) = if exact.is_zero() {
        let r = to_f64(&diff);
        (r, diff <= real(4, prec) * err.clone())
    } else {
        let r = to_f64(&diff) / to_f64(&real_from_rational(&exact.abs(), prec));
        (r, r < RELATIVE_TOLERANCE)
    };
    Ok(BirchManinCheck {
        conductor: chi.conductor(),
        sign: Sign::from_i8(chi.sign()),
        numeric,
        numeric_error: err,
        exact,
        residual,
        agrees,
        root_number,
    })
}
