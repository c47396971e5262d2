use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::newform::{LatticeShape, NewformData, Sign};
use super::space::ModSymSpace;
use crate::analytic::real::{real, real_from_rational, to_f64};
use crate::analytic::{
    birch_manin_check, exact_twisted_sum, numeric_twisted_value, recognize_rational,
    LSeriesContext,
};
use crate::arith::{format_rational, gcd, is_prime, QuadraticCharacter};
use crate::curve::{CurveModel, PeriodPair, PeriodSummary};
use crate::error::{Error, Result};

/// Largest conductor tried when looking for a nonzero twisted value of each sign.
pub const CALIBRATION_SEARCH_BOUND: u64 = 2000;
/// Number of good primes on which the form and the curve must agree.
pub const HECKE_MATCH_PRIMES: usize = 20;

/// What calibration fixed and which cross-checks it ran.
#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub label: String,
    pub hecke_primes_checked: Vec<u64>,
    pub plus_conductor: u64,
    pub minus_conductor: u64,
    /// factors applied to the lattice-normalized functionals
    pub plus_factor: String,
    pub minus_factor: String,
    pub periods: PeriodSummary,
    pub discriminant: String,
    /// shape read off the calibrated image of integral homology
    pub oracle_shape: LatticeShape,
    /// positive discriminant means rectangular
    pub discriminant_shape: LatticeShape,
    /// negative discriminant means rectangular
    pub negative_discriminant_rule_shape: LatticeShape,
    pub shape_conflicts: Vec<String>,
    pub root_number: i8,
    pub verification: Vec<(u64, Sign, f64)>,
    pub assumption: String,
}

/// Isogeny class part of a curve label: "37a1" gives "37a".
pub fn class_label(curve_label: &str) -> String {
    let trimmed = curve_label.trim_end_matches(|c: char| c.is_ascii_digit());
    if trimmed.chars().any(|c| c.is_ascii_alphabetic()) {
        trimmed.to_string()
    } else {
        curve_label.to_string()
    }
}

fn conductors_of_sign(level: u64, sign: Sign) -> impl Iterator<Item = QuadraticCharacter> {
    (1..=CALIBRATION_SEARCH_BOUND)
        .filter(move |&m| {
            QuadraticCharacter::is_valid_conductor(m) && gcd(m as i64, level as i64) == 1
        })
        .filter_map(|m| QuadraticCharacter::new(m).ok())
        .filter(move |chi| chi.sign() == sign.as_i8())
}

/// Fixes the overall factor of each functional so that the twisted sums equal
/// sqrt(M) L(f x chi, 1) / Omega^sign, then checks a second conductor of each sign and
/// reads the lattice shape off the calibrated homology image.
pub fn calibrate_normalization(
    form: &mut NewformData,
    space: &ModSymSpace,
    curve: &CurveModel,
    ctx: &LSeriesContext,
    periods: &PeriodPair,
) -> Result<CalibrationReport> {
    let level = form.level();
    if curve.conductor() != level || ctx.level() != level {
        return Err(Error::CalibrationFailed(format!(
            "curve {} has conductor {}, form has level {level}",
            curve.label(),
            curve.conductor()
        )));
    }
    if form.normalization().is_none() {
        form.lattice_normalize(space)?;
    }
    let mut checked = Vec::new();
    let mut q = 2;
    while checked.len() < HECKE_MATCH_PRIMES {
        q += 1;
        if !is_prime(q) || level.is_multiple_of(q) {
            continue;
        }
        let (a, b) = (form.ap(q)?, curve.ap(q)?);
        if a != b {
            return Err(Error::CalibrationFailed(format!(
                "a_{q} is {a} on the form and {b} on {}",
                curve.label()
            )));
        }
        checked.push(q);
    }

    let prec = ctx.precision();
    let mut chosen = Vec::new();
    let mut factors = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let mut found = None;
        for chi in conductors_of_sign(level, sign) {
            let exact = exact_twisted_sum(form, &chi)?;
            if !exact.is_zero() {
                found = Some((chi, exact));
                break;
            }
        }
        let (chi, exact) = found.ok_or_else(|| {
            Error::CalibrationFailed(format!("no nonzero twisted sum of sign {sign}"))
        })?;
        let (numeric, err, _) = numeric_twisted_value(ctx, periods, &chi)?;
        let ratio = numeric / real_from_rational(&exact, prec);
        let window = real(1, prec) / real(10, prec).powi(8.into()) + err * real(4, prec);
        let factor = recognize_rational(&ratio, &window, 8).ok_or_else(|| {
            Error::CalibrationFailed(format!(
                "ratio {} at conductor {} is not a small rational",
                to_f64(&ratio),
                chi.conductor()
            ))
        })?;
        if factor.abs() != BigRational::one() {
            log::warn!(
                "calibration factor {} for sign {sign} at level {level}",
                format_rational(&factor)
            );
        }
        chosen.push(chi.conductor());
        factors.push(factor);
    }
    form.apply_calibration(factors[0].clone(), factors[1].clone())?;
    form.set_label(class_label(curve.label()));

    let mut verification = Vec::new();
    for (sign, &used) in [Sign::Plus, Sign::Minus].iter().zip(&chosen) {
        let extra = conductors_of_sign(level, *sign)
            .filter(|c| c.conductor() > used)
            .take(2);
        for chi in extra {
            let check = birch_manin_check(form, ctx, periods, &chi)?;
            if !check.agrees {
                return Err(Error::CalibrationFailed(format!(
                    "conductor {}: numeric {} against exact {}",
                    chi.conductor(),
                    to_f64(&check.numeric),
                    format_rational(&check.exact)
                )));
            }
            verification.push((chi.conductor(), *sign, check.residual));
        }
    }

    let oracle_shape = homology_shape(form, space)?;
    if Some(oracle_shape) != form.lattice_shape() {
        return Err(Error::CalibrationFailed(
            "calibrated homology image does not match the normalized lattice".into(),
        ));
    }
    let mut conflicts = Vec::new();
    if curve.lattice_shape() != oracle_shape {
        conflicts.push(format!(
            "positive-discriminant rule gives {}, homology gives {oracle_shape}",
            curve.lattice_shape()
        ));
    }
    let negative_rule = curve.lattice_shape_negative_discriminant_rule();
    if negative_rule != oracle_shape {
        conflicts.push(format!(
            "negative-discriminant rule gives {negative_rule}, homology gives {oracle_shape}"
        ));
    }
    let root_number = ctx.l_value_central(&QuadraticCharacter::trivial())?.root_number;
    Ok(CalibrationReport {
        label: form.label().unwrap_or_default().to_string(),
        hecke_primes_checked: checked,
        plus_conductor: chosen[0],
        minus_conductor: chosen[1],
        plus_factor: format_rational(&factors[0]),
        minus_factor: format_rational(&factors[1]),
        periods: periods.summary(),
        discriminant: curve.discriminant().to_string(),
        oracle_shape,
        discriminant_shape: curve.lattice_shape(),
        negative_discriminant_rule_shape: negative_rule,
        shape_conflicts: conflicts,
        root_number,
        verification,
        assumption: format!(
            "{} is taken as the optimal curve with Manin constant 1",
            curve.label()
        ),
    })
}

/// Rectangular when every cycle has integral image, non-rectangular when (1/2, 1/2) occurs.
fn homology_shape(form: &NewformData, space: &ModSymSpace) -> Result<LatticeShape> {
    let images = form.homology_images(space)?;
    let two = BigInt::from(2);
    let mut half = false;
    for (x, y) in &images {
        let (dx, dy) = (x.denom(), y.denom());
        if !(dx.is_one() || *dx == two) || !(dy.is_one() || *dy == two) {
            return Err(Error::CalibrationFailed(format!(
                "homology image ({}, {}) is not half-integral",
                format_rational(x),
                format_rational(y)
            )));
        }
        if dx.is_one() != dy.is_one() {
            return Err(Error::CalibrationFailed(
                "homology image has a single half-integral coordinate".into(),
            ));
        }
        half |= *dx == two;
    }
    Ok(if half {
        LatticeShape::NonRectangular
    } else {
        LatticeShape::Rectangular
    })
}

/// A calibrated newform together with its space, L-series context, and periods.
pub struct CalibratedForm {
    pub form: NewformData,
    pub space: ModSymSpace,
    pub context: LSeriesContext,
    pub periods: PeriodPair,
    pub report: CalibrationReport,
}

/// Builds the space at the conductor of `curve`, picks the rational newform whose a_q
/// match the curve, and calibrates it.
pub fn calibrated_newform(
    curve: &CurveModel,
    precision: usize,
    eigenvalue_bound: u64,
) -> Result<CalibratedForm> {
    let space = ModSymSpace::build(curve.conductor())?;
    calibrated_newform_in(space, curve, precision, eigenvalue_bound)
}

/// As `calibrated_newform`, reusing an already built space at the conductor.
pub fn calibrated_newform_in(
    space: ModSymSpace,
    curve: &CurveModel,
    precision: usize,
    eigenvalue_bound: u64,
) -> Result<CalibratedForm> {
    if space.level() != curve.conductor() {
        return Err(Error::DimensionMismatch(format!(
            "space has level {}, curve has conductor {}",
            space.level(),
            curve.conductor()
        )));
    }
    let forms = super::newform::rational_newforms(&space, eigenvalue_bound)?;
    let level = curve.conductor();
    let mut matching = Vec::new();
    'forms: for f in forms {
        for q in crate::arith::primes_up_to(100) {
            if !level.is_multiple_of(q) && f.ap(q)? != curve.trace_of_frobenius(q)? {
                continue 'forms;
            }
        }
        matching.push(f);
    }
    if matching.len() != 1 {
        return Err(Error::CalibrationFailed(format!(
            "{} rational newforms at level {level} match {}",
            matching.len(),
            curve.label()
        )));
    }
    let mut form = matching.pop().expect("one form");
    let context = LSeriesContext::from_curve(curve, precision)?;
    let periods = curve.periods(precision)?;
    let report = calibrate_normalization(&mut form, &space, curve, &context, &periods)?;
    Ok(CalibratedForm {
        form,
        space,
        context,
        periods,
        report,
    })
}
