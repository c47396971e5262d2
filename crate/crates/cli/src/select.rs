use std::path::PathBuf;

use clap::Args;
use quadtwist::curve::CurveModel;
use quadtwist::modsym::{calibrated_newform_in, CalibratedForm};
use quadtwist::{Error, Result};

use crate::cache;

/// Which curve to work with.
#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// Conductor N; picks the first curve of that conductor by label.
    #[arg(long)]
    pub level: Option<u64>,
    /// Curve label such as 37a1.
    #[arg(long)]
    pub curve: Option<String>,
    /// File of records `label N a1 a2 a3 a4 a6` used instead of the built-in curves.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Working precision in bits for periods and L-values.
    #[arg(long, default_value_t = 128)]
    pub precision: usize,
}

/// Largest prime used when matching eigenvalues against the curve.
pub const EIGENVALUE_BOUND: u64 = 100;

fn candidates(args: &CurveArgs) -> Result<Vec<CurveModel>> {
    match &args.fixtures {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            CurveModel::parse_fixtures(&text)
        }
        None => Ok(CurveModel::builtin_labels()
            .into_iter()
            .filter_map(CurveModel::builtin)
            .collect()),
    }
}

/// The selected curve, or None when only a level was given and no curve has it.
pub fn find_curve(args: &CurveArgs) -> Result<Option<CurveModel>> {
    let mut all = candidates(args)?;
    all.sort_by(|a, b| a.label().cmp(b.label()));
    if let Some(label) = &args.curve {
        let c = all
            .into_iter()
            .find(|c| c.label() == label)
            .ok_or_else(|| Error::Invalid(format!("unknown curve {label}")))?;
        if let Some(n) = args.level {
            if n != c.conductor() {
                return Err(Error::Invalid(format!(
                    "{label} has conductor {}, not {n}",
                    c.conductor()
                )));
            }
        }
        return Ok(Some(c));
    }
    let n = args
        .level
        .ok_or_else(|| Error::Invalid("give --level or --curve".into()))?;
    Ok(all.into_iter().find(|c| c.conductor() == n))
}

pub fn require_curve(args: &CurveArgs) -> Result<CurveModel> {
    find_curve(args)?.ok_or_else(|| {
        Error::Invalid(format!(
            "no curve of conductor {} is known; pass --fixtures",
            args.level.unwrap_or(0)
        ))
    })
}

pub fn calibrated(args: &CurveArgs) -> Result<CalibratedForm> {
    let curve = require_curve(args)?;
    let space = cache::load_space(curve.conductor())?;
    calibrated_newform_in(space, &curve, args.precision, EIGENVALUE_BOUND)
}
