//! Weierstrass models: invariants, point counts over finite fields, and real periods.

mod model;
mod periods;
mod points;

pub use model::CurveModel;
pub use periods::{PeriodPair, PeriodSummary};
pub use points::{count_points, count_points_naive, NAIVE_COUNT_LIMIT};
