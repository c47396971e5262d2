//! Prime classes S_i^+-, the lower bounds for v2 of twisted algebraic parts with their
//! equality conditions, and generation and audit of single-prime tables.
mod audit;
mod bounds;
mod classify;

pub use audit::{
    audit_table, AuditRow, ReferenceRow, TableAudit, REFERENCE_34A_N0, REFERENCE_37A_N1,
};
pub use bounds::{
    generate_table, intro_prime_scan, scan_class, theorem_bound, verify_twist, BaseValuations,
    TheoremBound, TwistReport,
};
pub use classify::{classify_prime, frak_invariants, parse_class, PrimeClass};

#[cfg(test)]
mod tests;
