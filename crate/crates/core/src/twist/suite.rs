use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::checks::{char_sum_closed_form, char_sum_sigma};
use super::engine::TwistEngine;
use super::spec::DivisorSpec;
use super::Gated;
use crate::arith::{gcd, is_squarefree, TwoAdic};
use crate::error::Result;

/// Scale of a property sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    /// Largest odd part for the recursion and factorization identities.
    pub recursion_max: u64,
    /// Largest odd part for the sum bounds and the before-twist checks.
    pub bounds_max: u64,
    pub integrality_samples: usize,
    pub integrality_max_modulus: u64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            recursion_max: 3000,
            bounds_max: 1500,
            integrality_samples: 500,
            integrality_max_modulus: 10_000,
            seed: 17,
        }
    }
}

/// Pass counts for one family of checks, with the failing inputs.
#[derive(Debug, Clone, Serialize)]
pub struct CheckFamily {
    pub name: String,
    /// Whether a failure here counts against the suite.
    pub required: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckFamily {
    pub fn new(name: &str, required: bool) -> Self {
        CheckFamily {
            name: name.to_string(),
            required,
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, input: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(input());
        }
    }

    pub fn merge(mut self, other: CheckFamily) -> Self {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }

    pub fn passed(&self) -> usize {
        self.checked - self.failures.len()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} {}/{}", self.name, self.passed(), self.checked);
        if !self.required {
            s.push_str(" (informational)");
        }
        if let Some(first) = self.failures.first() {
            s.push_str(&format!(", first failure {first}"));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub level: u64,
    pub families: Vec<CheckFamily>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.families.iter().all(|f| !f.required || f.ok())
    }
}

/// Odd square-free m up to `limit` coprime to `level`.
pub fn squarefree_odd_coprime(limit: u64, level: u64) -> Vec<u64> {
    (1..=limit)
        .step_by(2)
        .filter(|&m| is_squarefree(m) && gcd(m as i64, level as i64) == 1)
        .collect()
}

/// Powers of 4 for which 4^n m can be coprime to the level.
pub fn allowed_n(level: u64) -> Vec<u8> {
    if level.is_multiple_of(2) {
        vec![0]
    } else {
        vec![0, 1]
    }
}

/// Direct against factored values, and the one-prime recursion, for every D dividing M.
pub fn recursion_family(engine: &TwistEngine, max_odd: u64) -> Result<CheckFamily> {
    let level = engine.level();
    let mut work = Vec::new();
    for n in allowed_n(level) {
        for m in squarefree_odd_coprime(max_odd, level) {
            work.push(DivisorSpec::new(n, m)?);
        }
    }
    work.par_iter()
        .map(|&big| -> Result<CheckFamily> {
            let mut c = CheckFamily::new("recursion and factorization", true);
            let mut divisors = big.primed_family();
            if big.has_four() {
                divisors.extend(DivisorSpec::new(0, big.odd_part())?.primed_family());
            }
            for d in divisors {
                if d.n() == big.n() {
                    let direct = engine.t_dm_direct(d, big)?.value;
                    let factored = engine.t_dm_factored(d, big)?.value;
                    c.record(direct == factored, || format!("factor D={d} M={big}"));
                }
                for q in big.primes() {
                    if d.odd_part() % q == 0 {
                        continue;
                    }
                    let r = engine.check_lemma_recursion(q, d, big)?;
                    c.record(r.holds, || format!("recursion q={q} D={d} M={big}"));
                }
            }
            Ok(c)
        })
        .try_reduce(
            || CheckFamily::new("recursion and factorization", true),
            |a, b| Ok(a.merge(b)),
        )
}

/// Integrality of symbols at random k/M.
pub fn integrality_family(engine: &TwistEngine, config: &SuiteConfig) -> Result<CheckFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ engine.level());
    let mut c = CheckFamily::new("integrality", true);
    while c.checked < config.integrality_samples {
        let m: u64 = rng.gen_range(2..=config.integrality_max_modulus.max(2));
        let k: i64 = rng.gen_range(1..=m as i64);
        if gcd(k, m as i64) != 1 || gcd(m as i64, engine.level() as i64) != 1 {
            continue;
        }
        let r = engine.check_integrality(k, m)?;
        c.record(r.holds(), || format!("{k}/{m}"));
    }
    Ok(c)
}

/// Closed form of the primed character sum, exhaustively for M up to `max`.
pub fn character_sum_family(max: u64) -> Result<CheckFamily> {
    let mut c = CheckFamily::new("character sums", true);
    for m in 1..=max {
        let Ok(spec) = DivisorSpec::from_modulus(m) else { continue };
        for k in 1..=m as i64 {
            if gcd(k, m as i64) != 1 {
                continue;
            }
            let direct = char_sum_sigma(spec, k)?;
            let closed = char_sum_closed_form(spec, k)?;
            c.record(direct == closed && direct.v2() >= spec.r() as i64, || {
                format!("M={m} k={k}")
            });
        }
    }
    Ok(c)
}

/// Sum bounds and before-twist checks. The before-twist inequalities appear twice: as
/// stated with w_m (required) and in the single-prime form (informational).
pub fn bound_families(engine: &TwistEngine, max_odd: u64) -> Result<Vec<CheckFamily>> {
    let level = engine.level();
    let mut general = CheckFamily::new("sum bound", true);
    let mut plus = CheckFamily::new("sharper sum bound", true);
    let mut memberships = CheckFamily::new("before-twist memberships", true);
    let mut literal = CheckFamily::new("before-twist inequalities as stated", true);
    let mut single = CheckFamily::new("before-twist inequalities with w_q", false);
    for n in allowed_n(level) {
        for m in squarefree_odd_coprime(max_odd, level) {
            let spec = DivisorSpec::new(n, m)?;
            let g = engine.check_sum_bound_general(spec)?;
            general.record(g.holds, || format!("M={spec}"));
            if let Gated::Applicable(p) = engine.check_sum_bound_plus(spec)? {
                plus.record(p.holds, || format!("M={spec}"));
            }
        }
    }
    for m in squarefree_odd_coprime(max_odd, level) {
        if m == 1 {
            continue;
        }
        let b = engine.check_before_twist(m)?;
        memberships.record(b.memberships_hold(), || format!("m={m}"));
        literal.record(b.literal_bounds_hold(), || {
            let bad: Vec<String> = b
                .prime_bounds
                .iter()
                .filter(|p| !p.first.holds || !p.second.map_ref(|c| c.holds).holds_or_gated())
                .map(|p| format!("q={} a_q={}", p.q, p.ap))
                .collect();
            format!("m={m} ({})", bad.join(", "))
        });
        single.record(b.single_prime_bounds_hold(), || format!("m={m}"));
    }
    Ok(vec![general, plus, memberships, literal, single])
}

/// Every family for one form.
pub fn property_suite(engine: &TwistEngine, config: &SuiteConfig) -> Result<SuiteReport> {
    let mut families = vec![
        recursion_family(engine, config.recursion_max)?,
        integrality_family(engine, config)?,
    ];
    engine.clear_cache();
    families.extend(bound_families(engine, config.bounds_max)?);
    engine.clear_cache();
    Ok(SuiteReport {
        level: engine.level(),
        families,
    })
}
