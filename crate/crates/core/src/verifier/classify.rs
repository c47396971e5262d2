use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, TwoAdic, Valuation};
use crate::error::{Error, Result};
use crate::twist::{frak_vw, DivisorSpec, TwistEngine};

/// An odd prime q not dividing the level, with sgn(chi_q) and i = v2(a_q - 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeClass {
    pub q: u64,
    pub sign: i8,
    pub i: Valuation,
}

impl PrimeClass {
    /// Membership in S_0, S_1 or S_2.
    pub fn satisfies_hypothesis(&self) -> bool {
        self.i <= 2
    }

    /// Short name such as `S1+`.
    pub fn name(&self) -> String {
        format!(
            "S{}{}",
            self.i.to_field(),
            if self.sign == 1 { '+' } else { '-' }
        )
    }
}

/// Parses a class name such as `S0+` into (i, sign).
pub fn parse_class(s: &str) -> Result<(Valuation, i8)> {
    let body = s
        .trim()
        .strip_prefix('S')
        .ok_or_else(|| Error::Parse(format!("class {s:?} must look like S0+")))?;
    let (i, sign) = match body.chars().last() {
        Some('+') => (&body[..body.len() - 1], 1),
        Some('-') => (&body[..body.len() - 1], -1),
        _ => return Err(Error::Parse(format!("class {s:?} needs a trailing + or -"))),
    };
    let i = Valuation::from_field(i).ok_or_else(|| Error::Parse(format!("bad index in {s:?}")))?;
    Ok((i, sign))
}

pub fn classify_prime(engine: &TwistEngine, q: u64) -> Result<PrimeClass> {
    if q == 2 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if engine.level().is_multiple_of(q) {
        return Err(Error::PrimeDividesLevel {
            prime: q,
            level: engine.level(),
        });
    }
    let ap = engine.ap(q)?;
    Ok(PrimeClass {
        q,
        sign: if q % 4 == 1 { 1 } else { -1 },
        i: (ap - 2).v2(),
    })
}

/// (v_m, w_m, r(m)) for odd square-free m coprime to the level.
pub fn frak_invariants(engine: &TwistEngine, m: u64) -> Result<(Valuation, i64, usize)> {
    let spec = DivisorSpec::new(0, m)?;
    let primes = spec.primes();
    let aps = primes
        .iter()
        .map(|&q| classify_prime(engine, q).and_then(|_| engine.ap(q)))
        .collect::<Result<Vec<_>>>()?;
    let (v, w) = frak_vw(&aps);
    Ok((v, w, primes.len()))
}
