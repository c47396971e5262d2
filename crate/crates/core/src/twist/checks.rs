use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::engine::TwistEngine;
use super::spec::DivisorSpec;
use super::{frak_vw, serialize_rational, Gated};
use crate::arith::{euler_phi, gcd, QuadraticCharacter, TwoAdic, Valuation};
use crate::error::{Error, Result};
use crate::modsym::{LatticeShape, Sign};

/// x lies in kZ.
pub fn in_multiple_of(x: &BigRational, k: i64) -> bool {
    let y = x / BigRational::from_integer(BigInt::from(k));
    y.is_integer()
}

/// Both sides of T_{D,M} = (a_q - 2 chi_D(q)) T_{D,M/q}, each summed directly.
#[derive(Debug, Clone, Serialize)]
pub struct RecursionCheck {
    pub q: u64,
    pub d: DivisorSpec,
    pub m: DivisorSpec,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: BigRational,
    pub holds: bool,
}

/// A computed 2-adic valuation against a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub valuation: Valuation,
    /// None when the bound is minus infinity.
    pub bound: Option<i64>,
    pub holds: bool,
}

impl BoundCheck {
    fn new(valuation: Valuation, bound: Option<i64>) -> Self {
        BoundCheck {
            valuation,
            bound,
            holds: bound.is_none_or(|b| valuation >= b),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegralityCheck {
    pub k: i64,
    pub m: u64,
    pub nu: i64,
    pub plus_difference_integral: bool,
    pub minus_integral: bool,
    /// v2([k/M]^+ + [k/M]^-) >= min(0, v2([0]^+)).
    pub sum_valuation_bound: bool,
}

impl IntegralityCheck {
    pub fn holds(&self) -> bool {
        self.plus_difference_integral && self.minus_integral && self.sum_valuation_bound
    }
}

/// The two inequalities for one prime q | m, as stated and in the form the argument
/// through m = q yields.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeBoundCheck {
    pub q: u64,
    pub ap: i64,
    /// v2(a_q - (q+1)) >= w_m + e - v2(T_1), e = 1 rectangular and 0 otherwise.
    pub first: BoundCheck,
    /// v2(a_q - 2 chi_4(q)) >= w_m + e - v2(T_4).
    pub second: Gated<BoundCheck>,
    /// v2(a_q - (q+1)) >= e - v2(T_1).
    pub first_single_prime: BoundCheck,
    /// v2(a_q - 2 chi_4(q)) >= w_q + e - v2(T_4).
    pub second_single_prime: Gated<BoundCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BeforeTwistCheck {
    pub m: u64,
    pub shape: LatticeShape,
    pub w_m: i64,
    /// T_{1,m} - phi(m) T_1 in 2Z (resp. Z).
    pub t1_difference: bool,
    /// T_{4,4m} in 2Z (resp. Z).
    pub t4_membership: Gated<bool>,
    /// T_{4,4m} in 4Z (resp. 2Z) when some q | m has a_q even.
    pub even_ap_strengthening: Gated<bool>,
    pub prime_bounds: Vec<PrimeBoundCheck>,
}

impl BeforeTwistCheck {
    /// Lemma-level memberships, ignoring the per-prime inequalities.
    pub fn memberships_hold(&self) -> bool {
        self.t1_difference
            && self.t4_membership.holds_or_gated()
            && self.even_ap_strengthening.holds_or_gated()
    }

    pub fn literal_bounds_hold(&self) -> bool {
        self.prime_bounds
            .iter()
            .all(|p| p.first.holds && p.second.map_ref(|c| c.holds).holds_or_gated())
    }

    pub fn single_prime_bounds_hold(&self) -> bool {
        self.prime_bounds.iter().all(|p| {
            p.first_single_prime.holds
                && p.second_single_prime.map_ref(|c| c.holds).holds_or_gated()
        })
    }
}

/// Sum over the primed family of chi_D(k), directly.
pub fn char_sum_sigma(m: DivisorSpec, k: i64) -> Result<i64> {
    if gcd(k, m.modulus() as i64) != 1 {
        return Err(Error::NotCoprime {
            a: k.unsigned_abs(),
            b: m.modulus(),
        });
    }
    Ok(m.primed_family()
        .iter()
        .map(|d| d.character().value(k) as i64)
        .sum())
}

/// prod (1 + chi_q(k)), times chi_4(k) when 4 | M.
pub fn char_sum_closed_form(m: DivisorSpec, k: i64) -> Result<i64> {
    if gcd(k, m.modulus() as i64) != 1 {
        return Err(Error::NotCoprime {
            a: k.unsigned_abs(),
            b: m.modulus(),
        });
    }
    let mut out: i64 = m
        .primes()
        .iter()
        .map(|&q| 1 + QuadraticCharacter::new(q).expect("odd prime").value(k) as i64)
        .product();
    if m.has_four() {
        out *= QuadraticCharacter::new(4).expect("four").value(k) as i64;
    }
    Ok(out)
}

impl TwistEngine<'_> {
    pub fn check_lemma_recursion(
        &self,
        q: u64,
        d: DivisorSpec,
        m: DivisorSpec,
    ) -> Result<RecursionCheck> {
        if !m.odd_part().is_multiple_of(q) || d.odd_part().is_multiple_of(q) || q.is_multiple_of(2) {
            return Err(Error::Divisibility(format!(
                "{q} must be an odd prime dividing {m} and not {d}"
            )));
        }
        let smaller = DivisorSpec::new(m.n(), m.odd_part() / q)?;
        let lhs = self.t_dm_direct(d, m)?.value;
        let factor = self.ap(q)? - 2 * d.character().value(q as i64) as i64;
        let rhs = self.t_dm_direct(d, smaller)?.value * BigRational::from_integer(factor.into());
        Ok(RecursionCheck {
            q,
            d,
            m,
            holds: lhs == rhs,
            lhs,
            rhs,
        })
    }

    pub fn check_integrality(&self, k: i64, m: u64) -> Result<IntegralityCheck> {
        if gcd(k, m as i64) != 1 {
            return Err(Error::NotCoprime {
                a: k.unsigned_abs(),
                b: m,
            });
        }
        if gcd(m as i64, self.level() as i64) != 1 {
            return Err(Error::NotCoprime {
                a: m,
                b: self.level(),
            });
        }
        let nu = BigRational::from_integer(self.nu().into());
        let zero = self.t1()?;
        let plus = self.symbol(k, m, Sign::Plus)?;
        let minus = self.symbol(k, m, Sign::Minus)?;
        let floor = Valuation::min_of([Valuation::Finite(0), zero.v2()]);
        Ok(IntegralityCheck {
            k,
            m,
            nu: self.nu(),
            plus_difference_integral: (&nu * (&plus - &zero)).is_integer(),
            minus_integral: (&nu * &minus).is_integer(),
            sum_valuation_bound: (plus + minus).v2() >= floor,
        })
    }

    /// v2 of the primed sum against r + min(0, v2(T_1)).
    pub fn check_sum_bound_general(&self, m: DivisorSpec) -> Result<BoundCheck> {
        let sum = self.primed_sum(m)?;
        let floor = Valuation::min_of([Valuation::Finite(0), self.t1()?.v2()]);
        Ok(BoundCheck::new(sum.v2(), (floor + m.r() as i64).finite()))
    }

    /// The sharper bound when every odd q | M is 1 mod 4.
    pub fn check_sum_bound_plus(&self, m: DivisorSpec) -> Result<Gated<BoundCheck>> {
        if let Some(q) = m.primes().into_iter().find(|q| q % 4 != 1) {
            return Ok(Gated::NotApplicable(format!("{q} is not 1 mod 4")));
        }
        if m.modulus() == 1 {
            // the argument pairs k with m - k, which needs m > 1
            return Ok(Gated::NotApplicable("m = 1".into()));
        }
        let sum = self.primed_sum(m)?;
        let r = m.r() as i64;
        let rect = self.shape() == LatticeShape::Rectangular;
        let bound = if m.has_four() {
            Some(if rect { r + 1 } else { r })
        } else {
            let cap = if rect { 0 } else { -1 };
            (Valuation::min_of([Valuation::Finite(cap), self.t1()?.v2()]) + (r + 1)).finite()
        };
        Ok(Gated::Applicable(BoundCheck::new(sum.v2(), bound)))
    }

    pub fn check_before_twist(&self, m: u64) -> Result<BeforeTwistCheck> {
        if m.is_multiple_of(2) || gcd(m as i64, self.level() as i64) != 1 {
            return Err(Error::NotCoprime {
                a: m,
                b: 2 * self.level(),
            });
        }
        let spec = DivisorSpec::new(0, m)?;
        let one = DivisorSpec::trivial();
        let rect = self.shape() == LatticeShape::Rectangular;
        let e: i64 = if rect { 1 } else { 0 };
        let unit = if rect { 2 } else { 1 };

        let t1 = self.t1()?;
        let t1m = self.t_dm_direct(one, spec)?.value;
        let phi = BigRational::from_integer(euler_phi(m).into());
        let t1_difference = in_multiple_of(&(t1m - phi * &t1), unit);

        let primes = spec.primes();
        let aps = primes
            .iter()
            .map(|&q| self.ap(q))
            .collect::<Result<Vec<_>>>()?;
        let (_, w_m) = frak_vw(&aps);

        let level_odd = self.level() % 2 == 1;
        let (t4_membership, even_ap_strengthening, t4) = if level_odd {
            let four_m = DivisorSpec::new(1, m)?;
            let t44m = self.t_dm_direct(DivisorSpec::new(1, 1)?, four_m)?.value;
            let strengthening = if aps.iter().any(|a| a % 2 == 0) {
                Gated::Applicable(in_multiple_of(&t44m, 2 * unit))
            } else {
                Gated::NotApplicable("no q | m has a_q even".into())
            };
            (
                Gated::Applicable(in_multiple_of(&t44m, unit)),
                strengthening,
                Some(self.t4()?),
            )
        } else {
            let why = || Gated::NotApplicable("level is even, so 4 is not coprime to it".into());
            (why(), why(), None)
        };

        let chi4 = QuadraticCharacter::new(4)?;
        let t1v = t1.v2();
        let prime_bounds = primes
            .iter()
            .zip(&aps)
            .map(|(&q, &ap)| {
                let first_val = (ap - (q as i64 + 1)).v2();
                let w_q = if ap % 2 == 0 { 1 } else { 0 };
                let second = |w: i64| match &t4 {
                    Some(t4) => Gated::Applicable(BoundCheck::new(
                        (ap - 2 * chi4.value(q as i64) as i64).v2(),
                        lower_bound(w + e, t4.v2()),
                    )),
                    None => Gated::NotApplicable("T_4 needs an odd level".into()),
                };
                PrimeBoundCheck {
                    q,
                    ap,
                    first: BoundCheck::new(first_val, lower_bound(w_m + e, t1v)),
                    second: second(w_m),
                    first_single_prime: BoundCheck::new(first_val, lower_bound(e, t1v)),
                    second_single_prime: second(w_q),
                }
            })
            .collect();

        Ok(BeforeTwistCheck {
            m,
            shape: self.shape(),
            w_m,
            t1_difference,
            t4_membership,
            even_ap_strengthening,
            prime_bounds,
        })
    }
}

/// c - v; an infinite v leaves no constraint.
fn lower_bound(c: i64, v: Valuation) -> Option<i64> {
    v.finite().map(|v| c - v)
}
