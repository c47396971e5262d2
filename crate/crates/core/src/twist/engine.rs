use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::spec::DivisorSpec;
use crate::arith::{gcd, Valuation, TwoAdic};
use crate::error::{Error, Result};
use crate::modsym::{LatticeShape, NewformData, Sign};

/// How a value of T_{D,M} was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    DirectSum,
    Factored,
}

/// T_{D,M} = sum over units k mod M of chi_D(k) [k/M]^sign(chi_D).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistValue {
    pub level: u64,
    pub d: DivisorSpec,
    pub m: DivisorSpec,
    #[serde(serialize_with = "crate::twist::serialize_rational")]
    pub value: BigRational,
    pub method: Method,
}

impl TwistValue {
    pub fn v2(&self) -> Valuation {
        self.value.v2()
    }
}

/// Numerators of [k/M]^+ and [k/M]^- for the units k in [1, M].
struct UnitTable {
    units: Vec<i64>,
    plus: Vec<i128>,
    minus: Vec<i128>,
}

/// Evaluates T_{D,M} for a calibrated form, caching symbol values per modulus.
pub struct TwistEngine<'a> {
    form: &'a NewformData,
    den_plus: i64,
    den_minus: i64,
    shape: LatticeShape,
    tables: RwLock<HashMap<u64, Arc<UnitTable>>>,
    eigenvalues: RwLock<HashMap<u64, i64>>,
}

const CACHE_LIMIT: usize = 4_000_000;

impl<'a> TwistEngine<'a> {
    pub fn new(form: &'a NewformData) -> Result<Self> {
        if !form.is_calibrated() {
            return Err(Error::NotNormalized);
        }
        Ok(TwistEngine {
            form,
            den_plus: form.denominator(Sign::Plus)?,
            den_minus: form.denominator(Sign::Minus)?,
            shape: form.lattice_shape().ok_or(Error::NotNormalized)?,
            tables: RwLock::new(HashMap::new()),
            eigenvalues: RwLock::new(HashMap::new()),
        })
    }

    pub fn form(&self) -> &NewformData {
        self.form
    }

    pub fn level(&self) -> u64 {
        self.form.level()
    }

    pub fn shape(&self) -> LatticeShape {
        self.shape
    }

    /// 1 for a rectangular lattice, 2 otherwise.
    pub fn nu(&self) -> i64 {
        self.shape.nu()
    }

    /// Hecke eigenvalue a_q, memoized.
    pub fn ap(&self, q: u64) -> Result<i64> {
        if let Some(&a) = self.eigenvalues.read().expect("eigenvalue cache").get(&q) {
            return Ok(a);
        }
        let a = self.form.ap(q)?;
        self.eigenvalues.write().expect("eigenvalue cache").insert(q, a);
        Ok(a)
    }

    fn check_coprime(&self, m: u64) -> Result<()> {
        if gcd(m as i64, self.level() as i64) != 1 {
            return Err(Error::NotCoprime {
                a: m,
                b: self.level(),
            });
        }
        Ok(())
    }

    fn table(&self, m: u64) -> Result<Arc<UnitTable>> {
        if let Some(t) = self.tables.read().expect("table cache").get(&m) {
            return Ok(t.clone());
        }
        let mut units = Vec::new();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for k in 1..=m as i64 {
            if gcd(k, m as i64) != 1 {
                continue;
            }
            units.push(k);
            plus.push(self.form.eval_numerator(k, m as i64, Sign::Plus)?);
            minus.push(self.form.eval_numerator(k, m as i64, Sign::Minus)?);
        }
        let t = Arc::new(UnitTable { units, plus, minus });
        let mut cache = self.tables.write().expect("table cache");
        let size: usize = cache.values().map(|t| t.units.len()).sum();
        if size > CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(m, t.clone());
        Ok(t)
    }

    /// Drops cached symbol tables.
    pub fn clear_cache(&self) {
        self.tables.write().expect("table cache").clear();
    }

    /// [k/M]^sign exactly.
    pub fn symbol(&self, k: i64, m: u64, sign: Sign) -> Result<BigRational> {
        let num = self.form.eval_numerator(k, m as i64, sign)?;
        let den = match sign {
            Sign::Plus => self.den_plus,
            Sign::Minus => self.den_minus,
        };
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// T_1 = [0]^+.
    pub fn t1(&self) -> Result<BigRational> {
        Ok(self.t_dm_direct(DivisorSpec::trivial(), DivisorSpec::trivial())?.value)
    }

    /// T_4 = 2 [1/4]^-, defined when the level is odd.
    pub fn t4(&self) -> Result<BigRational> {
        let four = DivisorSpec::new(1, 1)?;
        Ok(self.t_dm_direct(four, four)?.value)
    }

    /// T_M = T_{M,M}.
    pub fn t_m(&self, m: DivisorSpec) -> Result<BigRational> {
        Ok(self.t_dm_direct(m, m)?.value)
    }

    /// T_{D,M} by summing over the units mod M.
    pub fn t_dm_direct(&self, d: DivisorSpec, m: DivisorSpec) -> Result<TwistValue> {
        if !d.divides(&m) {
            return Err(Error::Divisibility(format!("{d} does not divide {m}")));
        }
        let modulus = m.modulus();
        self.check_coprime(modulus)?;
        let chi = d.character();
        let sign = chi.sign();
        let t = self.table(modulus)?;
        let values = if sign == 1 { &t.plus } else { &t.minus };
        let mut acc: i128 = 0;
        for (&k, &v) in t.units.iter().zip(values) {
            acc += chi.value(k) as i128 * v;
        }
        let den = if sign == 1 { self.den_plus } else { self.den_minus };
        Ok(TwistValue {
            level: self.level(),
            d,
            m,
            value: BigRational::new(BigInt::from(acc), BigInt::from(den)),
            method: Method::DirectSum,
        })
    }

    /// T_{D,M} = T_D prod over odd q | M/D of (a_q - 2 chi_D(q)); D and M must agree in
    /// their power of 4.
    pub fn t_dm_factored(&self, d: DivisorSpec, m: DivisorSpec) -> Result<TwistValue> {
        if !d.divides(&m) {
            return Err(Error::Divisibility(format!("{d} does not divide {m}")));
        }
        if d.n() != m.n() {
            return Err(Error::Divisibility(format!(
                "{d} and {m} differ in their power of 4, which the product formula does not cover"
            )));
        }
        self.check_coprime(m.modulus())?;
        let base = self.t_dm_direct(d, d)?.value;
        let chi = d.character();
        let mut factor = BigInt::from(1);
        for q in m.primes() {
            if d.odd_part().is_multiple_of(q) {
                continue;
            }
            factor *= self.ap(q)? - 2 * chi.value(q as i64) as i64;
        }
        Ok(TwistValue {
            level: self.level(),
            d,
            m,
            value: base * BigRational::from_integer(factor),
            method: Method::Factored,
        })
    }

    /// sum over the primed family of T_{D,M}.
    pub fn primed_sum(&self, m: DivisorSpec) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for d in m.primed_family() {
            total += self.t_dm_direct(d, m)?.value;
        }
        Ok(total)
    }
}
