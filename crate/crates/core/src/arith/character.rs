use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::primes::{is_squarefree, legendre, prime_divisors};
use crate::error::{Error, Result};

/// Primes at or below this get a full residue table; larger ones use Euler's criterion.
pub const LEGENDRE_TABLE_BOUND: u64 = 1_000_000;

fn legendre_table(p: u64) -> Arc<Vec<i8>> {
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<Vec<i8>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&p) {
        return t.clone();
    }
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for x in 1..=(p / 2) {
        t[((x * x) % p) as usize] = 1;
    }
    let t = Arc::new(t);
    tables.lock().unwrap().insert(p, t.clone());
    t
}

/// Primitive quadratic Dirichlet character of conductor 1, m, or 4m (m odd squarefree).
///
/// For odd m the character is the Jacobi symbol k -> (k/m); the conductor-4m character
/// is the product of that with the nontrivial character mod 4.
#[derive(Clone, Serialize, Deserialize)]
pub struct QuadraticCharacter {
    conductor: u64,
    four: bool,
    odd: u64,
    primes: Vec<u64>,
    #[serde(skip)]
    tables: Vec<Option<Arc<Vec<i8>>>>,
}

impl std::fmt::Debug for QuadraticCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuadraticCharacter")
            .field("conductor", &self.conductor)
            .field("sign", &self.sign())
            .finish()
    }
}

impl PartialEq for QuadraticCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
    }
}

impl QuadraticCharacter {
    pub fn new(conductor: u64) -> Result<Self> {
        let (four, odd) = if conductor % 2 == 1 {
            (false, conductor)
        } else if conductor.is_multiple_of(4) && (conductor / 4) % 2 == 1 {
            (true, conductor / 4)
        } else {
            return Err(Error::InvalidConductor(conductor));
        };
        if conductor == 0 || !is_squarefree(odd) {
            return Err(Error::InvalidConductor(conductor));
        }
        let primes = prime_divisors(odd);
        let tables = primes
            .iter()
            .map(|&p| (p <= LEGENDRE_TABLE_BOUND).then(|| legendre_table(p)))
            .collect();
        Ok(QuadraticCharacter {
            conductor,
            four,
            odd,
            primes,
            tables,
        })
    }

    pub fn trivial() -> Self {
        Self::new(1).expect("conductor 1 is valid")
    }

    /// Whether `m` is 1, odd squarefree, or four times odd squarefree.
    pub fn is_valid_conductor(m: u64) -> bool {
        Self::new(m).is_ok()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn odd_part(&self) -> u64 {
        self.odd
    }

    pub fn has_four(&self) -> bool {
        self.four
    }

    pub fn odd_primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn value(&self, k: i64) -> i8 {
        let mut acc: i8 = 1;
        if self.four {
            match k.rem_euclid(4) {
                1 => {}
                3 => acc = -1,
                _ => return 0,
            }
        }
        for (i, &p) in self.primes.iter().enumerate() {
            let r = k.rem_euclid(p as i64);
            let l = match self.tables.get(i).and_then(|t| t.as_ref()) {
                Some(t) => t[r as usize],
                None => legendre(r, p),
            };
            if l == 0 {
                return 0;
            }
            acc *= l;
        }
        acc
    }

    /// chi(-1).
    pub fn sign(&self) -> i8 {
        self.value(-1)
    }

    /// tau(chi)^2 = chi(-1) * conductor for a primitive quadratic character.
    pub fn gauss_sum_squared(&self) -> BigInt {
        BigInt::from(self.sign()) * BigInt::from(self.conductor)
    }

    /// 2-adic valuation of the Gauss sum: 0 for odd conductor, 1 for conductor 4m.
    pub fn tau_v2(&self) -> i64 {
        if self.four {
            1
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes::{gcd, kronecker};
    use proptest::prelude::*;

    fn gauss_sum(chi: &QuadraticCharacter) -> (f64, f64) {
        let m = chi.conductor() as f64;
        (0..chi.conductor() as i64).fold((0.0, 0.0), |(re, im), k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / m;
            let c = chi.value(k) as f64;
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    #[test]
    fn rejects_bad_conductors() {
        for m in [0u64, 2, 8, 9, 12 * 3, 18, 16, 50] {
            assert!(QuadraticCharacter::new(m).is_err(), "{m}");
        }
        for m in [1u64, 3, 4, 5, 12, 15, 20, 105, 164] {
            assert!(QuadraticCharacter::new(m).is_ok(), "{m}");
        }
    }

    #[test]
    fn sign_rules() {
        assert_eq!(QuadraticCharacter::new(5).unwrap().sign(), 1);
        assert_eq!(QuadraticCharacter::new(7).unwrap().sign(), -1);
        assert_eq!(QuadraticCharacter::new(4).unwrap().sign(), -1);
        assert_eq!(QuadraticCharacter::new(12).unwrap().sign(), 1);
        assert_eq!(QuadraticCharacter::new(20).unwrap().sign(), -1);
    }

    #[test]
    fn gauss_sum_squares_match_direct_sum() {
        for m in [1u64, 3, 4, 5, 7, 12, 15, 20, 21, 28, 35, 60, 105, 164] {
            let chi = QuadraticCharacter::new(m).unwrap();
            let (re, im) = gauss_sum(&chi);
            let sq_re = re * re - im * im;
            let sq_im = 2.0 * re * im;
            let exact = chi.gauss_sum_squared();
            let exact: f64 = exact.to_string().parse().unwrap();
            assert!((sq_re - exact).abs() < 1e-6 && sq_im.abs() < 1e-6, "m = {m}");
        }
    }

    proptest! {
        #[test]
        fn character_is_periodic_multiplicative_and_primitive(idx in 0usize..12, a in -300i64..300, b in -300i64..300) {
            let ms = [3u64, 4, 5, 7, 12, 15, 20, 21, 28, 33, 60, 105];
            let chi = QuadraticCharacter::new(ms[idx]).unwrap();
            let m = chi.conductor() as i64;
            prop_assert_eq!(chi.value(a), chi.value(a + m));
            prop_assert_eq!(chi.value(a * b), chi.value(a) * chi.value(b));
            prop_assert_eq!(chi.value(a) == 0, gcd(a, m) != 1);
            // agrees with the Kronecker symbol of the fundamental discriminant
            let disc = chi.sign() as i64 * m;
            prop_assert_eq!(chi.value(a), if gcd(a, m) == 1 { kronecker(disc, a.rem_euclid(m) + m) } else { 0 });
        }
    }
}
