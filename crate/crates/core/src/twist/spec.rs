use serde::{Deserialize, Serialize};

use crate::arith::{is_squarefree, prime_divisors, QuadraticCharacter};
use crate::error::{Error, Result};

/// A modulus 4^n d with n in {0, 1} and d odd and square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorSpec {
    n: u8,
    d: u64,
}

impl DivisorSpec {
    pub fn new(n: u8, d: u64) -> Result<Self> {
        if n > 1 {
            return Err(Error::Invalid(format!("the power of 4 must be 0 or 1, got {n}")));
        }
        if d == 0 || d.is_multiple_of(2) || !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(DivisorSpec { n, d })
    }

    /// Parses a modulus M = d or M = 4d.
    pub fn from_modulus(m: u64) -> Result<Self> {
        if m.is_multiple_of(4) {
            Self::new(1, m / 4)
        } else {
            Self::new(0, m)
        }
    }

    pub fn trivial() -> Self {
        DivisorSpec { n: 0, d: 1 }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn odd_part(&self) -> u64 {
        self.d
    }

    pub fn has_four(&self) -> bool {
        self.n == 1
    }

    pub fn modulus(&self) -> u64 {
        if self.n == 1 {
            4 * self.d
        } else {
            self.d
        }
    }

    /// Odd prime divisors in increasing order.
    pub fn primes(&self) -> Vec<u64> {
        prime_divisors(self.d)
    }

    pub fn r(&self) -> usize {
        self.primes().len()
    }

    pub fn character(&self) -> QuadraticCharacter {
        QuadraticCharacter::new(self.modulus()).expect("valid conductor")
    }

    /// Componentwise divisibility: odd parts divide and the 4 appears in self only if in other.
    pub fn divides(&self, other: &DivisorSpec) -> bool {
        other.d.is_multiple_of(self.d) && self.n <= other.n
    }

    /// D over which the primed sum runs: d | m when n = 0, 4d with d | m when n = 1,
    /// ordered by number of prime factors and then by prime list.
    pub fn primed_family(&self) -> Vec<DivisorSpec> {
        let primes = self.primes();
        let mut subsets: Vec<Vec<u64>> = (0..1usize << primes.len())
            .map(|mask| {
                primes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &q)| q)
                    .collect()
            })
            .collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        subsets
            .into_iter()
            .map(|s| DivisorSpec {
                n: self.n,
                d: s.iter().product(),
            })
            .collect()
    }
}

impl std::fmt::Display for DivisorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.modulus())
    }
}
