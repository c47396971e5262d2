use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The cusp k/M as a coprime pair; M = 0 (with k = 1) is the cusp at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CuspPath {
    k: i64,
    m: i64,
}

impl CuspPath {
    pub fn new(k: i64, m: i64) -> Result<Self> {
        if m < 0 {
            return Self::new(-k, -m);
        }
        if k.gcd(&m) != 1 {
            return Err(Error::Invalid(format!("cusp {k}/{m} is not in lowest terms")));
        }
        Ok(CuspPath { k, m })
    }

    /// Reduces k/M to lowest terms.
    pub fn reduced(k: i64, m: i64) -> Result<Self> {
        let g = k.gcd(&m);
        if g == 0 {
            return Err(Error::Invalid("0/0 is not a cusp".into()));
        }
        Self::new(k / g, m / g)
    }

    pub fn infinity() -> Self {
        CuspPath { k: 1, m: 0 }
    }

    pub fn zero() -> Self {
        CuspPath { k: 0, m: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.k
    }

    pub fn denominator(&self) -> i64 {
        self.m
    }

    pub fn negate(&self) -> Self {
        if self.m == 0 {
            *self
        } else {
            CuspPath { k: -self.k, m: self.m }
        }
    }
}

/// Unimodular decomposition of the path {0, k/M} from the continued fraction of k/M.
///
/// With convergents p_j/q_j (p_{-1}/q_{-1} = 1/0), each step {p_{j-1}/q_{j-1}, p_j/q_j}
/// is g{0, oo} for g with bottom row (q_j, (-1)^{j-1} q_{j-1}); the j = 0 step is
/// the same for every start and cancels against {0, oo}. Returned pairs are the bottom
/// rows (c, d) as integers, each with coefficient +1.
pub fn manin_path_decompose(path: CuspPath) -> Vec<(i64, i64)> {
    if path.m == 0 {
        return vec![(0, 1)];
    }
    let mut out = Vec::new();
    let (mut a, mut b) = (path.k, path.m);
    // q_{-1} = 0, q_0 = 1
    let (mut q_prev, mut q_cur) = (0i64, 1i64);
    // first partial quotient only shifts by an integer
    let first = Integer::div_floor(&a, &b);
    let r = a - first * b;
    a = b;
    b = r;
    let mut j = 1i64;
    while b != 0 {
        let t = Integer::div_floor(&a, &b);
        let r = a - t * b;
        a = b;
        b = r;
        let q_next = t * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q_next;
        let sign = if (j - 1) % 2 == 0 { 1 } else { -1 };
        out.push((q_cur, sign * q_prev));
        j += 1;
    }
    out
}

/// Number of partial quotients after the integer part.
pub fn continued_fraction(k: i64, m: i64) -> Vec<i64> {
    let (mut a, mut b) = (k, m);
    let mut out = Vec::new();
    while b != 0 {
        let t = Integer::div_floor(&a, &b);
        out.push(t);
        let r = a - t * b;
        a = b;
        b = r;
    }
    out
}
