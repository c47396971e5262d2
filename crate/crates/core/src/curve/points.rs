use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::model::CurveModel;
use crate::arith::primes::{legendre, mul_mod, pow_mod};
use crate::arith::{factor, is_prime};
use crate::error::{Error, Result};

/// Above this prime, good-reduction counts use baby-step giant-step.
pub const NAIVE_COUNT_LIMIT: u64 = 1 << 16;

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = r.to_i64().expect("residue fits");
    r.rem_euclid(p as i64) as u64
}

/// Number of points of the reduction of the model over F_p, including the point at
/// infinity and any singular point.
pub fn count_points_naive(model: &CurveModel, p: u64) -> u64 {
    let a = model.coefficients().map(|x| x.rem_euclid(p as i64) as u64);
    let [a1, a2, a3, a4, a6] = a;
    if p == 2 {
        let mut count = 1;
        for x in 0..2u64 {
            for y in 0..2u64 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs + rhs) % 2 == 0 {
                    count += 1;
                }
            }
        }
        return count;
    }
    // number of y for each x is 1 + (D(x) / p) with D = (a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)
    let mut is_square = vec![false; p as usize];
    for y in 0..p {
        is_square[mul_mod(y, y, p) as usize] = true;
    }
    let mut count = 1u64;
    for x in 0..p {
        let lin = (mul_mod(a1, x, p) + a3) % p;
        let cub = (mul_mod(mul_mod(x, x, p), (x + a2) % p, p) + mul_mod(a4, x, p) + a6) % p;
        let d = (mul_mod(lin, lin, p) + mul_mod(4, cub, p)) % p;
        count += if d == 0 {
            1
        } else if is_square[d as usize] {
            2
        } else {
            0
        };
    }
    count
}

fn inv_mod(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a as i64, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z as i64, p) == -1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Short Weierstrass curve y^2 = x^3 + A x + B over F_p, p >= 5.
struct Short {
    a: u64,
    p: u64,
}

type Pt = Option<(u64, u64)>;

impl Short {
    fn add(&self, u: Pt, v: Pt) -> Pt {
        let p = self.p;
        let (Some((x1, y1)), Some((x2, y2))) = (u, v) else {
            return u.or(v);
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return None;
            }
            let num = (mul_mod(3, mul_mod(x1, x1, p), p) + self.a) % p;
            mul_mod(num, inv_mod(mul_mod(2, y1, p), p), p)
        } else {
            let num = (y2 + p - y1) % p;
            mul_mod(num, inv_mod((x2 + p - x1) % p, p), p)
        };
        let x3 = (mul_mod(lambda, lambda, p) + 2 * p - x1 - x2) % p;
        let y3 = (mul_mod(lambda, (x1 + p - x3) % p, p) + p - y1) % p;
        Some((x3, y3))
    }

    fn neg(&self, u: Pt) -> Pt {
        u.map(|(x, y)| (x, (self.p - y) % self.p))
    }

    fn mul(&self, mut k: u64, u: Pt) -> Pt {
        let mut acc = None;
        let mut base = u;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Some m in [lo, hi] with m P = O, found by baby-step giant-step.
    fn annihilator_in(&self, pt: Pt, lo: u64, hi: u64) -> Option<u64> {
        let width = hi - lo;
        let s = ((width + 1) as f64).sqrt().ceil() as u64 + 1;
        let mut baby: HashMap<u64, u64> = HashMap::new();
        let mut cur: Pt = None;
        for j in 0..s {
            if let Some((x, _)) = cur {
                baby.entry(x).or_insert(j);
            }
            cur = self.add(cur, pt);
        }
        let giant = self.neg(self.mul(s, pt));
        let mut r = self.neg(self.mul(lo, pt));
        let mut i = 0;
        while i * s <= width {
            let mut candidates = Vec::new();
            match r {
                None => candidates.push(i * s),
                Some((x, _)) => {
                    if let Some(&j) = baby.get(&x) {
                        candidates.push(i * s + j);
                        if i * s >= j {
                            candidates.push(i * s - j);
                        }
                    }
                }
            }
            for t in candidates {
                if t <= width && self.mul(lo + t, pt).is_none() {
                    return Some(lo + t);
                }
            }
            r = self.add(r, giant);
            i += 1;
        }
        None
    }

    fn order_of(&self, pt: Pt, multiple: u64) -> u64 {
        let mut n = multiple;
        for (q, _) in factor(multiple) {
            while n.is_multiple_of(q) && self.mul(n / q, pt).is_none() {
                n /= q;
            }
        }
        n
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Group order by baby-step giant-step, or `None` if the search stays ambiguous.
fn count_points_bsgs(model: &CurveModel, p: u64) -> Option<u64> {
    let [c4, c6] = model.c_invariants();
    // y^2 = x^3 - 27 c4 x - 54 c6 is isomorphic over F_p for p >= 5
    let a = (p - mul_mod(27, reduce(&c4, p), p)) % p;
    let b = (p - mul_mod(54, reduce(&c6, p), p)) % p;
    let curve = Short { a, p };
    let root = (p as f64).sqrt();
    let lo = p + 1 - (2.0 * root).floor() as u64;
    let hi = p + 1 + (2.0 * root).ceil() as u64;
    let mut l = 1u64;
    let mut x = 0u64;
    for _ in 0..64 {
        // next point with a square right-hand side
        let pt = loop {
            x += 1;
            let rhs = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b) % p;
            if let Some(y) = sqrt_mod(rhs, p) {
                break Some((x % p, y));
            }
        };
        let m = curve.annihilator_in(pt, lo, hi)?;
        let ord = curve.order_of(pt, m);
        l = l / gcd_u64(l, ord) * ord;
        let first = lo.div_ceil(l) * l;
        if first <= hi && first + l > hi {
            return Some(first);
        }
    }
    None
}

/// #E(F_p) for the reduction at a prime of good reduction.
pub fn count_points(model: &CurveModel, p: u64) -> u64 {
    if p > NAIVE_COUNT_LIMIT {
        if let Some(n) = count_points_bsgs(model, p) {
            return n;
        }
    }
    count_points_naive(model, p)
}

fn check_hasse(p: u64, count: u64) -> Result<i64> {
    let a = p as i64 + 1 - count as i64;
    if (a as i128) * (a as i128) > 4 * p as i128 {
        return Err(Error::HasseViolation { prime: p, count });
    }
    Ok(a)
}

impl CurveModel {
    /// a_q = q + 1 - #E(F_q) for an odd prime q of good reduction.
    pub fn ap(&self, q: u64) -> Result<i64> {
        if !is_prime(q) || q == 2 {
            return Err(Error::NotPrime(q));
        }
        self.check_good(q)?;
        check_hasse(q, count_points(self, q))
    }

    /// p + 1 - #E~(F_p) for any prime, counting the singular point at bad primes; on a
    /// minimal model this is the Hecke eigenvalue a_p at every prime.
    pub fn trace_of_frobenius(&self, p: u64) -> Result<i64> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if self.conductor().is_multiple_of(p) {
            return Ok(p as i64 + 1 - count_points_naive(self, p) as i64);
        }
        self.check_good(p)?;
        check_hasse(p, count_points(self, p))
    }

    fn check_good(&self, p: u64) -> Result<()> {
        if self.conductor().is_multiple_of(p) {
            return Err(Error::BadReduction(p));
        }
        if reduce(&self.discriminant(), p) == 0 {
            return Err(Error::Invalid(format!("model is not minimal at {p}")));
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) fn bsgs_for_tests(model: &CurveModel, p: u64) -> Option<u64> {
    count_points_bsgs(model, p)
}
