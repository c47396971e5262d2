use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::mod_inverse;

/// Cusp a/c in lowest terms with c >= 0; infinity is 1/0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cusp {
    pub a: i64,
    pub c: i64,
}

impl Cusp {
    pub fn new(a: i64, c: i64) -> Self {
        let g = a.gcd(&c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 || (c == 0 && a < 0) {
            a = -a;
            c = -c;
        }
        Cusp { a, c }
    }
}

/// Gamma0(n)-equivalence of cusps a1/c1 and a2/c2: with a_j s_j = 1 mod c_j, the cusps
/// are equivalent iff s1 c2 = s2 c1 mod gcd(c1 c2, n).
pub fn cusps_equivalent(x: Cusp, y: Cusp, n: u64) -> bool {
    let n = n as i64;
    let inv = |cu: Cusp| -> i64 {
        if cu.c == 0 {
            cu.a
        } else {
            mod_inverse(cu.a, cu.c).unwrap_or(0)
        }
    };
    let (s1, s2) = (inv(x), inv(y));
    let m = ((x.c as i128 * y.c as i128) as i64).gcd(&n);
    let lhs = (s1 as i128 * y.c as i128 - s2 as i128 * x.c as i128).rem_euclid(m as i128);
    lhs == 0
}

/// Inequivalent cusps seen so far, with lookup by equivalence.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CuspTable {
    n: u64,
    reps: Vec<Cusp>,
}

impl CuspTable {
    pub fn new(n: u64) -> Self {
        CuspTable { n, reps: Vec::new() }
    }

    pub fn index_or_insert(&mut self, cusp: Cusp) -> usize {
        if let Some(i) = self.reps.iter().position(|&r| cusps_equivalent(r, cusp, self.n)) {
            return i;
        }
        self.reps.push(cusp);
        self.reps.len() - 1
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[Cusp] {
        &self.reps
    }
}

/// Lifts (c : d) mod n to a coprime integer pair and completes it to [[a, b], [c, d]]
/// in SL2(Z); returns the endpoints (a/c, b/d) of g{0, oo} = {b/d, a/c}.
pub fn symbol_endpoints(c: u64, d: u64, n: u64) -> (Cusp, Cusp) {
    let n = n as i64;
    let (mut c, mut d) = (c as i64, d as i64);
    if c == 0 {
        c = n;
    }
    while c.gcd(&d) != 1 {
        d += n;
    }
    let e = d.extended_gcd(&c);
    // x d + y c = 1, so a = x, b = -y gives a d - b c = 1
    let (a, b) = (e.x, -e.y);
    (Cusp::new(a, c), Cusp::new(b, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisors, euler_phi};
    use crate::modsym::p1::P1List;

    fn cusp_count(n: u64) -> u64 {
        divisors(n).into_iter().map(|d| euler_phi(d.gcd(&(n / d)))).sum()
    }

    #[test]
    fn cusp_counts_match_formula() {
        for n in 1..150u64 {
            let p1 = P1List::new(n);
            let mut table = CuspTable::new(n);
            for e in p1.elements() {
                let (x, y) = symbol_endpoints(e.c, e.d, n);
                table.index_or_insert(x);
                table.index_or_insert(y);
            }
            assert_eq!(table.len() as u64, cusp_count(n), "N = {n}");
        }
    }

    #[test]
    fn equivalence_basics() {
        let inf = Cusp::new(1, 0);
        assert!(cusps_equivalent(inf, Cusp::new(1, 11), 11));
        assert!(!cusps_equivalent(inf, Cusp::new(0, 1), 11));
        assert!(cusps_equivalent(Cusp::new(0, 1), Cusp::new(1, 5), 11));
        assert!(!cusps_equivalent(Cusp::new(1, 2), Cusp::new(1, 4), 8));
    }

    #[test]
    fn endpoints_come_from_sl2() {
        for n in [11u64, 34, 37] {
            for e in P1List::new(n).elements() {
                let (x, y) = symbol_endpoints(e.c, e.d, n);
                // a d - b c = 1 with x = a/c, y = b/d
                assert_eq!((x.a * y.c - y.a * x.c).abs(), 1);
            }
        }
    }
}
