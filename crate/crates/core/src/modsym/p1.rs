use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::divisors;

/// Levels up to this size get an N x N lookup table.
const DENSE_LOOKUP_LIMIT: u64 = 1024;

/// A point (c : d) of P^1(Z/N) in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct P1Element {
    pub c: u64,
    pub d: u64,
}

/// The points of P^1(Z/N), each class stored once, with fast index lookup.
#[derive(Clone, Serialize, Deserialize)]
pub struct P1List {
    n: u64,
    elements: Vec<P1Element>,
    #[serde(skip)]
    lookup: Lookup,
}

#[derive(Clone, Default)]
enum Lookup {
    #[default]
    Unbuilt,
    Dense(Vec<u32>),
    Sparse(HashMap<P1Element, u32>),
}

impl std::fmt::Debug for P1List {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "P1List(N = {}, {} points)", self.n, self.elements.len())
    }
}

/// Canonical representative of the class of (u : v) under scaling by units mod n,
/// or `None` when gcd(u, v, n) > 1.
///
/// The representative is (g, v') with g = gcd(u, n) (0 when u = 0) and v' minimal.
pub fn normalize(u: i64, v: i64, n: u64) -> Option<P1Element> {
    if n == 1 {
        return Some(P1Element { c: 0, d: 0 });
    }
    let ni = n as i64;
    let u = u.rem_euclid(ni);
    let v = v.rem_euclid(ni);
    if u == 0 {
        return (v.gcd(&ni) == 1).then_some(P1Element { c: 0, d: 1 });
    }
    let e = u.extended_gcd(&ni);
    let g = e.gcd;
    if g.gcd(&v) != 1 {
        return None;
    }
    // s * u = g mod n, then shift s by multiples of n/g until it is a unit
    let step = ni / g;
    let mut s = e.x.rem_euclid(ni);
    while s.gcd(&ni) != 1 {
        s = (s + step) % ni;
    }
    let vs = ((v as i128 * s as i128) % ni as i128) as i64;
    // the stabilizer of g is {t unit : t = 1 mod n/g}
    let mut best = vs;
    if g > 1 {
        let mut t = 1 + step;
        while t < ni {
            if t.gcd(&ni) == 1 {
                let cand = ((vs as i128 * t as i128) % ni as i128) as i64;
                best = best.min(cand);
            }
            t += step;
        }
    }
    Some(P1Element {
        c: g as u64,
        d: best as u64,
    })
}

impl P1List {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "level must be positive");
        let mut elements = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let ni = n as i64;
        for g in divisors(n) {
            let c = if g == n { 0 } else { g as i64 };
            for d in 0..ni {
                if let Some(e) = normalize(c, d, n) {
                    if seen.insert(e) {
                        elements.push(e);
                    }
                }
            }
        }
        elements.sort();
        let mut list = P1List {
            n,
            elements,
            lookup: Lookup::Unbuilt,
        };
        list.build_lookup();
        list
    }

    /// Rebuilds the index after deserialization.
    pub fn build_lookup(&mut self) {
        let n = self.n;
        if n <= DENSE_LOOKUP_LIMIT {
            let mut table = vec![u32::MAX; (n * n) as usize];
            let units: Vec<u64> = (1..=n).filter(|t| t.gcd(&n) == 1 || n == 1).collect();
            for (i, e) in self.elements.iter().enumerate() {
                for &t in &units {
                    let c = (t * e.c) % n;
                    let d = (t * e.d) % n;
                    table[(c * n + d) as usize] = i as u32;
                }
            }
            self.lookup = Lookup::Dense(table);
        } else {
            let map = self
                .elements
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, i as u32))
                .collect();
            self.lookup = Lookup::Sparse(map);
        }
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> P1Element {
        self.elements[i]
    }

    pub fn elements(&self) -> &[P1Element] {
        &self.elements
    }

    /// Index of the class of (c : d), or `None` if it is not a point of P^1(Z/N).
    pub fn index(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.n as i64;
        match &self.lookup {
            Lookup::Dense(t) => {
                let c = c.rem_euclid(n) as usize;
                let d = d.rem_euclid(n) as usize;
                let i = t[c * n as usize + d];
                (i != u32::MAX).then_some(i as usize)
            }
            Lookup::Sparse(m) => normalize(c, d, self.n).and_then(|e| m.get(&e)).map(|&i| i as usize),
            Lookup::Unbuilt => {
                let e = normalize(c, d, self.n)?;
                self.elements.binary_search(&e).ok()
            }
        }
    }

    /// (c : d) * S = (d : -c).
    pub fn apply_s(&self, i: usize) -> usize {
        let e = self.elements[i];
        self.index(e.d as i64, -(e.c as i64)).expect("S preserves P1")
    }

    /// (c : d) * T = (d : -c - d), with T of order 3 in PSL2(Z).
    pub fn apply_t(&self, i: usize) -> usize {
        let e = self.elements[i];
        self.index(e.d as i64, -(e.c as i64) - e.d as i64).expect("T preserves P1")
    }

    /// (c : d) -> (-c : d).
    pub fn apply_star(&self, i: usize) -> usize {
        let e = self.elements[i];
        self.index(-(e.c as i64), e.d as i64).expect("star preserves P1")
    }

    /// Right action of an integer matrix [[a, b], [c, d]]; `None` if the image leaves P^1.
    pub fn apply_matrix(&self, i: usize, m: &[i64; 4]) -> Option<usize> {
        let e = self.elements[i];
        let (u, v) = (e.c as i64, e.d as i64);
        let n = self.n as i64;
        let x = (u * m[0].rem_euclid(n) + v * m[2].rem_euclid(n)) % n;
        let y = (u * m[1].rem_euclid(n) + v * m[3].rem_euclid(n)) % n;
        self.index(x, y)
    }
}
