use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cusps::{symbol_endpoints, CuspTable};
use super::heilbronn::heilbronn_cremona;
use super::p1::P1List;
use crate::arith::{is_prime, kronecker, prime_divisors, psi};
use crate::error::{Error, Result};
use crate::linalg::{axpy, int_to_rational, SparseRationalMatrix, SparseVec, SubspaceBasis};

pub const DEFAULT_LEVEL_BOUND: u64 = 10_000;

/// Genus of X0(n) from the classical formula.
pub fn genus_x0(n: u64) -> u64 {
    let primes = prime_divisors(n);
    let nu2: i64 = if n.is_multiple_of(4) {
        0
    } else {
        primes.iter().map(|&p| 1 + kronecker(-4, p as i64) as i64).product()
    };
    let nu3: i64 = if n.is_multiple_of(9) {
        0
    } else {
        primes.iter().map(|&p| 1 + kronecker(-3, p as i64) as i64).product()
    };
    let cusps: i64 = crate::arith::divisors(n)
        .into_iter()
        .map(|d| crate::arith::euler_phi(num_integer::gcd(d, n / d)) as i64)
        .sum();
    // 12 g = 12 + psi - 3 nu2 - 4 nu3 - 6 c
    let twelve_g = 12 + psi(n) as i64 - 3 * nu2 - 4 * nu3 - 6 * cusps;
    (twelve_g / 12) as u64
}

/// Modular symbol space of weight 2 for Gamma0(N) over Q.
#[derive(Clone, Serialize, Deserialize)]
pub struct ModSymSpace {
    level: u64,
    p1: P1List,
    /// Class in the quotient V of every Manin symbol, indexed like `p1`.
    coords: Vec<SparseVec>,
    /// Manin symbol chosen as each basis vector of V.
    basis_symbols: Vec<usize>,
    two_term: Vec<(usize, usize)>,
    three_term: Vec<[usize; 3]>,
    star: SparseRationalMatrix,
    cusps: CuspTable,
    /// Cusp classes (of a/c, of b/d) for each Manin symbol {b/d, a/c}.
    symbol_cusps: Vec<(usize, usize)>,
    boundary: SparseRationalMatrix,
    cuspidal: SubspaceBasis,
    cuspidal_plus: SubspaceBasis,
    cuspidal_minus: SubspaceBasis,
}

impl std::fmt::Debug for ModSymSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ModSymSpace(N = {}, dim = {}, cuspidal = {}, cusps = {})",
            self.level,
            self.dim(),
            self.cuspidal.dim(),
            self.cusps.len()
        )
    }
}

impl ModSymSpace {
    pub fn build(level: u64) -> Result<Self> {
        Self::build_with_bound(level, DEFAULT_LEVEL_BOUND)
    }

    pub fn build_with_bound(level: u64, bound: u64) -> Result<Self> {
        if level == 0 || level > bound {
            return Err(Error::LevelOutOfRange(level));
        }
        let p1 = P1List::new(level);
        let n = p1.len();

        // 2-term relations identify x with -xS, or kill x when xS = x.
        let mut rep = vec![usize::MAX; n];
        let mut sign = vec![0i8; n];
        let mut two_term = Vec::new();
        for i in 0..n {
            if rep[i] != usize::MAX {
                continue;
            }
            let j = p1.apply_s(i);
            two_term.push((i, j));
            rep[i] = i;
            if j == i {
                sign[i] = 0;
            } else {
                sign[i] = 1;
                rep[j] = i;
                sign[j] = -1;
            }
        }
        let mut col_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if rep[i] == i && sign[i] != 0 {
                col_of[i] = reps.len();
                reps.push(i);
            }
        }

        // 3-term relations in terms of the surviving representatives.
        let mut three_term = Vec::new();
        let mut rows: Vec<SparseVec> = Vec::new();
        for i in 0..n {
            let j = p1.apply_t(i);
            let k = p1.apply_t(j);
            if i > j || i > k {
                continue;
            }
            three_term.push([i, j, k]);
            let members: &[usize] = if j == i { &[i] } else { &[i, j, k] };
            let row: SparseVec = members
                .iter()
                .filter(|&&x| sign[x] != 0)
                .map(|&x| (col_of[rep[x]], int_to_rational(sign[x] as i64)))
                .collect();
            rows.push(row);
        }
        let rel = SparseRationalMatrix::from_rows(reps.len(), rows)?;
        let (r, pivots) = rel.rref();
        let mut is_pivot = vec![None; reps.len()];
        for (row, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(row);
        }
        let free: Vec<usize> = (0..reps.len()).filter(|&c| is_pivot[c].is_none()).collect();
        let mut pos_of_free = vec![usize::MAX; reps.len()];
        for (pos, &c) in free.iter().enumerate() {
            pos_of_free[c] = pos;
        }
        let col_coords: Vec<SparseVec> = (0..reps.len())
            .map(|c| match is_pivot[c] {
                None => vec![(pos_of_free[c], BigRational::one())],
                Some(row) => {
                    let mut v: SparseVec = r
                        .row(row)
                        .iter()
                        .filter(|(f, _)| *f != c)
                        .map(|(f, x)| (pos_of_free[*f], -x.clone()))
                        .collect();
                    v.sort_by_key(|e| e.0);
                    v
                }
            })
            .collect();
        let coords: Vec<SparseVec> = (0..n)
            .map(|i| match sign[i] {
                0 => Vec::new(),
                1 => col_coords[col_of[rep[i]]].clone(),
                _ => col_coords[col_of[rep[i]]]
                    .iter()
                    .map(|(c, x)| (*c, -x.clone()))
                    .collect(),
            })
            .collect();
        let basis_symbols: Vec<usize> = free.iter().map(|&c| reps[c]).collect();
        let dim = basis_symbols.len();

        let star_rows = basis_symbols
            .iter()
            .map(|&s| coords[p1.apply_star(s)].clone())
            .collect();
        let star = SparseRationalMatrix::from_rows(dim, star_rows)?;

        let mut cusps = CuspTable::new(level);
        let mut symbol_cusps = Vec::with_capacity(n);
        for e in p1.elements() {
            let (x, y) = symbol_endpoints(e.c, e.d, level);
            let ix = cusps.index_or_insert(x);
            let iy = cusps.index_or_insert(y);
            symbol_cusps.push((ix, iy));
        }
        let boundary_rows = basis_symbols
            .iter()
            .map(|&s| {
                let (ix, iy) = symbol_cusps[s];
                if ix == iy {
                    Vec::new()
                } else {
                    vec![(ix, BigRational::one()), (iy, -BigRational::one())]
                }
            })
            .collect();
        let boundary = SparseRationalMatrix::from_rows(cusps.len(), boundary_rows)?;
        let cuspidal = boundary.transpose().kernel();
        let one = BigRational::one();
        let plus = star.shift(&one)?.transpose().kernel();
        let minus = star.shift(&-one)?.transpose().kernel();
        let cuspidal_plus = cuspidal.intersect(&plus)?;
        let cuspidal_minus = cuspidal.intersect(&minus)?;

        let space = ModSymSpace {
            level,
            p1,
            coords,
            basis_symbols,
            two_term,
            three_term,
            star,
            cusps,
            symbol_cusps,
            boundary,
            cuspidal,
            cuspidal_plus,
            cuspidal_minus,
        };
        let g = genus_x0(level) as usize;
        if space.cuspidal_plus.dim() != g || space.cuspidal_minus.dim() != g {
            return Err(Error::Invalid(format!(
                "cuspidal dimensions {}/{} disagree with genus {g} at level {level}",
                space.cuspidal_plus.dim(),
                space.cuspidal_minus.dim()
            )));
        }
        Ok(space)
    }

    /// Restores derived lookup tables after deserialization.
    pub fn rehydrate(&mut self) {
        self.p1.build_lookup();
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.basis_symbols.len()
    }

    pub fn genus(&self) -> usize {
        self.cuspidal_plus.dim()
    }

    pub fn p1(&self) -> &P1List {
        &self.p1
    }

    pub fn symbol_coords(&self, i: usize) -> &SparseVec {
        &self.coords[i]
    }

    pub fn all_symbol_coords(&self) -> &[SparseVec] {
        &self.coords
    }

    pub fn basis_symbols(&self) -> &[usize] {
        &self.basis_symbols
    }

    pub fn star_matrix(&self) -> &SparseRationalMatrix {
        &self.star
    }

    pub fn boundary_matrix(&self) -> &SparseRationalMatrix {
        &self.boundary
    }

    pub fn cusp_count(&self) -> usize {
        self.cusps.len()
    }

    pub fn cuspidal(&self) -> &SubspaceBasis {
        &self.cuspidal
    }

    pub fn cuspidal_plus(&self) -> &SubspaceBasis {
        &self.cuspidal_plus
    }

    pub fn cuspidal_minus(&self) -> &SubspaceBasis {
        &self.cuspidal_minus
    }

    /// All 2-term and 3-term relations as rows over the free module on P^1(Z/N).
    pub fn relation_matrix(&self) -> SparseRationalMatrix {
        let one = BigRational::one();
        let mut rows: Vec<SparseVec> = Vec::new();
        for &(i, j) in &self.two_term {
            rows.push(if i == j {
                vec![(i, int_to_rational(2))]
            } else {
                vec![(i, one.clone()), (j, one.clone())]
            });
        }
        for &[i, j, k] in &self.three_term {
            rows.push(if i == j {
                vec![(i, int_to_rational(3))]
            } else {
                vec![(i, one.clone()), (j, one.clone()), (k, one.clone())]
            });
        }
        SparseRationalMatrix::from_rows(self.p1.len(), rows).expect("indices in range")
    }

    fn check_hecke_prime(&self, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if self.level.is_multiple_of(p) {
            return Err(Error::PrimeDividesLevel {
                prime: p,
                level: self.level,
            });
        }
        Ok(())
    }

    /// Image in V of the Manin symbol `i` under T_p, as a count of symbols hit.
    pub fn hecke_symbol_counts(&self, i: usize, p: u64, out: &mut Vec<i64>) {
        out.clear();
        out.resize(self.p1.len(), 0);
        for h in heilbronn_cremona(p) {
            let j = self.p1.apply_matrix(i, &h).expect("determinant prime to the level");
            out[j] += 1;
        }
    }

    fn combine_counts(&self, counts: &[i64]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, &c) in counts.iter().enumerate() {
            if c != 0 && !self.coords[j].is_empty() {
                acc = axpy(&acc, &int_to_rational(c), &self.coords[j]);
            }
        }
        acc
    }

    /// T_p on all of V, acting on row vectors.
    pub fn hecke_matrix(&self, p: u64) -> Result<SparseRationalMatrix> {
        self.check_hecke_prime(p)?;
        let mut counts = Vec::new();
        let rows = self
            .basis_symbols
            .iter()
            .map(|&s| {
                self.hecke_symbol_counts(s, p, &mut counts);
                self.combine_counts(&counts)
            })
            .collect();
        SparseRationalMatrix::from_rows(self.dim(), rows)
    }

    /// T_p on the cuspidal subspace, in its echelon basis, acting on row vectors.
    pub fn heilbronn_hecke(&self, p: u64) -> Result<SparseRationalMatrix> {
        let t = self.hecke_matrix(p)?;
        self.cuspidal.restrict_left(&t)
    }

    /// Z-basis of the integer cycles in the free module on P^1(Z/N), i.e. combinations of
    /// Manin symbols with zero boundary. Their images span H1(X0(N), Z).
    pub fn integral_cycles(&self) -> Vec<Vec<(usize, i64)>> {
        let nc = self.cusps.len();
        // spanning forest by breadth-first search over symbol edges b/d -> a/c
        let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); nc];
        for (i, &(to, from)) in self.symbol_cusps.iter().enumerate() {
            adj[from].push((to, i, 1));
            adj[to].push((from, i, -1));
        }
        // parent_edge[v] = (symbol, sign) with sign * symbol having boundary v - parent
        let mut parent: Vec<Option<(usize, usize, i64)>> = vec![None; nc];
        let mut seen = vec![false; nc];
        let mut tree_edge = vec![false; self.symbol_cusps.len()];
        for root in 0..nc {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(v, e, s) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = Some((u, e, s));
                        tree_edge[e] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        // chain from the root to v with boundary v - root
        let path_from_root = |mut v: usize| -> Vec<(usize, i64)> {
            let mut chain = Vec::new();
            while let Some((u, e, s)) = parent[v] {
                chain.push((e, s));
                v = u;
            }
            chain
        };
        let mut cycles = Vec::new();
        for (i, &(to, from)) in self.symbol_cusps.iter().enumerate() {
            if tree_edge[i] {
                continue;
            }
            // x_i has boundary to - from; subtract a tree chain with the same boundary
            let mut z: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
            *z.entry(i).or_default() += 1;
            for (e, s) in path_from_root(to) {
                *z.entry(e).or_default() -= s;
            }
            for (e, s) in path_from_root(from) {
                *z.entry(e).or_default() += s;
            }
            cycles.push(z.into_iter().filter(|&(_, c)| c != 0).collect());
        }
        cycles
    }

    /// Class in V of an integer combination of Manin symbols.
    pub fn class_of(&self, combo: &[(usize, i64)]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for &(i, c) in combo {
            if c != 0 {
                acc = axpy(&acc, &int_to_rational(c), &self.coords[i]);
            }
        }
        acc
    }

    /// Boundary (as a vector over cusp classes) of a combination of Manin symbols.
    pub fn boundary_of(&self, combo: &[(usize, i64)]) -> Vec<i64> {
        let mut out = vec![0i64; self.cusps.len()];
        for &(i, c) in combo {
            let (to, from) = self.symbol_cusps[i];
            out[to] += c;
            out[from] -= c;
        }
        out
    }

    /// Value on every Manin symbol of a functional on V given as a column vector.
    pub fn symbol_values(&self, functional: &SparseVec) -> Vec<BigRational> {
        self.coords
            .iter()
            .map(|c| crate::linalg::sparse_dot(c, functional))
            .collect()
    }

    pub fn is_zero_class(&self, v: &SparseVec) -> bool {
        v.iter().all(|(_, x)| x.is_zero())
    }
}
