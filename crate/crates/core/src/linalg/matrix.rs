use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse vector: strictly increasing column indices, no stored zeros.
pub type SparseVec = Vec<(usize, BigRational)>;

/// Fraction of nonzero entries above which elimination switches to a dense layout.
const DENSE_FILL_THRESHOLD: f64 = 0.30;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseRationalMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl fmt::Debug for SparseRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.nrows, self.ncols)?;
        for r in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn bit_cost(x: &BigRational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// `dst += scale * src`, keeping the result sparse.
pub fn axpy(dst: &SparseVec, scale: &BigRational, src: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = src.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(dst[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, scale * &src[j].1));
            j += 1;
        } else {
            let v = &dst[i].1 + scale * &src[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_entry(v: &SparseVec, col: usize) -> Option<&BigRational> {
    v.binary_search_by_key(&col, |e| e.0).ok().map(|i| &v[i].1)
}

pub fn sparse_dot(a: &SparseVec, b: &SparseVec) -> BigRational {
    let mut acc = BigRational::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &a[i].1 * &b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn sparse_scale(v: &SparseVec, s: &BigRational) -> SparseVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(c, x)| (*c, x * s)).collect()
}

pub fn dense_to_sparse(v: &[BigRational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

impl SparseRationalMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseRationalMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i, BigRational::one())]).collect();
        SparseRationalMatrix {
            nrows: n,
            ncols: n,
            rows,
        }
    }

    /// Builds from sparse rows; entries are sorted and zeros dropped.
    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        let mut clean = Vec::with_capacity(rows.len());
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let mut merged: SparseVec = Vec::with_capacity(row.len());
            for (c, x) in row {
                if c >= ncols {
                    return Err(Error::DimensionMismatch(format!(
                        "column {c} out of range for {ncols} columns"
                    )));
                }
                match merged.last_mut() {
                    Some((lc, lx)) if *lc == c => *lx += x,
                    _ => merged.push((c, x)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            clean.push(merged);
        }
        Ok(SparseRationalMatrix {
            nrows: clean.len(),
            ncols,
            rows: clean,
        })
    }

    pub fn from_dense(ncols: usize, rows: &[Vec<BigRational>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged dense rows".into()));
        }
        Ok(SparseRationalMatrix {
            nrows: rows.len(),
            ncols,
            rows: rows.iter().map(|r| dense_to_sparse(r)).collect(),
        })
    }

    pub fn from_i64(ncols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::from_dense(ncols, &rows)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        sparse_entry(&self.rows[r], c).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        self.rows.iter().map(|r| sparse_to_dense(r, self.ncols)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                rows[*c].push((r, x.clone()));
            }
        }
        SparseRationalMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, x) in v {
            acc = axpy(&acc, x, &self.rows[*i]);
        }
        acc
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                let d = sparse_dot(row, v);
                (!d.is_zero()).then_some((r, d))
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        Ok(SparseRationalMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows: self.rows.iter().map(|r| other.vec_mul(r)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let one = BigRational::one();
        Ok(SparseRationalMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| axpy(a, &one, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        SparseRationalMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| sparse_scale(r, s)).collect(),
        }
    }

    /// `self - lambda * I` for square matrices.
    pub fn shift(&self, lambda: &BigRational) -> Result<Self> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch("shift of non-square matrix".into()));
        }
        self.add(&Self::identity(self.nrows).scale(&-lambda.clone()))
    }

    pub fn trace(&self) -> BigRational {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).sum()
    }

    /// Reduced row echelon form with its pivot columns; zero rows are dropped from the
    /// returned matrix, so its row count equals the rank.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let cells = (self.nrows * self.ncols).max(1) as f64;
        let rows = if self.nnz() as f64 / cells > DENSE_FILL_THRESHOLD {
            rref_dense(self.to_dense(), self.ncols)
        } else {
            rref_sparse(self.rows.clone(), self.ncols)
        };
        let pivots = rows.iter().map(|r| r[0].0).collect();
        let m = SparseRationalMatrix {
            nrows: rows.len(),
            ncols: self.ncols,
            rows,
        };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> SubspaceBasis {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v: SparseVec = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                if let Some(x) = sparse_entry(r.row(i), f) {
                    v.push((p, -x.clone()));
                }
            }
            v.push((f, BigRational::one()));
            v.sort_by_key(|e| e.0);
            basis.push(v);
        }
        SubspaceBasis::from_rows(self.ncols, basis).expect("kernel vectors fit ambient")
    }
}

fn normalize_leading(row: &mut SparseVec) {
    let inv = row[0].1.recip();
    for e in row.iter_mut() {
        e.1 = &e.1 * &inv;
    }
}

fn back_substitute(mut pivot_rows: Vec<SparseVec>) -> Vec<SparseVec> {
    pivot_rows.sort_by_key(|r| r[0].0);
    let pivots: Vec<usize> = pivot_rows.iter().map(|r| r[0].0).collect();
    for i in (0..pivot_rows.len()).rev() {
        let targets: Vec<(usize, BigRational)> = pivot_rows[i]
            .iter()
            .skip(1)
            .filter_map(|(c, x)| pivots.binary_search(c).ok().map(|k| (k, x.clone())))
            .collect();
        for (k, x) in targets {
            let reduced = axpy(&pivot_rows[i], &-x, &pivot_rows[k]);
            pivot_rows[i] = reduced;
        }
    }
    pivot_rows
}

pub(crate) fn rref_sparse(rows: Vec<SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let nrows = rows.len();
    let mut buckets: Vec<Vec<SparseVec>> = vec![Vec::new(); ncols];
    let mut live_nnz = 0usize;
    for r in rows.into_iter().filter(|r| !r.is_empty()) {
        live_nnz += r.len();
        buckets[r[0].0].push(r);
    }
    let limit = DENSE_FILL_THRESHOLD * (nrows * ncols).max(1) as f64;
    let mut pivot_rows: Vec<SparseVec> = Vec::new();
    for c in 0..ncols {
        let mut bucket = std::mem::take(&mut buckets[c]);
        if bucket.is_empty() {
            continue;
        }
        let best = (0..bucket.len())
            .min_by_key(|&i| (bit_cost(&bucket[i][0].1), bucket[i].len()))
            .unwrap();
        let mut pivot = bucket.swap_remove(best);
        normalize_leading(&mut pivot);
        for row in bucket {
            live_nnz -= row.len();
            let factor = -row[0].1.clone();
            let reduced = axpy(&row, &factor, &pivot);
            if !reduced.is_empty() {
                live_nnz += reduced.len();
                buckets[reduced[0].0].push(reduced);
            }
        }
        pivot_rows.push(pivot);
        if live_nnz as f64 > limit && c + 1 < ncols {
            let mut all: Vec<Vec<BigRational>> =
                pivot_rows.iter().map(|r| sparse_to_dense(r, ncols)).collect();
            all.extend(buckets.iter().flatten().map(|r| sparse_to_dense(r, ncols)));
            return rref_dense(all, ncols);
        }
    }
    back_substitute(pivot_rows)
}

pub(crate) fn rref_dense(mut m: Vec<Vec<BigRational>>, ncols: usize) -> Vec<SparseVec> {
    let nrows = m.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let best = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| bit_cost(&m[i][c]));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.iter().map(|row| dense_to_sparse(row)).collect()
}

/// Subspace of Q^n stored as the nonzero rows of a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceBasis {
    basis: SparseRationalMatrix,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn from_rows(ambient: usize, rows: Vec<SparseVec>) -> Result<Self> {
        let m = SparseRationalMatrix::from_rows(ambient, rows)?;
        let (basis, pivots) = m.rref();
        Ok(SubspaceBasis { basis, pivots })
    }

    pub fn zero(ambient: usize) -> Self {
        SubspaceBasis {
            basis: SparseRationalMatrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis {
            basis: SparseRationalMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn matrix(&self) -> &SparseRationalMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> &[SparseVec] {
        self.basis.rows()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside the subspace.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<BigRational>> {
        let coords: Vec<BigRational> = self
            .pivots
            .iter()
            .map(|&p| sparse_entry(v, p).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        let mut residual = v.clone();
        for (c, row) in coords.iter().zip(self.basis.rows()) {
            if !c.is_zero() {
                residual = axpy(&residual, &-c.clone(), row);
            }
        }
        residual.is_empty().then_some(coords)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ambient() != other.ambient() {
            return Err(Error::DimensionMismatch("subspace sum".into()));
        }
        let rows = self.vectors().iter().chain(other.vectors()).cloned().collect();
        Self::from_rows(self.ambient(), rows)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.ambient() != other.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "intersecting subspaces of Q^{} and Q^{}",
                self.ambient(),
                other.ambient()
            )));
        }
        // x = c * A lies in B exactly when it is orthogonal to every right-kernel vector of B.
        let k = other.basis.kernel();
        if k.dim() == 0 {
            return Ok(self.clone());
        }
        let g = self.basis.mul(&k.basis.transpose())?;
        let coeffs = g.transpose().kernel();
        let rows = coeffs
            .vectors()
            .iter()
            .map(|c| self.basis.vec_mul(c))
            .collect();
        Self::from_rows(self.ambient(), rows)
    }

    /// Matrix of a linear map (acting on column vectors by `m * v`) restricted to this
    /// subspace, in the echelon basis; errors if the subspace is not invariant.
    pub fn restrict_right(&self, m: &SparseRationalMatrix) -> Result<SparseRationalMatrix> {
        let mut cols = Vec::with_capacity(self.dim());
        for v in self.vectors() {
            let image = m.mul_vec(v);
            let coords = self.coordinates(&image).ok_or_else(|| {
                Error::DimensionMismatch("subspace is not invariant under the map".into())
            })?;
            cols.push(dense_to_sparse(&coords));
        }
        Ok(SparseRationalMatrix::from_rows(self.dim(), cols)?.transpose())
    }

    /// Matrix of a linear map acting on row vectors (`v * m`) restricted to this subspace,
    /// in the echelon basis; errors if the subspace is not invariant.
    pub fn restrict_left(&self, m: &SparseRationalMatrix) -> Result<SparseRationalMatrix> {
        let mut rows = Vec::with_capacity(self.dim());
        for v in self.vectors() {
            let image = m.vec_mul(v);
            let coords = self.coordinates(&image).ok_or_else(|| {
                Error::DimensionMismatch("subspace is not invariant under the map".into())
            })?;
            rows.push(dense_to_sparse(&coords));
        }
        SparseRationalMatrix::from_rows(self.dim(), rows)
    }

    /// Vector of the ambient space with the given coordinates.
    pub fn combine(&self, coeffs: &SparseVec) -> SparseVec {
        self.basis.vec_mul(coeffs)
    }
}

pub fn int_to_rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
