use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::matrix::{rref_dense, rref_sparse};
use super::*;

fn q(x: i64) -> BigRational {
    int_to_rational(x)
}

/// Fraction-free (Bareiss) elimination; returns rank.
fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = to_bigint_rows(rows);
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in (r + 1)..nrows {
            for j in (c + 1)..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let s = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            s * &m[0][j] * det(&minor)
        })
        .sum()
}

fn maximal_minor_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    use num_integer::Integer;
    let k = rows.len();
    let n = rows[0].len();
    let mut g = BigInt::zero();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<BigInt>> = rows.iter().map(|r| idx.iter().map(|&c| r[c].clone()).collect()).collect();
        g = g.gcd(&det(&sub));
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return g;
            }
        }
    }
}

fn rank_deficient(seed: &[i64], rank: usize, n: usize) -> Vec<Vec<i64>> {
    // rows are integer combinations of the first `rank` seed rows
    let base: Vec<Vec<i64>> = (0..rank).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|c| {
                    (0..rank)
                        .map(|j| base[j][c] * seed[(n * rank + i * rank + j) % seed.len()])
                        .sum()
                })
                .collect()
        })
        .collect()
}

#[test]
fn rref_small_examples() {
    let id = SparseRationalMatrix::identity(3);
    let (r, p) = id.rref();
    assert_eq!(r, id);
    assert_eq!(p, vec![0, 1, 2]);

    let m = SparseRationalMatrix::from_i64(2, &[vec![1, 2], vec![2, 4]]).unwrap();
    let (r, p) = m.rref();
    assert_eq!(r.to_dense(), vec![vec![q(1), q(2)]]);
    assert_eq!(p, vec![0]);
}

#[test]
fn kernel_small_examples() {
    assert_eq!(SparseRationalMatrix::zeros(2, 3).kernel().dim(), 3);
    assert_eq!(SparseRationalMatrix::identity(4).kernel().dim(), 0);
}

#[test]
fn intersect_small_examples() {
    let a = SubspaceBasis::from_rows(4, vec![vec![(0, q(1))], vec![(1, q(1))]]).unwrap();
    let b = SubspaceBasis::from_rows(4, vec![vec![(2, q(1))], vec![(3, q(1))]]).unwrap();
    assert_eq!(a.intersect(&b).unwrap().dim(), 0);
    assert_eq!(a.intersect(&a).unwrap(), a);
    assert!(a.intersect(&SubspaceBasis::zero(3)).is_err());
}

#[test]
fn saturate_small_examples() {
    let id = to_bigint_rows(&[vec![1, 0], vec![0, 1]]);
    assert_eq!(saturate(&to_bigint_rows(&[vec![2, 0], vec![0, 2]])), id);
    assert_eq!(saturate(&to_bigint_rows(&[vec![1, 0]])), to_bigint_rows(&[vec![1, 0]]));
    assert_eq!(saturate(&to_bigint_rows(&[vec![2, 4], vec![6, 8]])), id);
    assert_eq!(saturate(&to_bigint_rows(&[vec![2, 4, 6]])), to_bigint_rows(&[vec![1, 2, 3]]));
}

#[test]
fn hnf_of_two_dimensional_lattice() {
    let h = hermite_normal_form(&to_bigint_rows(&[vec![4, 2], vec![6, 0], vec![2, 2]]));
    assert_eq!(h, to_bigint_rows(&[vec![2, 0], vec![0, 2]]));
}

#[test]
fn restriction_to_invariant_subspace() {
    // diag(2, 3, 3) restricted to span(e1, e2) acts as 3 * I
    let m = SparseRationalMatrix::from_i64(3, &[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]).unwrap();
    let w = SubspaceBasis::from_rows(3, vec![vec![(1, q(1)), (2, q(1))], vec![(2, q(1))]]).unwrap();
    let a = w.restrict_right(&m).unwrap();
    assert_eq!(a, SparseRationalMatrix::identity(2).scale(&q(3)));
    let bad = SubspaceBasis::from_rows(3, vec![vec![(0, q(1)), (1, q(1))]]).unwrap();
    assert!(bad.restrict_right(&m).is_err());
}

proptest! {
    #[test]
    fn rref_rank_matches_fraction_free_oracle(seed in prop::collection::vec(-4i64..5, 80), rank in 0usize..7) {
        let rows = rank_deficient(&seed, rank, 6);
        let m = SparseRationalMatrix::from_i64(6, &rows).unwrap();
        prop_assert_eq!(m.rank(), bareiss_rank(&rows));
    }

    #[test]
    fn rref_is_idempotent(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 7), 1..8)) {
        let m = SparseRationalMatrix::from_i64(7, &rows).unwrap();
        let (r, p) = m.rref();
        let (rr, pp) = r.rref();
        prop_assert_eq!(r, rr);
        prop_assert_eq!(p, pp);
    }

    #[test]
    fn sparse_and_dense_elimination_agree(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 6), 1..9)) {
        let m = SparseRationalMatrix::from_i64(6, &rows).unwrap();
        let a = rref_sparse(m.rows().to_vec(), 6);
        let b = rref_dense(m.to_dense(), 6);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn kernel_is_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 6), 1..6)) {
        let m = SparseRationalMatrix::from_i64(6, &rows).unwrap();
        let k = m.kernel();
        prop_assert_eq!(k.dim(), 6 - m.rank());
        for v in k.vectors() {
            prop_assert!(m.mul_vec(v).is_empty());
        }
    }

    #[test]
    fn intersection_dimension_formula(a in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 4), b in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 4)) {
        let sa = SubspaceBasis::from_rows(6, SparseRationalMatrix::from_i64(6, &a).unwrap().rows().to_vec()).unwrap();
        let sb = SubspaceBasis::from_rows(6, SparseRationalMatrix::from_i64(6, &b).unwrap().rows().to_vec()).unwrap();
        let i = sa.intersect(&sb).unwrap();
        let s = sa.sum(&sb).unwrap();
        prop_assert_eq!(i.dim() + s.dim(), sa.dim() + sb.dim());
        for v in i.vectors() {
            prop_assert!(sa.contains(v) && sb.contains(v));
        }
    }

    #[test]
    fn saturation_contains_input_and_is_primitive(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 4), 1..4)) {
        let input = to_bigint_rows(&rows);
        let sat = saturate(&input);
        let to_q = |r: &Vec<BigInt>| -> SparseVec {
            r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, BigRational::from_integer(x.clone()))).collect()
        };
        let span = SubspaceBasis::from_rows(4, input.iter().map(to_q).collect()).unwrap();
        prop_assert_eq!(sat.len(), span.dim());
        if sat.is_empty() { return Ok(()); }
        let sat_span = SubspaceBasis::from_rows(4, sat.iter().map(to_q).collect()).unwrap();
        prop_assert_eq!(&sat_span, &span);
        prop_assert!(maximal_minor_gcd(&sat).is_one());
        // inputs are integer combinations of the saturated basis
        let sat_m = SparseRationalMatrix::from_rows(4, sat.iter().map(to_q).collect()).unwrap();
        let coords_space = SubspaceBasis::from_rows(4, sat_m.rows().to_vec()).unwrap();
        for r in &input {
            // solve c * sat = r over Q via the transpose kernel trick
            let mut aug = sat.clone();
            aug.push(r.iter().map(|x| -x).collect());
            let k = integer_left_kernel(&aug);
            let hit = k.iter().find(|v| !v.last().unwrap().is_zero()).cloned();
            if let Some(v) = hit {
                let last = v.last().unwrap().clone();
                for x in &v[..v.len() - 1] {
                    prop_assert!((x % &last).is_zero());
                }
            } else {
                prop_assert!(r.iter().all(|x| x.is_zero()));
            }
            prop_assert!(coords_space.contains(&to_q(r)));
        }
    }
}
