use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite normal form: nonzero rows only, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let (h, _) = echelon_with_transform(rows.to_vec(), ncols, false);
    h
}

/// Unimodular integer row reduction; returns the nonzero echelon rows and, when asked,
/// the rows of the transform that map to zero (a basis of the integer left kernel).
fn echelon_with_transform(
    mut m: Vec<Vec<BigInt>>,
    ncols: usize,
    track: bool,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let n = m.len();
    let mut u: Vec<Vec<BigInt>> = if track {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        vec![Vec::new(); n]
    };
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == n {
            break;
        }
        loop {
            // bring the smallest nonzero entry at or below row r into row r
            let best = (r..n)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(p) = best else { break };
            m.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in (r + 1)..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let (pr, ur) = (m[r].clone(), u[r].clone());
                sub_multiple(&mut m[i], &pr, &q);
                if track {
                    sub_multiple(&mut u[i], &ur, &q);
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < n && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                m[r].iter_mut().for_each(|x| *x = -x.clone());
                u[r].iter_mut().for_each(|x| *x = -x.clone());
            }
            pivots.push(c);
            r += 1;
        }
    }
    // reduce entries above pivots
    for (k, &c) in pivots.iter().enumerate() {
        for i in 0..k {
            let q = m[i][c].div_floor(&m[k][c]);
            if !q.is_zero() {
                let (pk, uk) = (m[k].clone(), u[k].clone());
                sub_multiple(&mut m[i], &pk, &q);
                if track {
                    sub_multiple(&mut u[i], &uk, &q);
                }
            }
        }
    }
    let kernel = if track { u[r..].to_vec() } else { Vec::new() };
    m.truncate(r);
    (m, kernel)
}

fn sub_multiple(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (x, y) in dst.iter_mut().zip(src) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Basis of the integer solutions of `x * m = 0` (x a row vector). Always saturated.
pub fn integer_left_kernel(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let (_, k) = echelon_with_transform(m.to_vec(), ncols, true);
    hermite_normal_form(&k)
}

/// Basis of the saturation of the row lattice: its rational span intersected with Z^n.
pub fn saturate(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(n) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    // The saturation is the integer kernel of an integer basis of the orthogonal complement.
    let t: Vec<Vec<BigInt>> = (0..n).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
    let perp = integer_left_kernel(&t);
    if perp.is_empty() {
        return identity(n);
    }
    let perp_t: Vec<Vec<BigInt>> =
        (0..n).map(|c| perp.iter().map(|r| r[c].clone()).collect()).collect();
    integer_left_kernel(&perp_t)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn to_bigint_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}
