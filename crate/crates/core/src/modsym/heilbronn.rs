/// Matrices [a, b, c, d] meaning [[a, b], [c, d]].
pub type IntMatrix = [i64; 4];

fn round_half_away(a: i64, b: i64) -> i64 {
    // nearest integer to a/b, halves rounded away from zero
    let (q, r) = (a / b, a % b);
    if 2 * r.abs() >= b.abs() {
        if (a < 0) != (b < 0) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Heilbronn matrices of determinant p (Cremona's set): summing the right action of
/// these on a Manin symbol realizes T_p for p not dividing the level.
pub fn heilbronn_cremona(p: u64) -> Vec<IntMatrix> {
    if p == 2 {
        return vec![[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]];
    }
    let p = p as i64;
    let half = (p - 1) / 2;
    let mut out = vec![[1, 0, 0, p]];
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = round_half_away(a, b);
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

/// Merel's set {ad - bc = n, a > b >= 0, d > c >= 0}; quadratic in n, for checks only.
pub fn heilbronn_merel(n: u64) -> Vec<IntMatrix> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=(n + 1 - a) {
            let ad = a * d;
            if ad < n {
                continue;
            }
            for b in 0..a {
                if b == 0 {
                    if ad == n {
                        for c in 0..d {
                            out.push([a, 0, c, d]);
                        }
                    }
                    continue;
                }
                let bc = ad - n;
                if bc % b == 0 {
                    let c = bc / b;
                    if c < d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}
