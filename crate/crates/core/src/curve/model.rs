use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::prime_divisors;
use crate::error::{Error, Result};
use crate::modsym::LatticeShape;

/// Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, assumed
/// globally minimal, with its conductor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveModel {
    label: String,
    conductor: u64,
    a: [i64; 5],
}

const BUILTIN: &[(&str, u64, [i64; 5])] = &[
    ("11a1", 11, [0, -1, 1, -10, -20]),
    ("17a1", 17, [1, -1, 1, -1, -14]),
    ("34a1", 34, [1, 0, 0, -3, 1]),
    ("37a1", 37, [0, 0, 1, -1, 0]),
    ("37b1", 37, [0, 1, 1, -23, -50]),
];

impl CurveModel {
    pub fn new(label: impl Into<String>, conductor: u64, a: [i64; 5]) -> Result<Self> {
        let m = CurveModel {
            label: label.into(),
            conductor,
            a,
        };
        if m.discriminant() == BigInt::from(0) {
            return Err(Error::SingularModel(m.label));
        }
        if conductor == 0 {
            return Err(Error::Invalid("conductor must be positive".into()));
        }
        // every prime of bad reduction divides the discriminant
        let disc = m.discriminant();
        for p in prime_divisors(conductor) {
            if &disc % BigInt::from(p) != BigInt::from(0) {
                return Err(Error::Invalid(format!(
                    "conductor {conductor} has prime {p} not dividing the discriminant {disc}"
                )));
            }
        }
        Ok(m)
    }

    pub fn builtin(label: &str) -> Option<Self> {
        BUILTIN
            .iter()
            .find(|(l, _, _)| *l == label)
            .map(|(l, n, a)| Self::new(*l, *n, *a).expect("built-in models are valid"))
    }

    pub fn builtin_labels() -> Vec<&'static str> {
        BUILTIN.iter().map(|(l, _, _)| *l).collect()
    }

    /// Built-in models of the given conductor.
    pub fn builtin_for_level(n: u64) -> Vec<Self> {
        BUILTIN
            .iter()
            .filter(|(_, c, _)| *c == n)
            .map(|(l, c, a)| Self::new(*l, *c, *a).expect("built-in models are valid"))
            .collect()
    }

    /// Parses records `label N a1 a2 a3 a4 a6`; blank lines and `#` comments are skipped.
    pub fn parse_fixtures(text: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(Error::Parse(format!(
                    "line {}: expected 7 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |s: &str| -> Result<i64> {
                s.parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad integer {s:?}", lineno + 1)))
            };
            let n: u64 = fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad conductor", lineno + 1)))?;
            let a = [
                num(fields[2])?,
                num(fields[3])?,
                num(fields[4])?,
                num(fields[5])?,
                num(fields[6])?,
            ];
            out.push(Self::new(fields[0], n, a)?);
        }
        Ok(out)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coefficients(&self) -> [i64; 5] {
        self.a
    }

    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.a.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn c_invariants(&self) -> [BigInt; 2] {
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        [c4, c6]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// Shape of the period lattice of the invariant differential: a real curve with two
    /// real components (positive discriminant) has a rectangular lattice.
    pub fn lattice_shape(&self) -> LatticeShape {
        if self.discriminant() > BigInt::from(0) {
            LatticeShape::Rectangular
        } else {
            LatticeShape::NonRectangular
        }
    }

    /// The opposite convention, rectangular exactly when the discriminant is negative; kept
    /// so reports can show where it disagrees with `lattice_shape`.
    pub fn lattice_shape_negative_discriminant_rule(&self) -> LatticeShape {
        if self.discriminant() < BigInt::from(0) {
            LatticeShape::Rectangular
        } else {
            LatticeShape::NonRectangular
        }
    }

    /// Number of connected components of E(R).
    pub fn real_components(&self) -> u32 {
        if self.discriminant() > BigInt::from(0) {
            2
        } else {
            1
        }
    }

    /// Model with coefficients a_i u^i (periods scale by 1/u).
    pub fn rescaled(&self, u: i64) -> Result<Self> {
        let mut a = self.a;
        let pows = [u, u * u, u * u * u, u.pow(4), u.pow(6)];
        for (x, p) in a.iter_mut().zip(pows) {
            *x = x.checked_mul(p).ok_or(Error::Overflow("model rescale"))?;
        }
        // rescaled models are not minimal, so the conductor check does not apply
        Ok(CurveModel {
            label: format!("{}*{u}", self.label),
            conductor: self.conductor,
            a,
        })
    }
}
