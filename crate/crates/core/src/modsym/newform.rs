use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::heilbronn::heilbronn_cremona;
use super::manin::{manin_path_decompose, CuspPath};
use super::p1::P1List;
use super::space::ModSymSpace;
use crate::arith::{is_prime, prime_divisors, primes_up_to, psi};
use crate::error::{Error, Result};
use crate::linalg::{hermite_normal_form, int_to_rational, SparseVec, SubspaceBasis};

pub const DEFAULT_EIGENVALUE_BOUND: u64 = 1000;

/// Primes used to separate eigen-systems never go below this.
const MIN_SEPARATION_PRIME: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i8(s: i8) -> Sign {
        if s >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeShape {
    Rectangular,
    NonRectangular,
}

impl LatticeShape {
    /// 1 for rectangular lattices, 2 otherwise.
    pub fn nu(self) -> i64 {
        match self {
            LatticeShape::Rectangular => 1,
            LatticeShape::NonRectangular => 2,
        }
    }
}

impl std::fmt::Display for LatticeShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LatticeShape::Rectangular => "rectangular",
            LatticeShape::NonRectangular => "non-rectangular",
        })
    }
}

/// Values of a functional on every Manin symbol as integers over one denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolTable {
    values: Vec<i64>,
    denominator: i64,
}

impl SymbolTable {
    fn from_rationals(values: &[BigRational]) -> Result<Self> {
        let den = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums: Option<Vec<i64>> = values
            .iter()
            .map(|v| (v.numer() * (&den / v.denom())).to_i64())
            .collect();
        Ok(SymbolTable {
            values: nums.ok_or(Error::Overflow("symbol table"))?,
            denominator: den.to_i64().ok_or(Error::Overflow("symbol table"))?,
        })
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn numerator(&self, i: usize) -> i64 {
        self.values[i]
    }

    pub fn value(&self, i: usize) -> BigRational {
        BigRational::new(self.values[i].into(), self.denominator.into())
    }
}

/// How the functionals were scaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Normalized value = raw value * scale.
    pub scale_plus: BigRational,
    pub scale_minus: BigRational,
    pub shape: LatticeShape,
    /// Set once the overall signs and 2-power factors were checked against the analytic oracle.
    pub calibrated: bool,
    /// Extra factors applied by the analytic check on top of the lattice scaling.
    pub analytic_adjustment: (BigRational, BigRational),
}

/// A newform with rational Hecke eigenvalues, represented by its plus and minus
/// eigen-functionals on the modular symbol space.
#[derive(Clone, Serialize, Deserialize)]
pub struct NewformData {
    level: u64,
    label: Option<String>,
    p1: Arc<P1List>,
    eigenvalues: BTreeMap<u64, i64>,
    eigenvalue_bound: u64,
    functional_plus: SparseVec,
    functional_minus: SparseVec,
    raw_plus: SymbolTable,
    raw_minus: SymbolTable,
    reference_symbol: usize,
    normalization: Option<Normalization>,
    plus: Option<SymbolTable>,
    minus: Option<SymbolTable>,
}

impl std::fmt::Debug for NewformData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NewformData")
            .field("level", &self.level)
            .field("label", &self.label)
            .field("a_q (q <= 13)", &self.eigenvalues.range(..=13).collect::<Vec<_>>())
            .field("normalization", &self.normalization)
            .finish()
    }
}

type EigenSystem = BTreeMap<u64, i64>;

/// Splits the functionals of one star sign into joint Hecke eigenspaces with integer
/// eigenvalues in the Hasse range; other eigenvalues (Eisenstein or irrational) drop out.
fn rational_systems(
    space: &ModSymSpace,
    sign: Sign,
    primes: &[u64],
) -> Result<Vec<(EigenSystem, SubspaceBasis)>> {
    let eps = int_to_rational(sign.as_i8() as i64);
    let start = space.star_matrix().shift(&eps)?.kernel();
    let mut pieces = vec![(EigenSystem::new(), start)];
    for &p in primes {
        if space.level().is_multiple_of(p) {
            continue;
        }
        let t = space.hecke_matrix(p)?;
        let bound = (2.0 * (p as f64).sqrt()).floor() as i64;
        let mut next = Vec::new();
        for (system, w) in pieces {
            let a = w.restrict_right(&t)?;
            for ev in -bound..=bound {
                let k = a.shift(&int_to_rational(ev))?.kernel();
                if k.dim() == 0 {
                    continue;
                }
                let vecs = k.vectors().iter().map(|c| w.combine(c)).collect();
                let sub = SubspaceBasis::from_rows(w.ambient(), vecs)?;
                let mut s = system.clone();
                s.insert(p, ev);
                next.push((s, sub));
            }
        }
        pieces = next;
        if pieces.is_empty() {
            break;
        }
    }
    Ok(pieces)
}

fn separation_primes(level: u64) -> Vec<u64> {
    let sturm = psi(level) / 6 + 1;
    primes_up_to(sturm.max(MIN_SEPARATION_PRIME))
        .into_iter()
        .filter(|p| !level.is_multiple_of(*p))
        .collect()
}

fn primitive_integer_values(values: &[BigRational]) -> Vec<BigRational> {
    let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return values.to_vec();
    }
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}

/// Rational newforms of the space: eigenlines whose Hecke system does not already occur
/// at a proper divisor level.
pub fn rational_newforms(space: &ModSymSpace, eigenvalue_bound: u64) -> Result<Vec<NewformData>> {
    let level = space.level();
    if space.genus() == 0 {
        return Ok(Vec::new());
    }
    let primes = separation_primes(level);
    let mut old: Vec<EigenSystem> = Vec::new();
    for p in prime_divisors(level) {
        let lower = level / p;
        if crate::modsym::genus_x0(lower) == 0 {
            continue;
        }
        let sub = ModSymSpace::build(lower)?;
        for (s, _) in rational_systems(&sub, Sign::Plus, &primes)? {
            if !old.contains(&s) {
                old.push(s);
            }
        }
    }
    let plus = rational_systems(space, Sign::Plus, &primes)?;
    let minus = rational_systems(space, Sign::Minus, &primes)?;
    let p1 = Arc::new(space.p1().clone());
    let mut out = Vec::new();
    for (system, wp) in plus {
        if old.contains(&system) {
            continue;
        }
        let Some((_, wm)) = minus.iter().find(|(s, _)| *s == system) else {
            return Err(Error::Invalid(format!(
                "eigen-system {system:?} at level {level} has no minus counterpart"
            )));
        };
        if wp.dim() != 1 || wm.dim() != 1 {
            return Err(Error::Invalid(format!(
                "new eigen-system at level {level} has multiplicity {}/{}",
                wp.dim(),
                wm.dim()
            )));
        }
        let fp = wp.vectors()[0].clone();
        let fm = wm.vectors()[0].clone();
        let raw_plus = SymbolTable::from_rationals(&primitive_integer_values(&space.symbol_values(&fp)))?;
        let raw_minus = SymbolTable::from_rationals(&primitive_integer_values(&space.symbol_values(&fm)))?;
        let reference_symbol = (0..raw_plus.values.len())
            .filter(|&i| raw_plus.values[i] != 0)
            .min_by_key(|&i| {
                let e = p1.get(i);
                (e.c.max(e.d), i)
            })
            .ok_or_else(|| Error::Invalid("plus functional vanishes on every symbol".into()))?;
        let mut form = NewformData {
            level,
            label: None,
            p1: p1.clone(),
            eigenvalues: BTreeMap::new(),
            eigenvalue_bound,
            functional_plus: fp,
            functional_minus: fm,
            raw_plus,
            raw_minus,
            reference_symbol,
            normalization: None,
            plus: None,
            minus: None,
        };
        for q in primes_up_to(eigenvalue_bound.max(2)) {
            if level.is_multiple_of(q) {
                continue;
            }
            let a = form.compute_good_eigenvalue(q)?;
            if let Some(&expected) = system.get(&q) {
                if a != expected {
                    return Err(Error::Invalid(format!(
                        "eigenvalue mismatch at {q}: {a} vs {expected}"
                    )));
                }
            }
            form.eigenvalues.insert(q, a);
        }
        form.lattice_normalize(space)?;
        out.push(form);
    }
    Ok(out)
}

impl NewformData {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = Some(label.into());
    }

    pub fn eigenvalue_bound(&self) -> u64 {
        self.eigenvalue_bound
    }

    pub fn eigenvalues(&self) -> &BTreeMap<u64, i64> {
        &self.eigenvalues
    }

    /// Column vector in the basis of V with star eigenvalue matching `sign`.
    pub fn functional(&self, sign: Sign) -> &SparseVec {
        match sign {
            Sign::Plus => &self.functional_plus,
            Sign::Minus => &self.functional_minus,
        }
    }

    pub fn normalization(&self) -> Option<&Normalization> {
        self.normalization.as_ref()
    }

    pub fn lattice_shape(&self) -> Option<LatticeShape> {
        self.normalization.as_ref().map(|n| n.shape)
    }

    pub fn is_calibrated(&self) -> bool {
        self.normalization.as_ref().is_some_and(|n| n.calibrated)
    }

    fn compute_good_eigenvalue(&self, q: u64) -> Result<i64> {
        let i0 = self.reference_symbol;
        let mut acc: i128 = 0;
        for h in heilbronn_cremona(q) {
            let j = self
                .p1
                .apply_matrix(i0, &h)
                .ok_or(Error::PrimeDividesLevel { prime: q, level: self.level })?;
            acc += self.raw_plus.values[j] as i128;
        }
        let base = self.raw_plus.values[i0] as i128;
        if acc % base != 0 {
            return Err(Error::Invalid(format!("non-integral eigenvalue at {q}")));
        }
        let a = (acc / base) as i64;
        if (a * a) as u64 > 4 * q {
            return Err(Error::Invalid(format!("eigenvalue {a} at {q} outside the Hasse range")));
        }
        Ok(a)
    }

    /// a_q for a prime q; cached up to the eigenvalue bound, computed on demand beyond it.
    /// For q dividing the level this is the U_q eigenvalue.
    pub fn ap(&self, q: u64) -> Result<i64> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if let Some(&a) = self.eigenvalues.get(&q) {
            return Ok(a);
        }
        if self.level.is_multiple_of(q) {
            return self.bad_eigenvalue(q);
        }
        self.compute_good_eigenvalue(q)
    }

    /// U_p eigenvalue for p | N from a_p [r] = sum_k [(r + k)/p].
    fn bad_eigenvalue(&self, p: u64) -> Result<i64> {
        let p = p as i64;
        for m in 1..200i64 {
            for k in 0..m.max(1) {
                if k.gcd(&m) != 1 {
                    continue;
                }
                let base = self.raw_path_numerator(&self.raw_plus, k, m);
                if base == 0 {
                    continue;
                }
                let mut acc: i128 = 0;
                for j in 0..p {
                    acc += self.raw_path_numerator(&self.raw_plus, k + j * m, p * m);
                }
                if acc % base != 0 {
                    return Err(Error::Invalid(format!("non-integral U_{p} eigenvalue")));
                }
                return Ok((acc / base) as i64);
            }
        }
        Err(Error::Invalid("no cusp with nonzero plus value found".into()))
    }

    fn symbol_index(&self, c: i64, d: i64) -> usize {
        self.p1.index(c, d).expect("coprime bottom row lies in P1")
    }

    /// Numerator of [k/M] over the table denominator; k/M need not be reduced.
    fn raw_path_numerator(&self, table: &SymbolTable, k: i64, m: i64) -> i128 {
        let g = k.gcd(&m);
        let path = CuspPath::new(k / g, m / g).expect("reduced");
        self.path_numerator(table, path)
    }

    fn path_numerator(&self, table: &SymbolTable, path: CuspPath) -> i128 {
        // [r] is the functional on {oo, r} = {oo, 0} + {0, r}, and {oo, 0} is (1 : 0)
        let mut acc = table.values[self.symbol_index(1, 0)] as i128;
        for (c, d) in manin_path_decompose(path) {
            acc += table.values[self.symbol_index(c, d)] as i128;
        }
        acc
    }

    fn table(&self, sign: Sign) -> Result<&SymbolTable> {
        let t = match sign {
            Sign::Plus => self.plus.as_ref(),
            Sign::Minus => self.minus.as_ref(),
        };
        t.ok_or(Error::NotNormalized)
    }

    /// Common denominator of the normalized values for `sign`.
    pub fn denominator(&self, sign: Sign) -> Result<i64> {
        Ok(self.table(sign)?.denominator)
    }

    /// [k/M]^sign times `denominator(sign)`; (k, M) need not be reduced.
    pub fn eval_numerator(&self, k: i64, m: i64, sign: Sign) -> Result<i128> {
        let t = self.table(sign)?;
        Ok(self.raw_path_numerator(t, k, m))
    }

    /// [r]^sign for the cusp r.
    pub fn eval_symbol(&self, path: CuspPath, sign: Sign) -> Result<BigRational> {
        let t = self.table(sign)?;
        let num = self.path_numerator(t, path);
        Ok(BigRational::new(BigInt::from(num), BigInt::from(t.denominator)))
    }

    /// Checks a_p [r] = [pr] + sum_k [(k + r)/p] exactly for both signs.
    pub fn hecke_eval_identity_check(&self, r: CuspPath, p: u64) -> Result<bool> {
        if self.level.is_multiple_of(p) {
            return Err(Error::PrimeDividesLevel { prime: p, level: self.level });
        }
        let a = self.ap(p)? as i128;
        let (k, m) = (r.numerator(), r.denominator());
        let p = p as i64;
        for sign in [Sign::Plus, Sign::Minus] {
            let lhs = a * self.eval_numerator(k, m, sign)?;
            let mut rhs = self.eval_numerator(p * k, m, sign)?;
            for j in 0..p {
                rhs += self.eval_numerator(k + j * m, p * m, sign)?;
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Scales both functionals so that integral homology maps onto Z^2 (rectangular) or
    /// onto {(x, y) in (Z/2)^2 : x - y in Z} (non-rectangular). Overall signs stay provisional.
    pub fn lattice_normalize(&mut self, space: &ModSymSpace) -> Result<()> {
        if space.level() != self.level {
            return Err(Error::DimensionMismatch("space and form levels differ".into()));
        }
        let mut images: Vec<Vec<BigInt>> = Vec::new();
        for z in space.integral_cycles() {
            let x: i128 = z.iter().map(|&(i, c)| c as i128 * self.raw_plus.values[i] as i128).sum();
            let y: i128 = z.iter().map(|&(i, c)| c as i128 * self.raw_minus.values[i] as i128).sum();
            if x != 0 || y != 0 {
                images.push(vec![BigInt::from(x), BigInt::from(y)]);
            }
        }
        let h = hermite_normal_form(&images);
        if h.len() != 2 {
            return Err(Error::Invalid("period lattice image has rank below 2".into()));
        }
        let (alpha, beta, delta) = (h[0][0].clone(), h[0][1].clone(), h[1][1].clone());
        let den_p = BigInt::from(self.raw_plus.denominator);
        let den_m = BigInt::from(self.raw_minus.denominator);
        let shape = if beta.is_zero() {
            LatticeShape::Rectangular
        } else if &beta * 2 == delta {
            LatticeShape::NonRectangular
        } else {
            return Err(Error::Invalid(format!(
                "period lattice image [[{alpha}, {beta}], [0, {delta}]] is neither shape"
            )));
        };
        // With (alpha, beta), (0, delta) as basis, dividing by alpha and delta leaves
        // Z^2 or the lattice spanned by (1, 1/2), (0, 1); the latter becomes the
        // half-integer lattice after halving the plus coordinate.
        let plus_div = match shape {
            LatticeShape::Rectangular => alpha.clone(),
            LatticeShape::NonRectangular => alpha.clone() * 2,
        };
        let scale_plus = BigRational::new(den_p, plus_div);
        let scale_minus = BigRational::new(den_m, delta.abs());
        self.normalization = Some(Normalization {
            scale_plus,
            scale_minus,
            shape,
            calibrated: false,
            analytic_adjustment: (BigRational::one(), BigRational::one()),
        });
        self.rebuild_tables()
    }

    fn rebuild_tables(&mut self) -> Result<()> {
        let n = self.normalization.as_ref().ok_or(Error::NotNormalized)?;
        let sp = &n.scale_plus * &n.analytic_adjustment.0;
        let sm = &n.scale_minus * &n.analytic_adjustment.1;
        let plus: Vec<BigRational> = (0..self.raw_plus.values.len())
            .map(|i| self.raw_plus.value(i) * &sp)
            .collect();
        let minus: Vec<BigRational> = (0..self.raw_minus.values.len())
            .map(|i| self.raw_minus.value(i) * &sm)
            .collect();
        self.plus = Some(SymbolTable::from_rationals(&plus)?);
        self.minus = Some(SymbolTable::from_rationals(&minus)?);
        Ok(())
    }

    /// Multiplies the normalized functionals by extra factors and marks the form calibrated.
    pub(crate) fn apply_calibration(&mut self, plus: BigRational, minus: BigRational) -> Result<()> {
        let n = self.normalization.as_mut().ok_or(Error::NotNormalized)?;
        n.analytic_adjustment = (&n.analytic_adjustment.0 * plus, &n.analytic_adjustment.1 * minus);
        n.calibrated = true;
        self.rebuild_tables()
    }

    /// Images (plus, minus) of the integral cycles under the normalized functionals.
    pub fn homology_images(&self, space: &ModSymSpace) -> Result<Vec<(BigRational, BigRational)>> {
        let (tp, tm) = (self.table(Sign::Plus)?, self.table(Sign::Minus)?);
        Ok(space
            .integral_cycles()
            .iter()
            .map(|z| {
                let x: i128 = z.iter().map(|&(i, c)| c as i128 * tp.values[i] as i128).sum();
                let y: i128 = z.iter().map(|&(i, c)| c as i128 * tm.values[i] as i128).sum();
                (
                    BigRational::new(x.into(), tp.denominator.into()),
                    BigRational::new(y.into(), tm.denominator.into()),
                )
            })
            .collect())
    }

    /// Whether the overall plus-sign convention makes the symbol value positive at a
    /// reference; used only for display.
    pub fn scale_is_positive(&self) -> bool {
        self.normalization
            .as_ref()
            .is_some_and(|n| n.scale_plus.is_positive() && n.scale_minus.is_positive())
    }
}
