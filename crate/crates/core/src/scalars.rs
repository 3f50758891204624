//! Exact coefficient arithmetic.
//!
//! Two scalar domains are used throughout the engine: Gaussian rationals
//! (the coefficient field, since Dolbeault charts need `i`) and truncated
//! bivariate series in a formal variable `q` (power series, truncated at a
//! fixed order) and `y` (Laurent polynomial, unbounded exponents).
//!
//! Everything here is exact; there is deliberately no floating-point mode.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("constant term is not a unit scalar: {0}")]
    NonUnitConstant(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division: {0}")]
    InexactDivision(String),
}

/// Element of `Q(i)`: a rational real part and a rational imaginary part.
///
/// `BigRational` keeps numerator and denominator coprime with a positive
/// denominator, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(GaussianRational::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        GaussianRational::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussianRational::new(re, im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        self.clone() * rhs.clone()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", fmt_rational(&self.im))
        };
        if self.re.is_zero() {
            write!(f, "{im}")
        } else if self.im.is_negative() {
            write!(f, "{}{}", fmt_rational(&self.re), im)
        } else {
            write!(f, "{}+{}", fmt_rational(&self.re), im)
        }
    }
}

/// Truncated series: polynomial in `q` up to a fixed order `N`, with
/// Laurent-polynomial-in-`y` coefficients over the Gaussian rationals.
///
/// No zero coefficients are stored, so equality is structural. All
/// arithmetic is exact through order `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QYSeries {
    trunc: u32,
    terms: BTreeMap<(u32, i64), GaussianRational>,
}

impl QYSeries {
    pub fn zero(trunc: u32) -> Self {
        QYSeries { trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: u32) -> Self {
        QYSeries::monomial(trunc, 0, 0, GaussianRational::one())
    }

    pub fn constant(trunc: u32, c: GaussianRational) -> Self {
        QYSeries::monomial(trunc, 0, 0, c)
    }

    /// The single term `c * q^a * y^b`, dropped if `a` exceeds the order.
    pub fn monomial(trunc: u32, a: u32, b: i64, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if a <= trunc && !c.is_zero() {
            terms.insert((a, b), c);
        }
        QYSeries { trunc, terms }
    }

    pub fn truncation_order(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: u32, b: i64) -> GaussianRational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i64), &GaussianRational)> {
        self.terms.iter()
    }

    fn insert(&mut self, key: (u32, i64), c: GaussianRational) {
        if key.0 > self.trunc {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(GaussianRational::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_order(rhs)?;
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect();
        QYSeries { trunc: self.trunc, terms }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return QYSeries::zero(self.trunc);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (*k, v.clone() * c.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        QYSeries { trunc: self.trunc, terms }
    }

    fn check_order(&self, rhs: &Self) -> Result<(), ScalarError> {
        if self.trunc != rhs.trunc {
            return Err(ScalarError::TruncationMismatch(self.trunc, rhs.trunc));
        }
        Ok(())
    }

    /// Exact product through order `N`; requires equal truncation orders.
    pub fn mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_order(rhs)?;
        let mut out = QYSeries::zero(self.trunc);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                if a1 + a2 > self.trunc {
                    continue;
                }
                out.insert((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Lowest q-order on or above which anything is stored.
    fn q_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|(a, _)| *a).min()
    }

    /// Inverse of a series whose constant term is a nonzero scalar at `y^0`.
    pub fn invert(&self) -> Result<Self, ScalarError> {
        let mut c0 = None;
        for ((a, b), c) in &self.terms {
            if *a == 0 {
                if *b != 0 {
                    return Err(ScalarError::NonUnitConstant(format!(
                        "q^0 slice contains y^{b}"
                    )));
                }
                c0 = Some(c.clone());
            }
        }
        let c0 = c0.ok_or_else(|| ScalarError::NonUnitConstant("zero constant term".into()))?;
        let c0_inv = c0.inv()?;
        // a = c0 (1 - r)  =>  a^{-1} = c0^{-1} (1 + r + r^2 + ...)
        let r = QYSeries::one(self.trunc).sub(&self.scale(&c0_inv))?;
        let mut acc = QYSeries::one(self.trunc);
        let mut pow = QYSeries::one(self.trunc);
        let val = r.q_valuation().unwrap_or(self.trunc + 1).max(1);
        let mut k = 0;
        while k * val <= self.trunc && !pow.is_zero() {
            pow = pow.mul(&r)?;
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow)?;
            k += 1;
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Integer power, negative exponents via `invert`.
    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = QYSeries::one(self.trunc);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Substitute a scalar value for `y`, collapsing all y-exponents.
    pub fn subst_y(&self, v: &GaussianRational) -> Result<Self, ScalarError> {
        let mut out = QYSeries::zero(self.trunc);
        for ((a, b), c) in &self.terms {
            let factor = if *b >= 0 {
                v.pow(*b as u32)
            } else {
                v.inv()?.pow((-b) as u32)
            };
            out.insert((*a, 0), c.clone() * factor);
        }
        Ok(out)
    }

    /// Multiply by `y^k` (shifts every y-exponent).
    pub fn y_shift(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|((a, b), c)| ((*a, b + k), c.clone())).collect();
        QYSeries { trunc: self.trunc, terms }
    }

    /// Exact division; errors when the quotient is not a `QYSeries`.
    ///
    /// Divides slice by slice in q-order after factoring out the divisor's
    /// q-valuation; each y-slice division must be exact in Laurent
    /// polynomials.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_order(rhs)?;
        if self.is_zero() {
            return Ok(QYSeries::zero(self.trunc));
        }
        let dv = rhs
            .q_valuation()
            .ok_or(ScalarError::DivisionByZero)?;
        let nv = self.q_valuation().unwrap();
        if nv < dv {
            return Err(ScalarError::InexactDivision("q-valuation too low".into()));
        }
        // Collect y-slices of numerator and divisor.
        let slice = |s: &QYSeries, a: u32| -> BTreeMap<i64, GaussianRational> {
            s.terms
                .iter()
                .filter(|((qa, _), _)| *qa == a)
                .map(|((_, b), c)| (*b, c.clone()))
                .collect()
        };
        let d0 = slice(rhs, dv);
        let out_order = self.trunc - dv;
        let mut quot: Vec<BTreeMap<i64, GaussianRational>> = Vec::new();
        for k in 0..=out_order {
            // numerator slice at q^{k+dv} minus contributions of known quotient slices
            let mut target = slice(self, k + dv);
            for (j, qj) in quot.iter().enumerate() {
                let dk = k + dv - j as u32; // divisor slice index pairing with q_j
                let dsl = slice(rhs, dk);
                for (by, cy) in qj {
                    for (bd, cd) in &dsl {
                        let key = by + bd;
                        let e = target.entry(key).or_insert_with(GaussianRational::zero);
                        *e = e.clone() - cy.clone() * cd.clone();
                        if e.is_zero() {
                            target.remove(&key);
                        }
                    }
                }
            }
            quot.push(laurent_div_exact(&target, &d0)?);
        }
        let mut out = QYSeries::zero(self.trunc);
        for (k, sl) in quot.into_iter().enumerate() {
            for (b, c) in sl {
                out.insert((k as u32, b), c);
            }
        }
        Ok(out)
    }
}

/// Exact division of Laurent polynomials in `y`; errors if not exact.
fn laurent_div_exact(
    num: &BTreeMap<i64, GaussianRational>,
    den: &BTreeMap<i64, GaussianRational>,
) -> Result<BTreeMap<i64, GaussianRational>, ScalarError> {
    if num.is_empty() {
        return Ok(BTreeMap::new());
    }
    if den.is_empty() {
        return Err(ScalarError::DivisionByZero);
    }
    let mut rem = num.clone();
    let mut quot: BTreeMap<i64, GaussianRational> = BTreeMap::new();
    let (dlead, dc) = den.iter().next_back().map(|(k, v)| (*k, v.clone())).unwrap();
    // the quotient's lowest exponent is bounded by the spans of the inputs;
    // descending past it means the division is not exact
    let num_low = *num.keys().next().unwrap();
    let den_low = *den.keys().next().unwrap();
    let min_shift = num_low - dlead - (dlead - den_low) * (den.len() as i64 + 1) - 4;
    while !rem.is_empty() {
        let (nlead, nc) = rem.iter().next_back().map(|(k, v)| (*k, v.clone())).unwrap();
        let shift = nlead - dlead;
        if shift < min_shift {
            return Err(ScalarError::InexactDivision("laurent tail".into()));
        }
        let coef = nc.div(&dc)?;
        quot.insert(shift, coef.clone());
        for (k, v) in den {
            let key = k + shift;
            let e = rem.entry(key).or_insert_with(GaussianRational::zero);
            *e = e.clone() - coef.clone() * v.clone();
            if e.is_zero() {
                rem.remove(&key);
            }
        }
        // Degree must strictly drop, otherwise the loop cannot terminate.
        if let Some((k, _)) = rem.iter().next_back() {
            if *k >= nlead {
                return Err(ScalarError::InexactDivision("laurent remainder".into()));
            }
        }
    }
    Ok(quot)
}

/// Exact truncated product of integer powers of series.
pub fn product_pow(factors: &[(QYSeries, i64)], trunc: u32) -> Result<QYSeries, ScalarError> {
    let mut acc = QYSeries::one(trunc);
    for (f, e) in factors {
        if f.truncation_order() != trunc {
            return Err(ScalarError::TruncationMismatch(f.truncation_order(), trunc));
        }
        acc = acc.mul(&f.pow(*e)?)?;
    }
    Ok(acc)
}

impl fmt::Display for QYSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if *a > 0 {
                write!(f, " * q^{a}")?;
            }
            if *b != 0 {
                write!(f, " * y^{b}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(trunc: u32) -> QYSeries {
        QYSeries::monomial(trunc, 1, 0, GaussianRational::one())
    }

    fn y(trunc: u32, b: i64) -> QYSeries {
        QYSeries::monomial(trunc, 0, b, GaussianRational::one())
    }

    #[test]
    fn difference_of_squares() {
        let n = 3;
        let a = QYSeries::one(n).add(&q(n)).unwrap();
        let b = QYSeries::one(n).sub(&q(n)).unwrap();
        let mut expect = QYSeries::one(n);
        expect = expect.sub(&q(n).mul(&q(n)).unwrap()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn geometric_series_identity() {
        let n = 5;
        let mut geo = QYSeries::zero(n);
        for k in 0..=n {
            geo = geo.add(&QYSeries::monomial(n, k, 0, GaussianRational::one())).unwrap();
        }
        let one_minus_q = QYSeries::one(n).sub(&q(n)).unwrap();
        assert_eq!(one_minus_q.mul(&geo).unwrap(), QYSeries::one(n));
    }

    #[test]
    fn laurent_y_product() {
        let n = 2;
        let a = y(n, 1).add(&y(n, -1)).unwrap();
        let b = y(n, 1).sub(&y(n, -1)).unwrap();
        let expect = y(n, 2).sub(&y(n, -2)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn invert_one_minus_q() {
        let n = 6;
        let inv = QYSeries::one(n).sub(&q(n)).unwrap().invert().unwrap();
        for k in 0..=n {
            assert!(inv.coefficient(k, 0).is_one());
        }
    }

    #[test]
    fn invert_identity() {
        let n = 4;
        assert_eq!(QYSeries::one(n).invert().unwrap(), QYSeries::one(n));
    }

    #[test]
    fn invert_one_minus_2q_long_division_oracle() {
        // Oracle: long division of 1 by (1-2q) gives partial quotients 2^n q^n.
        let n = 8;
        let two_q = QYSeries::monomial(n, 1, 0, GaussianRational::from_int(2));
        let inv = QYSeries::one(n).sub(&two_q).unwrap().invert().unwrap();
        for k in 0..=n {
            assert_eq!(inv.coefficient(k, 0), GaussianRational::from_int(1i64 << k));
        }
    }

    #[test]
    fn invert_roundtrip() {
        let n = 7;
        let mut s = QYSeries::one(n);
        s = s.add(&QYSeries::monomial(n, 1, 2, GaussianRational::from_int(3))).unwrap();
        s = s.sub(&QYSeries::monomial(n, 2, -1, GaussianRational::from_ratio(5, 2))).unwrap();
        assert_eq!(s.invert().unwrap().invert().unwrap(), s);
    }

    #[test]
    fn eta_power_24() {
        // prod_{n=1}^{N} (1-q^n)^24 through q^5
        let n = 5;
        let mut factors = Vec::new();
        for k in 1..=n {
            let f = QYSeries::one(n)
                .sub(&QYSeries::monomial(n, k, 0, GaussianRational::one()))
                .unwrap();
            factors.push((f, 24i64));
        }
        let p = product_pow(&factors, n).unwrap();
        let expect: [i64; 6] = [1, -24, 252, -1472, 4830, -6048];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(p.coefficient(k as u32, 0), GaussianRational::from_int(*e));
        }
    }

    #[test]
    fn ratio_product_to_q2() {
        // prod ((1-q^n)/(1+q^n))^8 = 1 - 16q + 112q^2 + ...
        let n = 2;
        let mut factors = Vec::new();
        for k in 1..=n {
            let qm = QYSeries::monomial(n, k, 0, GaussianRational::one());
            factors.push((QYSeries::one(n).sub(&qm).unwrap(), 8i64));
            factors.push((QYSeries::one(n).add(&qm).unwrap(), -8i64));
        }
        let p = product_pow(&factors, n).unwrap();
        assert_eq!(p.coefficient(0, 0), GaussianRational::from_int(1));
        assert_eq!(p.coefficient(1, 0), GaussianRational::from_int(-16));
        assert_eq!(p.coefficient(2, 0), GaussianRational::from_int(112));
    }

    #[test]
    fn product_pow_zero_exponent() {
        let n = 4;
        let f = QYSeries::one(n).sub(&q(n)).unwrap();
        assert_eq!(product_pow(&[(f, 0)], n).unwrap(), QYSeries::one(n));
    }

    #[test]
    fn product_pow_cancels() {
        let n = 6;
        let f = QYSeries::one(n)
            .sub(&q(n))
            .unwrap()
            .add(&QYSeries::monomial(n, 2, 1, GaussianRational::from_int(2)))
            .unwrap();
        let g = QYSeries::one(n).add(&q(n)).unwrap();
        let p = product_pow(&[(f.clone(), 3), (g.clone(), -2), (f, -3), (g, 2)], n).unwrap();
        assert_eq!(p, QYSeries::one(n));
    }

    #[test]
    fn mismatched_truncation_is_error() {
        let a = QYSeries::one(3);
        let b = QYSeries::one(4);
        assert!(matches!(a.mul(&b), Err(ScalarError::TruncationMismatch(3, 4))));
    }

    #[test]
    fn non_unit_constant_is_error() {
        let n = 3;
        let s = q(n);
        assert!(matches!(s.invert(), Err(ScalarError::NonUnitConstant(_))));
        let s = QYSeries::one(n).add(&y(n, 1)).unwrap();
        assert!(matches!(s.invert(), Err(ScalarError::NonUnitConstant(_))));
    }

    #[test]
    fn subst_y_minus_one() {
        let n = 2;
        let s = y(n, 1).add(&y(n, -1)).unwrap().add(&q(n)).unwrap();
        let v = s.subst_y(&GaussianRational::from_int(-1)).unwrap();
        assert_eq!(v.coefficient(0, 0), GaussianRational::from_int(-2));
        assert_eq!(v.coefficient(1, 0), GaussianRational::one());
    }

    #[test]
    fn gaussian_field_laws() {
        // deterministic pseudo-random triples
        let mk = |a: i64, b: i64, c: i64, d: i64| {
            GaussianRational::new(
                BigRational::new(BigInt::from(a), BigInt::from(b)),
                BigRational::new(BigInt::from(c), BigInt::from(d)),
            )
        };
        let samples = [
            mk(1, 2, -3, 4),
            mk(0, 1, 1, 1),
            mk(-5, 3, 2, 7),
            mk(2, 1, 0, 1),
            mk(-1, 1, -1, 1),
        ];
        for x in &samples {
            for s in &samples {
                for z in &samples {
                    let lhs = (x.clone() + s.clone()) + z.clone();
                    let rhs = x.clone() + (s.clone() + z.clone());
                    assert_eq!(lhs, rhs);
                    let lhs = (x.clone() * s.clone()) * z.clone();
                    let rhs = x.clone() * (s.clone() * z.clone());
                    assert_eq!(lhs, rhs);
                    let lhs = x.clone() * (s.clone() + z.clone());
                    let rhs = x.clone() * s.clone() + x.clone() * z.clone();
                    assert_eq!(lhs, rhs);
                }
                if !s.is_zero() {
                    assert_eq!(s.clone() * s.inv().unwrap(), GaussianRational::one());
                }
            }
        }
    }

    #[test]
    fn div_exact_by_one_minus_y() {
        // (1-y)(1 + q y^{-1}) divided back
        let n = 3;
        let a = QYSeries::one(n).sub(&y(n, 1)).unwrap();
        let b = QYSeries::one(n).add(&QYSeries::monomial(n, 1, -1, GaussianRational::one())).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.div_exact(&a).unwrap(), b);
    }
}
