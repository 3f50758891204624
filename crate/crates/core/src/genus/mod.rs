//! Characteristic-class calculus on truncated cohomology models and the
//! q-series of the chiral Dolbeault characters.
//!
//! Models are truncated polynomial rings with a top-degree integration
//! functional (projective spaces and their products are built in); bundle
//! data is a list of line elements with signed multiplicities, and all
//! genus integrands are assembled from per-line universal series with
//! coefficients in the exact `q`/`y` series ring.

mod series;

pub use series::{
    chern_root_integrand_check, chiral_character, chiral_integrand, example_series,
    multiplicative_class, ochanine_special_value, reference_series, ExampleBundle, GenusOutput,
};

use crate::scalars::{GaussianRational, QYSeries, ScalarError};
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenusError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("class has a constant term where a nilpotent is required")]
    NotNilpotent,
    #[error("inexact class division")]
    InexactClassDivision,
    #[error("series must start with 1, found {0}")]
    NonUnitSeries(String),
}

/// A truncated polynomial cohomology model: generators `x_1..x_k` with
/// `x_i^{caps[i]+1} = 0` and integration reading the top coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomModel {
    caps: Vec<u32>,
    name: String,
}

impl CohomModel {
    pub fn point() -> Self {
        CohomModel { caps: vec![], name: "point".into() }
    }

    /// Complex projective space of dimension `n`.
    pub fn cp(n: u32) -> Self {
        CohomModel { caps: vec![n], name: format!("cp{n}") }
    }

    /// A product of two projective spaces.
    pub fn cp_x_cp(m: u32, n: u32) -> Self {
        CohomModel { caps: vec![m, n], name: format!("cp{m}xcp{n}") }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "point" => Some(Self::point()),
            "cp1" => Some(Self::cp(1)),
            "cp2" => Some(Self::cp(2)),
            "cp3" => Some(Self::cp(3)),
            "cp1xcp1" => Some(Self::cp_x_cp(1, 1)),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex dimension.
    pub fn dim(&self) -> u32 {
        self.caps.iter().sum()
    }

    pub fn generators(&self) -> usize {
        self.caps.len()
    }

    /// The tangent data of the built-in models by the standard splitting:
    /// `(n+1)` copies of the hyperplane class minus a trivial line per
    /// factor.
    pub fn tangent_bundle(&self, trunc: u32) -> BundleData {
        let mut lines = Vec::new();
        for (g, cap) in self.caps.iter().enumerate() {
            lines.push(LineElement {
                class: CohomClass::generator(self, trunc, g),
                mult: *cap as i64 + 1,
            });
            lines.push(LineElement { class: CohomClass::zero_class(self, trunc), mult: -1 });
        }
        BundleData { lines }
    }
}

impl fmt::Display for CohomModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Element of the truncated cohomology ring with series coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomClass {
    caps: Vec<u32>,
    trunc: u32,
    terms: BTreeMap<Vec<u32>, QYSeries>,
}

impl CohomClass {
    pub fn zero(model: &CohomModel, trunc: u32) -> Self {
        CohomClass { caps: model.caps.clone(), trunc, terms: BTreeMap::new() }
    }

    pub fn zero_class(model: &CohomModel, trunc: u32) -> Self {
        Self::zero(model, trunc)
    }

    pub fn one(model: &CohomModel, trunc: u32) -> Self {
        Self::constant(model, trunc, QYSeries::one(trunc))
    }

    pub fn constant(model: &CohomModel, trunc: u32, c: QYSeries) -> Self {
        let mut out = Self::zero(model, trunc);
        out.insert(vec![0; model.caps.len()], c);
        out
    }

    /// The `g`-th generator (a degree-one class).
    pub fn generator(model: &CohomModel, trunc: u32, g: usize) -> Self {
        let mut out = Self::zero(model, trunc);
        let mut exps = vec![0; model.caps.len()];
        exps[g] = 1;
        out.insert(exps, QYSeries::one(trunc));
        out
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, exps: Vec<u32>, c: QYSeries) {
        if c.is_zero() {
            return;
        }
        if exps.iter().zip(&self.caps).any(|(e, cap)| e > cap) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut e) => {
                let v = e.get().add(&c).expect("matching truncation");
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
        CohomClass { caps: self.caps.clone(), trunc: self.trunc, terms }
    }

    pub fn scale(&self, c: &QYSeries) -> Self {
        let mut out = Self { caps: self.caps.clone(), trunc: self.trunc, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            out.insert(e.clone(), v.mul(c).expect("matching truncation"));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self { caps: self.caps.clone(), trunc: self.trunc, terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if exps.iter().zip(&self.caps).any(|(e, cap)| e > cap) {
                    continue;
                }
                out.insert(exps, c1.mul(c2).expect("matching truncation"));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let model_like = self.clone();
        let mut acc = CohomClass {
            caps: self.caps.clone(),
            trunc: self.trunc,
            terms: BTreeMap::new(),
        };
        acc.insert(vec![0; self.caps.len()], QYSeries::one(self.trunc));
        for _ in 0..e {
            acc = acc.mul(&model_like);
        }
        acc
    }

    pub fn constant_term(&self) -> QYSeries {
        self.terms
            .get(&vec![0; self.caps.len()])
            .cloned()
            .unwrap_or_else(|| QYSeries::zero(self.trunc))
    }

    fn nilpotent_part(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().any(|&x| x > 0))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        CohomClass { caps: self.caps.clone(), trunc: self.trunc, terms }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Inverse of `unit + nilpotent`, by the finite geometric series.
    pub fn invert(&self) -> Result<Self, GenusError> {
        let c0 = self.constant_term();
        let c0_inv = c0.invert()?;
        let nil = self.nilpotent_part().scale(&c0_inv);
        let mut acc = CohomClass::constant_like(self, QYSeries::one(self.trunc));
        let mut pow = acc.clone();
        let top: u32 = self.caps.iter().sum();
        for _ in 0..=top {
            pow = pow.mul(&nil).neg();
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc.scale(&c0_inv))
    }

    fn constant_like(like: &Self, c: QYSeries) -> Self {
        let mut out =
            CohomClass { caps: like.caps.clone(), trunc: like.trunc, terms: BTreeMap::new() };
        out.insert(vec![0; like.caps.len()], c);
        out
    }

    /// Exact division, solving degreewise; the constant coefficient of the
    /// divisor must divide exactly in the series ring at every step.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self, GenusError> {
        let den0 = rhs.constant_term();
        if den0.is_zero() {
            return Err(GenusError::InexactClassDivision);
        }
        let den_plus = rhs.nilpotent_part();
        let top: u32 = self.caps.iter().sum();
        let mut quot = CohomClass {
            caps: self.caps.clone(),
            trunc: self.trunc,
            terms: BTreeMap::new(),
        };
        for degree in 0..=top {
            // residual at this total degree
            let mut residual: BTreeMap<Vec<u32>, QYSeries> = BTreeMap::new();
            for (e, c) in &self.terms {
                if e.iter().sum::<u32>() == degree {
                    residual.insert(e.clone(), c.clone());
                }
            }
            let correction = quot.mul(&den_plus);
            for (e, c) in &correction.terms {
                if e.iter().sum::<u32>() == degree {
                    let entry = residual
                        .entry(e.clone())
                        .or_insert_with(|| QYSeries::zero(self.trunc));
                    *entry = entry.sub(c).expect("matching truncation");
                }
            }
            for (e, c) in residual {
                if c.is_zero() {
                    continue;
                }
                let q = c.div_exact(&den0).map_err(|_| GenusError::InexactClassDivision)?;
                quot.insert(e, q);
            }
        }
        // verify exactness
        if quot.mul(rhs) != *self {
            return Err(GenusError::InexactClassDivision);
        }
        Ok(quot)
    }

    /// Substitute `y = v` in every coefficient.
    pub fn subst_y(&self, v: &GaussianRational) -> Result<Self, GenusError> {
        let mut out =
            CohomClass { caps: self.caps.clone(), trunc: self.trunc, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.subst_y(v)?);
        }
        Ok(out)
    }

    /// Integration functional: the coefficient of the top monomial.
    pub fn integrate(&self) -> QYSeries {
        self.terms
            .get(&self.caps)
            .cloned()
            .unwrap_or_else(|| QYSeries::zero(self.trunc))
    }
}

impl fmt::Display for CohomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (g, exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => write!(f, "*x{}", g + 1)?,
                    _ => write!(f, "*x{}^{}", g + 1, exp)?,
                }
            }
        }
        Ok(())
    }
}

/// A signed sum of line elements presented by their first Chern classes.
#[derive(Debug, Clone)]
pub struct BundleData {
    pub lines: Vec<LineElement>,
}

#[derive(Debug, Clone)]
pub struct LineElement {
    pub class: CohomClass,
    pub mult: i64,
}

impl BundleData {
    pub fn empty() -> Self {
        BundleData { lines: Vec::new() }
    }

    pub fn single(class: CohomClass) -> Self {
        BundleData { lines: vec![LineElement { class, mult: 1 }] }
    }

    pub fn rank(&self) -> i64 {
        self.lines.iter().map(|l| l.mult).sum()
    }

    /// The first Chern class `sum mult_i c_i`.
    pub fn c1(&self, model: &CohomModel, trunc: u32) -> CohomClass {
        let mut out = CohomClass::zero(model, trunc);
        for l in &self.lines {
            let m = QYSeries::constant(trunc, GaussianRational::from_int(l.mult));
            out = out.add(&l.class.scale(&m));
        }
        out
    }

    /// Total Chern class `prod (1 + c_i)^{mult_i}`.
    pub fn total_chern(&self, model: &CohomModel, trunc: u32) -> Result<CohomClass, GenusError> {
        let mut acc = CohomClass::one(model, trunc);
        for l in &self.lines {
            let f = CohomClass::one(model, trunc).add(&l.class);
            let p = if l.mult >= 0 {
                f.pow(l.mult as u32)
            } else {
                f.invert()?.pow((-l.mult) as u32)
            };
            acc = acc.mul(&p);
        }
        Ok(acc)
    }

    /// The determinant line.
    pub fn determinant(&self, model: &CohomModel, trunc: u32) -> BundleData {
        BundleData::single(self.c1(model, trunc))
    }
}

/// A univariate series in a formal nilpotent variable with `q`/`y`-series
/// coefficients, truncated at the model's top degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XSeries {
    pub coeffs: Vec<QYSeries>,
}

impl XSeries {
    pub fn new(coeffs: Vec<QYSeries>) -> Self {
        XSeries { coeffs }
    }

    pub fn one(len: usize, trunc: u32) -> Self {
        let mut coeffs = vec![QYSeries::zero(trunc); len];
        coeffs[0] = QYSeries::one(trunc);
        XSeries { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trunc(&self) -> u32 {
        self.coeffs[0].truncation_order()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, GenusError> {
        let n = self.len();
        let mut out = vec![QYSeries::zero(self.trunc()); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n || b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(XSeries { coeffs: out })
    }

    pub fn invert(&self) -> Result<Self, GenusError> {
        // constant must be invertible in the series ring
        let c0inv = self.coeffs[0].invert()?;
        let mut out = XSeries::one(self.len(), self.trunc());
        // Newton-free: solve triangularly
        let mut coeffs = vec![QYSeries::zero(self.trunc()); self.len()];
        coeffs[0] = c0inv.clone();
        for k in 1..self.len() {
            let mut acc = QYSeries::zero(self.trunc());
            for j in 0..k {
                acc = acc.add(&coeffs[j].mul(&self.coeffs[k - j])?)?;
            }
            coeffs[k] = acc.neg().mul(&c0inv)?;
        }
        out.coeffs = coeffs;
        Ok(out)
    }

    /// Exact division (the constant coefficient may be a non-unit such as
    /// `1 - y`, as long as every step divides exactly). A common zero
    /// valuation in the formal variable is stripped first, so ratios like
    /// `(1 - e^{-2x})/(1 - e^{-x})` divide.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self, GenusError> {
        let vden = rhs
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(GenusError::InexactClassDivision)?;
        if vden > 0 {
            let vnum = self.coeffs.iter().position(|c| !c.is_zero());
            match vnum {
                None => return Ok(XSeries::new(vec![QYSeries::zero(self.trunc()); self.len()])),
                Some(v) if v >= vden => {}
                Some(_) => return Err(GenusError::InexactClassDivision),
            }
        }
        let den: Vec<QYSeries> = rhs.coeffs[vden..].to_vec();
        let num: Vec<QYSeries> = self.coeffs[vden.min(self.len())..].to_vec();
        let den0 = &den[0];
        let mut coeffs = vec![QYSeries::zero(self.trunc()); self.len()];
        for k in 0..num.len() {
            let mut acc = num[k].clone();
            for j in 0..k {
                if k - j < den.len() {
                    acc = acc.sub(&coeffs[j].mul(&den[k - j])?)?;
                }
            }
            coeffs[k] = acc.div_exact(den0).map_err(|_| GenusError::InexactClassDivision)?;
        }
        Ok(XSeries { coeffs })
    }

    /// Substitute the formal variable by an integer multiple of itself.
    pub fn scale_variable(&self, k: i64) -> Self {
        let mut coeffs = Vec::with_capacity(self.len());
        let mut pow = GaussianRational::one();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                pow = pow * GaussianRational::from_int(k);
            }
            coeffs.push(c.scale(&pow));
        }
        XSeries { coeffs }
    }

    /// Substitute a scalar for `y` in every coefficient.
    pub fn subst_y(&self, v: &GaussianRational) -> Result<Self, GenusError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.subst_y(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(XSeries { coeffs })
    }

    pub fn pow(&self, e: i64) -> Result<Self, GenusError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = XSeries::one(self.len(), self.trunc());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Evaluate at a nilpotent class.
    pub fn eval(&self, class: &CohomClass) -> Result<CohomClass, GenusError> {
        if !class.is_nilpotent() {
            return Err(GenusError::NotNilpotent);
        }
        let mut acc = CohomClass::constant_like(class, self.coeffs[0].clone());
        let mut power = CohomClass::constant_like(class, QYSeries::one(class.trunc()));
        for c in self.coeffs.iter().skip(1) {
            power = power.mul(class);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(c));
        }
        Ok(acc)
    }
}

/// `e^{a x}` as a truncated series.
pub fn exp_series(len: usize, trunc: u32, a: GaussianRational) -> XSeries {
    let mut coeffs = Vec::with_capacity(len);
    let mut acc = GaussianRational::one();
    for k in 0..len {
        if k > 0 {
            acc = acc * a.clone() * GaussianRational::from_ratio(1, k as i64).clone();
        }
        coeffs.push(QYSeries::constant(trunc, acc.clone()));
    }
    XSeries::new(coeffs)
}

/// The Todd series `x / (1 - e^{-x})`.
pub fn todd_series(len: usize, trunc: u32) -> Result<XSeries, GenusError> {
    // (1 - e^{-x}) / x = sum_{k>=0} (-1)^k x^k / (k+1)!
    let mut denom = Vec::with_capacity(len);
    let mut factorial = GaussianRational::one();
    for k in 0..len {
        factorial = factorial * GaussianRational::from_int((k + 1) as i64);
        let mut c = factorial.inv().expect("nonzero factorial");
        if k % 2 == 1 {
            c = -c;
        }
        denom.push(QYSeries::constant(trunc, c));
    }
    XSeries::new(denom).invert()
}

/// `x/2 / sinh(x/2)` as a truncated series.
pub fn x_over_sinh_series(len: usize, trunc: u32) -> Result<XSeries, GenusError> {
    // sinh(x/2)/(x/2) = sum_k (x/2)^{2k} / (2k+1)!
    let mut denom = vec![QYSeries::zero(trunc); len];
    let mut k = 0usize;
    loop {
        let e = 2 * k;
        if e >= len {
            break;
        }
        let mut c = GaussianRational::one();
        for j in 1..=(2 * k + 1) as i64 {
            c = c * GaussianRational::from_ratio(1, j);
        }
        for _ in 0..e {
            c = c * GaussianRational::from_ratio(1, 2);
        }
        denom[e] = QYSeries::constant(trunc, c);
        k += 1;
    }
    XSeries::new(denom).invert()
}

/// `2 sinh(x/2)` as a truncated series.
pub fn two_sinh_half_series(len: usize, trunc: u32) -> XSeries {
    let mut coeffs = vec![QYSeries::zero(trunc); len];
    let mut k = 0usize;
    loop {
        let e = 2 * k + 1;
        if e >= len {
            break;
        }
        let mut c = GaussianRational::from_int(2);
        for j in 1..=e as i64 {
            c = c * GaussianRational::from_ratio(1, j);
        }
        for _ in 0..e {
            c = c * GaussianRational::from_ratio(1, 2);
        }
        coeffs[e] = QYSeries::constant(trunc, c);
        k += 1;
    }
    XSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn todd_genus_of_projective_spaces() {
        // int Td(T CPn) = 1 for n = 1, 2, 3
        for n in 1..=3u32 {
            let model = CohomModel::cp(n);
            let trunc = 0;
            let tm = model.tangent_bundle(trunc);
            let len = model.dim() as usize + 1;
            let td = todd_series(len, trunc).unwrap();
            let mut acc = CohomClass::one(&model, trunc);
            for l in &tm.lines {
                let f = td.eval(&l.class).unwrap();
                let p = if l.mult >= 0 {
                    f.pow(l.mult as u32)
                } else {
                    f.invert().unwrap().pow((-l.mult) as u32)
                };
                acc = acc.mul(&p);
            }
            let integral = acc.integrate();
            assert_eq!(
                integral.coefficient(0, 0),
                GaussianRational::one(),
                "todd genus cp{n}"
            );
        }
    }

    #[test]
    fn euler_numbers_from_total_chern() {
        let cases = [
            (CohomModel::cp(1), 2),
            (CohomModel::cp(2), 3),
            (CohomModel::cp(3), 4),
            (CohomModel::cp_x_cp(1, 1), 4),
        ];
        for (model, chi) in cases {
            let tm = model.tangent_bundle(0);
            let c = tm.total_chern(&model, 0).unwrap();
            assert_eq!(
                c.integrate().coefficient(0, 0),
                GaussianRational::from_int(chi),
                "chi {model}"
            );
        }
    }

    #[test]
    fn class_division_cancels_products() {
        let model = CohomModel::cp(2);
        let trunc = 2;
        let x = CohomClass::generator(&model, trunc, 0);
        let a = CohomClass::one(&model, trunc).add(&x);
        let b = CohomClass::one(&model, trunc)
            .add(&x.scale(&QYSeries::monomial(trunc, 1, 1, GaussianRational::from_int(3))));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
    }

    #[test]
    fn division_by_one_minus_y_class() {
        // (1 - y e^{-x})^2 / (1 - y) on cp1 equals 1 - y + 2yx
        let model = CohomModel::cp(1);
        let trunc = 0;
        let x = CohomClass::generator(&model, trunc, 0);
        let y = QYSeries::monomial(trunc, 0, 1, GaussianRational::one());
        let e_neg = exp_series(2, trunc, GaussianRational::from_int(-1))
            .eval(&x)
            .unwrap();
        let factor = CohomClass::one(&model, trunc).sub(&e_neg.scale(&y));
        let num = factor.mul(&factor);
        let den = CohomClass::constant(
            &model,
            trunc,
            QYSeries::one(trunc).sub(&y).unwrap(),
        );
        let quot = num.div_exact(&den).unwrap();
        let expect = CohomClass::one(&model, trunc)
            .sub(&CohomClass::constant(&model, trunc, y.clone()))
            .add(&x.scale(&y.scale(&GaussianRational::from_int(2))));
        assert_eq!(quot, expect);
    }
}
