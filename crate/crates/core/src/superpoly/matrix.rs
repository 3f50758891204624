//! Square matrices of forms over a chart: `gl(p|q)`-valued forms and
//! endomorphism-valued forms in the coordinate frame.
//!
//! Two products coexist. `mul` is the plain matrix wedge product
//! `(AB)^k_i = sum_j A^k_j ^ B^j_i`, the one used for curvature,
//! Chern-Simons and Maurer-Cartan expressions. `op_mul` is composition of
//! endomorphisms written with left coefficients, `(U o V)(d_i) =
//! U(V^j_i d_j)`; passing an operator of intrinsic parity `pi` over a
//! coefficient of parity `c` costs `(-1)^{pi c}`, which matters as soon as
//! odd operators (such as the covariant differential of an odd vector
//! field) enter supertrace identities.

use super::form::SuperForm;
use super::{ChartError, ChartSignature, Parity, SuperPolynomial, SuperVectorField};
use crate::scalars::GaussianRational;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixForm {
    sig: ChartSignature,
    degree: usize,
    entries: Vec<Vec<SuperForm>>,
}

impl MatrixForm {
    pub fn zero(sig: ChartSignature, degree: usize) -> Self {
        let n = sig.n();
        let entries = (0..n)
            .map(|_| (0..n).map(|_| SuperForm::zero(sig, degree)).collect())
            .collect();
        MatrixForm { sig, degree, entries }
    }

    pub fn identity(sig: ChartSignature) -> Self {
        let mut m = MatrixForm::zero(sig, 0);
        for i in 0..sig.n() {
            m.entries[i][i] = SuperForm::from_fn(SuperPolynomial::one(sig));
        }
        m
    }

    pub fn from_entries(
        sig: ChartSignature,
        degree: usize,
        entries: Vec<Vec<SuperForm>>,
    ) -> Self {
        assert_eq!(entries.len(), sig.n());
        for row in &entries {
            assert_eq!(row.len(), sig.n());
            for e in row {
                assert_eq!(e.degree(), degree);
            }
        }
        MatrixForm { sig, degree, entries }
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Entry in row `k`, column `i` (output index first).
    pub fn entry(&self, k: usize, i: usize) -> &SuperForm {
        &self.entries[k][i]
    }

    pub fn set_entry(&mut self, k: usize, i: usize, v: SuperForm) {
        assert_eq!(v.degree(), self.degree);
        self.entries[k][i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.add(b)).collect())
            .collect();
        MatrixForm { sig: self.sig, degree: self.degree, entries }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.neg()).collect())
            .collect();
        MatrixForm { sig: self.sig, degree: self.degree, entries }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.scale(c)).collect())
            .collect();
        MatrixForm { sig: self.sig, degree: self.degree, entries }
    }

    /// Plain matrix wedge product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.sig.n();
        let mut out = MatrixForm::zero(self.sig, self.degree + rhs.degree);
        for k in 0..n {
            for i in 0..n {
                let mut acc = SuperForm::zero(self.sig, self.degree + rhs.degree);
                for j in 0..n {
                    acc = acc.add(&self.entries[k][j].wedge(&rhs.entries[j][i]));
                }
                out.entries[k][i] = acc;
            }
        }
        out
    }

    /// Endomorphism composition `self o rhs` where `self` has intrinsic
    /// parity `self_parity`: `(U o V)^k_i = sum_j +-(V^j_i ^ U^k_j)` with
    /// the sign `(-1)^{|U| * par(term of V^j_i)}`.
    pub fn op_mul(&self, self_parity: Parity, rhs: &Self) -> Self {
        let n = self.sig.n();
        let mut out = MatrixForm::zero(self.sig, self.degree + rhs.degree);
        for k in 0..n {
            for i in 0..n {
                let mut acc = SuperForm::zero(self.sig, self.degree + rhs.degree);
                for j in 0..n {
                    let v = &rhs.entries[j][i];
                    if v.is_zero() {
                        continue;
                    }
                    for part in split_by_parity(v) {
                        let sign = self_parity.koszul(part.1);
                        let term = part.0.wedge(&self.entries[k][j]);
                        acc = acc.add(&if sign < 0 { term.neg() } else { term });
                    }
                }
                out.entries[k][i] = acc;
            }
        }
        out
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.d()).collect())
            .collect();
        MatrixForm { sig: self.sig, degree: self.degree + 1, entries }
    }

    /// Entrywise contraction with a vector field.
    pub fn contract(&self, x: &SuperVectorField) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.contract(x)).collect())
            .collect();
        MatrixForm { sig: self.sig, degree: self.degree - 1, entries }
    }

    /// Supertrace `sum_i eps_i M^i_i`, normalized so `Str(id) = p - q`.
    pub fn supertrace(&self) -> SuperForm {
        let mut out = SuperForm::zero(self.sig, self.degree);
        for i in 0..self.sig.n() {
            let t = &self.entries[i][i];
            out = out.add(&if self.sig.eps(i) < 0 { t.neg() } else { t.clone() });
        }
        out
    }

    /// Plain trace over a sub-range of indices (used for block traces).
    pub fn trace_range(&self, range: std::ops::Range<usize>) -> SuperForm {
        let mut out = SuperForm::zero(self.sig, self.degree);
        for i in range {
            out = out.add(&self.entries[i][i]);
        }
        out
    }

    /// Check the evenness convention `|M^i_j| = |b^i| + |b^j|` entrywise.
    pub fn is_even(&self) -> bool {
        for k in 0..self.sig.n() {
            for i in 0..self.sig.n() {
                let e = &self.entries[k][i];
                if e.is_zero() {
                    continue;
                }
                let want = self.sig.parity(k).combine(self.sig.parity(i));
                if e.parity() != Some(want) {
                    return false;
                }
            }
        }
        true
    }

    /// Intrinsic parity: `par(M^k_i) - |b^k| - |b^i|`, if homogeneous.
    pub fn intrinsic_parity(&self) -> Option<Parity> {
        let mut found: Option<Parity> = None;
        for k in 0..self.sig.n() {
            for i in 0..self.sig.n() {
                let e = &self.entries[k][i];
                if e.is_zero() {
                    continue;
                }
                let ep = e.parity()?;
                let pi = ep.combine(self.sig.parity(k)).combine(self.sig.parity(i));
                match found {
                    None => found = Some(pi),
                    Some(p) if p == pi => {}
                    _ => return None,
                }
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    /// Inverse of a degree-0 matrix whose constant part is invertible and
    /// whose variable part is nilpotent (true for Jacobians of polynomial
    /// diffeomorphisms and frame changes used here). Exactness is verified.
    pub fn inverse(&self) -> Result<Self, ChartError> {
        assert_eq!(self.degree, 0, "inverse only for degree-0 matrices");
        let n = self.sig.n();
        // constant part
        let mut c: Vec<Vec<GaussianRational>> =
            (0..n).map(|_| vec![GaussianRational::zero(); n]).collect();
        for k in 0..n {
            for i in 0..n {
                c[k][i] = self.entries[k][i].into_poly().constant_term();
            }
        }
        let cinv = invert_scalar_matrix(&c).ok_or(ChartError::NotInvertible)?;
        let cinv_m = {
            let mut m = MatrixForm::zero(self.sig, 0);
            for k in 0..n {
                for i in 0..n {
                    m.entries[k][i] = SuperForm::from_fn(SuperPolynomial::constant(
                        self.sig,
                        cinv[k][i].clone(),
                    ));
                }
            }
            m
        };
        let nil = cinv_m.mul(&self.sub(&{
            let mut cm = MatrixForm::zero(self.sig, 0);
            for k in 0..n {
                for i in 0..n {
                    cm.entries[k][i] =
                        SuperForm::from_fn(SuperPolynomial::constant(self.sig, c[k][i].clone()));
                }
            }
            cm
        }));
        // sum (-nil)^k . cinv, bounded by nilpotency
        let mut acc = MatrixForm::identity(self.sig);
        let mut pow = MatrixForm::identity(self.sig);
        let cap = 4 * (self.sig.n() + 1) * (self.sig.q + 1);
        for _ in 0..cap {
            pow = pow.mul(&nil).neg();
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        let inv = acc.mul(&cinv_m);
        let id = MatrixForm::identity(self.sig);
        if self.mul(&inv) != id || inv.mul(self) != id {
            return Err(ChartError::NotInvertible);
        }
        Ok(inv)
    }
}

/// Split a form into parity-homogeneous pieces `(form, parity)`.
fn split_by_parity(f: &SuperForm) -> Vec<(SuperForm, Parity)> {
    let sig = f.signature();
    let mut even = SuperForm::zero(sig, f.degree());
    let mut odd = SuperForm::zero(sig, f.degree());
    for (w, c) in f.terms() {
        let wp = Parity::from_count(w.iter().filter(|&&i| i >= sig.p).count());
        for (m, v) in c.terms() {
            let total = wp.combine(m.parity());
            let single = SuperPolynomial::from_terms(sig, [(m.clone(), v.clone())]);
            match total {
                Parity::Even => even.insert(w.clone(), single),
                Parity::Odd => odd.insert(w.clone(), single),
            }
        }
    }
    let mut out = Vec::new();
    if !even.is_zero() {
        out.push((even, Parity::Even));
    }
    if !odd.is_zero() {
        out.push((odd, Parity::Odd));
    }
    out
}

fn invert_scalar_matrix(m: &[Vec<GaussianRational>]) -> Option<Vec<Vec<GaussianRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<GaussianRational>> = m.to_vec();
    let mut inv: Vec<Vec<GaussianRational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        let pinv = p.inv().ok()?;
        for j in 0..n {
            a[col][j] = a[col][j].clone() * pinv.clone();
            inv[col][j] = inv[col][j].clone() * pinv.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].clone() - factor.clone() * a[col][j].clone();
                inv[r][j] = inv[r][j].clone() - factor.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}

impl fmt::Display for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.entries.iter().enumerate() {
            write!(f, "row {}: ", k + 1)?;
            let parts: Vec<String> = row.iter().map(|e| format!("{e}")).collect();
            writeln!(f, "[{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(sig: ChartSignature, i: usize) -> SuperPolynomial {
        SuperPolynomial::coordinate(sig, i)
    }

    #[test]
    fn str_identity_is_p_minus_q() {
        for (p, q) in [(2, 1), (1, 1), (0, 2), (3, 0)] {
            let sig = ChartSignature::new(p, q);
            let id = MatrixForm::identity(sig);
            let tr = id.supertrace().into_poly();
            assert_eq!(
                tr,
                SuperPolynomial::constant(sig, GaussianRational::from_int(p as i64 - q as i64))
            );
        }
    }

    #[test]
    fn str_off_diagonal_zero() {
        let sig = ChartSignature::new(1, 1);
        let mut m = MatrixForm::zero(sig, 1);
        m.set_entry(
            0,
            1,
            SuperForm::basis_one_form(sig, 1).scale(&GaussianRational::from_int(2)),
        );
        assert!(m.supertrace().is_zero());
    }

    #[test]
    fn shear_inverse() {
        // [[1, 2 b2],[0, 1]] -> [[1, -2 b2],[0, 1]] on A^{2|0}
        let sig = ChartSignature::new(2, 0);
        let mut m = MatrixForm::identity(sig);
        m.set_entry(0, 1, SuperForm::from_fn(b(sig, 1).scale(&GaussianRational::from_int(2))));
        let inv = m.inverse().unwrap();
        let mut expect = MatrixForm::identity(sig);
        expect.set_entry(
            0,
            1,
            SuperForm::from_fn(b(sig, 1).scale(&GaussianRational::from_int(-2))),
        );
        assert_eq!(inv, expect);
    }

    #[test]
    fn nilpotent_diagonal_inverse() {
        // diag(1, 1 + b2 b3) on A^{1|2}
        let sig = ChartSignature::new(1, 2);
        let nil = b(sig, 1).mul(&b(sig, 2));
        let mut m = MatrixForm::identity(sig);
        m.set_entry(1, 1, SuperForm::from_fn(SuperPolynomial::one(sig).add(&nil)));
        let inv = m.inverse().unwrap();
        let mut expect = MatrixForm::identity(sig);
        expect.set_entry(1, 1, SuperForm::from_fn(SuperPolynomial::one(sig).sub(&nil)));
        assert_eq!(inv, expect);
    }

    #[test]
    fn non_invertible_rejected() {
        let sig = ChartSignature::new(1, 0);
        // 1 + b1 has no polynomial inverse
        let mut m = MatrixForm::identity(sig);
        m.set_entry(0, 0, SuperForm::from_fn(SuperPolynomial::one(sig).add(&b(sig, 0))));
        assert!(m.inverse().is_err());
    }

    #[test]
    fn supertrace_cyclic_even_matrices() {
        // Str(AB) = (-1)^{deg A deg B} Str(BA) for even matrix forms
        let sig = ChartSignature::new(1, 1);
        let mk = |d: usize, seed: i64| {
            let mut m = MatrixForm::zero(sig, d);
            for k in 0..2 {
                for i in 0..2 {
                    // choose a coefficient of the right parity
                    let want = sig.parity(k).combine(sig.parity(i));
                    let base = if d == 1 {
                        SuperForm::basis_one_form(sig, 0)
                    } else {
                        SuperForm::from_fn(SuperPolynomial::one(sig))
                    };
                    // multiply by b2 if an odd total parity is required
                    let wp = if d == 1 { Parity::Even } else { Parity::Even };
                    let coeff = if want.combine(wp) == Parity::Odd {
                        b(sig, 1)
                    } else {
                        SuperPolynomial::one(sig)
                    };
                    let c = GaussianRational::from_int((seed + (2 * k + i) as i64) % 3 - 1);
                    m.set_entry(k, i, base.mul_fn(&coeff.scale(&c)));
                }
            }
            m
        };
        for (da, db_) in [(0usize, 0usize), (1, 0), (1, 1), (0, 1)] {
            let a = mk(da, 1);
            let bm = mk(db_, 2);
            assert!(a.is_even(), "a even");
            assert!(bm.is_even(), "b even");
            let lhs = a.mul(&bm).supertrace();
            let mut rhs = bm.mul(&a).supertrace();
            if (da * db_) % 2 == 1 {
                rhs = rhs.neg();
            }
            assert_eq!(lhs, rhs, "cyclicity deg {da},{db_}");
        }
    }
}
