//! Differential forms on a super-chart, with the Cartan calculus.
//!
//! A form is stored as a map from canonical basis words
//! `db^{i_1} ... db^{i_n}` to polynomial coefficients written on the left.
//! Sign rule: `db^i` carries cohomological degree 1 and the parity of
//! `b^i`, and two factors `x`, `y` commute up to
//! `(-1)^{deg(x)deg(y) + |x||y|}`. Concretely, differentials of two odd
//! coordinates commute (their symmetric squares survive), every other pair
//! of differentials anticommutes, and a differential of an even coordinate
//! squares to zero.
//!
//! Two evaluation maps coexist and differ by `eps_j` on the basis:
//! the geometric contraction `contract` (with `i_{d_j} db^i = delta^i_j`),
//! which enters the Cartan relation, and the pairing `pair` (with
//! `db^i(d_j) = eps_j delta^i_j`), which is the one the vertex-algebra
//! side dictates. Both are calibrated by unit tests against the Fock
//! realization.

use super::{ChartError, ChartSignature, Parity, SuperPolynomial, SuperVectorField};
use crate::scalars::GaussianRational;
use std::collections::BTreeMap;
use std::fmt;

/// Canonical basis word of differentials: sorted indices; indices of even
/// coordinates occur at most once, indices of odd coordinates may repeat.
pub type FormWord = Vec<usize>;

/// Parity carried by a word (sum of coordinate parities of its factors).
fn word_parity(sig: ChartSignature, w: &[usize]) -> Parity {
    Parity::from_count(w.iter().filter(|&&i| i >= sig.p).count())
}

/// Sort a word into canonical order, tracking the sign. `None` means the
/// word vanishes (a repeated even-coordinate differential).
fn normalize_word(sig: ChartSignature, mut w: Vec<usize>) -> Option<(FormWord, i8)> {
    let mut sign = 1i8;
    // insertion sort; adjacent swap of (a, b) costs -1 unless both odd
    for k in 1..w.len() {
        let mut j = k;
        while j > 0 && w[j - 1] > w[j] {
            if !(w[j - 1] >= sig.p && w[j] >= sig.p) {
                sign = -sign;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    for k in 1..w.len() {
        if w[k] == w[k - 1] && w[k] < sig.p {
            return None;
        }
    }
    Some((w, sign))
}

/// A homogeneous-degree differential form with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperForm {
    sig: ChartSignature,
    degree: usize,
    terms: BTreeMap<FormWord, SuperPolynomial>,
}

impl SuperForm {
    pub fn zero(sig: ChartSignature, degree: usize) -> Self {
        SuperForm { sig, degree, terms: BTreeMap::new() }
    }

    pub fn from_fn(f: SuperPolynomial) -> Self {
        let sig = f.signature();
        let mut out = SuperForm::zero(sig, 0);
        out.insert(Vec::new(), f);
        out
    }

    /// The basis one-form `db^i`.
    pub fn basis_one_form(sig: ChartSignature, i: usize) -> Self {
        let mut out = SuperForm::zero(sig, 1);
        out.insert(vec![i], SuperPolynomial::one(sig));
        out
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormWord, &SuperPolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[usize]) -> SuperPolynomial {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| SuperPolynomial::zero(self.sig))
    }

    /// As a polynomial; only valid in degree 0.
    pub fn into_poly(&self) -> SuperPolynomial {
        assert_eq!(self.degree, 0, "into_poly on positive-degree form");
        self.coefficient(&[])
    }

    pub fn insert(&mut self, w: FormWord, c: SuperPolynomial) {
        debug_assert_eq!(w.len(), self.degree);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
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

    /// Insert an arbitrary word, normalizing it first.
    pub fn insert_raw(&mut self, w: Vec<usize>, c: SuperPolynomial) {
        if let Some((word, sign)) = normalize_word(self.sig, w) {
            let c = if sign < 0 { c.neg() } else { c };
            self.insert(word, c);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "form degree mismatch in add");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect();
        SuperForm { sig: self.sig, degree: self.degree, terms }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = SuperForm::zero(self.sig, self.degree);
        for (w, v) in &self.terms {
            out.insert(w.clone(), v.scale(c));
        }
        out
    }

    /// Left multiplication by a function (no sign: coefficients sit left).
    pub fn mul_fn(&self, f: &SuperPolynomial) -> Self {
        let mut out = SuperForm::zero(self.sig, self.degree);
        for (w, v) in &self.terms {
            out.insert(w.clone(), f.mul(v));
        }
        out
    }

    /// Wedge product. The right coefficient moves left past the left word,
    /// contributing `(-1)^{|m2| * parity(w1)}` per monomial.
    pub fn wedge(&self, rhs: &Self) -> Self {
        let mut out = SuperForm::zero(self.sig, self.degree + rhs.degree);
        for (w1, f1) in &self.terms {
            let p1 = word_parity(self.sig, w1);
            for (w2, f2) in &rhs.terms {
                for (m2, c2) in f2.terms() {
                    let mut coeff =
                        SuperPolynomial::from_terms(self.sig, [(m2.clone(), c2.clone())]);
                    if m2.parity().koszul(p1) < 0 {
                        coeff = coeff.neg();
                    }
                    let mut word = w1.clone();
                    word.extend_from_slice(w2);
                    out.insert_raw(word, f1.mul(&coeff));
                }
            }
        }
        out
    }

    /// Total parity (coefficient parity plus word parity) if homogeneous.
    pub fn parity(&self) -> Option<Parity> {
        let mut found: Option<Parity> = None;
        for (w, c) in &self.terms {
            let wp = word_parity(self.sig, w);
            let cp = c.parity()?;
            let total = wp.combine(cp);
            match found {
                None => found = Some(total),
                Some(p) if p == total => {}
                _ => return None,
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = SuperForm::zero(self.sig, self.degree + 1);
        for (w, f) in &self.terms {
            let df = d_poly(f);
            out = out.add(&df.wedge(&SuperForm::word_form(self.sig, w.clone())));
        }
        out
    }

    fn word_form(sig: ChartSignature, w: FormWord) -> SuperForm {
        let mut out = SuperForm::zero(sig, w.len());
        out.insert(w, SuperPolynomial::one(sig));
        out
    }

    /// Geometric contraction `i_X`, leftmost slot first.
    pub fn contract(&self, x: &SuperVectorField) -> Self {
        assert!(self.degree > 0, "contract on a 0-form");
        let mut out = SuperForm::zero(self.sig, self.degree - 1);
        for j in 0..self.sig.n() {
            let xj = x.component(j);
            if xj.is_zero() {
                continue;
            }
            let contracted = self.contract_basis(j);
            out = out.add(&contracted.mul_fn(xj));
        }
        out
    }

    /// `i_{d_j}` on each term: passes the coefficient with
    /// `(-1)^{A_j |mono|}`, and each differential with `(-1)^{1 + A_j A_a}`.
    fn contract_basis(&self, j: usize) -> Self {
        let aj = self.sig.parity(j);
        let mut out = SuperForm::zero(self.sig, self.degree - 1);
        for (w, f) in &self.terms {
            for (mono, c) in f.terms() {
                let coeff_sign = aj.koszul(mono.parity());
                let mut run = 1i8;
                for (k, &idx) in w.iter().enumerate() {
                    if idx == j {
                        let mut word = w.clone();
                        word.remove(k);
                        let mut v =
                            SuperPolynomial::from_terms(self.sig, [(mono.clone(), c.clone())]);
                        if coeff_sign * run < 0 {
                            v = v.neg();
                        }
                        out.insert(word, v);
                    }
                    // sign to pass i_{d_j} over db^{idx}
                    let pass = if aj.is_odd() && self.sig.parity(idx).is_odd() {
                        1i8
                    } else {
                        -1i8
                    };
                    run *= pass;
                }
            }
        }
        out
    }

    /// Vertex-algebra pairing of a one-form with a vector field:
    /// `(g db^i)(d_j) = eps_j g delta^i_j`, with the module rule
    /// `alpha(fY) = (-1)^{|alpha||f|} f alpha(Y)` forced by the free-field
    /// realization.
    pub fn pair(&self, x: &SuperVectorField) -> Result<SuperPolynomial, ChartError> {
        if self.degree != 1 {
            return Err(ChartError::DegreeMismatch(1, self.degree));
        }
        let mut out = SuperPolynomial::zero(self.sig);
        for (w, g) in &self.terms {
            let i = w[0];
            let xi = x.component(i);
            if xi.is_zero() {
                continue;
            }
            for (gm, gc) in g.terms() {
                let alpha_par = gm.parity().combine(self.sig.parity(i));
                let gterm = SuperPolynomial::from_terms(self.sig, [(gm.clone(), gc.clone())]);
                for (xm, xc) in xi.terms() {
                    let mut v = SuperPolynomial::from_terms(self.sig, [(xm.clone(), xc.clone())])
                        .mul(&gterm);
                    if self.sig.eps(i) < 0 {
                        v = v.neg();
                    }
                    if alpha_par.koszul(xm.parity()) < 0 {
                        v = v.neg();
                    }
                    out = out.add(&v);
                }
            }
        }
        Ok(out)
    }

    /// Lie derivative along `X` as a Leibniz-rule derivation: `L_X f = Xf`
    /// and `L_X db^i = d(X^i)`. The Cartan relation with `d` and `contract`
    /// is a theorem checked in tests, not a definition.
    pub fn lie_derivative(&self, x: &SuperVectorField) -> Self {
        let xp = x.parity();
        let mut out = SuperForm::zero(self.sig, self.degree);
        // differentials of the components, computed once
        let dcomp: Vec<SuperForm> = (0..self.sig.n()).map(|i| d_poly(x.component(i))).collect();
        for (w, f) in &self.terms {
            // (Xf) . w
            out.insert(w.clone(), x.apply(f));
            for (mono, c) in f.terms() {
                let mp = mono.parity();
                let mut prefix_parity = Parity::Even;
                for (k, &idx) in w.iter().enumerate() {
                    let outer = xp.koszul(mp.combine(prefix_parity));
                    // replace slot k by d(X^{idx})
                    for (w2, g) in dcomp[idx].terms() {
                        for (m2, c2) in g.terms() {
                            // move the new coefficient left past w[..k]
                            let move_sign = m2.parity().koszul(prefix_parity);
                            let mut word: Vec<usize> = w[..k].to_vec();
                            word.push(w2[0]);
                            word.extend_from_slice(&w[k + 1..]);
                            let mut coeff = SuperPolynomial::from_terms(
                                self.sig,
                                [(mono.clone(), c.clone())],
                            )
                            .mul(&SuperPolynomial::from_terms(
                                self.sig,
                                [(m2.clone(), c2.clone())],
                            ));
                            if outer * move_sign < 0 {
                                coeff = coeff.neg();
                            }
                            out.insert_raw(word, coeff);
                        }
                    }
                    prefix_parity = prefix_parity.combine(self.sig.parity(idx));
                }
            }
        }
        out
    }

    /// Map coefficients (formal conjugation support).
    pub fn map_coeffs(&self, f: impl Fn(&SuperPolynomial) -> SuperPolynomial) -> Self {
        let mut out = SuperForm::zero(self.sig, self.degree);
        for (w, c) in &self.terms {
            out.insert(w.clone(), f(c));
        }
        out
    }

    /// Pull back along a polynomial map given by images of coordinates:
    /// coefficients are substituted and each `db^i` becomes `d(phi^i)`.
    pub fn pullback(&self, images: &[SuperPolynomial]) -> SuperForm {
        let sig = images.first().map(|p| p.signature()).unwrap_or(self.sig);
        let dimg: Vec<SuperForm> = images.iter().map(d_poly).collect();
        let mut out = SuperForm::zero(sig, self.degree);
        for (w, f) in &self.terms {
            let mut acc = SuperForm::from_fn(f.substitute(images));
            for &idx in w {
                acc = acc.wedge(&dimg[idx]);
            }
            out = out.add(&acc);
        }
        out
    }
}

/// Exterior derivative of a function: per monomial `m`,
/// `d m = sum_i (-1)^{A_i(|m|+1)} (d_i m) db^i`.
pub fn d_poly(f: &SuperPolynomial) -> SuperForm {
    let sig = f.signature();
    let mut out = SuperForm::zero(sig, 1);
    for (mono, c) in f.terms() {
        let single = SuperPolynomial::from_terms(sig, [(mono.clone(), c.clone())]);
        let mp = mono.parity();
        for i in 0..sig.n() {
            let pi = single.partial(i).expect("index");
            if pi.is_zero() {
                continue;
            }
            let sign = if sig.parity(i).is_odd() && mp == Parity::Even {
                // (-1)^{A_i(|m|+1)} with |m| even
                -1i8
            } else {
                1i8
            };
            let v = if sign < 0 { pi.neg() } else { pi };
            out.insert(vec![i], v);
        }
    }
    out
}

/// Build the one-form with prescribed geometric contractions
/// `i_{d_j} beta = values[j]`.
pub fn one_form_from_contractions(
    sig: ChartSignature,
    values: &[SuperPolynomial],
) -> SuperForm {
    let mut out = SuperForm::zero(sig, 1);
    for (j, c) in values.iter().enumerate() {
        for (mono, v) in c.terms() {
            let mut coeff = SuperPolynomial::from_terms(sig, [(mono.clone(), v.clone())]);
            if sig.parity(j).koszul(mono.parity()) < 0 {
                coeff = coeff.neg();
            }
            out.insert(vec![j], coeff);
        }
    }
    out
}

/// Build the one-form with prescribed pairings `beta(d_j) = values[j]`.
pub fn values_to_one_form(sig: ChartSignature, values: &[SuperPolynomial]) -> SuperForm {
    let mut out = SuperForm::zero(sig, 1);
    for (j, c) in values.iter().enumerate() {
        let mut coeff = c.clone();
        if sig.eps(j) < 0 {
            coeff = coeff.neg();
        }
        out.insert(vec![j], coeff);
    }
    out
}

impl fmt::Display for SuperForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for &i in w {
                write!(f, "*d(b{})", i + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigp(p: usize, q: usize) -> ChartSignature {
        ChartSignature::new(p, q)
    }

    fn b(sig: ChartSignature, i: usize) -> SuperPolynomial {
        SuperPolynomial::coordinate(sig, i)
    }

    fn db(sig: ChartSignature, i: usize) -> SuperForm {
        SuperForm::basis_one_form(sig, i)
    }

    #[test]
    fn pairing_basis_values() {
        let sig = sigp(1, 1);
        let d1 = SuperVectorField::basis(sig, 0);
        let d2 = SuperVectorField::basis(sig, 1);
        assert_eq!(db(sig, 0).pair(&d1).unwrap(), SuperPolynomial::one(sig));
        assert_eq!(db(sig, 1).pair(&d2).unwrap(), SuperPolynomial::one(sig).neg());
        assert!(db(sig, 0).pair(&d2).unwrap().is_zero());
    }

    #[test]
    fn d_of_b1_db2() {
        // d(b1 db2) = db1 ^ db2 on an even chart
        let sig = sigp(2, 0);
        let w = db(sig, 1).mul_fn(&b(sig, 0));
        let expect = db(sig, 0).wedge(&db(sig, 1));
        assert_eq!(w.d(), expect);
    }

    #[test]
    fn d_squared_zero() {
        let sig = sigp(2, 2);
        let f = b(sig, 0)
            .mul(&b(sig, 2))
            .add(&b(sig, 1).mul(&b(sig, 3)).mul(&b(sig, 0)))
            .add(&b(sig, 2).mul(&b(sig, 3)));
        assert!(d_poly(&f).d().is_zero());
        // also on a one-form with polynomial coefficients
        let alpha = db(sig, 2).mul_fn(&f).add(&db(sig, 0).mul_fn(&b(sig, 3)));
        assert!(alpha.d().d().is_zero());
    }

    #[test]
    fn odd_differential_square_survives() {
        // d(b2 db2) = db2 ^ db2 != 0 for odd b2
        let sig = sigp(1, 1);
        let w = db(sig, 1).mul_fn(&b(sig, 1));
        let d = w.d();
        let expect = db(sig, 1).wedge(&db(sig, 1));
        assert_eq!(d, expect);
        assert!(!d.is_zero());
    }

    #[test]
    fn even_differential_square_dies() {
        let sig = sigp(2, 0);
        assert!(db(sig, 0).wedge(&db(sig, 0)).is_zero());
    }

    #[test]
    fn contraction_antiderivation_example() {
        // i_{d2}(db1 ^ db2 ^ db3) = -db1 ^ db3 on A^{3|0}
        let sig = sigp(3, 0);
        let h = db(sig, 0).wedge(&db(sig, 1)).wedge(&db(sig, 2));
        let x = SuperVectorField::basis(sig, 1);
        let expect = db(sig, 0).wedge(&db(sig, 2)).neg();
        assert_eq!(h.contract(&x), expect);
    }

    #[test]
    fn double_contraction_oracle() {
        // i_{d1} i_{d2} (db1^db2^db3) = -db3
        let sig = sigp(3, 0);
        let h = db(sig, 0).wedge(&db(sig, 1)).wedge(&db(sig, 2));
        let x1 = SuperVectorField::basis(sig, 0);
        let x2 = SuperVectorField::basis(sig, 1);
        assert_eq!(h.contract(&x2).contract(&x1), db(sig, 2).neg());
    }

    #[test]
    fn lie_derivative_euler_on_db1() {
        // L_{b1 d1}(db1) = db1
        let sig = sigp(1, 0);
        let x = SuperVectorField::new(sig, vec![b(sig, 0)], Parity::Even).unwrap();
        assert_eq!(db(sig, 0).lie_derivative(&x), db(sig, 0));
    }

    fn random_field(sig: ChartSignature, seed: u64, parity: Parity) -> SuperVectorField {
        // tiny deterministic generator for tests
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % 5) as i64 - 2
        };
        let mut comps = Vec::new();
        for i in 0..sig.n() {
            let want = parity.combine(sig.parity(i));
            let mut c = SuperPolynomial::zero(sig);
            for j in 0..sig.n() {
                let coef = next();
                if coef == 0 {
                    continue;
                }
                let m = b(sig, j);
                if m.parity() == Some(want) {
                    c = c.add(&m.scale(&GaussianRational::from_int(coef)));
                }
                let mj = b(sig, j).mul(&b(sig, (j + 1) % sig.n()));
                if !mj.is_zero() && mj.parity() == Some(want) {
                    c = c.add(&mj.scale(&GaussianRational::from_int(next())));
                }
            }
            if want == Parity::Even {
                c = c.add(&SuperPolynomial::constant(sig, GaussianRational::from_int(next())));
            }
            comps.push(c);
        }
        SuperVectorField::new(sig, comps, parity).unwrap()
    }

    #[test]
    fn cartan_relation() {
        // L_X = d i_X + i_X d on assorted forms and parities
        for (p, q) in [(2, 0), (1, 1), (2, 2), (0, 2)] {
            let sig = sigp(p, q);
            for (seed, parity) in [(1, Parity::Even), (2, Parity::Odd), (5, Parity::Even)] {
                let x = random_field(sig, seed, parity);
                let f = b(sig, 0).mul(&b(sig, sig.n() - 1)).add(&b(sig, 0));
                let omega = d_poly(&f)
                    .wedge(&db(sig, sig.n() - 1))
                    .add(&db(sig, 0).wedge(&db(sig, sig.n() - 1)).mul_fn(&f));
                let lhs = omega.lie_derivative(&x);
                let rhs = omega.contract(&x).d().add(&omega.d().contract(&x));
                assert_eq!(lhs, rhs, "cartan p={p} q={q} seed={seed}");
                // and on 1-forms
                let alpha = d_poly(&f).mul_fn(&b(sig, sig.n() - 1)).add(&db(sig, 0));
                let lhs = alpha.lie_derivative(&x);
                let rhs = alpha.contract(&x).d().add(&alpha.d().contract(&x));
                assert_eq!(lhs, rhs, "cartan-1form p={p} q={q} seed={seed}");
            }
        }
    }

    #[test]
    fn even_contraction_squares_to_zero() {
        let sig = sigp(2, 2);
        let x = random_field(sig, 7, Parity::Even);
        let f = b(sig, 0).mul(&b(sig, 2));
        let omega = d_poly(&f).wedge(&db(sig, 1)).wedge(&db(sig, 3));
        assert!(omega.contract(&x).contract(&x).is_zero());
    }

    #[test]
    fn pullback_composes_with_d() {
        // phi^*(d omega) = d(phi^* omega) for the shear
        let sig = sigp(2, 0);
        let images = vec![b(sig, 0).add(&b(sig, 1).mul(&b(sig, 1))), b(sig, 1)];
        let omega = db(sig, 1).mul_fn(&b(sig, 0));
        assert_eq!(omega.d().pullback(&images), omega.pullback(&images).d());
    }

    #[test]
    fn one_form_reconstruction() {
        let sig = sigp(1, 2);
        let vals = vec![b(sig, 1), b(sig, 0), b(sig, 1).mul(&b(sig, 2))];
        let beta = values_to_one_form(sig, &vals);
        for j in 0..3 {
            assert_eq!(
                beta.pair(&SuperVectorField::basis(sig, j)).unwrap(),
                vals[j],
                "pair slot {j}"
            );
        }
        let beta2 = one_form_from_contractions(sig, &vals);
        for j in 0..3 {
            assert_eq!(
                beta2.contract(&SuperVectorField::basis(sig, j)).into_poly(),
                vals[j],
                "contraction slot {j}"
            );
        }
    }
}
