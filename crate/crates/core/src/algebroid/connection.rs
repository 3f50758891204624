//! Affine connection data on a chart: connection form, curvature, covariant
//! derivatives of vector fields and endomorphisms, the Chern-Simons
//! three-form, and a polynomial homotopy inverse to `d`.
//!
//! The connection matrix follows the frame convention
//! `nabla d_i = eps_i eps_{ij} Gamma^j_i (x) d_j`, so evaluating along `Y`
//! contracts the entry: `nabla_Y d_i = eps_i eps_{ij} (i_Y Gamma^j_i) d_j`.

use crate::superpoly::form::{one_form_from_contractions, SuperForm};
use crate::superpoly::{
    ChartError, ChartSignature, MatrixForm, Parity, SuperPolynomial, SuperVectorField,
};

/// A connection form together with its curvature `R = dGamma + Gamma ^ Gamma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionData {
    gamma: MatrixForm,
    curvature: MatrixForm,
}

impl ConnectionData {
    pub fn new(gamma: MatrixForm) -> Result<Self, ChartError> {
        if gamma.degree() != 1 {
            return Err(ChartError::DegreeMismatch(1, gamma.degree()));
        }
        if !gamma.is_even() {
            return Err(ChartError::MixedParity);
        }
        let curvature = gamma.d().add(&gamma.mul(&gamma));
        Ok(ConnectionData { gamma, curvature })
    }

    pub fn flat(sig: ChartSignature) -> Self {
        ConnectionData {
            gamma: MatrixForm::zero(sig, 1),
            curvature: MatrixForm::zero(sig, 2),
        }
    }

    pub fn signature(&self) -> ChartSignature {
        self.gamma.signature()
    }

    pub fn gamma(&self) -> &MatrixForm {
        &self.gamma
    }

    pub fn curvature(&self) -> &MatrixForm {
        &self.curvature
    }

    /// Bianchi-type identity `dR = R ^ Gamma - Gamma ^ R`, exact.
    pub fn bianchi_holds(&self) -> bool {
        let lhs = self.curvature.d();
        let rhs = self.curvature.mul(&self.gamma).sub(&self.gamma.mul(&self.curvature));
        lhs == rhs
    }

    /// Covariant derivative of the coordinate field `d_i` along `Y`.
    fn nabla_basis(&self, y: &SuperVectorField, i: usize) -> SuperVectorField {
        let sig = self.signature();
        let mut comps: Vec<SuperPolynomial> =
            (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
        for j in 0..sig.n() {
            let entry = self.gamma.entry(j, i);
            if entry.is_zero() {
                continue;
            }
            let mut c = entry.contract(y).into_poly();
            if sig.eps(i) * sig.eps_pair(i, j) < 0 {
                c = c.neg();
            }
            comps[j] = comps[j].add(&c);
        }
        let parity = sig.parity(i).combine(y.parity());
        SuperVectorField::new(sig, comps, parity).expect("connection parity")
    }

    /// Covariant derivative `nabla_Y X`.
    pub fn nabla_vf(&self, y: &SuperVectorField, x: &SuperVectorField) -> SuperVectorField {
        let sig = self.signature();
        let mut out = SuperVectorField::zero(sig, y.parity().combine(x.parity()));
        // Y(X^i) d_i
        let comps: Vec<SuperPolynomial> =
            (0..sig.n()).map(|i| y.apply(x.component(i))).collect();
        out = out.add(
            &SuperVectorField::new(sig, comps, y.parity().combine(x.parity()))
                .expect("derivative parity"),
        );
        // (-1)^{|Y||X^i|} X^i nabla_Y d_i
        for i in 0..sig.n() {
            let xi = x.component(i);
            if xi.is_zero() {
                continue;
            }
            let mut term = self.nabla_basis(y, i).scale_fn(xi).expect("parity");
            if y.parity().koszul(x.parity().combine(sig.parity(i))) < 0 {
                term = term.neg();
            }
            out = out.add(&term);
        }
        out
    }

    /// Matrix of the endomorphism `X' := nabla_- X - [X, -]` in the
    /// coordinate frame: `W^j_i = (-1)^{|X| |b^i|} d_i X^j
    /// + eps_i eps_{ij} i_X Gamma^j_i`.
    pub fn tilde_nabla(&self, x: &SuperVectorField) -> MatrixForm {
        let sig = self.signature();
        let xp = x.parity();
        let mut w = MatrixForm::zero(sig, 0);
        for j in 0..sig.n() {
            for i in 0..sig.n() {
                let mut c = x.component(j).partial(i).expect("index");
                if xp.koszul(sig.parity(i)) < 0 {
                    c = c.neg();
                }
                let entry = self.gamma.entry(j, i);
                if !entry.is_zero() {
                    let mut g = entry.contract(x).into_poly();
                    if sig.eps(i) * sig.eps_pair(i, j) < 0 {
                        g = g.neg();
                    }
                    c = c.add(&g);
                }
                w.set_entry(j, i, SuperForm::from_fn(c));
            }
        }
        w
    }

    /// Apply a degree-0 endomorphism matrix of intrinsic parity `pi` to a
    /// vector field: `(W Y)^j = sum_i (-1)^{pi |Y^i|} Y^i W^j_i`.
    pub fn apply_endomorphism(
        w: &MatrixForm,
        pi: Parity,
        y: &SuperVectorField,
    ) -> SuperVectorField {
        let sig = w.signature();
        let mut comps: Vec<SuperPolynomial> =
            (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
        for i in 0..sig.n() {
            let yi = y.component(i);
            if yi.is_zero() {
                continue;
            }
            for j in 0..sig.n() {
                let e = w.entry(j, i);
                if e.is_zero() {
                    continue;
                }
                let mut c = yi.mul(&e.clone().into_poly());
                if pi.koszul(y.parity().combine(sig.parity(i))) < 0 {
                    c = c.neg();
                }
                comps[j] = comps[j].add(&c);
            }
        }
        SuperVectorField::new(sig, comps, pi.combine(y.parity())).expect("endomorphism parity")
    }

    /// Covariant derivative of a degree-0 endomorphism `W` of intrinsic
    /// parity `pi`, defined slotwise by
    /// `(nabla_Y W)(Z) = nabla_Y(W Z) - (-1)^{|Y| pi} W(nabla_Y Z)`
    /// and reassembled into a degree-1 matrix.
    pub fn nabla_endomorphism(&self, w: &MatrixForm, pi: Parity) -> MatrixForm {
        let sig = self.signature();
        let mut out = MatrixForm::zero(sig, 1);
        // values[m][i] = (nabla_{d_m} W)(d_i), a vector field
        for i in 0..sig.n() {
            let di = SuperVectorField::basis(sig, i);
            let wdi = Self::apply_endomorphism(w, pi, &di);
            let mut values: Vec<Vec<SuperPolynomial>> = Vec::with_capacity(sig.n());
            for m in 0..sig.n() {
                let dm = SuperVectorField::basis(sig, m);
                let a = self.nabla_vf(&dm, &wdi);
                let mut b = Self::apply_endomorphism(w, pi, &self.nabla_basis(&dm, i));
                if sig.parity(m).koszul(pi) < 0 {
                    b = b.neg();
                }
                let v = a.sub(&b);
                values.push(v.components().to_vec());
            }
            for j in 0..sig.n() {
                let col: Vec<SuperPolynomial> =
                    (0..sig.n()).map(|m| values[m][j].clone()).collect();
                out.set_entry(j, i, one_form_from_contractions(sig, &col));
            }
        }
        out
    }

    /// The curvature as an endomorphism-matrix contracted with `Y` in its
    /// first slot: entries `eps_i eps_{ij} i_Y R^j_i`.
    pub fn curvature_contracted(&self, y: &SuperVectorField) -> MatrixForm {
        let sig = self.signature();
        let mut out = MatrixForm::zero(sig, 1);
        for j in 0..sig.n() {
            for i in 0..sig.n() {
                let e = self.curvature.entry(j, i);
                if e.is_zero() {
                    continue;
                }
                let mut c = e.contract(y);
                if sig.eps(i) * sig.eps_pair(i, j) < 0 {
                    c = c.neg();
                }
                out.set_entry(j, i, c);
            }
        }
        out
    }

    /// Chern-Simons three-form `Str(Gamma ^ R) - 1/3 Str(Gamma^3)`.
    /// The identity `d CS = Str(R ^ R)` holds exactly and is asserted.
    pub fn cs_form(&self) -> SuperForm {
        let third = crate::scalars::GaussianRational::from_ratio(1, 3);
        let g3 = self.gamma.mul(&self.gamma).mul(&self.gamma);
        let cs = self
            .gamma
            .mul(&self.curvature)
            .supertrace()
            .sub(&g3.supertrace().scale(&third));
        debug_assert_eq!(
            cs.d(),
            self.curvature.mul(&self.curvature).supertrace(),
            "d CS(Gamma) = Str(R^R) must hold identically"
        );
        cs
    }
}

/// Homotopy inverse to `d` on positive-weight polynomial forms: for closed
/// `omega` (with no constant 0-form part) returns `B` with `dB = omega`.
/// Works termwise through the Euler field, whose Lie derivative scales a
/// term by its polynomial degree plus form degree.
pub fn poincare_potential(omega: &SuperForm) -> Result<SuperForm, ChartError> {
    let sig = omega.signature();
    if !omega.d().is_zero() {
        return Err(ChartError::MixedParity); // caller guards; form not closed
    }
    let euler = SuperVectorField::new(
        sig,
        (0..sig.n())
            .map(|i| SuperPolynomial::coordinate(sig, i))
            .collect(),
        Parity::Even,
    )
    .expect("euler field");
    let mut out = SuperForm::zero(sig, omega.degree().saturating_sub(1));
    for (w, f) in omega.terms() {
        for (m, c) in f.terms() {
            let weight = m.degree() as i64 + w.len() as i64;
            if weight == 0 {
                continue;
            }
            let mut single = SuperForm::zero(sig, omega.degree());
            single.insert(
                w.clone(),
                SuperPolynomial::from_terms(sig, [(m.clone(), c.clone())]),
            );
            let contracted = single.contract(&euler);
            out = out.add(&contracted.scale(&crate::scalars::GaussianRational::from_ratio(1, weight)));
        }
    }
    debug_assert_eq!(out.d(), *omega, "poincare potential must invert d");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::Sampler;
    use crate::scalars::GaussianRational;

    fn b(sig: ChartSignature, i: usize) -> SuperPolynomial {
        SuperPolynomial::coordinate(sig, i)
    }

    #[test]
    fn flat_tilde_nabla_matrix() {
        // Gamma = 0, X = b2 d1 on A^{2|0}: single entry (d_2 X^1) = 1 at (1,2)
        let sig = ChartSignature::new(2, 0);
        let conn = ConnectionData::flat(sig);
        let x = SuperVectorField::new(
            sig,
            vec![b(sig, 1), SuperPolynomial::zero(sig)],
            Parity::Even,
        )
        .unwrap();
        let w = conn.tilde_nabla(&x);
        assert_eq!(w.entry(0, 1).clone().into_poly(), SuperPolynomial::one(sig));
        assert!(w.entry(0, 0).is_zero());
        assert!(w.entry(1, 0).is_zero());
        assert!(w.entry(1, 1).is_zero());
    }

    #[test]
    fn flat_basis_fields_have_zero_matrix() {
        let sig = ChartSignature::new(2, 1);
        let conn = ConnectionData::flat(sig);
        for i in 0..3 {
            assert!(conn.tilde_nabla(&SuperVectorField::basis(sig, i)).is_zero());
        }
    }

    #[test]
    fn torsion_free_tilde_equals_nabla() {
        // symmetric Christoffels: tilde_nabla X applied to Y equals nabla_Y X?
        // The identity is (tilde X)(Y) = nabla_X Y - [X, Y]; for torsion-free
        // connections this equals (nabla X)(Y) = nabla_Y X.
        let sig = ChartSignature::new(2, 0);
        // Gamma^j_i = G^j_{ik} db^k with G symmetric in (i,k)
        let mut gamma = MatrixForm::zero(sig, 1);
        // G^1_{11}=b1, G^1_{12}=G^1_{21}=b2, others zero
        let mut e00 = SuperForm::zero(sig, 1);
        e00.insert_raw(vec![0], b(sig, 0));
        e00.insert_raw(vec![1], b(sig, 1));
        let mut e01 = SuperForm::zero(sig, 1);
        e01.insert_raw(vec![0], b(sig, 1));
        gamma.set_entry(0, 0, e00);
        gamma.set_entry(0, 1, e01);
        let conn = ConnectionData::new(gamma).unwrap();
        let mut s = Sampler::new(5);
        for _ in 0..10 {
            let x = s.vector_field(sig, Parity::Even);
            let y = s.vector_field(sig, Parity::Even);
            let lhs = ConnectionData::apply_endomorphism(&conn.tilde_nabla(&x), Parity::Even, &y);
            let rhs = conn.nabla_vf(&y, &x);
            assert_eq!(lhs.components(), rhs.components());
        }
    }

    #[test]
    fn tilde_nabla_defining_property() {
        // (tilde X)(Y) = nabla_X Y - [X, Y] for random super data
        let sig = ChartSignature::new(1, 2);
        let mut s = Sampler::new(11);
        let gamma = s.connection_form(sig);
        let conn = ConnectionData::new(gamma).unwrap();
        for seed in 0..12 {
            let xp = if seed % 2 == 0 { Parity::Even } else { Parity::Odd };
            let yp = if seed % 3 == 0 { Parity::Even } else { Parity::Odd };
            let x = s.vector_field(sig, xp);
            let y = s.vector_field(sig, yp);
            let lhs = ConnectionData::apply_endomorphism(&conn.tilde_nabla(&x), xp, &y);
            let rhs = conn.nabla_vf(&x, &y).sub(&x.bracket(&y));
            assert_eq!(lhs.components(), rhs.components(), "seed {seed}");
        }
    }

    #[test]
    fn cs_form_rank_one_block() {
        // Gamma = (b2 db1 + b3 db2) E^1_1 on A^{3|0}:
        // CS = -b2 db1^db2^db3 and both dCS, Str(R^R) vanish
        let sig = ChartSignature::new(3, 0);
        let mut gamma = MatrixForm::zero(sig, 1);
        let mut e = SuperForm::zero(sig, 1);
        e.insert_raw(vec![0], b(sig, 1));
        e.insert_raw(vec![1], b(sig, 2));
        gamma.set_entry(0, 0, e);
        let conn = ConnectionData::new(gamma).unwrap();
        let cs = conn.cs_form();
        let db = |i| SuperForm::basis_one_form(sig, i);
        let expect = db(0)
            .wedge(&db(1))
            .wedge(&db(2))
            .mul_fn(&b(sig, 1))
            .neg();
        assert_eq!(cs, expect);
        assert!(cs.d().is_zero());
        assert!(conn.curvature().mul(conn.curvature()).supertrace().is_zero());
    }

    #[test]
    fn cs_identity_random_charts() {
        for (p, q, seed) in [(3, 0, 1), (2, 2, 2), (1, 2, 3), (2, 1, 4)] {
            let sig = ChartSignature::new(p, q);
            let mut s = Sampler::new(seed);
            for _ in 0..5 {
                let conn = ConnectionData::new(s.connection_form(sig)).unwrap();
                let cs = conn.cs_form();
                assert_eq!(
                    cs.d(),
                    conn.curvature().mul(conn.curvature()).supertrace(),
                    "p={p} q={q}"
                );
                assert!(conn.bianchi_holds());
            }
        }
    }

    #[test]
    fn poincare_inverts_d() {
        let sig = ChartSignature::new(2, 2);
        let mut s = Sampler::new(9);
        for deg in [1usize, 2, 3] {
            for _ in 0..5 {
                let omega = s.closed_even_form(sig, deg);
                if omega.is_zero() {
                    continue;
                }
                let b = poincare_potential(&omega).unwrap();
                assert_eq!(b.d(), omega);
            }
        }
        let _ = GaussianRational::one();
    }
}
