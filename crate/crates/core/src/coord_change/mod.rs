//! Coordinate changes of free-field charts: Jacobian data, Maurer-Cartan
//! and Wess-Zumino forms, the weight-one shift attached to a
//! diffeomorphism and a compatible two-form, composition cocycles, and the
//! induced transformation of conformal elements.
//!
//! Diffeomorphisms are restricted to polynomial maps with explicitly
//! supplied polynomial inverses; this class (affine, shears, nilpotent
//! unit scalings and their compositions) already exercises every formula,
//! including nonzero `Str theta` and nonzero composition cocycles.

use crate::algebroid::{ChartAlgebroid, PullbackMap};
use crate::free_va::{nth_product, state_of_one_form, state_of_poly, state_of_vf, FockState};
use crate::report::{CheckReport, SuiteReport};
use crate::sampler::Sampler;
use crate::scalars::GaussianRational;
use crate::superpoly::{
    ChartError, ChartSignature, MatrixForm, Parity, SuperForm, SuperPolynomial, SuperVectorField,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoordChangeError {
    #[error("invalid chart map: {0}")]
    BadMap(#[from] ChartError),
    #[error("d xi - WZ residual: {0}")]
    AnomalyResidual(String),
    #[error("one-form must be closed, d omega = {0}")]
    NotClosed(String),
}

/// Jacobian and Maurer-Cartan data of a polynomial diffeomorphism.
#[derive(Debug, Clone)]
pub struct WZData {
    pub g: MatrixForm,
    pub g_inv: MatrixForm,
    pub theta: MatrixForm,
    pub wz: SuperForm,
}

impl WZData {
    pub fn str_theta(&self) -> SuperForm {
        self.theta.supertrace()
    }
}

/// `(g_phi)^i_j = eps_j eps_{ij} d_j phi^i`, the Jacobian in the frame
/// convention of the pullback of basis one-forms.
pub fn jacobian(phi: &PullbackMap) -> MatrixForm {
    let sig = phi.signature();
    let mut g = MatrixForm::zero(sig, 0);
    for i in 0..sig.n() {
        for j in 0..sig.n() {
            let mut v = phi.forward_images()[i].partial(j).expect("index");
            if sig.eps(j) * sig.eps_pair(i, j) < 0 {
                v = v.neg();
            }
            g.set_entry(i, j, SuperForm::from_fn(v));
        }
    }
    g
}

/// Build the Wess-Zumino data of a diffeomorphism; the invariants
/// `d theta = -theta ^ theta` and `d WZ = 0` are verified exactly.
pub fn wz_data(phi: &PullbackMap) -> Result<WZData, CoordChangeError> {
    let g = jacobian(phi);
    let g_inv = g.inverse().map_err(CoordChangeError::BadMap)?;
    let theta = g_inv.mul(&g.d());
    let third = GaussianRational::from_ratio(1, 3);
    let wz = theta.mul(&theta).mul(&theta).supertrace().scale(&third);
    let mc = theta.d().add(&theta.mul(&theta));
    if !mc.is_zero() {
        return Err(CoordChangeError::AnomalyResidual(format!(
            "d theta + theta^theta = {}",
            mc.entry(0, 0)
        )));
    }
    if !wz.d().is_zero() {
        return Err(CoordChangeError::AnomalyResidual("dWZ != 0".into()));
    }
    Ok(WZData { g, g_inv, theta, wz })
}

/// The weight-one shift of a coordinate change. Requires `d xi = WZ_phi`.
///
/// Rather than transliterating the sign-laden closed formula, the images
/// of the basis fields are solved from the morphism identities, which
/// determine them uniquely once the antisymmetric freedom is fixed by
/// `xi`: the first identity extends to module coefficients, and the
/// second one pins the graded-symmetric part of the pairings
/// `Delta(d'_i)(phi^* d'_j)` to the brace of the pulled-back frame.
pub struct DeltaPhiXi {
    pub phi: PullbackMap,
    pub xi: SuperForm,
    pub wz: WZData,
    basis_images: Vec<SuperForm>,
}

pub fn delta_map(phi: &PullbackMap, xi: &SuperForm) -> Result<DeltaPhiXi, CoordChangeError> {
    let wz = wz_data(phi)?;
    let residual = xi.d().sub(&wz.wz);
    if !residual.is_zero() {
        return Err(CoordChangeError::AnomalyResidual(format!("{residual}")));
    }
    if !xi.is_zero() && xi.parity() != Some(Parity::Even) {
        return Err(CoordChangeError::BadMap(ChartError::MixedParity));
    }
    let sig = phi.signature();
    let n = sig.n();
    let v = ChartAlgebroid::coordinate(sig);
    use crate::algebroid::VertexAlgebroid;
    let frame: Vec<SuperVectorField> = (0..n)
        .map(|i| phi.on_vf(&SuperVectorField::basis(sig, i)))
        .collect();
    let kos = |a: usize, b: usize| sig.eps_pair(a, b);
    // pairings against the pulled-back frame:
    // P_ij = -1/2 {E_i, E_j}^c - 1/2 Xi_ij, with Xi the graded-antisymmetric
    // evaluation of xi on the frame
    let mut p: Vec<Vec<SuperPolynomial>> =
        (0..n).map(|_| (0..n).map(|_| SuperPolynomial::zero(sig)).collect()).collect();
    let half = GaussianRational::from_ratio(1, 2);
    let mut xi_raw: Vec<Vec<SuperPolynomial>> =
        (0..n).map(|_| (0..n).map(|_| SuperPolynomial::zero(sig)).collect()).collect();
    for i in 0..n {
        let contracted = xi.contract(&frame[i]);
        for j in 0..n {
            xi_raw[i][j] = contracted.pair(&frame[j]).expect("degree 1");
        }
    }
    for i in 0..n {
        for j in 0..n {
            let l = v.brace(&frame[i], &frame[j]);
            let mut anti = xi_raw[i][j].clone();
            let mut swapped = xi_raw[j][i].clone();
            if kos(i, j) < 0 {
                swapped = swapped.neg();
            }
            anti = anti.sub(&swapped).scale(&half);
            p[i][j] = l.add(&anti).scale(&half).neg();
        }
    }
    // convert frame pairings to coordinate pairings:
    // P_ij = sum_m kos(A_i, A_j) kos(A_i, A_m) E_j^m Q_im
    let mut basis_images = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = MatrixForm::zero(sig, 0);
        for j in 0..n {
            for mm in 0..n {
                let mut e = frame[j].component(mm).clone();
                if kos(i, j) * kos(i, mm) < 0 {
                    e = e.neg();
                }
                m.set_entry(j, mm, SuperForm::from_fn(e));
            }
        }
        let minv = m.inverse().map_err(CoordChangeError::BadMap)?;
        let q: Vec<SuperPolynomial> = (0..n)
            .map(|mm| {
                let mut acc = SuperPolynomial::zero(sig);
                for j in 0..n {
                    let inv = minv.entry(mm, j).clone().into_poly();
                    if !inv.is_zero() && !p[i][j].is_zero() {
                        acc = acc.add(&inv.mul(&p[i][j]));
                    }
                }
                acc
            })
            .collect();
        basis_images.push(crate::superpoly::values_to_one_form(sig, &q));
    }
    Ok(DeltaPhiXi { phi: phi.clone(), xi: xi.clone(), wz, basis_images })
}

impl DeltaPhiXi {
    /// Apply to a vector field on the source chart: decompose
    /// `X' = sum_i f'_i d'_i` and use the module-coefficient identity
    /// `Delta(f X) = (phi f) Delta(X) + (phi f) *^c (phi X) - phi(f *^c X)`.
    pub fn apply(&self, x_prime: &SuperVectorField) -> SuperForm {
        use crate::algebroid::VertexAlgebroid;
        let sig = self.phi.signature();
        let v = ChartAlgebroid::coordinate(sig);
        let mut out = SuperForm::zero(sig, 1);
        for i in 0..sig.n() {
            let f = x_prime.component(i);
            if f.is_zero() {
                continue;
            }
            let basis = SuperVectorField::basis(sig, i);
            let pf = self.phi.on_fun(f);
            out = out.add(&self.basis_images[i].mul_fn(&pf));
            if f.parity() == Some(Parity::Even) && f.degree() == 0 {
                continue; // constant coefficient: star terms vanish
            }
            let e_i = self.phi.on_vf(&basis);
            out = out.add(&v.star(&pf, &e_i));
            out = out.sub(&self.phi.on_form(&v.star(f, &basis)));
        }
        out
    }

    /// Verify the three morphism identities between the coordinate
    /// structures of the two charts.
    pub fn check_morphism(&self, sampler: &mut Sampler, samples: usize) -> SuiteReport {
        let sig = self.phi.signature();
        let v = ChartAlgebroid::coordinate(sig);
        crate::algebroid::check_morphism(
            &v,
            &v,
            &self.phi,
            &|x| self.apply(x),
            sampler,
            samples,
        )
    }
}

/// Verify the composition laws of two coordinate changes:
/// the two-form cocycle, the Jacobian chain rule, the Maurer-Cartan trace
/// cocycle, the Wess-Zumino cocycle, and the composition of the shifts.
pub fn compose_check(
    phi: &PullbackMap,
    xi: &SuperForm,
    phi_prime: &PullbackMap,
    xi_prime: &SuperForm,
    sampler: &mut Sampler,
    samples: usize,
) -> Result<SuiteReport, CoordChangeError> {
    let sig = phi.signature();
    let mut suite = SuiteReport::new("coordinate-change-composition");
    let d1 = delta_map(phi, xi)?;
    let d2 = delta_map(phi_prime, xi_prime)?;
    let composed = phi.then(phi_prime);
    // sigma = Str(theta_phi ^ g^{-1} (phi^* theta_phi') g)
    let pulled_theta = pullback_matrix(phi, &d2.wz.theta);
    let conj = d1.wz.g_inv.mul(&pulled_theta).mul(&d1.wz.g);
    let sigma = d1.wz.theta.mul(&conj).supertrace();
    let eta = xi.add(&pullback_form(phi, xi_prime)).add(&sigma);
    let dcomp = delta_map(&composed, &eta)?;
    // chain rule g_{phi' phi} = (phi^* g_{phi'}) g_phi
    let chain = pullback_matrix(phi, &d2.wz.g).mul(&d1.wz.g);
    suite.push(CheckReport::from_outcome(
        "chain-rule",
        "g_{phi' phi} = (phi^* g_{phi'}) g_phi",
        1,
        if dcomp.wz.g == chain {
            None
        } else {
            Some("jacobian chain rule".into())
        },
    ));
    // Str theta cocycle
    let lhs = dcomp.wz.str_theta();
    let rhs = d1.wz.str_theta().add(&pullback_form(phi, &d2.wz.str_theta()));
    suite.push(CheckReport::from_outcome(
        "str-theta-cocycle",
        "Str theta_{phi' phi} = Str theta_phi + phi^* Str theta_{phi'}",
        1,
        if lhs == rhs { None } else { Some(format!("lhs {lhs}, rhs {rhs}")) },
    ));
    // WZ cocycle
    let lhs = dcomp.wz.wz.clone();
    let rhs = d1.wz.wz.add(&pullback_form(phi, &d2.wz.wz)).add(&sigma.d());
    suite.push(CheckReport::from_outcome(
        "wz-cocycle",
        "WZ_{phi' phi} = WZ_phi + phi^* WZ_{phi'} + d sigma",
        1,
        if lhs == rhs { None } else { Some(format!("lhs {lhs}, rhs {rhs}")) },
    ));
    // shift composition on coordinate fields and samples
    let mut witness = None;
    let mut fields: Vec<SuperVectorField> =
        (0..sig.n()).map(|i| SuperVectorField::basis(sig, i)).collect();
    for _ in 0..samples {
        fields.push(sampler.any_vector_field(sig));
    }
    let n = fields.len();
    for x2 in fields {
        // Delta_{phi' phi, eta}(X'') = phi^*(Delta_{phi', xi'}(X''))
        //   + Delta_{phi, xi}(phi'^* X'')
        let lhs = dcomp.apply(&x2);
        let rhs = pullback_form(phi, &d2.apply(&x2)).add(&d1.apply(&phi_prime.on_vf(&x2)));
        if lhs != rhs {
            witness = Some(format!("X={x2}"));
            break;
        }
    }
    suite.push(CheckReport::from_outcome(
        "shift-composition",
        "Delta_{phi' phi, eta} = phi^* Delta_{phi', xi'} + Delta_{phi, xi} phi'^*",
        n,
        witness,
    ));
    Ok(suite)
}

fn pullback_form(phi: &PullbackMap, w: &SuperForm) -> SuperForm {
    phi.on_form(w)
}

fn pullback_matrix(phi: &PullbackMap, m: &MatrixForm) -> MatrixForm {
    let sig = phi.signature();
    let mut out = MatrixForm::zero(sig, m.degree());
    for i in 0..sig.n() {
        for j in 0..sig.n() {
            out.set_entry(i, j, phi.on_form(m.entry(i, j)));
        }
    }
    out
}

/// Push a state of the source free-field model through the isomorphism
/// attached to `(phi, xi)`: generators map by `f -> phi^* f`,
/// `db^i -> d(phi^i)`, `d_i -> phi^* d_i + Delta(d_i)`, and modes follow.
pub fn push_state(delta: &DeltaPhiXi, v: &FockState) -> FockState {
    let sig = delta.phi.signature();
    let mut out = FockState::zero(sig);
    for (word, c) in v.terms() {
        out = out.add(&push_word(delta, word).scale(c));
    }
    out
}

fn push_word(delta: &DeltaPhiXi, word: &[crate::free_va::GenMode]) -> FockState {
    use crate::free_va::Field;
    let sig = delta.phi.signature();
    if word.is_empty() {
        return FockState::vacuum(sig);
    }
    let g = word[0];
    let rest = push_word(delta, &word[1..]);
    match g.field {
        Field::B => {
            let image = state_of_poly(&delta.phi.forward_images()[g.idx]);
            nth_product(&image, g.n - 1, &rest)
        }
        Field::A => {
            let basis = SuperVectorField::basis(sig, g.idx);
            let image = state_of_vf(&delta.phi.on_vf(&basis))
                .add(&state_of_one_form(&delta.apply(&basis)));
            nth_product(&image, g.n, &rest)
        }
    }
}

/// Verify that the isomorphism permutes conformal elements:
/// the push of `nu^omega` equals `nu^{phi^* omega - Str theta_phi}`.
pub fn conformal_transform(
    phi: &PullbackMap,
    xi: &SuperForm,
    omega: &SuperForm,
) -> Result<SuiteReport, CoordChangeError> {
    let sig = phi.signature();
    let mut suite = SuiteReport::new("conformal-transform");
    let delta = delta_map(phi, xi)?;
    if !omega.d().is_zero() {
        return Err(CoordChangeError::NotClosed(format!("{}", omega.d())));
    }
    let nu = crate::free_va::conformal_element(sig, omega).map_err(CoordChangeError::BadMap)?;
    let pushed = push_state(&delta, &nu);
    let target_omega = pullback_form(phi, omega).sub(&delta.wz.str_theta());
    let target = crate::free_va::conformal_element(sig, &target_omega)
        .map_err(CoordChangeError::BadMap)?;
    suite.push(CheckReport::from_outcome(
        "conformal-image",
        "phi*_xi(nu^omega) = nu^{phi^* omega - Str theta_phi}",
        1,
        if pushed == target {
            None
        } else {
            Some(format!("pushed {pushed}, target {target}"))
        },
    ));
    Ok(suite)
}

/// Built-in example maps exercising the formula set.
pub mod examples {
    use super::*;

    /// Shear on two even coordinates: `b1 -> b1 + b2^2`.
    pub fn shear(sig: ChartSignature) -> PullbackMap {
        assert!(sig.p >= 2);
        let b = |i: usize| SuperPolynomial::coordinate(sig, i);
        let mut fwd: Vec<SuperPolynomial> = (0..sig.n()).map(b).collect();
        let mut inv = fwd.clone();
        fwd[0] = b(0).add(&b(1).mul(&b(1)));
        inv[0] = b(0).sub(&b(1).mul(&b(1)));
        PullbackMap::new(sig, fwd, inv).expect("shear is invertible")
    }

    /// Linear swap of the first two even coordinates.
    pub fn swap(sig: ChartSignature) -> PullbackMap {
        assert!(sig.p >= 2);
        let b = |i: usize| SuperPolynomial::coordinate(sig, i);
        let mut fwd: Vec<SuperPolynomial> = (0..sig.n()).map(b).collect();
        fwd.swap(0, 1);
        PullbackMap::new(sig, fwd.clone(), fwd).expect("swap is invertible")
    }

    /// Even rescaling `b1 -> c b1`.
    pub fn scaling(sig: ChartSignature, c: i64) -> PullbackMap {
        let b = |i: usize| SuperPolynomial::coordinate(sig, i);
        let mut fwd: Vec<SuperPolynomial> = (0..sig.n()).map(b).collect();
        let mut inv = fwd.clone();
        fwd[0] = b(0).scale(&GaussianRational::from_int(c));
        inv[0] = b(0).scale(&GaussianRational::from_ratio(1, c));
        PullbackMap::new(sig, fwd, inv).expect("scaling is invertible")
    }

    /// Nilpotent unit scaling on `A^{1|2}`: `b1 -> b1 (1 + b2 b3)`.
    pub fn nilpotent_scaling() -> (ChartSignature, PullbackMap) {
        let sig = ChartSignature::new(1, 2);
        let b = |i: usize| SuperPolynomial::coordinate(sig, i);
        let unit = SuperPolynomial::one(sig).add(&b(1).mul(&b(2)));
        let unit_inv = SuperPolynomial::one(sig).sub(&b(1).mul(&b(2)));
        let fwd = vec![b(0).mul(&unit), b(1), b(2)];
        let inv = vec![b(0).mul(&unit_inv), b(1), b(2)];
        (sig, PullbackMap::new(sig, fwd, inv).expect("unit scaling invertible"))
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn db(sig: ChartSignature, i: usize) -> SuperForm {
        SuperForm::basis_one_form(sig, i)
    }

    #[test]
    fn identity_wz_data() {
        let sig = ChartSignature::new(2, 1);
        let phi = PullbackMap::identity(sig);
        let wz = wz_data(&phi).unwrap();
        assert_eq!(wz.g, MatrixForm::identity(sig));
        assert!(wz.theta.is_zero());
        assert!(wz.wz.is_zero());
    }

    #[test]
    fn shear_wz_data() {
        let sig = ChartSignature::new(2, 0);
        let phi = shear(sig);
        let wz = wz_data(&phi).unwrap();
        let b2 = SuperPolynomial::coordinate(sig, 1);
        let two_b2 = b2.scale(&GaussianRational::from_int(2));
        let mut expect_g = MatrixForm::identity(sig);
        expect_g.set_entry(0, 1, SuperForm::from_fn(two_b2.clone()));
        assert_eq!(wz.g, expect_g);
        let mut expect_theta = MatrixForm::zero(sig, 1);
        expect_theta.set_entry(0, 1, db(sig, 1).scale(&GaussianRational::from_int(2)));
        assert_eq!(wz.theta, expect_theta);
        assert!(wz.wz.is_zero());
        assert!(wz.str_theta().is_zero());
    }

    #[test]
    fn nilpotent_scaling_str_theta() {
        let (sig, phi) = nilpotent_scaling();
        let wz = wz_data(&phi).unwrap();
        let b = |i: usize| SuperPolynomial::coordinate(sig, i);
        let expect = d_poly(&b(1).mul(&b(2)));
        assert_eq!(wz.str_theta(), expect);
    }

    #[test]
    fn shear_delta_vanishes() {
        let sig = ChartSignature::new(2, 0);
        let phi = shear(sig);
        let delta = delta_map(&phi, &SuperForm::zero(sig, 2)).unwrap();
        for i in 0..2 {
            assert!(delta.apply(&SuperVectorField::basis(sig, i)).is_zero(), "i={i}");
        }
    }

    #[test]
    fn shear_delta_with_closed_xi() {
        let sig = ChartSignature::new(2, 0);
        let phi = shear(sig);
        let xi = db(sig, 0).wedge(&db(sig, 1));
        let delta = delta_map(&phi, &xi).unwrap();
        // Delta(d'_2) = -1/2 i_{phi^* d'_2} xi
        let x2 = SuperVectorField::basis(sig, 1);
        let pulled = phi.on_vf(&x2);
        let expect = xi.contract(&pulled).scale(&GaussianRational::from_ratio(-1, 2));
        assert_eq!(delta.apply(&x2), expect);
    }

    #[test]
    fn rejects_xi_with_wrong_differential() {
        // need three even variables so that a non-closed even two-form
        // exists at all
        let sig = ChartSignature::new(3, 0);
        let phi = shear(sig);
        // xi = b3 db1 ^ db2 has d xi = db3^db1^db2 != 0 = WZ
        let xi = db(sig, 0)
            .wedge(&db(sig, 1))
            .mul_fn(&SuperPolynomial::coordinate(sig, 2));
        assert!(delta_map(&phi, &xi).is_err());
    }

    #[test]
    fn accepted_maps_pass_morphism_identities() {
        let sig = ChartSignature::new(2, 0);
        for (name, phi, xi) in [
            ("shear", shear(sig), SuperForm::zero(sig, 2)),
            ("swap", swap(sig), SuperForm::zero(sig, 2)),
            ("scaling", scaling(sig, 2), SuperForm::zero(sig, 2)),
            ("shear-xi", shear(sig), db(sig, 0).wedge(&db(sig, 1))),
        ] {
            let delta = delta_map(&phi, &xi).unwrap();
            let mut s = Sampler::new(61);
            let suite = delta.check_morphism(&mut s, 25);
            assert!(suite.all_passed(), "{name}:\n{suite}");
        }
        // nilpotent scaling on a super chart
        let (sig2, phi) = nilpotent_scaling();
        let delta = delta_map(&phi, &SuperForm::zero(sig2, 2)).unwrap();
        let mut s = Sampler::new(62);
        let suite = delta.check_morphism(&mut s, 25);
        assert!(suite.all_passed(), "nilpotent:\n{suite}");
    }

    #[test]
    fn delta_difference_is_xi_contraction() {
        // two accepted xi differ by a closed form; the shifts differ by
        // -1/2 i_{phi^* X}(xi - xi')
        let sig = ChartSignature::new(2, 0);
        let phi = shear(sig);
        let xi1 = SuperForm::zero(sig, 2);
        let xi2 = db(sig, 0).wedge(&db(sig, 1));
        let d1 = delta_map(&phi, &xi1).unwrap();
        let d2 = delta_map(&phi, &xi2).unwrap();
        let mut s = Sampler::new(63);
        for _ in 0..10 {
            let x = s.any_vector_field(sig);
            let lhs = d1.apply(&x).sub(&d2.apply(&x));
            let rhs = xi1
                .sub(&xi2)
                .contract(&phi.on_vf(&x))
                .scale(&GaussianRational::from_ratio(-1, 2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn composition_laws() {
        let sig = ChartSignature::new(2, 0);
        let mut s = Sampler::new(64);
        // shear then swap
        let suite = compose_check(
            &shear(sig),
            &SuperForm::zero(sig, 2),
            &swap(sig),
            &SuperForm::zero(sig, 2),
            &mut s,
            10,
        )
        .unwrap();
        assert!(suite.all_passed(), "{suite}");
        // shear with its inverse: composed data is the identity data
        let phi = shear(sig);
        let inv = phi.inverse();
        let suite =
            compose_check(&phi, &SuperForm::zero(sig, 2), &inv, &SuperForm::zero(sig, 2), &mut s, 5)
                .unwrap();
        assert!(suite.all_passed(), "{suite}");
        let composed = phi.then(&inv);
        assert!(composed.is_identity());
        // identity . identity has eta = 0
        let id = PullbackMap::identity(sig);
        let suite = compose_check(
            &id,
            &SuperForm::zero(sig, 2),
            &id,
            &SuperForm::zero(sig, 2),
            &mut s,
            3,
        )
        .unwrap();
        assert!(suite.all_passed(), "{suite}");
    }

    #[test]
    fn conformal_transform_examples() {
        // shear and even scaling fix nu; the nilpotent scaling shifts it
        let sig = ChartSignature::new(2, 0);
        for phi in [shear(sig), scaling(sig, 2)] {
            let suite =
                conformal_transform(&phi, &SuperForm::zero(sig, 2), &SuperForm::zero(sig, 1))
                    .unwrap();
            assert!(suite.all_passed(), "{suite}");
        }
        let (sig2, phi) = nilpotent_scaling();
        let suite =
            conformal_transform(&phi, &SuperForm::zero(sig2, 2), &SuperForm::zero(sig2, 1))
                .unwrap();
        assert!(suite.all_passed(), "{suite}");
        // and the image for the nilpotent case really is nu^{-d(b2 b3)}
        let delta = delta_map(&phi, &SuperForm::zero(sig2, 2)).unwrap();
        let nu = crate::free_va::conformal_element(sig2, &SuperForm::zero(sig2, 1)).unwrap();
        let pushed = push_state(&delta, &nu);
        let b = |i: usize| SuperPolynomial::coordinate(sig2, i);
        let target_omega = d_poly(&b(1).mul(&b(2))).neg();
        let target = crate::free_va::conformal_element(sig2, &target_omega).unwrap();
        assert_eq!(pushed, target);
    }

    #[test]
    fn push_respects_products_low_weight() {
        // the push is a homomorphism: Phi(u_(n) v) = Phi(u)_(n) Phi(v)
        let sig = ChartSignature::new(2, 0);
        let phi = shear(sig);
        let delta = delta_map(&phi, &SuperForm::zero(sig, 2)).unwrap();
        let mut s = Sampler::new(65);
        for _ in 0..8 {
            let f = s.any_poly(sig);
            let x = s.any_vector_field(sig);
            let u = state_of_poly(&f);
            let v = state_of_vf(&x);
            for n in -1..=1i64 {
                let lhs = push_state(&delta, &nth_product(&u, n, &v));
                let rhs = nth_product(&push_state(&delta, &u), n, &push_state(&delta, &v));
                assert_eq!(lhs, rhs, "n={n}");
            }
        }
    }
}
