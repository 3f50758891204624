// calibrate the theta-tensor contraction slot conventions via the
// morphism identities
use cdo_core::algebroid::{ChartAlgebroid, PullbackMap, VertexAlgebroid};
use cdo_core::coord_change::{examples, jacobian, wz_data};
use cdo_core::sampler::Sampler;
use cdo_core::superpoly::{
    one_form_from_contractions, values_to_one_form, ChartSignature, MatrixForm, Parity,
    SuperForm, SuperPolynomial, SuperVectorField,
};
use cdo_core::scalars::GaussianRational;

fn theta_term(
    theta: &MatrixForm,
    x: &SuperVectorField,
    s1: bool, // extra (-1)^{|X|}
    s2: bool, // swap slots
    s3: bool, // pair-based reconstruction
) -> SuperForm {
    let sig = theta.signature();
    let mut vals: Vec<SuperPolynomial> = (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
    for j in 0..sig.n() {
        let dj = SuperVectorField::basis(sig, j);
        let mut acc = SuperPolynomial::zero(sig);
        for k in 0..sig.n() {
            for l in 0..sig.n() {
                let a = theta.entry(k, l);
                let b = theta.entry(l, k);
                if a.is_zero() || b.is_zero() { continue; }
                let term = if !s2 {
                    a.contract(x).into_poly().mul(&b.contract(&dj).into_poly())
                } else {
                    a.contract(&dj).into_poly().mul(&b.contract(x).into_poly())
                };
                let mut t = term;
                if sig.eps(k) < 0 { t = t.neg(); }
                acc = acc.add(&t);
            }
        }
        vals[j] = acc;
    }
    let mut out = if s3 { values_to_one_form(sig, &vals) } else { one_form_from_contractions(sig, &vals) };
    if s1 && x.parity() == Parity::Odd { out = out.neg(); }
    out
}

fn delta_apply(
    phi: &PullbackMap,
    theta: &MatrixForm,
    xi: &SuperForm,
    xp: &SuperVectorField,
    knobs: (bool, bool, bool),
) -> SuperForm {
    let sig = phi.signature();
    let x = phi.on_vf(xp);
    let mut out = SuperForm::zero(sig, 1);
    for i in 0..sig.n() {
        for j in 0..sig.n() {
            let entry = theta.entry(j, i);
            if entry.is_zero() { continue; }
            let mut c = x.component(i).partial(j).expect("idx");
            if c.is_zero() { continue; }
            let mut sign = sig.eps(i) * sig.eps_pair(i, j);
            if x.parity() == Parity::Even { sign *= sig.eps(j); }
            if sign > 0 { c = c.neg(); }
            out = out.add(&entry.mul_fn(&c));
        }
    }
    let half = GaussianRational::from_ratio(1, 2);
    out = out.sub(&theta_term(theta, &x, knobs.0, knobs.1, knobs.2).scale(&half));
    out.sub(&xi.contract(&x).scale(&half))
}

fn passes(phi: &PullbackMap, xi: &SuperForm, knobs: (bool, bool, bool), seed: u64) -> bool {
    let sig = phi.signature();
    let v = ChartAlgebroid::coordinate(sig);
    let theta = {
        let g = jacobian(phi);
        let gi = g.inverse().unwrap();
        gi.mul(&g.d())
    };
    let mut s = Sampler::new(seed);
    let delta = |x: &SuperVectorField| delta_apply(phi, &theta, xi, x, knobs);
    let suite = cdo_core::algebroid::check_morphism(&v, &v, phi, &delta, &mut s, 15);
    suite.all_passed()
}

fn odd_shear() -> (ChartSignature, PullbackMap) {
    let sig = ChartSignature::new(1, 2);
    let b = |i: usize| SuperPolynomial::coordinate(sig, i);
    let fwd = vec![b(0), b(1).add(&b(0).mul(&b(2))), b(2)];
    let inv = vec![b(0), b(1).sub(&b(0).mul(&b(2))), b(2)];
    (sig, PullbackMap::new(sig, fwd, inv).unwrap())
}

fn main() {
    let sig2 = ChartSignature::new(2, 0);
    let (sig_n, nil) = examples::nilpotent_scaling();
    let _ = wz_data(&nil).unwrap();
    let (sig_o, osh) = odd_shear();
    let combo = nil.then(&osh); // nilpotent then odd shear
    let xi2 = SuperForm::basis_one_form(sig2, 0).wedge(&SuperForm::basis_one_form(sig2, 1));
    for s1 in [false, true] {
        for s2 in [false, true] {
            for s3 in [false, true] {
                let knobs = (s1, s2, s3);
                let ok_even = passes(&examples::shear(sig2), &SuperForm::zero(sig2, 2), knobs, 7)
                    && passes(&examples::shear(sig2), &xi2, knobs, 8)
                    && passes(&examples::swap(sig2), &SuperForm::zero(sig2, 2), knobs, 9);
                let ok_nil = passes(&nil, &SuperForm::zero(sig_n, 2), knobs, 10);
                let ok_osh = passes(&osh, &SuperForm::zero(sig_o, 2), knobs, 11);
                let ok_combo = passes(&combo, &SuperForm::zero(sig_o, 2), knobs, 12);
                println!("knobs {knobs:?}: even={ok_even} nil={ok_nil} oddshear={ok_osh} combo={ok_combo}");
            }
        }
    }
}
