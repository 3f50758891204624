//! Morphisms of chart vertex algebroids and structure transport.
//!
//! A morphism `(phi, Delta)` consists of a pullback of charts and an even
//! linear map from source vector fields to target one-forms; it must
//! satisfy three identities tying the two structure-map triples together.
//! Transport solves those identities for the target maps, so a transported
//! structure is a vertex algebroid together with a built-in isomorphism.

use super::{ChartAlgebroid, DeltaMap, VertexAlgebroid};
use crate::report::{CheckReport, SuiteReport};
use crate::sampler::Sampler;
use crate::superpoly::form::SuperForm;
use crate::superpoly::{ChartError, ChartSignature, SuperPolynomial, SuperVectorField};

/// A parity-preserving polynomial chart map with explicit inverse,
/// acting by pullback on functions and forms and by the induced map on
/// vector fields.
#[derive(Debug, Clone)]
pub struct PullbackMap {
    sig: ChartSignature,
    /// Images `phi^i` of the source coordinates, in target variables.
    fwd: Vec<SuperPolynomial>,
    /// Images `psi^i` of the target coordinates, in source variables.
    inv: Vec<SuperPolynomial>,
}

impl PullbackMap {
    pub fn identity(sig: ChartSignature) -> Self {
        let coords: Vec<SuperPolynomial> =
            (0..sig.n()).map(|i| SuperPolynomial::coordinate(sig, i)).collect();
        PullbackMap { sig, fwd: coords.clone(), inv: coords }
    }

    /// Build from forward and inverse coordinate images; verifies the two
    /// compositions are the identity and that parities are preserved.
    pub fn new(
        sig: ChartSignature,
        fwd: Vec<SuperPolynomial>,
        inv: Vec<SuperPolynomial>,
    ) -> Result<Self, ChartError> {
        if fwd.len() != sig.n() || inv.len() != sig.n() {
            return Err(ChartError::IndexOutOfRange(fwd.len(), sig.n()));
        }
        for (i, p) in fwd.iter().chain(inv.iter()).enumerate() {
            let idx = i % sig.n();
            match p.parity() {
                Some(pp) if pp == sig.parity(idx) => {}
                _ => return Err(ChartError::MixedParity),
            }
        }
        let map = PullbackMap { sig, fwd, inv };
        for i in 0..sig.n() {
            let b = SuperPolynomial::coordinate(sig, i);
            if map.fwd[i].substitute(&map.inv) != b || map.inv[i].substitute(&map.fwd) != b {
                return Err(ChartError::NotInvertible);
            }
        }
        Ok(map)
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn forward_images(&self) -> &[SuperPolynomial] {
        &self.fwd
    }

    pub fn inverse_images(&self) -> &[SuperPolynomial] {
        &self.inv
    }

    pub fn is_identity(&self) -> bool {
        (0..self.sig.n()).all(|i| self.fwd[i] == SuperPolynomial::coordinate(self.sig, i))
    }

    /// The inverse chart map.
    pub fn inverse(&self) -> PullbackMap {
        PullbackMap { sig: self.sig, fwd: self.inv.clone(), inv: self.fwd.clone() }
    }

    /// Composition `other after self` as chart maps; on pullbacks this is
    /// `self^* o other^*`.
    pub fn then(&self, other: &PullbackMap) -> PullbackMap {
        // (other o self)^i = self^*(other^i)
        let fwd = other.fwd.iter().map(|p| p.substitute(&self.fwd)).collect();
        let inv = self.inv.iter().map(|p| p.substitute(&other.inv)).collect();
        PullbackMap { sig: self.sig, fwd, inv }
    }

    pub fn on_fun(&self, f: &SuperPolynomial) -> SuperPolynomial {
        f.substitute(&self.fwd)
    }

    pub fn on_form(&self, w: &SuperForm) -> SuperForm {
        w.pullback(&self.fwd)
    }

    /// Induced map on vector fields: `(phi^* X)^i = phi^*(X(psi^i))`.
    pub fn on_vf(&self, x: &SuperVectorField) -> SuperVectorField {
        let comps: Vec<SuperPolynomial> = (0..self.sig.n())
            .map(|i| self.on_fun(&x.apply(&self.inv[i])))
            .collect();
        SuperVectorField::new(self.sig, comps, x.parity()).expect("pullback preserves parity")
    }

    /// Sampled verification that the pullback respects the extended Lie
    /// superalgebroid operations.
    pub fn check_extended_morphism(&self, sampler: &mut Sampler, samples: usize) -> SuiteReport {
        let sig = self.sig;
        let v = ChartAlgebroid::coordinate(sig);
        let mut suite = SuiteReport::new("extended-lie-pullback");
        let mut bad_act = None;
        let mut bad_bracket = None;
        let mut bad_d = None;
        let mut bad_pair = None;
        for _ in 0..samples {
            let f = sampler.any_poly(sig);
            let x = sampler.any_vector_field(sig);
            let y = sampler.any_vector_field(sig);
            let fx = self.on_fun(&f);
            let xx = self.on_vf(&x);
            let yy = self.on_vf(&y);
            if xx.apply(&fx) != self.on_fun(&x.apply(&f)) {
                bad_act.get_or_insert(format!("f={f}; X={x}"));
            }
            if xx.bracket(&yy).components() != self.on_vf(&x.bracket(&y)).components() {
                bad_bracket.get_or_insert(format!("X={x}; Y={y}"));
            }
            if self.on_form(&v.d(&f)) != v.d(&fx) {
                bad_d.get_or_insert(format!("f={f}"));
            }
            let alpha = v.d(&f);
            if v.pair(&self.on_form(&alpha), &xx) != self.on_fun(&v.pair(&alpha, &x)) {
                bad_pair.get_or_insert(format!("alpha=d({f}); X={x}"));
            }
        }
        suite.push(CheckReport::from_outcome(
            "pullback.action",
            "phi(Xf) = (phi X)(phi f)",
            samples,
            bad_act,
        ));
        suite.push(CheckReport::from_outcome(
            "pullback.bracket",
            "phi[X,Y] = [phi X, phi Y]",
            samples,
            bad_bracket,
        ));
        suite.push(CheckReport::from_outcome(
            "pullback.d",
            "phi(df) = d(phi f)",
            samples,
            bad_d,
        ));
        suite.push(CheckReport::from_outcome(
            "pullback.pair",
            "phi(alpha(X)) = (phi alpha)(phi X)",
            samples,
            bad_pair,
        ));
        suite
    }
}

const MORPHISM_IDS: [&str; 3] = [
    "(phi f)*'(phi X) - phi(f*X) = Delta(fX) - (phi f)Delta(X)",
    "{phi X, phi Y}' - phi{X,Y} = -Delta(X)(phi Y) - (-1)^{|X||Y|}Delta(Y)(phi X)",
    "{phi X, phi Y}'_O - phi{X,Y}_O = -L_{phi X}Delta(Y) + (-1)^{|X||Y|}L_{phi Y}Delta(X) - d(Delta(X)(phi Y)) + Delta([X,Y])",
];

/// Check the three morphism identities for `(phi, Delta): source -> target`
/// on random samples and (optionally) on the coordinate fields with a small
/// exhaustive function sweep, which spans everything by linearity.
pub fn check_morphism(
    source: &ChartAlgebroid,
    target: &ChartAlgebroid,
    phi: &PullbackMap,
    delta: &dyn Fn(&SuperVectorField) -> SuperForm,
    sampler: &mut Sampler,
    samples: usize,
) -> SuiteReport {
    let sig = source.signature();
    let mut suite = SuiteReport::new("vertex-algebroid-morphism");
    let mut witnesses: [Option<String>; 3] = [None, None, None];
    let mut inputs: Vec<(SuperPolynomial, SuperVectorField, SuperVectorField)> = Vec::new();
    // generator cases first: coordinate fields and monomials of degree <= 2
    let coord = ChartAlgebroid::coordinate(sig);
    let small_funs = coord.enumerate_funs(2);
    for f in small_funs.iter().take(12) {
        for i in 0..sig.n() {
            for j in 0..sig.n() {
                inputs.push((
                    f.clone(),
                    SuperVectorField::basis(sig, i),
                    SuperVectorField::basis(sig, j),
                ));
            }
        }
    }
    for _ in 0..samples {
        inputs.push((
            sampler.any_poly(sig),
            sampler.any_vector_field(sig),
            sampler.any_vector_field(sig),
        ));
    }
    let n = inputs.len();
    for (f, x, y) in inputs {
        let fp = match f.parity() {
            Some(p) => p,
            None => continue,
        };
        let sxy = x.parity().koszul(y.parity());
        let px_f = phi.on_fun(&f);
        let px = phi.on_vf(&x);
        let py = phi.on_vf(&y);
        let dx = delta(&x);
        let dy = delta(&y);
        // identity 1
        if witnesses[0].is_none() {
            let lhs = target.star(&px_f, &px).sub(&phi.on_form(&source.star(&f, &x)));
            let fx = source.mul_fun_field(&f, &x);
            let rhs = delta(&fx).sub(&dx.mul_fn(&px_f));
            if lhs != rhs {
                witnesses[0] = Some(format!("f={f}; X={x}"));
            }
        }
        // identity 2
        if witnesses[1].is_none() {
            let lhs = target.brace(&px, &py).sub(&phi.on_fun(&source.brace(&x, &y)));
            let mut t2 = target.pair(&dy, &px);
            if sxy < 0 {
                t2 = t2.neg();
            }
            let rhs = target.pair(&dx, &py).add(&t2).neg();
            if lhs != rhs {
                witnesses[1] = Some(format!("X={x}; Y={y}"));
            }
        }
        // identity 3
        if witnesses[2].is_none() {
            let lhs = target
                .brace_omega(&px, &py)
                .sub(&phi.on_form(&source.brace_omega(&x, &y)));
            let mut rhs = target.lie(&px, &dy).neg();
            let mut t = target.lie(&py, &dx);
            if sxy < 0 {
                t = t.neg();
            }
            rhs = rhs.add(&t);
            rhs = rhs.sub(&target.d(&target.pair(&dx, &py)));
            rhs = rhs.add(&delta(&source.bracket(&x, &y)));
            if lhs != rhs {
                witnesses[2] = Some(format!("X={x}; Y={y}"));
            }
        }
        let _ = fp;
    }
    for (k, w) in witnesses.into_iter().enumerate() {
        suite.push(CheckReport::from_outcome(
            format!("morphism{}", k + 1),
            MORPHISM_IDS[k],
            n,
            w,
        ));
    }
    suite
}

/// Transport a structure along `(id, Delta)`; the result satisfies the
/// morphism identities by construction and passes the axiom checker.
pub fn transport(base: &ChartAlgebroid, delta: DeltaMap) -> ChartAlgebroid {
    ChartAlgebroid::transported(base.clone(), delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::check_axioms;
    use crate::scalars::GaussianRational;

    fn b(sig: ChartSignature, i: usize) -> SuperPolynomial {
        SuperPolynomial::coordinate(sig, i)
    }

    #[test]
    fn identity_morphism_passes() {
        let sig = ChartSignature::new(2, 1);
        let v = ChartAlgebroid::coordinate(sig);
        let phi = PullbackMap::identity(sig);
        let zero = |x: &SuperVectorField| SuperForm::zero(x.signature(), 1);
        let mut s = Sampler::new(4);
        let suite = check_morphism(&v, &v, &phi, &zero, &mut s, 40);
        assert!(suite.all_passed(), "{suite}");
    }

    #[test]
    fn transported_structure_is_isomorphic_and_valid() {
        let sig = ChartSignature::new(1, 1);
        let base = ChartAlgebroid::coordinate(sig);
        // arbitrary tensorial Delta: Delta(d_i) = omega_i even overall
        let mut s = Sampler::new(6);
        let images: Vec<SuperForm> = (0..sig.n())
            .map(|i| {
                let mut w = SuperForm::zero(sig, 1);
                for j in 0..sig.n() {
                    let want = sig.parity(i).combine(sig.parity(j));
                    let coeff = s.poly(sig, want);
                    let mut f = SuperForm::zero(sig, 1);
                    f.insert_raw(vec![j], coeff);
                    w = w.add(&f);
                }
                w
            })
            .collect();
        let delta = DeltaMap::Tensorial(images);
        let v2 = transport(&base, delta.clone());
        // morphism identities hold by construction
        let phi = PullbackMap::identity(sig);
        let suite = check_morphism(
            &base,
            &v2,
            &phi,
            &|x| delta.apply(x),
            &mut s,
            30,
        );
        assert!(suite.all_passed(), "{suite}");
        // and the transported structure satisfies the axioms
        let axioms = check_axioms(&v2, &mut s, 60, Some(2));
        assert!(axioms.all_passed(), "{axioms}");
    }

    #[test]
    fn transport_roundtrip_is_identity() {
        let sig = ChartSignature::new(2, 0);
        let base = ChartAlgebroid::coordinate(sig);
        let bform = SuperForm::basis_one_form(sig, 0)
            .wedge(&SuperForm::basis_one_form(sig, 1))
            .mul_fn(&b(sig, 0));
        let v2 = transport(&base, DeltaMap::HalfContraction(bform.clone()));
        let v3 = transport(&v2, DeltaMap::HalfContraction(bform.neg()));
        let mut s = Sampler::new(8);
        for _ in 0..30 {
            let f = s.any_poly(sig);
            let x = s.any_vector_field(sig);
            let y = s.any_vector_field(sig);
            assert_eq!(base.star(&f, &x), v3.star(&f, &x));
            assert_eq!(base.brace(&x, &y), v3.brace(&x, &y));
            assert_eq!(base.brace_omega(&x, &y), v3.brace_omega(&x, &y));
        }
        let _ = GaussianRational::one();
    }
}
