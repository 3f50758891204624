//! Embedding dictionary between chart data and Fock states: functions as
//! words of `b_0` modes, one-forms via `db^i = b^i_{-1}|0>`, vector fields
//! through the splitting `s(X) = eps_i^{1+|X|} a_{i,-1} X^i`, and the
//! weight-one shift used for connection-based structures.

use super::fock::{FockState, GenMode};
use super::product::nth_product;
use crate::algebroid::DeltaMap;
use crate::superpoly::{ChartSignature, Monomial, SuperForm, SuperPolynomial, SuperVectorField};

/// Weight-zero state of a polynomial.
pub fn state_of_poly(f: &SuperPolynomial) -> FockState {
    let sig = f.signature();
    let mut out = FockState::zero(sig);
    for (m, c) in f.terms() {
        let word = monomial_word(sig, m);
        out = out.add(&FockState::word(sig, &word).scale(c));
    }
    out
}

fn monomial_word(sig: ChartSignature, m: &Monomial) -> Vec<GenMode> {
    let mut word = Vec::new();
    for (i, e) in m.evens.iter().enumerate() {
        for _ in 0..*e {
            word.push(GenMode::b(i, 0));
        }
    }
    for &i in &m.odds {
        word.push(GenMode::b(i, 0));
    }
    let _ = sig;
    word
}

/// Weight-one state of a one-form: `f db^k` becomes the word of `f`
/// followed by `b^k_{-1}` applied to the vacuum.
pub fn state_of_one_form(alpha: &SuperForm) -> FockState {
    assert_eq!(alpha.degree(), 1, "one-form states only");
    let sig = alpha.signature();
    let mut out = FockState::zero(sig);
    for (w, f) in alpha.terms() {
        let k = w[0];
        for (m, c) in f.terms() {
            let mut word = monomial_word(sig, m);
            word.push(GenMode::b(k, -1));
            out = out.add(&FockState::word(sig, &word).scale(c));
        }
    }
    out
}

/// The splitting `s(X) = eps_i^{1+|X|} a_{i,-1} X^i |0>`.
pub fn state_of_vf(x: &SuperVectorField) -> FockState {
    let sig = x.signature();
    let mut out = FockState::zero(sig);
    let xp = x.parity();
    for i in 0..sig.n() {
        let xi = x.component(i);
        if xi.is_zero() {
            continue;
        }
        // eps_i^{1 + |X|}
        let mut sign = 1i8;
        if !xp.is_odd() {
            sign = sig.eps(i);
        }
        for (m, c) in xi.terms() {
            let mut word = vec![GenMode::a(i, -1)];
            word.extend(monomial_word(sig, m));
            let mut v = c.clone();
            if sign < 0 {
                v = -v;
            }
            out = out.add(&FockState::word(sig, &word).scale(&v));
        }
    }
    out
}

/// Generator embedding for a structure with a weight-one shift.
///
/// A shift `Delta` defines a morphism from the coordinate structure to the
/// shifted one; embedding the shifted generators back into the free-field
/// model therefore uses the inverse, `X -> s(X) - Delta(X)`. With a zero
/// shift this is the coordinate dictionary itself.
#[derive(Clone)]
pub struct GeneratorDictionary {
    sig: ChartSignature,
    delta: DeltaMap,
}

impl GeneratorDictionary {
    pub fn coordinate(sig: ChartSignature) -> Self {
        GeneratorDictionary { sig, delta: DeltaMap::Zero }
    }

    pub fn with_delta(sig: ChartSignature, delta: DeltaMap) -> Self {
        GeneratorDictionary { sig, delta }
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn fun(&self, f: &SuperPolynomial) -> FockState {
        state_of_poly(f)
    }

    pub fn one_form(&self, a: &SuperForm) -> FockState {
        state_of_one_form(a)
    }

    pub fn vf(&self, x: &SuperVectorField) -> FockState {
        state_of_vf(x).sub(&state_of_one_form(&self.delta.apply(x)))
    }

    /// The mode operator `u_(n)` of an embedded element acting on a state.
    pub fn act(&self, u: &FockState, n: i64, v: &FockState) -> FockState {
        nth_product(u, n, v)
    }

    /// All weight-<=1 generator states: functions `b^i`, forms `db^i`,
    /// and split vector fields for the coordinate frame.
    pub fn generator_states(&self) -> Vec<(String, FockState)> {
        let sig = self.sig;
        let mut out = Vec::new();
        out.push(("1".to_string(), FockState::vacuum(sig)));
        for i in 0..sig.n() {
            out.push((
                format!("b{}", i + 1),
                self.fun(&SuperPolynomial::coordinate(sig, i)),
            ));
        }
        for i in 0..sig.n() {
            out.push((
                format!("d(b{})", i + 1),
                self.one_form(&SuperForm::basis_one_form(sig, i)),
            ));
        }
        for i in 0..sig.n() {
            out.push((
                format!("@{}", i + 1),
                self.vf(&SuperVectorField::basis(sig, i)),
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpoly::form::d_poly;
    use crate::superpoly::Parity;

    #[test]
    fn d_of_function_matches_translation() {
        // T(state of f) = state of df (exercises the sign convention in d)
        for (p, q) in [(2, 0), (1, 1), (0, 2), (2, 1)] {
            let sig = ChartSignature::new(p, q);
            let mut s = crate::sampler::Sampler::new(7 + p as u64 + 10 * q as u64);
            for _ in 0..10 {
                let f = s.any_poly(sig);
                assert_eq!(
                    state_of_poly(&f).translate(),
                    state_of_one_form(&d_poly(&f)),
                    "p={p} q={q} f={f}"
                );
            }
        }
    }

    #[test]
    fn pairing_matches_fock_modes() {
        // alpha(X) = alpha_(1) s(X) exactly, random super inputs
        for (p, q) in [(1, 1), (0, 2), (2, 1)] {
            let sig = ChartSignature::new(p, q);
            let mut s = crate::sampler::Sampler::new(17 + p as u64 + 3 * q as u64);
            for _ in 0..12 {
                let f = s.any_poly(sig);
                let alpha = d_poly(&f);
                let x = s.any_vector_field(sig);
                let fock = nth_product(&state_of_one_form(&alpha), 1, &state_of_vf(&x));
                let chart = state_of_poly(&alpha.pair(&x).unwrap());
                assert_eq!(fock, chart, "df-pairing p={p} q={q}");
                // and a non-exact one-form
                let g = s.any_poly(sig);
                let alpha2 = SuperForm::basis_one_form(sig, (p + q) - 1).mul_fn(&g);
                if alpha2.parity().is_none() {
                    continue;
                }
                let fock2 = nth_product(&state_of_one_form(&alpha2), 1, &state_of_vf(&x));
                let chart2 = state_of_poly(&alpha2.pair(&x).unwrap());
                assert_eq!(fock2, chart2, "general pairing p={p} q={q}");
            }
        }
    }

    #[test]
    fn lie_derivative_matches_zero_mode() {
        // s(X)_(0) alpha = state of L_X alpha
        for (p, q) in [(1, 1), (0, 2), (2, 1)] {
            let sig = ChartSignature::new(p, q);
            let mut s = crate::sampler::Sampler::new(23 + p as u64 + 5 * q as u64);
            for _ in 0..10 {
                let x = s.any_vector_field(sig);
                let g = s.any_poly(sig);
                let alpha = SuperForm::basis_one_form(sig, 0).mul_fn(&g);
                if alpha.parity().is_none() {
                    continue;
                }
                let fock = nth_product(&state_of_vf(&x), 0, &state_of_one_form(&alpha));
                let chart = state_of_one_form(&alpha.lie_derivative(&x));
                assert_eq!(fock, chart, "L_X p={p} q={q}");
            }
        }
    }

    #[test]
    fn action_matches_zero_mode_on_functions() {
        // s(X)_(0) f = state of X(f)
        let sig = ChartSignature::new(1, 2);
        let mut s = crate::sampler::Sampler::new(31);
        for _ in 0..15 {
            let x = s.any_vector_field(sig);
            let f = s.any_poly(sig);
            let fock = nth_product(&state_of_vf(&x), 0, &state_of_poly(&f));
            assert_eq!(fock, state_of_poly(&x.apply(&f)));
        }
    }

    #[test]
    fn module_action_matches_minus_one_mode() {
        // f_(-1) s(X) = s(fX) + state(f * X) for the coordinate structure
        use crate::algebroid::{ChartAlgebroid, VertexAlgebroid};
        let sig = ChartSignature::new(1, 1);
        let v = ChartAlgebroid::coordinate(sig);
        let mut s = crate::sampler::Sampler::new(37);
        for _ in 0..15 {
            let f = s.any_poly(sig);
            if f.parity() != Some(Parity::Even) && f.parity() != Some(Parity::Odd) {
                continue;
            }
            let x = s.any_vector_field(sig);
            let lhs = nth_product(&state_of_poly(&f), -1, &state_of_vf(&x));
            let fx = x.scale_fn(&f).unwrap();
            let rhs = state_of_vf(&fx).add(&state_of_one_form(&v.star(&f, &x)));
            assert_eq!(lhs, rhs, "f={f} X={x}");
        }
    }

    #[test]
    fn coordinate_braces_match_fock_products() {
        // {X,Y} = s(X)_(1) s(Y) and {X,Y}_O = s(X)_(0) s(Y) - s([X,Y])
        use crate::algebroid::{ChartAlgebroid, VertexAlgebroid};
        for (p, q) in [(2, 0), (1, 1), (0, 2), (2, 1)] {
            let sig = ChartSignature::new(p, q);
            let v = ChartAlgebroid::coordinate(sig);
            let mut s = crate::sampler::Sampler::new(41 + p as u64 + 7 * q as u64);
            for _ in 0..10 {
                let x = s.any_vector_field(sig);
                let y = s.any_vector_field(sig);
                let brace_fock = nth_product(&state_of_vf(&x), 1, &state_of_vf(&y));
                assert_eq!(brace_fock, state_of_poly(&v.brace(&x, &y)), "brace p={p} q={q}");
                let bo_fock = nth_product(&state_of_vf(&x), 0, &state_of_vf(&y))
                    .sub(&state_of_vf(&x.bracket(&y)));
                assert_eq!(
                    bo_fock,
                    state_of_one_form(&v.brace_omega(&x, &y)),
                    "brace_omega p={p} q={q}"
                );
            }
        }
    }
}

#[cfg(test)]
mod shifted_dictionary_tests {
    use super::*;
    use crate::algebroid::{ChartAlgebroid, ConnectionData, VertexAlgebroid};
    use crate::free_va::nth_product;
    use crate::superpoly::ChartSignature;

    #[test]
    fn shifted_braces_match_fock_products() {
        // For a connection-based structure, the shifted dictionary must
        // intertwine the structure maps with the free-field products:
        //   {X,Y}  = (iX)_(1) (iY)
        //   {X,Y}_O = (iX)_(0) (iY) - i([X,Y])
        //   f * X + state(fX-part): f_(-1) iX = i(fX) + state(f*X)
        for (p, q, seed) in [(2usize, 0usize, 51u64), (1, 1, 52), (0, 2, 53)] {
            let sig = ChartSignature::new(p, q);
            let mut s = crate::sampler::Sampler::new(seed);
            let conn = ConnectionData::new(s.connection_form(sig)).unwrap();
            let h = conn.cs_form().add(&s.even_form(sig, 2).d());
            let v = ChartAlgebroid::global(conn, h).unwrap();
            let dict = GeneratorDictionary::with_delta(
                sig,
                v.global_delta().unwrap().clone(),
            );
            for _ in 0..8 {
                let x = s.any_vector_field(sig);
                let y = s.any_vector_field(sig);
                let ix = dict.vf(&x);
                let iy = dict.vf(&y);
                let brace = nth_product(&ix, 1, &iy);
                assert_eq!(brace, state_of_poly(&v.brace(&x, &y)), "brace p={p} q={q}");
                let bo = nth_product(&ix, 0, &iy).sub(&dict.vf(&x.bracket(&y)));
                assert_eq!(
                    bo,
                    state_of_one_form(&v.brace_omega(&x, &y)),
                    "brace_omega p={p} q={q}"
                );
                let f = s.any_poly(sig);
                if f.parity().is_none() {
                    continue;
                }
                let lhs = nth_product(&state_of_poly(&f), -1, &ix);
                let fx = x.scale_fn(&f).unwrap();
                let rhs = dict.vf(&fx).add(&state_of_one_form(&v.star(&f, &x)));
                assert_eq!(lhs, rhs, "star p={p} q={q}");
            }
        }
    }
}
