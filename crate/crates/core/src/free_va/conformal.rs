//! Conformal elements `nu^omega = eps_i d_{i,-1} db^i + 1/2 omega_{-2} 1`
//! and the Virasoro verification report.

use super::embed::{state_of_one_form, state_of_vf, GeneratorDictionary};
use super::fock::{FockState, GenMode};
use super::product::nth_product;
use crate::report::{CheckReport, SuiteReport};
use crate::scalars::GaussianRational;
use crate::superpoly::{ChartError, ChartSignature, Parity, SuperForm, SuperVectorField};

/// Build `nu^omega`; requires `omega` even with `d omega = 0`.
pub fn conformal_element(
    sig: ChartSignature,
    omega: &SuperForm,
) -> Result<FockState, ChartError> {
    if omega.degree() != 1 {
        return Err(ChartError::DegreeMismatch(1, omega.degree()));
    }
    if !omega.is_zero() && omega.parity() != Some(Parity::Even) {
        return Err(ChartError::MixedParity);
    }
    if !omega.d().is_zero() {
        return Err(ChartError::MixedParity); // closedness required
    }
    let mut nu = FockState::zero(sig);
    for i in 0..sig.n() {
        let term = FockState::vacuum(sig)
            .apply_mode(GenMode::b(i, -1))
            .apply_mode(GenMode::a(i, -1));
        nu = nu.add(&if sig.eps(i) < 0 { term.neg() } else { term });
    }
    let delta = state_of_one_form(omega)
        .translate()
        .scale(&GaussianRational::from_ratio(1, 2));
    Ok(nu.add(&delta))
}

/// Enumerate all normal-ordered basis words of weight at most `max_weight`
/// (excluding the weight-contributing order only; `b_0` modes are not
/// included, matching the module-over-functions grading).
pub fn basis_states(sig: ChartSignature, max_weight: i64) -> Vec<FockState> {
    let mut out = vec![FockState::vacuum(sig)];
    // generator mode pool with weight >= 1
    let mut pool = Vec::new();
    for i in 0..sig.n() {
        for w in 1..=max_weight {
            pool.push(GenMode::b(i, -w));
            pool.push(GenMode::a(i, -w));
        }
    }
    // grow words by appending pool modes with non-decreasing position
    let mut frontier: Vec<(Vec<GenMode>, i64)> = vec![(Vec::new(), 0)];
    while let Some((word, wt)) = frontier.pop() {
        for m in &pool {
            if let Some(last) = word.last() {
                if m < last {
                    continue;
                }
            }
            let nw = wt + m.weight();
            if nw > max_weight {
                continue;
            }
            let mut next = word.clone();
            next.push(*m);
            let st = FockState::word(sig, &next);
            if !st.is_zero() {
                out.push(st);
                frontier.push((next, nw));
            }
        }
    }
    out
}

/// Verify the conformal contracts of `nu`: `nu_(0) = T` and `nu_(1) = L_0`
/// on generators, `nu_(2) nu = 0`, `nu_(3) nu = (p-q)|0>`, and the
/// Virasoro brackets with central charge `2(p-q)` on all states of weight
/// at most `max_weight` for mode indices in `[-2, 2]`.
pub fn virasoro_report(sig: ChartSignature, nu: &FockState, max_weight: i64) -> SuiteReport {
    let mut suite = SuiteReport::new(format!("virasoro[{sig}]"));
    let dict = GeneratorDictionary::coordinate(sig);
    let gens = dict.generator_states();
    // nu_(0) = T on generators
    let mut witness = None;
    for (name, g) in &gens {
        if nth_product(nu, 0, g) != g.translate() {
            witness = Some(format!("generator {name}"));
            break;
        }
    }
    suite.push(CheckReport::from_outcome(
        "nu0",
        "nu_(0) = T on generators",
        gens.len(),
        witness,
    ));
    // nu_(1) = L_0
    let mut witness = None;
    for (name, g) in &gens {
        let expect = match g.weight() {
            Some(w) => g.scale(&GaussianRational::from_int(w)),
            None => continue,
        };
        if nth_product(nu, 1, g) != expect {
            witness = Some(format!("generator {name}"));
            break;
        }
    }
    suite.push(CheckReport::from_outcome(
        "nu1",
        "nu_(1) = L_0 on generators",
        gens.len(),
        witness,
    ));
    // nu_(2) nu = 0
    let v22 = nth_product(nu, 2, nu);
    suite.push(CheckReport::from_outcome(
        "nu2",
        "nu_(2) nu = 0",
        1,
        if v22.is_zero() { None } else { Some(format!("{v22}")) },
    ));
    // nu_(3) nu = (p - q)|0>
    let v33 = nth_product(nu, 3, nu);
    let expect = FockState::vacuum(sig).scale(&GaussianRational::from_int(sig.str_identity()));
    suite.push(CheckReport::from_outcome(
        "nu3",
        "nu_(3) nu = (p-q) |0>",
        1,
        if v33 == expect { None } else { Some(format!("{v33}")) },
    ));
    // Virasoro brackets on the weight-filtered basis
    let basis = basis_states(sig, max_weight);
    let c = GaussianRational::from_int(2 * sig.str_identity());
    let mut witness = None;
    let mut count = 0usize;
    'outer: for m in -2i64..=2 {
        for n in -2i64..=2 {
            for st in &basis {
                count += 1;
                // [L_m, L_n] v
                let lm = |k: i64, v: &FockState| nth_product(nu, k + 1, v);
                let lhs = lm(m, &lm(n, st)).sub(&lm(n, &lm(m, st)));
                let mut rhs = lm(m + n, st).scale(&GaussianRational::from_int(m - n));
                if m + n == 0 {
                    let central = c.clone()
                        * GaussianRational::from_ratio(m * m * m - m, 12);
                    rhs = rhs.add(&st.scale(&central));
                }
                if lhs != rhs {
                    witness = Some(format!("m={m} n={n} state={st}"));
                    break 'outer;
                }
            }
        }
    }
    suite.push(CheckReport::from_outcome(
        "virasoro-bracket",
        "[L_m, L_n] = (m-n) L_{m+n} + c/12 (m^3-m) delta_{m+n,0}, c = 2(p-q)",
        count,
        witness,
    ));
    suite
}

/// Zero mode of a one-form on a split vector field, with the derived
/// comparison `alpha_0 X = -(-1)^{|alpha||X|} L_X alpha + d(alpha(X))`,
/// which reduces to a contraction of `d alpha`.
pub fn zero_mode_one_form(alpha: &SuperForm, x: &SuperVectorField) -> FockState {
    nth_product(&state_of_one_form(alpha), 0, &state_of_vf(x))
}

/// Report that `alpha_0` vanishes on all generators exactly when
/// `d alpha = 0`, and that its value is the expected contraction.
pub fn zero_mode_report(
    sig: ChartSignature,
    alpha: &SuperForm,
    fields: &[SuperVectorField],
) -> SuiteReport {
    let mut suite = SuiteReport::new("one-form-zero-mode");
    let closed = alpha.d().is_zero();
    let mut all_zero = true;
    let mut witness = None;
    for x in fields {
        let got = zero_mode_one_form(alpha, x);
        // expected: -(-1)^{|alpha||X|} (L_X alpha - d(pair)) via Cartan
        let ap = alpha.parity().unwrap_or(Parity::Even);
        let mut expect = alpha
            .lie_derivative(x)
            .sub(&crate::superpoly::form::d_poly(&alpha.pair(x).expect("degree 1")));
        if ap.koszul(x.parity()) > 0 {
            expect = expect.neg();
        }
        if got != state_of_one_form(&expect) {
            witness = Some(format!("X={x}"));
        }
        if !got.is_zero() {
            all_zero = false;
        }
    }
    suite.push(CheckReport::from_outcome(
        "zero-mode-value",
        "alpha_0 X = -(-1)^{|alpha||X|} (L_X alpha - d(alpha(X)))",
        fields.len(),
        witness,
    ));
    let iff_ok = all_zero == closed;
    suite.push(CheckReport::from_outcome(
        "zero-mode-iff",
        "alpha_0 = 0 on generators iff d alpha = 0",
        fields.len(),
        if iff_ok {
            None
        } else {
            Some(format!("closed={closed} all_zero={all_zero}"))
        },
    ));
    let _ = sig;
    suite
}

/// `nu^omega` evaluated against a structure with a weight-one shift: the
/// state `eps_i (s(d_i) + Delta(d_i))_{(-1)} db^i + 1/2 (omega_a)_{-2} 1`
/// where `omega_a = omega - Str(Gamma)` must be closed.
pub fn conformal_element_global(
    conn: &crate::algebroid::ConnectionData,
    delta: &crate::algebroid::DeltaMap,
    omega: &SuperForm,
) -> Result<FockState, ChartError> {
    let sig = conn.signature();
    let omega_a = omega.sub(&conn.gamma().supertrace());
    if !omega_a.d().is_zero() {
        return Err(ChartError::MixedParity);
    }
    let dict = GeneratorDictionary::with_delta(sig, delta.clone());
    let mut nu = FockState::zero(sig);
    for i in 0..sig.n() {
        let gi = dict.vf(&SuperVectorField::basis(sig, i));
        let dbi = state_of_one_form(&SuperForm::basis_one_form(sig, i));
        let term = nth_product(&gi, -1, &dbi);
        nu = nu.add(&if sig.eps(i) < 0 { term.neg() } else { term });
    }
    let tail = state_of_one_form(&omega_a)
        .translate()
        .scale(&GaussianRational::from_ratio(1, 2));
    Ok(nu.add(&tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpoly::form::d_poly;
    use crate::superpoly::SuperPolynomial;

    #[test]
    fn virasoro_for_beta_gamma_bc() {
        for (p, q) in [(1usize, 0usize), (0, 1), (2, 1)] {
            let sig = ChartSignature::new(p, q);
            let nu = conformal_element(sig, &SuperForm::zero(sig, 1)).unwrap();
            let suite = virasoro_report(sig, &nu, 2);
            assert!(suite.all_passed(), "({p},{q}):\n{suite}");
        }
    }

    #[test]
    fn nu3_value() {
        // (p,q) = (2,1): nu_(3) nu = 1 |0>
        let sig = ChartSignature::new(2, 1);
        let nu = conformal_element(sig, &SuperForm::zero(sig, 1)).unwrap();
        let got = nth_product(&nu, 3, &nu);
        assert_eq!(got, FockState::vacuum(sig));
    }

    #[test]
    fn nonclosed_omega_rejected() {
        let sig = ChartSignature::new(2, 0);
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let omega = SuperForm::basis_one_form(sig, 1).mul_fn(&b1);
        assert!(conformal_element(sig, &omega).is_err());
    }

    #[test]
    fn closed_one_forms_have_zero_zero_mode() {
        let sig = ChartSignature::new(2, 1);
        let mut s = crate::sampler::Sampler::new(3);
        let fields: Vec<SuperVectorField> =
            (0..6).map(|_| s.any_vector_field(sig)).collect();
        // closed: alpha = d f
        let f = s.any_poly(sig);
        let suite = zero_mode_report(sig, &d_poly(&f), &fields);
        assert!(suite.all_passed(), "{suite}");
        // non-closed: b1 db2
        let alpha = SuperForm::basis_one_form(sig, 1)
            .mul_fn(&SuperPolynomial::coordinate(sig, 0));
        let suite = zero_mode_report(sig, &alpha, &fields);
        assert!(suite.all_passed(), "{suite}");
    }

    #[test]
    fn zero_mode_contraction_example() {
        // alpha = b1 db2 on A^{2|0}, X = d1: alpha_0 X = -db2 here,
        // matching -iota_X d(alpha) up to the recorded sign
        let sig = ChartSignature::new(2, 0);
        let alpha = SuperForm::basis_one_form(sig, 1)
            .mul_fn(&SuperPolynomial::coordinate(sig, 0));
        let x = SuperVectorField::basis(sig, 0);
        let got = zero_mode_one_form(&alpha, &x);
        let contraction = alpha.d().contract(&x);
        assert_eq!(got, state_of_one_form(&contraction.neg()));
    }
}
