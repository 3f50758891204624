// diagnostic: connection-based structure vs transport route + axioms
use cdo_core::algebroid::{check_axioms, poincare_potential, ChartAlgebroid, ConnectionData, DeltaMap, VertexAlgebroid};
use cdo_core::sampler::Sampler;
use cdo_core::superpoly::ChartSignature;

fn main() {
    for (p, q, seed) in [(2usize, 0usize, 1u64), (3, 0, 2), (1, 1, 3), (0, 2, 4), (2, 1, 5)] {
        let sig = ChartSignature::new(p, q);
        let mut s = Sampler::new(seed);
        let gamma = s.connection_form(sig);
        let conn = ConnectionData::new(gamma.clone()).unwrap();
        // H = CS(Gamma) + d(random 2-form), so dH = Str(R^R) exactly
        let extra = s.even_form(sig, 2).d();
        let h = conn.cs_form().add(&extra);
        let v = match ChartAlgebroid::global(conn.clone(), h.clone()) {
            Ok(v) => v,
            Err(e) => { println!("({p},{q}): constructor error {e}"); continue }
        };
        // transport route: B with dB = H - CS(Gamma)
        let b = poincare_potential(&h.sub(&conn.cs_form())).unwrap();
        let vt = ChartAlgebroid::transported(
            ChartAlgebroid::coordinate(sig),
            DeltaMap::Connection { gamma: gamma.clone(), b },
        );
        let mut ok = true;
        for k in 0..40 {
            let f = s.any_poly(sig);
            let x = s.any_vector_field(sig);
            let y = s.any_vector_field(sig);
            if v.star(&f, &x) != vt.star(&f, &x) {
                println!("({p},{q}) k={k}: STAR mismatch f={f} X={x}");
                println!("  formula: {}", v.star(&f, &x));
                println!("  transport: {}", vt.star(&f, &x));
                ok = false; break;
            }
            if v.brace(&x, &y) != vt.brace(&x, &y) {
                println!("({p},{q}) k={k}: BRACE mismatch X={x} Y={y}");
                println!("  formula: {}", v.brace(&x, &y));
                println!("  transport: {}", vt.brace(&x, &y));
                ok = false; break;
            }
            if v.brace_omega(&x, &y) != vt.brace_omega(&x, &y) {
                println!("({p},{q}) k={k}: BRACE_OMEGA mismatch X={x} Y={y}");
                println!("  formula: {}", v.brace_omega(&x, &y));
                println!("  transport: {}", vt.brace_omega(&x, &y));
                ok = false; break;
            }
        }
        if ok { println!("({p},{q}): formula == transport on 40 samples"); }
        let suite = check_axioms(&v, &mut s, 40, None);
        println!("({p},{q}): axioms pass = {}", suite.all_passed());
        if let Some(f) = suite.first_failure() { println!("{f}"); }
    }
}
