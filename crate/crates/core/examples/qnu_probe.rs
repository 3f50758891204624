use cdo_core::algebroid::{conformal_weight1, ChartAlgebroid, VertexAlgebroid};
use cdo_core::cs_geometry::{sample_base_matrix, BundleChart, ChartModel};
use cdo_core::free_va::conformal::conformal_element_global;
use cdo_core::free_va::{nth_product, state_of_poly, GeneratorDictionary};
use cdo_core::sampler::Sampler;
use cdo_core::scalars::GaussianRational;
use cdo_core::superpoly::SuperForm;

fn main() {
    let d = 1;
    let r = 1;
    let sig = BundleChart::signature_for(ChartModel::Dolbeault, d, r);
    let mut s = Sampler::new(2024 ^ 0xc0);
    let gm = sample_base_matrix(sig, d, 2 * d, &mut s, Some(d));
    let ge = sample_base_matrix(sig, r, 2 * d, &mut s, Some(d));
    let chart = BundleChart::new(ChartModel::Dolbeault, d, r, gm, ge).unwrap().symmetrized();
    let conn = chart.coordinate_connection().unwrap();
    let h = SuperForm::zero(sig, 3);
    let v = ChartAlgebroid::global(conn.clone(), h).unwrap();
    let delta = v.global_delta().unwrap().clone();
    let dict = GeneratorDictionary::with_delta(sig, delta.clone());
    let omega = conn.gamma().supertrace();
    let nu = conformal_element_global(&conn, &delta, &omega).unwrap();
    let q = chart.lift_q();
    // L1 contract for X = Q
    let lhs = nth_product(&nu, 2, &dict.vf(&q));
    let rhs = state_of_poly(&conformal_weight1(&conn, &omega, &q).unwrap());
    println!("L1 Q contract: {}", if lhs == rhs { "OK" } else { "MISMATCH" });
    println!("  fock:    {lhs}");
    println!("  formula: {rhs}");
    // Str tilde Q
    let str_tq = conn.tilde_nabla(&q).supertrace();
    println!("Str tilde Q = {str_tq}");
    // omega(Q)
    let om_q = omega.pair(&q).unwrap();
    println!("omega(Q) = {om_q}");
    // direct: Q0 nu vs -1/2 T^2 (L1 Q)
    let q0nu = nth_product(&dict.vf(&q), 0, &nu);
    let l1q = nth_product(&nu, 2, &dict.vf(&q));
    let rhs2 = l1q.translate().translate().scale(&GaussianRational::from_ratio(-1, 2));
    println!("Q0 nu == -1/2 T^2 (L1 Q state): {}", q0nu == rhs2);
    println!("  q0nu: {q0nu}");
    println!("  rhs2: {rhs2}");
    // conformal lower modes on the shifted generators
    for (name, g) in dict.generator_states() {
        let t = nth_product(&nu, 0, &g);
        if t != g.translate() {
            println!("nu_(0) != T on {name}:");
            println!("  nu0 g = {t}");
            println!("  T g   = {}", g.translate());
        }
        let l0 = nth_product(&nu, 1, &g);
        let expect = match g.weight() {
            Some(w) => g.scale(&GaussianRational::from_int(w)),
            None => continue,
        };
        if l0 != expect {
            println!("nu_(1) != L0 on {name}: {l0}");
        }
    }
    println!("probe done");
}
