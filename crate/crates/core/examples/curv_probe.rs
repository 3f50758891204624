// operator curvature R(Y,Z)X vs matrix curvature via the frame relation
use cdo_core::algebroid::ConnectionData;
use cdo_core::sampler::Sampler;
use cdo_core::superpoly::{ChartSignature, SuperVectorField};

fn main() {
    for (p, q, seed) in [(2usize, 0usize, 1u64), (1, 1, 3), (0, 2, 4), (2, 1, 5)] {
        let sig = ChartSignature::new(p, q);
        let mut s = Sampler::new(seed);
        let conn = ConnectionData::new(s.connection_form(sig)).unwrap();
        let mut ok = true;
        'outer: for _ in 0..25 {
            let y = s.any_vector_field(sig);
            let z = s.any_vector_field(sig);
            for i in 0..sig.n() {
                let di = SuperVectorField::basis(sig, i);
                // operator route
                let a = conn.nabla_vf(&y, &conn.nabla_vf(&z, &di));
                let mut b = conn.nabla_vf(&z, &conn.nabla_vf(&y, &di));
                if y.parity().koszul(z.parity()) < 0 { b = b.neg(); }
                let c = conn.nabla_vf(&y.bracket(&z), &di);
                let op = a.sub(&b).sub(&c);
                // matrix route: eps_i eps_ij (i_Y i_Z R^j_i) d_j,
                // contracting Y first, then Z
                let mut comps = Vec::new();
                for j in 0..sig.n() {
                    let e = conn.curvature().entry(j, i);
                    let mut v = e.contract(&y).contract(&z).into_poly();
                    if y.parity().koszul(z.parity()) < 0 { v = v.neg(); }
                    if sig.eps(i) * sig.eps_pair(i, j) < 0 { v = v.neg(); }
                    comps.push(v);
                }
                let mat = SuperVectorField::new(
                    sig, comps,
                    y.parity().combine(z.parity()).combine(sig.parity(i)),
                );
                let mat = match mat { Ok(m) => m, Err(_) => { println!("({p},{q}): parity issue"); ok = false; break 'outer; } };
                if op.components() != mat.components() {
                    println!("({p},{q}): curvature mismatch at i={i} Y={y} Z={z}");
                    println!("  operator: {op}");
                    println!("  matrix:   {mat}");
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok { println!("({p},{q}): operator curvature == matrix curvature"); }
    }
}
