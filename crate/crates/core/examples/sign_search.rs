// search the Koszul-sign structure of -(nabla df)(X) against transport
use cdo_core::algebroid::{ChartAlgebroid, ConnectionData, DeltaMap, VertexAlgebroid};
use cdo_core::sampler::Sampler;
use cdo_core::superpoly::form::d_poly;
use cdo_core::superpoly::{values_to_one_form, ChartSignature, Parity, SuperPolynomial, SuperVectorField};

fn main() {
    // candidate exponents: bits select A_m|f|, A_m|X|, A_m
    let mut viable: Vec<(u8, u8)> = (0..8u8).flat_map(|a| (0..8u8).map(move |b| (a, b))).collect();
    for (p, q, seed) in [(1usize, 1usize, 3u64), (0, 2, 4), (2, 1, 5), (2, 2, 6)] {
        let sig = ChartSignature::new(p, q);
        let mut s = Sampler::new(seed);
        let gamma = s.connection_form(sig);
        let conn = ConnectionData::new(gamma.clone()).unwrap();
        let h = conn.cs_form();
        let vt = ChartAlgebroid::transported(
            ChartAlgebroid::coordinate(sig),
            DeltaMap::Connection { gamma, b: cdo_core::superpoly::SuperForm::zero(sig, 2) },
        );
        let _ = h;
        for _ in 0..60 {
            let f = s.any_poly(sig);
            let fp = match f.parity() { Some(p) => p, None => continue };
            let x = s.any_vector_field(sig);
            let expect = vt.star(&f, &x);
            let df = d_poly(&f);
            let dfx = df.pair(&x).unwrap();
            viable.retain(|&(s1, s2)| {
                let mut vals = Vec::new();
                for m in 0..sig.n() {
                    let am = sig.parity(m);
                    let dm = SuperVectorField::basis(sig, m);
                    let sgn = |bits: u8| -> i8 {
                        let mut v = 1i8;
                        if bits & 1 != 0 { v *= am.koszul(fp); }
                        if bits & 2 != 0 { v *= am.koszul(x.parity()); }
                        if bits & 4 != 0 && am == Parity::Odd { v = -v; }
                        v
                    };
                    let mut t1 = dm.apply(&dfx);
                    if sgn(s1) < 0 { t1 = t1.neg(); }
                    let mut t2 = df.pair(&conn.nabla_vf(&dm, &x)).unwrap();
                    if sgn(s2) < 0 { t2 = t2.neg(); }
                    vals.push(t1.sub(&t2));
                }
                values_to_one_form(sig, &vals).neg() == expect
            });
        }
    }
    println!("viable (s1,s2) bitmasks [1=Am|f|, 2=Am|X|, 4=Am]: {viable:?}");
}
