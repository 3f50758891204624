// minimal-case probe: star formula-vs-transport13 on A^{2|0}
use cdo_core::algebroid::{ChartAlgebroid, ConnectionData, DeltaMap, VertexAlgebroid};
use cdo_core::superpoly::{ChartSignature, MatrixForm, Parity, SuperForm, SuperPolynomial, SuperVectorField};

fn main() {
    let sig = ChartSignature::new(2, 0);
    let b = |i: usize| SuperPolynomial::coordinate(sig, i);
    let coords: Vec<SuperPolynomial> = vec![b(0), b(1)];
    // single-entry Gammas: entry (j0,i0) = coeff * db^k
    for j0 in 0..2 {
        for i0 in 0..2 {
            for k in 0..2 {
                for cidx in 0..2 {
                    let mut gamma = MatrixForm::zero(sig, 1);
                    let mut e = SuperForm::zero(sig, 1);
                    e.insert_raw(vec![k], coords[cidx].clone());
                    gamma.set_entry(j0, i0, e);
                    let conn = ConnectionData::new(gamma.clone()).unwrap();
                    let h = conn.cs_form();
                    let v = ChartAlgebroid::global(conn.clone(), h).unwrap();
                    let vt = ChartAlgebroid::transported(
                        ChartAlgebroid::coordinate(sig),
                        DeltaMap::Connection { gamma: gamma.clone(), b: SuperForm::zero(sig, 2) },
                    );
                    // f, X over small monomials
                    for fidx in 0..2 {
                        let f = coords[fidx].clone();
                        for xc in 0..2 {
                            for xi in 0..2 {
                                let x = SuperVectorField::basis(sig, xi)
                                    .scale_fn(&coords[xc]).unwrap();
                                let a = v.star(&f, &x);
                                let t = vt.star(&f, &x);
                                if a != t {
                                    println!("G[{j0}{i0}]=b{}*db{} f=b{} X=b{}@{}:", cidx+1, k+1, fidx+1, xc+1, xi+1);
                                    println!("  formula  = {a}");
                                    println!("  transport= {t}");
                                }
                                let ba = v.brace(&x, &x);
                                let bt = vt.brace(&x, &x);
                                if ba != bt {
                                    println!("BRACE G[{j0}{i0}]=b{}db{} X=b{}@{}: {ba} vs {bt}", cidx+1, k+1, xc+1, xi+1);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    println!("probe done");
}
