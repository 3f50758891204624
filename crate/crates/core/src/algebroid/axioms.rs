//! The seven vertex-superalgebroid identities, checked exactly.
//!
//! The even versions are classical; the Koszul signs below are forced by
//! skew-symmetry and the iterate formula of a vertex superalgebra, writing
//! the three structure maps through a splitting of the weight-one piece.
//! Any single counterexample is a hard failure; no tolerances exist.

use super::VertexAlgebroid;
use crate::report::{CheckReport, SuiteReport};
use crate::sampler::Sampler;
use crate::superpoly::Parity;

const AXIOM_NAMES: [&str; 7] = [
    "{X,Y} = (-1)^{|X||Y|} {Y,X}",
    "d{X,Y} = {X,Y}_O + (-1)^{|X||Y|} {Y,X}_O",
    "(fg)*X - f*(gX) - f(g*X) = -(-1)^{|X||g|+|f|(|X|+|g|)} (Xg)df - (-1)^{(|f|+|g|)|X|} (Xf)dg",
    "{X,fY} - (-1)^{|X||f|} f{X,Y} = -(-1)^{|X|(|f|+|Y|)} (f*Y)(X) - (-1)^{(|X|+|f|)|Y|} Y(Xf)",
    "{X,fY}_O - (-1)^{|X||f|} f{X,Y}_O = -L_X(f*Y) + (Xf)*Y + (-1)^{|X||f|} f*[X,Y]",
    "X{Y,Z} - {[X,Y],Z} - (-1)^{|X||Y|} {Y,[X,Z]} = {X,Y}_O(Z) + (-1)^{|Y||Z|} {X,Z}_O(Y)",
    "L_X{Y,Z}_O - (-1)^{|X||Y|} L_Y{X,Z}_O + (-1)^{(|X|+|Y|)|Z|} L_Z{X,Y}_O \
     + {X,[Y,Z]}_O - (-1)^{|X||Y|} {Y,[X,Z]}_O - {[X,Y],Z}_O = d({X,Y}_O(Z))",
];

fn sgn(p: i8) -> bool {
    p < 0
}

/// Evaluate one axiom on a concrete tuple; returns the failing residual
/// description when nonzero.
fn axiom_holds<V: VertexAlgebroid>(
    v: &V,
    idx: usize,
    f: &V::Fun,
    g: &V::Fun,
    x: &V::Field,
    y: &V::Field,
    z: &V::Field,
) -> bool {
    let pf = match v.parity_fun(f) {
        Some(p) => p,
        None => return true, // inhomogeneous samples are skipped
    };
    let pg = match v.parity_fun(g) {
        Some(p) => p,
        None => return true,
    };
    let px = v.parity_field(x).unwrap_or(Parity::Even);
    let py = v.parity_field(y).unwrap_or(Parity::Even);
    let pz = v.parity_field(z).unwrap_or(Parity::Even);
    match idx {
        0 => {
            let mut rhs = v.brace(y, x);
            if sgn(px.koszul(py)) {
                rhs = v.neg_fun(&rhs);
            }
            let lhs = v.brace(x, y);
            v.is_zero_fun(&v.add_fun(&lhs, &v.neg_fun(&rhs)))
        }
        1 => {
            let lhs = v.d(&v.brace(x, y));
            let mut second = v.brace_omega(y, x);
            if sgn(px.koszul(py)) {
                second = v.neg_form(&second);
            }
            let rhs = v.add_form(&v.brace_omega(x, y), &second);
            v.is_zero_form(&v.add_form(&lhs, &v.neg_form(&rhs)))
        }
        2 => {
            let fg = v.mul_fun(f, g);
            let gx = v.mul_fun_field(g, x);
            let lhs = {
                let t1 = v.star(&fg, x);
                let t2 = v.star(f, &gx);
                let t3 = v.mul_fun_form(f, &v.star(g, x));
                v.add_form(&t1, &v.neg_form(&v.add_form(&t2, &t3)))
            };
            // -(-1)^{|X||g| + |f|(|X|+|g|)} (Xg) df - (-1)^{(|f|+|g|)|X|} (Xf) dg
            let mut t1 = v.mul_fun_form(&v.act(x, g), &v.d(f));
            let s1 = px.koszul(pg) * pf.koszul(px.combine(pg));
            if !sgn(s1) {
                t1 = v.neg_form(&t1);
            }
            let mut t2 = v.mul_fun_form(&v.act(x, f), &v.d(g));
            let s2 = pf.combine(pg).koszul(px);
            if !sgn(s2) {
                t2 = v.neg_form(&t2);
            }
            let rhs = v.add_form(&t1, &t2);
            v.is_zero_form(&v.add_form(&lhs, &v.neg_form(&rhs)))
        }
        3 => {
            let fy = v.mul_fun_field(f, y);
            let mut lhs2 = v.mul_fun(f, &v.brace(x, y));
            if sgn(px.koszul(pf)) {
                lhs2 = v.neg_fun(&lhs2);
            }
            let lhs = v.add_fun(&v.brace(x, &fy), &v.neg_fun(&lhs2));
            let mut t1 = v.pair(&v.star(f, y), x);
            if !sgn(px.koszul(pf.combine(py))) {
                t1 = v.neg_fun(&t1);
            }
            let mut t2 = v.act(y, &v.act(x, f));
            if !sgn(px.combine(pf).koszul(py)) {
                t2 = v.neg_fun(&t2);
            }
            let rhs = v.add_fun(&t1, &t2);
            v.is_zero_fun(&v.add_fun(&lhs, &v.neg_fun(&rhs)))
        }
        4 => {
            let fy = v.mul_fun_field(f, y);
            let mut lhs2 = v.mul_fun_form(f, &v.brace_omega(x, y));
            if sgn(px.koszul(pf)) {
                lhs2 = v.neg_form(&lhs2);
            }
            let lhs = v.add_form(&v.brace_omega(x, &fy), &v.neg_form(&lhs2));
            let t1 = v.neg_form(&v.lie(x, &v.star(f, y)));
            let t2 = v.star(&v.act(x, f), y);
            let mut t3 = v.star(f, &v.bracket(x, y));
            if sgn(px.koszul(pf)) {
                t3 = v.neg_form(&t3);
            }
            let rhs = v.add_form(&v.add_form(&t1, &t2), &t3);
            v.is_zero_form(&v.add_form(&lhs, &v.neg_form(&rhs)))
        }
        5 => {
            let t1 = v.act(x, &v.brace(y, z));
            let t2 = v.neg_fun(&v.brace(&v.bracket(x, y), z));
            let mut t3 = v.brace(y, &v.bracket(x, z));
            if !sgn(px.koszul(py)) {
                t3 = v.neg_fun(&t3);
            }
            let lhs = v.add_fun(&v.add_fun(&t1, &t2), &t3);
            let r1 = v.pair(&v.brace_omega(x, y), z);
            let mut r2 = v.pair(&v.brace_omega(x, z), y);
            if sgn(py.koszul(pz)) {
                r2 = v.neg_fun(&r2);
            }
            let rhs = v.add_fun(&r1, &r2);
            v.is_zero_fun(&v.add_fun(&lhs, &v.neg_fun(&rhs)))
        }
        6 => {
            let mut acc = v.lie(x, &v.brace_omega(y, z));
            let mut t = v.lie(y, &v.brace_omega(x, z));
            if !sgn(px.koszul(py)) {
                t = v.neg_form(&t);
            }
            acc = v.add_form(&acc, &t);
            let mut t = v.lie(z, &v.brace_omega(x, y));
            if sgn(px.combine(py).koszul(pz)) {
                t = v.neg_form(&t);
            }
            acc = v.add_form(&acc, &t);
            acc = v.add_form(&acc, &v.brace_omega(x, &v.bracket(y, z)));
            let mut t = v.brace_omega(y, &v.bracket(x, z));
            if !sgn(px.koszul(py)) {
                t = v.neg_form(&t);
            }
            acc = v.add_form(&acc, &t);
            acc = v.add_form(&acc, &v.neg_form(&v.brace_omega(&v.bracket(x, y), z)));
            let rhs = v.d(&v.pair(&v.brace_omega(x, y), z));
            v.is_zero_form(&v.add_form(&acc, &v.neg_form(&rhs)))
        }
        _ => unreachable!(),
    }
}

/// Check all seven identities on `samples` random tuples plus an
/// exhaustive sweep over monomials of degree at most `exhaustive_degree`
/// (skipped when `None`).
pub fn check_axioms<V: VertexAlgebroid + Sync>(
    v: &V,
    sampler: &mut Sampler,
    samples: usize,
    exhaustive_degree: Option<u32>,
) -> SuiteReport {
    let mut suite = SuiteReport::new(format!("axioms[{}]", v.describe()));
    // random phase
    let mut tuples = Vec::with_capacity(samples);
    for _ in 0..samples {
        let f = v.sample_fun(sampler);
        let g = v.sample_fun(sampler);
        let x = v.sample_field(sampler);
        let y = v.sample_field(sampler);
        let z = v.sample_field(sampler);
        tuples.push((f, g, x, y, z));
    }
    for idx in 0..7 {
        let mut n = 0usize;
        let mut witness: Option<String> = None;
        for (f, g, x, y, z) in &tuples {
            n += 1;
            if !axiom_holds(v, idx, f, g, x, y, z) {
                witness = Some(format!("f={f}; g={g}; X={x}; Y={y}; Z={z}"));
                break;
            }
        }
        if witness.is_none() {
            if let Some(deg) = exhaustive_degree {
                n += exhaustive_count(v, idx, deg);
                if let Some(w) = exhaustive_failure(v, idx, deg) {
                    witness = Some(w);
                }
            }
        }
        suite.push(CheckReport::from_outcome(
            format!("axiom{}", idx + 1),
            AXIOM_NAMES[idx],
            n,
            witness,
        ));
    }
    suite
}

fn exhaustive_count<V: VertexAlgebroid>(v: &V, idx: usize, deg: u32) -> usize {
    let nf = v.enumerate_funs(deg).len();
    let nx = v.enumerate_fields(deg).len();
    match idx {
        0 | 1 => nx * nx,
        2 => nf * nf * nx,
        3 | 4 => nf * nx * nx,
        5 | 6 => nx * nx * nx,
        _ => 0,
    }
}

fn exhaustive_failure<V: VertexAlgebroid + Sync>(v: &V, idx: usize, deg: u32) -> Option<String> {
    use rayon::prelude::*;
    let funs = v.enumerate_funs(deg);
    let fields = v.enumerate_fields(deg);
    let one = &funs[0]; // degree-0 monomial is always first after sort
    debug_assert!(v.is_zero_fun(&v.add_fun(one, &v.neg_fun(&v.mul_fun(one, one)))));
    match idx {
        0 | 1 => fields.par_iter().find_map_any(|x| {
            for y in &fields {
                if !axiom_holds(v, idx, one, one, x, y, y) {
                    return Some(format!("X={x}; Y={y}"));
                }
            }
            None
        }),
        2 => funs.par_iter().find_map_any(|f| {
            for g in &funs {
                for x in &fields {
                    if !axiom_holds(v, idx, f, g, x, x, x) {
                        return Some(format!("f={f}; g={g}; X={x}"));
                    }
                }
            }
            None
        }),
        3 | 4 => funs.par_iter().find_map_any(|f| {
            for x in &fields {
                for y in &fields {
                    if !axiom_holds(v, idx, f, one, x, y, y) {
                        return Some(format!("f={f}; X={x}; Y={y}"));
                    }
                }
            }
            None
        }),
        5 | 6 => fields.par_iter().find_map_any(|x| {
            for y in &fields {
                for z in &fields {
                    if !axiom_holds(v, idx, one, one, x, y, z) {
                        return Some(format!("X={x}; Y={y}; Z={z}"));
                    }
                }
            }
            None
        }),
        _ => None,
    }
}
