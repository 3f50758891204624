//! The n-th products of the free-field vertex superalgebra, computed by
//! the reconstruction recursion: a word `g . rest |0>` is `x_{(-1)} y`
//! where `x` is an iterated-translation image of a generator state, and
//! the iterate formula
//! `(x_{(-1)} y)_(n) = sum_j [ x_{(-1-j)} y_(n+j) + (-1)^{|x||y|} y_(n-1-j) x_(j) ]`
//! reduces everything to single generator modes.

use super::fock::{Field, FockState, GenMode};
use crate::scalars::GaussianRational;
use crate::superpoly::Parity;

/// Binomial coefficient `C(t, s)` for integer `t` and `s >= 0`.
fn binomial(t: i64, s: u32) -> i64 {
    let mut num = 1i64;
    let mut den = 1i64;
    for k in 0..s as i64 {
        num *= t - k;
        den *= k + 1;
    }
    num / den
}

/// The mode `x_(t)` of `x = T^{(s)} (generator state)` as a scaled
/// generator mode, or `None` when the binomial vanishes.
fn shifted_generator_mode(field: Field, idx: usize, s: u32, t: i64) -> Option<(GenMode, i64)> {
    let c = binomial(t, s);
    if c == 0 {
        return None;
    }
    let sign = if s % 2 == 1 { -1 } else { 1 };
    let mode = match field {
        Field::B => GenMode::b(idx, t - s as i64 + 1),
        Field::A => GenMode::a(idx, t - s as i64),
    };
    Some((mode, sign * c))
}

/// `u_(n) v`, bilinear in both states.
pub fn nth_product(u: &FockState, n: i64, v: &FockState) -> FockState {
    let sig = u.signature();
    let mut out = FockState::zero(sig);
    for (word, c) in u.terms() {
        let contrib = word_product(sig, word, n, v);
        out = out.add(&contrib.scale(c));
    }
    out
}

fn word_product(
    sig: crate::superpoly::ChartSignature,
    word: &[GenMode],
    n: i64,
    v: &FockState,
) -> FockState {
    if word.is_empty() {
        // vacuum: identity at n = -1
        return if n == -1 { v.clone() } else { FockState::zero(sig) };
    }
    let g = word[0];
    let rest = &word[1..];
    let s: u32 = match g.field {
        Field::B => (-g.n) as u32,
        Field::A => (-g.n - 1) as u32,
    };
    let x_parity = g.parity(sig);
    let y_parity = Parity::from_count(
        rest.iter().filter(|m| m.parity(sig).is_odd()).count(),
    );
    let koszul = x_parity.koszul(y_parity);
    let wt_rest: i64 = rest.iter().map(|m| m.weight()).sum();
    let wt_v = v.max_weight();
    let mut out = FockState::zero(sig);
    // term 1: x_{(-1-j)} ( y_(n+j) v )
    let jmax1 = wt_rest + wt_v - n - 1;
    let mut j = 0i64;
    while j <= jmax1 {
        let inner = word_product(sig, rest, n + j, v);
        if !inner.is_zero() {
            if let Some((mode, coef)) = shifted_generator_mode(g.field, g.idx, s, -1 - j) {
                out = out.add(
                    &inner
                        .apply_mode(mode)
                        .scale(&GaussianRational::from_int(coef)),
                );
            }
        }
        j += 1;
    }
    // term 2: +- y_(n-1-j) ( x_(j) v )
    let jmax2 = s as i64 + wt_v;
    let mut j = 0i64;
    while j <= jmax2 {
        if let Some((mode, coef)) = shifted_generator_mode(g.field, g.idx, s, j) {
            let xv = v.apply_mode(mode);
            if !xv.is_zero() {
                let mut term = word_product(sig, rest, n - 1 - j, &xv)
                    .scale(&GaussianRational::from_int(coef));
                if koszul < 0 {
                    term = term.neg();
                }
                out = out.add(&term);
            }
        }
        j += 1;
    }
    out
}

/// Left-hand side of the Borcherds commutator: `u_(m) v_(k) w
/// - (-1)^{|u||v|} v_(k) u_(m) w`.
pub fn mode_commutator(u: &FockState, m: i64, v: &FockState, k: i64, w: &FockState) -> FockState {
    let a = nth_product(u, m, &nth_product(v, k, w));
    let mut b = nth_product(v, k, &nth_product(u, m, w));
    let koszul = match (u.parity(), v.parity()) {
        (Some(pu), Some(pv)) => pu.koszul(pv),
        _ => 1,
    };
    if koszul < 0 {
        b = b.neg();
    }
    a.sub(&b)
}

/// Right-hand side of the Borcherds commutator:
/// `sum_{j>=0} C(m, j) (u_(j) v)_(m+k-j) w`.
pub fn borcherds_rhs(u: &FockState, m: i64, v: &FockState, k: i64, w: &FockState) -> FockState {
    let sig = u.signature();
    let mut out = FockState::zero(sig);
    let bound = u.max_weight() + v.max_weight();
    for j in 0..=bound.max(0) {
        let c = binomial(m, j as u32);
        if c == 0 {
            continue;
        }
        let uv = nth_product(u, j, v);
        if uv.is_zero() {
            continue;
        }
        out = out.add(
            &nth_product(&uv, m + k - j, w).scale(&GaussianRational::from_int(c)),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpoly::ChartSignature;

    fn db_state(sig: ChartSignature, i: usize) -> FockState {
        FockState::vacuum(sig).apply_mode(GenMode::b(i, -1))
    }

    fn del_state(sig: ChartSignature, i: usize) -> FockState {
        FockState::vacuum(sig).apply_mode(GenMode::a(i, -1))
    }

    #[test]
    fn pairing_modes() {
        // (db^i)_(1) d_j = eps_j delta^i_j |0>
        for (p, q) in [(2, 0), (1, 1), (0, 2)] {
            let sig = ChartSignature::new(p, q);
            for i in 0..sig.n() {
                for j in 0..sig.n() {
                    let got = nth_product(&db_state(sig, i), 1, &del_state(sig, j));
                    let expect = if i == j {
                        let v = FockState::vacuum(sig);
                        if sig.eps(j) < 0 {
                            v.neg()
                        } else {
                            v
                        }
                    } else {
                        FockState::zero(sig)
                    };
                    assert_eq!(got, expect, "i={i} j={j} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn grading_bound() {
        // u_(n) v = 0 when n >= wt(u) + wt(v)
        let sig = ChartSignature::new(1, 1);
        let u = db_state(sig, 0).apply_mode(GenMode::a(1, -1));
        let v = del_state(sig, 1);
        let bound = u.max_weight() + v.max_weight();
        for n in bound..bound + 3 {
            assert!(nth_product(&u, n, &v).is_zero(), "n={n}");
        }
    }

    #[test]
    fn translation_derivative_rule() {
        // (T u)_(n) = -n u_(n-1)
        let sig = ChartSignature::new(1, 1);
        let u = db_state(sig, 0);
        let v = del_state(sig, 0).apply_mode(GenMode::b(1, 0));
        let tu = u.translate();
        for n in -2..3i64 {
            let lhs = nth_product(&tu, n, &v);
            let rhs = nth_product(&u, n - 1, &v).scale(&GaussianRational::from_int(-n));
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn vacuum_is_identity() {
        let sig = ChartSignature::new(1, 0);
        let v = db_state(sig, 0);
        assert_eq!(nth_product(&FockState::vacuum(sig), -1, &v), v);
        assert!(nth_product(&FockState::vacuum(sig), 0, &v).is_zero());
    }

    #[test]
    fn skew_symmetry_low_weight() {
        // u_(n) v = (-1)^{|u||v|} sum_j (-1)^{n+1+j} T^{(j)} (v_(n+j) u)
        let sig = ChartSignature::new(1, 1);
        let states = [
            db_state(sig, 0),
            db_state(sig, 1),
            del_state(sig, 0),
            del_state(sig, 1),
            db_state(sig, 0).apply_mode(GenMode::b(1, 0)),
        ];
        for u in &states {
            for v in &states {
                let koszul = u.parity().unwrap().koszul(v.parity().unwrap());
                for n in -2..2i64 {
                    let lhs = nth_product(u, n, v);
                    let mut rhs = FockState::zero(sig);
                    for j in 0..6u32 {
                        let inner = nth_product(v, n + j as i64, u);
                        if inner.is_zero() {
                            continue;
                        }
                        let mut term = inner.translate_divided(j);
                        if (n + 1 + j as i64) % 2 != 0 {
                            term = term.neg();
                        }
                        rhs = rhs.add(&term);
                    }
                    if koszul < 0 {
                        rhs = rhs.neg();
                    }
                    assert_eq!(lhs, rhs, "skew n={n}");
                }
            }
        }
    }
}
