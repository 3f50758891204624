//! Normal-ordered states of the free-field realization.
//!
//! For a chart `A^{p|q}` the vertex superalgebra is generated by pairs
//! `b^i_n`, `a_{i,n}` with `[a_{i,n}, b^j_m] = delta^j_i delta_{n,-m}` and
//! all other supercommutators zero; generators with `i > p` are odd. The
//! vacuum module is spanned by normal-ordered words of creation modes
//! (`b^i_n` with `n <= 0`, `a_{i,n}` with `n <= -1`) applied to `|0>`.
//! Words are kept sorted (b-modes before a-modes, then by index, then by
//! level), with Koszul signs from swapping odd modes, so state equality is
//! structural.

use crate::scalars::GaussianRational;
use crate::superpoly::{ChartSignature, Parity};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    /// Coordinate field `b^i` (weight-0 generator).
    B,
    /// Momentum field `a_i` (weight-1 generator).
    A,
}

/// One generator mode `b^i_n` or `a_{i,n}` (index 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenMode {
    pub field: Field,
    pub idx: usize,
    pub n: i64,
}

impl GenMode {
    pub fn b(idx: usize, n: i64) -> Self {
        GenMode { field: Field::B, idx, n }
    }

    pub fn a(idx: usize, n: i64) -> Self {
        GenMode { field: Field::A, idx, n }
    }

    pub fn is_creation(&self) -> bool {
        match self.field {
            Field::B => self.n <= 0,
            Field::A => self.n <= -1,
        }
    }

    pub fn weight(&self) -> i64 {
        -self.n
    }

    pub fn parity(&self, sig: ChartSignature) -> Parity {
        sig.parity(self.idx)
    }

    /// Contraction of an annihilation mode with a creation mode:
    /// `[a_{i,n}, b^j_m] = delta delta` gives `+1`; the reversed commutator
    /// picks up the Koszul sign of the pair.
    fn contraction(&self, other: &GenMode, sig: ChartSignature) -> Option<GaussianRational> {
        if self.idx != other.idx || self.n != -other.n || self.field == other.field {
            return None;
        }
        match self.field {
            Field::A => Some(GaussianRational::one()),
            Field::B => {
                // [b_n, a_{-n}] = -(-1)^{|b||a|} [a_{-n}, b_n]
                if sig.parity(self.idx).is_odd() {
                    Some(GaussianRational::one())
                } else {
                    Some(-GaussianRational::one())
                }
            }
        }
    }
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Field::B => write!(f, "b({},{})", self.idx + 1, self.n),
            Field::A => write!(f, "a({},{})", self.idx + 1, self.n),
        }
    }
}

/// A finite linear combination of normal-ordered creation words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockState {
    sig: ChartSignature,
    terms: BTreeMap<Vec<GenMode>, GaussianRational>,
}

impl FockState {
    pub fn zero(sig: ChartSignature) -> Self {
        FockState { sig, terms: BTreeMap::new() }
    }

    pub fn vacuum(sig: ChartSignature) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), GaussianRational::one());
        FockState { sig, terms }
    }

    /// A single normal-ordered word (normalized on insertion).
    pub fn word(sig: ChartSignature, modes: &[GenMode]) -> Self {
        let mut out = FockState::vacuum(sig);
        for m in modes.iter().rev() {
            out = out.apply_mode(*m);
        }
        out
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<GenMode>, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, word: Vec<GenMode>, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect();
        FockState { sig: self.sig, terms }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return FockState::zero(self.sig);
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, v)| (w.clone(), v.clone() * c.clone()))
            .collect();
        FockState { sig: self.sig, terms }
    }

    /// Weight of a homogeneous state; `None` for mixed or zero states.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let w0: i64 = it.next()?.iter().map(|m| m.weight()).sum();
        for w in it {
            if w.iter().map(|m| m.weight()).sum::<i64>() != w0 {
                return None;
            }
        }
        Some(w0)
    }

    /// Split into weight-homogeneous components.
    pub fn weight_components(&self) -> BTreeMap<i64, FockState> {
        let mut out: BTreeMap<i64, FockState> = BTreeMap::new();
        for (w, c) in &self.terms {
            let k: i64 = w.iter().map(|m| m.weight()).sum();
            out.entry(k)
                .or_insert_with(|| FockState::zero(self.sig))
                .insert(w.clone(), c.clone());
        }
        out
    }

    pub fn max_weight(&self) -> i64 {
        self.terms
            .keys()
            .map(|w| w.iter().map(|m| m.weight()).sum::<i64>())
            .max()
            .unwrap_or(0)
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let par = |w: &Vec<GenMode>| {
            Parity::from_count(w.iter().filter(|m| m.parity(self.sig).is_odd()).count())
        };
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(w) => par(w),
        };
        for w in it {
            if par(w) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Apply a single generator mode on the left, renormalizing.
    pub fn apply_mode(&self, g: GenMode) -> FockState {
        let mut out = FockState::zero(self.sig);
        for (word, c) in &self.terms {
            if g.is_creation() {
                insert_creation(self.sig, &mut out, g, word, c.clone());
            } else {
                annihilate(self.sig, &mut out, g, word, c.clone());
            }
        }
        out
    }

    /// The translation operator: `[T, b^i_n] = (1-n) b^i_{n-1}`,
    /// `[T, a_{i,n}] = -n a_{i,n-1}`, `T|0> = 0`.
    pub fn translate(&self) -> FockState {
        let mut out = FockState::zero(self.sig);
        for (word, c) in &self.terms {
            for k in 0..word.len() {
                let m = word[k];
                let factor = match m.field {
                    Field::B => 1 - m.n,
                    Field::A => -m.n,
                };
                if factor == 0 {
                    continue;
                }
                let mut modes = word.clone();
                modes[k] = GenMode { field: m.field, idx: m.idx, n: m.n - 1 };
                // re-normalize the modified word: rebuild from scratch
                let mut st = FockState::vacuum(self.sig);
                for mm in modes.iter().rev() {
                    st = st.apply_mode(*mm);
                }
                out = out.add(&st.scale(&(c.clone() * GaussianRational::from_int(factor))));
            }
        }
        out
    }

    /// Iterated translation divided by factorial: `T^k / k!`.
    pub fn translate_divided(&self, k: u32) -> FockState {
        let mut out = self.clone();
        for j in 1..=k {
            out = out.translate().scale(
                &GaussianRational::from_ratio(1, j as i64),
            );
        }
        out
    }
}

/// Insert a creation mode at its sorted position, tracking Koszul signs.
/// A repeated odd mode kills the term.
fn insert_creation(
    sig: ChartSignature,
    out: &mut FockState,
    g: GenMode,
    word: &[GenMode],
    c: GaussianRational,
) {
    let mut sign = 1i8;
    let mut pos = 0;
    for (k, m) in word.iter().enumerate() {
        if *m >= g {
            pos = k;
            if *m == g && g.parity(sig).is_odd() {
                return; // odd square
            }
            let mut new = word.to_vec();
            new.insert(pos, g);
            let v = if sign < 0 { -c } else { c };
            out.insert(new, v);
            return;
        }
        if g.parity(sig).is_odd() && m.parity(sig).is_odd() {
            sign = -sign;
        }
        pos = k + 1;
    }
    let mut new = word.to_vec();
    new.insert(pos, g);
    let v = if sign < 0 { -c } else { c };
    out.insert(new, v);
}

/// Move an annihilation mode rightward, summing contractions; it kills the
/// vacuum at the end.
fn annihilate(
    sig: ChartSignature,
    out: &mut FockState,
    g: GenMode,
    word: &[GenMode],
    c: GaussianRational,
) {
    let mut sign = 1i8;
    for (k, m) in word.iter().enumerate() {
        if let Some(coef) = g.contraction(m, sig) {
            let mut new = word.to_vec();
            new.remove(k);
            let mut v = c.clone() * coef;
            if sign < 0 {
                v = -v;
            }
            out.insert(new, v);
        }
        if g.parity(sig).is_odd() && m.parity(sig).is_odd() {
            sign = -sign;
        }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for m in w {
                write!(f, " {m}")?;
            }
            write!(f, " |0>")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig12() -> ChartSignature {
        ChartSignature::new(1, 2)
    }

    #[test]
    fn annihilator_kills_vacuum() {
        let sig = sig12();
        let v = FockState::vacuum(sig);
        assert!(v.apply_mode(GenMode::a(0, 0)).is_zero());
        assert!(v.apply_mode(GenMode::b(0, 1)).is_zero());
    }

    #[test]
    fn basic_contraction() {
        // a_{1,1} b^1_{-1} |0> = |0>
        let sig = sig12();
        let st = FockState::vacuum(sig).apply_mode(GenMode::b(0, -1));
        assert_eq!(st.apply_mode(GenMode::a(0, 1)), FockState::vacuum(sig));
    }

    #[test]
    fn zero_mode_acts_as_derivative() {
        // a_{1,0} (b^1_0)^2 |0> = 2 b^1_0 |0>
        let sig = sig12();
        let b10 = GenMode::b(0, 0);
        let st = FockState::vacuum(sig).apply_mode(b10).apply_mode(b10);
        let expect = FockState::vacuum(sig)
            .apply_mode(b10)
            .scale(&GaussianRational::from_int(2));
        assert_eq!(st.apply_mode(GenMode::a(0, 0)), expect);
    }

    #[test]
    fn odd_square_dies() {
        let sig = sig12();
        let st = FockState::vacuum(sig)
            .apply_mode(GenMode::b(1, 0))
            .apply_mode(GenMode::b(1, 0));
        assert!(st.is_zero());
    }

    #[test]
    fn odd_swap_sign() {
        // b^3_0 b^2_0 |0> = - b^2_0 b^3_0 |0>
        let sig = sig12();
        let ab = FockState::vacuum(sig)
            .apply_mode(GenMode::b(2, 0))
            .apply_mode(GenMode::b(1, 0));
        let ba = FockState::vacuum(sig)
            .apply_mode(GenMode::b(1, 0))
            .apply_mode(GenMode::b(2, 0));
        assert_eq!(ab, ba.neg());
    }

    #[test]
    fn weights() {
        let sig = sig12();
        let st = FockState::vacuum(sig)
            .apply_mode(GenMode::b(0, -1))
            .apply_mode(GenMode::a(0, -2));
        assert_eq!(st.weight(), Some(3));
    }

    #[test]
    fn translation_on_vacuum_and_functions() {
        let sig = sig12();
        assert!(FockState::vacuum(sig).translate().is_zero());
        // T(b^1 |0>) = b^1_{-1} |0>
        let f = FockState::vacuum(sig).apply_mode(GenMode::b(0, 0));
        let expect = FockState::vacuum(sig).apply_mode(GenMode::b(0, -1));
        assert_eq!(f.translate(), expect);
    }
}
