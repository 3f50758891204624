//! Supercommutative polynomial calculus on a chart `A^{p|q}`.
//!
//! Coordinates are `b^1, ..., b^p` (even) and `b^{p+1}, ..., b^{p+q}` (odd);
//! indices are 0-based in code and 1-based in display. Functions are
//! elements of the free supercommutative ring over the Gaussian rationals,
//! with odd variables squaring to zero.
//!
//! Sign conventions live here and are calibrated by the pairing
//! `db^i(d_j) = eps_j delta^i_j` together with the left-derivation rule for
//! partial derivatives; everything downstream (forms, Cartan calculus,
//! matrix forms) inherits them.

pub mod form;
mod matrix;
pub mod parser;
mod vector_field;

pub use form::{one_form_from_contractions, values_to_one_form, SuperForm};
pub use matrix::MatrixForm;
pub use vector_field::SuperVectorField;

use crate::scalars::GaussianRational;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("coordinate index {0} out of range for chart with {1} coordinates")]
    IndexOutOfRange(usize, usize),
    #[error("chart signatures differ: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("form degree mismatch: expected {0}, got {1}")]
    DegreeMismatch(usize, usize),
    #[error("element is not parity-homogeneous")]
    MixedParity,
    #[error("matrix is not invertible over the chart ring")]
    NotInvertible,
}

/// Parity of a homogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// `(-1)^{self * other}` as a sign.
    pub fn koszul(self, other: Parity) -> i8 {
        if self == Parity::Odd && other == Parity::Odd {
            -1
        } else {
            1
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Chart signature: `p` even coordinates followed by `q` odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChartSignature {
    pub p: usize,
    pub q: usize,
}

impl ChartSignature {
    pub fn new(p: usize, q: usize) -> Self {
        ChartSignature { p, q }
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn parity(&self, i: usize) -> Parity {
        if i < self.p {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `eps_i = (-1)^{|b^i|}`.
    pub fn eps(&self, i: usize) -> i8 {
        if i < self.p {
            1
        } else {
            -1
        }
    }

    /// `eps_{ij} = (-1)^{|b^i||b^j|}`.
    pub fn eps_pair(&self, i: usize, j: usize) -> i8 {
        if i >= self.p && j >= self.p {
            -1
        } else {
            1
        }
    }

    pub fn check_index(&self, i: usize) -> Result<(), ChartError> {
        if i >= self.n() {
            Err(ChartError::IndexOutOfRange(i, self.n()))
        } else {
            Ok(())
        }
    }

    pub fn str_identity(&self) -> i64 {
        self.p as i64 - self.q as i64
    }
}

impl fmt::Display for ChartSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A^({}|{})", self.p, self.q)
    }
}

/// A monomial: exponents of the even coordinates and a strictly increasing
/// subset of odd coordinate indices (0-based, absolute).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub evens: Vec<u32>,
    pub odds: Vec<usize>,
}

impl Monomial {
    pub fn unit(sig: ChartSignature) -> Self {
        Monomial { evens: vec![0; sig.p], odds: Vec::new() }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.odds.len())
    }

    pub fn degree(&self) -> u32 {
        self.evens.iter().sum::<u32>() + self.odds.len() as u32
    }

    /// Product with Koszul sign from interleaving the odd factors.
    /// Returns `None` when an odd variable repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, i8)> {
        let evens = self
            .evens
            .iter()
            .zip(other.evens.iter())
            .map(|(a, b)| a + b)
            .collect();
        // merge sorted odd index lists, counting transpositions
        let mut odds = Vec::with_capacity(self.odds.len() + other.odds.len());
        let mut sign = 1i8;
        let mut i = 0;
        let mut j = 0;
        while i < self.odds.len() && j < other.odds.len() {
            if self.odds[i] == other.odds[j] {
                return None;
            }
            if self.odds[i] < other.odds[j] {
                odds.push(self.odds[i]);
                i += 1;
            } else {
                // other.odds[j] jumps over the remaining self.odds
                if (self.odds.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                odds.push(other.odds[j]);
                j += 1;
            }
        }
        odds.extend_from_slice(&self.odds[i..]);
        odds.extend_from_slice(&other.odds[j..]);
        Some((Monomial { evens, odds }, sign))
    }
}

/// Element of the supercommutative polynomial ring on a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPolynomial {
    sig: ChartSignature,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl SuperPolynomial {
    pub fn zero(sig: ChartSignature) -> Self {
        SuperPolynomial { sig, terms: BTreeMap::new() }
    }

    pub fn one(sig: ChartSignature) -> Self {
        SuperPolynomial::constant(sig, GaussianRational::one())
    }

    pub fn constant(sig: ChartSignature, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(sig), c);
        }
        SuperPolynomial { sig, terms }
    }

    /// The coordinate function `b^i` (0-based index).
    pub fn coordinate(sig: ChartSignature, i: usize) -> Self {
        sig.check_index(i).expect("coordinate index");
        let mut m = Monomial::unit(sig);
        if i < sig.p {
            m.evens[i] = 1;
        } else {
            m.odds.push(i);
        }
        let mut terms = BTreeMap::new();
        terms.insert(m, GaussianRational::one());
        SuperPolynomial { sig, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(
        sig: ChartSignature,
        it: I,
    ) -> Self {
        let mut out = SuperPolynomial::zero(sig);
        for (m, c) in it {
            out.insert(m, c);
        }
        out
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .get(&Monomial::unit(self.sig))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn insert(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        SuperPolynomial { sig: self.sig, terms }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = SuperPolynomial::zero(self.sig);
        for (m, v) in &self.terms {
            out.insert(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = SuperPolynomial::zero(self.sig);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some((m, sign)) = m1.mul(m2) {
                    let mut c = c1.clone() * c2.clone();
                    if sign < 0 {
                        c = -c;
                    }
                    out.insert(m, c);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = SuperPolynomial::one(self.sig);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Parity if homogeneous, `None` for mixed terms.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(m) => m.parity(),
        };
        for m in it {
            if m.parity() != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Left super-derivation `d/db^i`:
    /// `d_i(fg) = (d_i f) g + (-1)^{|b^i||f|} f (d_i g)`.
    pub fn partial(&self, i: usize) -> Result<Self, ChartError> {
        self.sig.check_index(i)?;
        let mut out = SuperPolynomial::zero(self.sig);
        for (m, c) in &self.terms {
            if i < self.sig.p {
                if m.evens[i] == 0 {
                    continue;
                }
                let mut m2 = m.clone();
                m2.evens[i] -= 1;
                out.insert(m2, c.clone() * GaussianRational::from_int(m.evens[i] as i64));
            } else {
                let pos = match m.odds.iter().position(|&j| j == i) {
                    None => continue,
                    Some(p) => p,
                };
                let mut m2 = m.clone();
                m2.odds.remove(pos);
                let mut v = c.clone();
                if pos % 2 == 1 {
                    v = -v;
                }
                out.insert(m2, v);
            }
        }
        Ok(out)
    }

    /// Substitute `subs[i]` for `b^i`. Substitutions must preserve the
    /// parity of each coordinate for the result to be meaningful.
    pub fn substitute(&self, subs: &[SuperPolynomial]) -> SuperPolynomial {
        assert_eq!(subs.len(), self.sig.n());
        let target = subs
            .first()
            .map(|s| s.signature())
            .unwrap_or(self.sig);
        let mut out = SuperPolynomial::zero(target);
        for (m, c) in &self.terms {
            let mut acc = SuperPolynomial::constant(target, c.clone());
            for (i, e) in m.evens.iter().enumerate() {
                if *e > 0 {
                    acc = acc.mul(&subs[i].pow(*e));
                }
            }
            for &i in &m.odds {
                acc = acc.mul(&subs[i]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Apply a coefficient map (used for formal conjugation).
    pub fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        let mut out = SuperPolynomial::zero(self.sig);
        for (m, c) in &self.terms {
            out.insert(m.clone(), f(c));
        }
        out
    }

    /// Rename variables by a permutation of indices (parity-preserving).
    pub fn rename_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.sig.n());
        let subs: Vec<SuperPolynomial> = (0..self.sig.n())
            .map(|i| SuperPolynomial::coordinate(self.sig, perm[i]))
            .collect();
        self.substitute(&subs)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            let cs = format!("{c}");
            if cs != "1" || m.degree() == 0 {
                parts.push(if cs.contains('+') || (cs.contains('-') && cs.len() > 1 && cs[1..].contains('-')) {
                    format!("({cs})")
                } else {
                    cs
                });
            }
            for (i, e) in m.evens.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("b{}", i + 1)),
                    _ => parts.push(format!("b{}^{}", i + 1, e)),
                }
            }
            for &i in &m.odds {
                parts.push(format!("b{}", i + 1));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn partial_even_square() {
        let sig = ChartSignature::new(1, 0);
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let f = b1.mul(&b1);
        assert_eq!(f.partial(0).unwrap(), b1.scale(&gr(2)));
    }

    #[test]
    fn partial_odd_left_convention() {
        // p=0, q=2: d_1(b1 b2) = b2, d_2(b1 b2) = -b1
        let sig = ChartSignature::new(0, 2);
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let b2 = SuperPolynomial::coordinate(sig, 1);
        let f = b1.mul(&b2);
        assert_eq!(f.partial(0).unwrap(), b2);
        assert_eq!(f.partial(1).unwrap(), b1.neg());
    }

    #[test]
    fn odd_square_is_zero() {
        let sig = ChartSignature::new(0, 2);
        let b1 = SuperPolynomial::coordinate(sig, 0);
        assert!(b1.mul(&b1).is_zero());
    }

    #[test]
    fn supercommutativity() {
        let sig = ChartSignature::new(1, 2);
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let b2 = SuperPolynomial::coordinate(sig, 1);
        let b3 = SuperPolynomial::coordinate(sig, 2);
        assert_eq!(b2.mul(&b3), b3.mul(&b2).neg());
        assert_eq!(b1.mul(&b2), b2.mul(&b1));
    }

    #[test]
    fn partials_supercommute() {
        let sig = ChartSignature::new(2, 2);
        // f = b1^2 b3 b4 + b2 b3
        let b = |i: usize| SuperPolynomial::coordinate(sig, i);
        let f = b(0).mul(&b(0)).mul(&b(2)).mul(&b(3)).add(&b(1).mul(&b(2)));
        for i in 0..4 {
            for j in 0..4 {
                let lhs = f.partial(i).unwrap().partial(j).unwrap();
                let mut rhs = f.partial(j).unwrap().partial(i).unwrap();
                if sig.eps_pair(i, j) < 0 {
                    rhs = rhs.neg();
                }
                assert_eq!(lhs, rhs, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn substitute_shear() {
        let sig = ChartSignature::new(2, 0);
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let b2 = SuperPolynomial::coordinate(sig, 1);
        // f(b1, b2) = b1 b2; substitute b1 -> b1 + b2^2
        let f = b1.mul(&b2);
        let g = f.substitute(&[b1.add(&b2.mul(&b2)), b2.clone()]);
        let expect = b1.mul(&b2).add(&b2.mul(&b2).mul(&b2));
        assert_eq!(g, expect);
    }
}
