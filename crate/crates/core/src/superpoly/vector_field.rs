//! Polynomial super vector fields `X = X^i d_i` with an intrinsic parity.

use super::{ChartError, ChartSignature, Parity, SuperPolynomial};
use std::fmt;

/// A vector field with homogeneous intrinsic parity: the component `X^i`
/// satisfies `|X^i| = |X| + |b^i|` whenever nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperVectorField {
    sig: ChartSignature,
    comps: Vec<SuperPolynomial>,
    parity: Parity,
}

impl SuperVectorField {
    pub fn zero(sig: ChartSignature, parity: Parity) -> Self {
        let comps = (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
        SuperVectorField { sig, comps, parity }
    }

    /// Build from components, checking parity homogeneity.
    pub fn new(
        sig: ChartSignature,
        comps: Vec<SuperPolynomial>,
        parity: Parity,
    ) -> Result<Self, ChartError> {
        if comps.len() != sig.n() {
            return Err(ChartError::IndexOutOfRange(comps.len(), sig.n()));
        }
        for (i, c) in comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let expected = parity.combine(sig.parity(i));
            match c.parity() {
                Some(p) if p == expected => {}
                _ => return Err(ChartError::MixedParity),
            }
        }
        Ok(SuperVectorField { sig, comps, parity })
    }

    /// The coordinate field `d_i`.
    pub fn basis(sig: ChartSignature, i: usize) -> Self {
        sig.check_index(i).expect("basis index");
        let mut comps: Vec<SuperPolynomial> =
            (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
        comps[i] = SuperPolynomial::one(sig);
        SuperVectorField { sig, comps, parity: sig.parity(i) }
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn component(&self, i: usize) -> &SuperPolynomial {
        &self.comps[i]
    }

    pub fn components(&self) -> &[SuperPolynomial] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Addition requires equal intrinsic parity (or either side zero).
    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.parity, rhs.parity, "parity mismatch in vector field sum");
        let comps = self
            .comps
            .iter()
            .zip(rhs.comps.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        SuperVectorField { sig: self.sig, comps, parity: self.parity }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|c| c.neg()).collect();
        SuperVectorField { sig: self.sig, comps, parity: self.parity }
    }

    pub fn scale(&self, c: &crate::scalars::GaussianRational) -> Self {
        let comps = self.comps.iter().map(|x| x.scale(c)).collect();
        SuperVectorField { sig: self.sig, comps, parity: self.parity }
    }

    /// Left module action `f X` (components `f * X^i`).
    pub fn scale_fn(&self, f: &SuperPolynomial) -> Result<Self, ChartError> {
        let fp = f.parity().ok_or(ChartError::MixedParity)?;
        let comps = self.comps.iter().map(|c| f.mul(c)).collect();
        Ok(SuperVectorField {
            sig: self.sig,
            comps,
            parity: self.parity.combine(fp),
        })
    }

    /// Action on a function: `X f = X^i d_i f`.
    pub fn apply(&self, f: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.sig);
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&c.mul(&f.partial(i).expect("index in range")));
        }
        out
    }

    /// Super Lie bracket `[X, Y]^j = X(Y^j) - (-1)^{|X||Y|} Y(X^j)`.
    pub fn bracket(&self, rhs: &Self) -> Self {
        let sign = self.parity.koszul(rhs.parity);
        let comps = (0..self.sig.n())
            .map(|j| {
                let a = self.apply(&rhs.comps[j]);
                let b = rhs.apply(&self.comps[j]);
                if sign < 0 {
                    a.add(&b)
                } else {
                    a.sub(&b)
                }
            })
            .collect();
        SuperVectorField {
            sig: self.sig,
            comps,
            parity: self.parity.combine(rhs.parity),
        }
    }
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})@{}", i + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::GaussianRational;

    #[test]
    fn coordinate_brackets_vanish() {
        let sig = ChartSignature::new(2, 1);
        for i in 0..3 {
            for j in 0..3 {
                let x = SuperVectorField::basis(sig, i);
                let y = SuperVectorField::basis(sig, j);
                assert!(x.bracket(&y).is_zero());
            }
        }
    }

    #[test]
    fn bracket_is_derivation_commutator() {
        // [X,Y] f = X(Y f) - (-1)^{|X||Y|} Y(X f) on samples
        let sig = ChartSignature::new(1, 2);
        let b = |i: usize| SuperPolynomial::coordinate(sig, i);
        let x = SuperVectorField::new(
            sig,
            vec![b(1).mul(&b(2)), b(0).mul(&b(2)), SuperPolynomial::zero(sig)],
            Parity::Even,
        )
        .unwrap();
        let y = SuperVectorField::new(
            sig,
            vec![b(1), SuperPolynomial::one(sig), b(0).mul(&b(0))],
            Parity::Odd,
        )
        .unwrap();
        let f = b(0).mul(&b(1)).add(&b(0).mul(&b(0)).mul(&b(2)));
        let lhs = x.bracket(&y).apply(&f);
        let mut rhs = x.apply(&y.apply(&f));
        let corr = y.apply(&x.apply(&f));
        if x.parity().koszul(y.parity()) < 0 {
            rhs = rhs.add(&corr);
        } else {
            rhs = rhs.sub(&corr);
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scale_fn_parity() {
        let sig = ChartSignature::new(1, 1);
        let b2 = SuperPolynomial::coordinate(sig, 1);
        let x = SuperVectorField::basis(sig, 0);
        let fx = x.scale_fn(&b2).unwrap();
        assert_eq!(fx.parity(), Parity::Odd);
        assert_eq!(fx.component(0), &b2);
        let _ = GaussianRational::one();
    }
}
