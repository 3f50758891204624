//! Seeded deterministic sampling of chart data.
//!
//! Every randomized check in the engine draws from this sampler; a seed
//! fully determines the sample stream, so reports are reproducible
//! byte-for-byte.

use crate::scalars::GaussianRational;
use crate::superpoly::{
    ChartSignature, MatrixForm, Monomial, Parity, SuperForm, SuperPolynomial, SuperVectorField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
    /// Coefficients are drawn from `-bound..=bound`.
    pub coeff_bound: i64,
    /// Maximum polynomial degree of sampled coefficients.
    pub max_degree: u32,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), coeff_bound: 2, max_degree: 3 }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn coeff(&mut self) -> GaussianRational {
        GaussianRational::from_int(self.int(-self.coeff_bound, self.coeff_bound))
    }

    fn nonzero_coeff(&mut self) -> GaussianRational {
        loop {
            let c = self.coeff();
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// A random monomial of degree at most `max_degree` and given parity,
    /// when one exists.
    fn monomial(&mut self, sig: ChartSignature, parity: Parity) -> Option<Monomial> {
        for _ in 0..64 {
            let mut m = Monomial::unit(sig);
            let deg = self.int(0, self.max_degree as i64) as u32;
            let mut budget = deg;
            while budget > 0 {
                let i = self.int(0, sig.n() as i64 - 1) as usize;
                if i < sig.p {
                    m.evens[i] += 1;
                } else if !m.odds.contains(&i) {
                    m.odds.push(i);
                    m.odds.sort_unstable();
                }
                budget -= 1;
            }
            if m.parity() == parity {
                return Some(m);
            }
        }
        None
    }

    /// Random homogeneous polynomial of the given parity (possibly zero
    /// only if no monomial of that parity exists).
    pub fn poly(&mut self, sig: ChartSignature, parity: Parity) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(sig);
        let terms = self.int(1, 3);
        for _ in 0..terms {
            if let Some(m) = self.monomial(sig, parity) {
                out.insert(m, self.nonzero_coeff());
            }
        }
        out
    }

    pub fn any_poly(&mut self, sig: ChartSignature) -> SuperPolynomial {
        let parity = if self.int(0, 1) == 0 { Parity::Even } else { Parity::Odd };
        let p = self.poly(sig, parity);
        if p.is_zero() {
            self.poly(sig, Parity::Even)
        } else {
            p
        }
    }

    /// Random homogeneous vector field of the given intrinsic parity.
    /// On a purely even chart only even fields exist and the parity
    /// request degrades accordingly.
    pub fn vector_field(&mut self, sig: ChartSignature, parity: Parity) -> SuperVectorField {
        let parity = if sig.q == 0 { Parity::Even } else { parity };
        for _ in 0..256 {
            let comps: Vec<SuperPolynomial> = (0..sig.n())
                .map(|i| {
                    if self.int(0, 2) == 0 {
                        SuperPolynomial::zero(sig)
                    } else {
                        self.poly(sig, parity.combine(sig.parity(i)))
                    }
                })
                .collect();
            let vf = SuperVectorField::new(sig, comps, parity).expect("homogeneous by construction");
            if !vf.is_zero() {
                return vf;
            }
        }
        SuperVectorField::basis(sig, 0)
    }

    pub fn any_vector_field(&mut self, sig: ChartSignature) -> SuperVectorField {
        let parity = if self.int(0, 1) == 0 { Parity::Even } else { Parity::Odd };
        self.vector_field(sig, parity)
    }

    /// Random form of the given degree with even total parity.
    pub fn even_form(&mut self, sig: ChartSignature, degree: usize) -> SuperForm {
        let mut out = SuperForm::zero(sig, degree);
        let terms = self.int(1, 3);
        'outer: for _ in 0..terms {
            let mut word = Vec::new();
            for _ in 0..degree {
                word.push(self.int(0, sig.n() as i64 - 1) as usize);
            }
            let wp = Parity::from_count(word.iter().filter(|&&i| i >= sig.p).count());
            if let Some(m) = self.monomial(sig, wp) {
                let mut f = SuperForm::zero(sig, degree);
                f.insert_raw(
                    word,
                    SuperPolynomial::from_terms(sig, [(m, self.nonzero_coeff())]),
                );
                out = out.add(&f);
                continue 'outer;
            }
        }
        out
    }

    /// Random closed even form of the given degree (an exact one).
    pub fn closed_even_form(&mut self, sig: ChartSignature, degree: usize) -> SuperForm {
        assert!(degree >= 1);
        self.even_form(sig, degree - 1).d()
    }

    /// A random normal-ordered creation word of weight at most
    /// `max_weight`, with a random small coefficient.
    pub fn fock_state(
        &mut self,
        sig: ChartSignature,
        max_weight: i64,
    ) -> crate::free_va::FockState {
        use crate::free_va::{FockState, GenMode};
        loop {
            let mut st = FockState::vacuum(sig).scale(
                &GaussianRational::from_int(self.int(1, 2) * if self.int(0, 1) == 0 { 1 } else { -1 }),
            );
            let mut budget = self.int(0, max_weight);
            while budget > 0 {
                let w = self.int(1, budget);
                let idx = self.int(0, sig.n() as i64 - 1) as usize;
                let mode = if self.int(0, 1) == 0 {
                    GenMode::b(idx, -w)
                } else {
                    GenMode::a(idx, -w)
                };
                st = st.apply_mode(mode);
                budget -= w;
            }
            // sprinkle weight-zero multiplications
            for _ in 0..self.int(0, 1) {
                let idx = self.int(0, sig.n() as i64 - 1) as usize;
                st = st.apply_mode(crate::free_va::GenMode::b(idx, 0));
            }
            if !st.is_zero() {
                return st;
            }
        }
    }

    /// Random even connection form: degree-1 matrix with
    /// `|entry^k_i| = |b^k| + |b^i|`.
    pub fn connection_form(&mut self, sig: ChartSignature) -> MatrixForm {
        let mut m = MatrixForm::zero(sig, 1);
        let slots = self.int(1, (sig.n() * sig.n()) as i64);
        for _ in 0..slots {
            let k = self.int(0, sig.n() as i64 - 1) as usize;
            let i = self.int(0, sig.n() as i64 - 1) as usize;
            let want = sig.parity(k).combine(sig.parity(i));
            let j = self.int(0, sig.n() as i64 - 1) as usize;
            let coeff_parity = want.combine(sig.parity(j));
            if let Some(mono) = self.monomial(sig, coeff_parity) {
                let mut f = SuperForm::zero(sig, 1);
                f.insert_raw(
                    vec![j],
                    SuperPolynomial::from_terms(sig, [(mono, self.nonzero_coeff())]),
                );
                m.set_entry(k, i, m.entry(k, i).add(&f));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let sig = ChartSignature::new(2, 1);
        let mut a = Sampler::new(42);
        let mut b = Sampler::new(42);
        for _ in 0..10 {
            assert_eq!(a.any_poly(sig), b.any_poly(sig));
            assert_eq!(
                a.vector_field(sig, Parity::Odd).components(),
                b.vector_field(sig, Parity::Odd).components()
            );
        }
    }

    #[test]
    fn sampled_connection_is_even() {
        let sig = ChartSignature::new(1, 2);
        let mut s = Sampler::new(7);
        for _ in 0..20 {
            assert!(s.connection_form(sig).is_even());
        }
    }

    #[test]
    fn closed_forms_are_closed() {
        let sig = ChartSignature::new(2, 2);
        let mut s = Sampler::new(3);
        for _ in 0..10 {
            let h = s.closed_even_form(sig, 3);
            assert!(h.d().is_zero());
        }
    }
}
