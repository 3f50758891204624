//! The degenerate vertex algebroid attached to a finite-dimensional Lie
//! algebra: functions are constants, one-forms vanish, and the brace is a
//! symmetric bilinear form whose invariance is exactly what the axiom
//! checker tests.

use super::VertexAlgebroid;
use crate::sampler::Sampler;
use crate::scalars::GaussianRational;
use crate::superpoly::Parity;
use std::fmt;

/// Element of the Lie algebra in a fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieVec(pub Vec<GaussianRational>);

impl fmt::Display for LieVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})e{}", i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The trivial one-form module.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivialOmega;

impl fmt::Display for TrivialOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0")
    }
}

/// `(C, 0, g, 0, lambda, 0)` for a Lie algebra with structure constants
/// `[e_i, e_j] = sum_k c[i][j][k] e_k` and a symmetric bilinear `lambda`.
#[derive(Debug, Clone)]
pub struct LieAlgebroid {
    pub name: String,
    dim: usize,
    constants: Vec<Vec<Vec<GaussianRational>>>,
    lambda: Vec<Vec<GaussianRational>>,
}

impl LieAlgebroid {
    pub fn new(
        name: impl Into<String>,
        constants: Vec<Vec<Vec<GaussianRational>>>,
        lambda: Vec<Vec<GaussianRational>>,
    ) -> Self {
        let dim = constants.len();
        for (i, row) in lambda.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(v, &lambda[j][i], "lambda must be symmetric");
            }
            let _ = i;
        }
        LieAlgebroid { name: name.into(), dim, constants, lambda }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Abelian algebra of the given dimension with a diagonal form.
    pub fn abelian(dim: usize) -> Self {
        let z = GaussianRational::zero();
        let constants = vec![vec![vec![z.clone(); dim]; dim]; dim];
        let mut lambda = vec![vec![z; dim]; dim];
        for (i, row) in lambda.iter_mut().enumerate() {
            row[i] = GaussianRational::one();
        }
        LieAlgebroid::new("abelian", constants, lambda)
    }

    /// `sl2` in the basis `(e, h, f)` with `lambda = k *` the Killing form.
    pub fn sl2_killing(k: i64) -> Self {
        Self::sl2_with_lambda(sl2_killing_form(k))
    }

    /// `sl2` with an arbitrary symmetric `lambda` in the `(e, h, f)` basis.
    pub fn sl2_with_lambda(lambda: Vec<Vec<GaussianRational>>) -> Self {
        let z = || GaussianRational::zero();
        let gr = GaussianRational::from_int;
        // basis order: e=0, h=1, f=2
        let mut c = vec![vec![vec![z(); 3]; 3]; 3];
        // [e,f] = h ; [h,e] = 2e ; [h,f] = -2f
        c[0][2][1] = gr(1);
        c[2][0][1] = gr(-1);
        c[1][0][0] = gr(2);
        c[0][1][0] = gr(-2);
        c[1][2][2] = gr(-2);
        c[2][1][2] = gr(2);
        LieAlgebroid::new("sl2", c, lambda)
    }
}

/// The Killing form of `sl2` in the `(e, h, f)` basis, scaled by `k`:
/// `K(h,h) = 8k`, `K(e,f) = K(f,e) = 4k`, all other entries zero.
pub fn sl2_killing_form(k: i64) -> Vec<Vec<GaussianRational>> {
    let z = || GaussianRational::zero();
    let gr = GaussianRational::from_int;
    vec![
        vec![z(), z(), gr(4 * k)],
        vec![z(), gr(8 * k), z()],
        vec![gr(4 * k), z(), z()],
    ]
}

impl VertexAlgebroid for LieAlgebroid {
    type Fun = GaussianRational;
    type Form = TrivialOmega;
    type Field = LieVec;

    fn add_fun(&self, a: &Self::Fun, b: &Self::Fun) -> Self::Fun {
        a.clone() + b.clone()
    }
    fn neg_fun(&self, a: &Self::Fun) -> Self::Fun {
        -a.clone()
    }
    fn is_zero_fun(&self, a: &Self::Fun) -> bool {
        a.is_zero()
    }
    fn add_form(&self, _: &Self::Form, _: &Self::Form) -> Self::Form {
        TrivialOmega
    }
    fn neg_form(&self, _: &Self::Form) -> Self::Form {
        TrivialOmega
    }
    fn is_zero_form(&self, _: &Self::Form) -> bool {
        true
    }
    fn add_field(&self, a: &Self::Field, b: &Self::Field) -> Self::Field {
        LieVec(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        )
    }
    fn is_zero_field(&self, a: &Self::Field) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }

    fn parity_fun(&self, _: &Self::Fun) -> Option<Parity> {
        Some(Parity::Even)
    }
    fn parity_field(&self, _: &Self::Field) -> Option<Parity> {
        Some(Parity::Even)
    }

    fn d(&self, _: &Self::Fun) -> Self::Form {
        TrivialOmega
    }
    fn act(&self, _: &Self::Field, _: &Self::Fun) -> Self::Fun {
        GaussianRational::zero()
    }
    fn lie(&self, _: &Self::Field, _: &Self::Form) -> Self::Form {
        TrivialOmega
    }
    fn bracket(&self, x: &Self::Field, y: &Self::Field) -> Self::Field {
        let mut out = vec![GaussianRational::zero(); self.dim];
        for i in 0..self.dim {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y.0[j].is_zero() {
                    continue;
                }
                for (k, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + x.0[i].clone() * y.0[j].clone() * c.clone();
                    }
                }
            }
        }
        LieVec(out)
    }
    fn pair(&self, _: &Self::Form, _: &Self::Field) -> Self::Fun {
        GaussianRational::zero()
    }
    fn mul_fun(&self, f: &Self::Fun, g: &Self::Fun) -> Self::Fun {
        f.clone() * g.clone()
    }
    fn mul_fun_form(&self, _: &Self::Fun, _: &Self::Form) -> Self::Form {
        TrivialOmega
    }
    fn mul_fun_field(&self, f: &Self::Fun, x: &Self::Field) -> Self::Field {
        LieVec(x.0.iter().map(|c| f.clone() * c.clone()).collect())
    }

    fn star(&self, _: &Self::Fun, _: &Self::Field) -> Self::Form {
        TrivialOmega
    }
    fn brace(&self, x: &Self::Field, y: &Self::Field) -> Self::Fun {
        let mut out = GaussianRational::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !x.0[i].is_zero() && !y.0[j].is_zero() && !self.lambda[i][j].is_zero() {
                    out = out + x.0[i].clone() * y.0[j].clone() * self.lambda[i][j].clone();
                }
            }
        }
        out
    }
    fn brace_omega(&self, _: &Self::Field, _: &Self::Field) -> Self::Form {
        TrivialOmega
    }

    fn sample_fun(&self, s: &mut Sampler) -> Self::Fun {
        GaussianRational::from_int(s.int(-2, 2))
    }
    fn sample_field(&self, s: &mut Sampler) -> Self::Field {
        LieVec((0..self.dim).map(|_| GaussianRational::from_int(s.int(-2, 2))).collect())
    }
    fn enumerate_funs(&self, _max_degree: u32) -> Vec<Self::Fun> {
        vec![GaussianRational::one(), GaussianRational::from_int(2)]
    }
    fn enumerate_fields(&self, _max_degree: u32) -> Vec<Self::Field> {
        (0..self.dim)
            .map(|i| {
                let mut v = vec![GaussianRational::zero(); self.dim];
                v[i] = GaussianRational::one();
                LieVec(v)
            })
            .collect()
    }

    fn describe(&self) -> String {
        format!("lie[{}]", self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::check_axioms;

    #[test]
    fn abelian_passes_axioms() {
        let v = LieAlgebroid::abelian(3);
        let mut s = Sampler::new(1);
        let suite = check_axioms(&v, &mut s, 50, Some(1));
        assert!(suite.all_passed(), "{suite}");
    }

    #[test]
    fn sl2_killing_passes_axioms() {
        let v = LieAlgebroid::sl2_killing(1);
        let mut s = Sampler::new(2);
        let suite = check_axioms(&v, &mut s, 100, Some(1));
        assert!(suite.all_passed(), "{suite}");
    }

    #[test]
    fn sl2_non_invariant_form_fails_axiom_six() {
        // lambda(e,e) = 1, all other entries zero: not invariant
        let z = || GaussianRational::zero();
        let mut lambda = vec![vec![z(); 3]; 3];
        lambda[0][0] = GaussianRational::one();
        let v = LieAlgebroid::sl2_with_lambda(lambda);
        let mut s = Sampler::new(3);
        let suite = check_axioms(&v, &mut s, 100, Some(1));
        assert!(!suite.all_passed());
        let failing = suite.first_failure().unwrap();
        assert_eq!(failing.check, "axiom6");
        assert!(failing.counterexample.is_some());
    }
}
