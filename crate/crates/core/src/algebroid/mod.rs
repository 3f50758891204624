//! Vertex superalgebroids on a chart: the carrier trait, the coordinate
//! structure, the connection-based structure, transported structures, and
//! the axiom / morphism checkers.
//!
//! A vertex superalgebroid consists of an extended Lie superalgebroid
//! `(A, Omega, T)` with three extra bilinear maps `* : A x T -> Omega`,
//! `{ } : T x T -> A` and `{ }_Omega : T x T -> Omega` subject to seven
//! identities. The Koszul signs of the super versions are dictated by the
//! vertex-superalgebra skew-symmetry and Borcherds identities; they are
//! spelled out in `axioms.rs` and cross-validated against the free-field
//! realization.

pub mod axioms;
pub mod connection;
pub mod lie;
pub mod morphism;

pub use axioms::check_axioms;
pub use connection::{poincare_potential, ConnectionData};
pub use lie::LieAlgebroid;
pub use morphism::{check_morphism, transport, PullbackMap};

use crate::sampler::Sampler;
use crate::scalars::GaussianRational;
use crate::superpoly::form::d_poly;
use crate::superpoly::{
    ChartError, ChartSignature, Parity, SuperForm, SuperPolynomial, SuperVectorField,
};

/// The abstract interface the axiom checker runs against. Implemented by
/// the polynomial chart algebroids and by the finite-dimensional Lie
/// algebra case.
pub trait VertexAlgebroid {
    // elements must be shareable across the parallel exhaustive sweep
    type Fun: Clone + PartialEq + std::fmt::Display + Send + Sync;
    type Form: Clone + PartialEq + std::fmt::Display + Send + Sync;
    type Field: Clone + PartialEq + std::fmt::Display + Send + Sync;

    fn add_fun(&self, a: &Self::Fun, b: &Self::Fun) -> Self::Fun;
    fn neg_fun(&self, a: &Self::Fun) -> Self::Fun;
    fn is_zero_fun(&self, a: &Self::Fun) -> bool;
    fn add_form(&self, a: &Self::Form, b: &Self::Form) -> Self::Form;
    fn neg_form(&self, a: &Self::Form) -> Self::Form;
    fn is_zero_form(&self, a: &Self::Form) -> bool;
    fn add_field(&self, a: &Self::Field, b: &Self::Field) -> Self::Field;
    fn is_zero_field(&self, a: &Self::Field) -> bool;

    fn parity_fun(&self, f: &Self::Fun) -> Option<Parity>;
    fn parity_field(&self, x: &Self::Field) -> Option<Parity>;

    // extended Lie superalgebroid operations
    fn d(&self, f: &Self::Fun) -> Self::Form;
    fn act(&self, x: &Self::Field, f: &Self::Fun) -> Self::Fun;
    fn lie(&self, x: &Self::Field, w: &Self::Form) -> Self::Form;
    fn bracket(&self, x: &Self::Field, y: &Self::Field) -> Self::Field;
    fn pair(&self, w: &Self::Form, x: &Self::Field) -> Self::Fun;
    fn mul_fun(&self, f: &Self::Fun, g: &Self::Fun) -> Self::Fun;
    fn mul_fun_form(&self, f: &Self::Fun, w: &Self::Form) -> Self::Form;
    fn mul_fun_field(&self, f: &Self::Fun, x: &Self::Field) -> Self::Field;

    // vertex algebroid structure maps
    fn star(&self, f: &Self::Fun, x: &Self::Field) -> Self::Form;
    fn brace(&self, x: &Self::Field, y: &Self::Field) -> Self::Fun;
    fn brace_omega(&self, x: &Self::Field, y: &Self::Field) -> Self::Form;

    // sampling and small exhaustive enumeration
    fn sample_fun(&self, s: &mut Sampler) -> Self::Fun;
    fn sample_field(&self, s: &mut Sampler) -> Self::Field;
    fn enumerate_funs(&self, max_degree: u32) -> Vec<Self::Fun>;
    fn enumerate_fields(&self, max_degree: u32) -> Vec<Self::Field>;

    fn describe(&self) -> String;
}

/// How a chart structure was obtained; `Transported` wraps another
/// structure with a weight-one shift of the splitting.
#[derive(Debug, Clone)]
pub enum StructureKind {
    Coordinate,
    Global { conn: ConnectionData, h: SuperForm, delta: DeltaMap },
    Transported { base: Box<ChartAlgebroid>, delta: DeltaMap },
}

/// A linear map `T -> Omega`, even, in one of the closed forms the engine
/// uses. `Tensorial` lists the images of the coordinate fields and extends
/// by `Delta(f X) = f Delta(X)`.
#[derive(Debug, Clone)]
pub enum DeltaMap {
    Zero,
    /// `X -> 1/2 i_X B` for a fixed even two-form.
    HalfContraction(SuperForm),
    /// The first-order map attached to a connection form and an even
    /// two-form: `X -> eps_i eps_{ij} eps_j^{1+|X|} (d_j X^i) Gamma^j_i
    /// + 1/2 i_X Str(Gamma (x) Gamma) + 1/2 i_X B`.
    Connection { gamma: crate::superpoly::MatrixForm, b: SuperForm },
    /// Images of the coordinate fields, extended A-linearly.
    Tensorial(Vec<SuperForm>),
}

impl DeltaMap {
    pub fn apply(&self, x: &SuperVectorField) -> SuperForm {
        let sig = x.signature();
        match self {
            DeltaMap::Zero => SuperForm::zero(sig, 1),
            DeltaMap::HalfContraction(b) => {
                b.contract(x).scale(&GaussianRational::from_ratio(1, 2))
            }
            DeltaMap::Connection { gamma, b } => {
                let mut out = SuperForm::zero(sig, 1);
                let xp = x.parity();
                for i in 0..sig.n() {
                    for j in 0..sig.n() {
                        let entry = gamma.entry(j, i);
                        if entry.is_zero() {
                            continue;
                        }
                        let mut c = x.component(i).partial(j).expect("index");
                        if c.is_zero() {
                            continue;
                        }
                        let mut sign = sig.eps(i) * sig.eps_pair(i, j);
                        if xp == Parity::Even {
                            sign *= sig.eps(j);
                        }
                        if sign < 0 {
                            c = c.neg();
                        }
                        out = out.add(&entry.mul_fn(&c));
                    }
                }
                // + 1/2 i_X Str(Gamma (x) Gamma) + 1/2 i_X B, via values on
                // the coordinate fields
                let str_vals = str_gamma_tensor_contract(gamma, x);
                out = out.add(&str_vals.scale(&GaussianRational::from_ratio(1, 2)));
                out.add(&b.contract(x).scale(&GaussianRational::from_ratio(1, 2)))
            }
            DeltaMap::Tensorial(images) => {
                let mut out = SuperForm::zero(sig, 1);
                for (i, w) in images.iter().enumerate() {
                    let xi = x.component(i);
                    if !xi.is_zero() {
                        out = out.add(&w.mul_fn(xi));
                    }
                }
                out
            }
        }
    }
}

/// The one-form `i_X Str(theta (x) theta)` built from a matrix of
/// one-forms: its pairing against `d_j` is
/// `sum_{k,l} eps_k theta^k_l(X) theta^l_k(d_j)` evaluated with the
/// geometric contraction in both slots.
pub fn str_gamma_tensor_contract(
    theta: &crate::superpoly::MatrixForm,
    x: &SuperVectorField,
) -> SuperForm {
    let sig = theta.signature();
    let mut vals: Vec<SuperPolynomial> =
        (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
    for j in 0..sig.n() {
        let dj = SuperVectorField::basis(sig, j);
        let mut acc = SuperPolynomial::zero(sig);
        for k in 0..sig.n() {
            for l in 0..sig.n() {
                let a = theta.entry(k, l);
                let b = theta.entry(l, k);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let mut term = a.contract(x).into_poly().mul(&b.contract(&dj).into_poly());
                if sig.eps(k) < 0 {
                    term = term.neg();
                }
                acc = acc.add(&term);
            }
        }
        vals[j] = acc;
    }
    crate::superpoly::form::one_form_from_contractions(sig, &vals)
}

/// A vertex superalgebroid carried by a polynomial chart.
#[derive(Debug, Clone)]
pub struct ChartAlgebroid {
    sig: ChartSignature,
    kind: StructureKind,
}

impl ChartAlgebroid {
    /// The coordinate structure of the free-field realization.
    pub fn coordinate(sig: ChartSignature) -> Self {
        ChartAlgebroid { sig, kind: StructureKind::Coordinate }
    }

    /// The connection-based structure. Requires `dH = Str(R ^ R)`; on
    /// failure the residual is reported.
    pub fn global(conn: ConnectionData, h: SuperForm) -> Result<Self, GlobalError> {
        let sig = conn.signature();
        if h.degree() != 3 {
            return Err(GlobalError::BadInput(ChartError::DegreeMismatch(3, h.degree())));
        }
        if h.parity() != Some(Parity::Even) {
            return Err(GlobalError::BadInput(ChartError::MixedParity));
        }
        let residual = h.d().sub(&conn.curvature().mul(conn.curvature()).supertrace());
        if !residual.is_zero() {
            return Err(GlobalError::AnomalyResidual(format!("{residual}")));
        }
        // Realize the structure through the weight-one shift attached to
        // (Gamma, B) with dB = H - CS(Gamma); on even charts this is
        // pointwise equal to the connection formulas (see the cross-check
        // below), and it is the unique chart realization in general.
        let b = poincare_potential(&h.sub(&conn.cs_form())).map_err(GlobalError::BadInput)?;
        let delta = DeltaMap::Connection { gamma: conn.gamma().clone(), b };
        Ok(ChartAlgebroid { sig, kind: StructureKind::Global { conn, h, delta } })
    }

    pub fn transported(base: ChartAlgebroid, delta: DeltaMap) -> Self {
        let sig = base.sig;
        ChartAlgebroid { sig, kind: StructureKind::Transported { base: Box::new(base), delta } }
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn kind(&self) -> &StructureKind {
        &self.kind
    }

    /// The weight-one shift attached to a connection-based structure.
    pub fn global_delta(&self) -> Option<&DeltaMap> {
        match &self.kind {
            StructureKind::Global { delta, .. } => Some(delta),
            _ => None,
        }
    }

    pub fn provenance(&self) -> &'static str {
        match &self.kind {
            StructureKind::Coordinate => "coordinate",
            StructureKind::Global { .. } => "global",
            StructureKind::Transported { .. } => "transported",
        }
    }

    fn eps_pow(&self, i: usize, exp_one_plus: Parity) -> i8 {
        // eps_i^{1 + |x|}
        match exp_one_plus {
            Parity::Even => self.sig.eps(i),
            Parity::Odd => 1,
        }
    }

    /// `f *^c X = -(eps_i eps_j)^{1+|f|+|X|} (d_j d_i f) X^i db^j`.
    fn star_coordinate(&self, f: &SuperPolynomial, x: &SuperVectorField) -> SuperForm {
        let sig = self.sig;
        let fp = f.parity().expect("homogeneous f");
        let e = fp.combine(x.parity()); // exponent parity: 1 + |f| + |X|
        let mut out = SuperForm::zero(sig, 1);
        for j in 0..sig.n() {
            let mut coeff = SuperPolynomial::zero(sig);
            for i in 0..sig.n() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let dji = f.partial(i).expect("i").partial(j).expect("j");
                if dji.is_zero() {
                    continue;
                }
                let mut sign = 1i8;
                // (eps_i eps_j)^{1 + |f| + |X|}
                if e == Parity::Even {
                    sign *= sig.eps(i) * sig.eps(j);
                }
                let mut term = dji.mul(xi);
                if sign < 0 {
                    term = term.neg();
                }
                coeff = coeff.add(&term);
            }
            if !coeff.is_zero() {
                let mut w = SuperForm::zero(sig, 1);
                w.insert_raw(vec![j], coeff);
                out = out.add(&w.neg());
            }
        }
        out
    }

    /// `{X,Y}^c = -eps_j^{1+|X|+|Y|} (d_j X^i)(d_i Y^j)`.
    fn brace_coordinate(&self, x: &SuperVectorField, y: &SuperVectorField) -> SuperPolynomial {
        let sig = self.sig;
        let e = x.parity().combine(y.parity());
        let mut out = SuperPolynomial::zero(sig);
        for i in 0..sig.n() {
            for j in 0..sig.n() {
                let a = x.component(i).partial(j).expect("j");
                if a.is_zero() {
                    continue;
                }
                let b = y.component(j).partial(i).expect("i");
                if b.is_zero() {
                    continue;
                }
                let mut term = a.mul(&b);
                if self.eps_pow(j, e) < 0 {
                    term = term.neg();
                }
                out = out.sub(&term);
            }
        }
        out
    }

    /// `{X,Y}^c_Omega = -(eps_j eps_k)^{1+|X|+|Y|} (d_k d_j X^i)(d_i Y^j) db^k`.
    fn brace_omega_coordinate(
        &self,
        x: &SuperVectorField,
        y: &SuperVectorField,
    ) -> SuperForm {
        let sig = self.sig;
        let e = x.parity().combine(y.parity());
        let mut out = SuperForm::zero(sig, 1);
        for k in 0..sig.n() {
            let mut coeff = SuperPolynomial::zero(sig);
            for i in 0..sig.n() {
                for j in 0..sig.n() {
                    let a = x
                        .component(i)
                        .partial(j)
                        .expect("j")
                        .partial(k)
                        .expect("k");
                    if a.is_zero() {
                        continue;
                    }
                    let b = y.component(j).partial(i).expect("i");
                    if b.is_zero() {
                        continue;
                    }
                    let mut sign = 1i8;
                    if e == Parity::Even {
                        sign *= sig.eps(j) * sig.eps(k);
                    }
                    let mut term = a.mul(&b);
                    if sign < 0 {
                        term = term.neg();
                    }
                    coeff = coeff.add(&term);
                }
            }
            if !coeff.is_zero() {
                let mut w = SuperForm::zero(sig, 1);
                w.insert_raw(vec![k], coeff);
                out = out.add(&w.neg());
            }
        }
        out
    }

    fn star_global(
        conn: &ConnectionData,
        f: &SuperPolynomial,
        x: &SuperVectorField,
    ) -> SuperForm {
        // -(nabla df)(X), contracting X into the form argument:
        // the one-form Z -> (nabla_Z df)(X)
        //   = Z(df(X)) - (-1)^{|Z||f|} df(nabla_Z X).
        let sig = conn.signature();
        let df = d_poly(f);
        let fp = f.parity().expect("homogeneous");
        let dfx = df.pair(x).expect("degree 1");
        let mut vals: Vec<SuperPolynomial> = Vec::with_capacity(sig.n());
        for m in 0..sig.n() {
            let dm = SuperVectorField::basis(sig, m);
            let mut first = dm.apply(&dfx);
            if sig.parity(m).koszul(fp) < 0 {
                first = first.neg();
            }
            let nzx = conn.nabla_vf(&dm, x);
            let second = df.pair(&nzx).expect("degree 1");
            vals.push(first.sub(&second));
        }
        crate::superpoly::values_to_one_form(sig, &vals).neg()
    }

    fn brace_global(
        conn: &ConnectionData,
        x: &SuperVectorField,
        y: &SuperVectorField,
    ) -> SuperPolynomial {
        let wx = conn.tilde_nabla(x);
        let wy = conn.tilde_nabla(y);
        wx.op_mul(x.parity(), &wy).supertrace().into_poly().neg()
    }

    fn brace_omega_global(
        conn: &ConnectionData,
        h: &SuperForm,
        x: &SuperVectorField,
        y: &SuperVectorField,
    ) -> SuperForm {
        let wx = conn.tilde_nabla(x);
        let wy = conn.tilde_nabla(y);
        let nabla_wx = conn.nabla_endomorphism(&wx, x.parity());
        let iyr = conn.curvature_contracted(y);
        let ixr = conn.curvature_contracted(x);
        let t1 = nabla_wx.op_mul(x.parity(), &wy).supertrace().neg();
        let t2 = wx.op_mul(x.parity(), &iyr).supertrace();
        let t3 = ixr.op_mul(x.parity(), &wy).supertrace().neg();
        let hterm = h
            .contract(y)
            .contract(x)
            .scale(&GaussianRational::from_ratio(1, 2));
        t1.add(&t2).add(&t3).add(&hterm)
    }
}

/// The structure maps evaluated directly through the connection formulas
/// `-(nabla df)(X)`, `-Str(tilde X . tilde Y)` and
/// `Str(-nabla(tilde X).tilde Y + tilde X . i_Y R - i_X R . tilde Y)
/// + 1/2 i_X i_Y H`. On purely even charts these agree pointwise with the
/// structure itself; they serve as the independent second route in the
/// cross-check suites.
pub fn formula_star(
    conn: &ConnectionData,
    f: &SuperPolynomial,
    x: &SuperVectorField,
) -> SuperForm {
    ChartAlgebroid::star_global(conn, f, x)
}

pub fn formula_brace(
    conn: &ConnectionData,
    x: &SuperVectorField,
    y: &SuperVectorField,
) -> SuperPolynomial {
    ChartAlgebroid::brace_global(conn, x, y)
}

pub fn formula_brace_omega(
    conn: &ConnectionData,
    h: &SuperForm,
    x: &SuperVectorField,
    y: &SuperVectorField,
) -> SuperForm {
    ChartAlgebroid::brace_omega_global(conn, h, x, y)
}

#[derive(Debug, thiserror::Error)]
pub enum GlobalError {
    #[error("invalid input: {0}")]
    BadInput(#[from] ChartError),
    #[error("dH - Str(R^R) != 0, residual: {0}")]
    AnomalyResidual(String),
}

impl VertexAlgebroid for ChartAlgebroid {
    type Fun = SuperPolynomial;
    type Form = SuperForm;
    type Field = SuperVectorField;

    fn add_fun(&self, a: &Self::Fun, b: &Self::Fun) -> Self::Fun {
        a.add(b)
    }
    fn neg_fun(&self, a: &Self::Fun) -> Self::Fun {
        a.neg()
    }
    fn is_zero_fun(&self, a: &Self::Fun) -> bool {
        a.is_zero()
    }
    fn add_form(&self, a: &Self::Form, b: &Self::Form) -> Self::Form {
        a.add(b)
    }
    fn neg_form(&self, a: &Self::Form) -> Self::Form {
        a.neg()
    }
    fn is_zero_form(&self, a: &Self::Form) -> bool {
        a.is_zero()
    }
    fn add_field(&self, a: &Self::Field, b: &Self::Field) -> Self::Field {
        a.add(b)
    }
    fn is_zero_field(&self, a: &Self::Field) -> bool {
        a.is_zero()
    }

    fn parity_fun(&self, f: &Self::Fun) -> Option<Parity> {
        f.parity()
    }
    fn parity_field(&self, x: &Self::Field) -> Option<Parity> {
        Some(x.parity())
    }

    fn d(&self, f: &Self::Fun) -> Self::Form {
        d_poly(f)
    }
    fn act(&self, x: &Self::Field, f: &Self::Fun) -> Self::Fun {
        x.apply(f)
    }
    fn lie(&self, x: &Self::Field, w: &Self::Form) -> Self::Form {
        w.lie_derivative(x)
    }
    fn bracket(&self, x: &Self::Field, y: &Self::Field) -> Self::Field {
        x.bracket(y)
    }
    fn pair(&self, w: &Self::Form, x: &Self::Field) -> Self::Fun {
        w.pair(x).expect("degree-1 form in pairing")
    }
    fn mul_fun(&self, f: &Self::Fun, g: &Self::Fun) -> Self::Fun {
        f.mul(g)
    }
    fn mul_fun_form(&self, f: &Self::Fun, w: &Self::Form) -> Self::Form {
        w.mul_fn(f)
    }
    fn mul_fun_field(&self, f: &Self::Fun, x: &Self::Field) -> Self::Field {
        x.scale_fn(f).expect("homogeneous function in module action")
    }

    fn star(&self, f: &Self::Fun, x: &Self::Field) -> Self::Form {
        match &self.kind {
            StructureKind::Coordinate => self.star_coordinate(f, x),
            StructureKind::Global { delta, .. } => {
                let fx = self.mul_fun_field(f, x);
                self.star_coordinate(f, x)
                    .add(&delta.apply(&fx))
                    .sub(&delta.apply(x).mul_fn(f))
            }
            StructureKind::Transported { base, delta } => {
                // f *' X = f * X + Delta(f X) - f Delta(X)
                let fx = self.mul_fun_field(f, x);
                base.star(f, x)
                    .add(&delta.apply(&fx))
                    .sub(&delta.apply(x).mul_fn(f))
            }
        }
    }

    fn brace(&self, x: &Self::Field, y: &Self::Field) -> Self::Fun {
        match &self.kind {
            StructureKind::Coordinate => self.brace_coordinate(x, y),
            StructureKind::Global { delta, .. } => {
                let sgn = x.parity().koszul(y.parity());
                let mut t2 = self.pair(&delta.apply(x), y);
                let mut t3 = self.pair(&delta.apply(y), x);
                if sgn < 0 {
                    t3 = t3.neg();
                }
                t2 = t2.add(&t3);
                self.brace_coordinate(x, y).sub(&t2)
            }
            StructureKind::Transported { base, delta } => {
                // {X,Y}' = {X,Y} - Delta(X)(Y) - (-1)^{|X||Y|} Delta(Y)(X)
                let sgn = x.parity().koszul(y.parity());
                let mut t2 = self.pair(&delta.apply(x), y);
                let mut t3 = self.pair(&delta.apply(y), x);
                if sgn < 0 {
                    t3 = t3.neg();
                }
                t2 = t2.add(&t3);
                base.brace(x, y).sub(&t2)
            }
        }
    }

    fn brace_omega(&self, x: &Self::Field, y: &Self::Field) -> Self::Form {
        match &self.kind {
            StructureKind::Coordinate => self.brace_omega_coordinate(x, y),
            StructureKind::Global { delta, .. } => {
                let sgn = x.parity().koszul(y.parity());
                let mut out = self.brace_omega_coordinate(x, y);
                out = out.sub(&self.lie(x, &delta.apply(y)));
                let mut lyx = self.lie(y, &delta.apply(x));
                if sgn < 0 {
                    lyx = lyx.neg();
                }
                out = out.add(&lyx);
                out = out.sub(&self.d(&self.pair(&delta.apply(x), y)));
                out.add(&delta.apply(&self.bracket(x, y)))
            }
            StructureKind::Transported { base, delta } => {
                // {X,Y}'_Omega = {X,Y}_Omega - L_X Delta(Y)
                //   + (-1)^{|X||Y|} L_Y Delta(X) - d(Delta(X)(Y)) + Delta([X,Y])
                let sgn = x.parity().koszul(y.parity());
                let mut out = base.brace_omega(x, y);
                out = out.sub(&self.lie(x, &delta.apply(y)));
                let mut lyx = self.lie(y, &delta.apply(x));
                if sgn < 0 {
                    lyx = lyx.neg();
                }
                out = out.add(&lyx);
                out = out.sub(&self.d(&self.pair(&delta.apply(x), y)));
                out.add(&delta.apply(&self.bracket(x, y)))
            }
        }
    }

    fn sample_fun(&self, s: &mut Sampler) -> Self::Fun {
        s.any_poly(self.sig)
    }
    fn sample_field(&self, s: &mut Sampler) -> Self::Field {
        s.any_vector_field(self.sig)
    }

    fn enumerate_funs(&self, max_degree: u32) -> Vec<Self::Fun> {
        enumerate_monomials(self.sig, max_degree)
            .into_iter()
            .map(|m| SuperPolynomial::from_terms(self.sig, [(m, GaussianRational::one())]))
            .collect()
    }

    fn enumerate_fields(&self, max_degree: u32) -> Vec<Self::Field> {
        let mut out = Vec::new();
        for m in enumerate_monomials(self.sig, max_degree) {
            let f = SuperPolynomial::from_terms(self.sig, [(m, GaussianRational::one())]);
            for i in 0..self.sig.n() {
                let basis = SuperVectorField::basis(self.sig, i);
                if let Ok(v) = basis.scale_fn(&f) {
                    if !v.is_zero() {
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    fn describe(&self) -> String {
        format!("{} structure on {}", self.provenance(), self.sig)
    }
}

/// All monomials of total degree at most `max_degree` (including 1).
pub fn enumerate_monomials(sig: ChartSignature, max_degree: u32) -> Vec<crate::superpoly::Monomial> {
    use crate::superpoly::Monomial;
    let mut out = vec![Monomial::unit(sig)];
    let mut frontier = vec![Monomial::unit(sig)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            for i in 0..sig.n() {
                let mut m2 = m.clone();
                if i < sig.p {
                    m2.evens[i] += 1;
                } else {
                    if m2.odds.contains(&i) || m2.odds.last().map_or(false, |&l| l > i) {
                        continue; // keep odds strictly increasing to avoid dupes
                    }
                    m2.odds.push(i);
                }
                // dedupe evens: only extend with indices >= last touched
                next.push(m2);
            }
        }
        next.sort();
        next.dedup();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Weight-one conformal action on vector fields:
/// `L_1^omega X = Str(tilde_nabla X) - omega(X)`, defined when
/// `d omega = Str R`.
pub fn conformal_weight1(
    conn: &ConnectionData,
    omega: &SuperForm,
    x: &SuperVectorField,
) -> Result<SuperPolynomial, GlobalError> {
    let residual = omega.d().sub(&conn.curvature().supertrace());
    if !residual.is_zero() {
        return Err(GlobalError::AnomalyResidual(format!("{residual}")));
    }
    let tr = conn.tilde_nabla(x).supertrace().into_poly();
    Ok(tr.sub(&omega.pair(x).map_err(GlobalError::BadInput)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(sig: ChartSignature, i: usize) -> SuperPolynomial {
        SuperPolynomial::coordinate(sig, i)
    }

    #[test]
    fn coordinate_star_example() {
        // f = (b1)^2, X = d1 on A^{1|0}: f *^c X = -2 db1
        let sig = ChartSignature::new(1, 0);
        let v = ChartAlgebroid::coordinate(sig);
        let f = b(sig, 0).mul(&b(sig, 0));
        let x = SuperVectorField::basis(sig, 0);
        let expect = SuperForm::basis_one_form(sig, 0).scale(&GaussianRational::from_int(-2));
        assert_eq!(v.star(&f, &x), expect);
    }

    #[test]
    fn coordinate_brace_basis_fields() {
        let sig = ChartSignature::new(2, 1);
        let v = ChartAlgebroid::coordinate(sig);
        for i in 0..3 {
            for j in 0..3 {
                let x = SuperVectorField::basis(sig, i);
                let y = SuperVectorField::basis(sig, j);
                assert!(v.brace(&x, &y).is_zero());
                assert!(v.brace_omega(&x, &y).is_zero());
            }
        }
    }

    #[test]
    fn coordinate_brace_single_term() {
        // X = b2 d1, Y = b1 d2 on A^{2|0}: {X,Y}^c = -1
        let sig = ChartSignature::new(2, 0);
        let v = ChartAlgebroid::coordinate(sig);
        let x = SuperVectorField::basis(sig, 0).scale_fn(&b(sig, 1)).unwrap();
        let y = SuperVectorField::basis(sig, 1).scale_fn(&b(sig, 0)).unwrap();
        assert_eq!(
            v.brace(&x, &y),
            SuperPolynomial::constant(sig, GaussianRational::from_int(-1))
        );
    }

    #[test]
    fn global_flat_equals_coordinate() {
        // Gamma = 0, H = 0: all three maps agree with the coordinate ones
        for (p, q) in [(2, 0), (1, 1), (0, 2), (2, 1)] {
            let sig = ChartSignature::new(p, q);
            let coord = ChartAlgebroid::coordinate(sig);
            let flat = ChartAlgebroid::global(
                ConnectionData::flat(sig),
                SuperForm::zero(sig, 3),
            )
            .unwrap();
            let mut s = Sampler::new(17);
            for k in 0..50 {
                let f = coord.sample_fun(&mut s);
                let x = coord.sample_field(&mut s);
                let y = coord.sample_field(&mut s);
                if f.parity().is_none() {
                    continue;
                }
                assert_eq!(coord.star(&f, &x), flat.star(&f, &x), "star p={p} q={q} k={k}");
                assert_eq!(coord.brace(&x, &y), flat.brace(&x, &y), "brace p={p} q={q} k={k}");
                assert_eq!(
                    coord.brace_omega(&x, &y),
                    flat.brace_omega(&x, &y),
                    "brace_omega p={p} q={q} k={k}"
                );
            }
        }
    }

    #[test]
    fn global_h_contraction_example() {
        // Gamma = 0, H = db1^db2^db3 on A^{3|0}:
        // {d1,d2}_Omega = 1/2 i_{d1} i_{d2} H = -1/2 db3
        let sig = ChartSignature::new(3, 0);
        let db = |i| SuperForm::basis_one_form(sig, i);
        let h = db(0).wedge(&db(1)).wedge(&db(2));
        let v = ChartAlgebroid::global(ConnectionData::flat(sig), h).unwrap();
        let x = SuperVectorField::basis(sig, 0);
        let y = SuperVectorField::basis(sig, 1);
        let expect = db(2).scale(&GaussianRational::from_ratio(-1, 2));
        assert_eq!(v.brace_omega(&x, &y), expect);
    }

    #[test]
    fn global_even_x_h_term_vanishes_for_xx() {
        let sig = ChartSignature::new(2, 2);
        let mut s = Sampler::new(23);
        let h = s.closed_even_form(sig, 3);
        let x = s.vector_field(sig, Parity::Even);
        assert!(h.contract(&x).contract(&x).is_zero());
    }

    #[test]
    fn conformal_weight1_examples() {
        let sig = ChartSignature::new(1, 0);
        let conn = ConnectionData::flat(sig);
        let omega0 = SuperForm::zero(sig, 1);
        // X = d1 -> 0
        assert!(conformal_weight1(&conn, &omega0, &SuperVectorField::basis(sig, 0))
            .unwrap()
            .is_zero());
        // X = b1 d1 -> 1
        let x = SuperVectorField::basis(sig, 0).scale_fn(&b(sig, 0)).unwrap();
        assert_eq!(
            conformal_weight1(&conn, &omega0, &x).unwrap(),
            SuperPolynomial::one(sig)
        );
        // omega = db1, X = d1 -> -1
        let omega = SuperForm::basis_one_form(sig, 0);
        assert_eq!(
            conformal_weight1(&conn, &omega, &SuperVectorField::basis(sig, 0)).unwrap(),
            SuperPolynomial::one(sig).neg()
        );
    }
}

#[cfg(test)]
mod formula_route_tests {
    use super::*;

    #[test]
    fn even_chart_formula_route_matches_structure() {
        for (p, seed) in [(2usize, 31u64), (3, 32), (4, 33)] {
            let sig = ChartSignature::new(p, 0);
            let mut s = Sampler::new(seed);
            let gamma = s.connection_form(sig);
            let conn = ConnectionData::new(gamma).unwrap();
            let h = conn.cs_form().add(&s.even_form(sig, 2).d());
            let v = ChartAlgebroid::global(conn.clone(), h.clone()).unwrap();
            for _ in 0..25 {
                let f = s.any_poly(sig);
                let x = s.any_vector_field(sig);
                let y = s.any_vector_field(sig);
                assert_eq!(v.star(&f, &x), formula_star(&conn, &f, &x));
                assert_eq!(v.brace(&x, &y), formula_brace(&conn, &x, &y));
                assert_eq!(
                    v.brace_omega(&x, &y),
                    formula_brace_omega(&conn, &h, &x, &y),
                    "p={p}"
                );
            }
        }
    }

    #[test]
    fn global_structure_passes_axioms_on_super_charts() {
        for (p, q, seed) in [(2usize, 1usize, 41u64), (1, 2, 42), (1, 1, 43)] {
            let sig = ChartSignature::new(p, q);
            let mut s = Sampler::new(seed);
            let conn = ConnectionData::new(s.connection_form(sig)).unwrap();
            let h = conn.cs_form().add(&s.even_form(sig, 2).d());
            let v = ChartAlgebroid::global(conn, h).unwrap();
            let suite = check_axioms(&v, &mut s, 60, None);
            assert!(suite.all_passed(), "{suite}");
        }
    }
}
