//! Chart data for parity-reversed bundles and the lifted vector fields.

use crate::algebroid::ConnectionData;
use crate::scalars::GaussianRational;
use crate::superpoly::form::{one_form_from_contractions, SuperForm};
use crate::superpoly::{
    ChartError, ChartSignature, MatrixForm, Parity, SuperPolynomial, SuperVectorField,
};

/// A small matrix of forms over the base variables of a chart.
pub type BaseMatrix = Vec<Vec<SuperForm>>;

pub fn mat_zero(sig: ChartSignature, n: usize, degree: usize) -> BaseMatrix {
    (0..n)
        .map(|_| (0..n).map(|_| SuperForm::zero(sig, degree)).collect())
        .collect()
}

pub fn mat_add(a: &BaseMatrix, b: &BaseMatrix) -> BaseMatrix {
    a.iter()
        .zip(b)
        .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x.add(y)).collect())
        .collect()
}

pub fn mat_mul(a: &BaseMatrix, b: &BaseMatrix) -> BaseMatrix {
    let n = a.len();
    let sig = a[0][0].signature();
    let deg = a[0][0].degree() + b[0][0].degree();
    let mut out = mat_zero(sig, n, deg);
    for i in 0..n {
        for j in 0..n {
            let mut acc = SuperForm::zero(sig, deg);
            for k in 0..n {
                acc = acc.add(&a[i][k].wedge(&b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_d(a: &BaseMatrix) -> BaseMatrix {
    a.iter().map(|r| r.iter().map(|e| e.d()).collect()).collect()
}

pub fn mat_trace(a: &BaseMatrix) -> SuperForm {
    let mut out = SuperForm::zero(a[0][0].signature(), a[0][0].degree());
    for (i, row) in a.iter().enumerate() {
        out = out.add(&row[i]);
    }
    out
}

/// Which identification the chart realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartModel {
    /// Fiber coordinates are an odd frame of `E^dual` over a `d`-dim base.
    PiBundle,
    /// `E = TM`: fiber frame is `dx^i`; carries the odd differential `Q`.
    DeRham,
    /// Complex base with holomorphic-type connections; carries `J^r, J^l, Q`.
    Dolbeault,
}

/// The distinguished lifted fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftedField {
    /// `D_X` of the coordinate base field `d_a`.
    CovariantBasis(usize),
    /// `I` of the frame section (`eps_k`, or `dbar_i` in the Dolbeault
    /// antiholomorphic block).
    ContractionBasis(usize),
    /// Fiber degree (`J`, or `J^l` on Dolbeault charts).
    DegreeLeft,
    /// Antiholomorphic degree `J^r` (Dolbeault only).
    DegreeRight,
    /// The lifted differential `Q`.
    Differential,
}

/// A polynomial chart for a parity-reversed bundle.
#[derive(Debug, Clone)]
pub struct BundleChart {
    pub model: ChartModel,
    /// Complex/real base dimension.
    pub d: usize,
    /// Bundle rank (`= d` for the de Rham model; `E`-rank for Dolbeault).
    pub r: usize,
    sig: ChartSignature,
    /// Base connection matrix (`d x d`, one-forms in base differentials).
    gamma_m: BaseMatrix,
    /// Bundle connection matrix (`r x r`).
    gamma_e: BaseMatrix,
    r_m: BaseMatrix,
    r_e: BaseMatrix,
}

impl BundleChart {
    /// Signature layout: `PiBundle`/`DeRham`: evens `x^1..x^d`, odds
    /// `eps^1..eps^r`. `Dolbeault`: evens `z^1..z^d, zb^1..zb^d`, odds
    /// `zeta^1..zeta^d, eps^1..eps^r`.
    pub fn signature_for(model: ChartModel, d: usize, r: usize) -> ChartSignature {
        match model {
            ChartModel::PiBundle | ChartModel::DeRham => ChartSignature::new(d, r),
            ChartModel::Dolbeault => ChartSignature::new(2 * d, d + r),
        }
    }

    pub fn new(
        model: ChartModel,
        d: usize,
        r: usize,
        gamma_m: BaseMatrix,
        gamma_e: BaseMatrix,
    ) -> Result<Self, ChartError> {
        if model == ChartModel::DeRham && r != d {
            return Err(ChartError::IndexOutOfRange(r, d));
        }
        let sig = Self::signature_for(model, d, r);
        let chart = BundleChart {
            model,
            d,
            r,
            sig,
            r_m: mat_zero(sig, gamma_m.len(), 2),
            r_e: mat_zero(sig, gamma_e.len().max(1), 2),
            gamma_m,
            gamma_e,
        };
        chart.validate()?;
        Ok(chart.with_curvatures())
    }

    fn with_curvatures(mut self) -> Self {
        self.r_m = mat_add(&mat_d(&self.gamma_m), &mat_mul(&self.gamma_m, &self.gamma_m));
        if !self.gamma_e.is_empty() {
            self.r_e = mat_add(&mat_d(&self.gamma_e), &mat_mul(&self.gamma_e, &self.gamma_e));
        }
        self
    }

    fn validate(&self) -> Result<(), ChartError> {
        let base_ok = |m: &BaseMatrix, n: usize, holomorphic: bool| -> bool {
            if m.len() != n {
                return false;
            }
            m.iter().all(|row| {
                row.len() == n
                    && row.iter().all(|e| {
                        e.degree() == 1
                            && e.terms().all(|(w, c)| {
                                let slot_ok = if holomorphic {
                                    w[0] < self.d // only dz-components
                                } else {
                                    w[0] < self.sig.p
                                };
                                slot_ok
                                    && c.terms().all(|(mono, _)| mono.odds.is_empty())
                            })
                    })
            })
        };
        let holo = self.model == ChartModel::Dolbeault;
        if !base_ok(&self.gamma_m, self.d, holo) {
            return Err(ChartError::MixedParity);
        }
        let er = if self.model == ChartModel::DeRham { self.d } else { self.r };
        if self.model != ChartModel::DeRham && !base_ok(&self.gamma_e, er, holo) {
            return Err(ChartError::MixedParity);
        }
        Ok(())
    }

    /// De Rham chart: `E = TM`, the bundle connection is the base one.
    pub fn de_rham(d: usize, gamma_m: BaseMatrix) -> Result<Self, ChartError> {
        let ge = gamma_m.clone();
        BundleChart::new(ChartModel::DeRham, d, d, gamma_m, ge)
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    pub fn gamma_m(&self) -> &BaseMatrix {
        &self.gamma_m
    }

    pub fn gamma_e(&self) -> &BaseMatrix {
        if self.model == ChartModel::DeRham {
            &self.gamma_m
        } else {
            &self.gamma_e
        }
    }

    pub fn curvature_m(&self) -> &BaseMatrix {
        &self.r_m
    }

    pub fn curvature_e(&self) -> &BaseMatrix {
        if self.model == ChartModel::DeRham {
            &self.r_m
        } else {
            &self.r_e
        }
    }

    /// The conjugate base connection on Dolbeault charts: swap `z <-> zb`
    /// in coefficients, conjugate scalars, and move `dz` words to `dzb`.
    pub fn gamma_m_bar(&self) -> BaseMatrix {
        assert_eq!(self.model, ChartModel::Dolbeault);
        self.gamma_m
            .iter()
            .map(|row| row.iter().map(|e| self.conjugate_form(e)).collect())
            .collect()
    }

    pub fn curvature_m_bar(&self) -> BaseMatrix {
        let gb = self.gamma_m_bar();
        mat_add(&mat_d(&gb), &mat_mul(&gb, &gb))
    }

    pub fn conjugate_form(&self, e: &SuperForm) -> SuperForm {
        let sig = self.sig;
        let d = self.d;
        let perm: Vec<usize> = (0..sig.n())
            .map(|i| {
                if i < d {
                    i + d
                } else if i < 2 * d {
                    i - d
                } else {
                    i
                }
            })
            .collect();
        let mut out = SuperForm::zero(sig, e.degree());
        for (w, c) in e.terms() {
            let word: Vec<usize> = w.iter().map(|&i| perm[i]).collect();
            let coeff = c
                .map_coeffs(|v| v.conj())
                .rename_vars(&perm);
            out.insert_raw(word, coeff);
        }
        out
    }

    /// Indices of the odd fiber block (`eps` block; on Dolbeault charts
    /// this is the `E`-frame block, after the `zeta` block).
    pub fn eps_index(&self, k: usize) -> usize {
        match self.model {
            ChartModel::PiBundle | ChartModel::DeRham => self.d + k,
            ChartModel::Dolbeault => 3 * self.d + k,
        }
    }

    /// Index of `zeta^i` on Dolbeault charts.
    pub fn zeta_index(&self, i: usize) -> usize {
        assert_eq!(self.model, ChartModel::Dolbeault);
        2 * self.d + i
    }

    fn coord(&self, i: usize) -> SuperPolynomial {
        SuperPolynomial::coordinate(self.sig, i)
    }

    /// `D` of a base direction `d_a` (`a < p`), as a chart vector field.
    pub fn lift_covariant_basis(&self, a: usize) -> SuperVectorField {
        let sig = self.sig;
        let mut comps: Vec<SuperPolynomial> =
            (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
        comps[a] = SuperPolynomial::one(sig);
        let da = SuperVectorField::basis(sig, a);
        match self.model {
            ChartModel::PiBundle | ChartModel::DeRham => {
                let ge = self.gamma_e();
                for l in 0..self.r {
                    let mut acc = SuperPolynomial::zero(sig);
                    for k in 0..self.r {
                        let g = ge[l][k].contract(&da).into_poly();
                        if !g.is_zero() {
                            acc = acc.sub(&g.mul(&self.coord(self.eps_index(k))));
                        }
                    }
                    comps[self.eps_index(l)] = acc;
                }
            }
            ChartModel::Dolbeault => {
                let gb = self.gamma_m_bar();
                for j in 0..self.d {
                    let mut acc = SuperPolynomial::zero(sig);
                    for k in 0..self.d {
                        let g = gb[j][k].contract(&da).into_poly();
                        if !g.is_zero() {
                            acc = acc.sub(&g.mul(&self.coord(self.zeta_index(k))));
                        }
                    }
                    comps[self.zeta_index(j)] = acc;
                }
                for l in 0..self.r {
                    let mut acc = SuperPolynomial::zero(sig);
                    for k in 0..self.r {
                        let g = self.gamma_e[l][k].contract(&da).into_poly();
                        if !g.is_zero() {
                            acc = acc.sub(&g.mul(&self.coord(self.eps_index(k))));
                        }
                    }
                    comps[self.eps_index(l)] = acc;
                }
            }
        }
        SuperVectorField::new(sig, comps, Parity::Even).expect("covariant lift parity")
    }

    /// `D` of a base vector field given by even components (length `p`).
    pub fn lift_covariant(&self, base: &[SuperPolynomial]) -> SuperVectorField {
        let sig = self.sig;
        let mut out = SuperVectorField::zero(sig, Parity::Even);
        let mut parity: Option<Parity> = None;
        for (a, c) in base.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let lift = self.lift_covariant_basis(a);
            let term = lift.scale_fn(c).expect("homogeneous base coefficient");
            match parity {
                None => {
                    parity = Some(term.parity());
                    out = SuperVectorField::zero(sig, term.parity());
                }
                Some(_) => {}
            }
            out = out.add(&term);
        }
        out
    }

    /// `I` of a fiber section with chart-function coefficients
    /// (components in the `eps`-frame).
    pub fn lift_contraction(&self, coeffs: &[SuperPolynomial]) -> SuperVectorField {
        let sig = self.sig;
        let mut comps: Vec<SuperPolynomial> =
            (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
        for (k, c) in coeffs.iter().enumerate() {
            comps[self.eps_index(k)] = c.clone();
        }
        let parity = comps
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| c.parity().expect("homogeneous").combine(sig.parity(i)))
            .unwrap_or(Parity::Odd);
        SuperVectorField::new(sig, comps, parity).expect("contraction lift parity")
    }

    /// `I` of an antiholomorphic direction (zeta block, Dolbeault).
    pub fn lift_contraction_bar(&self, coeffs: &[SuperPolynomial]) -> SuperVectorField {
        assert_eq!(self.model, ChartModel::Dolbeault);
        let sig = self.sig;
        let mut comps: Vec<SuperPolynomial> =
            (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
        for (i, c) in coeffs.iter().enumerate() {
            comps[self.zeta_index(i)] = c.clone();
        }
        let parity = comps
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| c.parity().expect("homogeneous").combine(sig.parity(i)))
            .unwrap_or(Parity::Odd);
        SuperVectorField::new(sig, comps, parity).expect("contraction lift parity")
    }

    /// One of the distinguished fields.
    pub fn lift(&self, kind: LiftedField) -> SuperVectorField {
        let sig = self.sig;
        match kind {
            LiftedField::CovariantBasis(a) => self.lift_covariant_basis(a),
            LiftedField::ContractionBasis(k) => match self.model {
                ChartModel::PiBundle | ChartModel::DeRham => {
                    let mut coeffs = vec![SuperPolynomial::zero(sig); self.r];
                    coeffs[k] = SuperPolynomial::one(sig);
                    self.lift_contraction(&coeffs)
                }
                ChartModel::Dolbeault => {
                    let mut coeffs = vec![SuperPolynomial::zero(sig); self.r];
                    coeffs[k] = SuperPolynomial::one(sig);
                    self.lift_contraction(&coeffs)
                }
            },
            LiftedField::DegreeLeft => {
                let mut comps: Vec<SuperPolynomial> =
                    (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
                for k in 0..self.r {
                    comps[self.eps_index(k)] = self.coord(self.eps_index(k));
                }
                SuperVectorField::new(sig, comps, Parity::Even).expect("degree parity")
            }
            LiftedField::DegreeRight => {
                assert_eq!(self.model, ChartModel::Dolbeault);
                let mut comps: Vec<SuperPolynomial> =
                    (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
                for i in 0..self.d {
                    comps[self.zeta_index(i)] = self.coord(self.zeta_index(i));
                }
                SuperVectorField::new(sig, comps, Parity::Even).expect("degree parity")
            }
            LiftedField::Differential => self.lift_q(),
        }
    }

    /// The odd differential: `eps^i D_{d_i}` on de Rham charts,
    /// `zeta^i D_{dbar_i}` on Dolbeault charts.
    pub fn lift_q(&self) -> SuperVectorField {
        let sig = self.sig;
        match self.model {
            ChartModel::DeRham => {
                let mut out = SuperVectorField::zero(sig, Parity::Odd);
                for i in 0..self.d {
                    let term = self
                        .lift_covariant_basis(i)
                        .scale_fn(&self.coord(self.eps_index(i)))
                        .expect("odd scaling");
                    out = out.add(&term);
                }
                out
            }
            ChartModel::Dolbeault => {
                let mut out = SuperVectorField::zero(sig, Parity::Odd);
                for i in 0..self.d {
                    let term = self
                        .lift_covariant_basis(self.d + i)
                        .scale_fn(&self.coord(self.zeta_index(i)))
                        .expect("odd scaling");
                    out = out.add(&term);
                }
                out
            }
            ChartModel::PiBundle => panic!("no differential on a plain bundle chart"),
        }
    }

    /// The full even-block base curvature (`p x p`): the base curvature
    /// itself, or the block sum with its conjugate on Dolbeault charts.
    pub fn base_block_curvature(&self) -> BaseMatrix {
        match self.model {
            ChartModel::PiBundle | ChartModel::DeRham => self.curvature_m().clone(),
            ChartModel::Dolbeault => {
                let sig = self.sig;
                let rb = self.curvature_m_bar();
                let mut out = mat_zero(sig, 2 * self.d, 2);
                for i in 0..self.d {
                    for j in 0..self.d {
                        out[i][j] = self.r_m[i][j].clone();
                        out[self.d + i][self.d + j] = rb[i][j].clone();
                    }
                }
                out
            }
        }
    }

    /// Torsion check for the base connection: symmetric lower indices.
    /// On Dolbeault charts only the holomorphic block is constrained.
    pub fn is_torsion_free(&self) -> bool {
        let sig = self.sig;
        let pairs: Vec<usize> = (0..self.d).collect();
        for j in 0..self.d {
            for (ia, &a) in pairs.iter().enumerate() {
                for &b in &pairs[ia..] {
                    let da = SuperVectorField::basis(
                        sig,
                        if self.model == ChartModel::Dolbeault { a } else { a },
                    );
                    let db = SuperVectorField::basis(
                        sig,
                        if self.model == ChartModel::Dolbeault { b } else { b },
                    );
                    let gjab = self.gamma_m[j][b].contract(&da).into_poly();
                    let gjba = self.gamma_m[j][a].contract(&db).into_poly();
                    if gjab != gjba {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Symmetrize the base connection (the standard replacement making it
    /// torsion-free while keeping the holomorphic type).
    pub fn symmetrized(mut self) -> Self {
        let sig = self.sig;
        let half = GaussianRational::from_ratio(1, 2);
        let mut new_gm = self.gamma_m.clone();
        for j in 0..self.d {
            for b in 0..self.d {
                let mut vals: Vec<SuperPolynomial> =
                    (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
                for a in 0..self.d {
                    let da = SuperVectorField::basis(sig, a);
                    let db = SuperVectorField::basis(sig, b);
                    let gjab = self.gamma_m[j][b].contract(&da).into_poly();
                    let gjba = self.gamma_m[j][a].contract(&db).into_poly();
                    vals[a] = gjab.add(&gjba).scale(&half);
                }
                new_gm[j][b] = one_form_from_contractions(sig, &vals);
            }
        }
        if self.model == ChartModel::DeRham {
            self.gamma_e = new_gm.clone();
        }
        self.gamma_m = new_gm;
        self.with_curvatures()
    }

    /// The chart affine connection in the adapted frame, applied to a
    /// chart vector field along another: the frame rules
    /// `nabla_{D_X} D_Y = D_{nabla^M_X Y}`, `nabla_{D_X} I = I_{nabla^E}`,
    /// `nabla_I = 0`, extended by the Leibniz rule
    /// `nabla_Y (c e) = Y(c) e + (-1)^{|Y||c|} c nabla_Y e` through the
    /// unitriangular frame decomposition of coordinate fields.
    pub fn nabla_frame(&self, y: &SuperVectorField, w: &SuperVectorField) -> SuperVectorField {
        let sig = self.sig;
        let (cd_w, ci_w, cz_w) = self.frame_decompose(w);
        let (cd_y, _ci_y, _cz_y) = self.frame_decompose(y);
        let mut out = SuperVectorField::zero(sig, y.parity().combine(w.parity()));
        // derivative part: Y(c^alpha) e_alpha
        for a in 0..sig.p {
            let c = y.apply(&cd_w[a]);
            if !c.is_zero() {
                out = out.add(&self.lift_covariant_basis(a).scale_fn(&c).expect("parity"));
            }
        }
        for k in 0..self.r {
            let c = y.apply(&ci_w[k]);
            if !c.is_zero() {
                let mut coeffs = vec![SuperPolynomial::zero(sig); self.r];
                coeffs[k] = c;
                out = out.add(&self.lift_contraction(&coeffs));
            }
        }
        if self.model == ChartModel::Dolbeault {
            for i in 0..self.d {
                let c = y.apply(&cz_w[i]);
                if !c.is_zero() {
                    let mut coeffs = vec![SuperPolynomial::zero(sig); self.d];
                    coeffs[i] = c;
                    out = out.add(&self.lift_contraction_bar(&coeffs));
                }
            }
        }
        // connection part: (-1)^{|Y||c|} c (sum_b c_Y^b nabla_{D_b} e)
        let signed = |c: &SuperPolynomial| -> SuperPolynomial {
            match c.parity() {
                Some(cp) if y.parity().koszul(cp) < 0 => c.neg(),
                _ => c.clone(),
            }
        };
        for b in 0..sig.p {
            let yb = &cd_y[b];
            if yb.is_zero() {
                continue;
            }
            let db = SuperVectorField::basis(sig, b);
            for a in 0..sig.p {
                let ca = &cd_w[a];
                if ca.is_zero() {
                    continue;
                }
                for j in 0..sig.p {
                    let g = self.base_gamma_entry(j, a, &db);
                    if g.is_zero() {
                        continue;
                    }
                    let coeff = signed(ca).mul(yb).mul(&g);
                    out = out.add(
                        &self
                            .lift_covariant_basis(j)
                            .scale_fn(&coeff)
                            .expect("parity"),
                    );
                }
            }
            let ge = self.gamma_e();
            for k in 0..self.r {
                let ck = &ci_w[k];
                if ck.is_zero() {
                    continue;
                }
                for l in 0..self.r {
                    let g = ge[l][k].contract(&db).into_poly();
                    if g.is_zero() {
                        continue;
                    }
                    let coeff = signed(ck).mul(yb).mul(&g);
                    let mut coeffs = vec![SuperPolynomial::zero(sig); self.r];
                    coeffs[l] = coeff;
                    out = out.add(&self.lift_contraction(&coeffs));
                }
            }
            if self.model == ChartModel::Dolbeault {
                let gb = self.gamma_m_bar();
                for i in 0..self.d {
                    let ci = &cz_w[i];
                    if ci.is_zero() {
                        continue;
                    }
                    for j in 0..self.d {
                        let g = gb[j][i].contract(&db).into_poly();
                        if g.is_zero() {
                            continue;
                        }
                        let coeff = signed(ci).mul(yb).mul(&g);
                        let mut coeffs = vec![SuperPolynomial::zero(sig); self.d];
                        coeffs[j] = coeff;
                        out = out.add(&self.lift_contraction_bar(&coeffs));
                    }
                }
            }
        }
        out
    }

    /// Base connection action split for the two even blocks of a Dolbeault
    /// chart: holomorphic directions use `Gamma^M`, antiholomorphic use
    /// the conjugate.
    fn base_gamma_entry(
        &self,
        j: usize,
        a: usize,
        direction: &SuperVectorField,
    ) -> SuperPolynomial {
        let sig = self.sig;
        match self.model {
            ChartModel::PiBundle | ChartModel::DeRham => {
                if j < self.d && a < self.d {
                    self.gamma_m[j][a].contract(direction).into_poly()
                } else {
                    SuperPolynomial::zero(sig)
                }
            }
            ChartModel::Dolbeault => {
                if j < self.d && a < self.d {
                    self.gamma_m[j][a].contract(direction).into_poly()
                } else if j >= self.d && a >= self.d {
                    self.gamma_m_bar()[j - self.d][a - self.d]
                        .contract(direction)
                        .into_poly()
                } else {
                    SuperPolynomial::zero(sig)
                }
            }
        }
    }

    /// Decompose a chart field over the adapted frame:
    /// `W = sum_a c_D^a D_a + sum_i c_Z^i I_{zeta_i} + sum_k c_I^k I_{eps_k}`.
    /// The frame is unitriangular over the coordinate frame, so the
    /// coefficients read off directly.
    pub fn frame_decompose(
        &self,
        w: &SuperVectorField,
    ) -> (Vec<SuperPolynomial>, Vec<SuperPolynomial>, Vec<SuperPolynomial>) {
        let sig = self.sig;
        let cd: Vec<SuperPolynomial> = (0..sig.p).map(|a| w.component(a).clone()).collect();
        // remainder after subtracting c_D^a D_a lies in the fiber block
        let mut rem = w.clone();
        for (a, c) in cd.iter().enumerate() {
            if !c.is_zero() {
                rem = rem.sub(&self.lift_covariant_basis(a).scale_fn(c).expect("parity"));
            }
        }
        let ci: Vec<SuperPolynomial> =
            (0..self.r).map(|k| rem.component(self.eps_index(k)).clone()).collect();
        let cz: Vec<SuperPolynomial> = if self.model == ChartModel::Dolbeault {
            (0..self.d).map(|i| rem.component(self.zeta_index(i)).clone()).collect()
        } else {
            Vec::new()
        };
        (cd, ci, cz)
    }

    /// The induced connection in the coordinate frame, ready for
    /// connection-based structures: reconstructed from
    /// `nabla_{d_m} d_i` through the frame rules.
    pub fn coordinate_connection(&self) -> Result<ConnectionData, ChartError> {
        let sig = self.sig;
        let mut gamma = MatrixForm::zero(sig, 1);
        for i in 0..sig.n() {
            let di = SuperVectorField::basis(sig, i);
            let mut vals: Vec<Vec<SuperPolynomial>> = Vec::new();
            for m in 0..sig.n() {
                let dm = SuperVectorField::basis(sig, m);
                let nd = self.nabla_frame(&dm, &di);
                vals.push(nd.components().to_vec());
            }
            for j in 0..sig.n() {
                let col: Vec<SuperPolynomial> = (0..sig.n())
                    .map(|m| {
                        let mut v = vals[m][j].clone();
                        if sig.eps(i) * sig.eps_pair(i, j) < 0 {
                            v = v.neg();
                        }
                        v
                    })
                    .collect();
                gamma.set_entry(j, i, one_form_from_contractions(sig, &col));
            }
        }
        ConnectionData::new(gamma)
    }
}

/// A random base-form matrix: `n x n` one-forms in the first `d` (or, for
/// holomorphic type, the first `holomorphic_d`) differentials, with
/// coefficients polynomial in the even base variables.
pub fn sample_base_matrix(
    sig: ChartSignature,
    n: usize,
    d: usize,
    s: &mut crate::sampler::Sampler,
    holomorphic_d: Option<usize>,
) -> BaseMatrix {
    let mut m = mat_zero(sig, n, 1);
    for row in m.iter_mut() {
        for e in row.iter_mut() {
            let slots = s.int(0, 2);
            for _ in 0..slots {
                let j = match holomorphic_d {
                    Some(hd) => s.int(0, hd as i64 - 1) as usize,
                    None => s.int(0, d as i64 - 1) as usize,
                };
                let deg = s.int(0, 2);
                let mut c = SuperPolynomial::one(sig);
                for _ in 0..deg {
                    let v = s.int(0, sig.p as i64 - 1) as usize;
                    c = c.mul(&SuperPolynomial::coordinate(sig, v));
                }
                c = c.scale(&GaussianRational::from_int(s.int(-2, 2)));
                let mut f = SuperForm::zero(sig, 1);
                f.insert_raw(vec![j], c);
                *e = e.add(&f);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::Sampler;

    #[test]
    fn degree_operator_counts() {
        // J multiplies a 3-fold fiber monomial by 3
        let sig = ChartSignature::new(1, 3);
        let chart = BundleChart::new(
            ChartModel::PiBundle,
            1,
            3,
            mat_zero(sig, 1, 1),
            mat_zero(sig, 3, 1),
        )
        .unwrap();
        let j = chart.lift(LiftedField::DegreeLeft);
        let e = |k: usize| SuperPolynomial::coordinate(sig, 1 + k);
        let f = e(0).mul(&e(1)).mul(&e(2));
        assert_eq!(j.apply(&f), f.scale(&GaussianRational::from_int(3)));
    }

    #[test]
    fn contraction_left_derivation() {
        // I_{eps_1}(eps^1 eps^2) = eps^2
        let sig = ChartSignature::new(1, 2);
        let chart = BundleChart::new(
            ChartModel::PiBundle,
            1,
            2,
            mat_zero(sig, 1, 1),
            mat_zero(sig, 2, 1),
        )
        .unwrap();
        let i1 = chart.lift(LiftedField::ContractionBasis(0));
        let e = |k: usize| SuperPolynomial::coordinate(sig, 1 + k);
        assert_eq!(i1.apply(&e(0).mul(&e(1))), e(1));
    }

    #[test]
    fn flat_q_is_exterior_derivative() {
        // flat de Rham chart: Q(f) = eps^i d_i f for base functions
        let d = 2;
        let sig = ChartSignature::new(d, d);
        let chart = BundleChart::de_rham(d, mat_zero(sig, d, 1)).unwrap();
        let q = chart.lift_q();
        let x = |i: usize| SuperPolynomial::coordinate(sig, i);
        let f = x(0).mul(&x(0)).mul(&x(1));
        let qf = q.apply(&f);
        let e = |k: usize| SuperPolynomial::coordinate(sig, d + k);
        let expect = e(0)
            .mul(&f.partial(0).unwrap())
            .add(&e(1).mul(&f.partial(1).unwrap()));
        assert_eq!(qf, expect);
    }

    #[test]
    fn coordinate_connection_matches_frame_rules() {
        for seed in [1u64, 2] {
            let d = 2;
            let r = 1;
            let sig = BundleChart::signature_for(ChartModel::PiBundle, d, r);
            let mut s = Sampler::new(seed);
            let gm = sample_base_matrix(sig, d, d, &mut s, None);
            let ge = sample_base_matrix(sig, r, d, &mut s, None);
            let chart = BundleChart::new(ChartModel::PiBundle, d, r, gm, ge).unwrap();
            let conn = chart.coordinate_connection().unwrap();
            for _ in 0..12 {
                let y = s.any_vector_field(sig);
                let w = s.any_vector_field(sig);
                let via_frame = chart.nabla_frame(&y, &w);
                let via_coord = conn.nabla_vf(&y, &w);
                assert_eq!(
                    via_frame.components(),
                    via_coord.components(),
                    "seed={seed}"
                );
            }
        }
    }

    #[test]
    fn dolbeault_coordinate_connection_consistent() {
        let d = 1;
        let r = 1;
        let sig = BundleChart::signature_for(ChartModel::Dolbeault, d, r);
        let mut s = Sampler::new(5);
        let gm = sample_base_matrix(sig, d, 2 * d, &mut s, Some(d));
        let ge = sample_base_matrix(sig, r, 2 * d, &mut s, Some(d));
        let chart = BundleChart::new(ChartModel::Dolbeault, d, r, gm, ge).unwrap();
        let conn = chart.coordinate_connection().unwrap();
        for _ in 0..10 {
            let y = s.any_vector_field(sig);
            let w = s.any_vector_field(sig);
            assert_eq!(
                chart.nabla_frame(&y, &w).components(),
                conn.nabla_vf(&y, &w).components()
            );
        }
    }
}
