//! Sectioned key-value files describing charts and chart maps.
//!
//! A file is a sequence of `[section]` headers followed by `key = value`
//! lines; values on the right of `=` are expressions in the chart grammar
//! (`b1..`, `x1../eps1..`, `z1../zb1../zeta1../eps1..` depending on the
//! chart kind). Blank lines and `#` comments are ignored.

use anyhow::{anyhow, bail, Context, Result};
use cdo_core::algebroid::{ChartAlgebroid, ConnectionData, PullbackMap};
use cdo_core::cs_geometry::{mat_zero, BundleChart, ChartModel};
use cdo_core::superpoly::parser::{parse_form, parse_poly, VarNames};
use cdo_core::superpoly::{ChartSignature, MatrixForm, SuperForm, SuperPolynomial};
use std::collections::BTreeMap;

#[derive(Debug, Default, Clone)]
pub struct SpecFile {
    sections: BTreeMap<String, Vec<(String, String)>>,
}

impl SpecFile {
    pub fn parse(src: &str) -> Result<Self> {
        let mut out = SpecFile::default();
        let mut current = String::from("");
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                current = line[1..line.len() - 1].trim().to_lowercase();
                out.sections.entry(current.clone()).or_default();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            out.sections
                .entry(current.clone())
                .or_default()
                .push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(out)
    }

    pub fn load(path: &str) -> Result<Self> {
        let src = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        Self::parse(&src)
    }

    fn section(&self, name: &str) -> Option<&[(String, String)]> {
        self.sections.get(name).map(|v| v.as_slice())
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section)?
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn get_usize(&self, section: &str, key: &str) -> Result<Option<usize>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => Ok(Some(v.parse().with_context(|| format!("[{section}] {key}"))?)),
        }
    }
}

/// The kinds of chart a spec file can describe.
pub enum ChartSpec {
    /// A plain chart and the structure on it.
    Structure {
        sig: ChartSignature,
        names: VarNames,
        structure: ChartAlgebroid,
        omega: Option<SuperForm>,
        b_form: Option<SuperForm>,
        h: Option<SuperForm>,
        conn: Option<ConnectionData>,
    },
    /// A bundle chart with its lifted calculus and optional three-form.
    Bundle { chart: BundleChart, h: Option<SuperForm>, omega: Option<SuperForm> },
}

/// Parse a matrix section `[name]` with lines `row col = expr` (1-based).
fn parse_matrix(
    spec: &SpecFile,
    section: &str,
    names: &VarNames,
    n: usize,
) -> Result<Option<MatrixForm>> {
    let entries = match spec.section(section) {
        None => return Ok(None),
        Some(e) => e,
    };
    let sig = names.signature();
    let mut m = MatrixForm::zero(sig, 1);
    for (k, v) in entries {
        let mut it = k.split_whitespace();
        let row: usize = it
            .next()
            .ok_or_else(|| anyhow!("[{section}]: entry key must be `row col`"))?
            .parse()?;
        let col: usize = it
            .next()
            .ok_or_else(|| anyhow!("[{section}]: entry key must be `row col`"))?
            .parse()?;
        if row < 1 || row > n || col < 1 || col > n {
            bail!("[{section}]: index out of range: {row} {col}");
        }
        let f = parse_form(v, names, 1).map_err(|e| anyhow!("[{section}] {k}: {e}"))?;
        m.set_entry(row - 1, col - 1, m.entry(row - 1, col - 1).add(&f));
    }
    Ok(Some(m))
}

fn parse_base_matrix(
    spec: &SpecFile,
    section: &str,
    names: &VarNames,
    n: usize,
) -> Result<Option<cdo_core::cs_geometry::BaseMatrix>> {
    let entries = match spec.section(section) {
        None => return Ok(None),
        Some(e) => e,
    };
    let sig = names.signature();
    let mut m = mat_zero(sig, n, 1);
    for (k, v) in entries {
        let mut it = k.split_whitespace();
        let row: usize = it.next().ok_or_else(|| anyhow!("[{section}] key"))?.parse()?;
        let col: usize = it.next().ok_or_else(|| anyhow!("[{section}] key"))?.parse()?;
        if row < 1 || row > n || col < 1 || col > n {
            bail!("[{section}]: index out of range: {row} {col}");
        }
        let f = parse_form(v, names, 1).map_err(|e| anyhow!("[{section}] {k}: {e}"))?;
        m[row - 1][col - 1] = m[row - 1][col - 1].add(&f);
    }
    Ok(Some(m))
}

fn parse_form_section(
    spec: &SpecFile,
    section: &str,
    names: &VarNames,
    degree: usize,
) -> Result<Option<SuperForm>> {
    match spec.get(section, "expr") {
        None => Ok(None),
        Some(v) => Ok(Some(
            parse_form(v, names, degree).map_err(|e| anyhow!("[{section}]: {e}"))?,
        )),
    }
}

pub fn load_chart(path: &str) -> Result<ChartSpec> {
    let spec = SpecFile::load(path)?;
    let kind = spec.get("chart", "kind").unwrap_or("coordinate").to_string();
    match kind.as_str() {
        "coordinate" | "global" => {
            let p = spec.get_usize("chart", "p")?.ok_or_else(|| anyhow!("[chart] p missing"))?;
            let q = spec.get_usize("chart", "q")?.unwrap_or(0);
            let sig = ChartSignature::new(p, q);
            let names = VarNames::plain(sig);
            let gamma = parse_matrix(&spec, "gamma", &names, sig.n())?;
            let h = parse_form_section(&spec, "h", &names, 3)?;
            let omega = parse_form_section(&spec, "omega", &names, 1)?;
            let b_form = parse_form_section(&spec, "b", &names, 2)?;
            let (structure, conn) = match (kind.as_str(), gamma) {
                ("coordinate", None) => (ChartAlgebroid::coordinate(sig), None),
                (_, gamma) => {
                    let conn = match gamma {
                        Some(g) => ConnectionData::new(g).map_err(|e| anyhow!("{e}"))?,
                        None => ConnectionData::flat(sig),
                    };
                    let h_form = h.clone().unwrap_or_else(|| SuperForm::zero(sig, 3));
                    let v = ChartAlgebroid::global(conn.clone(), h_form)
                        .map_err(|e| anyhow!("{e}"))?;
                    (v, Some(conn))
                }
            };
            Ok(ChartSpec::Structure { sig, names, structure, omega, b_form, h, conn })
        }
        "pi_bundle" | "de_rham" | "dolbeault" => {
            let d = spec.get_usize("chart", "d")?.ok_or_else(|| anyhow!("[chart] d missing"))?;
            let model = match kind.as_str() {
                "pi_bundle" => ChartModel::PiBundle,
                "de_rham" => ChartModel::DeRham,
                _ => ChartModel::Dolbeault,
            };
            let r = match model {
                ChartModel::DeRham => d,
                _ => spec.get_usize("chart", "r")?.ok_or_else(|| anyhow!("[chart] r missing"))?,
            };
            let names = match model {
                ChartModel::Dolbeault => VarNames::dolbeault(d, r),
                _ => VarNames::pi_bundle(d, r),
            };
            let sig = names.signature();
            let gm = parse_base_matrix(&spec, "gamma_m", &names, d)?
                .unwrap_or_else(|| mat_zero(sig, d, 1));
            let chart = match model {
                ChartModel::DeRham => BundleChart::de_rham(d, gm),
                _ => {
                    let ge = parse_base_matrix(&spec, "gamma_e", &names, r)?
                        .unwrap_or_else(|| mat_zero(sig, r, 1));
                    BundleChart::new(model, d, r, gm, ge)
                }
            }
            .map_err(|e| anyhow!("chart data: {e}"))?;
            let chart = if spec.get("chart", "symmetrize").is_some() {
                chart.symmetrized()
            } else {
                chart
            };
            let h = parse_form_section(&spec, "h", &names, 3)?;
            let omega = parse_form_section(&spec, "omega", &names, 1)?;
            Ok(ChartSpec::Bundle { chart, h, omega })
        }
        other => bail!("unknown chart kind {other:?}"),
    }
}

pub struct DiffeoSpec {
    pub sig: ChartSignature,
    pub phi: PullbackMap,
    pub xi: SuperForm,
    pub omega: SuperForm,
}

pub fn load_diffeo(path: &str) -> Result<DiffeoSpec> {
    let spec = SpecFile::load(path)?;
    let p = spec.get_usize("chart", "p")?.ok_or_else(|| anyhow!("[chart] p missing"))?;
    let q = spec.get_usize("chart", "q")?.unwrap_or(0);
    let sig = ChartSignature::new(p, q);
    let names = VarNames::plain(sig);
    let read_components = |section: &str| -> Result<Vec<SuperPolynomial>> {
        let mut out: Vec<SuperPolynomial> = (0..sig.n())
            .map(|i| SuperPolynomial::coordinate(sig, i))
            .collect();
        if let Some(entries) = spec.section(section) {
            for (k, v) in entries {
                let idx: usize = k
                    .trim_start_matches('b')
                    .parse()
                    .with_context(|| format!("[{section}] {k}"))?;
                if idx < 1 || idx > sig.n() {
                    bail!("[{section}]: coordinate {k} out of range");
                }
                out[idx - 1] = parse_poly(v, &names).map_err(|e| anyhow!("[{section}] {k}: {e}"))?;
            }
        }
        Ok(out)
    };
    let fwd = read_components("forward")?;
    let inv = read_components("inverse")?;
    let phi = PullbackMap::new(sig, fwd, inv).map_err(|e| anyhow!("chart map: {e}"))?;
    let xi = parse_form_section(&spec, "xi", &names, 2)?.unwrap_or_else(|| SuperForm::zero(sig, 2));
    let omega =
        parse_form_section(&spec, "omega", &names, 1)?.unwrap_or_else(|| SuperForm::zero(sig, 1));
    Ok(DiffeoSpec { sig, phi, xi, omega })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_global_chart() {
        let src = "\n[chart]\nkind = global\np = 3\nq = 0\n\n[gamma]\n1 1 = b2*d(b1) + b3*d(b2)\n\n[h]\nexpr = b1*d(b1)*d(b2)*d(b3)\n";
        let spec = SpecFile::parse(src).unwrap();
        assert!(spec.get("chart", "kind") == Some("global"));
    }

    #[test]
    fn diffeo_roundtrip() {
        let dir = std::env::temp_dir().join("cdo-test-diffeo.txt");
        std::fs::write(
            &dir,
            "[chart]\np = 2\nq = 0\n[forward]\nb1 = b1 + b2^2\n[inverse]\nb1 = b1 - b2^2\n",
        )
        .unwrap();
        let spec = load_diffeo(dir.to_str().unwrap()).unwrap();
        assert!(!spec.phi.is_identity());
    }
}
