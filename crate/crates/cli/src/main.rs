//! Command-line driver for the chart engine: structure verification,
//! coordinate-change checks, free-field reports, bundle-chart suites,
//! character series, and the deterministic selftest.

mod spec_files;

use anyhow::{anyhow, bail, Result};
use cdo_core::algebroid::{check_axioms, VertexAlgebroid};
use cdo_core::coord_change;
use cdo_core::cs_geometry::{
    affine_connection_report, bracket_table_report, q_operator_report, supertrace_report,
    ChartModel,
};
use cdo_core::free_va::{conformal_element, reports as fock_reports, virasoro_report};
use cdo_core::genus::{example_series, CohomModel, ExampleBundle};
use cdo_core::report::SuiteReport;
use cdo_core::sampler::Sampler;
use cdo_core::superpoly::{ChartSignature, SuperForm};
use clap::{Parser, Subcommand, ValueEnum};
use spec_files::{load_chart, load_diffeo, ChartSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "cdo", about = "exact chart-level engine for chiral differential operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Seed for all randomized checks.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the seven structure identities on a chart.
    CheckAxioms {
        /// Chart spec file; omit to use a coordinate chart via --p/--q.
        #[arg(long)]
        chart: Option<String>,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        /// Number of random samples.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Exhaustive sweep degree (0 disables it).
        #[arg(long, default_value_t = 2)]
        exhaustive: u32,
    },
    /// Verify the morphism/composition laws of a coordinate change.
    CheckCoord {
        #[arg(long)]
        diffeo: String,
        #[arg(long, default_value_t = 30)]
        samples: usize,
    },
    /// Verify the conformal element and its algebra.
    Virasoro {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        max_weight: i64,
    },
    /// Verify the lifted differential on a bundle chart with a three-form.
    QLift {
        #[arg(long)]
        chart: String,
    },
    /// Verify the de Rham differential structure on a bundle chart.
    Cdr {
        #[arg(long)]
        chart: String,
    },
    /// Verify bracket tables, curvature tables and supertrace identities.
    CsVerify {
        #[arg(long)]
        chart: String,
        #[arg(long, default_value_t = 6)]
        samples: usize,
    },
    /// Compute a character series on a built-in model.
    Genus {
        #[arg(long)]
        model: String,
        #[arg(long)]
        bundle: String,
        #[arg(long, default_value_t = 10)]
        order: u32,
        #[arg(long, default_value_t = false)]
        refined: bool,
    },
    /// Compare the basis count against the filtration character.
    CharacterCount {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 6)]
        k: u32,
    },
    /// Run the full acceptance campaign with a fixed seed.
    Selftest,
}

fn emit(suites: &[SuiteReport], format: Format) -> bool {
    let mut ok = true;
    for suite in suites {
        ok &= suite.all_passed();
        match format {
            Format::Text => print!("{suite}"),
            Format::Json => {
                for check in &suite.checks {
                    let mut value = serde_json::to_value(check).expect("serializable");
                    value["suite"] = serde_json::Value::String(suite.name.clone());
                    println!("{value}");
                }
            }
        }
    }
    ok
}

fn run(cli: Cli) -> Result<i32> {
    let format = cli.format;
    let seed = cli.seed;
    let suites: Vec<SuiteReport> = match cli.command {
        Command::CheckAxioms { chart, p, q, samples, exhaustive } => {
            let exhaustive = if exhaustive == 0 { None } else { Some(exhaustive) };
            let mut s = Sampler::new(seed);
            match chart {
                None => {
                    let sig = ChartSignature::new(p, q);
                    let v = cdo_core::algebroid::ChartAlgebroid::coordinate(sig);
                    vec![check_axioms(&v, &mut s, samples, exhaustive)]
                }
                Some(path) => match load_chart(&path)? {
                    ChartSpec::Structure { structure, .. } => {
                        vec![check_axioms(&structure, &mut s, samples, exhaustive)]
                    }
                    ChartSpec::Bundle { chart, h, .. } => {
                        let conn = chart
                            .coordinate_connection()
                            .map_err(|e| anyhow!("chart connection: {e}"))?;
                        let h = h.unwrap_or_else(|| conn.cs_form());
                        let v = cdo_core::algebroid::ChartAlgebroid::global(conn, h)
                            .map_err(|e| anyhow!("{e}"))?;
                        vec![check_axioms(&v, &mut s, samples, exhaustive)]
                    }
                },
            }
        }
        Command::CheckCoord { diffeo, samples } => {
            let spec = load_diffeo(&diffeo)?;
            let delta =
                coord_change::delta_map(&spec.phi, &spec.xi).map_err(|e| anyhow!("{e}"))?;
            let mut s = Sampler::new(seed);
            let mut suites = vec![delta.check_morphism(&mut s, samples)];
            suites.push(
                coord_change::conformal_transform(&spec.phi, &spec.xi, &spec.omega)
                    .map_err(|e| anyhow!("{e}"))?,
            );
            suites
        }
        Command::Virasoro { p, q, max_weight } => {
            let sig = ChartSignature::new(p, q);
            let nu = conformal_element(sig, &SuperForm::zero(sig, 1))
                .map_err(|e| anyhow!("conformal element: {e}"))?;
            vec![virasoro_report(sig, &nu, max_weight)]
        }
        Command::QLift { chart } => match load_chart(&chart)? {
            ChartSpec::Bundle { chart, h, omega } => {
                if chart.model != ChartModel::Dolbeault {
                    bail!("q-lift expects a dolbeault chart");
                }
                let sig = chart.signature();
                let h = h.unwrap_or_else(|| SuperForm::zero(sig, 3));
                let mut suites = vec![fock_reports::q_lift_report(&chart, &h, omega.as_ref())];
                suites.push(fock_reports::fermion_report(&chart, &h));
                suites
            }
            _ => bail!("q-lift expects a bundle chart file"),
        },
        Command::Cdr { chart } => match load_chart(&chart)? {
            ChartSpec::Bundle { chart, .. } => {
                if chart.model != ChartModel::DeRham {
                    bail!("cdr expects a de_rham chart");
                }
                vec![fock_reports::cdr_report(&chart)]
            }
            _ => bail!("cdr expects a bundle chart file"),
        },
        Command::CsVerify { chart, samples } => match load_chart(&chart)? {
            ChartSpec::Bundle { chart, .. } => {
                let mut s = Sampler::new(seed);
                let mut suites = vec![
                    bracket_table_report(&chart, &mut s, samples),
                    affine_connection_report(&chart, &mut s, samples),
                    supertrace_report(&chart),
                ];
                if chart.model != ChartModel::PiBundle {
                    suites.push(q_operator_report(&chart));
                }
                suites
            }
            _ => bail!("cs-verify expects a bundle chart file"),
        },
        Command::Genus { model, bundle, order, refined } => {
            let model = CohomModel::by_name(&model)
                .ok_or_else(|| anyhow!("unknown model {model:?} (point, cp1, cp2, cp3, cp1xcp1)"))?;
            let which = ExampleBundle::by_name(&bundle)
                .ok_or_else(|| anyhow!("unknown bundle {bundle:?} (e0, tm, det_tm, det_tm2)"))?;
            let out = example_series(&model, which, order, refined)
                .map_err(|e| anyhow!("{e}"))?;
            match format {
                Format::Text => {
                    println!("model: {model}");
                    println!("series: {}", out.series);
                    println!("normalization: {}", out.normalization);
                }
                Format::Json => {
                    let mut terms = Vec::new();
                    for ((a, b), c) in out.series.terms() {
                        terms.push(serde_json::json!({
                            "q": a, "y": b, "coeff": format!("{c}"),
                        }));
                    }
                    println!(
                        "{}",
                        serde_json::json!({
                            "model": format!("{model}"),
                            "bundle": format!("{which:?}"),
                            "series": terms,
                            "normalization": out.normalization,
                        })
                    );
                }
            }
            return Ok(0);
        }
        Command::CharacterCount { p, q, k } => {
            let sig = ChartSignature::new(p, q);
            let mut suite = SuiteReport::new("character-count");
            for kk in 0..=k {
                suite.push(cdo_core::free_va::graded_character(sig, kk));
            }
            vec![suite]
        }
        Command::Selftest => {
            let transcript = cdo_core::selftest::transcript(seed);
            print!("{transcript}");
            return Ok(if transcript.contains("overall: PASS") { 0 } else { 1 });
        }
    };
    Ok(if emit(&suites, format) { 0 } else { 1 })
}

fn main() {
    // optional cap on worker threads for the parallel sweeps
    if let Ok(v) = std::env::var("CDO_ENGINE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
