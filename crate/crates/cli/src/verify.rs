use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use hardyforge::besselpair::PairId;
use hardyforge::geometry::ModelManifold;
use hardyforge::identities::{
    build_case, verify, CaseId, CaseParams, IdentityCase, IdentityError, ReportMeta, Variant, VerificationReport,
};
use hardyforge::profile::TestProfile;

use crate::output::{csv_bytes, emit, json_bytes, Format, SCHEMA};
use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Gradient,
    Radial,
    Both,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated case ids, or "all".
    #[arg(long, default_value = "all")]
    case: String,
    #[arg(long, value_delimiter = ',', default_values_t = [3u32, 4, 5, 8])]
    dims: Vec<u32>,
    /// Curvatures for cases valid on every M_b (default 0,1). Cases stated
    /// for one b always run there.
    #[arg(long, value_delimiter = ',')]
    b: Vec<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "R")]
    radius: Option<f64>,
    /// Catalog pair for the cases that take one.
    #[arg(long)]
    pair: Option<String>,
    #[arg(long = "comparison-b")]
    comparison_b: Option<f64>,
    #[arg(long, value_enum, default_value = "gradient")]
    variant: VariantChoice,
    /// Angular degrees (default 0,1,2; radial variants use 0 only).
    #[arg(long, value_delimiter = ',')]
    ell: Vec<u32>,
    /// Test profile, e.g. bump:c=1.5,w=1; repeatable. Default: the case's
    /// standard set of three.
    #[arg(long)]
    profile: Vec<String>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

struct Cell {
    case: Arc<IdentityCase>,
    manifold: ModelManifold,
    profile: TestProfile,
}

#[derive(Serialize)]
#[serde(untagged)]
enum CellResult {
    Report(VerificationReport),
    Failed { meta: ReportMeta, error: String, pass: bool },
}

impl CellResult {
    fn pass(&self) -> bool {
        match self {
            CellResult::Report(r) => r.pass,
            CellResult::Failed { .. } => false,
        }
    }

    fn meta(&self) -> &ReportMeta {
        match self {
            CellResult::Report(r) => &r.meta,
            CellResult::Failed { meta, .. } => meta,
        }
    }
}

#[derive(Serialize)]
struct Summary {
    cells: usize,
    passed: usize,
    failed: usize,
    max_rel_residual: f64,
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    schema: &'static str,
    command: &'static str,
    summary: Summary,
    results: &'a [CellResult],
}

fn case_ids(spec: &str) -> anyhow::Result<Vec<CaseId>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(CaseId::ALL.to_vec());
    }
    let mut ids = Vec::new();
    for s in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let id: CaseId = s.parse()?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    if ids.is_empty() {
        bail!("no case ids given");
    }
    Ok(ids)
}

fn build_cells(a: &VerifyArgs) -> anyhow::Result<Vec<Cell>> {
    let ids = case_ids(&a.case)?;
    let explicit_all = a.case.trim().eq_ignore_ascii_case("all");
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        bail!("tol must be positive, got {}", a.tol);
    }
    if a.dims.is_empty() {
        bail!("no dimensions given");
    }
    let pair = a.pair.as_deref().map(str::parse::<PairId>).transpose()?;
    let variants: &[Variant] = match a.variant {
        VariantChoice::Gradient => &[Variant::Gradient],
        VariantChoice::Radial => &[Variant::Radial],
        VariantChoice::Both => &[Variant::Gradient, Variant::Radial],
    };
    let user_profiles = a
        .profile
        .iter()
        .map(|s| s.parse::<TestProfile>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut cells = Vec::new();
    for &id in &ids {
        let curvatures = match id.pinned_curvature() {
            Some(b) => {
                if !explicit_all && !a.b.is_empty() && !a.b.contains(&b) {
                    bail!("{id} is stated for b = {b} only");
                }
                vec![b]
            }
            None if a.b.is_empty() => vec![0.0, 1.0],
            None => a.b.clone(),
        };
        for &n in &a.dims {
            for &variant in variants {
                let params = CaseParams {
                    dim: n,
                    variant: Some(variant),
                    lambda: a.lambda,
                    alpha: a.alpha,
                    radius: a.radius,
                    pair,
                    custom_pair: None,
                    comparison_b: a.comparison_b,
                };
                let case = Arc::new(build_case(id, &params).with_context(|| format!("case {id}, N = {n}"))?);
                let profiles = if user_profiles.is_empty() {
                    case.standard_profiles()
                } else {
                    user_profiles.clone()
                };
                for &b in &curvatures {
                    let manifold = ModelManifold::new(n, b)?;
                    for p in &profiles {
                        let ells: Vec<u32> = match variant {
                            Variant::Radial => vec![0],
                            Variant::Gradient if !a.ell.is_empty() => a.ell.clone(),
                            Variant::Gradient if !user_profiles.is_empty() => vec![p.ell],
                            Variant::Gradient => vec![0, 1, 2],
                        };
                        for ell in ells {
                            cells.push(Cell {
                                case: Arc::clone(&case),
                                manifold,
                                profile: p.with_ell(ell),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(cells)
}

fn meta_of(cell: &Cell, tol: f64) -> ReportMeta {
    ReportMeta {
        case: cell.case.id.to_string(),
        n: cell.case.dim,
        b: cell.manifold.curvature,
        variant: cell.case.variant,
        ell: cell.profile.ell,
        pair: cell.case.pair.clone(),
        params: cell.case.params.clone(),
        profile: cell.profile.to_string(),
        tol,
    }
}

fn csv_rows(results: &[CellResult]) -> Vec<Vec<String>> {
    results
        .iter()
        .map(|r| {
            let m = r.meta();
            let mut row = vec![
                m.case.clone(),
                m.n.to_string(),
                m.b.to_string(),
                m.variant.to_string(),
                m.ell.to_string(),
                m.profile.clone(),
                m.pair.clone().unwrap_or_default(),
            ];
            match r {
                CellResult::Report(rep) => row.extend([
                    rep.lhs.to_string(),
                    rep.rhs.to_string(),
                    rep.abs_residual.to_string(),
                    rep.rel_residual.to_string(),
                    if rep.margins.is_empty() { String::new() } else { rep.margin().to_string() },
                    rep.pass.to_string(),
                    String::new(),
                ]),
                CellResult::Failed { error, .. } => {
                    row.extend(["", "", "", "", ""].map(String::from));
                    row.extend(["false".to_string(), error.clone()]);
                }
            }
            row
        })
        .collect()
}

fn human(results: &[CellResult], summary: &Summary) -> Vec<u8> {
    let mut s = String::new();
    for r in results {
        let m = r.meta();
        let status = if r.pass() { "PASS" } else { "FAIL" };
        let detail = match r {
            CellResult::Report(rep) => format!("rel_residual {:.3e}", rep.rel_residual),
            CellResult::Failed { error, .. } => error.clone(),
        };
        s.push_str(&format!(
            "{status} {} N={} b={} {} l={} {}: {detail}\n",
            m.case, m.n, m.b, m.variant, m.ell, m.profile
        ));
    }
    s.push_str(&format!(
        "{} cells, {} passed, {} failed, max rel_residual {:.3e}\n",
        summary.cells, summary.passed, summary.failed, summary.max_rel_residual
    ));
    s.into_bytes()
}

pub fn run(a: VerifyArgs) -> anyhow::Result<Outcome> {
    let cells = build_cells(&a)?;
    let outcomes: Vec<Result<VerificationReport, IdentityError>> = cells
        .par_iter()
        .map(|c| verify(&c.case, &c.manifold, &c.profile, a.tol))
        .collect();
    let mut results = Vec::with_capacity(cells.len());
    for (cell, outcome) in cells.iter().zip(outcomes) {
        results.push(match outcome {
            Ok(rep) => CellResult::Report(rep),
            Err(IdentityError::Quadrature { term, source }) => CellResult::Failed {
                meta: meta_of(cell, a.tol),
                error: format!("quadrature failed for '{term}': {source}"),
                pass: false,
            },
            Err(e) => {
                return Err(anyhow!(e)).with_context(|| {
                    format!(
                        "case {}, N = {}, b = {}, profile {}",
                        cell.case.id, cell.case.dim, cell.manifold.curvature, cell.profile
                    )
                })
            }
        });
    }
    let passed = results.iter().filter(|r| r.pass()).count();
    let summary = Summary {
        cells: results.len(),
        passed,
        failed: results.len() - passed,
        max_rel_residual: results
            .iter()
            .filter_map(|r| match r {
                CellResult::Report(rep) => Some(rep.rel_residual),
                CellResult::Failed { .. } => None,
            })
            .fold(0.0, f64::max),
    };
    let bytes = match a.format {
        Format::Json => json_bytes(&VerifyDocument {
            schema: SCHEMA,
            command: "verify",
            summary,
            results: &results,
        })?,
        Format::Csv => csv_bytes(
            &[
                "case",
                "N",
                "b",
                "variant",
                "ell",
                "profile",
                "pair",
                "lhs",
                "rhs",
                "abs_residual",
                "rel_residual",
                "min_margin",
                "pass",
                "error",
            ],
            csv_rows(&results),
        )?,
        Format::Human => human(&results, &summary),
    };
    emit(&a.out, &bytes)?;
    Ok(if passed == results.len() { Outcome::Pass } else { Outcome::Fail })
}
