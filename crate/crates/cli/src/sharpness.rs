use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use hardyforge::sharpness::{optimize_hardy, HardyOptimum, ScanPoint, ScanResult, Target, TrialFamily};

use crate::output::{csv_bytes, emit, json_bytes, Format, SCHEMA};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    /// hardy-hyperbolic, hardy-euclidean, poincare or bv-ball.
    #[arg(long)]
    target: String,
    #[arg(long = "N")]
    dim: u32,
    #[arg(long, default_value_t = 64)]
    kmax: u32,
    /// Ball radius for bv-ball.
    #[arg(long = "R")]
    radius: Option<f64>,
    /// Also run the simplex search over power-cutoff profiles (Hardy targets).
    #[arg(long)]
    optimize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Serialize)]
struct SharpnessDocument<'a> {
    schema: &'static str,
    command: &'static str,
    #[serde(flatten)]
    scan: &'a ScanResult,
    optimum: Option<&'a HardyOptimum>,
}

pub fn run(a: SharpnessArgs) -> anyhow::Result<Outcome> {
    let target: Target = a.target.parse()?;
    let fam = TrialFamily::new(target, a.dim, a.radius)?;
    if a.kmax < 3 {
        anyhow::bail!("kmax must be >= 3, got {}", a.kmax);
    }
    let target_constant = fam.target_constant()?;
    // members are independent; collect keeps k order
    let points = (3..=a.kmax)
        .into_par_iter()
        .map(|k| {
            let q = fam.quotient(k as f64)?;
            Ok(ScanPoint {
                k,
                quotient: q,
                ratio: q / target_constant,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let scan = hardyforge::sharpness::summarize(&fam, target_constant, points);
    let optimum = match (a.optimize, target) {
        (true, Target::HardyHyperbolic | Target::HardyEuclidean) => {
            Some(optimize_hardy(&fam.manifold(), 1.0 / a.kmax as f64)?)
        }
        (true, _) => anyhow::bail!("--optimize applies to the Hardy targets only"),
        _ => None,
    };
    let bytes = match a.format {
        Format::Json => json_bytes(&SharpnessDocument {
            schema: SCHEMA,
            command: "sharpness",
            scan: &scan,
            optimum: optimum.as_ref(),
        })?,
        Format::Csv => csv_bytes(
            &["k", "quotient", "ratio"],
            scan.points
                .iter()
                .map(|p| vec![p.k.to_string(), p.quotient.to_string(), p.ratio.to_string()]),
        )?,
        Format::Human => {
            let mut s = format!(
                "{} N={}: target constant {}, min quotient {} (ratio {:.6}) over k = 3..{}\n",
                scan.target, scan.n, scan.target_constant, scan.min_quotient, scan.min_ratio, a.kmax
            );
            s.push_str(&format!(
                "bounded below: {}, nonincreasing tail: {}\n",
                scan.bounded_below, scan.monotone_tail
            ));
            if let Some(o) = &optimum {
                s.push_str(&format!(
                    "simplex search: quotient {} (ratio {:.6}) at eps = {}, rho1 = {}, rho2 = {}\n",
                    o.quotient, o.ratio, o.profile.eps, o.profile.rho1, o.profile.rho2
                ));
            }
            s.into_bytes()
        }
    };
    emit(&a.out, &bytes)?;
    Ok(if scan.bounded_below { Outcome::Pass } else { Outcome::Fail })
}
