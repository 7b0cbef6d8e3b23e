use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::Serialize;

use hardyforge::besselpair::{check_pair, PairError, PairVerdict, ShootingOptions};
use hardyforge::exprlang::{parse, Bindings, Expr, ExprError};

use crate::output::{csv_bytes, emit, json_bytes, SCHEMA};
use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairFormat {
    Json,
    Human,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Weight V(r), e.g. "r^(-lambda)".
    #[arg(long = "V", allow_hyphen_values = true)]
    v: String,
    /// Weight W(r), e.g. "((N-2)/2)^2 / r^2".
    #[arg(long = "W", allow_hyphen_values = true)]
    w: String,
    #[arg(long = "N")]
    dim: Option<u32>,
    /// Right end of the interval (0, R).
    #[arg(long = "R")]
    radius: Option<f64>,
    /// Start of the shooting integration (default 1e-6 R).
    #[arg(long)]
    eps: Option<f64>,
    /// Values for the parameters lambda, alpha and b in the expressions.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Write the sampled solution (r, phi, flux) to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: PairFormat,
}

fn parse_weight(name: &str, src: &str) -> anyhow::Result<Expr> {
    parse(src).map_err(|e| diagnostic(name, src, &e))
}

fn diagnostic(name: &str, src: &str, e: &ExprError) -> anyhow::Error {
    match e.offset() {
        Some(off) => anyhow::anyhow!("syntax error in {name}: {e}\n  {src}\n  {}^", " ".repeat(src[..off.min(src.len())].chars().count())),
        None => anyhow::anyhow!("{name}: {e}"),
    }
}

#[derive(Serialize)]
struct PairDocument<'a> {
    schema: &'static str,
    command: &'static str,
    #[serde(rename = "V")]
    v: String,
    #[serde(rename = "W")]
    w: String,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "R")]
    radius: f64,
    eps: f64,
    is_pair: bool,
    first_zero: Option<f64>,
    end: f64,
    steps: usize,
    flags: &'a hardyforge::besselpair::IntegrabilityFlags,
}

pub fn run(a: PairArgs) -> anyhow::Result<Outcome> {
    let v = parse_weight("V", &a.v)?;
    let w = parse_weight("W", &a.w)?;
    let Some(dim) = a.dim else { bail!("--N is required") };
    let Some(radius) = a.radius else { bail!("--R is required") };
    if dim < 3 {
        bail!("N must be >= 3, got {dim}");
    }
    if !(radius > 0.0 && radius.is_finite()) {
        bail!("R must be positive and finite, got {radius}");
    }
    let mut opts = ShootingOptions::for_radius(radius);
    if let Some(eps) = a.eps {
        opts.eps = eps;
    }
    let env = Bindings {
        lambda: a.lambda,
        alpha: a.alpha,
        b: a.b,
        ..Default::default()
    };
    let verdict: PairVerdict = match check_pair(&v, &w, &env, radius, dim, &opts) {
        Ok(v) => v,
        Err(PairError::Weight { r, message }) => bail!("cannot evaluate the weights at r = {r}: {message}"),
        Err(e) => return Err(e).context("pair check failed"),
    };
    if let Some(path) = &a.csv {
        let rows = verdict
            .solution_samples
            .iter()
            .map(|s| vec![s.r.to_string(), s.phi.to_string(), s.flux.to_string()]);
        let bytes = csv_bytes(&["r", "phi", "flux"], rows)?;
        emit(&Some(path.clone()), &bytes)?;
    }
    let bytes = match a.format {
        PairFormat::Json => json_bytes(&PairDocument {
            schema: SCHEMA,
            command: "pair",
            v: v.to_string(),
            w: w.to_string(),
            n: dim,
            radius,
            eps: opts.eps,
            is_pair: verdict.is_pair,
            first_zero: verdict.first_zero,
            end: verdict.end,
            steps: verdict.steps,
            flags: &verdict.flags,
        })?,
        PairFormat::Human => {
            let status = match verdict.first_zero {
                None => format!("Bessel pair on (0, {radius}): the shot solution stays positive"),
                Some(z) => format!("not a Bessel pair on (0, {radius}): the shot solution vanishes at r = {z:.12}"),
            };
            format!(
                "{status}\nV = {v}\nW = {w}\nN = {dim}, eps = {}, steps = {}\n",
                opts.eps, verdict.steps
            )
            .into_bytes()
        }
    };
    emit(&a.out, &bytes)?;
    Ok(if verdict.is_pair { Outcome::Pass } else { Outcome::Fail })
}
