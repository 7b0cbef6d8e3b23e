use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use hardyforge::besselpair::PairId;
use hardyforge::identities::{catalog, CaseInfo};

use crate::output::{emit, json_bytes, SCHEMA};
use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CatalogFormat {
    Json,
    Human,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long, value_enum, default_value = "human")]
    format: CatalogFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PairInfo {
    id: &'static str,
    weights: &'static str,
    parameters: &'static str,
}

#[derive(Serialize)]
struct CatalogDocument {
    schema: &'static str,
    command: &'static str,
    cases: Vec<CaseInfo>,
    pairs: Vec<PairInfo>,
}

pub fn run(a: CatalogArgs) -> anyhow::Result<Outcome> {
    let doc = CatalogDocument {
        schema: SCHEMA,
        command: "catalog",
        cases: catalog(),
        pairs: PairId::ALL
            .iter()
            .map(|p| PairInfo {
                id: p.as_str(),
                weights: p.describe(),
                parameters: p.ranges(),
            })
            .collect(),
    };
    let bytes = match a.format {
        CatalogFormat::Json => json_bytes(&doc)?,
        CatalogFormat::Human => {
            let mut s = String::from("Identity cases\n");
            for c in &doc.cases {
                s.push_str(&format!(
                    "  {:<14} {:<10} {:<10} {}\n  {:<14} parameters: {}\n",
                    c.id, c.curvature, c.form, c.description, "", c.parameters
                ));
            }
            s.push_str("\nBessel pairs\n");
            for p in &doc.pairs {
                s.push_str(&format!("  {:<22} {}\n  {:<22} parameters: {}\n", p.id, p.weights, "", p.parameters));
            }
            s.into_bytes()
        }
    };
    emit(&a.out, &bytes)?;
    Ok(Outcome::Pass)
}
