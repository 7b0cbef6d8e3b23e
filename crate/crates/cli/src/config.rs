//! Config files and the worker pool.
//!
//! A config file is flat `key = value` lines under `[command]` headers;
//! keys are the long flag names of that command (`dims = 3,4`, `R = 2`).
//! Lines before any header apply to every command. `#` starts a comment.
//! Repeating a key repeats the flag. `key = true` sets a boolean flag.
//! Values from the file are spliced into the argument list only for flags
//! absent from the command line, so flags always win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context};

type Sections = BTreeMap<String, Vec<(String, String)>>;

pub fn parse_config(text: &str) -> anyhow::Result<Sections> {
    let mut sections = Sections::new();
    let mut current = String::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .with_context(|| format!("line {}: unterminated section header", no + 1))?;
            current = name.trim().to_string();
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key = value, got '{line}'", no + 1);
        };
        let k = k.trim();
        if k.is_empty() || k.starts_with('-') {
            bail!("line {}: invalid key '{k}'", no + 1);
        }
        sections
            .entry(current.clone())
            .or_default()
            .push((k.to_string(), v.trim().to_string()));
    }
    Ok(sections)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn has_flag(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&eq)
    })
}

/// Command-line arguments with the config file's values filled in.
pub fn merged_args(args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let sections = parse_config(&text).with_context(|| format!("in config file {}", path.display()))?;
    let known = ["verify", "pair", "sharpness", "catalog"];
    for name in sections.keys() {
        if !name.is_empty() && !known.contains(&name.as_str()) {
            bail!("config file {}: unknown section [{name}]", path.display());
        }
    }
    let Some(pos) = args
        .iter()
        .position(|a| known.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let command = args[pos].to_string_lossy().into_owned();
    let mut extra = Vec::new();
    let entries = sections
        .get("")
        .into_iter()
        .chain(sections.get(&command))
        .flatten();
    for (k, v) in entries {
        if k == "config" || has_flag(&args, k) {
            continue;
        }
        match v.as_str() {
            "true" => extra.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => extra.push(OsString::from(format!("--{k}={v}"))),
        }
    }
    let mut out = args;
    let tail = out.split_off(pos + 1);
    out.extend(extra);
    out.extend(tail);
    Ok(out)
}

/// Pool bounded by HARDYFORGE_THREADS when set.
pub fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("HARDYFORGE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("HARDYFORGE_THREADS must be a positive integer, got '{v}'"))?;
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_sections_and_comments() {
        let s = parse_config("tol = 1e-9\n# note\n[verify]\ncase = T3.1 # inline\nprofile = bump:c=1,w=0.5\n").unwrap();
        assert_eq!(s[""], vec![("tol".to_string(), "1e-9".to_string())]);
        assert_eq!(s["verify"][0], ("case".to_string(), "T3.1".to_string()));
        assert_eq!(s["verify"][1].1, "bump:c=1,w=0.5");
        assert!(parse_config("[verify\n").is_err());
        assert!(parse_config("just words\n").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "[verify]\ncase = C1\ndims = 3\n[pair]\nN = 9\n").unwrap();
        let p = path.to_str().unwrap();
        let out = merged_args(os(&["hf", "--config", p, "verify", "--dims", "4"])).unwrap();
        let out: Vec<String> = out.iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(out, ["hf", "--config", p, "verify", "--case=C1", "--dims", "4"]);
    }
}
