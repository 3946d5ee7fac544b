use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use robustfair::cluster::{parse_clustering, parse_colors};
use robustfair::{Clustering, ColorProfile, Rational};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "robustfair/1";

/// What a subcommand hands back to the dispatcher.
pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub seed: Option<u64>,
    pub inputs: Vec<Value>,
    pub result: Value,
    /// False when a verification step found a counterexample.
    pub passed: bool,
}

impl Outcome {
    pub fn new(command: &'static str, params: Value) -> Self {
        Outcome { command, params, seed: None, inputs: Vec::new(), result: Value::Null, passed: true }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Reads a file and records its hash.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(json!({ "path": path.display().to_string(), "sha256": sha256(&text) }));
        Ok(text)
    }

    pub fn into_json(self, elapsed_ms: Option<f64>) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        out.insert("command".into(), self.command.into());
        out.insert("params".into(), self.params);
        out.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        out.insert("inputs".into(), Value::Array(self.inputs));
        out.insert("passed".into(), self.passed.into());
        out.insert("result".into(), self.result);
        if let Some(ms) = elapsed_ms {
            out.insert("timings".into(), json!({ "total_ms": sig12(ms) }));
        }
        Value::Object(out)
    }
}

pub fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Writes generated text and returns a report entry for it.
pub fn emit_text(out: Option<&PathBuf>, key: &str, text: &str) -> Result<Value> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(json!({ "path": path.display().to_string(), "sha256": sha256(text) }))
        }
        None => Ok(json!({ key: text, "sha256": sha256(text) })),
    }
}

/// Rounds to 12 significant digits; non-finite values become strings.
pub fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    json!(rounded)
}

/// Exact integer, as a string once it leaves the u64 range.
pub fn big(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

pub fn rational(r: Rational) -> Value {
    Value::String(r.to_string())
}

/// `num / den` as an exact string; `inf` when only the denominator is zero.
pub fn ratio(num: u64, den: u64) -> Value {
    match (num, den) {
        (0, 0) => "0".into(),
        (_, 0) => "inf".into(),
        _ => rational(Rational::new(num as i128, den as i128)),
    }
}

/// `num ≤ bound · den`, allowing for the rounding in `bound`.
pub fn within(num: u64, den: u64, bound: f64) -> bool {
    num as f64 <= bound * den as f64 * (1.0 + 1e-12)
}

pub fn parse_ratio(s: &str) -> Result<Vec<u64>> {
    let parts: Result<Vec<u64>, _> = s.split(':').map(|p| p.trim().parse::<u64>()).collect();
    match parts {
        Ok(r) if r.len() >= 2 && !r.contains(&0) => Ok(r),
        _ => bail!("ratio {s:?} must look like 2:1 with positive parts"),
    }
}

pub fn profile(colors: Vec<usize>, ratio: Option<&str>) -> Result<ColorProfile> {
    Ok(match ratio {
        Some(r) => ColorProfile::with_ratio(colors, &parse_ratio(r)?)?,
        None => ColorProfile::from_colors(colors)?,
    })
}

/// Parses a clustering file, naming the file in any error.
pub fn clustering_file(out: &mut Outcome, path: &Path) -> Result<(Clustering, Option<Vec<usize>>)> {
    let text = out.read(path)?;
    parse_clustering(&text).with_context(|| path.display().to_string())
}

/// A clustering file whose color column is required.
pub fn colored_file(
    out: &mut Outcome,
    path: &Path,
    ratio: Option<&str>,
) -> Result<(Clustering, ColorProfile)> {
    let (c, colors) = clustering_file(out, path)?;
    let Some(colors) = colors else {
        bail!("{}: clustering file has no color column", path.display());
    };
    Ok((c, profile(colors, ratio)?))
}

pub fn colors_file(out: &mut Outcome, path: &Path) -> Result<Vec<usize>> {
    let text = out.read(path)?;
    parse_colors(&text).with_context(|| path.display().to_string())
}

pub fn labels(c: &Clustering) -> Value {
    json!(c.labels())
}
