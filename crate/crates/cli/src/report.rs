//! Report serialization: fixed key order, floats at 12 significant digits,
//! atomic writes.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use quasimass::spectra::{BoundSource, Extremizer};
use quasimass::{BoundsResult, Complex64};
use serde_json::{json, Map, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest round-trip text for `x`, switching to exponent form for tiny
/// and huge magnitudes.
pub fn fmt_float(x: f64) -> String {
    serde_json::to_string(&x).expect("serializable")
}

/// JSON number at report precision; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    let r = round_sig(x);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex_list(cs: &[Complex64]) -> Value {
    Value::Array(cs.iter().map(|c| json!([num(c.re), num(c.im)])).collect())
}

pub fn extremizer_json(e: &Extremizer) -> Value {
    match e {
        Extremizer::NumberState(n) => json!({"kind": "number_state", "n": n}),
        Extremizer::State(c) => {
            let mut m = Map::new();
            m.insert("kind".into(), "state".into());
            if let Some(n) = e.number_state_index() {
                m.insert("number_state".into(), n.into());
            }
            m.insert("coefficients".into(), complex_list(c));
            Value::Object(m)
        }
        Extremizer::Described(s) => json!({"kind": "described", "text": s}),
        Extremizer::Limit(s) => json!({"kind": "limit", "text": s}),
        Extremizer::Product(f) => json!({
            "kind": "product",
            "factors": f.iter().map(extremizer_json).collect::<Vec<_>>(),
        }),
        Extremizer::External => json!({"kind": "external"}),
    }
}

pub fn source_str(s: BoundSource) -> &'static str {
    match s {
        BoundSource::Numeric => "numeric",
        BoundSource::Analytic => "analytic",
        BoundSource::Composite => "composite",
    }
}

/// A bounds block; `converged` is omitted when no tolerance applies.
pub fn bounds_json(b: &BoundsResult, converged: Option<bool>) -> Value {
    let mut m = Map::new();
    m.insert("lower".into(), num(b.lower));
    m.insert("upper".into(), num(b.upper));
    m.insert("lower_attainable".into(), b.lower_attainable.into());
    m.insert("upper_attainable".into(), b.upper_attainable.into());
    m.insert("source".into(), source_str(b.source).into());
    m.insert("convergence".into(), num(b.convergence));
    if let Some(c) = converged {
        m.insert("converged".into(), c.into());
    }
    m.insert(
        "ladder".into(),
        Value::Array(
            b.ladder
                .iter()
                .map(|s| json!({"dim": s.dim, "lower": num(s.lower), "upper": num(s.upper)}))
                .collect(),
        ),
    );
    m.insert(
        "lower_attained_by".into(),
        extremizer_json(&b.lower_attained_by),
    );
    m.insert(
        "upper_attained_by".into(),
        extremizer_json(&b.upper_attained_by),
    );
    m.insert(
        "note".into(),
        b.note.clone().map_or(Value::Null, Value::String),
    );
    Value::Object(m)
}

pub fn to_text(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes to `out`, or to stdout when absent.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, contents.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}
