//! Command implementations over parsed inputs.

use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use quasimass::grid::{consistency_verdict, grid_mass, sample_wigner, uniform_axis};
use quasimass::region_ops::{assemble_region_operator, RegionOperator};
use quasimass::spectra::analytic::{
    analytic_bounds, circle_contour_eigenvalue, disk_eigenvalue, segment_spectrum, SegmentBranch,
};
use quasimass::spectra::{ladder_bounds, product_bounds, BoundSource};
use quasimass::{BoundsResult, DensityMatrix, RegionSpec, WignerGrid};
use serde_json::{json, Map, Value};

use crate::formats::region_json;
use crate::report::{bounds_json, fmt_float, num, round_sig};

/// Exit status of a command that produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A numeric bound moved by more than the tolerance on the last ladder step.
    NotConverged,
    /// `verify` found a value outside the bounds.
    Uncontained,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NotConverged => 2,
            Status::Uncontained => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub status: Status,
}

pub const DEFAULT_DIMS: &str = "32:64";
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Distance from a bound below which a value is reported as extremal.
pub const EXTREMAL_TOL: f64 = 1e-9;

/// `a:b[:c]` → `a, a+c, …, b`; `c` defaults to `max(1, (b−a)/2)` and `b`
/// is always the last entry.
pub fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    ensure!(
        parts.len() == 2 || parts.len() == 3,
        "dims must look like a:b or a:b:c, got `{text}`"
    );
    let field = |s: &str, name: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("dims {name} `{s}` is not a non-negative integer"))
    };
    let a = field(parts[0], "start")?;
    let b = field(parts[1], "stop")?;
    ensure!(a >= 1, "dims start must be at least 1");
    ensure!(
        a < b,
        "dims need start < stop to form a ladder of at least 2 dimensions, got {a}:{b}"
    );
    let step = match parts.get(2) {
        Some(s) => field(s, "step")?,
        None => ((b - a) / 2).max(1),
    };
    ensure!(step >= 1, "dims step must be at least 1");
    let mut dims: Vec<usize> = (a..b).step_by(step).collect();
    dims.push(b);
    Ok(dims)
}

/// Comma list `1,2.5,3` or linear range `lo:hi:count`.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        bail!("empty parameter grid");
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        ensure!(
            parts.len() == 3,
            "range must look like lo:hi:count, got `{text}`"
        );
        let lo: f64 = parts[0]
            .trim()
            .parse()
            .with_context(|| format!("bad range start `{}`", parts[0]))?;
        let hi: f64 = parts[1]
            .trim()
            .parse()
            .with_context(|| format!("bad range stop `{}`", parts[1]))?;
        let n: usize = parts[2]
            .trim()
            .parse()
            .with_context(|| format!("bad range count `{}`", parts[2]))?;
        ensure!(n >= 1, "empty parameter grid");
        if n == 1 {
            return Ok(vec![lo]);
        }
        return Ok(uniform_axis(lo, hi, n));
    }
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad value `{s}`"))
        })
        .collect::<Result<Vec<_>>>()?;
    ensure!(
        values.iter().all(|v| v.is_finite()),
        "parameter values must be finite"
    );
    Ok(values)
}

#[derive(Debug, Clone)]
pub struct LadderOptions {
    pub dims: Vec<usize>,
    pub resolution: usize,
    pub tolerance: f64,
}

impl LadderOptions {
    fn top(&self) -> usize {
        *self.dims.last().expect("ladder is nonempty")
    }

    fn json(&self) -> Value {
        json!({
            "dims": self.dims,
            "resolution": self.resolution,
            "tolerance": num(self.tolerance),
        })
    }
}

struct SingleBounds {
    op: RegionOperator,
    bounds: BoundsResult,
    converged: bool,
    assembly_ms: f64,
    spectrum_ms: f64,
}

fn single_bounds(region: &RegionSpec, opts: &LadderOptions) -> Result<SingleBounds> {
    let t0 = Instant::now();
    let op = assemble_region_operator(region, opts.top(), opts.resolution)?;
    let t1 = Instant::now();
    let bounds = ladder_bounds(&op, &opts.dims)?;
    let t2 = Instant::now();
    let converged = bounds.source != BoundSource::Numeric || bounds.convergence <= opts.tolerance;
    Ok(SingleBounds {
        op,
        bounds,
        converged,
        assembly_ms: (t1 - t0).as_secs_f64() * 1e3,
        spectrum_ms: (t2 - t1).as_secs_f64() * 1e3,
    })
}

fn analytic_block(region: &RegionSpec, numeric: &BoundsResult, count: usize) -> Option<Value> {
    let a = analytic_bounds(region, count)?;
    let top = numeric.ladder.last()?;
    let deviation = (top.lower - a.lower).abs().max((top.upper - a.upper).abs());
    let mut m = Map::new();
    m.insert("lower".into(), num(a.lower));
    m.insert("upper".into(), num(a.upper));
    m.insert("states_scanned".into(), count.into());
    m.insert("deviation".into(), num(deviation));
    if numeric.source == BoundSource::Numeric {
        m.insert(
            "agrees".into(),
            (deviation <= numeric.convergence.max(DEFAULT_TOLERANCE)).into(),
        );
    } else {
        m.insert("agrees".into(), Value::Null);
        m.insert(
            "note".into(),
            "continuous spectrum: truncated extremes approach the analytic bounds from inside"
                .into(),
        );
    }
    Some(Value::Object(m))
}

fn timing_json(assembly_ms: f64, spectrum_ms: f64) -> Value {
    json!({"assembly_ms": num(assembly_ms), "spectrum_ms": num(spectrum_ms)})
}

/// Bounds for a region on a dimension ladder; tensor products are bounded
/// per factor and combined by endpoint products.
pub fn cmd_bounds(region: &RegionSpec, opts: &LadderOptions, timing: bool) -> Result<Outcome> {
    let mut report = Map::new();
    report.insert("command".into(), "bounds".into());
    report.insert("region".into(), region_json(region));
    report.insert("ladder".into(), opts.json());

    let converged;
    let (mut assembly_ms, mut spectrum_ms) = (0.0, 0.0);
    if let RegionSpec::TensorProduct(factors) = region {
        let mut blocks = Vec::with_capacity(factors.len());
        let mut results = Vec::with_capacity(factors.len());
        let mut all = true;
        for f in factors {
            let s = single_bounds(f, opts)?;
            assembly_ms += s.assembly_ms;
            spectrum_ms += s.spectrum_ms;
            all &= s.converged;
            let mut b = Map::new();
            b.insert("region".into(), region_json(f));
            b.insert("assembly_residual".into(), num(s.op.assembly_residual));
            b.insert("bounds".into(), bounds_json(&s.bounds, Some(s.converged)));
            if let Some(a) = analytic_block(f, &s.bounds, opts.top()) {
                b.insert("analytic".into(), a);
            }
            blocks.push(Value::Object(b));
            results.push(s.bounds);
        }
        let product = product_bounds(&results)?;
        converged = all;
        report.insert("factors".into(), Value::Array(blocks));
        report.insert(
            "product_bounds".into(),
            bounds_json(&product, Some(converged)),
        );
    } else {
        let s = single_bounds(region, opts)?;
        assembly_ms = s.assembly_ms;
        spectrum_ms = s.spectrum_ms;
        converged = s.converged;
        report.insert("assembly_residual".into(), num(s.op.assembly_residual));
        report.insert("bounds".into(), bounds_json(&s.bounds, Some(converged)));
        if let Some(a) = analytic_block(region, &s.bounds, opts.top()) {
            report.insert("analytic".into(), a);
        }
    }
    if timing {
        report.insert("timing".into(), timing_json(assembly_ms, spectrum_ms));
    }
    Ok(Outcome {
        report: Value::Object(report),
        status: if converged {
            Status::Ok
        } else {
            Status::NotConverged
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Disk,
    Circle,
    Segment,
}

fn csv_num(x: f64) -> String {
    fmt_float(round_sig(x))
}

/// Spectrum table as CSV.
///
/// - disk: `a,lambda_0(a),…,lambda_nmax(a)`;
/// - circle: `a,mu_0(a),…,mu_nmax(a)`;
/// - segment: `L,k,mu_cosine(k),mu_sine(k)` for every `(L, k)` pair.
pub fn cmd_tabulate(kind: TableKind, params: &[f64], nmax: usize, ks: &[f64]) -> Result<String> {
    ensure!(!params.is_empty(), "empty parameter grid");
    let mut w = csv::Writer::from_writer(Vec::new());
    match kind {
        TableKind::Disk | TableKind::Circle => {
            ensure!(
                params.iter().all(|&a| a >= 0.0),
                "radii must be non-negative"
            );
            let (sym, f): (&str, fn(usize, f64) -> f64) = match kind {
                TableKind::Disk => ("lambda", disk_eigenvalue),
                _ => ("mu", circle_contour_eigenvalue),
            };
            let mut header = vec!["a".to_string()];
            header.extend((0..=nmax).map(|n| format!("{sym}_{n}(a)")));
            w.write_record(&header)?;
            for &a in params {
                let mut row = vec![csv_num(a)];
                row.extend((0..=nmax).map(|n| csv_num(f(n, a))));
                w.write_record(&row)?;
            }
        }
        TableKind::Segment => {
            ensure!(!ks.is_empty(), "empty k grid");
            ensure!(
                params.iter().all(|&l| l > 0.0),
                "segment lengths must be positive"
            );
            ensure!(ks.iter().all(|&k| k >= 0.0), "k must be non-negative");
            w.write_record(["L", "k", "mu_cosine(k)", "mu_sine(k)"])?;
            for &l in params {
                for &k in ks {
                    w.write_record([
                        csv_num(l),
                        csv_num(k),
                        csv_num(segment_spectrum(l, k, SegmentBranch::Cosine)),
                        csv_num(segment_spectrum(l, k, SegmentBranch::Sine)),
                    ])?;
                }
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// `Tr(ρŜ)` against the bounds of `Ŝ`.
pub fn cmd_verify(
    rho: &DensityMatrix,
    region: &RegionSpec,
    opts: &LadderOptions,
) -> Result<Outcome> {
    ensure!(
        region.degrees_of_freedom() == 1,
        "verify takes single-mode states, so the region must have one degree of freedom"
    );
    ensure!(
        rho.dim() <= opts.top(),
        "state dimension {} exceeds the largest ladder dimension {}",
        rho.dim(),
        opts.top()
    );
    let s = single_bounds(region, opts)?;
    // The state lives in the first rho.dim() number states, so Tr(ρŜ) only
    // sees that compression of Ŝ and interlacing puts it inside the bounds.
    let value = rho.embedded(opts.top())?.expectation(&s.op.matrix);
    let b = &s.bounds;
    let contained = b.contains(value.re, EXTREMAL_TOL);
    let extremal = if (value.re - b.upper).abs() <= EXTREMAL_TOL && b.upper_attainable {
        Value::from("upper")
    } else if (value.re - b.lower).abs() <= EXTREMAL_TOL && b.lower_attainable {
        Value::from("lower")
    } else {
        Value::Null
    };
    let mut report = Map::new();
    report.insert("command".into(), "verify".into());
    report.insert("region".into(), region_json(region));
    report.insert("ladder".into(), opts.json());
    report.insert("state_dim".into(), rho.dim().into());
    report.insert("value".into(), num(value.re));
    report.insert("value_imag".into(), num(value.im));
    report.insert("contained".into(), contained.into());
    report.insert("extremal".into(), extremal);
    report.insert("assembly_residual".into(), num(s.op.assembly_residual));
    report.insert("bounds".into(), bounds_json(b, Some(s.converged)));
    let status = if !contained {
        Status::Uncontained
    } else if !s.converged {
        Status::NotConverged
    } else {
        Status::Ok
    };
    Ok(Outcome {
        report: Value::Object(report),
        status,
    })
}

/// Midpoint-rule mass of a sampled grid against the region's bounds.
pub fn cmd_ingest(grid: &WignerGrid, region: &RegionSpec, opts: &LadderOptions) -> Result<Outcome> {
    let mass = grid_mass(grid, region)?;
    let s = single_bounds(region, opts)?;
    let verdict = consistency_verdict(mass.mass, &s.bounds, mass.error);
    let (lo, hi) = grid.extent();
    let mut report = Map::new();
    report.insert("command".into(), "ingest".into());
    report.insert("region".into(), region_json(region));
    report.insert("ladder".into(), opts.json());
    report.insert(
        "grid".into(),
        json!({
            "q_nodes": grid.q_axis().len(),
            "p_nodes": grid.p_axis().len(),
            "extent": [[num(lo.q), num(hi.q)], [num(lo.p), num(hi.p)]],
            "noise_level": num(grid.noise_level()),
        }),
    );
    report.insert("mass".into(), num(mass.mass));
    report.insert("error".into(), num(mass.error));
    report.insert("cells".into(), mass.cells.into());
    report.insert("boundary_cells".into(), mass.boundary_cells.into());
    report.insert("bounds".into(), bounds_json(&s.bounds, Some(s.converged)));
    report.insert("verdict".into(), verdict.as_str().into());
    Ok(Outcome {
        report: Value::Object(report),
        status: if s.converged {
            Status::Ok
        } else {
            Status::NotConverged
        },
    })
}

/// Samples `W_ρ` on `[q0, q1] × [p0, p1]` with `points` nodes per axis.
pub fn cmd_sample(
    rho: &DensityMatrix,
    q: (f64, f64),
    p: (f64, f64),
    points: usize,
) -> Result<WignerGrid> {
    ensure!(points >= 2, "need at least 2 points per axis");
    ensure!(q.0 < q.1 && p.0 < p.1, "ranges must be ascending");
    Ok(sample_wigner(
        rho,
        &uniform_axis(q.0, q.1, points),
        &uniform_axis(p.0, p.1, points),
        0.0,
    )?)
}

/// `lo:hi`.
pub fn parse_range(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(':')
        .with_context(|| format!("range must look like lo:hi, got `{text}`"))?;
    let lo = a
        .trim()
        .parse()
        .with_context(|| format!("bad range start `{a}`"))?;
    let hi = b
        .trim()
        .parse()
        .with_context(|| format!("bad range stop `{b}`"))?;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_syntax() {
        assert_eq!(parse_dims("32:64").unwrap(), vec![32, 48, 64]);
        assert_eq!(parse_dims("16:64:16").unwrap(), vec![16, 32, 48, 64]);
        assert_eq!(parse_dims("16:60:16").unwrap(), vec![16, 32, 48, 60]);
        assert_eq!(parse_dims("8:9").unwrap(), vec![8, 9]);
        assert!(parse_dims("64").is_err());
        assert!(parse_dims("64:32").is_err());
        assert!(parse_dims("0:32").is_err());
        assert!(parse_dims("a:b").is_err());
    }

    #[test]
    fn value_grids() {
        assert_eq!(parse_values("1, 2.5").unwrap(), vec![1.0, 2.5]);
        assert_eq!(parse_values("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_values("").is_err());
        assert!(parse_values("0:1:0").is_err());
    }

    #[test]
    fn tabulate_values() {
        let t = cmd_tabulate(TableKind::Disk, &[1.0], 2, &[]).unwrap();
        let mut lines = t.lines();
        assert_eq!(lines.next(), Some("a,lambda_0(a),lambda_1(a),lambda_2(a)"));
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        assert!((row[1] - 0.632121).abs() < 1e-6);
        assert!((row[2] + 0.103638).abs() < 1e-6);
        assert!((row[3] - disk_eigenvalue(2, 1.0)).abs() < 1e-11);

        let t = cmd_tabulate(TableKind::Circle, &[1.0], 0, &[]).unwrap();
        let v: f64 = t
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert!((v - 0.735759).abs() < 1e-6);

        let k = std::f64::consts::PI / 3.0;
        let t = cmd_tabulate(TableKind::Segment, &[3.0], 0, &[k]).unwrap();
        let v: f64 = t
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(2)
            .unwrap()
            .parse()
            .unwrap();
        assert!(v.abs() < 1e-12);

        assert!(cmd_tabulate(TableKind::Disk, &[], 2, &[]).is_err());
        assert!(cmd_tabulate(TableKind::Segment, &[3.0], 0, &[]).is_err());
    }
}
