//! Region, state and grid file formats.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use quasimass::{Complex64, DensityMatrix, FockMatrix, PhasePoint, RegionSpec, WignerGrid};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::report::{fmt_float, num};

/// Region file, e.g. `{"kind":"disk","center":[0,0],"radius":1.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionFile {
    Disk {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Annulus {
        #[serde(default)]
        center: [f64; 2],
        inner: f64,
        outer: f64,
    },
    Rectangle {
        min: [f64; 2],
        max: [f64; 2],
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    CircleContour {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    SegmentContour {
        from: [f64; 2],
        to: [f64; 2],
    },
    PolylineContour {
        vertices: Vec<[f64; 2]>,
    },
    Point {
        #[serde(default)]
        at: [f64; 2],
    },
    TensorProduct {
        factors: Vec<RegionFile>,
    },
}

fn pt(a: [f64; 2]) -> PhasePoint {
    PhasePoint::new(a[0], a[1])
}

fn arr(p: PhasePoint) -> [f64; 2] {
    [p.q, p.p]
}

impl From<&RegionFile> for RegionSpec {
    fn from(r: &RegionFile) -> Self {
        match r {
            RegionFile::Disk { center, radius } => RegionSpec::Disk {
                center: pt(*center),
                radius: *radius,
            },
            RegionFile::Annulus {
                center,
                inner,
                outer,
            } => RegionSpec::Annulus {
                center: pt(*center),
                inner: *inner,
                outer: *outer,
            },
            RegionFile::Rectangle { min, max } => RegionSpec::Rectangle {
                min: pt(*min),
                max: pt(*max),
            },
            RegionFile::Polygon { vertices } => RegionSpec::Polygon {
                vertices: vertices.iter().copied().map(pt).collect(),
            },
            RegionFile::CircleContour { center, radius } => RegionSpec::CircleContour {
                center: pt(*center),
                radius: *radius,
            },
            RegionFile::SegmentContour { from, to } => RegionSpec::SegmentContour {
                from: pt(*from),
                to: pt(*to),
            },
            RegionFile::PolylineContour { vertices } => RegionSpec::PolylineContour {
                vertices: vertices.iter().copied().map(pt).collect(),
            },
            RegionFile::Point { at } => RegionSpec::Point(pt(*at)),
            RegionFile::TensorProduct { factors } => {
                RegionSpec::TensorProduct(factors.iter().map(RegionSpec::from).collect())
            }
        }
    }
}

impl From<&RegionSpec> for RegionFile {
    fn from(r: &RegionSpec) -> Self {
        match r {
            RegionSpec::Disk { center, radius } => RegionFile::Disk {
                center: arr(*center),
                radius: *radius,
            },
            RegionSpec::Annulus {
                center,
                inner,
                outer,
            } => RegionFile::Annulus {
                center: arr(*center),
                inner: *inner,
                outer: *outer,
            },
            RegionSpec::Rectangle { min, max } => RegionFile::Rectangle {
                min: arr(*min),
                max: arr(*max),
            },
            RegionSpec::Polygon { vertices } => RegionFile::Polygon {
                vertices: vertices.iter().copied().map(arr).collect(),
            },
            RegionSpec::CircleContour { center, radius } => RegionFile::CircleContour {
                center: arr(*center),
                radius: *radius,
            },
            RegionSpec::SegmentContour { from, to } => RegionFile::SegmentContour {
                from: arr(*from),
                to: arr(*to),
            },
            RegionSpec::PolylineContour { vertices } => RegionFile::PolylineContour {
                vertices: vertices.iter().copied().map(arr).collect(),
            },
            RegionSpec::Point(p) => RegionFile::Point { at: arr(*p) },
            RegionSpec::TensorProduct(f) => RegionFile::TensorProduct {
                factors: f.iter().map(RegionFile::from).collect(),
            },
        }
    }
}

/// Parses and validates a region.
pub fn parse_region(text: &str) -> Result<RegionSpec> {
    let file: RegionFile = serde_json::from_str(text).context("malformed region JSON")?;
    let region = RegionSpec::from(&file);
    region.validate()?;
    Ok(region)
}

pub fn read_region(path: &Path) -> Result<RegionSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_region(&text).with_context(|| format!("region file {}", path.display()))
}

/// Region echo with the report's float formatting.
pub fn region_json(region: &RegionSpec) -> Value {
    round_floats(serde_json::to_value(RegionFile::from(region)).expect("serializable"))
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) => n.as_f64().map_or(Value::Number(n), num),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dim: usize,
    rho: Vec<Vec<[f64; 2]>>,
}

/// Parses `{"dim": N, "rho": [[[re, im], ...], ...]}` and enforces the
/// density-matrix invariants.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).context("malformed state JSON")?;
    let n = file.dim;
    if n == 0 {
        bail!("state dimension must be positive");
    }
    if file.rho.len() != n || file.rho.iter().any(|row| row.len() != n) {
        bail!("rho must be a {n}x{n} matrix");
    }
    let matrix = FockMatrix::from_fn(n, |i, j| {
        let [re, im] = file.rho[i][j];
        Complex64::new(re, im)
    });
    Ok(DensityMatrix::new(matrix)?)
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_state(&text).with_context(|| format!("state file {}", path.display()))
}

pub fn state_json(rho: &DensityMatrix) -> String {
    let n = rho.dim();
    let file = StateFile {
        dim: n,
        rho: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let z = rho.matrix().get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("serializable")
}

#[derive(Debug, Deserialize)]
struct GridRow {
    q: f64,
    p: f64,
    w: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSidecar {
    noise_level: f64,
}

/// `grid.csv` → `grid.csv.json`.
pub fn sidecar_path(grid: &Path) -> PathBuf {
    let mut s = grid.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Parses `q,p,w` rows (row-major, `q` outer).
pub fn parse_grid<R: std::io::Read>(reader: R, noise_level: f64) -> Result<WignerGrid> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().context("reading grid header")?.clone();
    if header.iter().collect::<Vec<_>>() != ["q", "p", "w"] {
        bail!(
            "grid header must be `q,p,w`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        );
    }
    let mut nodes = Vec::new();
    for (i, row) in rdr.deserialize::<GridRow>().enumerate() {
        // header is line 1
        let row = row.map_err(|e| anyhow!("malformed grid row at line {}: {e}", i + 2))?;
        nodes.push((row.q, row.p, row.w));
    }
    Ok(WignerGrid::from_nodes(&nodes, noise_level)?)
}

/// Reads a grid and its optional sidecar; `noise_override` wins over the sidecar.
pub fn read_grid(path: &Path, noise_override: Option<f64>) -> Result<WignerGrid> {
    let noise = match noise_override {
        Some(x) => x,
        None => {
            let side = sidecar_path(path);
            if side.exists() {
                let text = fs::read_to_string(&side)
                    .with_context(|| format!("reading {}", side.display()))?;
                let s: GridSidecar = serde_json::from_str(&text)
                    .with_context(|| format!("malformed sidecar {}", side.display()))?;
                s.noise_level
            } else {
                0.0
            }
        }
    };
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_grid(file, noise).with_context(|| format!("grid file {}", path.display()))
}

pub fn grid_csv(grid: &WignerGrid) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["q", "p", "w"])?;
    for (i, q) in grid.q_axis().iter().enumerate() {
        for (j, p) in grid.p_axis().iter().enumerate() {
            w.write_record([fmt_float(*q), fmt_float(*p), fmt_float(grid.value(i, j))])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
