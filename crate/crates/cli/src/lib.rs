//! File formats, reports and commands behind the `quasimass` binary.
//!
//! - regions: JSON tagged by `kind`, e.g. `{"kind":"disk","center":[0,0],"radius":1.5}`;
//! - states: `{"dim": N, "rho": [[[re, im], ...], ...]}`;
//! - grids: CSV `q,p,w` in row-major order (`q` outer) with an optional
//!   sidecar `<grid>.json` holding `{"noise_level": x}`;
//! - reports: JSON with fixed key order and floats at 12 significant digits,
//!   written atomically.

pub mod commands;
pub mod formats;
pub mod report;
