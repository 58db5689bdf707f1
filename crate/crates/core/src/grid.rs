//! Sampled Wigner functions on rectangular grids.
//!
//! Each node is the centre of a cell of area `Δq·Δp`. The mass of a region
//! is the midpoint-rule sum over cells whose centres lie in the region,
//! which is additive over disjoint regions by construction.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_PI;

use crate::fock::{kernel_matrix, DensityMatrix, PhasePoint};
use crate::regions::RegionSpec;
use crate::spectra::BoundsResult;
use crate::{Error, Result};

/// Relative tolerance on the spacing of a uniform axis.
pub const UNIFORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    q_axis: Vec<f64>,
    p_axis: Vec<f64>,
    /// Row-major, `q` outer.
    values: Vec<f64>,
    noise_level: f64,
}

fn check_axis(name: &str, axis: &[f64]) -> Result<f64> {
    if axis.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "{name} axis needs at least 2 nodes"
        )));
    }
    if axis.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "{name} axis has non-finite nodes"
        )));
    }
    let h = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    if h.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
        return Err(Error::InvalidGrid(format!("{name} axis is not ascending")));
    }
    for (i, w) in axis.windows(2).enumerate() {
        let d = w[1] - w[0];
        if d.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
            return Err(Error::InvalidGrid(format!(
                "{name} axis is not monotone at index {}",
                i + 1
            )));
        }
        if (d - h).abs() > UNIFORM_TOL * h {
            return Err(Error::InvalidGrid(format!(
                "{name} axis is not uniform at index {}: spacing {d} vs {h}",
                i + 1
            )));
        }
    }
    Ok(h)
}

impl WignerGrid {
    pub fn new(
        q_axis: Vec<f64>,
        p_axis: Vec<f64>,
        values: Vec<f64>,
        noise_level: f64,
    ) -> Result<Self> {
        check_axis("q", &q_axis)?;
        check_axis("p", &p_axis)?;
        if !noise_level.is_finite() || noise_level < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "noise level {noise_level} is not a finite non-negative number"
            )));
        }
        if values.len() != q_axis.len() * p_axis.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, found {}",
                q_axis.len() * p_axis.len(),
                values.len()
            )));
        }
        let limit = FRAC_1_PI + noise_level;
        let np = p_axis.len();
        for (idx, &w) in values.iter().enumerate() {
            let (q, p) = (q_axis[idx / np], p_axis[idx % np]);
            if !w.is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "non-finite value at (q, p) = ({q}, {p})"
                )));
            }
            if w.abs() > limit {
                return Err(Error::Physicality {
                    q,
                    p,
                    value: w,
                    limit,
                });
            }
        }
        Ok(WignerGrid {
            q_axis,
            p_axis,
            values,
            noise_level,
        })
    }

    /// Builds a grid from `(q, p, w)` nodes in row-major order, `q` outer.
    pub fn from_nodes(nodes: &[(f64, f64, f64)], noise_level: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidGrid("no nodes".into()));
        }
        let q0 = nodes[0].0;
        let np = nodes.iter().take_while(|n| n.0 == q0).count();
        if !nodes.len().is_multiple_of(np) {
            return Err(Error::InvalidGrid(format!(
                "{} nodes do not form rows of {np}",
                nodes.len()
            )));
        }
        let p_axis: Vec<f64> = nodes[..np].iter().map(|n| n.1).collect();
        let mut q_axis = Vec::with_capacity(nodes.len() / np);
        for (r, row) in nodes.chunks(np).enumerate() {
            let q = row[0].0;
            for (j, n) in row.iter().enumerate() {
                if n.0 != q || n.1 != p_axis[j] {
                    return Err(Error::InvalidGrid(format!(
                        "node {} at ({}, {}) breaks the row-major layout",
                        r * np + j,
                        n.0,
                        n.1
                    )));
                }
            }
            q_axis.push(q);
        }
        let values = nodes.iter().map(|n| n.2).collect();
        Self::new(q_axis, p_axis, values, noise_level)
    }

    pub fn q_axis(&self) -> &[f64] {
        &self.q_axis
    }

    pub fn p_axis(&self) -> &[f64] {
        &self.p_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p_axis.len() + j]
    }

    pub fn spacing(&self) -> (f64, f64) {
        let h = |a: &[f64]| (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64;
        (h(&self.q_axis), h(&self.p_axis))
    }

    /// Union of all cells, `(min, max)`.
    pub fn extent(&self) -> (PhasePoint, PhasePoint) {
        let (hq, hp) = self.spacing();
        (
            PhasePoint::new(self.q_axis[0] - 0.5 * hq, self.p_axis[0] - 0.5 * hp),
            PhasePoint::new(
                self.q_axis[self.q_axis.len() - 1] + 0.5 * hq,
                self.p_axis[self.p_axis.len() - 1] + 0.5 * hp,
            ),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Copy with every value multiplied by `factor`, skipping validation.
    pub fn scaled_unchecked(&self, factor: f64) -> WignerGrid {
        WignerGrid {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

/// Samples `W_ρ` on the product of two axes.
pub fn sample_wigner(
    rho: &DensityMatrix,
    q_axis: &[f64],
    p_axis: &[f64],
    noise_level: f64,
) -> Result<WignerGrid> {
    let mut values = Vec::with_capacity(q_axis.len() * p_axis.len());
    for &q in q_axis {
        for &p in p_axis {
            let k = kernel_matrix(PhasePoint::new(q, p), rho.dim());
            let w = rho.matrix().trace_product(&k);
            if w.im.abs() > 1e-8 {
                return Err(Error::ImaginaryResidue(w.im));
            }
            values.push(w.re);
        }
    }
    WignerGrid::new(q_axis.to_vec(), p_axis.to_vec(), values, noise_level)
}

/// `n` equally spaced nodes on `[a, b]`.
pub fn uniform_axis(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMass {
    pub mass: f64,
    /// `perimeter × cell diagonal × max|W|` over cells cut by the boundary.
    pub error: f64,
    pub cells: usize,
    pub boundary_cells: usize,
}

/// Midpoint-rule mass of a region with a perimeter-based error estimate.
pub fn grid_mass(grid: &WignerGrid, region: &RegionSpec) -> Result<GridMass> {
    region.validate()?;
    if region.dimension() != 2 {
        return Err(Error::Unsupported(format!(
            "grid mass needs a 2D region, got {}",
            region.kind()
        )));
    }
    let (lo, hi) = region.bounding_box()?;
    let (glo, ghi) = grid.extent();
    let (hq, hp) = grid.spacing();
    let slack = 1e-9 * hq.max(hp);
    if lo.q < glo.q - slack || lo.p < glo.p - slack || hi.q > ghi.q + slack || hi.p > ghi.p + slack
    {
        return Err(Error::Coverage(format!(
            "region bounding box [{}, {}] x [{}, {}] exceeds grid extent [{}, {}] x [{}, {}]",
            lo.q, hi.q, lo.p, hi.p, glo.q, ghi.q, glo.p, ghi.p
        )));
    }
    let perimeter = region.perimeter()?;
    let area = hq * hp;
    let mut mass = 0.0;
    let mut cells = 0;
    let mut boundary_cells = 0;
    let mut boundary_max: f64 = 0.0;
    for (i, &q) in grid.q_axis.iter().enumerate() {
        for (j, &p) in grid.p_axis.iter().enumerate() {
            let w = grid.value(i, j);
            if region.contains(PhasePoint::new(q, p))? {
                mass += w * area;
                cells += 1;
            }
            let mut inside = 0;
            for (dq, dp) in [(-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)] {
                if region.contains(PhasePoint::new(q + dq * hq, p + dp * hp))? {
                    inside += 1;
                }
            }
            if inside != 0 && inside != 4 {
                boundary_cells += 1;
                boundary_max = boundary_max.max(w.abs());
            }
        }
    }
    Ok(GridMass {
        mass,
        error: perimeter * libm::hypot(hq, hp) * boundary_max,
        cells,
        boundary_cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Violation,
    /// Outside the bounds, but by no more than the error estimate.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violation => "violation",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Compares a measured mass with sharp bounds.
///
/// Masses inside `[lower, upper]` are consistent. Outside
/// `[lower − error, upper + error]` they are a violation. In between the
/// data cannot decide.
pub fn consistency_verdict(mass: f64, bounds: &BoundsResult, error: f64) -> Verdict {
    let error = error.abs();
    if !mass.is_finite() || mass < bounds.lower - error || mass > bounds.upper + error {
        Verdict::Violation
    } else if mass < bounds.lower || mass > bounds.upper {
        Verdict::Inconclusive
    } else {
        Verdict::Consistent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::analytic::disk_eigenvalue;

    fn vacuum_grid(half: f64, n: usize) -> WignerGrid {
        let axis = uniform_axis(-half, half, n);
        let mut values = Vec::new();
        for &q in &axis {
            for &p in &axis {
                values.push(libm::exp(-(q * q + p * p)) * FRAC_1_PI);
            }
        }
        WignerGrid::new(axis.clone(), axis, values, 0.0).unwrap()
    }

    #[test]
    fn zero_grid_has_zero_mass() {
        let axis = uniform_axis(-1.0, 1.0, 3);
        let g = WignerGrid::new(axis.clone(), axis, alloc::vec![0.0; 9], 0.0).unwrap();
        let m = grid_mass(&g, &RegionSpec::disk(1.0)).unwrap();
        assert_eq!(m.mass, 0.0);
        assert_eq!(m.error, 0.0);
    }

    #[test]
    fn vacuum_disk_mass() {
        let g = vacuum_grid(5.0, 201);
        assert!((g.max_abs() - FRAC_1_PI).abs() < 1e-15);
        let m = grid_mass(&g, &RegionSpec::disk(1.0)).unwrap();
        assert!(
            (m.mass - (1.0 - libm::exp(-1.0))).abs() < 2e-3,
            "{}",
            m.mass
        );
        assert!((m.mass - (1.0 - libm::exp(-1.0))).abs() < m.error);
    }

    #[test]
    fn sampled_number_state_mass() {
        let rho = DensityMatrix::number_state(1, 4).unwrap();
        let axis = uniform_axis(-5.0, 5.0, 201);
        let g = sample_wigner(&rho, &axis, &axis, 0.0).unwrap();
        let m = grid_mass(&g, &RegionSpec::disk(1.0)).unwrap();
        assert!(
            (m.mass - disk_eigenvalue(1, 1.0)).abs() < 2e-3,
            "{}",
            m.mass
        );
    }

    #[test]
    fn additivity() {
        let g = vacuum_grid(3.0, 61);
        let left = RegionSpec::Rectangle {
            min: PhasePoint::new(-2.0, -1.0),
            max: PhasePoint::new(-0.05, 1.0),
        };
        let right = RegionSpec::Rectangle {
            min: PhasePoint::new(0.05, -1.0),
            max: PhasePoint::new(2.0, 1.0),
        };
        let both = RegionSpec::Rectangle {
            min: PhasePoint::new(-2.0, -1.0),
            max: PhasePoint::new(2.0, 1.0),
        };
        let (l, r, b) = (
            grid_mass(&g, &left).unwrap(),
            grid_mass(&g, &right).unwrap(),
            grid_mass(&g, &both).unwrap(),
        );
        // the column q = 0 lies in the gap
        let (hq, hp) = g.spacing();
        let column: f64 = (0..g.p_axis().len())
            .filter(|&j| g.p_axis()[j].abs() <= 1.0)
            .map(|j| g.value(30, j) * hq * hp)
            .sum();
        assert!((l.mass + r.mass + column - b.mass).abs() < 1e-15);
        assert_eq!(l.cells + r.cells + 21, b.cells);
    }

    #[test]
    fn physicality_violation_is_located() {
        let axis = uniform_axis(-1.0, 1.0, 3);
        let mut values = alloc::vec![0.0; 9];
        values[5] = 0.5;
        match WignerGrid::new(axis.clone(), axis.clone(), values.clone(), 0.0) {
            Err(Error::Physicality { q, p, value, .. }) => {
                assert_eq!((q, p, value), (0.0, 1.0, 0.5));
            }
            other => panic!("{other:?}"),
        }
        assert!(WignerGrid::new(axis.clone(), axis, values, 0.2).is_ok());
    }

    #[test]
    fn rejects_bad_axes_and_coverage() {
        let v = alloc::vec![0.0; 9];
        assert!(WignerGrid::new(
            alloc::vec![0.0, 1.0, 2.5],
            alloc::vec![0.0, 1.0, 2.0],
            v.clone(),
            0.0
        )
        .is_err());
        assert!(WignerGrid::new(
            alloc::vec![2.0, 1.0, 0.0],
            alloc::vec![0.0, 1.0, 2.0],
            v.clone(),
            0.0
        )
        .is_err());
        let g = vacuum_grid(2.0, 21);
        assert!(matches!(
            grid_mass(&g, &RegionSpec::disk(3.0)),
            Err(Error::Coverage(_))
        ));
        assert!(matches!(
            grid_mass(&g, &RegionSpec::circle(1.0)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn from_nodes_round_trip() {
        let g = vacuum_grid(1.0, 5);
        let mut nodes = Vec::new();
        for (i, &q) in g.q_axis().iter().enumerate() {
            for (j, &p) in g.p_axis().iter().enumerate() {
                nodes.push((q, p, g.value(i, j)));
            }
        }
        assert_eq!(WignerGrid::from_nodes(&nodes, 0.0).unwrap(), g);
        nodes.swap(0, 1);
        assert!(WignerGrid::from_nodes(&nodes, 0.0).is_err());
    }

    #[test]
    fn sampled_states_are_never_violations() {
        use crate::fock::coherent_state;
        use crate::region_ops::assemble_region_operator;
        use crate::spectra::ladder_bounds;
        use crate::Complex64;

        let axis = uniform_axis(-6.0, 6.0, 201);
        let grids = [
            sample_wigner(
                &DensityMatrix::number_state(0, 3).unwrap(),
                &axis,
                &axis,
                0.0,
            )
            .unwrap(),
            sample_wigner(
                &DensityMatrix::number_state(1, 3).unwrap(),
                &axis,
                &axis,
                0.0,
            )
            .unwrap(),
            sample_wigner(
                &coherent_state(Complex64::new(1.0, 0.5), 32).unwrap().state,
                &axis,
                &axis,
                0.0,
            )
            .unwrap(),
        ];
        for a in [0.5, 1.0, 2.0] {
            let op = assemble_region_operator(&RegionSpec::disk(a), 32, 48).unwrap();
            let b = ladder_bounds(&op, &[16, 32]).unwrap();
            for (i, g) in grids.iter().enumerate() {
                let m = grid_mass(g, &RegionSpec::disk(a)).unwrap();
                let v = consistency_verdict(m.mass, &b, m.error);
                // number states sit on a bound, so midpoint error can land
                // them just outside it
                if i == 2 {
                    assert_eq!(v, Verdict::Consistent, "a {a}");
                } else {
                    assert_ne!(v, Verdict::Violation, "a {a} state {i}");
                }
            }
        }
    }

    #[test]
    fn verdicts() {
        let b = BoundsResult::interval(-0.1036, 0.6321);
        assert_eq!(consistency_verdict(0.63, &b, 1e-3), Verdict::Consistent);
        assert_eq!(consistency_verdict(0.80, &b, 1e-3), Verdict::Violation);
        assert_eq!(consistency_verdict(0.6325, &b, 1e-3), Verdict::Inconclusive);
        assert_eq!(
            consistency_verdict(-0.1040, &b, 1e-3),
            Verdict::Inconclusive
        );
        assert_eq!(consistency_verdict(f64::NAN, &b, 1e-3), Verdict::Violation);
    }
}
