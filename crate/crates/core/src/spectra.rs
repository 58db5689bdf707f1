//! Spectra of region operators and the sharp bounds they imply.
//!
//! For a state `ρ̂` the quasiprobability mass `∫_R W_ρ` equals `Tr(ρ̂ R̂)`,
//! so it lies between the least and greatest points of the spectrum of
//! `R̂`, and the extremes are (approached by) the corresponding
//! (generalized) eigenvectors. In a truncated basis the spectral extremes
//! of the compression are inner approximations: they never overshoot the
//! true bounds and move outward monotonically as the basis grows.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::region_ops::RegionOperator;
use crate::regions::RegionSpec;
use crate::{Error, Result};

pub mod analytic;

/// Default tolerance on the change of the extremes along a dimension ladder.
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    Numeric,
    Analytic,
}

/// Change of the spectral extremes between dimensions `dim − step` and `dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeConvergence {
    pub step: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector of `eigenvalues[j]` in the number basis.
    pub eigenvectors: DMatrix<Complex64>,
    pub dim: usize,
    pub convergence: Option<ExtremeConvergence>,
    pub source: SpectrumSource,
}

impl SpectrumReport {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j).iter().copied().collect()
    }
}

/// Full dense Hermitian eigendecomposition.
///
/// Each eigenvector is rotated so that its largest-magnitude component is
/// real and positive. The convergence field compares the extremes with
/// those of the compression to `dim − max(1, dim/4)` states.
pub fn eigendecompose(op: &RegionOperator) -> Result<SpectrumReport> {
    let mut report = eigendecompose_matrix(op.matrix.matrix())?;
    let dim = op.matrix.dim();
    let step = (dim / 4).max(1);
    if dim > step {
        let (lo, hi) = extremes(&op.matrix.principal(dim - step).into_matrix())?;
        report.convergence = Some(ExtremeConvergence {
            step,
            lower: (report.min() - lo).abs(),
            upper: (report.max() - hi).abs(),
        });
    }
    Ok(report)
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eigendecompose_matrix(matrix: &DMatrix<Complex64>) -> Result<SpectrumReport> {
    check_finite(matrix)?;
    let dim = matrix.nrows();
    if dim == 0 {
        return Err(Error::InvalidState("empty matrix".into()));
    }
    let eig = matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (j, &i) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(i);
        let mut pivot = col[0];
        for z in col.iter() {
            if z.norm() > pivot.norm() {
                pivot = *z;
            }
        }
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for r in 0..dim {
            eigenvectors[(r, j)] = col[r] * phase;
        }
    }
    Ok(SpectrumReport {
        eigenvalues,
        eigenvectors,
        dim,
        convergence: None,
        source: SpectrumSource::Numeric,
    })
}

fn check_finite(matrix: &DMatrix<Complex64>) -> Result<()> {
    if matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Least and greatest eigenvalue, without eigenvectors.
pub fn extremes(matrix: &DMatrix<Complex64>) -> Result<(f64, f64)> {
    check_finite(matrix)?;
    if matrix.nrows() == 0 {
        return Err(Error::InvalidState("empty matrix".into()));
    }
    let ev = matrix.clone().symmetric_eigenvalues();
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// How a bound is attained, or approached.
#[derive(Debug, Clone, PartialEq)]
pub enum Extremizer {
    /// A pure state given by its number-basis coefficients.
    State(Vec<Complex64>),
    /// The number state `|n⟩`.
    NumberState(usize),
    /// A closed-form description of an attaining state.
    Described(String),
    /// The bound is a supremum/infimum approached along a limit.
    Limit(String),
    /// One extremizer per tensor factor.
    Product(Vec<Extremizer>),
    /// Supplied by the caller without an extremizer.
    External,
}

impl Extremizer {
    /// `Some(n)` when the extremizer is (numerically) the number state `|n⟩`.
    pub fn number_state_index(&self) -> Option<usize> {
        match self {
            Extremizer::NumberState(n) => Some(*n),
            Extremizer::State(c) => {
                let (n, big) = c
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
                (big.norm() > 1.0 - 1e-8).then_some(n)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    /// Spectral extremes of the truncated operator.
    Numeric,
    /// Closed-form spectrum.
    Analytic,
    /// Interval product of factor bounds.
    Composite,
}

/// Spectral extremes of one compression on a dimension ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderStep {
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Best possible bounds on the quasiprobability mass of a region.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsResult {
    pub lower: f64,
    pub upper: f64,
    pub lower_attained_by: Extremizer,
    pub upper_attained_by: Extremizer,
    pub lower_attainable: bool,
    pub upper_attainable: bool,
    /// Largest change of an extreme between the last two ladder steps.
    pub convergence: f64,
    pub ladder: Vec<LadderStep>,
    pub source: BoundSource,
    pub note: Option<String>,
}

impl BoundsResult {
    /// A bare interval, both ends attainable.
    pub fn interval(lower: f64, upper: f64) -> Self {
        BoundsResult {
            lower,
            upper,
            lower_attained_by: Extremizer::External,
            upper_attained_by: Extremizer::External,
            lower_attainable: true,
            upper_attainable: true,
            convergence: 0.0,
            ladder: Vec::new(),
            source: BoundSource::Composite,
            note: None,
        }
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }
}

/// Bounds from the spectral extremes on a dimension ladder, with the
/// convergence check against `tolerance`.
pub fn bounds(op: &RegionOperator, dim_ladder: &[usize], tolerance: f64) -> Result<BoundsResult> {
    let result = ladder_bounds(op, dim_ladder)?;
    if result.source == BoundSource::Numeric && result.convergence > tolerance {
        return Err(Error::NotConverged {
            convergence: result.convergence,
            tolerance,
        });
    }
    Ok(result)
}

/// Bounds on a dimension ladder without the convergence check.
///
/// The ladder is realized as principal compressions of `op`, so
/// `op.dim` must be at least the largest ladder entry. Straight segments
/// have a purely continuous spectrum; their bounds are the closed-form
/// supremum and infimum, and the ladder is kept as a diagnostic.
pub fn ladder_bounds(op: &RegionOperator, dim_ladder: &[usize]) -> Result<BoundsResult> {
    validate_ladder(dim_ladder, op.dim)?;
    if op.region.degrees_of_freedom() != 1 {
        return Err(Error::Unsupported(
            "bounds of tensor-product operators: bound each factor and combine with product_bounds"
                .into(),
        ));
    }
    let (&top, rest) = dim_ladder.split_last().expect("validated");
    let mut ladder = Vec::with_capacity(dim_ladder.len());
    for &dim in rest {
        let (lower, upper) = extremes(&op.matrix.principal(dim).into_matrix())?;
        ladder.push(LadderStep { dim, lower, upper });
    }
    let report = eigendecompose_matrix(op.matrix.principal(top).matrix())?;
    ladder.push(LadderStep {
        dim: top,
        lower: report.min(),
        upper: report.max(),
    });
    let prev = ladder[ladder.len() - 2];
    let convergence = (report.min() - prev.lower)
        .abs()
        .max((report.max() - prev.upper).abs());

    if let RegionSpec::SegmentContour { from, to } = &op.region {
        let mut analytic = analytic::segment_bounds(from.dist(*to));
        analytic.ladder = ladder;
        analytic.convergence = convergence;
        return Ok(analytic);
    }

    Ok(BoundsResult {
        lower: report.min(),
        upper: report.max(),
        lower_attained_by: Extremizer::State(report.eigenvector(0)),
        upper_attained_by: Extremizer::State(report.eigenvector(top - 1)),
        lower_attainable: true,
        upper_attainable: true,
        convergence,
        ladder,
        source: BoundSource::Numeric,
        note: None,
    })
}

fn validate_ladder(ladder: &[usize], available: usize) -> Result<()> {
    if ladder.len() < 2 {
        return Err(Error::InvalidLadder(format!(
            "need at least 2 dimensions, got {}",
            ladder.len()
        )));
    }
    if ladder[0] == 0 {
        return Err(Error::InvalidLadder("dimensions must be positive".into()));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidLadder(
            "dimensions must be strictly ascending".into(),
        ));
    }
    let top = ladder[ladder.len() - 1];
    if top > available {
        return Err(Error::InvalidLadder(format!(
            "largest dimension {top} exceeds the operator dimension {available}"
        )));
    }
    Ok(())
}

/// Bounds for a tensor-product region from bounds of its factors.
///
/// The extremes of a product of intervals are attained at products of
/// endpoints; ties prefer attainable endpoint combinations.
pub fn product_bounds(factor_bounds: &[BoundsResult]) -> Result<BoundsResult> {
    if factor_bounds.len() < 2 {
        return Err(Error::InvalidRegion(
            "product_bounds needs at least 2 factors".into(),
        ));
    }
    let k = factor_bounds.len();
    if k > 20 {
        return Err(Error::DimensionOverflow { dim: k, limit: 20 });
    }
    struct Corner {
        value: f64,
        attainable: bool,
        picks: Vec<bool>, // true = upper endpoint
    }
    let mut best_lo: Option<Corner> = None;
    let mut best_hi: Option<Corner> = None;
    for mask in 0u32..(1 << k) {
        let picks: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
        let mut value = 1.0;
        let mut attainable = true;
        for (b, &up) in factor_bounds.iter().zip(&picks) {
            if up {
                value *= b.upper;
                attainable &= b.upper_attainable;
            } else {
                value *= b.lower;
                attainable &= b.lower_attainable;
            }
        }
        let better_lo = match &best_lo {
            None => true,
            Some(c) => value < c.value || (value == c.value && attainable && !c.attainable),
        };
        if better_lo {
            best_lo = Some(Corner {
                value,
                attainable,
                picks: picks.clone(),
            });
        }
        let better_hi = match &best_hi {
            None => true,
            Some(c) => value > c.value || (value == c.value && attainable && !c.attainable),
        };
        if better_hi {
            best_hi = Some(Corner {
                value,
                attainable,
                picks,
            });
        }
    }
    let (lo, hi) = (best_lo.expect("k ≥ 2"), best_hi.expect("k ≥ 2"));
    let describe = |picks: &[bool]| {
        Extremizer::Product(
            factor_bounds
                .iter()
                .zip(picks)
                .map(|(b, &up)| {
                    if up {
                        b.upper_attained_by.clone()
                    } else {
                        b.lower_attained_by.clone()
                    }
                })
                .collect(),
        )
    };
    // first-order propagation of each factor's convergence
    let mut convergence = 0.0f64;
    for (i, b) in factor_bounds.iter().enumerate() {
        let others: f64 = factor_bounds
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, o)| o.lower.abs().max(o.upper.abs()))
            .product();
        convergence = convergence.max(b.convergence * others);
    }
    Ok(BoundsResult {
        lower: lo.value,
        upper: hi.value,
        lower_attained_by: describe(&lo.picks),
        upper_attained_by: describe(&hi.picks),
        lower_attainable: lo.attainable,
        upper_attainable: hi.attainable,
        convergence,
        ladder: Vec::new(),
        source: BoundSource::Composite,
        note: None,
    })
}
