//! Closed-form spectra of the disk, circle, segment and point operators.
//!
//! The disk of radius `a` centred on the origin is invariant under the
//! harmonic-oscillator flow, so its operator is diagonal on number states:
//!
//! `λ_n(a) = (−1)ⁿ ∫₀^{a²} L_n(2u) e^{−u} du`,
//!
//! and the boundary circle has `μ_n(a) = dλ_n/da`. A straight segment of
//! length `L` has the continuous spectrum `±sin(kL)/(kπ)`, `k ≥ 0`, on the
//! even (cosine) and odd (sine) generalized eigenfunctions. Displacements
//! and rotations are unitary, so these spectra hold wherever the region is.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_PI, PI};

use super::{BoundSource, BoundsResult, Extremizer};
use crate::fock::PhasePoint;
use crate::regions::RegionSpec;
use crate::specfun;

/// Absolute tolerance of the adaptive quadrature behind [`disk_eigenvalue`].
pub const DISK_QUADRATURE_TOL: f64 = 1e-12;

/// `λ_n(a)`, by adaptive Gauss–Legendre quadrature.
pub fn disk_eigenvalue(n: usize, a: f64) -> f64 {
    let integral = specfun::adaptive_integrate(
        |u| specfun::laguerre(n, 0.0, 2.0 * u) * libm::exp(-u),
        0.0,
        a * a,
        DISK_QUADRATURE_TOL,
    );
    if n.is_multiple_of(2) {
        integral
    } else {
        -integral
    }
}

/// `μ_n(a) = 2a (−1)ⁿ L_n(2a²) e^{−a²}`.
pub fn circle_contour_eigenvalue(n: usize, a: f64) -> f64 {
    let v = 2.0 * a * specfun::laguerre(n, 0.0, 2.0 * a * a) * libm::exp(-a * a);
    if n.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentBranch {
    /// Even eigenfunctions `cos(kx)/√π`.
    Cosine,
    /// Odd eigenfunctions `sin(kx)/√π`.
    Sine,
}

/// `+sin(kL)/(kπ)` on the cosine branch, `−sin(kL)/(kπ)` on the sine
/// branch; `k = 0` takes the limit `±L/π`.
pub fn segment_spectrum(length: f64, k: f64, branch: SegmentBranch) -> f64 {
    let v = if k == 0.0 {
        length * FRAC_1_PI
    } else {
        libm::sin(k * length) / (k * PI)
    };
    match branch {
        SegmentBranch::Cosine => v,
        SegmentBranch::Sine => -v,
    }
}

/// Supremum `L/π` and infimum `−L/π` of the segment spectrum; neither is attained.
pub fn segment_bounds(length: f64) -> BoundsResult {
    let sup = length * FRAC_1_PI;
    BoundsResult {
        lower: -sup,
        upper: sup,
        lower_attained_by: Extremizer::Limit("k→0 sine branch".into()),
        upper_attained_by: Extremizer::Limit("k→0 cosine branch".into()),
        lower_attainable: false,
        upper_attainable: false,
        convergence: 0.0,
        ladder: Vec::new(),
        source: BoundSource::Analytic,
        note: Some(
            "continuous spectrum; the infimum is the k→0 limit of the odd branch, \
             whose generalized eigenfunction degenerates"
                .into(),
        ),
    }
}

/// `(argmin, argmax)` of `f(n)` over `n < count`; ties keep the lowest index.
fn arg_extremes<F: Fn(usize) -> f64>(count: usize, f: F) -> ((usize, f64), (usize, f64)) {
    let mut lo = (0, f(0));
    let mut hi = lo;
    for n in 1..count {
        let v = f(n);
        if v < lo.1 {
            lo = (n, v);
        }
        if v > hi.1 {
            hi = (n, v);
        }
    }
    (lo, hi)
}

fn number_state_at(n: usize, center: PhasePoint) -> Extremizer {
    if center == PhasePoint::ORIGIN {
        Extremizer::NumberState(n)
    } else {
        Extremizer::Described(format!(
            "number state |{n}> displaced to ({}, {})",
            center.q, center.p
        ))
    }
}

fn discrete_bounds<F: Fn(usize) -> f64>(count: usize, center: PhasePoint, f: F) -> BoundsResult {
    let ((n_lo, lo), (n_hi, hi)) = arg_extremes(count.max(1), f);
    BoundsResult {
        lower: lo,
        upper: hi,
        lower_attained_by: number_state_at(n_lo, center),
        upper_attained_by: number_state_at(n_hi, center),
        lower_attainable: true,
        upper_attainable: true,
        convergence: 0.0,
        ladder: Vec::new(),
        source: BoundSource::Analytic,
        note: None,
    }
}

/// Extremes of `λ_n(a)` over `n < count`.
pub fn disk_bounds(a: f64, count: usize) -> BoundsResult {
    let values: Vec<f64> = (0..count.max(1)).map(|n| disk_eigenvalue(n, a)).collect();
    discrete_bounds(values.len(), PhasePoint::ORIGIN, |n| values[n])
}

/// Extremes of `μ_n(a)` over `n < count`.
pub fn circle_bounds(a: f64, count: usize) -> BoundsResult {
    discrete_bounds(count, PhasePoint::ORIGIN, |n| {
        circle_contour_eigenvalue(n, a)
    })
}

/// `±1/π`, attained by the displaced vacuum and displaced `|1⟩`.
pub fn point_bounds(pt: PhasePoint) -> BoundsResult {
    BoundsResult {
        lower: -FRAC_1_PI,
        upper: FRAC_1_PI,
        lower_attained_by: number_state_at(1, pt),
        upper_attained_by: number_state_at(0, pt),
        lower_attainable: true,
        upper_attainable: true,
        convergence: 0.0,
        ladder: Vec::new(),
        source: BoundSource::Analytic,
        note: Some("every odd (even) state about the point attains the lower (upper) bound".into()),
    }
}

/// Closed-form bounds for the region kinds that have them, scanning the
/// first `count` number states where the spectrum is discrete.
pub fn analytic_bounds(region: &RegionSpec, count: usize) -> Option<BoundsResult> {
    match region {
        RegionSpec::Disk { center, radius } => {
            let values: Vec<f64> = (0..count.max(1))
                .map(|n| disk_eigenvalue(n, *radius))
                .collect();
            Some(discrete_bounds(values.len(), *center, |n| values[n]))
        }
        RegionSpec::CircleContour { center, radius } => {
            Some(discrete_bounds(count, *center, |n| {
                circle_contour_eigenvalue(n, *radius)
            }))
        }
        RegionSpec::SegmentContour { from, to } => Some(segment_bounds(from.dist(*to))),
        RegionSpec::Point(pt) => Some(point_bounds(*pt)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region_ops::assemble_region_operator;
    use crate::spectra::eigendecompose;

    // Exact λ_n(a) = (−1)ⁿ Σ_k C(n,k) (−2)^k / k! · γ(k+1, a²),
    // with γ(k+1, x) = k! (1 − e^{−x} Σ_{j≤k} x^j/j!).
    fn disk_eigenvalue_series(n: usize, a: f64) -> f64 {
        let x = a * a;
        let mut sum = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            let mut partial = 0.0;
            let mut term = 1.0;
            for j in 0..=k {
                if j > 0 {
                    term *= x / j as f64;
                }
                partial += term;
            }
            let lower_gamma_over_fact = 1.0 - libm::exp(-x) * partial;
            sum += binom * (-2.0f64).powi(k as i32) * lower_gamma_over_fact;
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        if n.is_multiple_of(2) {
            sum
        } else {
            -sum
        }
    }

    #[test]
    fn disk_eigenvalue_values() {
        let e = libm::exp(-1.0);
        assert!((disk_eigenvalue(0, 1.0) - (1.0 - e)).abs() < 1e-14);
        assert!((disk_eigenvalue(1, 1.0) - (1.0 - 3.0 * e)).abs() < 1e-13);
        assert!((disk_eigenvalue(1, 1.0) + 0.103_638_323_514_327).abs() < 1e-13);
        // mpmath, 40 digits
        assert!((disk_eigenvalue(3, 1.0) - 0.141_614_637_266_634_6).abs() < 1e-13);
        assert!((disk_eigenvalue(5, 1.0) - 0.043_513_452_954_249_96).abs() < 1e-13);
        for n in 0..=3 {
            assert!((disk_eigenvalue(n, 6.0) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn disk_eigenvalue_matches_series_oracle() {
        for n in 0..12 {
            for a in [0.3, 1.0, 1.7] {
                let d = disk_eigenvalue(n, a) - disk_eigenvalue_series(n, a);
                assert!(d.abs() < 1e-11, "n {n} a {a}: {d:e}");
            }
        }
    }

    #[test]
    fn lambda_zero_is_maximal() {
        for a in [0.25, 0.5, 1.0, 2.0, 3.0, 4.0] {
            let b = disk_bounds(a, 64);
            assert_eq!(b.upper_attained_by, Extremizer::NumberState(0), "a = {a}");
        }
    }

    #[test]
    fn disk_minimum_index_scan() {
        // mpmath scan over n < 65
        for (a, n_min, v) in [
            (0.5, 1, -0.168_201_174_607_107_3),
            (2.0, 4, -0.190_516_527_767_721_7),
            (3.0, 7, -0.222_451_681_355_415_4),
            (4.0, 11, -0.234_238_741_697_553_3),
        ] {
            let b = disk_bounds(a, 64);
            assert_eq!(b.lower_attained_by, Extremizer::NumberState(n_min));
            assert!((b.lower - v).abs() < 1e-11);
        }
    }

    #[test]
    fn circle_eigenvalue_values() {
        assert!((circle_contour_eigenvalue(0, 1.0) - 2.0 * libm::exp(-1.0)).abs() < 1e-15);
        assert!((circle_contour_eigenvalue(0, 1.0) - 0.735_759).abs() < 1e-6);
        for n in 0..8 {
            assert_eq!(circle_contour_eigenvalue(n, 0.0), 0.0);
        }
    }

    #[test]
    fn circle_is_derivative_of_disk() {
        let h = 1e-4;
        for n in 0..=10 {
            for a in [0.5, 1.0, 2.0] {
                let fd = (disk_eigenvalue(n, a + h) - disk_eigenvalue(n, a - h)) / (2.0 * h);
                assert!((circle_contour_eigenvalue(n, a) - fd).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn segment_values() {
        let l = 3.0;
        assert!(segment_spectrum(l, PI / 3.0, SegmentBranch::Cosine).abs() < 1e-15);
        assert_eq!(segment_spectrum(l, 0.0, SegmentBranch::Cosine), 3.0 / PI);
        assert_eq!(segment_spectrum(l, 0.0, SegmentBranch::Sine), -3.0 / PI);
        assert!((segment_spectrum(l, 1e-9, SegmentBranch::Cosine) - 3.0 / PI).abs() < 1e-12);

        // 1D minimization oracle: dense scan then golden-section refinement
        let f = |k: f64| segment_spectrum(l, k, SegmentBranch::Cosine);
        let kmax = 20.0 / l;
        let mut best = (kmax, f(kmax));
        for i in 1..=20_000 {
            let k = kmax * i as f64 / 20_000.0;
            if f(k) < best.1 {
                best = (k, f(k));
            }
        }
        let (mut lo, mut hi) = (best.0 - kmax / 20_000.0, best.0 + kmax / 20_000.0);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let c = hi - g * (hi - lo);
            let d = lo + g * (hi - lo);
            if f(c) < f(d) {
                hi = d
            } else {
                lo = c
            }
        }
        let kmin = 0.5 * (lo + hi);
        assert!((kmin * l - 4.493_409_457_909_064).abs() < 1e-6);
        assert!((f(kmin) + 0.207_442_834_413_617_6).abs() < 1e-12);
        assert!(
            (segment_spectrum(l, 4.4934 / 3.0, SegmentBranch::Cosine) + 0.207_443).abs() < 1e-6
        );

        let b = segment_bounds(l);
        assert_eq!((b.lower, b.upper), (-3.0 / PI, 3.0 / PI));
        assert!(!b.lower_attainable && !b.upper_attainable);
    }

    #[test]
    fn assembled_disk_matches_analytic() {
        // Numeric/analytic agreement for n ≤ dim − 10.
        for a in [0.5, 1.0, 3.0] {
            let op = assemble_region_operator(&RegionSpec::disk(a), 64, 64).unwrap();
            for n in 0..54 {
                let d = op.matrix.get(n, n).re - disk_eigenvalue(n, a);
                assert!(d.abs() < 1e-8, "a {a} n {n}: {d:e}");
            }
        }
    }

    #[test]
    fn assembled_circle_matches_analytic() {
        let op = assemble_region_operator(&RegionSpec::circle(1.2), 32, 64).unwrap();
        let r = eigendecompose(&op).unwrap();
        let mut mu: Vec<f64> = (0..32).map(|n| circle_contour_eigenvalue(n, 1.2)).collect();
        mu.sort_by(f64::total_cmp);
        for (x, y) in r.eigenvalues.iter().zip(&mu) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn abel_trace_partial_sums() {
        // Σ_{n<N} λ_n(2) oscillates about a²/2 = 2; mpmath reference values.
        let s64: f64 = (0..64).map(|n| disk_eigenvalue(n, 2.0)).sum();
        assert!((s64 - 1.997_179_541_681_831).abs() < 1e-9);
        let s128: f64 = (0..128).map(|n| disk_eigenvalue(n, 2.0)).sum();
        assert!((s128 - 1.998_596_694_518_511).abs() < 1e-9);
    }
}
