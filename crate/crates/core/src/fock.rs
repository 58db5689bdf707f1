//! Number-state representation: operators, density matrices and the Weyl
//! kernel `K_{mn}(q,p) = ⟨m|Ŵ(q,p)|n⟩`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_PI, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::specfun::{self, QuadratureRule};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance on the Hermiticity defect of a matrix flagged Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|Tr ρ − 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a positive semidefinite state.
pub const PSD_TOL: f64 = 1e-10;

/// A point `(q, p)` of the phase plane, in units with `ħ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0.0, p: 0.0 };

    pub const fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.q * self.q + self.p * self.p
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn dist(&self, other: PhasePoint) -> f64 {
        (*self - other).norm()
    }

    /// Counter-clockwise rotation by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> PhasePoint {
        let (s, c) = libm::sincos(angle);
        PhasePoint::new(c * self.q - s * self.p, s * self.q + c * self.p)
    }
}

impl core::ops::Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.q + rhs.q, self.p + rhs.p)
    }
}

impl core::ops::Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.q - rhs.q, self.p - rhs.p)
    }
}

impl core::ops::Mul<PhasePoint> for f64 {
    type Output = PhasePoint;
    fn mul(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self * rhs.q, self * rhs.p)
    }
}

/// A complex `N×N` matrix over the number states `|0⟩ … |N−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    data: DMatrix<Complex64>,
    hermitian: bool,
}

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
        FockMatrix {
            data: DMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        FockMatrix {
            data: DMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        FockMatrix {
            data: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(diag[i], 0.0)
                } else {
                    ZERO
                }
            }),
            hermitian: true,
        }
    }

    /// Entry `(m, n)` from `f(m, n)`, without any Hermiticity claim.
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(dim: usize, f: F) -> Self {
        FockMatrix {
            data: DMatrix::from_fn(dim, dim, f),
            hermitian: false,
        }
    }

    /// Wraps a square matrix without any Hermiticity claim.
    pub fn from_matrix(data: DMatrix<Complex64>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, expected square",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(FockMatrix {
            data,
            hermitian: false,
        })
    }

    /// Wraps a square matrix and flags it Hermitian after checking the defect.
    pub fn hermitian_from_matrix(data: DMatrix<Complex64>) -> Result<Self> {
        let mut m = Self::from_matrix(data)?;
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        m.hermitian = true;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.data[(m, n)]
    }

    /// `max |A_mn − conj(A_nm)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Replaces the matrix by `(A + A†)/2` and returns the defect it had.
    pub fn symmetrize(&mut self) -> f64 {
        let defect = self.hermiticity_defect();
        let adj = self.data.adjoint();
        self.data += adj;
        self.data *= Complex64::new(0.5, 0.0);
        self.hermitian = true;
        defect
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Leading `dim×dim` block (compression onto the first `dim` states).
    pub fn principal(&self, dim: usize) -> FockMatrix {
        let dim = dim.min(self.dim());
        FockMatrix {
            data: self.data.view((0, 0), (dim, dim)).into_owned(),
            hermitian: self.hermitian,
        }
    }

    /// Zero-padded to `dim` states.
    pub fn embedded(&self, dim: usize) -> FockMatrix {
        let n = self.dim();
        if dim <= n {
            return self.principal(dim);
        }
        let mut data = DMatrix::zeros(dim, dim);
        data.view_mut((0, 0), (n, n)).copy_from(&self.data);
        FockMatrix {
            data,
            hermitian: self.hermitian,
        }
    }

    pub fn kronecker(&self, other: &FockMatrix) -> FockMatrix {
        FockMatrix {
            data: self.data.kronecker(&other.data),
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &FockMatrix) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let n = self.dim();
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.data[(i, j)] * other.data[(j, i)];
            }
        }
        acc
    }
}

/// A density operator `ρ̂`: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: FockMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants; errors carry the measured defect.
    pub fn new(matrix: FockMatrix) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::InvalidState("empty density matrix".into()));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let mut matrix = matrix;
        matrix.symmetrize();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace is {trace} (defect {:e})",
                (trace - 1.0).abs()
            )));
        }
        let min_eig = matrix
            .data
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (smallest eigenvalue {min_eig:e})"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let n = amplitudes.len();
        let data = DMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::new(FockMatrix {
            data,
            hermitian: false,
        })
    }

    /// `|n⟩⟨n|` in a space of `dim` states.
    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidState(format!(
                "number state {n} outside dimension {dim}"
            )));
        }
        let mut amps = alloc::vec![ZERO; dim];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::pure(&amps)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(FockMatrix::from_real_diagonal(&alloc::vec![
            1.0 / dim as f64;
            dim
        ]))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &FockMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `Tr(ρ A)` with `A` compressed or zero-padded to the state's dimension.
    pub fn expectation(&self, op: &FockMatrix) -> Complex64 {
        let n = self.dim();
        if op.dim() == n {
            self.matrix.trace_product(op)
        } else {
            self.matrix.trace_product(&op.embedded(n))
        }
    }

    /// The state in a space of `dim ≥ self.dim()` states.
    pub fn embedded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::InvalidState(format!(
                "cannot compress a {}-state density matrix to {dim} states",
                self.dim()
            )));
        }
        Ok(DensityMatrix {
            matrix: self.matrix.embedded(dim),
        })
    }
}

/// A coherent state truncated to a finite number basis.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub state: DensityMatrix,
    /// Norm of the truncated amplitude vector before renormalization.
    pub norm_before: f64,
    /// Set when `norm_before < 0.999`: the truncation is too severe for `α`.
    pub truncation_warning: bool,
}

/// Pure coherent state `|α⟩` with amplitudes `e^{-|α|²/2} αⁿ/√n!`,
/// renormalized after truncation to `dim` states.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<CoherentState> {
    if dim == 0 {
        return Err(Error::InvalidState("dimension must be at least 1".into()));
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new(libm::exp(-0.5 * alpha.norm_sqr()), 0.0);
    amps.push(c);
    for n in 1..dim {
        c = c * alpha / libm::sqrt(n as f64);
        amps.push(c);
    }
    let norm_before = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
    for a in &mut amps {
        *a /= norm_before;
    }
    Ok(CoherentState {
        state: DensityMatrix::pure(&amps)?,
        norm_before,
        truncation_warning: norm_before < 0.999,
    })
}

/// Source of Weyl-kernel matrices `K(q,p)` in the number basis.
pub trait WeylKernel {
    /// Adds `weight · K(pt)` into the `dim×dim` accumulator `acc`.
    fn accumulate(&self, pt: PhasePoint, weight: f64, acc: &mut DMatrix<Complex64>);

    fn matrix(&self, pt: PhasePoint, dim: usize) -> DMatrix<Complex64> {
        let mut acc = DMatrix::zeros(dim, dim);
        self.accumulate(pt, 1.0, &mut acc);
        acc
    }
}

/// Closed form of the kernel through associated Laguerre functions:
///
/// `K_{mn}(q,p) = ((−1)ⁿ/π) √(n!/m!) (√2 (q+ip))^{m−n} e^{−r²} L_n^{m−n}(2r²)`
/// for `m ≥ n`, with `K_{nm} = conj(K_{mn})`.
///
/// Agrees with [`IntegralKernel`] to 1e−10 (checked in the tests).
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedFormKernel;

impl WeylKernel for ClosedFormKernel {
    fn accumulate(&self, pt: PhasePoint, weight: f64, acc: &mut DMatrix<Complex64>) {
        let dim = acc.nrows();
        let r2 = pt.norm_sqr();
        let x = 2.0 * r2;
        let r = libm::sqrt(r2);
        let unit = if r > 0.0 {
            Complex64::new(pt.q / r, pt.p / r)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let scale = weight * FRAC_1_PI;
        let mut radial = Vec::with_capacity(dim);
        let mut phase = Complex64::new(1.0, 0.0);
        for alpha in 0..dim {
            specfun::normalized_laguerre_functions(dim - alpha, alpha, x, &mut radial);
            for (n, &v) in radial.iter().enumerate() {
                let signed = if n % 2 == 0 { scale * v } else { -scale * v };
                let z = phase * signed;
                acc[(n + alpha, n)] += z;
                if alpha > 0 {
                    acc[(n, n + alpha)] += z.conj();
                }
            }
            phase *= unit;
        }
    }
}

/// The kernel as the position-space integral
/// `K_{mn}(q,p) = (1/π) ∫ ψ_m(q+y) ψ_n(q−y) e^{2ipy} dy`,
/// evaluated by Gauss–Legendre quadrature on `|y| ≤ √(2N) + 6`.
///
/// Every entry is computed independently, so Hermiticity is not built in.
#[derive(Debug, Clone)]
pub struct IntegralKernel {
    dim: usize,
    rule: QuadratureRule,
}

impl IntegralKernel {
    /// Kernel for `dim` states, with a node count adequate for `|q|,|p| ≤ 8`.
    pub fn new(dim: usize) -> Self {
        let half_width = Self::half_width(dim);
        let band = 2.0 * libm::sqrt(2.0 * dim as f64 + 1.0) + 16.0;
        let order = libm::ceil(half_width * band) as usize + 64;
        Self::with_order(dim, order)
    }

    pub fn with_order(dim: usize, order: usize) -> Self {
        let y = Self::half_width(dim);
        let rule = specfun::gauss_legendre(order.max(1), -y, y).expect("non-empty interval");
        IntegralKernel { dim, rule }
    }

    /// `Y(N) = √(2N) + 6`.
    pub fn half_width(dim: usize) -> f64 {
        libm::sqrt(2.0 * dim as f64) + 6.0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn element(&self, m: usize, n: usize, pt: PhasePoint) -> Complex64 {
        let count = m.max(n) + 1;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut acc = ZERO;
        for (y, w) in self.rule.iter() {
            specfun::hermite_functions_into(count, pt.q + y, &mut a);
            specfun::hermite_functions_into(count, pt.q - y, &mut b);
            let (s, c) = libm::sincos(2.0 * pt.p * y);
            acc += Complex64::new(c, s) * (w * a[m] * b[n]);
        }
        acc * FRAC_1_PI
    }
}

impl WeylKernel for IntegralKernel {
    fn accumulate(&self, pt: PhasePoint, weight: f64, acc: &mut DMatrix<Complex64>) {
        let dim = acc.nrows();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (y, w) in self.rule.iter() {
            specfun::hermite_functions_into(dim, pt.q + y, &mut a);
            specfun::hermite_functions_into(dim, pt.q - y, &mut b);
            let (s, c) = libm::sincos(2.0 * pt.p * y);
            let f = Complex64::new(c, s) * (w * weight * FRAC_1_PI);
            for n in 0..dim {
                let fb = f * b[n];
                for m in 0..dim {
                    acc[(m, n)] += fb * a[m];
                }
            }
        }
    }
}

/// `K_{mn}(q,p) = ⟨m|Ŵ(q,p)|n⟩`, normalized so that `W_ρ = Σ ρ_{nm} K_{mn}`.
pub fn kernel_element(m: usize, n: usize, pt: PhasePoint) -> Complex64 {
    let (hi, lo, conj) = if m >= n { (m, n, false) } else { (n, m, true) };
    let alpha = hi - lo;
    let mut radial = Vec::with_capacity(lo + 1);
    specfun::normalized_laguerre_functions(lo + 1, alpha, 2.0 * pt.norm_sqr(), &mut radial);
    let theta = libm::atan2(pt.p, pt.q);
    let (s, c) = libm::sincos(alpha as f64 * theta);
    let sign = if lo % 2 == 0 { 1.0 } else { -1.0 };
    let z = Complex64::new(c, s) * (sign * FRAC_1_PI * radial[lo]);
    if conj {
        z.conj()
    } else {
        z
    }
}

/// All kernel entries `K_{mn}(pt)` for `m, n < dim`.
pub fn kernel_matrix(pt: PhasePoint, dim: usize) -> FockMatrix {
    FockMatrix {
        data: ClosedFormKernel.matrix(pt, dim),
        hermitian: true,
    }
}

/// `W_ρ(q,p) = Tr(Ŵ(q,p) ρ̂)`.
pub fn wigner_function(rho: &DensityMatrix, pt: PhasePoint) -> Result<f64> {
    let k = kernel_matrix(pt, rho.dim());
    let w = rho.matrix().trace_product(&k);
    if w.im.abs() > 1e-8 {
        return Err(Error::ImaginaryResidue(w.im));
    }
    Ok(w.re)
}

/// Largest possible `|W|`.
pub const WIGNER_BOUND: f64 = FRAC_1_PI;

/// `1/(2π)`, the formal trace of `Ŵ(q,p)`.
pub const KERNEL_TRACE: f64 = 0.5 / PI;
