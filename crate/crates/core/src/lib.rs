#![no_std]

//! Sharp bounds on the quasiprobability mass of Wigner functions over
//! phase-space regions.
//!
//! The integral of a Wigner function `W_ρ` over a region `R` equals the
//! expectation value of a Hermitian "region operator" `R̂` obtained by Weyl
//! quantization of the region's characteristic function. The best possible
//! lower and upper bounds on that integral, over all states, are therefore
//! the extremes of the spectrum of `R̂`.
//!
//! This crate builds those operators in a truncated number-state (Fock)
//! basis and extracts their spectra:
//!
//! - [`specfun`]: Laguerre polynomials, normalized Hermite functions and
//!   Gauss–Legendre rules.
//! - [`fock`]: the Weyl kernel `⟨m|Ŵ(q,p)|n⟩`, density matrices and Wigner
//!   functions.
//! - [`regions`]: disks, annuli, rectangles, polygons, contours, points and
//!   their quadrature decompositions.
//! - [`region_ops`]: region, contour and point operators; Weyl quantization
//!   of arbitrary symbols and its inverse; tensor products.
//! - [`spectra`]: Hermitian eigendecompositions, bounds on a dimension
//!   ladder, and closed-form spectra for disks, circles and segments.
//! - [`grid`]: sampled Wigner data, midpoint-rule masses and consistency
//!   verdicts.
//!
//! Units are dimensionless with `ħ = 1`; Wigner functions integrate to one
//! and satisfy `|W| ≤ 1/π`.
//!
//! The crate is `no_std` and only needs `alloc`.

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod fock;
pub mod grid;
pub mod region_ops;
pub mod regions;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, FockMatrix, PhasePoint};
pub use grid::{GridMass, Verdict, WignerGrid};
pub use region_ops::RegionOperator;
pub use regions::{QuadratureDecomposition, RegionSpec};
pub use spectra::{BoundsResult, Extremizer, SpectrumReport};

pub use num_complex::Complex64;

/// Default number of Fock states used when no dimension is given.
pub const DEFAULT_DIM: usize = 64;
/// Default quadrature resolution (radial or linear node count).
pub const DEFAULT_RESOLUTION: usize = 64;
