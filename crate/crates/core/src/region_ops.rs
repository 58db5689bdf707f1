//! Region, contour and point operators in the number basis; Weyl
//! quantization of phase-space symbols and its inverse; tensor products.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::{self, ClosedFormKernel, FockMatrix, PhasePoint, WeylKernel};
use crate::regions::RegionSpec;
use crate::{Error, Result};

/// Hermiticity defect above which an assembly is considered under-resolved.
pub const MAX_ASSEMBLY_RESIDUAL: f64 = 1e-6;
/// Largest dimension of a tensor-product operator.
pub const MAX_PRODUCT_DIM: usize = 4096;

/// The quantized characteristic function of a region, contour or point.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionOperator {
    pub matrix: FockMatrix,
    pub region: RegionSpec,
    pub dim: usize,
    pub resolution: usize,
    /// Hermiticity defect of the raw quadrature sum, before symmetrization.
    pub assembly_residual: f64,
}

impl RegionOperator {
    /// Compression onto the first `dim` number states.
    pub fn truncated(&self, dim: usize) -> RegionOperator {
        let dim = dim.min(self.dim);
        RegionOperator {
            matrix: self.matrix.principal(dim),
            region: self.region.clone(),
            dim,
            resolution: self.resolution,
            assembly_residual: self.assembly_residual,
        }
    }
}

/// `Ŝ_{mn} = Σ_k w_k K_{mn}(pt_k)` over the region's quadrature decomposition.
pub fn assemble_region_operator(
    region: &RegionSpec,
    dim: usize,
    resolution: usize,
) -> Result<RegionOperator> {
    assemble_with_kernel(&ClosedFormKernel, region, dim, resolution)
}

/// [`assemble_region_operator`] with an explicit kernel realization.
pub fn assemble_with_kernel<K: WeylKernel>(
    kernel: &K,
    region: &RegionSpec,
    dim: usize,
    resolution: usize,
) -> Result<RegionOperator> {
    let (matrix, residual) = quantize_with_kernel(kernel, |_| 1.0, region, dim, resolution)?;
    Ok(RegionOperator {
        matrix,
        region: region.clone(),
        dim,
        resolution,
        assembly_residual: residual,
    })
}

/// The point operator `P̂ = Ŵ(q₀, p₀)`.
pub fn point_operator(pt: PhasePoint, dim: usize) -> Result<RegionOperator> {
    assemble_region_operator(&RegionSpec::Point(pt), dim, 4)
}

/// Weyl quantization `Â = ∫ f Ŵ` restricted to a bounded support:
/// `Â_{mn} = Σ_k w_k f(pt_k) K_{mn}(pt_k)`.
pub fn quantize_symbol<F: Fn(PhasePoint) -> f64>(
    f: F,
    support: &RegionSpec,
    dim: usize,
    resolution: usize,
) -> Result<FockMatrix> {
    quantize_with_kernel(&ClosedFormKernel, f, support, dim, resolution).map(|(m, _)| m)
}

fn quantize_with_kernel<K: WeylKernel, F: Fn(PhasePoint) -> f64>(
    kernel: &K,
    f: F,
    support: &RegionSpec,
    dim: usize,
    resolution: usize,
) -> Result<(FockMatrix, f64)> {
    if dim == 0 {
        return Err(Error::InvalidRegion("dimension must be at least 1".into()));
    }
    if support.degrees_of_freedom() != 1 {
        return Err(Error::Unsupported(
            "tensor_product regions are assembled per factor; see tensor_product".into(),
        ));
    }
    let decomposition = support.decompose(resolution)?;
    let mut acc = DMatrix::zeros(dim, dim);
    for &(pt, w) in &decomposition.points {
        let weight = w * f(pt);
        if weight != 0.0 {
            kernel.accumulate(pt, weight, &mut acc);
        }
    }
    let mut matrix = FockMatrix::from_matrix(acc)?;
    if !matrix.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = matrix.symmetrize();
    if residual > MAX_ASSEMBLY_RESIDUAL {
        return Err(Error::AssemblyResidual(residual));
    }
    Ok((matrix, residual))
}

/// The Weyl symbol `A(q,p) = 2π Tr(Â Ŵ(q,p))` (with `ħ = 1`).
pub fn operator_symbol(op: &FockMatrix, pt: PhasePoint) -> Complex64 {
    let k = fock::kernel_matrix(pt, op.dim());
    op.trace_product(&k) * (2.0 * PI)
}

/// Kronecker product of single-DOF operators, in the given factor order.
pub fn tensor_product(factors: &[RegionOperator]) -> Result<RegionOperator> {
    if factors.len() < 2 {
        return Err(Error::InvalidRegion(
            "tensor_product needs at least 2 factors".into(),
        ));
    }
    let mut dim = 1usize;
    for f in factors {
        if f.region.degrees_of_freedom() != 1 {
            return Err(Error::InvalidRegion(
                "tensor_product factors must be single-DOF operators".into(),
            ));
        }
        dim = dim.saturating_mul(f.dim);
    }
    if dim > MAX_PRODUCT_DIM {
        return Err(Error::DimensionOverflow {
            dim,
            limit: MAX_PRODUCT_DIM,
        });
    }
    let mut matrix = factors[0].matrix.clone();
    for f in &factors[1..] {
        matrix = matrix.kronecker(&f.matrix);
    }
    Ok(RegionOperator {
        matrix,
        region: RegionSpec::TensorProduct(factors.iter().map(|f| f.region.clone()).collect()),
        dim,
        resolution: factors.iter().map(|f| f.resolution).max().unwrap_or(0),
        assembly_residual: factors
            .iter()
            .map(|f| f.assembly_residual)
            .fold(0.0, f64::max),
    })
}

/// Position operator `(a + a†)/√2` on `dim` states; test and reference helper.
pub fn position_operator(dim: usize) -> FockMatrix {
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let v = Complex64::new(libm::sqrt((n as f64 + 1.0) / 2.0), 0.0);
        m[(n, n + 1)] = v;
        m[(n + 1, n)] = v;
    }
    FockMatrix::hermitian_from_matrix(m).expect("real symmetric")
}

/// `diag(0, 1, …, dim−1)`.
pub fn number_operator(dim: usize) -> FockMatrix {
    let diag: Vec<f64> = (0..dim).map(|n| n as f64).collect();
    FockMatrix::from_real_diagonal(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{DensityMatrix, IntegralKernel};
    use alloc::vec;
    use core::f64::consts::FRAC_1_PI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn disk_operator_diagonal_entries() {
        let op = assemble_region_operator(&RegionSpec::disk(1.0), 32, 64).unwrap();
        let e = libm::exp(-1.0);
        assert!((op.matrix.get(0, 0).re - (1.0 - e)).abs() < 1e-8);
        assert!((op.matrix.get(0, 0).re - 0.632_121).abs() < 1e-6);
        // (−1)¹ ∫₀¹ (1−2u) e^{−u} du = 1 − 3/e
        assert!((op.matrix.get(1, 1).re - (1.0 - 3.0 * e)).abs() < 1e-8);
        let mut worst = 0.0f64;
        for m in 0..32 {
            for n in 0..32 {
                if m != n {
                    worst = worst.max(op.matrix.get(m, n).norm());
                }
            }
        }
        assert!(worst < 1e-8, "off-diagonal {worst:e}");
    }

    #[test]
    fn segment_couples_equal_parity_only() {
        let op = assemble_region_operator(&RegionSpec::p_axis_segment(3.0), 32, 64).unwrap();
        for m in 0..32 {
            for n in 0..32 {
                if (m + n) % 2 == 1 {
                    assert!(op.matrix.get(m, n).norm() < 1e-13, "({m},{n})");
                }
            }
        }
        assert!(op.matrix.get(0, 0).re > 0.0);
    }

    #[test]
    fn point_operator_at_origin_is_parity() {
        let op = point_operator(PhasePoint::ORIGIN, 16).unwrap();
        for m in 0..16 {
            for n in 0..16 {
                let expect = if m == n {
                    if n % 2 == 0 {
                        FRAC_1_PI
                    } else {
                        -FRAC_1_PI
                    }
                } else {
                    0.0
                };
                assert!((op.matrix.get(m, n).re - expect).abs() < 1e-10);
                assert!(op.matrix.get(m, n).im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn integral_kernel_assembly_records_residual() {
        let region = RegionSpec::Rectangle {
            min: PhasePoint::new(-1.0, -0.5),
            max: PhasePoint::new(1.0, 0.5),
        };
        let oracle = IntegralKernel::new(12);
        let slow = assemble_with_kernel(&oracle, &region, 12, 16).unwrap();
        let fast = assemble_region_operator(&region, 12, 16).unwrap();
        assert!(slow.assembly_residual < 1e-12);
        assert_eq!(fast.assembly_residual, 0.0);
        for m in 0..12 {
            for n in 0..12 {
                assert!((slow.matrix.get(m, n) - fast.matrix.get(m, n)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn polygon_and_rectangle_agree() {
        let rect = RegionSpec::Rectangle {
            min: PhasePoint::new(0.0, 0.0),
            max: PhasePoint::new(1.0, 1.0),
        };
        let poly = RegionSpec::Polygon {
            vertices: vec![
                PhasePoint::new(0.0, 0.0),
                PhasePoint::new(1.0, 0.0),
                PhasePoint::new(1.0, 1.0),
                PhasePoint::new(0.0, 1.0),
            ],
        };
        let a = assemble_region_operator(&rect, 24, 24).unwrap();
        let b = assemble_region_operator(&poly, 24, 24).unwrap();
        for m in 0..24 {
            for n in 0..24 {
                assert!((a.matrix.get(m, n) - b.matrix.get(m, n)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn quantize_constant_is_region_operator() {
        let disk = RegionSpec::disk(1.3);
        let q = quantize_symbol(|_| 1.0, &disk, 16, 32).unwrap();
        let s = assemble_region_operator(&disk, 16, 32).unwrap();
        assert_eq!(q, s.matrix);
    }

    #[test]
    fn quantize_harmonic_symbol() {
        // Weyl symbol of q̂² + p̂² is 2n + 1 on |n⟩
        let h = quantize_symbol(|p| p.norm_sqr(), &RegionSpec::disk(8.0), 8, 64).unwrap();
        for n in 0..=4 {
            assert!((h.get(n, n).re - (2.0 * n as f64 + 1.0)).abs() < 5e-3);
        }
    }

    #[test]
    fn quantize_position_symbol() {
        let support = RegionSpec::Rectangle {
            min: PhasePoint::new(-6.0, -6.0),
            max: PhasePoint::new(6.0, 6.0),
        };
        let x = quantize_symbol(|p| p.q, &support, 8, 64).unwrap();
        let exact = position_operator(8);
        for m in 0..8 {
            for n in 0..8 {
                assert!((x.get(m, n) - exact.get(m, n)).norm() < 5e-3, "({m},{n})");
            }
        }
    }

    #[test]
    fn symbols() {
        let vac = DensityMatrix::number_state(0, 8).unwrap();
        let s = operator_symbol(vac.matrix(), PhasePoint::ORIGIN);
        assert!((s.re - 2.0).abs() < 1e-14 && s.im.abs() < 1e-14);

        // |0⟩⟨1| + |1⟩⟨0| has symbol 2·2 Re K_10 = 4√2 q e^{−r²}
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(1.0, 0.0);
        let op = FockMatrix::hermitian_from_matrix(m).unwrap();
        let pt = PhasePoint::new(0.6, -0.4);
        let expect = 4.0 * core::f64::consts::SQRT_2 * pt.q * libm::exp(-pt.norm_sqr());
        assert!((operator_symbol(&op, pt).re - expect).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let v: Vec<Complex64> = (0..10)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let v: Vec<Complex64> = v.iter().map(|z| z / n).collect();
            let rho = DensityMatrix::pure(&v).unwrap();
            let pt = PhasePoint::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let sym = operator_symbol(rho.matrix(), pt);
            let w = fock::wigner_function(&rho, pt).unwrap();
            assert!((sym.re - 2.0 * PI * w).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_product_structure() {
        let a = assemble_region_operator(&RegionSpec::disk(1.0), 4, 16).unwrap();
        let b = assemble_region_operator(&RegionSpec::p_axis_segment(3.0), 5, 16).unwrap();
        let t = tensor_product(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(t.dim, 20);
        assert_eq!(t.region.dimension(), 3);
        // index (i, j) ↦ i·5 + j
        assert_eq!(t.matrix.get(7, 13), a.matrix.get(1, 2) * b.matrix.get(2, 3));
        assert!(tensor_product(core::slice::from_ref(&a)).is_err());
        let big = assemble_region_operator(&RegionSpec::disk(1.0), 65, 8).unwrap();
        assert!(matches!(
            tensor_product(&[big.clone(), big]),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn rejects_tensor_regions_and_empty_dims() {
        let cyl =
            RegionSpec::TensorProduct(vec![RegionSpec::disk(1.0), RegionSpec::p_axis_segment(1.0)]);
        assert!(assemble_region_operator(&cyl, 4, 8).is_err());
        assert!(assemble_region_operator(&RegionSpec::disk(1.0), 0, 8).is_err());
    }
}
