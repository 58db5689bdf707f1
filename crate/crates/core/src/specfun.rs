//! Special functions and Gauss–Legendre quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Rescaling threshold for recurrences that can leave the f64 range.
const RESCALE: f64 = 1e150;
const LN_RESCALE: f64 = 345.387_763_949_107; // ln(1e150)

/// Associated Laguerre polynomial `L_n^α(x)` by the three-term recurrence.
///
/// `alpha = 0` gives the ordinary Laguerre polynomial.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized harmonic-oscillator eigenfunction
/// `ψ_n(x) = π^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x²/2}`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut out = Vec::with_capacity(n + 1);
    hermite_functions_into(n + 1, x, &mut out);
    out[n]
}

/// `ψ_0(x), …, ψ_{count-1}(x)`.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    hermite_functions_into(count, x, &mut out);
    out
}

/// Fills `out` with `ψ_0(x) … ψ_{count-1}(x)`.
///
/// The recurrence runs on the normalized functions with the Gaussian factor
/// carried as a logarithm, so neither overflow of `H_n` nor underflow of
/// `e^{-x²/2}` can occur for the orders used here (n ≤ 512 and beyond).
pub fn hermite_functions_into(count: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    if count == 0 {
        return;
    }
    // log of π^{-1/4} e^{-x²/2}
    let mut log_scale = -0.25 * libm::log(PI) - 0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(libm::exp(log_scale));
    let sqrt2x = core::f64::consts::SQRT_2 * x;
    for k in 0..count - 1 {
        let kf = k as f64;
        let next = (sqrt2x * cur - libm::sqrt(kf) * prev) / libm::sqrt(kf + 1.0);
        prev = cur;
        cur = next;
        if libm::fabs(cur) > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += LN_RESCALE;
        }
        out.push(scaled(cur, log_scale));
    }
}

#[inline]
fn scaled(value: f64, log_scale: f64) -> f64 {
    if value == 0.0 {
        return 0.0;
    }
    let sign = value.signum();
    sign * libm::exp(libm::log(libm::fabs(value)) + log_scale)
}

/// Values `√(n!/(n+α)!) x^{α/2} e^{-x/2} L_n^α(x)` for `n = 0..count`.
///
/// This is the radial factor of the Weyl kernel in the number basis. The
/// recurrence is run on the normalized functions and the prefactor is
/// applied in the log domain.
pub fn normalized_laguerre_functions(count: usize, alpha: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    if count == 0 {
        return;
    }
    let a = alpha as f64;
    if x <= 0.0 {
        // x^{α/2} vanishes unless α = 0, where L_n^0(0) = 1.
        let v = if alpha == 0 { 1.0 } else { 0.0 };
        out.resize(count, v);
        return;
    }
    let mut log_scale = 0.5 * a * libm::log(x) - 0.5 * x - 0.5 * libm::lgamma(a + 1.0);
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(libm::exp(log_scale));
    for k in 0..count - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - libm::sqrt(kf * (kf + a)) * prev)
            / libm::sqrt((kf + 1.0) * (kf + 1.0 + a));
        prev = cur;
        cur = next;
        if libm::fabs(cur) > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += LN_RESCALE;
        }
        out.push(scaled(cur, log_scale));
    }
}

/// A Gauss-type quadrature rule on a finite interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
    pub lower: f64,
    pub upper: f64,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// The same rule affinely mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Result<QuadratureRule> {
        check_interval(a, b)?;
        let scale = (b - a) / (self.upper - self.lower);
        let nodes = self
            .nodes
            .iter()
            .map(|&x| a + (x - self.lower) * scale)
            .collect();
        let weights = self.weights.iter().map(|&w| w * scale).collect();
        Ok(QuadratureRule {
            nodes,
            weights,
            order: self.order,
            lower: a,
            upper: b,
        })
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval { a, b });
    }
    Ok(())
}

/// Gauss–Legendre rule with `order` nodes on `[a, b]`.
///
/// Nodes are the roots of `P_order`, found by Newton iteration on the
/// Legendre recurrence starting from the Tricomi approximation.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    check_interval(a, b)?;
    if order == 0 {
        return Err(Error::InvalidInterval { a, b });
    }
    let n = order;
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if libm::fabs(dx) <= 1e-15 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x_i > 0 is the i-th largest root; store ascending
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = mid;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order,
        lower: a,
        upper: b,
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// Adaptive Gauss–Legendre integration to an absolute tolerance.
///
/// Each panel is compared against its two halves; panels whose estimates
/// disagree by more than their share of `abs_tol` are bisected.
pub fn adaptive_integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let rule = gauss_legendre(20, -1.0, 1.0).expect("fixed rule");
    let panel = |x0: f64, x1: f64, f: &mut F| -> f64 {
        let h = 0.5 * (x1 - x0);
        let c = 0.5 * (x0 + x1);
        rule.iter().map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    };
    let total = hi - lo;
    let mut stack = alloc::vec![(lo, hi, panel(lo, hi, &mut f), 0u32)];
    let mut acc = 0.0;
    let mut comp = 0.0;
    while let Some((x0, x1, whole, depth)) = stack.pop() {
        let xm = 0.5 * (x0 + x1);
        let left = panel(x0, xm, &mut f);
        let right = panel(xm, x1, &mut f);
        let refined = left + right;
        let share = abs_tol * (x1 - x0) / total;
        if libm::fabs(refined - whole) <= share || depth >= 48 {
            // Neumaier summation keeps the panel sum below the tolerance floor.
            let t = acc + refined;
            if libm::fabs(acc) >= libm::fabs(refined) {
                comp += (acc - t) + refined;
            } else {
                comp += (refined - t) + acc;
            }
            acc = t;
        } else {
            stack.push((xm, x1, right, depth + 1));
            stack.push((x0, xm, left, depth + 1));
        }
    }
    sign * (acc + comp)
}
