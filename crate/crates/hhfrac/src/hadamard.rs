//! Hadamard fractional integrals and derivatives as grid-to-grid operators.
//!
//! In `s = log(t/a)` the left integral of order `alpha` is the convolution
//! `(1/Gamma(alpha)) int_0^s (s - sigma)^(alpha-1) f(sigma) dsigma`, and the
//! right integral mirrors it from `s_max`. Both are discretized by
//! piecewise-constant product integration: on each cell the function is
//! frozen at the average of its endpoint samples and the singular kernel
//! moment is integrated exactly. The weights are nonnegative, the rule is
//! exact on constants, and it is first-order accurate for continuous inputs
//! (better in practice away from the singular endpoint).
//!
//! Endpoint policy: the left integral maps node 0 to 0 (integral over an
//! empty interval) and the left derivative reports NaN at node 0, which is
//! excluded from every norm and comparison; existence is only guaranteed on
//! the open-ended interval. The right-sided operators mirror this at the
//! last node.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{log_derivative, GridFn};
use crate::special::gamma_pos;

/// Order/type pair for the interpolated derivative, with the composite
/// order `gamma = alpha + beta - alpha*beta` stored alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl FracParams {
    /// Requires `0 < alpha < 1` and `0 <= beta <= 1`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain("order alpha must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::Domain("type beta must lie in [0, 1]"));
        }
        let gamma = alpha + beta - alpha * beta;
        Ok(FracParams { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Composite order `alpha + beta - alpha*beta`; governs the
    /// `(log t/a)^(gamma-1)` singularity of solutions at `t = a`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Outer integral order `gamma - alpha = beta (1 - alpha)`.
    pub fn outer_order(&self) -> f64 {
        self.gamma - self.alpha
    }

    /// Inner integral order `1 - gamma = (1 - beta)(1 - alpha)`.
    pub fn inner_order(&self) -> f64 {
        1.0 - self.gamma
    }
}

/// Cell values: average of the endpoint samples.
fn cell_averages(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

fn require_finite(f: &GridFn, what: &'static str) -> Result<()> {
    if f.values().iter().any(|v| !v.is_finite()) {
        Err(Error::NonFinite(what))
    } else {
        Ok(())
    }
}

/// Left convolution `out_j = (1/Gamma(a+1)) sum_k fbar_k [(s_j-s_k)^a - (s_j-s_{k+1})^a]`.
fn left_convolution(nodes: &[f64], fbar: &[f64], alpha: f64, uniform: bool) -> Vec<f64> {
    let m = fbar.len();
    let inv_gamma = 1.0 / gamma_pos(alpha + 1.0);
    let mut out = Vec::with_capacity(m + 1);
    out.push(0.0);
    if uniform {
        // Toeplitz path: kernel moments depend only on the node distance.
        let h = nodes[1] - nodes[0];
        let pw: Vec<f64> = (0..=m).map(|d| libm::pow(d as f64 * h, alpha)).collect();
        let kd: Vec<f64> = (0..m).map(|d| (pw[d + 1] - pw[d]) * inv_gamma).collect();
        for j in 1..=m {
            let mut acc = 0.0;
            for k in 0..j {
                acc += fbar[k] * kd[j - 1 - k];
            }
            out.push(acc);
        }
    } else {
        let mut dist = Vec::with_capacity(m + 1);
        for j in 1..=m {
            dist.clear();
            let sj = nodes[j];
            for &sk in &nodes[..=j] {
                dist.push(libm::pow(sj - sk, alpha));
            }
            let mut acc = 0.0;
            for k in 0..j {
                acc += fbar[k] * (dist[k] - dist[k + 1]);
            }
            out.push(acc * inv_gamma);
        }
    }
    out
}

/// Right convolution, mirroring [`left_convolution`] from the last node.
fn right_convolution(nodes: &[f64], fbar: &[f64], alpha: f64, uniform: bool) -> Vec<f64> {
    let m = fbar.len();
    let inv_gamma = 1.0 / gamma_pos(alpha + 1.0);
    let mut out = alloc::vec![0.0; m + 1];
    if uniform {
        let h = nodes[1] - nodes[0];
        let pw: Vec<f64> = (0..=m).map(|d| libm::pow(d as f64 * h, alpha)).collect();
        let kd: Vec<f64> = (0..m).map(|d| (pw[d + 1] - pw[d]) * inv_gamma).collect();
        for j in 0..m {
            let mut acc = 0.0;
            for k in j..m {
                acc += fbar[k] * kd[k - j];
            }
            out[j] = acc;
        }
    } else {
        let mut dist = Vec::with_capacity(m + 1);
        for j in 0..m {
            dist.clear();
            let sj = nodes[j];
            for &sk in &nodes[j..] {
                dist.push(libm::pow(sk - sj, alpha));
            }
            let mut acc = 0.0;
            for k in j..m {
                acc += fbar[k] * (dist[k + 1 - j] - dist[k - j]);
            }
            out[j] = acc * inv_gamma;
        }
    }
    out
}

/// Left Hadamard fractional integral of order `alpha > 0`.
pub fn left_integral(f: &GridFn, alpha: f64) -> Result<GridFn> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain("integral order must be positive"));
    }
    require_finite(f, "left integral input")?;
    let grid = f.grid();
    let fbar = cell_averages(f.values());
    let out = left_convolution(grid.nodes(), &fbar, alpha, grid.is_uniform());
    Ok(GridFn::from_raw(grid, out))
}

/// Right Hadamard fractional integral of order `alpha > 0`.
pub fn right_integral(f: &GridFn, alpha: f64) -> Result<GridFn> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain("integral order must be positive"));
    }
    require_finite(f, "right integral input")?;
    let grid = f.grid();
    let fbar = cell_averages(f.values());
    let out = right_convolution(grid.nodes(), &fbar, alpha, grid.is_uniform());
    Ok(GridFn::from_raw(grid, out))
}

/// Left Hadamard derivative of order `alpha` in (0, 1):
/// `(t d/dt) I^{1-alpha}`. Node 0 is reported as NaN.
pub fn left_derivative(f: &GridFn, alpha: f64) -> Result<GridFn> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain("derivative order must lie in (0, 1)"));
    }
    let integ = left_integral(f, 1.0 - alpha)?;
    let mut d = log_derivative(&integ)?;
    d.values_mut()[0] = f64::NAN;
    Ok(d)
}

/// Right Hadamard derivative of order `alpha` in (0, 1):
/// `-(t d/dt) I^{1-alpha}_{b-}`. The last node is reported as NaN.
pub fn right_derivative(f: &GridFn, alpha: f64) -> Result<GridFn> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain("derivative order must lie in (0, 1)"));
    }
    let integ = right_integral(f, 1.0 - alpha)?;
    let mut d = log_derivative(&integ)?;
    for v in d.values_mut().iter_mut() {
        *v = -*v;
    }
    let last = d.len() - 1;
    d.values_mut()[last] = f64::NAN;
    Ok(d)
}

/// Interpolated (two-parameter) derivative of order `alpha` and type `beta`:
/// `I^{beta(1-alpha)} (t d/dt) I^{(1-beta)(1-alpha)}`.
///
/// Computed through the exponent algebra `I^{gamma-alpha} . delta . I^{1-gamma}`
/// with `gamma = alpha + beta - alpha*beta`; `beta = 0` takes the plain
/// derivative path unchanged, `beta = 1` makes the inner integral the
/// identity.
pub fn hilfer_derivative(f: &GridFn, params: &FracParams) -> Result<GridFn> {
    if params.beta() == 0.0 {
        return left_derivative(f, params.alpha());
    }
    require_finite(f, "hilfer derivative input")?;
    let inner = params.inner_order();
    let regularized = if inner == 0.0 {
        f.clone()
    } else {
        left_integral(f, inner)?
    };
    let slope = log_derivative(&regularized)?;
    let outer = params.outer_order();
    if outer == 0.0 {
        Ok(slope)
    } else {
        left_integral(&slope, outer)
    }
}
