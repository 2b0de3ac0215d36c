//! The nonexistence proof's test-function machinery.
//!
//! A pair of cutoffs: in time, `phi1 = 1` on `[a, theta T]`, `0` beyond `T`,
//! with a smoothstep-power transition on `(theta T, T)` and
//! `theta = 1 - e^{-T}`; in space, `phi2 = Phi(|x| / T^alpha2)^mu`. The
//! module evaluates both cutoffs and their derivatives in closed form, the
//! right-sided fractional derivative of `phi1` through the integral of its
//! log-derivative, the transition-zone decay functional, and the annulus
//! scaling integral whose growth exponent the certificate predicts.
//!
//! The transition of `phi1` has width `T e^{-T}` in physical time (width
//! `~e^{-T}` in `s`), far below any grid resolution for moderate `T`. The
//! decay functional is therefore computed in scaled transition coordinates,
//! where the integrand is resolution-independent; the grid argument only
//! sets the quadrature density. The exact prefactor splits off as
//! `P(T)^{(1-alpha) p' + 1} e^{-T (1 - alpha p')}` with
//! `P(T) = -e^T log(theta) = 1 + e^{-T}/2 + ...`, so the large-`T` behavior
//! is carried analytically rather than through cancellations.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::cutoff::{cutoff_deriv, cutoff_second, cutoff_value, smoothstep, smoothstep_deriv};
use crate::error::{Error, Result};
use crate::grid::{GridFn, LogGrid};
use crate::hadamard::right_integral;
use crate::special::gamma_pos;

/// Parameters of the cutoff pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFnConfig {
    a: f64,
    horizon: f64,
    theta: f64,
    mu: f64,
    ell: f64,
    alpha2: f64,
    p: f64,
}

impl TestFnConfig {
    /// Builds the configuration for scale `T = horizon`, with
    /// `theta = 1 - e^{-T}` and the minimal admissible exponents
    /// `mu = 2p/(p-1)` and `ell = ceil(2p')`.
    pub fn new(a: f64, horizon: f64, alpha2: f64, p: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain("cutoff requires a > 0"));
        }
        if !(horizon > a) || !horizon.is_finite() {
            return Err(Error::Domain("cutoff requires T > a"));
        }
        if !(alpha2 > 0.0 && alpha2 < 1.0) {
            return Err(Error::Domain("cutoff requires alpha2 in (0, 1)"));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::Domain("cutoff requires p > 1"));
        }
        let theta = -libm::expm1(-horizon);
        if theta * horizon <= a {
            return Err(Error::Domain("cutoff plateau must reach past t = a"));
        }
        let pp = p / (p - 1.0);
        Ok(TestFnConfig {
            a,
            horizon,
            theta,
            mu: 2.0 * p / (p - 1.0),
            ell: libm::ceil(2.0 * pp),
            alpha2,
            p,
        })
    }

    /// Overrides the spatial cutoff power; `mu >= 2p/(p-1)` keeps the
    /// scaling integrand bounded.
    pub fn with_mu(mut self, mu: f64) -> Result<Self> {
        if mu < 2.0 * self.p / (self.p - 1.0) - 1e-12 {
            return Err(Error::Domain("mu must be at least 2p/(p-1)"));
        }
        self.mu = mu;
        Ok(self)
    }

    /// Overrides the temporal transition sharpness; `ell >= 2p'` keeps
    /// `|phi1'| / phi1^{1/p}` bounded on the transition.
    pub fn with_ell(mut self, ell: f64) -> Result<Self> {
        if ell < 2.0 * self.p / (self.p - 1.0) - 1e-12 {
            return Err(Error::Domain("ell must be at least 2p'"));
        }
        self.ell = ell;
        Ok(self)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// The scale `T`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// `1 - e^{-T}`, held exactly.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent `p' = p/(p-1)`.
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// Spatial cutoff radius `T^{alpha2}`.
    pub fn space_scale(&self) -> f64 {
        libm::pow(self.horizon, self.alpha2)
    }

    fn transition_width(&self) -> f64 {
        self.horizon - self.theta * self.horizon
    }
}

/// Temporal cutoff: 1 on `[a, theta T]`, 0 on `[T, inf)`, the smoothstep
/// power `S(rho)^ell` with `rho = (T - t)/(T - theta T)` in between.
pub fn time_cutoff(t: f64, cfg: &TestFnConfig) -> Result<f64> {
    if !(t >= cfg.a) {
        return Err(Error::Domain("time cutoff requires t >= a"));
    }
    let t_hi = cfg.horizon;
    let t_lo = cfg.theta * cfg.horizon;
    Ok(if t <= t_lo {
        1.0
    } else if t >= t_hi {
        0.0
    } else {
        let rho = (t_hi - t) / cfg.transition_width();
        libm::pow(smoothstep(rho), cfg.ell)
    })
}

/// `t phi1'(t)` in closed form; supported on the open transition.
pub fn time_cutoff_log_deriv(t: f64, cfg: &TestFnConfig) -> f64 {
    let t_hi = cfg.horizon;
    let t_lo = cfg.theta * cfg.horizon;
    if t <= t_lo || t >= t_hi {
        return 0.0;
    }
    let width = cfg.transition_width();
    let rho = (t_hi - t) / width;
    let s_val = smoothstep(rho);
    -t * cfg.ell * libm::pow(s_val, cfg.ell - 1.0) * smoothstep_deriv(rho) / width
}

/// Spatial cutoff `Phi(|x| / T^{alpha2})^mu`; 1 inside the ball of radius
/// `T^{alpha2}`, 0 outside radius `2 T^{alpha2}`.
pub fn space_cutoff(x: &[f64], cfg: &TestFnConfig) -> f64 {
    let sigma = norm(x) / cfg.space_scale();
    libm::pow(cutoff_value(sigma), cfg.mu)
}

/// Laplacian of the spatial cutoff by the radial chain rule,
/// `F''(rho) + (N-1)/rho F'(rho)`; identically zero on the plateau and
/// outside the support.
pub fn space_cutoff_laplacian(x: &[f64], cfg: &TestFnConfig) -> f64 {
    let scale = cfg.space_scale();
    let rho = norm(x);
    let sigma = rho / scale;
    if sigma <= 1.0 || sigma >= 2.0 {
        return 0.0;
    }
    let n_dim = x.len() as f64;
    let phi = cutoff_value(sigma);
    let dphi = cutoff_deriv(sigma);
    let ddphi = cutoff_second(sigma);
    let mu = cfg.mu;
    let first = mu * libm::pow(phi, mu - 1.0) * dphi / scale;
    let second = (mu * (mu - 1.0) * libm::pow(phi, mu - 2.0) * dphi * dphi
        + mu * libm::pow(phi, mu - 1.0) * ddphi)
        / (scale * scale);
    second + (n_dim - 1.0) / rho * first
}

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

/// Right-sided fractional derivative of the temporal cutoff through the
/// identity `D^{1 - beta(1-alpha_i)}_{T-} phi1 = -I^{beta(1-alpha_i)}_{T-}
/// (t phi1')`, with the log-derivative sampled in closed form.
pub fn cutoff_right_derivative(
    cfg: &TestFnConfig,
    alpha_i: f64,
    beta: f64,
    grid: &Arc<LogGrid>,
) -> Result<GridFn> {
    if !(alpha_i > 0.0 && alpha_i < 1.0) {
        return Err(Error::Domain("order alpha_i must lie in (0, 1)"));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain("type beta must lie in (0, 1]"));
    }
    let order = beta * (1.0 - alpha_i);
    let slope = GridFn::sample_t(grid, |t| time_cutoff_log_deriv(t, cfg));
    let mut out = right_integral(&slope, order)?;
    for v in out.values_mut().iter_mut() {
        *v = -*v;
    }
    Ok(out)
}

/// The transition-zone decay functional
/// `int_{theta T}^{T} | I^{1-alpha_i}_{T-} ( |t phi1'| / phi1^{1/p} ) |^{p'} dt/t`.
///
/// Scaled coordinates: with `w = -log(theta)` (the transition width in `s`),
/// `eta = w v` and the quotient written as `e^T qhat(v)`, the functional
/// factors into `P^{(1-alpha)p' + 1} e^{-T(1 - alpha p')} Gamma(1-alpha)^{-p'}
/// int_0^1 |int_0^z (z-v)^{-alpha} qhat dv|^{p'} dz` with `P = w e^T`.
/// The inner integral is product-integrated, the outer trapezoidal; the
/// quadrature density follows the grid's cell count.
pub fn decay_functional(cfg: &TestFnConfig, alpha_i: f64, grid: &Arc<LogGrid>) -> Result<f64> {
    if !(alpha_i > 0.0 && alpha_i < 1.0) {
        return Err(Error::Domain("order alpha_i must lie in (0, 1)"));
    }
    let pp = cfg.p_conj();
    if cfg.ell < 2.0 * pp - 1e-12 {
        return Err(Error::Unbounded(
            "|phi1'|/phi1^(1/p) needs ell >= 2p' on the transition",
        ));
    }
    let n = grid.cells().clamp(256, 8192);
    decay_scaled(cfg.horizon, alpha_i, cfg.p, cfg.ell, n, |rho| {
        (smoothstep(rho), smoothstep_deriv(rho))
    })
}

/// Core of the decay functional over a parametrized transition profile;
/// the profile returns `(S(rho), S'(rho))`. A constant profile (derivative
/// zero) models the no-transition cutoff and yields exactly zero.
pub(crate) fn decay_scaled(
    horizon: f64,
    alpha_i: f64,
    p: f64,
    ell: f64,
    n: usize,
    profile: impl Fn(f64) -> (f64, f64),
) -> Result<f64> {
    let pp = p / (p - 1.0);
    let x = libm::exp(-horizon);
    // P = w e^T with w = -log(1 - x); series for small x kills cancellation.
    let p_factor = if x < 1e-8 {
        1.0 + 0.5 * x + x * x / 3.0
    } else {
        -libm::log1p(-x) / x
    };
    let w = p_factor * x;

    // qhat(v) = e^{-w v} * ell * S(rho)^(ell - 1 - ell/p) * S'(rho),
    // rho(v) = -expm1(-w v) / x, increasing from 0 to exactly 1.
    let quot_exp = ell - 1.0 - ell / p;
    let mut qhat = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let v = i as f64 / n as f64;
        let rho = (-libm::expm1(-w * v) / x).min(1.0);
        let (s_val, s_der) = profile(rho);
        if s_val < 0.0 || !s_val.is_finite() {
            return Err(Error::NonFinite("transition profile"));
        }
        let q = if s_der == 0.0 {
            0.0
        } else {
            libm::exp(-w * v) * ell * libm::pow(s_val, quot_exp) * s_der
        };
        if !q.is_finite() {
            return Err(Error::Unbounded("transition quotient"));
        }
        qhat.push(q);
    }

    // G(z_j) by product integration of the (z - v)^(-alpha) kernel.
    let one_minus = 1.0 - alpha_i;
    let h = 1.0 / n as f64;
    let pw: Vec<f64> = (0..=n)
        .map(|d| libm::pow(d as f64 * h, one_minus))
        .collect();
    let kd: Vec<f64> = (0..n)
        .map(|d| (pw[d + 1] - pw[d]) / one_minus)
        .collect();
    let mut q_outer = 0.0;
    let mut prev = 0.0f64;
    for j in 1..=n {
        let mut g = 0.0;
        for k in 0..j {
            g += 0.5 * (qhat[k] + qhat[k + 1]) * kd[j - 1 - k];
        }
        let cur = libm::pow(g.abs(), pp);
        q_outer += 0.5 * (prev + cur) * h;
        prev = cur;
    }

    let gamma_term = libm::pow(gamma_pos(one_minus), -pp);
    let prefactor = libm::pow(p_factor, one_minus * pp + 1.0)
        * libm::exp(-horizon * (1.0 - alpha_i * pp));
    Ok(prefactor * gamma_term * q_outer)
}

/// Result of the annulus scaling integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    /// `int_{T^a2 <= |x| <= 2 T^a2} phi2^{-p'/p} |lap phi2|^{p'} dx`.
    pub computed: f64,
    /// The predicted growth exponent `alpha2 N - 2 alpha2 p'`.
    pub predicted_exponent: f64,
}

/// Annulus integral of `phi2^{-p'/p} |lap phi2|^{p'}` for `N` in {1, 2},
/// by radial quadrature in the scaled variable `|x| = T^{alpha2} v`.
pub fn laplacian_scaling(cfg: &TestFnConfig, n_dim: usize) -> Result<ScalingReport> {
    if !(1..=2).contains(&n_dim) {
        return Err(Error::Domain("annulus quadrature supports N in {1, 2}"));
    }
    let pp = cfg.p_conj();
    let scale = cfg.space_scale();
    let n = 2048usize;
    let h = 1.0 / n as f64;

    // Simpson in v over [1, 2]; the integrand is C^1 there.
    let mut acc = 0.0;
    for i in 0..=n {
        let v = 1.0 + i as f64 * h;
        let x = [scale * v, 0.0];
        let point: &[f64] = &x[..n_dim];
        let phi2 = space_cutoff(point, cfg);
        let lap = space_cutoff_laplacian(point, cfg);
        let integrand = if lap == 0.0 {
            0.0
        } else {
            // phi2 > 0 wherever lap != 0 because mu(p-1) >= 2p keeps the
            // quotient bounded; guard anyway.
            if phi2 <= 0.0 {
                return Err(Error::Unbounded("scaling integrand at the support edge"));
            }
            libm::pow(phi2, -pp / cfg.p) * libm::pow(lap.abs(), pp)
        };
        let measure = match n_dim {
            1 => 2.0 * scale,
            _ => 2.0 * core::f64::consts::PI * scale * scale * v,
        };
        let weight = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += weight * integrand * measure;
    }
    let computed = acc * h / 3.0;
    let predicted_exponent = cfg.alpha2 * n_dim as f64 - 2.0 * cfg.alpha2 * pp;
    Ok(ScalingReport {
        computed,
        predicted_exponent,
    })
}
