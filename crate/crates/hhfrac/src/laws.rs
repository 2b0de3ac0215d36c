//! Numerical verifiers for the operator identities.
//!
//! Each check evaluates both sides of an identity with the same quadrature
//! and reports the discrepancy against a resolution-indexed tolerance
//! `tol(M) = 0.477 M^{-0.9}`, calibrated once on the closed-form examples so
//! that `tol(2048) = 5e-4`. Max-norm discrepancies exclude a fixed 5% share
//! of nodes next to each singular endpoint: the identities hold on the
//! open-ended interval, and the differentiated quadratures carry no
//! pointwise information inside that collapsing boundary layer.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::grid::{integrate_log, log_derivative, GridFn};
use crate::hadamard::{left_derivative, left_integral, right_derivative, right_integral};
use crate::spaces::{weighted_lp_norm, weighted_sup_norm};
use crate::special::gamma_pos;

/// Which identity a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    IntegrationByParts,
    Semigroup,
    Representation,
    Regularization,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Law::IntegrationByParts => "integration-by-parts",
            Law::Semigroup => "semigroup",
            Law::Representation => "representation",
            Law::Regularization => "regularization",
        };
        f.write_str(name)
    }
}

/// Discrepancy of one law check against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawReport {
    pub law: Law,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl LawReport {
    fn new(law: Law, discrepancy: f64, tolerance: f64) -> Self {
        LawReport {
            law,
            discrepancy,
            tolerance,
            pass: discrepancy <= tolerance,
        }
    }
}

const TOLERANCE_COEFF: f64 = 0.477;

/// Resolution-indexed tolerance `0.477 M^{-0.9}`; `tol(2048) = 5e-4`.
pub fn tolerance_for(cells: usize) -> f64 {
    TOLERANCE_COEFF * libm::pow(cells as f64, -0.9)
}

/// Share of nodes next to a singular endpoint excluded from max-norm
/// discrepancies (at least two nodes).
fn boundary_skip(cells: usize) -> usize {
    (cells / 20).max(2)
}

/// Fractional integration by parts:
/// `int phi (I^alpha psi) dt/t = int (I^alpha_{b-} phi) psi dt/t`.
///
/// `p` names the Lebesgue exponent of the hypothesis; the pairing norms are
/// evaluated to confirm both sides are finite before the identity is tested.
pub fn check_integration_by_parts(
    phi: &GridFn,
    psi: &GridFn,
    alpha: f64,
    p: f64,
) -> Result<LawReport> {
    if !phi.same_grid(psi) {
        return Err(Error::GridMismatch);
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain("integration by parts requires alpha > 0"));
    }
    if !(p >= 1.0) {
        return Err(Error::Domain("integration by parts requires p >= 1"));
    }
    // Hypothesis bookkeeping: phi in L^p, psi in X^q_{-1/p} with 1/p + 1/q = 1.
    let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    let phi_norm = weighted_lp_norm(phi, p, 1.0 / p)?;
    if !phi_norm.finite {
        return Err(Error::NonFinite("integrand norm"));
    }
    if q.is_finite() {
        let psi_norm = weighted_lp_norm(psi, q, -1.0 / p)?;
        if !psi_norm.finite {
            return Err(Error::NonFinite("integrand norm"));
        }
    }

    let left_side = {
        let integ = left_integral(psi, alpha)?;
        let prod = pointwise_product(phi, &integ);
        integrate_log(&prod)
    };
    let right_side = {
        let integ = right_integral(phi, alpha)?;
        let prod = pointwise_product(&integ, psi);
        integrate_log(&prod)
    };
    let disc = (left_side - right_side).abs();
    Ok(LawReport::new(
        Law::IntegrationByParts,
        disc,
        tolerance_for(phi.grid().cells()),
    ))
}

/// Semigroup of the left integrals: `I^alpha I^beta f = I^{alpha+beta} f`.
pub fn check_semigroup(f: &GridFn, alpha: f64, beta: f64) -> Result<LawReport> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Domain("semigroup requires positive orders"));
    }
    if alpha + beta > 1.5 {
        return Err(Error::Domain("semigroup orders exceed the exercised range"));
    }
    let composed = left_integral(&left_integral(f, beta)?, alpha)?;
    let direct = left_integral(f, alpha + beta)?;
    let m = f.grid().cells();
    let skip = boundary_skip(m);
    let mut disc = 0.0f64;
    for j in skip..m {
        disc = disc.max((composed.value(j) - direct.value(j)).abs());
    }
    Ok(LawReport::new(Law::Semigroup, disc, tolerance_for(m)))
}

/// Side selector for the representation identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Representation of the fractional derivative of a C^1 function: the
/// derivative equals the endpoint kernel term plus the integral of the slope
/// against the weakly singular kernel (mirrored on the right).
pub fn check_representation(f: &GridFn, alpha: f64, side: Side) -> Result<LawReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain("representation requires alpha in (0, 1)"));
    }
    let grid = f.grid();
    let m = grid.cells();
    if m < 8 {
        return Err(Error::GridTooSmall { min_cells: 8 });
    }
    let slope = log_derivative(f)?;
    let inv_gamma = 1.0 / gamma_pos(1.0 - alpha);
    let skip = boundary_skip(m);
    let mut disc = 0.0f64;
    match side {
        Side::Left => {
            let derivative = left_derivative(f, alpha)?;
            let tail = left_integral(&slope, 1.0 - alpha)?;
            let f_a = f.value(0);
            for j in skip..=m {
                let kernel = f_a * libm::pow(grid.s(j), -alpha) * inv_gamma;
                disc = disc.max((derivative.value(j) - (kernel + tail.value(j))).abs());
            }
        }
        Side::Right => {
            let derivative = right_derivative(f, alpha)?;
            let tail = right_integral(&slope, 1.0 - alpha)?;
            let f_b = f.value(m);
            let s_max = grid.s_max();
            for j in 0..=(m - skip) {
                let kernel = f_b * libm::pow(s_max - grid.s(j), -alpha) * inv_gamma;
                disc = disc.max((derivative.value(j) - (kernel - tail.value(j))).abs());
            }
        }
    }
    Ok(LawReport::new(Law::Representation, disc, tolerance_for(m)))
}

/// Regularization: for weight `gamma <= alpha` the left integral of a
/// weighted-continuous function is bounded near `t = a`, and tends to zero
/// there when `gamma < alpha`. The discrepancy is the amount by which the
/// early node magnitudes fail to decrease toward the endpoint (zero when the
/// trend holds); for `gamma = alpha` it is zero iff the early values are
/// finite.
pub fn check_regularization(f: &GridFn, gamma_w: f64, alpha: f64) -> Result<LawReport> {
    if !(0.0..1.0).contains(&gamma_w) {
        return Err(Error::Domain("regularization weight must lie in [0, 1)"));
    }
    if gamma_w > alpha {
        return Err(Error::Domain(
            "regularization requires weight <= integral order",
        ));
    }
    let sup = weighted_sup_norm(f, gamma_w)?;
    if !sup.finite {
        return Err(Error::NonFinite("weighted norm of input"));
    }
    let integ = left_integral(f, alpha)?;
    let m = f.grid().cells();
    let early = (m / 10).max(3);
    let mut disc = 0.0f64;
    if gamma_w < alpha {
        // |I f| must shrink toward the endpoint on the first 10% of nodes:
        // successive ratios |v_j| / |v_{j+1}| stay below 1.
        for j in 1..early {
            let lo = integ.value(j).abs();
            let hi = integ.value(j + 1).abs();
            if hi > 0.0 {
                disc = disc.max(lo / hi - 1.0);
            } else if lo > 0.0 {
                disc = f64::INFINITY;
            }
        }
        disc = disc.max(0.0);
    } else if integ.values()[..=early].iter().any(|v| !v.is_finite()) {
        disc = f64::INFINITY;
    }
    Ok(LawReport::new(Law::Regularization, disc, tolerance_for(m)))
}

/// Smooth test function family used by the randomized suites:
/// `c0 + c1 (s/S) + c2 sin(pi w1 s/S + h) + c3 cos(pi w2 s/S)`.
///
/// Built from plain uniforms so callers own the random stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothCase {
    pub c: [f64; 4],
    pub w: [f64; 2],
    pub phase: f64,
    pub scale: f64,
}

impl SmoothCase {
    /// Maps eight uniforms in [0, 1) to bounded coefficients and low
    /// frequencies; `scale` is the `s`-span of the target grid.
    pub fn from_uniforms(u: &[f64; 8], scale: f64) -> Self {
        let sym = |x: f64| 2.0 * x - 1.0;
        SmoothCase {
            c: [sym(u[0]), sym(u[1]), sym(u[2]), sym(u[3])],
            w: [0.5 + 2.0 * u[4], 0.5 + 2.0 * u[5]],
            phase: 2.0 * core::f64::consts::PI * u[6],
            scale,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let x = s / self.scale;
        self.c[0]
            + self.c[1] * x
            + self.c[2] * libm::sin(core::f64::consts::PI * self.w[0] * x + self.phase)
            + self.c[3] * libm::cos(core::f64::consts::PI * self.w[1] * x)
    }
}

fn pointwise_product(a: &GridFn, b: &GridFn) -> GridFn {
    let values: Vec<f64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x * y)
        .collect();
    GridFn::from_raw(a.grid(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridFn, LogGrid};
    use crate::special::gamma;
    use core::f64::consts::E;

    #[test]
    fn ibp_zero_functions() {
        let g = LogGrid::uniform(1.0, E, 64).unwrap();
        let z = GridFn::constant(&g, 0.0);
        let r = check_integration_by_parts(&z, &z, 0.5, 2.0).unwrap();
        assert_eq!(r.discrepancy, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn ibp_constants_closed_form() {
        // phi = psi = 1, alpha = 0.5 on (1, e): both sides equal
        // int_0^1 s^0.5 / Gamma(1.5) ds = 2 / (3 Gamma(1.5)).
        let g = LogGrid::uniform(1.0, E, 2048).unwrap();
        let one = GridFn::constant(&g, 1.0);
        let want = 2.0 / (3.0 * gamma(1.5).unwrap());
        assert!((want - 0.752_252_778_063_675).abs() < 1e-12);
        let integ = left_integral(&one, 0.5).unwrap();
        let prod = pointwise_product(&one, &integ);
        let lhs = integrate_log(&prod);
        assert!((lhs - want).abs() < 1e-5, "lhs {lhs} want {want}");
        let r = check_integration_by_parts(&one, &one, 0.5, 2.0).unwrap();
        assert!(r.pass, "discrepancy {}", r.discrepancy);
    }

    #[test]
    fn ibp_trig_example() {
        // phi = sin(log t), psi = cos(log t), alpha = 0.3 at M = 2048.
        let g = LogGrid::uniform(1.0, E, 2048).unwrap();
        let phi = GridFn::sample_s(&g, libm::sin);
        let psi = GridFn::sample_s(&g, libm::cos);
        let r = check_integration_by_parts(&phi, &psi, 0.3, 2.0).unwrap();
        assert!(r.discrepancy <= 1e-4, "discrepancy {}", r.discrepancy);
        assert!(r.pass);
    }

    #[test]
    fn ibp_rejects_mismatched_grids() {
        let g1 = LogGrid::uniform(1.0, E, 64).unwrap();
        let g2 = LogGrid::uniform(1.0, E, 32).unwrap();
        let f1 = GridFn::constant(&g1, 1.0);
        let f2 = GridFn::constant(&g2, 1.0);
        assert_eq!(
            check_integration_by_parts(&f1, &f2, 0.5, 2.0).unwrap_err(),
            Error::GridMismatch
        );
    }

    #[test]
    fn semigroup_halves_compose_to_plain_integral() {
        // I^0.5 I^0.5 1 = I^1 1 = log(t/a), equal to 1 at t = e.
        let g = LogGrid::uniform(1.0, E, 1024).unwrap();
        let one = GridFn::constant(&g, 1.0);
        let composed = left_integral(&left_integral(&one, 0.5).unwrap(), 0.5).unwrap();
        let m = g.cells();
        assert!((composed.value(m) - 1.0).abs() < 2e-3);
        let r = check_semigroup(&one, 0.5, 0.5).unwrap();
        assert!(r.pass, "discrepancy {} tol {}", r.discrepancy, r.tolerance);

        let z = GridFn::constant(&g, 0.0);
        let r = check_semigroup(&z, 0.3, 0.4).unwrap();
        assert_eq!(r.discrepancy, 0.0);
    }

    #[test]
    fn semigroup_rejects_out_of_range_orders() {
        let g = LogGrid::uniform(1.0, E, 16).unwrap();
        let f = GridFn::constant(&g, 1.0);
        assert!(check_semigroup(&f, 0.0, 0.5).is_err());
        assert!(check_semigroup(&f, 0.9, 0.9).is_err());
    }

    #[test]
    fn representation_constant_reduces_to_kernel_term() {
        let g = LogGrid::uniform(1.0, E, 2048).unwrap();
        let f = GridFn::constant(&g, 2.0);
        let r = check_representation(&f, 0.5, Side::Left).unwrap();
        assert!(r.pass, "discrepancy {}", r.discrepancy);
        let r = check_representation(&f, 0.5, Side::Right).unwrap();
        assert!(r.pass, "discrepancy {}", r.discrepancy);
    }

    #[test]
    fn representation_log_profile() {
        // f = log(t/a): both routes give (log t/a)^(1-alpha) terms that agree.
        let g = LogGrid::uniform(1.0, E, 2048).unwrap();
        let f = GridFn::sample_s(&g, |s| s);
        let r = check_representation(&f, 0.5, Side::Left).unwrap();
        assert!(r.pass, "discrepancy {}", r.discrepancy);
    }

    #[test]
    fn regularization_cases() {
        let g = LogGrid::graded(1.0, E, 512, 2.0).unwrap();
        // gamma < alpha: I^0.5 s^{-0.3} ~ s^0.2 -> 0 at the endpoint.
        let f = GridFn::sample_s(&g, |s| if s > 0.0 { libm::pow(s, -0.3) } else { 0.0 });
        let r = check_regularization(&f, 0.3, 0.5).unwrap();
        assert!(r.pass, "discrepancy {}", r.discrepancy);

        // f = 1, gamma = 0: closed form s^0.5/Gamma(1.5) -> 0.
        let one = GridFn::constant(&g, 1.0);
        let r = check_regularization(&one, 0.0, 0.5).unwrap();
        assert!(r.pass);

        // Boundary case gamma = alpha: I^0.5 s^{-0.5} = Gamma(0.5) constant
        // near a; bounded, no trend demanded.
        let f = GridFn::sample_s(&g, |s| if s > 0.0 { libm::pow(s, -0.5) } else { 0.0 });
        let r = check_regularization(&f, 0.5, 0.5).unwrap();
        assert!(r.pass);
        // And the constant really is Gamma(0.5) away from the endpoint.
        let integ = left_integral(&f, 0.5).unwrap();
        let want = gamma(0.5).unwrap();
        let m = g.cells();
        assert!((integ.value(m / 2) - want).abs() / want < 5e-3);

        // gamma > alpha rejected.
        assert!(check_regularization(&f, 0.6, 0.5).is_err());
    }

    #[test]
    fn smooth_case_is_bounded() {
        let u = [0.1, 0.9, 0.4, 0.7, 0.2, 0.8, 0.5, 0.3];
        let case = SmoothCase::from_uniforms(&u, 1.0);
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            assert!(case.eval(s).abs() < 4.0);
        }
    }
}
