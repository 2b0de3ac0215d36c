//! Weighted norms and membership diagnostics.
//!
//! `weighted_sup_norm` is the norm of the weighted continuous space: the sup
//! of `(log t/a)^gamma |f(t)|` over the grid, left endpoint excluded.
//! `weighted_lp_norm` is the norm of the Lebesgue-type space with weight
//! `t^c` against the measure `dt/t`; at `c = 1/p` it coincides with the
//! plain `L^p(a,b)` norm.

use crate::error::{Error, Result};
use crate::grid::GridFn;
use crate::hadamard::{left_derivative, FracParams};
use crate::special::gamma;

/// Outcome of a norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub value: f64,
    /// Node index where the sup (or the largest integrand sample) sits.
    pub attained_at: usize,
    /// False when a sampled value overflowed.
    pub finite: bool,
}

/// Sup of `s^gamma |f|` over nodes `j >= 1` (the weight lives at the left
/// endpoint, which is excluded).
pub fn weighted_sup_norm(f: &GridFn, gamma_w: f64) -> Result<NormReport> {
    if !(0.0..1.0).contains(&gamma_w) {
        return Err(Error::Domain("sup-norm weight must lie in [0, 1)"));
    }
    let grid = f.grid();
    let mut best = 0.0f64;
    let mut at = 1usize;
    let mut finite = true;
    for j in 1..f.len() {
        let w = libm::pow(grid.s(j), gamma_w) * f.value(j).abs();
        if !w.is_finite() {
            finite = false;
            best = f64::INFINITY;
            at = j;
            break;
        }
        if w > best {
            best = w;
            at = j;
        }
    }
    Ok(NormReport {
        value: best,
        attained_at: at,
        finite,
    })
}

/// `( int_a^b |t^c f(t)|^p dt/t )^{1/p}` by trapezoidal quadrature in
/// `s = log(t/a)`, where `t^c = a^c e^{cs}`.
pub fn weighted_lp_norm(f: &GridFn, p: f64, c: f64) -> Result<NormReport> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain("lp norm requires p >= 1"));
    }
    let grid = f.grid();
    let a_pow = libm::pow(grid.a(), c);
    let s = grid.nodes();
    let mut acc = 0.0;
    let mut best = 0.0f64;
    let mut at = 0usize;
    let mut finite = true;
    let mut prev = lp_integrand(f.value(0), a_pow, c, s[0], p);
    for j in 1..f.len() {
        let cur = lp_integrand(f.value(j), a_pow, c, s[j], p);
        if !cur.is_finite() {
            finite = false;
        }
        if cur > best {
            best = cur;
            at = j;
        }
        acc += 0.5 * (prev + cur) * (s[j] - s[j - 1]);
        prev = cur;
    }
    let value = libm::pow(acc, 1.0 / p);
    Ok(NormReport {
        value,
        attained_at: at,
        finite: finite && value.is_finite(),
    })
}

fn lp_integrand(v: f64, a_pow: f64, c: f64, s: f64, p: f64) -> f64 {
    libm::pow((a_pow * libm::exp(c * s) * v).abs(), p)
}

/// Outcome of the membership diagnostic for the composite-order derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipReport {
    /// `int_a^T |t^{-1/p} (D^gamma u)(t)|^{p'} dt/t`, first cell excluded.
    pub integral: f64,
    /// Weighted sup-norm of `D^gamma u`, standing in for the generic
    /// constant of the bound.
    pub weighted_sup: f64,
    /// `M^{p'} a^{1-p'} (p'-1)^{p'(1-gamma)-1} Gamma(1 - p'(1-gamma))`,
    /// or `None` when `p'(1-gamma) >= 1` makes it infinite.
    pub bound: Option<f64>,
    /// Whether the computed integral sits below the bound (trivially true
    /// when the bound is infinite).
    pub holds: bool,
}

/// Checks that `D^gamma u` lies in the weighted Lebesgue space with exponent
/// `p'` and weight `t^{-1/p}`, comparing the defining integral against its
/// closed-form bound.
pub fn derivative_membership(u: &GridFn, params: &FracParams, p: f64) -> Result<MembershipReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain("membership requires p > 1"));
    }
    let gm = params.gamma();
    if gm >= 1.0 {
        return Err(Error::Domain("membership requires composite order < 1"));
    }
    let pp = p / (p - 1.0);
    let du = left_derivative(u, gm)?;
    let weighted_sup = weighted_sup_norm(&du, 1.0 - gm)?.value;

    // Quadrature of the defining integral over [s_1, s_max]; the first cell
    // holds the derivative's singular endpoint and carries no data.
    let grid = u.grid();
    let s = grid.nodes();
    let a_pow = libm::pow(grid.a(), -1.0 / p);
    let mut integral = 0.0;
    let mut prev = libm::pow((a_pow * libm::exp(-s[1] / p) * du.value(1)).abs(), pp);
    for j in 2..du.len() {
        let cur = libm::pow((a_pow * libm::exp(-s[j] / p) * du.value(j)).abs(), pp);
        integral += 0.5 * (prev + cur) * (s[j] - s[j - 1]);
        prev = cur;
    }

    let exponent = pp * (1.0 - gm);
    let bound = if exponent < 1.0 {
        let g = gamma(1.0 - exponent)?;
        Some(
            libm::pow(weighted_sup, pp)
                * libm::pow(grid.a(), 1.0 - pp)
                * libm::pow(pp - 1.0, exponent - 1.0)
                * g,
        )
    } else {
        None
    };
    let tol = 1e-6;
    let holds = match bound {
        Some(b) => integral <= b * (1.0 + tol) + f64::MIN_POSITIVE,
        None => true,
    };
    Ok(MembershipReport {
        integral,
        weighted_sup,
        bound,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridFn, LogGrid};
    use core::f64::consts::E;

    #[test]
    fn sup_norm_cancels_matched_singularity() {
        // f = s^(-gamma) has weighted sup exactly 1 for any gamma in (0,1).
        for &gw in &[0.2, 0.5, 0.8] {
            let g = LogGrid::graded(1.0, E, 256, 2.0).unwrap();
            let f = GridFn::sample_s(&g, |s| if s > 0.0 { libm::pow(s, -gw) } else { 0.0 });
            let r = weighted_sup_norm(&f, gw).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
            assert!(r.finite);
        }
    }

    #[test]
    fn sup_norm_of_zero_and_monotone_weight() {
        let g = LogGrid::uniform(1.0, E, 64).unwrap();
        let z = GridFn::constant(&g, 0.0);
        assert_eq!(weighted_sup_norm(&z, 0.3).unwrap().value, 0.0);

        // f = s^(gamma-1) with gamma = 0.8: weight s^0.8 gives s^0.6,
        // maximized at the right endpoint with value 1.
        let f = GridFn::sample_s(&g, |s| if s > 0.0 { libm::pow(s, -0.2) } else { 0.0 });
        let r = weighted_sup_norm(&f, 0.8).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.attained_at, g.cells());
    }

    #[test]
    fn sup_norm_rejects_bad_weight() {
        let g = LogGrid::uniform(1.0, E, 8).unwrap();
        let f = GridFn::constant(&g, 1.0);
        assert!(weighted_sup_norm(&f, 1.0).is_err());
        assert!(weighted_sup_norm(&f, -0.1).is_err());
    }

    #[test]
    fn lp_norm_of_compensating_power() {
        // f = t^{-c}: the integrand collapses to 1 and the norm is
        // (log T/a)^{1/p} = 1 on (1, e).
        let g = LogGrid::uniform(1.0, E, 512).unwrap();
        for &(p, c) in &[(2.0, 0.7), (1.5, -0.4), (3.0, 0.0)] {
            let f = GridFn::sample_t(&g, |t| libm::pow(t, -c));
            let r = weighted_lp_norm(&f, p, c).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "p={p} c={c}: {}", r.value);
        }
        let z = GridFn::constant(&g, 0.0);
        assert_eq!(weighted_lp_norm(&z, 2.0, 0.5).unwrap().value, 0.0);
    }

    #[test]
    fn lp_norm_at_c_equals_inv_p_is_plain_lp() {
        // X^p_{1/p} = L^p: for f = 1 on (1, e) the L^2 norm is sqrt(e - 1);
        // the integrands agree pointwise, so the match is exact to rounding.
        let g = LogGrid::uniform(1.0, E, 512).unwrap();
        let f = GridFn::constant(&g, 1.0);
        let r = weighted_lp_norm(&f, 2.0, 0.5).unwrap();
        let integrand = GridFn::sample_s(&g, |s| libm::exp(s));
        let plain = libm::sqrt(crate::grid::integrate_log(&integrand));
        assert!((r.value - plain).abs() < 1e-12);
        assert!((r.value - libm::sqrt(E - 1.0)).abs() < 1e-4);
    }

    #[test]
    fn lp_norm_rejects_p_below_one() {
        let g = LogGrid::uniform(1.0, E, 8).unwrap();
        let f = GridFn::constant(&g, 1.0);
        assert!(weighted_lp_norm(&f, 0.9, 0.0).is_err());
    }

    #[test]
    fn membership_zero_function() {
        let g = LogGrid::graded(1.0, E, 128, 2.0).unwrap();
        let u = GridFn::constant(&g, 0.0);
        let params = FracParams::new(0.8, 0.5).unwrap();
        let r = derivative_membership(&u, &params, 2.0).unwrap();
        assert_eq!(r.integral, 0.0);
        assert_eq!(r.bound, Some(0.0));
        assert!(r.holds);
    }

    #[test]
    fn membership_power_profile_holds() {
        // u = s^gamma has D^gamma u = Gamma(gamma+1), a constant; both the
        // integral and the bound are finite and the inequality holds.
        let params = FracParams::new(0.8, 0.5).unwrap(); // gamma = 0.9
        let gm = params.gamma();
        let g = LogGrid::graded(1.0, E, 1024, 2.0).unwrap();
        let u = GridFn::sample_s(&g, |s| libm::pow(s, gm));
        let r = derivative_membership(&u, &params, 2.0).unwrap();
        assert!(r.bound.is_some());
        assert!(r.integral.is_finite() && r.integral > 0.0);
        assert!(r.holds, "integral {} bound {:?}", r.integral, r.bound);
    }

    #[test]
    fn membership_flags_infinite_bound() {
        // gamma = 0.6, p = 2 gives p'(1-gamma) = 0.8 < 1 (finite bound);
        // gamma = 0.4 gives 1.2 (infinite bound, flagged not rejected).
        let g = LogGrid::graded(1.0, E, 256, 2.0).unwrap();
        let u = GridFn::sample_s(&g, |s| s);
        let fine = FracParams::new(0.6, 0.0).unwrap();
        assert_eq!(fine.gamma(), 0.6);
        let r1 = derivative_membership(&u, &fine, 2.0).unwrap();
        assert!(r1.bound.is_some());
        let coarse = FracParams::new(0.4, 0.0).unwrap();
        let r2 = derivative_membership(&u, &coarse, 2.0).unwrap();
        assert!(r2.bound.is_none());
        assert!(r2.holds);
    }
}
