//! Critical-exponent arithmetic, hypothesis audit, and the weak-form
//! residual.
//!
//! The certificate evaluates the three `T`-power terms that bound the
//! truncated energy and decides decay from the sign of the slowest one. The
//! first term carries an `e^{-T}` prefactor that always wins; it is tracked
//! as an (exponential rate, power) pair rather than evaluated at any finite
//! `T`, since only its vanishing matters.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hadamard::{hilfer_derivative, FracParams};
use crate::solver::{ProblemSpec, SpaceTimeField};
use crate::testfn::{space_cutoff, space_cutoff_laplacian, time_cutoff, TestFnConfig};

/// A term `e^{rate T} T^{power}` tracked symbolically in `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpPower {
    pub exp_rate: f64,
    pub power: f64,
}

impl ExpPower {
    /// Whether the term tends to zero as `T` grows.
    pub fn vanishes_at_infinity(&self) -> bool {
        self.exp_rate < 0.0 || (self.exp_rate == 0.0 && self.power < 0.0)
    }
}

/// One audited standing hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Exponent bookkeeping plus the hypothesis audit for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub p_crit: f64,
    /// Power of the exponentially damped term (`e^{-T} T^{e1}`).
    pub e1: f64,
    /// `alpha2 N - 2 alpha2 p'`.
    pub e2: f64,
    /// `alpha2 N - 2 alpha2 p' + 1`, the decisive exponent.
    pub e3: f64,
    /// `e3 < 0`, equivalently `p < p_crit`.
    pub decays: bool,
    /// `p` sits within the tie band of `p_crit`; the strict inequality of
    /// the statement leaves the boundary open, so no verdict is implied.
    pub near_critical: bool,
    pub hypotheses: Vec<Hypothesis>,
}

impl Certificate {
    /// The three bound terms in order.
    pub fn terms(&self) -> [ExpPower; 3] {
        [
            ExpPower {
                exp_rate: -1.0,
                power: self.e1,
            },
            ExpPower {
                exp_rate: 0.0,
                power: self.e2,
            },
            ExpPower {
                exp_rate: 0.0,
                power: self.e3,
            },
        ]
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }
}

/// The critical exponent `(alpha2 N + 1) / (alpha2 N + 1 - 2 alpha2)`.
pub fn critical_exponent(alpha2: f64, n_dim: usize) -> Result<f64> {
    if !(alpha2 > 0.0 && alpha2 < 1.0) {
        return Err(Error::Domain("critical exponent requires alpha2 in (0, 1)"));
    }
    if n_dim < 1 {
        return Err(Error::Domain("critical exponent requires N >= 1"));
    }
    let an = alpha2 * n_dim as f64;
    let denom = an + 1.0 - 2.0 * alpha2;
    // denom = 1 + alpha2 (N - 2) > 1 - alpha2 > 0 on the admitted domain.
    assert!(denom > 0.0);
    Ok((an + 1.0) / denom)
}

const TIE_BAND: f64 = 1e-12;

/// Builds the certificate: exponents of the three bound terms, the decay
/// verdict, and the audited hypotheses.
pub fn certificate(
    alpha1: f64,
    alpha2: f64,
    beta: f64,
    p: f64,
    n_dim: usize,
) -> Result<Certificate> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain("certificate requires p > 1"));
    }
    if n_dim < 1 {
        return Err(Error::Domain("certificate requires N >= 1"));
    }
    let pp = p / (p - 1.0);
    let gamma = alpha1 + beta - alpha1 * beta;
    let an = alpha2 * n_dim as f64;
    let e1 = an;
    let e2 = an - 2.0 * alpha2 * pp;
    let e3 = e2 + 1.0;

    let ordering = 0.0 < alpha2 && alpha2 < alpha1 && alpha1 < 1.0;
    let beta_open = 0.0 < beta && beta < 1.0;
    let gamma_open = 0.0 < gamma && gamma < 1.0;
    // 1 - gamma < (1-beta)(1-alpha2), the regularity gap between the two
    // orders; algebraically equivalent to alpha2 < alpha1 when beta < 1.
    let gap = 1.0 - gamma < (1.0 - beta) * (1.0 - alpha2);
    let integrable = pp * (1.0 - gamma) < 1.0;

    let hypotheses = alloc::vec![
        Hypothesis {
            name: "0 < alpha2 < alpha1 < 1",
            holds: ordering,
            detail: alloc::format!("alpha1 = {alpha1}, alpha2 = {alpha2}"),
        },
        Hypothesis {
            name: "0 < beta < 1",
            holds: beta_open,
            detail: alloc::format!("beta = {beta}"),
        },
        Hypothesis {
            name: "0 < gamma < 1",
            holds: gamma_open,
            detail: alloc::format!("gamma = alpha1 + beta - alpha1*beta = {gamma}"),
        },
        Hypothesis {
            name: "1 - gamma < (1 - beta)(1 - alpha2)",
            holds: gap,
            detail: alloc::format!(
                "1 - gamma = {}, (1-beta)(1-alpha2) = {}",
                1.0 - gamma,
                (1.0 - beta) * (1.0 - alpha2)
            ),
        },
        Hypothesis {
            name: "p'(1 - gamma) < 1",
            holds: integrable,
            detail: alloc::format!("p'(1 - gamma) = {}", pp * (1.0 - gamma)),
        },
    ];

    let p_crit = if alpha2 > 0.0 && alpha2 < 1.0 {
        critical_exponent(alpha2, n_dim)?
    } else {
        f64::NAN
    };
    let near_critical = p_crit.is_finite() && (p - p_crit).abs() <= TIE_BAND * p_crit.max(1.0);

    Ok(Certificate {
        p_crit,
        e1,
        e2,
        e3,
        decays: e3 < 0.0,
        near_critical,
        hypotheses,
    })
}

/// Residual of the weak-solution identity for a space-time field: the test
/// function is `phi1(t)/t * phi2(x)`, so every time integral carries the
/// measure `dt/t = ds`. The source side includes `|u|^p` when the problem's
/// source is on, plus the problem's forcing. All four integrals share one
/// trapezoid-in-`s` times midpoint-in-`x` quadrature over `[s_1, s_max]`
/// (the first cell abuts the data singularity and carries no samples).
///
/// The spatial cutoff is mounted at the box center; the identity moves the
/// Laplacian onto the test function, so the cutoff's support must stay
/// inside the box (`2 T^{alpha2} <= side/2`) for the wall terms to vanish.
pub fn weak_residual(u: &SpaceTimeField, cfg: &TestFnConfig, prob: &ProblemSpec) -> Result<f64> {
    let mesh = u.mesh();
    if mesh.n_dim() != prob.n_dim
        || mesh.n() != prob.n_interior
        || mesh.side() != prob.side
        || u.grid().cells() != prob.time_steps
    {
        return Err(Error::GridMismatch);
    }
    let params1 = FracParams::new(prob.alpha1, prob.beta)?;
    let params2 = FracParams::new(prob.alpha2, prob.beta)?;
    let grid = u.grid();
    let m = grid.cells();

    // phi1 at the grid times.
    let mut phi1 = Vec::with_capacity(m + 1);
    for j in 0..=m {
        phi1.push(time_cutoff(grid.t(j), cfg)?);
    }

    if 2.0 * cfg.space_scale() > 0.5 * prob.side {
        return Err(Error::Domain(
            "spatial cutoff support must fit inside the box",
        ));
    }
    let forcing = prob.forcing_fn()?;
    let h_pow = libm::pow(mesh.h(), mesh.n_dim() as f64);
    let center = 0.5 * prob.side;
    let mut residual = 0.0;
    for i in 0..mesh.total() {
        let series = u.time_series(i);
        if series.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("space-time field sample"));
        }
        let d1 = hilfer_derivative(&series, &params1)?;
        let d2 = hilfer_derivative(&series, &params2)?;

        let mut t1 = 0.0;
        let mut t2 = 0.0;
        let mut t3 = 0.0;
        let mut t4 = 0.0;
        let point = mesh.point(i);
        let shifted = [point[0] - center, point[1] - center];
        let cutoff_coords = &shifted[..mesh.n_dim()];
        for j in 1..m {
            let ds = 0.5 * (grid.s(j + 1) - grid.s(j - 1));
            let w = phi1[j] * ds;
            if w == 0.0 {
                continue;
            }
            t1 += w * d1.value(j);
            t2 += w * d2.value(j);
            t3 += w * series.value(j);
            let mut src = 0.0;
            if prob.source_on {
                src += libm::pow(series.value(j).abs(), prob.p);
            }
            if let Some(f) = &forcing {
                src += f.eval(grid.s(j), &point[..mesh.n_dim()]);
            }
            t4 += w * src;
        }
        // Half-weight end node (phi1 vanishes at t >= T anyway).
        let ds_end = 0.5 * (grid.s(m) - grid.s(m - 1));
        let w_end = phi1[m] * ds_end;
        if w_end != 0.0 {
            t1 += w_end * d1.value(m);
            t2 += w_end * d2.value(m);
            t3 += w_end * series.value(m);
            let mut src = 0.0;
            if prob.source_on {
                src += libm::pow(series.value(m).abs(), prob.p);
            }
            if let Some(f) = &forcing {
                src += f.eval(grid.s(m), &point[..mesh.n_dim()]);
            }
            t4 += w_end * src;
        }

        let phi2 = space_cutoff(cutoff_coords, cfg);
        let lap2 = space_cutoff_laplacian(cutoff_coords, cfg);
        residual += h_pow * (phi2 * t1 - lap2 * t2 - lap2 * t3 - phi2 * t4);
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{Forcing, InitialData};

    #[test]
    fn critical_exponent_reference_points() {
        assert_eq!(critical_exponent(0.5, 1).unwrap(), 3.0);
        assert_eq!(critical_exponent(0.5, 2).unwrap(), 2.0);
        // N = 1 family: (1 + a2)/(1 - a2); the a2 -> 0 edge collapses to 1
        // just outside the open domain.
        let near_edge = critical_exponent(1e-9, 1).unwrap();
        assert!((near_edge - 1.0).abs() < 1e-8);
        assert!(critical_exponent(0.0, 1).is_err());
        assert!(critical_exponent(1.0, 1).is_err());
        assert!(critical_exponent(0.5, 0).is_err());
    }

    #[test]
    fn certificate_subcritical_point() {
        let c = certificate(0.8, 0.5, 0.5, 2.0, 1).unwrap();
        assert_eq!(c.p_crit, 3.0);
        assert!((c.e3 + 0.5).abs() < 1e-14); // 0.5 - 2 + 1
        assert!(c.decays);
        assert!(!c.near_critical);
        assert!(c.hypotheses_hold(), "{:?}", c.hypotheses);
        let terms = c.terms();
        assert!(terms.iter().all(|t| t.vanishes_at_infinity()));
    }

    #[test]
    fn certificate_supercritical_point() {
        let c = certificate(0.8, 0.5, 0.5, 6.0, 1).unwrap();
        // p' = 1.2: e3 = 0.5 - 1.2 + 1 = 0.3 > 0.
        assert!((c.e3 - 0.3).abs() < 1e-14);
        assert!(!c.decays);
        assert!(6.0 > c.p_crit);
        assert!(c.hypotheses_hold());
        assert!(!c.terms()[2].vanishes_at_infinity());
        // The damped term always vanishes.
        assert!(c.terms()[0].vanishes_at_infinity());
    }

    #[test]
    fn certificate_flags_order_violation() {
        let c = certificate(0.5, 0.8, 0.5, 2.0, 1).unwrap();
        assert!(!c.hypotheses_hold());
        let h = c
            .hypotheses
            .iter()
            .find(|h| h.name == "0 < alpha2 < alpha1 < 1")
            .unwrap();
        assert!(!h.holds);
        // The regularity-gap hypothesis fails exactly with the ordering.
        let gap = c
            .hypotheses
            .iter()
            .find(|h| h.name == "1 - gamma < (1 - beta)(1 - alpha2)")
            .unwrap();
        assert!(!gap.holds);
    }

    #[test]
    fn certificate_near_critical_tie() {
        let c = certificate(0.8, 0.5, 0.5, 3.0 + 1e-13, 1).unwrap();
        assert!(c.near_critical);
        let c = certificate(0.8, 0.5, 0.5, 3.01, 1).unwrap();
        assert!(!c.near_critical);
        assert!(certificate(0.8, 0.5, 0.5, 1.0, 1).is_err());
    }

    #[test]
    fn weak_residual_of_zero_field_is_zero() {
        let prob = ProblemSpec {
            alpha1: 0.8,
            alpha2: 0.5,
            beta: 0.5,
            p: 2.0,
            n_dim: 1,
            side: 8.0,
            n_interior: 15,
            a: 1.0,
            t_end: libm::exp(1.0),
            time_steps: 32,
            grading: 2.0,
            u0: InitialData::Zero,
            source_on: true,
            forcing: Forcing::None,
            blowup_threshold: 1e3,
        };
        let result = crate::solver::solve(&prob).unwrap();
        let cfg = TestFnConfig::new(1.0, libm::exp(1.0), 0.5, 2.0).unwrap();
        let r = weak_residual(&result.field, &cfg, &prob).unwrap();
        assert_eq!(r, 0.0);
    }
}
