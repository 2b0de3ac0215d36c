//! Quintic smoothstep and the plateau cutoff profile.
//!
//! The cutoff `Phi` equals 1 on `[0, 1]`, 0 on `[2, inf)` and interpolates
//! with the quintic smoothstep on `(1, 2)`, which makes it C^2 and
//! non-increasing. Powers of `Phi` build the spatial test function, and the
//! same smoothstep shapes the temporal cutoff transition.

use crate::error::{Error, Result};

/// Quintic smoothstep: 0 for x <= 0, 1 for x >= 1, `x^3 (10 - 15x + 6x^2)`
/// in between. C^2 across both joins.
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
    }
}

/// First derivative of [`smoothstep`]: `30 x^2 (1-x)^2` on (0, 1).
pub fn smoothstep_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let u = 1.0 - x;
        30.0 * x * x * u * u
    }
}

/// Second derivative of [`smoothstep`] on (0, 1).
pub(crate) fn smoothstep_second(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)
    }
}

/// The cutoff profile: 1 on `[0,1]`, 0 on `[2,inf)`, strictly decreasing
/// C^2 transition in between. Rejects negative arguments.
pub fn smooth_cutoff(sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::Domain("cutoff requires sigma >= 0"));
    }
    Ok(cutoff_value(sigma))
}

pub(crate) fn cutoff_value(sigma: f64) -> f64 {
    smoothstep(2.0 - sigma)
}

pub(crate) fn cutoff_deriv(sigma: f64) -> f64 {
    -smoothstep_deriv(2.0 - sigma)
}

pub(crate) fn cutoff_second(sigma: f64) -> f64 {
    smoothstep_second(2.0 - sigma)
}
