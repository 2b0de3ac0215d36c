//! Graded grids in logarithmic time and functions sampled on them.
//!
//! A [`LogGrid`] covers `(a, T]` through the variable `s = log(t/a)` with
//! nodes `s_j = (j/M)^r * log(T/a)`. The grading exponent `r` clusters nodes
//! at `t = a`, where solutions of the fractional problems behave like
//! `(log t/a)^(gamma-1)`; `r = 1` is the uniform grid.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Graded mesh on `(a, T]` carried in log-time `s = log(t/a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    a: f64,
    t_end: f64,
    m: usize,
    grading: f64,
    nodes: Vec<f64>,
}

impl LogGrid {
    /// Graded grid with `m` cells and node map `s_j = (j/m)^r * log(T/a)`.
    pub fn graded(a: f64, t_end: f64, m: usize, grading: f64) -> Result<Arc<Self>> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain("grid requires a > 0"));
        }
        if !(t_end > a) || !t_end.is_finite() {
            return Err(Error::Domain("grid requires T > a"));
        }
        if m < 2 {
            return Err(Error::Domain("grid requires at least 2 cells"));
        }
        if !(grading >= 1.0) || !grading.is_finite() {
            return Err(Error::Domain("grid requires grading exponent r >= 1"));
        }
        let s_max = libm::log(t_end / a);
        let nodes = (0..=m)
            .map(|j| libm::pow(j as f64 / m as f64, grading) * s_max)
            .collect();
        Ok(Arc::new(LogGrid {
            a,
            t_end,
            m,
            grading,
            nodes,
        }))
    }

    /// Uniform grid in `s` (grading exponent 1).
    pub fn uniform(a: f64, t_end: f64, m: usize) -> Result<Arc<Self>> {
        Self::graded(a, t_end, m, 1.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of cells; there are `cells() + 1` nodes.
    pub fn cells(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.m + 1
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn s(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// Physical time of node `j`: `t_j = a e^{s_j}`.
    pub fn t(&self, j: usize) -> f64 {
        self.a * libm::exp(self.nodes[j])
    }

    pub fn s_max(&self) -> f64 {
        self.nodes[self.m]
    }

    pub fn is_uniform(&self) -> bool {
        self.grading == 1.0
    }

    pub fn max_step(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// Real function sampled at the nodes of a [`LogGrid`].
///
/// Values produced by the derivative operators may carry NaN at the singular
/// endpoint node; see the endpoint policy in [`crate::hadamard`].
#[derive(Debug, Clone)]
pub struct GridFn {
    grid: Arc<LogGrid>,
    values: Vec<f64>,
}

impl GridFn {
    /// Wrap sampled values, requiring one finite value per node.
    pub fn new(grid: &Arc<LogGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid function value"));
        }
        Ok(GridFn {
            grid: Arc::clone(grid),
            values,
        })
    }

    pub(crate) fn from_raw(grid: &Arc<LogGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.node_count());
        GridFn {
            grid: Arc::clone(grid),
            values,
        }
    }

    /// Sample `f(s)` at the grid nodes (no finiteness check).
    pub fn sample_s<F: Fn(f64) -> f64>(grid: &Arc<LogGrid>, f: F) -> Self {
        let values = grid.nodes().iter().map(|&s| f(s)).collect();
        GridFn {
            grid: Arc::clone(grid),
            values,
        }
    }

    /// Sample `f(t)` at the physical times of the grid nodes.
    pub fn sample_t<F: Fn(f64) -> f64>(grid: &Arc<LogGrid>, f: F) -> Self {
        let a = grid.a();
        let values = grid.nodes().iter().map(|&s| f(a * libm::exp(s))).collect();
        GridFn {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn constant(grid: &Arc<LogGrid>, c: f64) -> Self {
        GridFn {
            grid: Arc::clone(grid),
            values: alloc::vec![c; grid.node_count()],
        }
    }

    pub fn grid(&self) -> &Arc<LogGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid(&self, other: &GridFn) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }
}

/// The operator `t d/dt` in log-time: exactly `d/ds`.
///
/// Three-point finite differences on the (possibly nonuniform) `s`-nodes,
/// one-sided at both endpoints. Exact for quadratics in `s`.
pub fn log_derivative(f: &GridFn) -> Result<GridFn> {
    let grid = f.grid();
    if grid.cells() < 3 {
        return Err(Error::GridTooSmall { min_cells: 3 });
    }
    let s = grid.nodes();
    let v = f.values();
    let m = grid.cells();
    let mut out = Vec::with_capacity(m + 1);

    // One-sided three-point formula at the left end.
    out.push(three_point(s[0], s[0], s[1], s[2], v[0], v[1], v[2]));
    for j in 1..m {
        out.push(three_point(
            s[j],
            s[j - 1],
            s[j],
            s[j + 1],
            v[j - 1],
            v[j],
            v[j + 1],
        ));
    }
    out.push(three_point(
        s[m],
        s[m - 2],
        s[m - 1],
        s[m],
        v[m - 2],
        v[m - 1],
        v[m],
    ));
    Ok(GridFn::from_raw(grid, out))
}

/// Derivative at `x` of the quadratic through (x0,f0), (x1,f1), (x2,f2).
fn three_point(x: f64, x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    let d0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
    let d1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
    let d2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
    f0 * d0 + f1 * d1 + f2 * d2
}

/// Trapezoidal quadrature of `f` against the measure `dt/t = ds`.
pub fn integrate_log(f: &GridFn) -> f64 {
    integrate_log_between(f, 0, f.len() - 1)
}

/// Trapezoidal quadrature of `f ds` restricted to nodes `j0..=j1`.
pub fn integrate_log_between(f: &GridFn, j0: usize, j1: usize) -> f64 {
    let s = f.grid().nodes();
    let v = f.values();
    let mut acc = 0.0;
    for j in j0..j1 {
        acc += 0.5 * (v[j] + v[j + 1]) * (s[j + 1] - s[j]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::E;

    #[test]
    fn uniform_grid_nodes() {
        // (1, e, 4, 1) -> nodes {0, 0.25, 0.5, 0.75, 1.0}
        let g = LogGrid::graded(1.0, E, 4, 1.0).unwrap();
        let expect = [0.0, 0.25, 0.5, 0.75, 1.0];
        for (got, want) in g.nodes().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(g.is_uniform());
    }

    #[test]
    fn graded_grid_nodes() {
        // (1, e, 2, 2) -> nodes {0, 0.25, 1.0}: (j/2)^2 * 1 by hand.
        let g = LogGrid::graded(1.0, E, 2, 2.0).unwrap();
        let expect = [0.0, 0.25, 1.0];
        for (got, want) in g.nodes().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LogGrid::graded(2.0, 1.0, 4, 1.0).is_err()); // T <= a
        assert!(LogGrid::graded(0.0, 1.0, 4, 1.0).is_err()); // a <= 0
        assert!(LogGrid::graded(1.0, 2.0, 1, 1.0).is_err()); // m < 2
        assert!(LogGrid::graded(1.0, 2.0, 4, 0.5).is_err()); // r < 1
    }

    #[test]
    fn nodes_strictly_increasing_and_bracketed() {
        for &(m, r) in &[(5usize, 1.0), (64, 2.0), (33, 3.5)] {
            let g = LogGrid::graded(0.5, 7.3, m, r).unwrap();
            assert_eq!(g.s(0), 0.0);
            assert!((g.s_max() - libm::log(7.3 / 0.5)).abs() < 1e-14);
            for w in g.nodes().windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn refining_uniform_grid_halves_max_step() {
        let g1 = LogGrid::uniform(1.0, E, 64).unwrap();
        let g2 = LogGrid::uniform(1.0, E, 128).unwrap();
        assert!((g1.max_step() / g2.max_step() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_derivative_of_log_is_one() {
        let g = LogGrid::uniform(1.0, E, 16).unwrap();
        let f = GridFn::sample_t(&g, |t| libm::log(t / 1.0));
        let d = log_derivative(&f).unwrap();
        for &v in d.values() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log_derivative_of_constant_is_zero() {
        let g = LogGrid::graded(1.0, 10.0, 12, 2.0).unwrap();
        let f = GridFn::constant(&g, 3.25);
        let d = log_derivative(&f).unwrap();
        for &v in d.values() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn log_derivative_exact_for_quadratic_in_s() {
        // f = (log t/a)^2 has t f'(t) = 2 log(t/a); the three-point scheme is
        // exact for quadratics, including at the one-sided endpoints.
        let g = LogGrid::uniform(1.0, E, 8).unwrap();
        let f = GridFn::sample_s(&g, |s| s * s);
        let d = log_derivative(&f).unwrap();
        for (j, &v) in d.values().iter().enumerate() {
            assert!((v - 2.0 * g.s(j)).abs() < 1e-12, "node {j}");
        }
    }

    #[test]
    fn log_derivative_needs_three_cells() {
        let g = LogGrid::uniform(1.0, E, 2).unwrap();
        let f = GridFn::constant(&g, 1.0);
        assert_eq!(
            log_derivative(&f).unwrap_err(),
            Error::GridTooSmall { min_cells: 3 }
        );
    }

    #[test]
    fn grid_fn_validates() {
        let g = LogGrid::uniform(1.0, E, 4).unwrap();
        assert!(GridFn::new(&g, alloc::vec![0.0; 4]).is_err());
        assert!(GridFn::new(&g, alloc::vec![0.0, 1.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(GridFn::new(&g, alloc::vec![0.0; 5]).is_ok());
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let g = LogGrid::uniform(1.0, E, 10).unwrap();
        let f = GridFn::sample_s(&g, |s| 2.0 * s + 1.0);
        // int_0^1 (2s + 1) ds = 2
        assert!((integrate_log(&f) - 2.0).abs() < 1e-14);
    }
}
