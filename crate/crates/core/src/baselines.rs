//! Reference solvers used to validate and benchmark the exact projection.

use crate::error::{check_finite, ProjError, Result};
use crate::projection::ProjectionInput;

/// Projection onto the scaled simplex `{x >= 0, sum(x) = s}` by sorting and
/// thresholding, O(D log D).
pub fn project_simplex(y: &[f64], s: f64) -> Result<Vec<f64>> {
    check_finite(y)?;
    if y.is_empty() {
        return Err(ProjError::InvalidInput("y must have at least one entry".into()));
    }
    if !s.is_finite() || s < 0.0 {
        return Err(ProjError::InvalidInput(format!(
            "simplex sum must be >= 0, got {s}"
        )));
    }
    if s == 0.0 {
        return Ok(vec![0.0; y.len()]);
    }
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, &v) in u.iter().enumerate() {
        acc += v;
        let t = (acc - s) / (k + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    Ok(y.iter().map(|v| (v - theta).max(0.0)).collect())
}

/// Elementwise `min(x_i, cap)`.
pub fn clamp_upper(x: &[f64], cap: f64) -> Vec<f64> {
    x.iter().map(|&v| v.min(cap)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iters: usize,
    /// ADMM penalty.
    pub rho: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 100_000,
            rho: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        // NaN fails these comparisons too.
        let positive = |v: f64| v > 0.0;
        if !positive(self.tol) || self.max_iters == 0 || !positive(self.rho) {
            return Err(ProjError::InvalidInput(format!(
                "solver config needs tol > 0, max_iters >= 1, rho > 0 (got {self:?})"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_change: f64,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (u, v)| m.max((u - v).abs()))
}

/// Dykstra's alternating projection between the scaled simplex and the
/// half-space box `{x <= cap}`. The correction terms make the limit the
/// projection of `y` onto the intersection, not just some point in it.
pub fn dykstra_project(input: &ProjectionInput, cfg: &SolverConfig) -> Result<IterativeResult> {
    input.validate()?;
    cfg.validate()?;
    let d = input.dim();
    let mut x = input.y.clone();
    let mut p = vec![0.0; d];
    let mut q = vec![0.0; d];
    let mut buf = vec![0.0; d];
    let mut change = f64::INFINITY;

    for iter in 1..=cfg.max_iters {
        for i in 0..d {
            buf[i] = x[i] + p[i];
        }
        let u = project_simplex(&buf, input.s)?;
        for i in 0..d {
            p[i] = buf[i] - u[i];
            buf[i] = u[i] + q[i];
        }
        let next = clamp_upper(&buf, input.cap);
        for i in 0..d {
            q[i] = buf[i] - next[i];
        }

        change = max_abs_diff(&next, &x);
        x = next;
        // x is in the box by construction; the simplex side is what can lag.
        let sum_gap = (x.iter().sum::<f64>() - input.s).abs();
        let neg = x.iter().fold(0.0_f64, |m, &v| m.max(-v));
        if change <= cfg.tol && sum_gap.max(neg) <= cfg.tol {
            return Ok(IterativeResult {
                x,
                iterations: iter,
                converged: true,
                final_change: change,
            });
        }
    }
    Ok(IterativeResult {
        x,
        iterations: cfg.max_iters,
        converged: false,
        final_change: change,
    })
}

/// Scaled-form ADMM iterates: `x` carries the box, `z` the hyperplane, `u`
/// the scaled dual.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
}

impl AdmmState {
    pub fn cold(d: usize) -> Self {
        Self {
            x: vec![0.0; d],
            z: vec![0.0; d],
            u: vec![0.0; d],
        }
    }
}

/// ADMM on `0.5 ||x - y||^2 + I_box(x) + I_{sum = s}(z)` with `x = z`.
pub fn admm_project(input: &ProjectionInput, cfg: &SolverConfig) -> Result<IterativeResult> {
    admm_project_warm(input, cfg, AdmmState::cold(input.dim())).map(|(r, _)| r)
}

/// ADMM from a given state; returns the result and the final state.
pub fn admm_project_warm(
    input: &ProjectionInput,
    cfg: &SolverConfig,
    state: AdmmState,
) -> Result<(IterativeResult, AdmmState)> {
    input.validate()?;
    cfg.validate()?;
    let d = input.dim();
    if state.x.len() != d || state.z.len() != d || state.u.len() != d {
        return Err(ProjError::InvalidInput(
            "warm-start state has the wrong length".into(),
        ));
    }
    let AdmmState { mut x, mut z, mut u } = state;
    let (rho, cap, s) = (cfg.rho, input.cap, input.s);
    let inv = 1.0 / (1.0 + rho);
    let mut change = f64::INFINITY;

    for iter in 1..=cfg.max_iters {
        let mut dx = 0.0_f64;
        for i in 0..d {
            let xi = ((input.y[i] + rho * (z[i] - u[i])) * inv).clamp(0.0, cap);
            dx = dx.max((xi - x[i]).abs());
            x[i] = xi;
        }
        let mut shift = s;
        for i in 0..d {
            shift -= x[i] + u[i];
        }
        shift /= d as f64;
        let mut dz = 0.0_f64;
        let mut primal = 0.0_f64;
        for i in 0..d {
            let zi = x[i] + u[i] + shift;
            dz = dz.max((zi - z[i]).abs());
            z[i] = zi;
            let r = x[i] - zi;
            primal = primal.max(r.abs());
            u[i] += r;
        }
        change = dx.max(dz);
        if change <= cfg.tol && primal <= cfg.tol {
            let result = IterativeResult {
                x: x.clone(),
                iterations: iter,
                converged: true,
                final_change: change,
            };
            return Ok((result, AdmmState { x, z, u }));
        }
    }
    let result = IterativeResult {
        x: x.clone(),
        iterations: cfg.max_iters,
        converged: false,
        final_change: change,
    };
    Ok((result, AdmmState { x, z, u }))
}
