//! KKT certificates for the capped-simplex projection.
//!
//! With multipliers `alpha` for `x >= 0`, `beta` for `x <= cap` and `gamma`
//! for `sum(x) = s`, the optimality system is
//!
//! ```text
//! x_i - y_i - alpha_i + beta_i - gamma = 0
//! 0 <= x_i <= cap,  alpha_i >= 0,  beta_i >= 0,  sum(x) = s
//! alpha_i * x_i = 0,  beta_i * (cap - x_i) = 0
//! ```
//!
//! All residuals are reported in max-norm.

use crate::error::{ProjError, Result};
use crate::projection::{sort_with_permutation, Partition, ProjectionInput};

/// Zero/one classification threshold for externally supplied candidates.
pub const CLASSIFY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct KktCertificate {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    pub stationarity_residual: f64,
    pub primal_lower: f64,
    pub primal_upper: f64,
    pub sum_residual: f64,
    pub dual_residual: f64,
    pub cs_residual: f64,
    pub passed: bool,
}

impl KktReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.stationarity_residual,
            self.primal_lower,
            self.primal_upper,
            self.sum_residual,
            self.dual_residual,
            self.cs_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Multipliers for a unit-cap candidate whose segments are given by
/// `partition` over the stably sorted `y`.
pub fn recover_multipliers(y: &[f64], x: &[f64], gamma: f64, partition: Partition) -> Result<KktCertificate> {
    recover_multipliers_capped(y, x, gamma, partition, 1.0)
}

/// As [`recover_multipliers`] with an explicit cap. The zero segment gets
/// `alpha_i = -(y_i + gamma)`, the cap segment `beta_j = y_j + gamma - cap`,
/// and the interior gets zero multipliers.
pub fn recover_multipliers_capped(
    y: &[f64],
    x: &[f64],
    gamma: f64,
    partition: Partition,
    cap: f64,
) -> Result<KktCertificate> {
    let d = y.len();
    if x.len() != d {
        return Err(ProjError::InvalidInput(format!(
            "length mismatch: y has {d} entries, x has {}",
            x.len()
        )));
    }
    if partition.a > partition.b || partition.b > d {
        return Err(ProjError::InconsistentCandidate(format!(
            "partition ({}, {}) out of range for D = {d}",
            partition.a, partition.b
        )));
    }
    let sorted = sort_with_permutation(y)?;
    let ctol = CLASSIFY_TOL * cap.max(1.0);
    let mut alpha = vec![0.0; d];
    let mut beta = vec![0.0; d];
    for (k, &i) in sorted.perm.iter().enumerate() {
        if k < partition.a {
            if x[i].abs() > ctol {
                return Err(ProjError::InconsistentCandidate(format!(
                    "x[{i}] = {} lies in the zero segment",
                    x[i]
                )));
            }
            alpha[i] = -(y[i] + gamma);
        } else if k >= partition.b {
            if (x[i] - cap).abs() > ctol {
                return Err(ProjError::InconsistentCandidate(format!(
                    "x[{i}] = {} lies in the cap segment",
                    x[i]
                )));
            }
            beta[i] = y[i] + gamma - cap;
        }
    }
    Ok(KktCertificate { alpha, beta, gamma })
}

/// Builds a certificate for an arbitrary candidate `x` by classifying its
/// coordinates with [`CLASSIFY_TOL`].
///
/// `gamma` is the mean of `x_k - y_k` over the interior; without interior
/// coordinates it is the midpoint of the interval that keeps both multiplier
/// families nonnegative (or that minimizes their worst violation when the
/// interval is empty). The zero and cap multipliers are then read off the
/// stationarity equation, so any non-optimality shows up as a stationarity,
/// dual or complementarity residual.
pub fn certify(input: &ProjectionInput, x: &[f64]) -> Result<(Partition, KktCertificate)> {
    let y = &input.y;
    let d = y.len();
    if x.len() != d {
        return Err(ProjError::InvalidInput(format!(
            "length mismatch: y has {d} entries, x has {}",
            x.len()
        )));
    }
    let cap = input.cap;
    let ctol = CLASSIFY_TOL * cap.max(1.0);

    #[derive(Clone, Copy, PartialEq)]
    enum Seg {
        Zero,
        Interior,
        Cap,
    }
    let seg: Vec<Seg> = x
        .iter()
        .map(|&v| {
            if v <= ctol {
                Seg::Zero
            } else if v >= cap - ctol {
                Seg::Cap
            } else {
                Seg::Interior
            }
        })
        .collect();

    let (mut n_int, mut shift_sum) = (0usize, 0.0);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..d {
        match seg[i] {
            Seg::Interior => {
                n_int += 1;
                shift_sum += x[i] - y[i];
            }
            Seg::Zero => hi = hi.min(-y[i]),
            Seg::Cap => lo = lo.max(cap - y[i]),
        }
    }
    let gamma = if n_int > 0 {
        shift_sum / n_int as f64
    } else {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.0,
        }
    };

    let mut alpha = vec![0.0; d];
    let mut beta = vec![0.0; d];
    for i in 0..d {
        match seg[i] {
            Seg::Zero => alpha[i] = x[i] - y[i] - gamma,
            Seg::Cap => beta[i] = y[i] + gamma - x[i],
            Seg::Interior => {}
        }
    }
    let zeros = seg.iter().filter(|&&s| s == Seg::Zero).count();
    let caps = seg.iter().filter(|&&s| s == Seg::Cap).count();
    let partition = Partition {
        a: zeros,
        b: d - caps,
    };
    Ok((partition, KktCertificate { alpha, beta, gamma }))
}

/// Evaluates every condition of the optimality system for `(x, cert)`.
pub fn kkt_residuals(
    input: &ProjectionInput,
    x: &[f64],
    cert: &KktCertificate,
    tol: f64,
) -> Result<KktReport> {
    let d = input.y.len();
    if x.len() != d || cert.alpha.len() != d || cert.beta.len() != d {
        return Err(ProjError::InvalidInput(format!(
            "length mismatch: y {d}, x {}, alpha {}, beta {}",
            x.len(),
            cert.alpha.len(),
            cert.beta.len()
        )));
    }
    let cap = input.cap;
    let mut r = KktReport {
        stationarity_residual: 0.0,
        primal_lower: 0.0,
        primal_upper: 0.0,
        sum_residual: 0.0,
        dual_residual: 0.0,
        cs_residual: 0.0,
        passed: false,
    };
    let mut sum = 0.0;
    for (((&xi, &yi), &al), &be) in x.iter().zip(&input.y).zip(&cert.alpha).zip(&cert.beta) {
        r.stationarity_residual = r
            .stationarity_residual
            .max((xi - yi - al + be - cert.gamma).abs());
        r.primal_lower = r.primal_lower.max(-xi);
        r.primal_upper = r.primal_upper.max(xi - cap);
        r.dual_residual = r.dual_residual.max(-al).max(-be);
        r.cs_residual = r.cs_residual.max((al * xi).abs()).max((be * (cap - xi)).abs());
        sum += xi;
    }
    r.sum_residual = (sum - input.s).abs();
    // max() against a negative zero can leave -0.0 behind.
    for v in [
        &mut r.stationarity_residual,
        &mut r.primal_lower,
        &mut r.primal_upper,
        &mut r.dual_residual,
        &mut r.cs_residual,
    ] {
        *v = v.abs();
    }
    r.passed = [
        r.stationarity_residual,
        r.primal_lower,
        r.primal_upper,
        r.sum_residual,
        r.dual_residual,
        r.cs_residual,
    ]
    .iter()
    .all(|v| !v.is_nan() && *v <= tol);
    Ok(r)
}

/// Membership in the unit-cap simplex up to `tol`.
pub fn feasibility_check(x: &[f64], s: f64, tol: f64) -> bool {
    x.iter().all(|&v| v >= -tol && v <= 1.0 + tol) && (x.iter().sum::<f64>() - s).abs() <= tol
}
