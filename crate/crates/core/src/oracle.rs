//! Brute-force reference solver and the random instance generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_finite, ProjError, Result};
use crate::projection::ProjectionInput;

/// Largest dimension the 3^D enumeration accepts.
pub const MAX_ORACLE_DIM: usize = 14;

/// Identifier of the generator behind [`random_instance`].
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Zero,
    Interior,
    One,
}

/// Exact minimizer over the unit-cap simplex by trying every assignment of
/// each coordinate to {zero, interior, one}.
///
/// For each assignment the shift is solved from the sum constraint on the
/// interior; the assignment is accepted when the assembled point is feasible
/// and both multiplier families are nonnegative. Among accepted assignments
/// (several can pass when a coordinate sits exactly on a bound) the one with
/// the largest margin wins.
pub fn enumerate_oracle(y: &[f64], s: f64) -> Result<Vec<f64>> {
    let d = y.len();
    if d == 0 {
        return Err(ProjError::InvalidInput("y must have at least one entry".into()));
    }
    if d > MAX_ORACLE_DIM {
        return Err(ProjError::Capacity {
            d,
            max: MAX_ORACLE_DIM,
        });
    }
    check_finite(y)?;
    if !(0.0..=d as f64).contains(&s) {
        return Err(ProjError::Infeasible { s, upper: d as f64 });
    }
    let tol = 1e-12 * y.iter().fold(1.0_f64, |m, v| m.max(v.abs()));

    let mut roles = vec![Role::Zero; d];
    let mut best: Option<(f64, Vec<f64>)> = None;
    for code in 0..3usize.pow(d as u32) {
        let mut c = code;
        for r in roles.iter_mut() {
            *r = match c % 3 {
                0 => Role::Zero,
                1 => Role::Interior,
                _ => Role::One,
            };
            c /= 3;
        }
        if let Some((margin, x)) = try_assignment(y, s, &roles, tol) {
            if best.as_ref().is_none_or(|(m, _)| margin > *m) {
                best = Some((margin, x));
            }
        }
    }
    best.map(|(_, x)| x)
        .ok_or_else(|| ProjError::Internal("no assignment satisfies the optimality system".into()))
}

fn try_assignment(y: &[f64], s: f64, roles: &[Role], tol: f64) -> Option<(f64, Vec<f64>)> {
    let mut n_int = 0usize;
    let mut n_one = 0usize;
    let mut int_sum = 0.0;
    for (r, &v) in roles.iter().zip(y) {
        match r {
            Role::Interior => {
                n_int += 1;
                int_sum += v;
            }
            Role::One => n_one += 1,
            Role::Zero => {}
        }
    }

    let gamma = if n_int > 0 {
        (s - n_one as f64 - int_sum) / n_int as f64
    } else {
        if (n_one as f64 - s).abs() > 1e-12 {
            return None;
        }
        // Any gamma in [max_one(1 - y), min_zero(-y)] works.
        let lo = roles
            .iter()
            .zip(y)
            .filter(|(r, _)| **r == Role::One)
            .map(|(_, v)| 1.0 - v)
            .fold(f64::NEG_INFINITY, f64::max);
        let hi = roles
            .iter()
            .zip(y)
            .filter(|(r, _)| **r == Role::Zero)
            .map(|(_, v)| -v)
            .fold(f64::INFINITY, f64::min);
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => return None,
        }
    };

    let mut margin = f64::INFINITY;
    let mut x = vec![0.0; y.len()];
    for (i, (r, &v)) in roles.iter().zip(y).enumerate() {
        let shifted = v + gamma;
        let m = match r {
            Role::Zero => -shifted,
            Role::One => {
                x[i] = 1.0;
                shifted - 1.0
            }
            Role::Interior => {
                x[i] = shifted;
                shifted.min(1.0 - shifted)
            }
        };
        if m < -tol {
            return None;
        }
        margin = margin.min(m);
    }
    Some((margin, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub d: usize,
    pub seed: u64,
}

/// `y_i ~ U[-0.5, 0.5)` i.i.d. and `s = round(u * D)` with `u ~ U[0, 1)`,
/// drawn in that order from a ChaCha8 stream seeded by `spec.seed`.
pub fn random_instance(spec: InstanceSpec) -> Result<ProjectionInput> {
    if spec.d == 0 {
        return Err(ProjError::InvalidInput("instance dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let y: Vec<f64> = (0..spec.d).map(|_| rng.gen::<f64>() - 0.5).collect();
    let s = (rng.gen::<f64>() * spec.d as f64).round();
    ProjectionInput::new(y, s)
}
