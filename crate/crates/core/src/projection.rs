//! Exact projection onto the capped simplex `{x : sum(x) = s, 0 <= x <= t}`.
//!
//! The solver sorts `y`, then scans every partition `(a, b)` of the sorted
//! coordinates into `a` zeros, an interior run `y_k + gamma`, and `D - b`
//! values at the cap. For each candidate the shift `gamma` follows from the
//! sum constraint in O(1) via prefix sums, and four comparisons decide whether
//! the candidate satisfies the optimality conditions. The scan is O(D^2) in the
//! worst case.

use crate::error::{check_finite, ProjError, Result};

/// A projection problem: minimize `0.5 * ||x - y||^2` subject to
/// `sum(x) = s` and `0 <= x <= cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionInput {
    pub y: Vec<f64>,
    pub s: f64,
    pub cap: f64,
}

impl ProjectionInput {
    /// Unit-cap instance.
    pub fn new(y: Vec<f64>, s: f64) -> Result<Self> {
        Self::with_cap(y, s, 1.0)
    }

    pub fn with_cap(y: Vec<f64>, s: f64, cap: f64) -> Result<Self> {
        let input = Self { y, s, cap };
        input.validate()?;
        Ok(input)
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    /// Checks the instance invariants: non-empty finite `y`, positive finite
    /// cap, and `0 <= s <= cap * D`.
    pub fn validate(&self) -> Result<()> {
        if self.y.is_empty() {
            return Err(ProjError::InvalidInput("y must have at least one entry".into()));
        }
        check_finite(&self.y)?;
        if !(self.cap.is_finite() && self.cap > 0.0) {
            return Err(ProjError::InvalidInput(format!(
                "cap must be positive and finite, got {}",
                self.cap
            )));
        }
        if !self.s.is_finite() {
            return Err(ProjError::InvalidInput(format!(
                "s must be finite, got {}",
                self.s
            )));
        }
        let upper = self.cap * self.dim() as f64;
        if self.s < 0.0 || self.s > upper {
            return Err(ProjError::Infeasible { s: self.s, upper });
        }
        Ok(())
    }
}

/// `y` in ascending order together with the sorting permutation and prefix
/// sums of the sorted values.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedInstance {
    pub y_sorted: Vec<f64>,
    /// `perm[k]` is the original index of sorted position `k`.
    pub perm: Vec<usize>,
    /// `prefix[0] = 0`, `prefix[k] = y_sorted[0] + ... + y_sorted[k - 1]`.
    pub prefix: Vec<f64>,
}

/// Split of the sorted coordinates: `a` zeros, then the interior run
/// `a..b`, then `D - b` coordinates at the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Partition {
    pub a: usize,
    pub b: usize,
}

impl Partition {
    pub fn new(a: usize, b: usize, dim: usize) -> Result<Self> {
        if a > b || b > dim {
            return Err(ProjError::InvalidInput(format!(
                "partition ({a}, {b}) violates 0 <= a <= b <= {dim}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn zeros(&self) -> usize {
        self.a
    }

    pub fn interior(&self) -> usize {
        self.b - self.a
    }

    pub fn ones(&self, dim: usize) -> usize {
        dim - self.b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    /// Solution in the original index order.
    pub x: Vec<f64>,
    /// Multiplier of the sum constraint, in the units of the original problem.
    pub gamma: f64,
    pub partition: Partition,
    pub perm: Vec<usize>,
    /// Set when no partition passed the widened tests and the result is the
    /// least-violating partition instead.
    pub fallback: bool,
}

/// Per-call solver knobs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProjectOptions {
    /// Comparison tolerance for the partition tests. `None` uses
    /// [`default_eps`].
    pub eps: Option<f64>,
}

/// `1e-9 * max(1, ||y||_inf)`.
pub fn default_eps(y: &[f64]) -> f64 {
    1e-9 * y.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// Stable ascending sort with permutation and prefix sums.
pub fn sort_with_permutation(y: &[f64]) -> Result<SortedInstance> {
    if y.is_empty() {
        return Err(ProjError::InvalidInput("y must have at least one entry".into()));
    }
    check_finite(y)?;
    let mut perm: Vec<usize> = (0..y.len()).collect();
    // All entries are finite, so total_cmp agrees with the numeric order
    // except for -0.0 < +0.0, which does not affect the values.
    perm.sort_by(|&i, &j| y[i].total_cmp(&y[j]));
    let y_sorted: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
    let mut prefix = Vec::with_capacity(y.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in &y_sorted {
        acc += v;
        prefix.push(acc);
    }
    Ok(SortedInstance {
        y_sorted,
        perm,
        prefix,
    })
}

impl SortedInstance {
    pub fn len(&self) -> usize {
        self.y_sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_sorted.is_empty()
    }

    /// One-based access with the sentinels `y_0 = -inf`, `y_{D+1} = +inf`
    /// mapped to `None`.
    #[inline]
    fn at(&self, k: usize) -> Option<f64> {
        if k == 0 || k > self.y_sorted.len() {
            None
        } else {
            Some(self.y_sorted[k - 1])
        }
    }

    #[inline]
    fn gamma_unchecked(&self, a: usize, b: usize, s: f64) -> f64 {
        let d = self.y_sorted.len() as f64;
        (s + b as f64 - d + self.prefix[a] - self.prefix[b]) / (b - a) as f64
    }

    /// Shift that makes the assembled point sum to `s` for partition `p`.
    pub fn gamma_for_partition(&self, p: Partition, s: f64) -> Result<f64> {
        if p.b > self.len() || p.a > p.b {
            return Err(ProjError::InvalidInput(format!(
                "partition ({}, {}) out of range for D = {}",
                p.a,
                p.b,
                self.len()
            )));
        }
        if p.a == p.b {
            return Err(ProjError::DegeneratePartition(p.a));
        }
        Ok(self.gamma_unchecked(p.a, p.b, s))
    }

    /// The four sign tests on the partition boundaries, each widened by
    /// `eps`. Comparisons against the sentinel positions always pass.
    pub fn partition_is_optimal(&self, p: Partition, gamma: f64, eps: f64) -> bool {
        if p.a >= p.b || p.b > self.len() {
            return false;
        }
        self.at(p.a).is_none_or(|v| v + gamma <= eps)
            && self.at(p.a + 1).is_none_or(|v| v + gamma > -eps)
            && self.at(p.b).is_none_or(|v| v + gamma < 1.0 + eps)
            && self.at(p.b + 1).is_none_or(|v| v + gamma >= 1.0 - eps)
    }

    /// The `a = b` case: the solution is `a` zeros followed by `D - a` ones,
    /// which requires `s = D - a` and a gap of at least one between `y_a`
    /// and `y_{a+1}`.
    pub fn boundary_case_holds(&self, a: usize, s: f64, eps: f64) -> bool {
        let d = self.len();
        if a > d || (s - (d - a) as f64).abs() > eps {
            return false;
        }
        match (self.at(a), self.at(a + 1)) {
            (Some(lo), Some(hi)) => hi - lo >= 1.0 - eps,
            _ => true,
        }
    }

    /// Any multiplier in `[1 - y_{a+1}, -y_a]` certifies the `a = b` case;
    /// the midpoint is used when both ends exist.
    fn boundary_gamma(&self, a: usize) -> f64 {
        let lo = self.at(a + 1).map(|v| 1.0 - v);
        let hi = self.at(a).map(|v| -v);
        match (lo, hi) {
            (Some(lo), Some(hi)) => 0.5 * (lo + hi),
            (Some(lo), None) => lo,
            (None, Some(hi)) => hi,
            (None, None) => 0.0,
        }
    }

    /// Largest violation among the four partition tests, used to rank
    /// candidates when nothing passes.
    fn violation(&self, a: usize, b: usize, gamma: f64) -> f64 {
        let mut worst = 0.0_f64;
        if let Some(v) = self.at(a) {
            worst = worst.max(v + gamma);
        }
        if let Some(v) = self.at(a + 1) {
            worst = worst.max(-(v + gamma));
        }
        if let Some(v) = self.at(b) {
            worst = worst.max(v + gamma - 1.0);
        }
        if let Some(v) = self.at(b + 1) {
            worst = worst.max(1.0 - (v + gamma));
        }
        worst
    }

    fn search(&self, s: f64, eps: f64) -> Option<(Partition, f64)> {
        let d = self.len();
        // The a = b branch can only hold at a = D - s. Checking it up front
        // keeps the partition (a - 1, a), whose strict test sits exactly on
        // zero, from being accepted through rounding in the prefix sums.
        let a_all = (d as f64 - s).round();
        if a_all >= 0.0 && self.boundary_case_holds(a_all as usize, s, eps) {
            let a = a_all as usize;
            return Some((Partition { a, b: a }, self.boundary_gamma(a)));
        }
        for a in 0..=d {
            if self.boundary_case_holds(a, s, eps) {
                return Some((Partition { a, b: a }, self.boundary_gamma(a)));
            }
            let y_a = self.at(a);
            for b in a + 1..=d {
                let gamma = self.gamma_unchecked(a, b, s);
                if y_a.is_none_or(|v| v + gamma <= eps)
                    && self.y_sorted[a] + gamma > -eps
                    && self.y_sorted[b - 1] + gamma < 1.0 + eps
                    && (b == d || self.y_sorted[b] + gamma >= 1.0 - eps)
                {
                    return Some((Partition { a, b }, gamma));
                }
            }
        }
        None
    }

    fn least_violating(&self, s: f64) -> (Partition, f64) {
        let d = self.len();
        let mut best = (Partition { a: d, b: d }, self.boundary_gamma(d), f64::INFINITY);
        for a in 0..=d {
            if (s - (d - a) as f64).abs() <= default_eps(&self.y_sorted) {
                let gamma = self.boundary_gamma(a);
                let gap = match (self.at(a), self.at(a + 1)) {
                    (Some(lo), Some(hi)) => (1.0 - (hi - lo)).max(0.0),
                    _ => 0.0,
                };
                if gap < best.2 {
                    best = (Partition { a, b: a }, gamma, gap);
                }
            }
            for b in a + 1..=d {
                let gamma = self.gamma_unchecked(a, b, s);
                let v = self.violation(a, b, gamma);
                if v < best.2 {
                    best = (Partition { a, b }, gamma, v);
                }
            }
        }
        (best.0, best.1)
    }

    /// Builds the solution for `(p, gamma)` in original index order.
    pub fn assemble(&self, p: Partition, gamma: f64) -> Vec<f64> {
        let mut x = vec![0.0; self.len()];
        for (k, &orig) in self.perm.iter().enumerate() {
            x[orig] = if k < p.a {
                0.0
            } else if k < p.b {
                self.y_sorted[k] + gamma
            } else {
                1.0
            };
        }
        x
    }
}

/// Projection onto the unit-cap simplex with the default tolerance.
pub fn project_capped_simplex(input: &ProjectionInput) -> Result<ProjectionResult> {
    project_capped_simplex_with(input, &ProjectOptions::default())
}

pub fn project_capped_simplex_with(
    input: &ProjectionInput,
    opts: &ProjectOptions,
) -> Result<ProjectionResult> {
    input.validate()?;
    if input.cap != 1.0 {
        return Err(ProjError::InvalidInput(format!(
            "unit-cap solver called with cap {}; use project_capped_box",
            input.cap
        )));
    }
    solve_unit(&input.y, input.s, opts)
}

fn solve_unit(y: &[f64], s: f64, opts: &ProjectOptions) -> Result<ProjectionResult> {
    let inst = sort_with_permutation(y)?;
    let d = inst.len();
    let eps = match opts.eps {
        Some(e) if e.is_finite() && e >= 0.0 => e,
        Some(e) => return Err(ProjError::InvalidInput(format!("eps must be >= 0, got {e}"))),
        None => default_eps(y),
    };

    // The feasible set is the single point 0.
    if s == 0.0 {
        let p = Partition { a: d, b: d };
        let gamma = inst.boundary_gamma(d);
        return Ok(ProjectionResult {
            x: vec![0.0; d],
            gamma,
            partition: p,
            perm: inst.perm,
            fallback: false,
        });
    }

    // Exact comparisons first, then the widened tests, then three retries
    // at 10x the previous tolerance.
    let ladder = [0.0, eps, 10.0 * eps, 100.0 * eps, 1000.0 * eps];
    let mut found = None;
    for (i, &tol) in ladder.iter().enumerate() {
        if i == 1 && eps == 0.0 {
            break;
        }
        if let Some(hit) = inst.search(s, tol) {
            found = Some(hit);
            break;
        }
    }
    let (partition, gamma, fallback) = match found {
        Some((p, g)) => (p, g, false),
        None => {
            let (p, g) = inst.least_violating(s);
            (p, g, true)
        }
    };
    let x = inst.assemble(partition, gamma);
    Ok(ProjectionResult {
        x,
        gamma,
        partition,
        perm: inst.perm,
        fallback,
    })
}

/// Projection onto `{x : sum(x) = s, 0 <= x <= cap}` for any positive cap,
/// by solving the unit-cap problem for `y / cap`, `s / cap` and scaling back.
pub fn project_capped_box(input: &ProjectionInput) -> Result<ProjectionResult> {
    project_capped_box_with(input, &ProjectOptions::default())
}

pub fn project_capped_box_with(input: &ProjectionInput, opts: &ProjectOptions) -> Result<ProjectionResult> {
    input.validate()?;
    let t = input.cap;
    if t == 1.0 {
        return solve_unit(&input.y, input.s, opts);
    }
    let d = input.dim() as f64;
    let y_scaled: Vec<f64> = input.y.iter().map(|v| v / t).collect();
    // s <= t * D was validated; only rounding can push s / t past D.
    let s_scaled = (input.s / t).clamp(0.0, d);
    let inner_opts = ProjectOptions {
        eps: opts.eps.map(|e| e / t),
    };
    let inner = solve_unit(&y_scaled, s_scaled, &inner_opts)?;
    Ok(ProjectionResult {
        x: inner.x.iter().map(|v| v * t).collect(),
        gamma: inner.gamma * t,
        ..inner
    })
}
