//! Timing harness: every method sees the same generated instances, and each
//! measurement is one CSV row.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{admm_project, dykstra_project, SolverConfig};
use crate::error::{ProjError, Result};
use crate::kkt::{certify, kkt_residuals, recover_multipliers_capped};
use crate::oracle::{enumerate_oracle, random_instance, InstanceSpec, MAX_ORACLE_DIM};
use crate::projection::{project_capped_box_with, ProjectOptions, ProjectionInput};

/// Problem sizes of the reference timing table.
pub const DEFAULT_SIZES: [usize; 9] = [50, 100, 500, 1000, 2000, 5000, 10000, 20000, 100000];
pub const DEFAULT_REPETITIONS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Dykstra,
    Admm,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Exact, Method::Dykstra, Method::Admm, Method::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Dykstra => "dykstra",
            Method::Admm => "admm",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = ProjError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| ProjError::InvalidInput(format!("unknown method {s:?}")))
    }
}

/// Parses a comma-separated method list.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: Method,
    #[serde(rename = "D")]
    pub d: usize,
    pub s: f64,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub max_kkt_residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub sizes: Vec<usize>,
    pub repetitions: usize,
    pub methods: Vec<Method>,
    pub base_seed: u64,
}

impl Default for BenchPlan {
    fn default() -> Self {
        Self {
            sizes: DEFAULT_SIZES.to_vec(),
            repetitions: DEFAULT_REPETITIONS,
            methods: vec![Method::Exact],
            base_seed: 0,
        }
    }
}

impl BenchPlan {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(ProjError::InvalidInput(
                "sizes must be a nonempty list of positive D".into(),
            ));
        }
        if self.repetitions == 0 {
            return Err(ProjError::InvalidInput("repetitions must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(ProjError::InvalidInput("at least one method is required".into()));
        }
        if self.methods.contains(&Method::Oracle) {
            if let Some(&d) = self.sizes.iter().find(|&&d| d > MAX_ORACLE_DIM) {
                return Err(ProjError::Capacity {
                    d,
                    max: MAX_ORACLE_DIM,
                });
            }
        }
        Ok(())
    }
}

/// Outcome of one solver call.
#[derive(Debug, Clone, PartialEq)]
pub struct Solve {
    pub x: Vec<f64>,
    pub seconds: f64,
    pub converged: bool,
    pub iterations: usize,
    pub max_kkt_residual: f64,
}

/// Runs one method on `input`, timing only the solver call. `eps` overrides
/// the exact solver's comparison tolerance.
pub fn solve_with(
    method: Method,
    input: &ProjectionInput,
    cfg: &SolverConfig,
    eps: Option<f64>,
) -> Result<Solve> {
    let start = Instant::now();
    let (x, converged, iterations, exact) = match method {
        Method::Exact => {
            let r = project_capped_box_with(input, &ProjectOptions { eps })?;
            (r.x.clone(), true, 1, Some(r))
        }
        Method::Dykstra => {
            let r = dykstra_project(input, cfg)?;
            (r.x, r.converged, r.iterations, None)
        }
        Method::Admm => {
            let r = admm_project(input, cfg)?;
            (r.x, r.converged, r.iterations, None)
        }
        Method::Oracle => {
            let t = input.cap;
            let scaled: Vec<f64> = input.y.iter().map(|v| v / t).collect();
            let x = enumerate_oracle(&scaled, (input.s / t).min(input.dim() as f64))?;
            (x.into_iter().map(|v| v * t).collect(), true, 1, None)
        }
    };
    let seconds = start.elapsed().as_secs_f64();

    let cert = match &exact {
        Some(r) => recover_multipliers_capped(&input.y, &r.x, r.gamma, r.partition, input.cap)?,
        None => certify(input, &x)?.1,
    };
    let report = kkt_residuals(input, &x, &cert, 0.0)?;
    Ok(Solve {
        x,
        seconds,
        converged,
        iterations,
        max_kkt_residual: report.max_residual(),
    })
}

/// One record per (D, repetition, method); repetition `r` uses seed
/// `base_seed + r` for every method and size.
pub fn run_benchmark(plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    run_benchmark_with(plan, &SolverConfig::default(), None)
}

pub fn run_benchmark_with(
    plan: &BenchPlan,
    cfg: &SolverConfig,
    eps: Option<f64>,
) -> Result<Vec<BenchRecord>> {
    plan.validate()?;
    cfg.validate()?;
    let mut records = Vec::with_capacity(plan.sizes.len() * plan.repetitions * plan.methods.len());
    for &d in &plan.sizes {
        for rep in 0..plan.repetitions {
            let seed = plan.base_seed.wrapping_add(rep as u64);
            let input = random_instance(InstanceSpec { d, seed })?;
            for &method in &plan.methods {
                let out = solve_with(method, &input, cfg, eps)?;
                records.push(BenchRecord {
                    method,
                    d,
                    s: input.s,
                    seed,
                    wall_time_seconds: out.seconds,
                    max_kkt_residual: out.max_kkt_residual,
                    converged: out.converged,
                });
            }
        }
    }
    Ok(records)
}

/// Mean wall time per (method, D), in first-seen order.
pub fn mean_times(records: &[BenchRecord]) -> Vec<(Method, usize, f64)> {
    let mut acc: Vec<(Method, usize, f64, usize)> = Vec::new();
    for r in records {
        match acc.iter_mut().find(|(m, d, _, _)| *m == r.method && *d == r.d) {
            Some(e) => {
                e.2 += r.wall_time_seconds;
                e.3 += 1;
            }
            None => acc.push((r.method, r.d, r.wall_time_seconds, 1)),
        }
    }
    acc.into_iter().map(|(m, d, t, n)| (m, d, t / n as f64)).collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)
            .map_err(|e| ProjError::Internal(format!("csv write: {e}")))?;
    }
    w.flush()
        .map_err(|e| ProjError::Internal(format!("csv write: {e}")))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| ProjError::InvalidInput(format!("csv read: {e}"))))
        .collect()
}
