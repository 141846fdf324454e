//! Euclidean projection onto the capped simplex
//! `{x in R^D : sum(x) = s, 0 <= x <= cap}`.
//!
//! [`projection`] holds the exact partition-search solver, [`kkt`] builds and
//! checks optimality certificates, [`baselines`] has the simplex projection
//! and the iterative Dykstra/ADMM solvers, [`oracle`] the 3^D brute-force
//! solver and the instance generator, and [`bench`] the timing harness.

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod error;
pub mod kkt;
pub mod oracle;
pub mod projection;
pub mod vecio;

pub use baselines::{
    admm_project, admm_project_warm, clamp_upper, dykstra_project, project_simplex, AdmmState,
    IterativeResult, SolverConfig,
};
pub use bench::{run_benchmark, BenchPlan, BenchRecord, Method};
pub use error::{ProjError, Result};
pub use kkt::{
    certify, feasibility_check, kkt_residuals, recover_multipliers, recover_multipliers_capped,
    KktCertificate, KktReport,
};
pub use oracle::{enumerate_oracle, random_instance, InstanceSpec, MAX_ORACLE_DIM};
pub use projection::{
    default_eps, project_capped_box, project_capped_box_with, project_capped_simplex,
    project_capped_simplex_with, sort_with_permutation, Partition, ProjectOptions, ProjectionInput,
    ProjectionResult, SortedInstance,
};
