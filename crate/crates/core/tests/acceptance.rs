//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use capped_proj::bench::{
    mean_times, read_csv, run_benchmark, BenchPlan, BenchRecord, Method, DEFAULT_SIZES,
};
use capped_proj::{
    admm_project, dykstra_project, enumerate_oracle, project_capped_box, project_capped_simplex,
    project_simplex, ProjectionInput, SolverConfig,
};
use common::{integer_s, max_abs_diff, norm2, real_s, rng, wide};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Oracle equivalence on D = 1..8, integer and real s.
fn ac1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for d in 1..=8 {
        for seed in 0..1000u64 {
            for input in [integer_s(d, seed), real_s(d, seed)] {
                let x = project_capped_simplex(&input).unwrap().x;
                let o = enumerate_oracle(&input.y, input.s).unwrap();
                let diff = max_abs_diff(&x, &o);
                check(diff <= 1e-9, || {
                    format!("D={d} seed={seed} s={} diff={diff:e}", input.s)
                })?;
                worst = worst.max(diff);
                count += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{count} instances, max diff {worst:e}, {secs:.2}s"))
}

/// The full reference grid, 20 repetitions, exact method. Shared by the
/// scale and scaling criteria.
fn grid() -> &'static Vec<BenchRecord> {
    static GRID: OnceLock<Vec<BenchRecord>> = OnceLock::new();
    GRID.get_or_init(|| {
        let plan = BenchPlan {
            sizes: DEFAULT_SIZES.to_vec(),
            repetitions: 20,
            methods: vec![Method::Exact],
            base_seed: 2024,
        };
        run_benchmark(&plan).expect("benchmark grid")
    })
}

/// KKT certification at D = 1e3, 1e4, 1e5, 20 instances each, each under
/// 120 s.
fn ac2() -> Outcome {
    let mut worst_res = 0.0_f64;
    let mut worst_time = 0.0_f64;
    for &d in &[1000usize, 10_000, 100_000] {
        let recs: Vec<_> = grid().iter().filter(|r| r.d == d).collect();
        check(recs.len() == 20, || format!("D={d}: {} records", recs.len()))?;
        for r in recs {
            check(r.max_kkt_residual <= 1e-8, || {
                format!("D={d} seed={} residual {:e}", r.seed, r.max_kkt_residual)
            })?;
            check(r.wall_time_seconds < 120.0, || {
                format!("D={d} seed={} took {:.1}s", r.seed, r.wall_time_seconds)
            })?;
            worst_res = worst_res.max(r.max_kkt_residual);
            worst_time = worst_time.max(r.wall_time_seconds);
        }
    }
    Ok(format!(
        "max residual {worst_res:e}, slowest instance {worst_time:.2}s"
    ))
}

/// Mean time nondecreasing in D over the grid; every size solved.
fn ac3() -> Outcome {
    let records = grid();
    check(records.iter().all(|r| r.converged), || {
        "exact solver reported non-convergence".into()
    })?;
    let means = mean_times(records);
    check(means.len() == DEFAULT_SIZES.len(), || {
        format!("{} sizes solved", means.len())
    })?;
    for w in means.windows(2) {
        check(w[1].2 >= w[0].2, || {
            format!(
                "mean time drops from D={} ({:e}s) to D={} ({:e}s)",
                w[0].1, w[0].2, w[1].1, w[1].2
            )
        })?;
    }
    let table: Vec<String> = means.iter().map(|(_, d, t)| format!("{d}:{t:.2e}")).collect();
    Ok(format!("mean seconds {}", table.join(" ")))
}

/// Special cases: s = 0, s = D, s <= 1 against the simplex projection, and
/// the a = b branch.
fn ac4() -> Outcome {
    let mut r = rng(4);
    for trial in 0..500 {
        let d = r.gen_range(1..=60);
        let y: Vec<f64> = (0..d).map(|_| r.gen_range(-3.0..3.0)).collect();
        let zero = project_capped_simplex(&ProjectionInput::new(y.clone(), 0.0).unwrap()).unwrap();
        check(zero.x.iter().all(|&v| v == 0.0), || {
            format!("trial {trial}: s=0 gave {:?}", zero.x)
        })?;
        let full = project_capped_simplex(&ProjectionInput::new(y.clone(), d as f64).unwrap()).unwrap();
        check(full.x.iter().all(|&v| v == 1.0), || {
            format!("trial {trial}: s=D gave {:?}", full.x)
        })?;

        let s = r.gen_range(0.0..=1.0);
        let exact = project_capped_simplex(&ProjectionInput::new(y.clone(), s).unwrap()).unwrap();
        let simplex = project_simplex(&y, s).unwrap();
        let diff = max_abs_diff(&exact.x, &simplex);
        check(diff <= 1e-10, || {
            format!("trial {trial}: s={s} simplex diff {diff:e}")
        })?;
    }

    let mut degenerate = vec![(vec![0.0, 5.0], 1.0)];
    for _ in 0..200 {
        let d = r.gen_range(1..=8);
        let a = r.gen_range(0..=d);
        let gap = r.gen_range(1.0..3.0);
        let mut y: Vec<f64> = (0..d)
            .map(|k| {
                if k < a {
                    r.gen_range(-1.0..0.0)
                } else {
                    r.gen_range(0.0..1.0) + gap
                }
            })
            .collect();
        y.shuffle(&mut r);
        degenerate.push((y, (d - a) as f64));
    }
    for (y, s) in &degenerate {
        let res = project_capped_simplex(&ProjectionInput::new(y.clone(), *s).unwrap()).unwrap();
        check(res.partition.a == res.partition.b, || {
            format!("y={y:?} s={s}: partition {:?} is not degenerate", res.partition)
        })?;
        let o = enumerate_oracle(y, *s).unwrap();
        check(max_abs_diff(&res.x, &o) <= 1e-12, || {
            format!("y={y:?} s={s}: {:?} vs oracle {o:?}", res.x)
        })?;
    }
    let first = project_capped_simplex(&ProjectionInput::new(vec![0.0, 5.0], 1.0).unwrap()).unwrap();
    check(first.x == vec![0.0, 1.0], || {
        format!("[0,5], s=1 gave {:?}", first.x)
    })?;
    Ok(format!(
        "500 random trials, {} degenerate instances",
        degenerate.len()
    ))
}

/// Idempotency, nonexpansiveness, permutation equivariance, translation
/// invariance over 10 000 trials with D <= 50.
fn ac5() -> Outcome {
    let mut r = rng(5);
    let (mut idem, mut perm_err, mut shift_err, mut expand) = (0.0_f64, 0.0_f64, 0.0_f64, f64::NEG_INFINITY);
    for trial in 0..10_000 {
        let d = r.gen_range(1..=50);
        let input = wide(d, &mut r);
        let p = project_capped_simplex(&input).unwrap().x;

        let again = project_capped_simplex(&ProjectionInput::new(p.clone(), input.s).unwrap())
            .unwrap()
            .x;
        let e = max_abs_diff(&again, &p);
        check(e <= 1e-12, || format!("trial {trial}: idempotency error {e:e}"))?;
        idem = idem.max(e);

        let y2: Vec<f64> = input.y.iter().map(|v| v + r.gen_range(-1.0..1.0)).collect();
        let p2 = project_capped_simplex(&ProjectionInput::new(y2.clone(), input.s).unwrap())
            .unwrap()
            .x;
        let lhs = norm2(&p, &p2);
        let rhs = norm2(&input.y, &y2);
        check(lhs <= rhs + 1e-12, || {
            format!("trial {trial}: |P(y1)-P(y2)| = {lhs} > {rhs}")
        })?;
        expand = expand.max(lhs - rhs);

        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(&mut r);
        let permuted: Vec<f64> = order.iter().map(|&i| input.y[i]).collect();
        let pp = project_capped_simplex(&ProjectionInput::new(permuted, input.s).unwrap())
            .unwrap()
            .x;
        let mut back = vec![0.0; d];
        for (k, &i) in order.iter().enumerate() {
            back[i] = pp[k];
        }
        let e = max_abs_diff(&back, &p);
        check(e <= 1e-12, || format!("trial {trial}: permutation error {e:e}"))?;
        perm_err = perm_err.max(e);

        let c = r.gen_range(-10.0..=10.0);
        let shifted: Vec<f64> = input.y.iter().map(|v| v + c).collect();
        let ps = project_capped_simplex(&ProjectionInput::new(shifted, input.s).unwrap())
            .unwrap()
            .x;
        let e = max_abs_diff(&ps, &p);
        check(e <= 1e-9, || {
            format!("trial {trial}: translation by {c} error {e:e}")
        })?;
        shift_err = shift_err.max(e);
    }
    Ok(format!(
        "idempotency {idem:e}, permutation {perm_err:e}, translation {shift_err:e}, max(|dP|-|dy|) {expand:e}"
    ))
}

/// Caps 0.5, 2 and 7.3 against the oracle on the rescaled instance.
fn ac6() -> Outcome {
    let mut r = rng(6);
    let mut worst = 0.0_f64;
    for &t in &[0.5, 2.0, 7.3] {
        for trial in 0..500 {
            let d = r.gen_range(1..=8);
            let y: Vec<f64> = (0..d).map(|_| r.gen_range(-t..2.0 * t)).collect();
            let s = if trial % 4 == 0 {
                (r.gen_range(0..=d) as f64) * t
            } else {
                r.gen::<f64>() * t * d as f64
            };
            let s = s.min(t * d as f64);
            let x = project_capped_box(&ProjectionInput::with_cap(y.clone(), s, t).unwrap())
                .unwrap()
                .x;
            let scaled: Vec<f64> = y.iter().map(|v| v / t).collect();
            let o: Vec<f64> = enumerate_oracle(&scaled, (s / t).min(d as f64))
                .unwrap()
                .into_iter()
                .map(|v| v * t)
                .collect();
            let diff = max_abs_diff(&x, &o);
            check(diff <= 1e-9, || format!("t={t} trial {trial}: diff {diff:e}"))?;
            worst = worst.max(diff);
        }
    }
    Ok(format!("1500 trials, max diff {worst:e}"))
}

/// Dykstra and ADMM reach the exact solution on 100 instances, D <= 1000.
fn ac7() -> Outcome {
    let cfg = SolverConfig {
        tol: 1e-8,
        max_iters: 100_000,
        rho: 1.0,
    };
    let mut r = rng(7);
    let (mut worst_dyk, mut worst_admm) = (0.0_f64, 0.0_f64);
    let (mut it_dyk, mut it_admm) = (0usize, 0usize);
    for trial in 0..100u64 {
        let d = r.gen_range(1..=1000);
        let input = if trial % 2 == 0 {
            integer_s(d, 700 + trial)
        } else {
            real_s(d, 700 + trial)
        };
        let exact = project_capped_simplex(&input).unwrap().x;
        let dy = dykstra_project(&input, &cfg).unwrap();
        let ad = admm_project(&input, &cfg).unwrap();
        check(dy.converged && ad.converged, || {
            format!(
                "trial {trial} D={d}: converged dykstra={} admm={}",
                dy.converged, ad.converged
            )
        })?;
        let (e1, e2) = (max_abs_diff(&dy.x, &exact), max_abs_diff(&ad.x, &exact));
        check(e1 <= 1e-6 && e2 <= 1e-6, || {
            format!("trial {trial} D={d}: dykstra {e1:e}, admm {e2:e}")
        })?;
        worst_dyk = worst_dyk.max(e1);
        worst_admm = worst_admm.max(e2);
        it_dyk = it_dyk.max(dy.iterations);
        it_admm = it_admm.max(ad.iterations);
    }
    Ok(format!(
        "dykstra max err {worst_dyk:e} (<= {it_dyk} iters), admm max err {worst_admm:e} (<= {it_admm} iters)"
    ))
}

fn cli(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_capped-proj"))
        .args(args)
        .current_dir(dir)
        .env_remove("CAPPED_PROJ_EPS")
        .output()
        .expect("run capped-proj");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// CLI golden files and benchmark determinism.
fn ac8() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("vec.txt"), "0.3 \u{2212}0.2 1.5\n").unwrap();

    let (code, out, err) = cli(dir, &["project", "--s", "2", "--input", "vec.txt"]);
    check(code == 0 && out == "0.75 0.25 1\n", || {
        format!("project: exit {code}, out {out:?}, err {err:?}")
    })?;

    std::fs::write(dir.join("y.txt"), "0.3 -0.2 1.5\n").unwrap();
    std::fs::write(dir.join("x.txt"), &out).unwrap();
    let (code, out, err) = cli(
        dir,
        &["verify", "--s", "2", "--input", "x.txt", "--against", "y.txt"],
    );
    check(code == 0 && out.contains("result PASS"), || {
        format!("verify: exit {code}, out {out:?}, err {err:?}")
    })?;

    let (code, out, err) = cli(dir, &["project", "--s", "-1", "--input", "vec.txt"]);
    check(code == 3 && err.contains("infeasible") && out.is_empty(), || {
        format!("infeasible: exit {code}, err {err:?}")
    })?;
    check(err.trim_end().lines().count() == 1, || {
        format!("diagnostic is not one line: {err:?}")
    })?;

    let bench = |name: &str| {
        let (code, _, err) = cli(
            dir,
            &[
                "bench",
                "--sizes",
                "8,50,200",
                "--reps",
                "3",
                "--methods",
                "exact,oracle",
                "--seed",
                "11",
                "--csv",
                name,
            ],
        );
        (code, err)
    };
    // Oracle is capped at D = 14, so this must fail before writing anything.
    let (code, err) = bench("bad.csv");
    check(code == 3 && !dir.join("bad.csv").exists(), || {
        format!("oracle capacity: exit {code}, err {err:?}")
    })?;

    let run = |name: &str| {
        let (code, _, err) = cli(
            dir,
            &[
                "bench",
                "--sizes",
                "8,50,200",
                "--reps",
                "3",
                "--methods",
                "exact,dykstra,admm",
                "--seed",
                "11",
                "--csv",
                name,
            ],
        );
        assert_eq!(code, 0, "{err}");
        read_csv(std::fs::File::open(dir.join(name)).unwrap()).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    check(a.len() == 27 && b.len() == 27, || {
        format!("record counts {} {}", a.len(), b.len())
    })?;
    let strip = |r: &BenchRecord| (r.method, r.d, r.s, r.seed, r.max_kkt_residual, r.converged);
    check(a.iter().map(strip).eq(b.iter().map(strip)), || {
        "bench runs differ in non-time columns".into()
    })?;
    let header = std::fs::read_to_string(dir.join("a.csv")).unwrap();
    check(
        header.lines().next() == Some("method,D,s,seed,wall_time_seconds,max_kkt_residual,converged"),
        || "csv header mismatch".into(),
    )?;
    Ok("golden project/verify/infeasible, bench determinism over 27 records".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "oracle equivalence D<=8", ac1),
        ("AC2", "KKT certification at scale", ac2),
        ("AC3", "scaling over the reference grid", ac3),
        ("AC4", "special cases", ac4),
        ("AC5", "projection properties", ac5),
        ("AC6", "cap generalization", ac6),
        ("AC7", "iterative baselines converge", ac7),
        ("AC8", "CLI contract", ac8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, f) in criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|p| id.contains(p.as_str()) || name.contains(p.as_str()))
        {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id} {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
