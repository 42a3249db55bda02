//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{adversarial_case, oracle_run, random_satisfiable, Kind};
use mpp::model::{evaluate_costs, path_lengths, Objective};
use mpp::pareto::{nondominated, verify_tradeoff, Family};
use mpp::reduce::{
    apply_two_groups, decode_assignment, reduce_to_m3pp, reduce_to_mmd, reduce_to_mtat, reduce_to_mtd,
    synthesize_witness_distance, synthesize_witness_time, ReductionOutput,
};
use mpp::sat3::Sat3Instance;
use mpp::search::{solve, Budget};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use Objective::*;

type Outcome = Result<String, String>;

/// Name, wall-clock limit in minutes, check.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn c1_puzzle() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let inst = dir.path().join("npuzzle3.json");
    let inst = inst.to_str().expect("utf-8 temp path");
    let bin = env!("CARGO_BIN_EXE_mpp");
    let gen = Command::new(bin).args(["gen", "npuzzle", "3", "--out", inst]).output();
    ensure!(gen.as_ref().is_ok_and(|o| o.status.success()), "gen failed: {gen:?}");
    let out = Command::new(bin)
        .args(["solve", inst, "--objective", "makespan"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let line = stdout
        .lines()
        .find_map(|l| l.strip_prefix("summary: "))
        .ok_or("no summary line")?;
    ensure!(out.status.success(), "exit {:?}: {line}", out.status.code());
    ensure!(line.split_whitespace().any(|kv| kv == "value=4"), "{line}");
    Ok("makespan 4".into())
}

fn two_vectors(x: usize) -> Vec<(usize, usize)> {
    nondominated(&[(2 * x + 3, x + 1), (x + 12, x + 4)])
}

fn cycle_fronts(pair: (Objective, Objective)) -> Outcome {
    let checks = verify_tradeoff(Family::Cycle, 1..=12, pair, 1).map_err(|e| e.to_string())?;
    for c in &checks {
        ensure!(c.exhaustive, "x={} front not exhaustive", c.param);
        ensure!(c.front == two_vectors(c.param), "x={}: {:?}", c.param, c.front);
    }
    Ok(format!("{} x values", checks.len()))
}

fn c2_cycle() -> Outcome {
    for x in 1..=12 {
        let started = Instant::now();
        let checks = verify_tradeoff(Family::Cycle, [x], (TotalArrival, Makespan), 1).map_err(|e| e.to_string())?;
        let c = &checks[0];
        ensure!(c.exhaustive && c.front == two_vectors(x), "x={x}: {:?}", c.front);
        ensure!((c.front.len() == 2) == (x > 9), "x={x}: {} points", c.front.len());
        ensure!(started.elapsed() < minutes(1), "x={x} took {:?}", started.elapsed());
    }
    Ok("x=1..12, two points iff x>9".into())
}

fn c3_pairings() -> Outcome {
    let pairs = [(TotalDistance, MaxDistance), (TotalArrival, MaxDistance), (TotalDistance, Makespan)];
    for pair in pairs {
        cycle_fronts(pair).map_err(|e| format!("{}/{}: {e}", pair.0.name(), pair.1.name()))?;
    }
    Ok("3 pairings, x=1..12".into())
}

fn c4_twopath() -> Outcome {
    let checks = verify_tradeoff(Family::TwoPath, [1], (TotalArrival, TotalDistance), 1).map_err(|e| e.to_string())?;
    ensure!(checks[0].exhaustive, "front not exhaustive");
    ensure!(checks[0].front == vec![(16, 13), (18, 12)], "{:?}", checks[0].front);
    Ok("{(16,13), (18,12)}".into())
}

fn cost_of(red: &ReductionOutput, plan: &mpp::Plan) -> Result<mpp::CostVector, String> {
    evaluate_costs(&red.instance, plan).map_err(|e| e.to_string())
}

fn c5_mtat() -> Outcome {
    let sat = Sat3Instance::example();
    let red = reduce_to_mtat(&sat);
    ensure!(red.k == 35, "K={}", red.k);
    ensure!(red.instance.shortest_distances() == vec![5; 7], "{:?}", red.instance.shortest_distances());
    let a = sat.solve_brute_force().map_err(|e| e.to_string())?.ok_or("formula unsatisfiable")?;
    let c = cost_of(&red, &synthesize_witness_time(&red, &a).map_err(|e| e.to_string())?)?;
    ensure!((c.total_arrival_time, c.makespan) == (35, 5), "{c:?}");
    let all = sat.all_solutions().map_err(|e| e.to_string())?;
    for s in &all {
        let plan = synthesize_witness_time(&red, s).map_err(|e| e.to_string())?;
        ensure!(decode_assignment(&red, &plan).as_ref() == Ok(s), "round trip failed for {s:?}");
    }
    Ok(format!("K=35, witness (35,5), {} assignments round-trip", all.len()))
}

fn c6_m3pp() -> Outcome {
    let sat = Sat3Instance::example();
    let red = reduce_to_m3pp(&sat);
    ensure!(red.k == 5, "K={}", red.k);
    let a = sat.solve_brute_force().map_err(|e| e.to_string())?.ok_or("formula unsatisfiable")?;
    let c = cost_of(&red, &synthesize_witness_time(&red, &a).map_err(|e| e.to_string())?)?;
    ensure!(c.makespan == 5, "makespan {}", c.makespan);
    let grouped = apply_two_groups(&red).map_err(|e| e.to_string())?;
    let c = cost_of(&grouped, &synthesize_witness_time(&grouped, &a).map_err(|e| e.to_string())?)?;
    ensure!(c.makespan == 5, "grouped makespan {}", c.makespan);
    let v = |s: &str| grouped.vertex(s).ok_or(format!("no vertex {s}"));
    let d = grouped.instance.graph().shortest_distance(v("v_c1")?, v("v_c3^g")?);
    ensure!(d == 3, "dist(v_c1, v_c3^g) = {d}");
    Ok("K=5, witness 5, grouped witness 5, dist(v_c1, v_c3^g)=3".into())
}

fn c7_exact() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..20 {
        let m = rng.gen_range(1..=2);
        let sat = random_satisfiable(&mut rng, 3, m);
        let red = reduce_to_mtat(&sat);
        ensure!(red.k == (3 + m) * (m + 2), "round {round}: K={}", red.k);
        ensure!(red.k == red.shortest_distance_bound(), "round {round}: K is not the lower bound");
        let best = solve(&red.instance, TotalArrival, &Budget::for_instance(&red.instance, 1))
            .map_err(|e| format!("round {round}: {e}"))?;
        ensure!(best.value() == red.k, "round {round}: optimum {} vs K={}", best.value(), red.k);
        let a = decode_assignment(&red, &best.plan).map_err(|e| format!("round {round}: {e}"))?;
        ensure!(sat.evaluate(&a) == Ok(true), "round {round}: decoded {a:?} falsifies");
    }
    Ok("20 formulas, optimum = K, decoded assignments satisfy".into())
}

fn distance_of(red: &ReductionOutput, start: &str) -> Result<usize, String> {
    let s = red.vertex(start).ok_or(format!("no vertex {start}"))?;
    let r = red.instance.starts().iter().position(|&v| v == s).ok_or(format!("{start} unoccupied"))?;
    Ok(red.instance.shortest_distances()[r])
}

fn c8_mtd() -> Outcome {
    let sat = Sat3Instance::example();
    let red = reduce_to_mtd(&sat);
    for j in 1..=3 {
        for (start, want) in [("1s", 5), ("2s", 7), ("3s", 7), ("s", 6), ("1g", 3)] {
            let d = distance_of(&red, &format!("v_c{j}^{start}"))?;
            ensure!(d == want, "v_c{j}^{start}: {d} instead of {want}");
        }
    }
    let dist = red.instance.shortest_distances();
    ensure!(dist.len() == 55, "{} robots", dist.len());
    ensure!(red.k == dist.iter().sum::<usize>() && red.k == 257, "K={}", red.k);
    let a = sat.solve_brute_force().map_err(|e| e.to_string())?.ok_or("formula unsatisfiable")?;
    let plan = synthesize_witness_distance(&red, &a).map_err(|e| e.to_string())?;
    let c = cost_of(&red, &plan)?;
    ensure!(c.total_distance == red.k, "witness total distance {}", c.total_distance);
    ensure!(path_lengths(&plan) == dist, "per-robot lengths differ from minima");
    Ok("clause and exchange distances exact, K=257 over 55 robots, witness 257".into())
}

fn c9_mmd() -> Outcome {
    let sat = Sat3Instance::example();
    let red = reduce_to_mmd(&sat);
    ensure!(red.instance.shortest_distances().iter().all(|&d| d == 7), "not all distances 7");
    ensure!(red.k == 7, "K={}", red.k);
    let a = sat.solve_brute_force().map_err(|e| e.to_string())?.ok_or("formula unsatisfiable")?;
    let c = cost_of(&red, &synthesize_witness_distance(&red, &a).map_err(|e| e.to_string())?)?;
    ensure!(c.max_distance == 7, "witness max distance {}", c.max_distance);
    Ok("all distances 7, K=7, witness 7".into())
}

fn c10_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..50 {
        let run = oracle_run(&mut rng);
        ensure!(
            run.instance.robot_count() <= 3 && run.instance.graph().vertex_count() <= 8,
            "instance {i} too large"
        );
        ensure!(run.agrees(), "instance {i}: solver {:?} brute {:?}", run.solver, run.brute);
    }
    Ok("50 instances, all four optima equal brute force".into())
}

fn c11_validator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let per_kind = 250;
    for kind in [Kind::HeadOn, Kind::Meet, Kind::Rotation, Kind::Freeze] {
        let agreed = (0..per_kind)
            .filter(|_| adversarial_case(&mut rng, kind).validator_agrees())
            .count();
        ensure!(agreed == per_kind, "{kind:?}: {agreed}/{per_kind}");
    }
    Ok(format!("{per_kind} cases each of head-on, meet, rotation, freeze"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("npuzzle 3 makespan", Some(2), c1_puzzle),
        ("cycle family (total arrival, makespan)", None, c2_cycle),
        ("cycle family distance pairings", None, c3_pairings),
        ("two-path base front", None, c4_twopath),
        ("MTAT on the example formula", Some(1), c5_mtat),
        ("M3PP and two groups", None, c6_m3pp),
        ("exact MTAT cross-check", Some(5), c7_exact),
        ("MTD on the example formula", Some(2), c8_mtd),
        ("MMD on the example formula", Some(2), c9_mmd),
        ("solver/brute-force equivalence", Some(10), c10_oracle),
        ("validator adversarial cases", None, c11_validator),
    ];
    let mut failed = 0;
    for (i, &(name, limit, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = started.elapsed();
        let outcome = match limit {
            Some(m) if elapsed >= minutes(m) => Err(format!("exceeded {m} min")),
            _ => outcome,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: {} of {} criteria passed", criteria.len(), criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
