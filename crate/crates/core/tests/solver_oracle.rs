mod common;

use common::{oracle_run, random_instance};
use mpp::model::{evaluate_costs, Graph, MppInstance};
use mpp::search::{brute_force_all_plans, pareto_front, solve, Budget};
use mpp::Objective;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn budget(inst: &MppInstance) -> Budget {
    Budget::for_instance(inst, 1).with_states(200_000)
}

#[test]
fn fifty_tiny_instances_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut grouped = 0;
    for i in 0..50 {
        let run = oracle_run(&mut rng);
        assert!(
            run.agrees(),
            "instance {i} (H={}): solver {:?} brute {:?}",
            run.horizon,
            run.solver,
            run.brute
        );
        grouped += usize::from(run.instance.goals().is_none());
    }
    assert!(grouped > 0, "the draw should include grouped instances");
}

#[test]
fn optima_are_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let run = oracle_run(&mut rng);
        let [ta, ms, td, md] = run.solver;
        let n = run.instance.robot_count();
        assert!(ms <= ta && ta <= n * ms);
        assert!(md <= td && md <= ms);
        assert!(td >= run.instance.shortest_distances().iter().sum::<usize>());
    }
}

#[test]
fn pendant_vertex_never_hurts() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let n = rng.gen_range(3..=6);
        let robots = rng.gen_range(1..=2.min(n - 1));
        let inst = random_instance(&mut rng, n, robots);
        let g = inst.graph();
        let anchor = rng.gen_range(0..n);
        let edges = g.edges().iter().copied().chain([(anchor, n)]);
        let bigger = Graph::new(n + 1, edges).unwrap();
        let grown = MppInstance::labeled(bigger, &inst.starts(), &inst.goals().unwrap()).unwrap();
        for obj in Objective::ALL {
            let Ok(before) = solve(&inst, obj, &budget(&inst)) else {
                continue;
            };
            let after = solve(&grown, obj, &budget(&grown)).unwrap();
            assert!(after.value() <= before.value(), "{obj:?} got worse");
        }
    }
}

#[test]
fn front_dominates_every_enumerated_plan() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let pairs = [
        (Objective::TotalArrival, Objective::Makespan),
        (Objective::Makespan, Objective::TotalDistance),
        (Objective::TotalDistance, Objective::MaxDistance),
    ];
    for k in 0..12 {
        let run = oracle_run(&mut rng);
        let inst = &run.instance;
        let (a, b) = pairs[k % pairs.len()];
        let front = pareto_front(inst, (a, b), &budget(inst)).unwrap();
        assert!(front.exhaustive);
        let values = front.values();
        let best_a = solve(inst, a, &budget(inst)).unwrap().value();
        let best_b = solve(inst, b, &budget(inst)).unwrap().value();
        assert_eq!(values.first().unwrap().0, best_a);
        assert_eq!(values.last().unwrap().1, best_b);
        for p in &front.points {
            assert_eq!(evaluate_costs(inst, &p.plan).unwrap(), p.costs);
        }
        for (_, c) in brute_force_all_plans(inst, run.horizon).unwrap() {
            let (x, y) = (c.get(a), c.get(b));
            assert!(
                values.iter().any(|&(fx, fy)| fx <= x && fy <= y),
                "({x},{y}) not dominated by {values:?}"
            );
        }
    }
}
