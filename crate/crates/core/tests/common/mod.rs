#![allow(dead_code)]

use std::collections::BTreeMap;

use mpp::model::{
    evaluate_costs, validate_plan, Graph, GroupId, MppInstance, Objective, Plan, Robot, VertexId,
    Violation,
};
use mpp::sat3::{Literal, Sat3Instance};
use mpp::search::{brute_force_minima, solve, Budget};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !edges.contains(&(a, b)) && !edges.contains(&(b, a)) {
            edges.push((a, b));
        }
    }
    Graph::new(n, edges).expect("spanning tree keeps the graph connected")
}

/// Labeled instance with distinct random starts and goals.
pub fn random_instance(rng: &mut ChaCha8Rng, vertices: usize, robots: usize) -> MppInstance {
    let extra = rng.gen_range(0..=vertices);
    sparse_instance(rng, vertices, robots, extra)
}

/// Labeled instance on a spanning tree with up to `extra` added edges.
pub fn sparse_instance(rng: &mut ChaCha8Rng, vertices: usize, robots: usize, extra: usize) -> MppInstance {
    let graph = random_graph(rng, vertices, extra);
    let mut pool: Vec<VertexId> = (0..vertices).collect();
    pool.shuffle(rng);
    let starts = pool[..robots].to_vec();
    pool.shuffle(rng);
    let goals = pool[..robots].to_vec();
    MppInstance::labeled(graph, &starts, &goals).expect("distinct starts and goals")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    HeadOn,
    Meet,
    Rotation,
    Freeze,
}

pub struct Case {
    pub kind: Kind,
    pub instance: MppInstance,
    pub plan: Plan,
}

impl Case {
    /// Whether the validator reacts as the case demands.
    pub fn validator_agrees(&self) -> bool {
        let report = validate_plan(&self.instance, &self.plan).expect("well-formed plan");
        let v = &report.violations;
        match self.kind {
            Kind::Rotation => report.is_ok(),
            Kind::HeadOn => v.iter().any(|x| matches!(x, Violation::HeadOn { .. })),
            Kind::Meet => v.iter().any(|x| matches!(x, Violation::Meet { .. })),
            Kind::Freeze => v.iter().any(|x| matches!(x, Violation::LeftGoal { .. })),
        }
    }
}

fn neighbor(rng: &mut ChaCha8Rng, g: &Graph, v: VertexId) -> VertexId {
    *g.neighbors(v).choose(rng).expect("connected graph with two or more vertices")
}

/// Two robots trade places across an edge.
pub fn head_on_case(rng: &mut ChaCha8Rng) -> Case {
    let n = rng.gen_range(2..=8);
    let extra = rng.gen_range(0..n);
    let g = random_graph(rng, n, extra);
    let u = rng.gen_range(0..n);
    let v = neighbor(rng, &g, u);
    let instance = MppInstance::labeled(g, &[u, v], &[v, u]).unwrap();
    let plan = Plan::from_paths(vec![vec![u, v], vec![v, u]]).unwrap();
    Case {
        kind: Kind::HeadOn,
        instance,
        plan,
    }
}

/// A robot steps onto a vertex another robot holds or enters.
pub fn meet_case(rng: &mut ChaCha8Rng) -> Case {
    let n = rng.gen_range(3..=8);
    let extra = rng.gen_range(0..n);
    let g = random_graph(rng, n, extra);
    let w = rng.gen_range(0..n);
    let a = neighbor(rng, &g, w);
    let candidates: Vec<VertexId> = g.neighbors(w).iter().copied().filter(|&x| x != a).collect();
    let (b, b_next) = match candidates.choose(rng) {
        // both enter w from different sides
        Some(&b) if rng.gen_bool(0.5) => (b, w),
        // b is already on w and waits
        _ => (w, w),
    };
    let goal_a = w;
    let goal_b = (0..n).find(|&x| x != w && x != a && x != b).unwrap_or(a);
    let instance = MppInstance::labeled(g, &[a, b], &[goal_a, goal_b]).unwrap();
    let plan = Plan::from_paths(vec![vec![a, w], vec![b, b_next]]).unwrap();
    Case {
        kind: Kind::Meet,
        instance,
        plan,
    }
}

/// A fully occupied cycle, possibly with pendant vertices, turning k < L steps.
pub fn rotation_case(rng: &mut ChaCha8Rng) -> Case {
    let len = rng.gen_range(3..=8);
    let pendants = rng.gen_range(0..=3);
    let mut edges: Vec<(usize, usize)> = (0..len).map(|v| (v, (v + 1) % len)).collect();
    for p in 0..pendants {
        edges.push((rng.gen_range(0..len), len + p));
    }
    let g = Graph::new(len + pendants, edges).unwrap();
    let k = rng.gen_range(1..len);
    let forward = rng.gen_bool(0.5);
    let step = |v: usize, s: usize| if forward { (v + s) % len } else { (v + len * s - s) % len };
    let paths: Vec<Vec<VertexId>> = (0..len).map(|v| (0..=k).map(|s| step(v, s)).collect()).collect();
    let starts: Vec<_> = (0..len).collect();
    let goals: Vec<_> = paths.iter().map(|p| p[k]).collect();
    let instance = MppInstance::labeled(g, &starts, &goals).unwrap();
    Case {
        kind: Kind::Rotation,
        instance,
        plan: Plan::from_paths(paths).unwrap(),
    }
}

/// A lone robot reaches its goal, steps off, and comes back.
pub fn freeze_case(rng: &mut ChaCha8Rng) -> Case {
    let n = rng.gen_range(2..=8);
    let extra = rng.gen_range(0..n);
    let g = random_graph(rng, n, extra);
    let goal = rng.gen_range(0..n);
    let start = neighbor(rng, &g, goal);
    let off = neighbor(rng, &g, goal);
    let mut path = vec![start, goal, off, goal];
    for _ in 0..rng.gen_range(0..3) {
        path.push(goal);
    }
    let instance = MppInstance::labeled(g, &[start], &[goal]).unwrap();
    Case {
        kind: Kind::Freeze,
        instance,
        plan: Plan::from_paths(vec![path]).unwrap(),
    }
}

pub fn adversarial_case(rng: &mut ChaCha8Rng, kind: Kind) -> Case {
    match kind {
        Kind::HeadOn => head_on_case(rng),
        Kind::Meet => meet_case(rng),
        Kind::Rotation => rotation_case(rng),
        Kind::Freeze => freeze_case(rng),
    }
}

/// Instance with robots split into at most two groups.
pub fn random_grouped_instance(rng: &mut ChaCha8Rng, vertices: usize, robots: usize, extra: usize) -> MppInstance {
    let graph = random_graph(rng, vertices, extra);
    let mut pool: Vec<VertexId> = (0..vertices).collect();
    pool.shuffle(rng);
    let starts = pool[..robots].to_vec();
    pool.shuffle(rng);
    let mut groups: BTreeMap<GroupId, Vec<VertexId>> = BTreeMap::new();
    let robots: Vec<Robot> = (0..robots)
        .map(|id| {
            let group = rng.gen_range(0..2);
            groups.entry(group).or_default().push(pool[id]);
            Robot {
                id,
                start: starts[id],
                goal: None,
                group: Some(group),
            }
        })
        .collect();
    MppInstance::new(graph, robots, groups).expect("one goal per robot")
}

pub const ORACLE_MAX_HORIZON: usize = 6;

/// Solver optima next to brute-force minima over plans of the same horizon.
pub struct OracleRun {
    pub instance: MppInstance,
    pub horizon: usize,
    pub solver: [usize; 4],
    pub brute: Option<[usize; 4]>,
    pub solutions_valid: bool,
}

impl OracleRun {
    pub fn agrees(&self) -> bool {
        self.solutions_valid && self.brute == Some(self.solver)
    }
}

/// Draws tiny instances until all four solvers succeed within
/// between 2 and [`ORACLE_MAX_HORIZON`] steps, then enumerates every plan of that length.
pub fn oracle_run(rng: &mut ChaCha8Rng) -> OracleRun {
    loop {
        let n = rng.gen_range(4..=7);
        let robots = rng.gen_range(2..=3);
        let extra = rng.gen_range(0..=2);
        let instance = if rng.gen_bool(0.3) {
            random_grouped_instance(rng, n, robots, extra)
        } else {
            sparse_instance(rng, n, robots, extra)
        };
        let budget = Budget::for_instance(&instance, 1).with_states(200_000);
        let Ok(sols) = Objective::ALL
            .iter()
            .map(|&o| solve(&instance, o, &budget))
            .collect::<Result<Vec<_>, _>>()
        else {
            continue;
        };
        let horizon = sols.iter().map(|s| s.plan.horizon()).max().unwrap_or(0);
        if !(2..=ORACLE_MAX_HORIZON).contains(&horizon) {
            continue;
        }
        let solutions_valid = sols
            .iter()
            .all(|s| evaluate_costs(&instance, &s.plan).is_ok_and(|c| c == s.costs));
        let solver = [0, 1, 2, 3].map(|k| sols[k].value());
        let brute = brute_force_minima(&instance, horizon)
            .map(|c| Objective::ALL.map(|o| c.get(o)));
        return OracleRun {
            instance,
            horizon,
            solver,
            brute,
            solutions_valid,
        };
    }
}

/// Random formula over three distinct variables per clause, redrawn until satisfiable.
pub fn random_satisfiable(rng: &mut ChaCha8Rng, vars: usize, clauses: usize) -> Sat3Instance {
    loop {
        let cs = (0..clauses)
            .map(|_| {
                let v = sample(rng, vars, 3);
                [0, 1, 2].map(|k| Literal {
                    var: v.index(k),
                    negated: rng.gen_bool(0.5),
                })
            })
            .collect();
        let sat = Sat3Instance::new(vars, cs).expect("three distinct variables");
        if sat.solve_brute_force().expect("small formula").is_some() {
            return sat;
        }
    }
}
