use std::collections::BTreeMap;

use crate::model::{Graph, GraphBuilder, MppInstance, Plan, Robot, VertexId};
use crate::sat3::Sat3Instance;

use super::{
    check_assignment, chosen_literals, finish_witness, Gadget, ReduceError, ReductionOutput, Role,
    SourceTrace, Target,
};

/// Name of position `idx` on the `(2m+4)`-cycle of variable `i` (1-based).
/// Index 0 is `l`, `1..=m+1` the `t` side, `m+2` is `r`, and the `f` side
/// runs back from `(m+1)f` to `1f`.
fn cycle_name(i: usize, idx: usize, m: usize) -> String {
    let len = 2 * m + 4;
    if idx == 0 {
        format!("v_x{i}^l")
    } else if idx <= m + 1 {
        format!("v_x{i}^{idx}t")
    } else if idx == m + 2 {
        format!("v_x{i}^r")
    } else {
        format!("v_x{i}^{}f", len - idx)
    }
}

/// Cycle index of the source attachment of clause `j` (1-based) for a literal.
fn source_index(j: usize, negated: bool, m: usize) -> usize {
    if negated {
        2 * m + 4 - j
    } else {
        j
    }
}

fn antipode(idx: usize, m: usize) -> usize {
    (idx + m + 2) % (2 * m + 4)
}

struct Layout {
    graph: Graph,
    name_map: BTreeMap<String, VertexId>,
    robots: Vec<(VertexId, VertexId)>,
    roles: Vec<Role>,
    trace: SourceTrace,
    designed: Vec<usize>,
}

struct Named {
    start: String,
    goal: String,
    role: Role,
    designed: usize,
}

fn layout(sat: &Sat3Instance) -> (GraphBuilder, Vec<Named>) {
    let n = sat.var_count();
    let m = sat.clause_count();
    let len = 2 * m + 4;
    let mut b = GraphBuilder::new();

    // goal of each strip vertex that is a source attachment, by (var, index)
    let mut attached: BTreeMap<(usize, usize), String> = BTreeMap::new();
    for (j0, clause) in sat.clauses().iter().enumerate() {
        let j = j0 + 1;
        for lit in clause {
            let i = lit.var + 1;
            attached.insert((i, source_index(j, lit.negated, m)), format!("v_c{j}x{i}"));
        }
    }

    let mut robots = Vec::new();
    for i in 1..=n {
        let names: Vec<String> = (0..len).map(|idx| cycle_name(i, idx, m)).collect();
        for idx in 0..len {
            b.link(&names[idx], &names[(idx + 1) % len]);
        }
        for idx in 0..len {
            let (goal, designed) = match attached.get(&(i, idx)) {
                Some(top) => (top.clone(), 2),
                None => (names[antipode(idx, m)].clone(), m + 2),
            };
            robots.push(Named {
                start: names[idx].clone(),
                goal,
                role: Role::Filler {
                    gadget: Gadget::Variable(i - 1),
                },
                designed,
            });
        }
    }

    for (j0, clause) in sat.clauses().iter().enumerate() {
        let j = j0 + 1;
        let bottom: Vec<String> = (1..=3).map(|k| format!("v_c{j}^{k}s")).collect();
        let sink: Vec<String> = [format!("v_c{j}^g"), format!("v_c{j}^2g"), format!("v_c{j}^3g")].into();
        for lit in clause {
            let i = lit.var + 1;
            let idx = source_index(j, lit.negated, m);
            let attach = cycle_name(i, idx, m);
            let across = cycle_name(i, antipode(idx, m), m);
            let top = format!("v_c{j}x{i}");
            for bot in &bottom {
                b.link(bot, &attach);
                b.link(bot, &top);
            }
            for s in &sink {
                b.link(s, &across);
            }
        }
        let goals = [(format!("v_c{j}^1g"), m + 2), (sink[1].clone(), m + 4), (sink[2].clone(), m + 4)];
        for (bot, (goal, designed)) in bottom.iter().zip(goals) {
            robots.push(Named {
                start: bot.clone(),
                goal,
                role: Role::Filler {
                    gadget: Gadget::ClauseSource(j0),
                },
                designed,
            });
        }
    }

    let exchange: Vec<String> = (1..=m)
        .map(|j| format!("v_c{j}^s"))
        .chain((1..=m).map(|j| format!("v_c{j}^1g")))
        .collect();
    b.path(&exchange);
    for i in 1..=n {
        b.link(&exchange[0], &format!("v_x{i}^l"));
        b.link(&exchange[2 * m - 1], &format!("v_x{i}^l"));
    }
    let exchange_robot = |start: String, goal: String, designed: usize| Named {
        start,
        goal,
        role: Role::Filler {
            gadget: Gadget::Exchange,
        },
        designed,
    };
    for j in 1..=m {
        robots.push(exchange_robot(format!("v_c{j}^s"), format!("v_c{j}^g"), m + 3));
    }
    for j in 1..=m {
        robots.push(exchange_robot(format!("v_c{j}^1g"), format!("v_c{j}^s"), m));
    }
    (b, robots)
}

fn assemble(sat: &Sat3Instance, stubs: bool) -> Layout {
    let m = sat.clause_count();
    let (mut b, named) = layout(sat);
    let mut robots: Vec<(VertexId, VertexId)> = named
        .iter()
        .map(|r| (b.vertex(r.start.as_str()), b.vertex(r.goal.as_str())))
        .collect();
    let mut designed: Vec<usize> = named.iter().map(|r| r.designed).collect();

    if stubs {
        // base distances decide each stub's length
        let (base, _) = layout(sat);
        let base = base.build().expect("distance reduction graph is well formed");
        for (r, robot) in named.iter().enumerate() {
            let g = &robot.goal;
            let d = base.shortest_distance(
                base.vertex_by_label(&robot.start).expect("named start"),
                base.vertex_by_label(g).expect("named goal"),
            );
            let extra = (m + 4).saturating_sub(d);
            designed[r] += extra;
            let mut prev = g.clone();
            for k in 1..=extra {
                let name = format!("{g}+{k}");
                b.link(&prev, &name);
                prev = name;
            }
            robots[r].1 = b.vertex(prev.as_str());
        }
    }

    let graph = b.build().expect("distance reduction graph is well formed");
    let name_map: BTreeMap<String, VertexId> = (0..graph.vertex_count())
        .map(|v| (graph.label(v).expect("all vertices are named").to_string(), v))
        .collect();
    let n = sat.var_count();
    let len = 2 * m + 4;
    let side = |i: usize, upper: bool| -> Vec<VertexId> {
        (0..=m + 2)
            .map(|k| if upper || k == 0 { k } else { len - k })
            .map(|idx| name_map[&cycle_name(i, idx, m)])
            .collect()
    };
    let trace = SourceTrace {
        attachments: sat
            .clauses()
            .iter()
            .enumerate()
            .map(|(j0, c)| {
                c.map(|lit| name_map[&cycle_name(lit.var + 1, source_index(j0 + 1, lit.negated, m), m)])
            })
            .collect(),
        upper: (1..=n).map(|i| side(i, true)).collect(),
        lower: (1..=n).map(|i| side(i, false)).collect(),
    };
    Layout {
        graph,
        name_map,
        robots,
        roles: named.into_iter().map(|r| r.role).collect(),
        trace,
        designed,
    }
}

fn into_output(sat: &Sat3Instance, layout: Layout, target: Target) -> ReductionOutput {
    let robots = layout
        .robots
        .iter()
        .enumerate()
        .map(|(id, &(start, goal))| Robot {
            id,
            start,
            goal: Some(goal),
            group: None,
        })
        .collect();
    let instance =
        MppInstance::new(layout.graph, robots, BTreeMap::new()).expect("distance reduction instance is well formed");
    let d = instance.shortest_distances();
    let k = match target {
        Target::Mtd => d.iter().sum(),
        _ => d.iter().copied().max().unwrap_or(0),
    };
    ReductionOutput {
        instance,
        k,
        target,
        grouped: false,
        sat: sat.clone(),
        name_map: layout.name_map,
        role_map: layout.roles,
        trace: layout.trace,
        designed_distances: layout.designed,
    }
}

/// Fully occupied variable cycles, two-layer clause sources, clause sinks
/// across each cycle from the sources, and one exchange path closing through
/// every `v_xi^l`. `K` is the sum of the robots' shortest distances.
pub fn reduce_to_mtd(sat: &Sat3Instance) -> ReductionOutput {
    into_output(sat, assemble(sat, false), Target::Mtd)
}

/// The MTD graph with a dead-end path hung off each goal so that every robot
/// needs exactly `m + 4` moves. `K = m + 4`.
pub fn reduce_to_mmd(sat: &Sat3Instance) -> ReductionOutput {
    let red = into_output(sat, assemble(sat, true), Target::Mmd);
    debug_assert_eq!(red.k, sat.clause_count() + 4);
    red
}

/// Replays a schedule of simultaneous vertex-to-vertex moves.
struct Schedule<'a> {
    occupant: Vec<Option<usize>>,
    config: Vec<VertexId>,
    configs: Vec<Vec<VertexId>>,
    goals: &'a [VertexId],
}

impl Schedule<'_> {
    fn step(&mut self, moves: &[(VertexId, VertexId)]) {
        let movers: Vec<(usize, VertexId)> = moves
            .iter()
            .filter_map(|&(from, to)| self.occupant[from].map(|r| (r, to)))
            .collect();
        for &(r, _) in &movers {
            self.occupant[self.config[r]] = None;
        }
        for &(r, to) in &movers {
            self.occupant[to] = Some(r);
            self.config[r] = to;
        }
        self.configs.push(self.config.clone());
    }

    /// Moves the robot on each listed vertex to its own goal.
    fn move_to_goals(&mut self, from: &[VertexId]) {
        let moves: Vec<_> = from
            .iter()
            .filter_map(|&v| self.occupant[v].map(|r| (v, self.goals[r])))
            .collect();
        self.step(&moves);
    }
}

/// The gadget schedule: one step of 6-cycle rotations in every clause source,
/// one step lifting the displaced strip robots to the top layer, `m + 2`
/// variable-cycle rotations in the directions of the assignment with an
/// exchange rotation after each of the first `m`, and a final step into the
/// sinks. For MMD every robot then walks its stub.
pub fn synthesize_witness_distance(red: &ReductionOutput, assignment: &[bool]) -> Result<Plan, ReduceError> {
    if red.target.is_time() {
        return Err(ReduceError::WrongTarget {
            expected: "mtd or mmd",
            got: red.target,
        });
    }
    let sat = &red.sat;
    check_assignment(sat, assignment)?;
    let n = sat.var_count();
    let m = sat.clause_count();
    let len = 2 * m + 4;
    let v = |name: String| red.name_map[&name];
    let chosen = chosen_literals(sat, assignment);
    let goals: Vec<VertexId> = red
        .instance
        .goals()
        .expect("distance reductions are labeled")
        .into_iter()
        .map(|g| stub_base(red, g))
        .collect();
    let starts = red.instance.starts();
    let mut occupant = vec![None; red.instance.graph().vertex_count()];
    for (r, &s) in starts.iter().enumerate() {
        occupant[s] = Some(r);
    }
    let mut sched = Schedule {
        occupant,
        config: starts.clone(),
        configs: vec![starts],
        goals: &goals,
    };

    // clause sources
    let mut moves = Vec::new();
    let mut bottoms = Vec::new();
    for (j0, clause) in sat.clauses().iter().enumerate() {
        let j = j0 + 1;
        let bottom: Vec<VertexId> = (1..=3).map(|k| v(format!("v_c{j}^{k}s"))).collect();
        let mut order = vec![chosen[j0]];
        order.extend((0..3).filter(|&k| k != chosen[j0]));
        let attach: Vec<VertexId> = order
            .iter()
            .map(|&k| v(cycle_name(clause[k].var + 1, source_index(j, clause[k].negated, m), m)))
            .collect();
        for b in 0..3 {
            moves.push((bottom[b], attach[b]));
            moves.push((attach[b], bottom[(b + 1) % 3]));
        }
        bottoms.extend(bottom);
    }
    sched.step(&moves);
    sched.move_to_goals(&bottoms);

    // variable rotations and exchange
    let cycles: Vec<Vec<VertexId>> = (1..=n)
        .map(|i| (0..len).map(|idx| v(cycle_name(i, idx, m))).collect())
        .collect();
    let exchange: Vec<VertexId> = (1..=m)
        .map(|j| v(format!("v_c{j}^s")))
        .chain((1..=m).map(|j| v(format!("v_c{j}^1g"))))
        .collect();
    for s in 1..=m + 2 {
        let mut moves = Vec::new();
        for (i, cycle) in cycles.iter().enumerate() {
            for idx in 0..len {
                let next = if assignment[i] { (idx + len - 1) % len } else { (idx + 1) % len };
                moves.push((cycle[idx], cycle[next]));
            }
        }
        sched.step(&moves);
        if s <= m {
            let lit = sat.clauses()[s - 1][chosen[s - 1]];
            let l = cycles[lit.var][0];
            let mut moves = vec![(l, exchange[2 * m - 1]), (exchange[0], l)];
            moves.extend((1..2 * m).map(|p| (exchange[p], exchange[p - 1])));
            sched.step(&moves);
        }
    }

    // sinks
    let sink_attach: Vec<VertexId> = sat
        .clauses()
        .iter()
        .enumerate()
        .flat_map(|(j0, c)| {
            c.map(|lit| cycles[lit.var][antipode(source_index(j0 + 1, lit.negated, m), m)])
        })
        .collect();
    sched.move_to_goals(&sink_attach);

    if red.target == Target::Mmd {
        let stubs: Vec<Vec<VertexId>> = red
            .instance
            .goals()
            .expect("distance reductions are labeled")
            .into_iter()
            .map(|g| stub_walk(red, g))
            .collect();
        let longest = stubs.iter().map(Vec::len).max().unwrap_or(0);
        for k in 0..longest {
            let moves: Vec<_> = (0..stubs.len())
                .filter(|&r| stubs[r].len() > k)
                .map(|r| (sched.config[r], stubs[r][k]))
                .collect();
            sched.step(&moves);
        }
    }
    finish_witness(red, &sched.configs)
}

/// The vertex a stub hangs from, or `goal` itself when it has no stub.
fn stub_base(red: &ReductionOutput, goal: VertexId) -> VertexId {
    let name = red.instance.graph().label(goal).expect("named goal");
    match name.rsplit_once('+') {
        Some((base, _)) => red.name_map[base],
        None => goal,
    }
}

/// Stub vertices leading to an MMD goal named `<base>+<len>`, in walking order.
fn stub_walk(red: &ReductionOutput, goal: VertexId) -> Vec<VertexId> {
    let name = red.instance.graph().label(goal).expect("named goal");
    match name.rsplit_once('+') {
        Some((base, len)) => {
            let len: usize = len.parse().expect("stub suffix is a length");
            (1..=len).map(|k| red.name_map[&format!("{base}+{k}")]).collect()
        }
        None => Vec::new(),
    }
}

pub(super) fn decode(red: &ReductionOutput, plan: &Plan) -> Result<Vec<bool>, ReduceError> {
    let n = red.sat.var_count();
    let starts = red.instance.starts();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let l = red.name_map[&format!("v_x{i}^l")];
        let one_f = red.name_map[&format!("v_x{i}^1f")];
        let one_t = red.name_map[&format!("v_x{i}^1t")];
        let robot = starts.iter().position(|&s| s == l).expect("l is occupied");
        let first_move = plan.path(robot).iter().copied().find(|&p| p != l);
        match first_move {
            Some(p) if p == one_f => out.push(true),
            Some(p) if p == one_t => out.push(false),
            _ => return Err(ReduceError::Ambiguous { var: i - 1 }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate_costs, path_lengths};

    fn example_distance(red: &ReductionOutput, start: &str) -> usize {
        let s = red.name_map[start];
        let r = red.instance.starts().iter().position(|&v| v == s).unwrap();
        red.instance.shortest_distances()[r]
    }

    #[test]
    fn minimum_distances_of_clause_and_exchange_robots() {
        let red = reduce_to_mtd(&Sat3Instance::example());
        for j in 1..=3 {
            assert_eq!(example_distance(&red, &format!("v_c{j}^1s")), 5);
            assert_eq!(example_distance(&red, &format!("v_c{j}^2s")), 7);
            assert_eq!(example_distance(&red, &format!("v_c{j}^3s")), 7);
            assert_eq!(example_distance(&red, &format!("v_c{j}^s")), 6);
            assert_eq!(example_distance(&red, &format!("v_c{j}^1g")), 3);
        }
        // x1 is attached to clause 1 at 1t and to clause 2 at 2f
        assert_eq!(example_distance(&red, "v_x1^1t"), 2);
        assert_eq!(example_distance(&red, "v_x1^2f"), 2);
        assert_eq!(example_distance(&red, "v_x1^l"), 5);
        assert_eq!(example_distance(&red, "v_x1^3t"), 5);
    }

    #[test]
    fn example_census() {
        let red = reduce_to_mtd(&Sat3Instance::example());
        assert_eq!(red.instance.robot_count(), 55);
        assert_eq!(red.k, 257);
        assert_eq!(red.k, red.shortest_distance_bound());
    }

    #[test]
    fn witness_follows_shortest_paths() {
        let sat = Sat3Instance::example();
        for target in [Target::Mtd, Target::Mmd] {
            let red = if target == Target::Mtd { reduce_to_mtd(&sat) } else { reduce_to_mmd(&sat) };
            for a in sat.all_solutions().unwrap() {
                let plan = synthesize_witness_distance(&red, &a).unwrap();
                assert!(red.is_tight());
                assert_eq!(path_lengths(&plan), red.instance.shortest_distances());
                let c = evaluate_costs(&red.instance, &plan).unwrap();
                assert_eq!(c.get(target.objective()), red.k);
                assert_eq!(decode(&red, &plan).unwrap(), a);
            }
        }
    }

    #[test]
    fn stubs_equalize_distances() {
        let red = reduce_to_mmd(&Sat3Instance::example());
        assert_eq!(red.k, 7);
        assert_eq!(red.instance.shortest_distances(), vec![7; 55]);
    }
}
