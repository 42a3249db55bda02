use std::collections::BTreeMap;

use crate::model::{GraphBuilder, MppInstance, Plan, Robot, VertexId};
use crate::sat3::Sat3Instance;

use super::{
    check_assignment, chosen_literals, finish_witness, ReduceError, ReductionOutput, Role,
    SourceTrace, Target,
};

fn strip_vertex(i: usize, j: usize, upper: bool) -> String {
    format!("v_x{i}^{j}{}", if upper { 't' } else { 'f' })
}

fn build(sat: &Sat3Instance, target: Target) -> ReductionOutput {
    let n = sat.var_count();
    let m = sat.clause_count();
    let mut b = GraphBuilder::new();
    let mut upper = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    for i in 1..=n {
        for side in [true, false] {
            let names: Vec<String> = std::iter::once(format!("v_x{i}"))
                .chain((1..=m + 1).map(|j| strip_vertex(i, j, side)))
                .chain(std::iter::once(format!("v_x{i}^g")))
                .collect();
            b.path(&names);
            let ids: Vec<VertexId> = names.iter().map(|s| b.vertex(s.as_str())).collect();
            if side {
                upper.push(ids);
            } else {
                lower.push(ids);
            }
        }
    }
    let mut attachments = Vec::with_capacity(m);
    for (j, clause) in sat.clauses().iter().enumerate() {
        let c = format!("v_c{}", j + 1);
        let mut att = [0; 3];
        for (k, lit) in clause.iter().enumerate() {
            let a = strip_vertex(lit.var + 1, j + 1, !lit.negated);
            b.link(&c, &a);
            att[k] = b.vertex(a);
        }
        attachments.push(att);
    }
    let goal_path: Vec<String> = (1..=m).map(|j| format!("v_c{j}^g")).collect();
    b.path(&goal_path);
    for name in &goal_path {
        b.vertex(name.as_str());
    }
    let last = format!("v_c{m}^g");
    for i in 1..=n {
        b.link(&last, &format!("v_x{i}"));
    }
    let graph = b.build().expect("time reduction graph is well formed");
    let name_map: BTreeMap<String, VertexId> = (0..graph.vertex_count())
        .map(|v| (graph.label(v).expect("all vertices are named").to_string(), v))
        .collect();

    let mut robots = Vec::with_capacity(n + m);
    let mut role_map = Vec::with_capacity(n + m);
    for i in 1..=n {
        robots.push(Robot {
            id: robots.len(),
            start: name_map[&format!("v_x{i}")],
            goal: Some(name_map[&format!("v_x{i}^g")]),
            group: None,
        });
        role_map.push(Role::VariableRobot { var: i - 1 });
    }
    for j in 1..=m {
        robots.push(Robot {
            id: robots.len(),
            start: name_map[&format!("v_c{j}")],
            goal: Some(name_map[&format!("v_c{j}^g")]),
            group: None,
        });
        role_map.push(Role::ClauseRobot { clause: j - 1 });
    }
    let instance = MppInstance::new(graph, robots, BTreeMap::new()).expect("time reduction instance is well formed");
    let k = match target {
        Target::Mtat => (n + m) * (m + 2),
        _ => m + 2,
    };
    ReductionOutput {
        instance,
        k,
        target,
        grouped: false,
        sat: sat.clone(),
        name_map,
        role_map,
        trace: SourceTrace {
            attachments,
            upper,
            lower,
        },
        designed_distances: vec![m + 2; n + m],
    }
}

/// Two strips of length `m + 2` per variable, a start vertex per clause wired
/// to its literals at depth `j`, and a goal path for the clause robots.
/// `K = (n + m)(m + 2)`.
pub fn reduce_to_mtat(sat: &Sat3Instance) -> ReductionOutput {
    build(sat, Target::Mtat)
}

/// Same graph and robots as [`reduce_to_mtat`] with `K = m + 2`.
pub fn reduce_to_m3pp(sat: &Sat3Instance) -> ReductionOutput {
    build(sat, Target::M3pp)
}

/// Replaces individual goals by two groups: variable robots share the strip
/// right ends, clause robots share the goal path.
pub fn apply_two_groups(red: &ReductionOutput) -> Result<ReductionOutput, ReduceError> {
    if !red.target.is_time() {
        return Err(ReduceError::WrongTarget {
            expected: "mtat or m3pp",
            got: red.target,
        });
    }
    let Some(goals) = red.instance.goals() else {
        return Ok(red.clone());
    };
    let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    let robots: Vec<Robot> = red
        .instance
        .robots()
        .iter()
        .map(|r| {
            let group = match red.role_map[r.id] {
                Role::VariableRobot { .. } => 0,
                _ => 1,
            };
            groups.entry(group).or_default().push(goals[r.id]);
            Robot {
                id: r.id,
                start: r.start,
                goal: None,
                group: Some(group),
            }
        })
        .collect();
    let instance = MppInstance::new(red.instance.graph().clone(), robots, groups)
        .expect("grouping a valid labeled instance stays valid");
    Ok(ReductionOutput {
        instance,
        grouped: true,
        ..red.clone()
    })
}

/// Every robot moves on every step for `m + 2` steps: variable robots along
/// the side opposite their true literals, each clause robot back along the
/// strip of its first true literal and down the goal path.
pub fn synthesize_witness_time(red: &ReductionOutput, assignment: &[bool]) -> Result<Plan, ReduceError> {
    if !red.target.is_time() {
        return Err(ReduceError::WrongTarget {
            expected: "mtat or m3pp",
            got: red.target,
        });
    }
    let sat = &red.sat;
    check_assignment(sat, assignment)?;
    let m = sat.clause_count();
    let horizon = m + 2;
    let chosen = chosen_literals(sat, assignment);
    let mut paths: Vec<Vec<VertexId>> = Vec::with_capacity(red.role_map.len());
    for role in &red.role_map {
        let path = match *role {
            Role::VariableRobot { var } => {
                if assignment[var] {
                    red.trace.lower[var].clone()
                } else {
                    red.trace.upper[var].clone()
                }
            }
            Role::ClauseRobot { clause: j } => {
                let lit = sat.clauses()[j][chosen[j]];
                let side = if lit.negated {
                    &red.trace.lower[lit.var]
                } else {
                    &red.trace.upper[lit.var]
                };
                let mut p = vec![red.name_map[&format!("v_c{}", j + 1)]];
                // strip index j+1 down to 0, then the goal path from v_cm^g to v_cj^g
                p.extend(side[..=j + 1].iter().rev());
                p.extend((j + 1..=m).rev().map(|q| red.name_map[&format!("v_c{q}^g")]));
                p
            }
            Role::Filler { .. } => unreachable!("time reductions have no filler robots"),
        };
        debug_assert_eq!(path.len(), horizon + 1);
        paths.push(path);
    }
    let configs: Vec<Vec<VertexId>> = (0..=horizon)
        .map(|t| paths.iter().map(|p| p[t]).collect())
        .collect();
    finish_witness(red, &configs)
}

pub(super) fn decode(red: &ReductionOutput, plan: &Plan) -> Result<Vec<bool>, ReduceError> {
    let n = red.sat.var_count();
    let mut out = Vec::with_capacity(n);
    for (robot, role) in red.role_map.iter().enumerate() {
        let Role::VariableRobot { var } = *role else { continue };
        let inner = |side: &Vec<VertexId>| side[1..side.len() - 1].to_vec();
        let (up, down) = (inner(&red.trace.upper[var]), inner(&red.trace.lower[var]));
        let path = plan.path(robot);
        let on_upper = path.iter().any(|v| up.contains(v));
        let on_lower = path.iter().any(|v| down.contains(v));
        match (on_upper, on_lower) {
            (true, false) => out.push(false),
            (false, true) => out.push(true),
            _ => return Err(ReduceError::Ambiguous { var }),
        }
    }
    Ok(out)
}
