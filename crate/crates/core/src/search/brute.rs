use thiserror::Error;

use crate::model::{evaluate_costs, CostVector, MppInstance, Plan, Semantics, VertexId};

/// Cap on the number of plans `brute_force_all_plans` will collect.
pub const BRUTE_FORCE_PLAN_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("more than {0} feasible plans")]
    TooManyPlans(usize),
}

/// Calls `visit` on every feasible plan of exactly `horizon` steps, with its costs.
///
/// Plans finishing early are included padded with waits. The enumeration only
/// shares the final validator with the search engine: moves are generated as a
/// plain cartesian product of per-robot choices and filtered afterwards.
/// Returning `false` from `visit` stops the enumeration.
pub fn for_each_plan(
    instance: &MppInstance,
    horizon: usize,
    mut visit: impl FnMut(&Plan, &CostVector) -> bool,
) {
    if horizon == 0 {
        return;
    }
    let n = instance.robot_count();
    let goal_dist = instance.goal_distance_table();
    let labeled = instance.semantics() == Semantics::Labeled;
    let mut configs = vec![instance.starts()];
    let mut touched: Vec<bool> = (0..n)
        .map(|r| labeled && instance.robots()[r].goal == Some(configs[0][r]))
        .collect();
    let mut walker = Walker {
        instance,
        horizon,
        goal_dist: &goal_dist,
        labeled,
        visit: &mut visit,
        stopped: false,
    };
    walker.step(&mut configs, &mut touched);
}

struct Walker<'a, F> {
    instance: &'a MppInstance,
    horizon: usize,
    goal_dist: &'a [Vec<usize>],
    labeled: bool,
    visit: &'a mut F,
    stopped: bool,
}

impl<F: FnMut(&Plan, &CostVector) -> bool> Walker<'_, F> {
    fn step(&mut self, configs: &mut Vec<Vec<VertexId>>, touched: &mut Vec<bool>) {
        if self.stopped {
            return;
        }
        let t = configs.len() - 1;
        if t == self.horizon {
            let plan = Plan::from_configurations(configs).expect("rectangular configurations");
            if let Ok(costs) = evaluate_costs(self.instance, &plan) {
                if !(self.visit)(&plan, &costs) {
                    self.stopped = true;
                }
            }
            return;
        }
        let current = configs[t].clone();
        let graph = self.instance.graph();
        let options: Vec<Vec<VertexId>> = current
            .iter()
            .enumerate()
            .map(|(r, &v)| {
                if touched[r] {
                    vec![v]
                } else {
                    std::iter::once(v).chain(graph.neighbors(v).iter().copied()).collect()
                }
            })
            .collect();
        let remaining = self.horizon - t - 1;
        let mut choice = vec![0usize; current.len()];
        loop {
            let next: Vec<VertexId> = choice.iter().enumerate().map(|(r, &k)| options[r][k]).collect();
            if self.admissible(&current, &next, remaining) {
                let saved = touched.clone();
                for (r, robot) in self.instance.robots().iter().enumerate() {
                    if self.labeled && robot.goal == Some(next[r]) {
                        touched[r] = true;
                    }
                }
                configs.push(next);
                self.step(configs, touched);
                configs.pop();
                *touched = saved;
                if self.stopped {
                    return;
                }
            }
            // odometer increment over the per-robot option lists
            let mut r = 0;
            loop {
                if r == choice.len() {
                    return;
                }
                choice[r] += 1;
                if choice[r] < options[r].len() {
                    break;
                }
                choice[r] = 0;
                r += 1;
            }
        }
    }

    fn admissible(&self, current: &[VertexId], next: &[VertexId], remaining: usize) -> bool {
        let n = next.len();
        for i in 0..n {
            for j in i + 1..n {
                if next[i] == next[j] {
                    return false;
                }
                if next[i] == current[j] && next[j] == current[i] && current[i] != current[j] {
                    return false;
                }
            }
            if self.goal_dist[i][next[i]] > remaining {
                return false;
            }
        }
        true
    }
}

/// Every feasible plan of exactly `horizon` steps.
pub fn brute_force_all_plans(
    instance: &MppInstance,
    horizon: usize,
) -> Result<Vec<(Plan, CostVector)>, BruteForceError> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_plan(instance, horizon, |plan, costs| {
        if out.len() == BRUTE_FORCE_PLAN_LIMIT {
            overflow = true;
            return false;
        }
        out.push((plan.clone(), *costs));
        true
    });
    if overflow {
        Err(BruteForceError::TooManyPlans(BRUTE_FORCE_PLAN_LIMIT))
    } else {
        Ok(out)
    }
}

/// Per-objective minima over all feasible plans of `horizon` steps; each field
/// is minimized independently. `None` if no such plan exists.
pub fn brute_force_minima(instance: &MppInstance, horizon: usize) -> Option<CostVector> {
    let mut best: Option<CostVector> = None;
    for_each_plan(instance, horizon, |_, c| {
        best = Some(match best {
            None => *c,
            Some(b) => CostVector {
                total_arrival_time: b.total_arrival_time.min(c.total_arrival_time),
                makespan: b.makespan.min(c.makespan),
                total_distance: b.total_distance.min(c.total_distance),
                max_distance: b.max_distance.min(c.max_distance),
            },
        });
        true
    });
    best
}
