//! Exact solvers for the four objectives, Pareto fronts for objective pairs,
//! and a brute-force plan enumerator used as an oracle.

mod brute;
mod engine;
mod front;
mod successors;

use std::time::Duration;

use thiserror::Error;

use crate::model::{evaluate_costs, CostVector, MppInstance, Objective, Plan};

pub use brute::{
    brute_force_all_plans, BruteForceError, brute_force_minima, for_each_plan, BRUTE_FORCE_PLAN_LIMIT,
};
pub use front::{pareto_front, ParetoFront, ParetoPoint};
pub use successors::{joint_successors, RobotSet, SearchState};

use engine::Query;

/// Limits for a single solver call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Maximum plan length in time steps.
    pub horizon_limit: usize,
    /// Maximum number of expanded search states.
    pub state_limit: usize,
    pub time_limit: Duration,
}

impl Budget {
    pub const DEFAULT_STATE_LIMIT: usize = 20_000_000;
    pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

    /// Horizon `scale * |V|^3`, after the cubic bound on the number of moves
    /// needed to solve any feasible pebble-motion instance.
    pub fn for_instance(instance: &MppInstance, scale: usize) -> Self {
        let v = instance.graph().vertex_count();
        Budget {
            horizon_limit: scale.max(1) * v.pow(3),
            state_limit: Self::DEFAULT_STATE_LIMIT,
            time_limit: Self::DEFAULT_TIME_LIMIT,
        }
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon_limit = horizon;
        self
    }

    pub fn with_states(mut self, states: usize) -> Self {
        self.state_limit = states;
        self
    }

    pub fn with_time(mut self, time: Duration) -> Self {
        self.time_limit = time;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget exhausted after {expanded} states; optimum is at least {best_bound}")]
    BudgetExhausted { expanded: usize, best_bound: usize },
    #[error("no solution within a horizon of {horizon} steps")]
    NoSolutionWithinHorizon { horizon: usize },
    #[error("instance has no solution")]
    Infeasible,
    #[error("joint search supports at most 64 robots, instance has {0}")]
    TooManyRobots(usize),
    #[error("joint search supports at most 65535 vertices, instance has {0}")]
    TooManyVertices(usize),
}

/// An optimal plan together with its costs and search statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalSolution {
    pub objective: Objective,
    pub plan: Plan,
    pub costs: CostVector,
    pub expanded_states: usize,
    /// Set when the search space was exhausted up to the optimum within budget.
    pub proof_of_optimality: bool,
}

impl OptimalSolution {
    pub fn value(&self) -> usize {
        self.costs.get(self.objective)
    }
}

fn finish(
    instance: &MppInstance,
    objective: Objective,
    found: engine::Found,
    extra_expanded: usize,
) -> OptimalSolution {
    let costs = evaluate_costs(instance, &found.plan)
        .expect("solver produced a plan that fails validation");
    debug_assert_eq!(costs.get(objective), found.value);
    OptimalSolution {
        objective,
        plan: found.plan,
        costs,
        expanded_states: found.expanded + extra_expanded,
        proof_of_optimality: true,
    }
}

/// Minimum makespan: layered best-first search over (configuration, frozen set).
pub fn solve_min_makespan(
    instance: &MppInstance,
    budget: &Budget,
) -> Result<OptimalSolution, SearchError> {
    let found = engine::run(instance, Query::minimize(Objective::Makespan), budget)?;
    Ok(finish(instance, Objective::Makespan, found, 0))
}

/// Minimum total arrival time. Each step costs the number of robots that have
/// not arrived yet, which sums to the total of the arrival times.
pub fn solve_min_total_arrival(
    instance: &MppInstance,
    budget: &Budget,
) -> Result<OptimalSolution, SearchError> {
    let found = engine::run(instance, Query::minimize(Objective::TotalArrival), budget)?;
    Ok(finish(instance, Objective::TotalArrival, found, 0))
}

/// Minimum total distance. Each step costs the number of robots that cross an edge.
pub fn solve_min_total_distance(
    instance: &MppInstance,
    budget: &Budget,
) -> Result<OptimalSolution, SearchError> {
    let found = engine::run(instance, Query::minimize(Objective::TotalDistance), budget)?;
    Ok(finish(instance, Objective::TotalDistance, found, 0))
}

/// Minimum maximum distance, by binary search on the per-robot distance cap.
///
/// The lower end is the largest single-robot shortest distance; the upper end
/// is the max distance of a minimum total distance plan. Each probe searches
/// states augmented with per-robot distance counters held below the cap.
pub fn solve_min_max_distance(
    instance: &MppInstance,
    budget: &Budget,
) -> Result<OptimalSolution, SearchError> {
    let reference = solve_min_total_distance(instance, budget)?;
    let mut expanded = reference.expanded_states;
    let mut lo = instance.shortest_distances().into_iter().max().unwrap_or(0);
    let mut hi = reference.costs.max_distance;
    let mut best: Option<engine::Found> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match probe_max_distance(instance, mid, budget) {
            Ok(found) => {
                expanded += found.expanded;
                hi = found.value.min(mid);
                best = Some(found);
            }
            Err(SearchError::Infeasible) | Err(SearchError::NoSolutionWithinHorizon { .. }) => {
                lo = mid + 1;
            }
            Err(e) => return Err(e),
        }
    }
    let found = match best {
        Some(found) if found_max_distance(&found) == lo => found,
        _ => probe_max_distance(instance, lo, budget)?,
    };
    Ok(finish(instance, Objective::MaxDistance, found, expanded))
}

fn probe_max_distance(
    instance: &MppInstance,
    cap: usize,
    budget: &Budget,
) -> Result<engine::Found, SearchError> {
    let mut found = engine::run(
        instance,
        Query::bounded(Objective::Makespan, Objective::MaxDistance, cap),
        budget,
    )?;
    found.value = found_max_distance(&found);
    Ok(found)
}

fn found_max_distance(found: &engine::Found) -> usize {
    (0..found.plan.robot_count())
        .map(|r| found.plan.path_length(r))
        .max()
        .unwrap_or(0)
}

/// Dispatches to the solver for `objective`.
pub fn solve(
    instance: &MppInstance,
    objective: Objective,
    budget: &Budget,
) -> Result<OptimalSolution, SearchError> {
    match objective {
        Objective::TotalArrival => solve_min_total_arrival(instance, budget),
        Objective::Makespan => solve_min_makespan(instance, budget),
        Objective::TotalDistance => solve_min_total_distance(instance, budget),
        Objective::MaxDistance => solve_min_max_distance(instance, budget),
    }
}

/// Minimizes `primary` subject to `secondary <= limit`.
pub fn solve_constrained(
    instance: &MppInstance,
    primary: Objective,
    secondary: Objective,
    limit: usize,
    budget: &Budget,
) -> Result<OptimalSolution, SearchError> {
    let found = engine::run(instance, Query::bounded(primary, secondary, limit), budget)?;
    Ok(finish(instance, primary, found, 0))
}
