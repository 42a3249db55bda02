use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::instance::{MppInstance, Semantics};
use super::plan::Plan;
use super::validate::{validate_plan, ValidateError, ValidationReport};

/// Values of the four objectives for one feasible plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CostVector {
    pub total_arrival_time: usize,
    pub makespan: usize,
    pub total_distance: usize,
    pub max_distance: usize,
}

impl CostVector {
    pub const ZERO: CostVector = CostVector {
        total_arrival_time: 0,
        makespan: 0,
        total_distance: 0,
        max_distance: 0,
    };

    pub fn get(&self, objective: Objective) -> usize {
        match objective {
            Objective::TotalArrival => self.total_arrival_time,
            Objective::Makespan => self.makespan,
            Objective::TotalDistance => self.total_distance,
            Objective::MaxDistance => self.max_distance,
        }
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "total_arrival={} makespan={} total_distance={} max_distance={}",
            self.total_arrival_time, self.makespan, self.total_distance, self.max_distance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    TotalArrival,
    Makespan,
    TotalDistance,
    MaxDistance,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::TotalArrival,
        Objective::Makespan,
        Objective::TotalDistance,
        Objective::MaxDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::TotalArrival => "total-arrival",
            Objective::Makespan => "makespan",
            Objective::TotalDistance => "total-distance",
            Objective::MaxDistance => "max-distance",
        }
    }

    /// Sum objectives accumulate over robots; the others take a maximum.
    pub fn is_sum(self) -> bool {
        matches!(self, Objective::TotalArrival | Objective::TotalDistance)
    }

    pub fn is_time(self) -> bool {
        matches!(self, Objective::TotalArrival | Objective::Makespan)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown objective {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error(transparent)]
    Validate(#[from] ValidateError),
    #[error("plan is infeasible ({} violations)", .0.violations.len())]
    Invalid(ValidationReport),
}

/// Arrival time `t_i` of each robot.
///
/// Labeled: first time the robot stands on its goal. Grouped: the first time
/// after which the robot never moves again.
pub fn arrival_times(instance: &MppInstance, plan: &Plan) -> Vec<usize> {
    instance
        .robots()
        .iter()
        .map(|robot| {
            let path = plan.path(robot.id);
            match instance.semantics() {
                Semantics::Labeled => {
                    let goal = robot.goal.expect("labeled robot has a goal");
                    path.iter().position(|&v| v == goal).unwrap_or(plan.horizon())
                }
                Semantics::Grouped => path
                    .windows(2)
                    .rposition(|w| w[0] != w[1])
                    .map_or(0, |t| t + 1),
            }
        })
        .collect()
}

/// Number of edge traversals per robot.
pub fn path_lengths(plan: &Plan) -> Vec<usize> {
    (0..plan.robot_count()).map(|r| plan.path_length(r)).collect()
}

/// Objective values of a plan that validates.
pub fn evaluate_costs(instance: &MppInstance, plan: &Plan) -> Result<CostVector, CostError> {
    let report = validate_plan(instance, plan)?;
    if !report.is_ok() {
        return Err(CostError::Invalid(report));
    }
    Ok(costs_unchecked(instance, plan))
}

fn costs_unchecked(instance: &MppInstance, plan: &Plan) -> CostVector {
    let arrivals = arrival_times(instance, plan);
    let lengths = path_lengths(plan);
    CostVector {
        total_arrival_time: arrivals.iter().sum(),
        makespan: arrivals.iter().copied().max().unwrap_or(0),
        total_distance: lengths.iter().sum(),
        max_distance: lengths.iter().copied().max().unwrap_or(0),
    }
}
