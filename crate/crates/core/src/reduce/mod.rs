//! Polynomial reductions from 3SAT to the four optimal MPP decision problems,
//! with witness plans built from satisfying assignments and the inverse
//! decoding of assignments from plans that meet the threshold.
//!
//! Vertex names follow the gadget notation in ASCII: `v_x2^3t` is vertex
//! `3t` on the strip of variable 2, `v_c1x4` is the source top-layer vertex of
//! clause 1 for variable 4, and so on. Indices in names are 1-based.

mod distance;
mod time;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{evaluate_costs, CostError, MppInstance, Objective, Plan, VertexId};
use crate::sat3::{Sat3Instance, SatError};

pub use distance::{reduce_to_mmd, reduce_to_mtd, synthesize_witness_distance};
pub use time::{apply_two_groups, reduce_to_m3pp, reduce_to_mtat, synthesize_witness_time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Mtat,
    M3pp,
    Mtd,
    Mmd,
}

impl Target {
    /// The objective whose optimum is compared against `K`.
    pub fn objective(self) -> Objective {
        match self {
            Target::Mtat => Objective::TotalArrival,
            Target::M3pp => Objective::Makespan,
            Target::Mtd => Objective::TotalDistance,
            Target::Mmd => Objective::MaxDistance,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::Mtat => "mtat",
            Target::M3pp => "m3pp",
            Target::Mtd => "mtd",
            Target::Mmd => "mmd",
        }
    }

    fn is_time(self) -> bool {
        matches!(self, Target::Mtat | Target::M3pp)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mtat" => Ok(Target::Mtat),
            "m3pp" => Ok(Target::M3pp),
            "mtd" => Ok(Target::Mtd),
            "mmd" => Ok(Target::Mmd),
            other => Err(format!("unknown reduction target `{other}`")),
        }
    }
}

/// Which gadget a filler robot belongs to (variables and clauses 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum Gadget {
    Variable(usize),
    ClauseSource(usize),
    Exchange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "role")]
pub enum Role {
    VariableRobot { var: usize },
    ClauseRobot { clause: usize },
    Filler { gadget: Gadget },
}

/// Where each clause touches the variable strips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceTrace {
    /// Per clause, the strip vertex attached for each of its three literals.
    pub attachments: Vec<[VertexId; 3]>,
    /// Per variable, the upper (`t`) side from the left end to the right end.
    pub upper: Vec<Vec<VertexId>>,
    /// Per variable, the lower (`f`) side from the left end to the right end.
    pub lower: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub instance: MppInstance,
    pub k: usize,
    pub target: Target,
    pub grouped: bool,
    pub sat: Sat3Instance,
    pub name_map: BTreeMap<String, VertexId>,
    pub role_map: Vec<Role>,
    pub trace: SourceTrace,
    /// Per robot, the length of the route the construction is built around.
    /// Equals the shortest distance unless gadgets of different clauses
    /// combine into a shorter detour.
    pub designed_distances: Vec<usize>,
}

impl ReductionOutput {
    /// Vertex id of a named gadget vertex.
    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.name_map.get(name).copied()
    }

    /// True when no robot has a route shorter than its designed one, so a
    /// witness can meet `K` exactly.
    pub fn is_tight(&self) -> bool {
        self.instance.shortest_distances() == self.designed_distances
    }

    /// The lower bound `K` certifies: sum or max of per-robot shortest distances.
    pub fn shortest_distance_bound(&self) -> usize {
        let d = self.instance.shortest_distances();
        match self.target {
            Target::Mtat | Target::Mtd => d.iter().sum(),
            Target::M3pp | Target::Mmd => d.into_iter().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("operation needs a {expected} reduction, got {got}")]
    WrongTarget { expected: &'static str, got: Target },
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error("assignment falsifies clause {}", .clause + 1)]
    Unsatisfying { clause: usize },
    #[error("witness plan is invalid: {0}")]
    SynthesisFailed(String),
    #[error(transparent)]
    InvalidPlan(#[from] CostError),
    #[error("plan cost {cost} exceeds threshold {k}")]
    ThresholdExceeded { cost: usize, k: usize },
    #[error("plan does not determine a value for variable {}", .var + 1)]
    Ambiguous { var: usize },
}

fn check_assignment(sat: &Sat3Instance, assignment: &[bool]) -> Result<(), ReduceError> {
    sat.evaluate(assignment)?;
    match sat.first_falsified(assignment) {
        Some(clause) => Err(ReduceError::Unsatisfying { clause }),
        None => Ok(()),
    }
}

/// Index of the first true literal of each clause.
fn chosen_literals(sat: &Sat3Instance, assignment: &[bool]) -> Vec<usize> {
    sat.clauses()
        .iter()
        .map(|c| c.iter().position(|l| l.eval(assignment)).expect("assignment satisfies every clause"))
        .collect()
}

fn finish_witness(red: &ReductionOutput, configs: &[Vec<VertexId>]) -> Result<Plan, ReduceError> {
    let plan = Plan::from_configurations(configs)
        .ok_or_else(|| ReduceError::SynthesisFailed("ragged schedule".into()))?;
    match evaluate_costs(&red.instance, &plan) {
        Ok(_) => Ok(plan),
        Err(CostError::Invalid(report)) => Err(ReduceError::SynthesisFailed(
            report.violations.first().map(|v| v.to_string()).unwrap_or_default(),
        )),
        Err(e) => Err(ReduceError::SynthesisFailed(e.to_string())),
    }
}

/// Reads an assignment off a plan whose cost is within the threshold.
///
/// Time targets: a variable robot on the upper side means false, on the lower
/// side true. Distance targets: the first move of the robot on `v_xi^l` gives
/// the rotation direction of gadget `i`; towards `1f` means true.
pub fn decode_assignment(red: &ReductionOutput, plan: &Plan) -> Result<Vec<bool>, ReduceError> {
    let costs = evaluate_costs(&red.instance, plan)?;
    let cost = costs.get(red.target.objective());
    if cost > red.k {
        return Err(ReduceError::ThresholdExceeded { cost, k: red.k });
    }
    if red.target.is_time() {
        time::decode(red, plan)
    } else {
        distance::decode(red, plan)
    }
}
