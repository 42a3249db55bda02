//! Problem model: graphs, instances, plans, feasibility and objective evaluation.

mod costs;
mod graph;
mod instance;
pub mod io;
mod plan;
mod validate;

pub use costs::{arrival_times, evaluate_costs, path_lengths, CostError, CostVector, Objective};
pub use graph::{Graph, GraphError, VertexId};
pub(crate) use graph::GraphBuilder;
pub use instance::{GroupId, InstanceError, MppInstance, Robot, RobotId, Semantics};
pub use plan::Plan;
pub use validate::{validate_plan, ValidateError, ValidationReport, Violation};
