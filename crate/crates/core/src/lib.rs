//! Exact tooling for optimal multi-robot path planning on graphs.
//!
//! * [`model`]: graphs, instances, plans, the collision rules and the four objectives.
//! * [`search`]: exact joint-state solvers and Pareto-front enumeration.
//! * [`sat3`]: 3SAT formulas, DIMACS parsing and a brute-force oracle.
//! * [`reduce`]: 3SAT-to-MPP hardness constructions and their witness plans.
//! * [`pareto`]: instance families exhibiting objective tradeoffs.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod model;
pub mod sat3;
pub mod pareto;
pub mod reduce;
pub mod search;

pub use model::{CostVector, Graph, MppInstance, Objective, Plan, Semantics};
