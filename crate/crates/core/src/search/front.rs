use crate::model::{CostVector, MppInstance, Objective, Plan};

use super::{solve, solve_constrained, Budget, SearchError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoPoint {
    pub first: usize,
    pub second: usize,
    pub costs: CostVector,
    pub plan: Plan,
}

/// Nondominated `(first, second)` objective values, ordered by increasing `first`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoFront {
    pub objectives: (Objective, Objective),
    pub points: Vec<ParetoPoint>,
    /// False when a solve ran out of budget and the front may be missing points.
    pub exhaustive: bool,
}

impl ParetoFront {
    pub fn values(&self) -> Vec<(usize, usize)> {
        self.points.iter().map(|p| (p.first, p.second)).collect()
    }
}

/// Enumerates the Pareto front of an objective pair with the epsilon-constraint
/// method: minimize `first` subject to `second <= beta`, then tighten `second`
/// at that value, and sweep `beta` downward until `second` reaches its own
/// unconstrained optimum.
pub fn pareto_front(
    instance: &MppInstance,
    objectives: (Objective, Objective),
    budget: &Budget,
) -> Result<ParetoFront, SearchError> {
    let (first, second) = objectives;
    assert_ne!(first, second, "objective pair must be two different objectives");
    let mut front = ParetoFront {
        objectives,
        points: Vec::new(),
        exhaustive: true,
    };
    let second_min = match solve(instance, second, budget) {
        Ok(s) => s.value(),
        Err(SearchError::BudgetExhausted { .. }) => {
            front.exhaustive = false;
            return Ok(front);
        }
        Err(e) => return Err(e),
    };

    let mut beta: Option<usize> = None;
    loop {
        let best_first = match beta {
            None => solve(instance, first, budget),
            Some(b) => solve_constrained(instance, first, second, b, budget),
        };
        let first_value = match best_first {
            Ok(s) => s.value(),
            Err(SearchError::BudgetExhausted { .. }) => {
                front.exhaustive = false;
                break;
            }
            Err(SearchError::Infeasible) if beta.is_some() => break,
            Err(e) => return Err(e),
        };
        let tight = match solve_constrained(instance, second, first, first_value, budget) {
            Ok(s) => s,
            Err(SearchError::BudgetExhausted { .. }) => {
                front.exhaustive = false;
                break;
            }
            Err(e) => return Err(e),
        };
        let second_value = tight.value();
        front.points.push(ParetoPoint {
            first: first_value,
            second: second_value,
            costs: tight.costs,
            plan: tight.plan,
        });
        if second_value <= second_min {
            break;
        }
        beta = Some(second_value - 1);
    }
    Ok(front)
}
