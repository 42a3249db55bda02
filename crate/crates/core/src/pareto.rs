//! Instance families whose optimal plans trade one objective against another.

use thiserror::Error;

use crate::model::{CostVector, GraphBuilder, MppInstance, Objective};
use crate::search::{pareto_front, Budget, SearchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleFamilyParams {
    /// Length of the long arc; the cycle has `x + 5` vertices.
    pub x: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoPathFamilyParams {
    /// Number of edges on each of the two long corridors.
    pub stretch: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{family} parameter must be at least {min}, got {got}")]
    Parameter {
        family: &'static str,
        min: usize,
        got: usize,
    },
}

fn check(family: &'static str, min: usize, got: usize) -> Result<(), FamilyError> {
    if got < min {
        Err(FamilyError::Parameter { family, min, got })
    } else {
        Ok(())
    }
}

/// Three robots on a cycle of `x + 5` vertices, numbered clockwise.
///
/// Robot 0 goes from 0 to 1, robot 1 from 2 to `x + 3` and robot 2 from 3 to
/// `x + 4`. Clockwise they travel 1, `x + 1` and `x + 1`; counterclockwise
/// `x + 4`, 4 and 4.
pub fn gen_cycle_tradeoff(params: CycleFamilyParams) -> Result<MppInstance, FamilyError> {
    let x = params.x;
    check("cycle", 1, x)?;
    let len = x + 5;
    let mut b = GraphBuilder::new();
    for v in 0..len {
        b.vertex(format!("c{v}"));
    }
    for v in 0..len {
        b.edge(v, (v + 1) % len);
    }
    let graph = b.build().expect("cycle graph is well formed");
    let starts = [0, 2, 3];
    let goals = [1, x + 3, x + 4];
    let instance = MppInstance::labeled(graph, &starts, &goals).expect("cycle instance is well formed");

    let cw: Vec<usize> = starts.iter().zip(&goals).map(|(&s, &g)| (g + len - s) % len).collect();
    let ccw: Vec<usize> = starts.iter().zip(&goals).map(|(&s, &g)| (s + len - g) % len).collect();
    assert_eq!(cw, [1, x + 1, x + 1]);
    assert_eq!(ccw, [x + 4, 4, 4]);
    Ok(instance)
}

/// Four robots that must cross from a start fan to a goal fan.
///
/// All starts hang off a merge vertex `a` and all goals off a vertex `b`, with
/// a corridor of `stretch` edges between them. Robot 3 also has a private
/// route of `stretch + 3` edges, one longer than the shared route.
pub fn gen_twopath_tradeoff(params: TwoPathFamilyParams) -> Result<MppInstance, FamilyError> {
    let s = params.stretch;
    check("two-path", 1, s)?;
    let mut b = GraphBuilder::new();
    let starts: Vec<_> = (1..=4).map(|i| b.vertex(format!("s{i}"))).collect();
    let goals: Vec<_> = (1..=4).map(|i| b.vertex(format!("g{i}"))).collect();
    let corridor: Vec<String> = std::iter::once("a".to_string())
        .chain((1..s).map(|k| format!("l{k}")))
        .chain(std::iter::once("b".to_string()))
        .collect();
    b.path(&corridor);
    for i in 1..=4 {
        b.link(&format!("s{i}"), "a");
        b.link("b", &format!("g{i}"));
    }
    let mut detour: Vec<String> = vec!["s4".into()];
    detour.extend((0..=s).map(|k| format!("c{k}")));
    detour.push("e1".into());
    detour.push("g4".into());
    b.path(&detour);
    let graph = b.build().expect("two-path graph is well formed");
    let instance = MppInstance::labeled(graph, &starts, &goals).expect("two-path instance is well formed");

    assert_eq!(instance.shortest_distances(), vec![s + 2; 4]);
    assert_eq!(detour.len() - 1, s + 3);
    Ok(instance)
}

/// The `n * n` sliding puzzle with every cell occupied: robot `k` starts on
/// cell `n*n - 1 - k` and must reach cell `k` (cells in row-major order).
pub fn gen_npuzzle(n: usize) -> Result<MppInstance, FamilyError> {
    check("npuzzle", 2, n)?;
    let mut b = GraphBuilder::new();
    for r in 0..n {
        for c in 0..n {
            b.vertex(format!("r{r}c{c}"));
        }
    }
    for r in 0..n {
        for c in 0..n {
            let v = r * n + c;
            if c + 1 < n {
                b.edge(v, v + 1);
            }
            if r + 1 < n {
                b.edge(v, v + n);
            }
        }
    }
    let graph = b.build().expect("grid graph is well formed");
    let cells = n * n;
    let starts: Vec<_> = (0..cells).map(|k| cells - 1 - k).collect();
    let goals: Vec<_> = (0..cells).collect();
    Ok(MppInstance::labeled(graph, &starts, &goals).expect("puzzle instance is well formed"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cycle,
    TwoPath,
}

impl Family {
    pub fn generate(self, param: usize) -> Result<MppInstance, FamilyError> {
        match self {
            Family::Cycle => gen_cycle_tradeoff(CycleFamilyParams { x: param }),
            Family::TwoPath => gen_twopath_tradeoff(TwoPathFamilyParams { stretch: param }),
        }
    }

    /// Cost vectors of the two extreme plans the family is built around.
    ///
    /// Cycle: all robots clockwise, then all counterclockwise. Two-path: all
    /// robots through the shared corridor, then robot 3 on its private route.
    pub fn reference_costs(self, param: usize) -> [CostVector; 2] {
        let p = param;
        match self {
            Family::Cycle => [
                CostVector {
                    total_arrival_time: 2 * p + 3,
                    makespan: p + 1,
                    total_distance: 2 * p + 3,
                    max_distance: p + 1,
                },
                CostVector {
                    total_arrival_time: p + 12,
                    makespan: p + 4,
                    total_distance: p + 12,
                    max_distance: p + 4,
                },
            ],
            Family::TwoPath => [
                CostVector {
                    total_arrival_time: 4 * p + 14,
                    makespan: p + 5,
                    total_distance: 4 * p + 8,
                    max_distance: p + 2,
                },
                CostVector {
                    total_arrival_time: 4 * p + 12,
                    makespan: p + 4,
                    total_distance: 4 * p + 9,
                    max_distance: p + 3,
                },
            ],
        }
    }
}

/// Nondominated subset of `points`, sorted by the first coordinate.
pub fn nondominated(points: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: Vec<(usize, usize)> = Vec::new();
    for p in sorted {
        if out.last().is_none_or(|q| p.1 < q.1) {
            out.push(p);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffCheck {
    pub param: usize,
    pub objectives: (Objective, Objective),
    pub front: Vec<(usize, usize)>,
    /// Nondominated subset of the two reference vectors.
    pub expected: Vec<(usize, usize)>,
    pub exhaustive: bool,
}

impl TradeoffCheck {
    pub fn matches(&self) -> bool {
        self.exhaustive && self.front == self.expected
    }

    /// True when no single plan attains both objective optima.
    pub fn incompatible(&self) -> bool {
        self.front.len() > 1
    }
}

/// Computes the exact front of `objectives` for each parameter and sets it
/// beside the front predicted by the family's reference vectors.
pub fn verify_tradeoff(
    family: Family,
    params: impl IntoIterator<Item = usize>,
    objectives: (Objective, Objective),
    budget_scale: usize,
) -> Result<Vec<TradeoffCheck>, VerifyError> {
    let mut out = Vec::new();
    for param in params {
        let instance = family.generate(param)?;
        let budget = Budget::for_instance(&instance, budget_scale);
        let front = pareto_front(&instance, objectives, &budget)?;
        let refs = family.reference_costs(param);
        let candidates: Vec<_> = refs
            .iter()
            .map(|c| (c.get(objectives.0), c.get(objectives.1)))
            .collect();
        out.push(TradeoffCheck {
            param,
            objectives,
            front: front.values(),
            expected: nondominated(&candidates),
            exhaustive: front.exhaustive,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_has_x_plus_five_vertices() {
        let inst = gen_cycle_tradeoff(CycleFamilyParams { x: 10 }).unwrap();
        assert_eq!(inst.graph().vertex_count(), 15);
        assert_eq!(inst.robot_count(), 3);
    }

    #[test]
    fn two_path_base_has_thirteen_vertices() {
        let inst = gen_twopath_tradeoff(TwoPathFamilyParams { stretch: 1 }).unwrap();
        assert_eq!(inst.graph().vertex_count(), 13);
        assert_eq!(inst.robot_count(), 4);
    }

    #[test]
    fn puzzle_layout() {
        let inst = gen_npuzzle(3).unwrap();
        assert_eq!(inst.robot_count(), 9);
        assert_eq!(inst.goals().unwrap(), (0..9).collect::<Vec<_>>());
        assert_eq!(inst.starts()[4], 4);
        assert!(gen_npuzzle(1).is_err());
    }

    #[test]
    fn zero_parameters_rejected() {
        assert!(gen_cycle_tradeoff(CycleFamilyParams { x: 0 }).is_err());
        assert!(gen_twopath_tradeoff(TwoPathFamilyParams { stretch: 0 }).is_err());
    }

    #[test]
    fn nondominated_filter() {
        assert_eq!(nondominated(&[(7, 3), (14, 6)]), vec![(7, 3)]);
        assert_eq!(nondominated(&[(23, 11), (22, 14)]), vec![(22, 14), (23, 11)]);
        assert_eq!(nondominated(&[(5, 5), (5, 5)]), vec![(5, 5)]);
    }
}
