use super::graph::VertexId;
use super::instance::RobotId;

/// Scheduled paths for every robot over time steps `0..=horizon`.
///
/// `paths[i][t]` is the vertex robot `i` occupies at time `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plan {
    horizon: usize,
    paths: Vec<Vec<VertexId>>,
}

impl Plan {
    /// Builds a plan from per-robot paths. All paths must have the same
    /// non-zero length; the horizon is that length minus one.
    pub fn from_paths(paths: Vec<Vec<VertexId>>) -> Option<Self> {
        let len = paths.first()?.len();
        if len == 0 || paths.iter().any(|p| p.len() != len) {
            return None;
        }
        Some(Plan {
            horizon: len - 1,
            paths,
        })
    }

    /// Builds a plan from a time-ordered sequence of configurations.
    pub fn from_configurations(configs: &[Vec<VertexId>]) -> Option<Self> {
        let robots = configs.first()?.len();
        if configs.iter().any(|c| c.len() != robots) {
            return None;
        }
        let paths = (0..robots)
            .map(|r| configs.iter().map(|c| c[r]).collect())
            .collect();
        Self::from_paths(paths)
    }

    /// A zero-horizon plan that keeps every robot at `placement`.
    pub fn stationary(placement: &[VertexId]) -> Self {
        Plan {
            horizon: 0,
            paths: placement.iter().map(|&v| vec![v]).collect(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn robot_count(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Vec<VertexId>] {
        &self.paths
    }

    pub fn path(&self, robot: RobotId) -> &[VertexId] {
        &self.paths[robot]
    }

    pub fn position(&self, robot: RobotId, t: usize) -> VertexId {
        self.paths[robot][t]
    }

    pub fn configuration(&self, t: usize) -> Vec<VertexId> {
        self.paths.iter().map(|p| p[t]).collect()
    }

    /// Number of edge traversals of `robot` (waits are free).
    pub fn path_length(&self, robot: RobotId) -> usize {
        self.paths[robot].windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// The plan played backwards in time.
    pub fn reversed(&self) -> Plan {
        Plan {
            horizon: self.horizon,
            paths: self
                .paths
                .iter()
                .map(|p| p.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Extends the plan with waits until `horizon`. No-op if already that long.
    pub fn padded_to(&self, horizon: usize) -> Plan {
        if horizon <= self.horizon {
            return self.clone();
        }
        let paths = self
            .paths
            .iter()
            .map(|p| {
                let mut p = p.clone();
                let last = *p.last().expect("non-empty path");
                p.resize(horizon + 1, last);
                p
            })
            .collect();
        Plan { horizon, paths }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configurations_and_paths_agree() {
        let plan = Plan::from_configurations(&[vec![0, 2], vec![1, 2], vec![1, 3]]).unwrap();
        assert_eq!(plan.horizon(), 2);
        assert_eq!(plan.path(0), &[0, 1, 1]);
        assert_eq!(plan.configuration(2), vec![1, 3]);
        assert_eq!(plan.path_length(0), 1);
        assert_eq!(plan.reversed().path(1), &[3, 2, 2]);
        assert_eq!(plan.padded_to(4).path(1), &[2, 2, 3, 3, 3]);
    }

    #[test]
    fn ragged_paths_rejected() {
        assert!(Plan::from_paths(vec![vec![0, 1], vec![0]]).is_none());
        assert!(Plan::from_paths(vec![]).is_none());
    }
}
