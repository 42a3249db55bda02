use std::collections::{HashMap, VecDeque};

use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(VertexId, VertexId, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("graph is not connected: vertex {0} unreachable from vertex 0")]
    Disconnected(VertexId),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// Connected, undirected, simple graph on the dense vertex ids `0..n`.
///
/// Adjacency lists are kept sorted so that every traversal (and therefore every
/// solver built on top of it) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<Option<String>>,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
    by_label: HashMap<String, VertexId>,
}

impl Graph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        Self::with_labels(vec![None; vertex_count], edges)
    }

    pub fn with_labels(
        labels: Vec<Option<String>>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut by_label = HashMap::new();
        for (v, label) in labels.iter().enumerate() {
            if let Some(label) = label {
                if by_label.insert(label.clone(), v).is_some() {
                    return Err(GraphError::DuplicateLabel(label.clone()));
                }
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adjacency[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_list.push((u.min(v), u.max(v)));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Graph {
            labels,
            adjacency,
            edges: edge_list,
            by_label,
        };
        let dist = graph.distances_from(0);
        if let Some(v) = dist.iter().position(Option::is_none) {
            return Err(GraphError::Disconnected(v));
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order, each as `(min, max)`.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.vertex_count()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(v).and_then(|l| l.as_deref())
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied()
    }

    /// Display name: the label if present, the numeric id otherwise.
    pub fn name(&self, v: VertexId) -> String {
        self.label(v).map_or_else(|| v.to_string(), str::to_owned)
    }

    /// Breadth-first hop distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or_default();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Unweighted shortest-path distance. Always defined because the graph is connected.
    pub fn shortest_distance(&self, u: VertexId, v: VertexId) -> usize {
        if u == v {
            return 0;
        }
        self.distances_from(u)[v].expect("graph is connected")
    }

    /// All-pairs hop distances, row `u` holds distances from `u`.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.vertex_count())
            .map(|u| {
                self.distances_from(u)
                    .into_iter()
                    .map(|d| d.expect("graph is connected"))
                    .collect()
            })
            .collect()
    }
}

/// Incremental construction of a labeled graph by vertex name.
#[derive(Debug, Default)]
pub(crate) struct GraphBuilder {
    labels: Vec<Option<String>>,
    by_label: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl GraphBuilder {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Id of the vertex named `name`, creating it on first use.
    pub(crate) fn vertex(&mut self, name: impl Into<String>) -> VertexId {
        let name = name.into();
        if let Some(&v) = self.by_label.get(&name) {
            return v;
        }
        let v = self.labels.len();
        self.labels.push(Some(name.clone()));
        self.by_label.insert(name, v);
        v
    }

    pub(crate) fn edge(&mut self, a: VertexId, b: VertexId) {
        self.edges.push((a, b));
    }

    pub(crate) fn link(&mut self, a: &str, b: &str) {
        let (a, b) = (self.vertex(a), self.vertex(b));
        self.edge(a, b);
    }

    /// Joins consecutive names with edges.
    pub(crate) fn path(&mut self, names: &[String]) {
        for w in names.windows(2) {
            self.link(&w[0], &w[1]);
        }
    }

    pub(crate) fn build(self) -> Result<Graph, GraphError> {
        Graph::with_labels(self.labels, self.edges)
    }
}
