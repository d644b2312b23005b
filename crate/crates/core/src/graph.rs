//! Simple undirected graphs with dense integer vertex ids.
//!
//! Graphs are immutable after construction and safe to share across
//! threads. Adjacency lists are kept sorted so that edge iteration and
//! serialization are deterministic.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Dense vertex index in `0..vertex_count`.
pub type VertexId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        endpoint: VertexId,
        vertex_count: usize,
    },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange {
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("graph text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Immutable simple undirected graph.
///
/// Construction collapses duplicate edges (in either orientation) and
/// rejects self-loops and out-of-range endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
    labels: BTreeMap<VertexId, String>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        Self::with_labels(vertex_count, edges, BTreeMap::new())
    }

    pub fn with_labels(
        vertex_count: usize,
        edges: &[(VertexId, VertexId)],
        labels: BTreeMap<VertexId, String>,
    ) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        endpoint,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        edge_count /= 2;
        if let Some((&id, _)) = labels.iter().find(|(&id, _)| id >= vertex_count) {
            return Err(GraphError::VertexOutOfRange {
                vertex: id,
                vertex_count,
            });
        }
        Ok(Self {
            adjacency,
            edge_count,
            labels,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, String> {
        &self.labels
    }

    pub fn vertex_with_label(&self, name: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .find(|(_, label)| label.as_str() == name)
            .map(|(&id, _)| id)
    }

    /// Shortest-path hop counts from `source`; `None` marks unreachable
    /// vertices.
    pub fn bfs_distances(&self, source: VertexId) -> Result<Vec<Option<u32>>, GraphError> {
        let n = self.vertex_count();
        if source >= n {
            return Err(GraphError::VertexOutOfRange {
                vertex: source,
                vertex_count: n,
            });
        }
        let mut dist = vec![None; n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Maximum BFS distance to any reachable vertex.
    pub fn eccentricity(&self, source: VertexId) -> Result<u32, GraphError> {
        Ok(self
            .bfs_distances(source)?
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        self.bfs_distances(0)
            .expect("vertex 0 exists")
            .iter()
            .all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() >= 1
            && self.is_connected()
            && self.edge_count == self.vertex_count() - 1
    }

    /// Parses the line-oriented graph text format:
    ///
    /// ```text
    /// # comment
    /// p graph <vertex_count>
    /// n <id> <label>
    /// e <u> <v>
    /// ```
    ///
    /// The `p` header must be the first non-comment line. Duplicate edges
    /// collapse; self-loops are rejected.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut vertex_count: Option<usize> = None;
        let mut edges = Vec::new();
        let mut labels = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parse_err = |msg: String| GraphError::Parse { line, msg };
            match (fields[0], vertex_count) {
                ("p", Some(_)) => {
                    return Err(parse_err("duplicate header line".into()));
                }
                ("p", None) => {
                    if fields.len() != 3 || fields[1] != "graph" {
                        return Err(parse_err(format!(
                            "expected `p graph <vertex_count>`, got `{trimmed}`"
                        )));
                    }
                    vertex_count = Some(parse_field(fields[2], line, "vertex count")?);
                }
                (_, None) => {
                    return Err(parse_err("`p graph` header must come first".into()));
                }
                ("n", Some(_)) => {
                    if fields.len() != 3 {
                        return Err(parse_err(format!(
                            "expected `n <id> <label>`, got `{trimmed}`"
                        )));
                    }
                    let id: VertexId = parse_field(fields[1], line, "vertex id")?;
                    labels.insert(id, fields[2].to_string());
                }
                ("e", Some(_)) => {
                    if fields.len() != 3 {
                        return Err(parse_err(format!("expected `e <u> <v>`, got `{trimmed}`")));
                    }
                    let u = parse_field(fields[1], line, "endpoint")?;
                    let v = parse_field(fields[2], line, "endpoint")?;
                    edges.push((u, v));
                }
                (tag, Some(_)) => {
                    return Err(parse_err(format!("unknown line tag `{tag}`")));
                }
            }
        }
        let vertex_count = vertex_count.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `p graph` header".into(),
        })?;
        Self::with_labels(vertex_count, &edges, labels)
    }

    /// Serializes to the text format; edges come out sorted by
    /// `(min endpoint, max endpoint)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p graph {}", self.vertex_count()).unwrap();
        for (id, label) in &self.labels {
            writeln!(out, "n {id} {label}").unwrap();
        }
        for (u, v) in self.edges() {
            writeln!(out, "e {u} {v}").unwrap();
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, GraphError> {
    s.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid {what} `{s}`"),
    })
}

/// Path on `n` vertices: edges `i`—`i+1`.
pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges).expect("path edges are valid")
}

/// Cycle on `n >= 3` vertices: edges `i`—`(i+1) mod n`.
pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).expect("cycle edges are valid")
}

/// Star with `leaves` leaves; the hub is vertex 0.
pub fn star_graph(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::new(leaves + 1, &edges).expect("star edges are valid")
}
