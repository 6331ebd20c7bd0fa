//! Simple undirected graphs, the edge-list text format, random instance
//! models and the maximum-degree lower bound.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng;

/// Simple undirected graph on vertices `0..n`.
///
/// Immutable after construction. The adjacency matrix is derived from the edge
/// set and always symmetric with a zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

/// Result of parsing an edge list: the graph plus the number of duplicate
/// edge lines that were collapsed.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub duplicates: usize,
}

impl Graph {
    /// Builds a graph from 0-based edges. Duplicates (in either orientation)
    /// are collapsed; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Contract(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::Contract(format!("self-loop at vertex {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_sorted_set(n, set))
    }

    fn from_sorted_set(n: usize, set: BTreeSet<(usize, usize)>) -> Self {
        let mut adjacency = vec![false; n * n];
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Graph {
            n,
            edges: set.into_iter().collect(),
            adjacency,
            neighbors,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_set(n, BTreeSet::new())
    }

    pub fn complete(n: usize) -> Self {
        let set = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted_set(n, set)
    }

    pub fn path(n: usize) -> Self {
        let set = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_sorted_set(n, set)
    }

    pub fn cycle(n: usize) -> Self {
        let mut set: BTreeSet<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            set.insert((0, n - 1));
        }
        Self::from_sorted_set(n, set)
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let set = (1..=leaves).map(|v| (0, v)).collect();
        Self::from_sorted_set(leaves + 1, set)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n + v]
    }

    /// Entry `a_uv` of the adjacency matrix.
    pub fn a(&self, u: usize, v: usize) -> u32 {
        self.has_edge(u, v) as u32
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edge density `|E| / C(n, 2)`; zero for `n < 2`.
    pub fn density(&self) -> f64 {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        if pairs == 0 {
            0.0
        } else {
            self.edges.len() as f64 / pairs as f64
        }
    }

    /// The graph obtained by renaming vertex `v` to `relabel[v]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Self> {
        if relabel.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: relabel.len(),
            });
        }
        Self::from_edges(
            self.n,
            self.edges.iter().map(|&(u, v)| (relabel[u], relabel[v])),
        )
    }

    /// Parses the edge-list format: first non-comment line `n m`, then `m`
    /// lines `u v` with 1-based endpoints. Lines starting with `#` and blank
    /// lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<ParsedGraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line `n m`"))?;
        let header = parse_numbers(header_line, header)?;
        let &[n, m] = header.as_slice() else {
            return Err(Error::parse(header_line, "header must be `n m`"));
        };

        let mut set = BTreeSet::new();
        let mut seen = 0usize;
        for (line, content) in lines {
            let fields = parse_numbers(line, content)?;
            let &[u, v] = fields.as_slice() else {
                return Err(Error::parse(line, "edge line must be `u v`"));
            };
            for w in [u, v] {
                if w < 1 || w > n {
                    return Err(Error::parse(
                        line,
                        format!("vertex {w} out of range 1..={n}"),
                    ));
                }
            }
            if u == v {
                return Err(Error::parse(line, format!("self-loop at vertex {u}")));
            }
            seen += 1;
            set.insert(((u.min(v) - 1), (u.max(v) - 1)));
        }
        if seen != m {
            let last = text.lines().count().max(1);
            return Err(Error::parse(
                last,
                format!("header announces {m} edges but {seen} were listed"),
            ));
        }
        let duplicates = seen - set.len();
        Ok(ParsedGraph {
            graph: Self::from_sorted_set(n, set),
            duplicates,
        })
    }

    /// Canonical edge-list text (1-based, sorted edges).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        out
    }

    /// Erdős–Rényi `G(n, p)`: pairs `(i, j)`, `i < j`, are visited in
    /// lexicographic order and each is kept when a uniform draw in `[0, 1)` is
    /// below `p`.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = rng::stream(seed, rng::tags::ERDOS_RENYI, n as u64);
        let mut set = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    set.insert((i, j));
                }
            }
        }
        Self::from_sorted_set(n, set)
    }

    /// Random geometric graph `U(n, d)`: `n` points uniform in the unit cube
    /// `[0, 1]^3`, joined when their Euclidean distance is at most `d`.
    pub fn random_geometric(n: usize, d: f64, seed: u64) -> Self {
        let points = Self::geometric_points(n, seed);
        let mut set = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                let dist2: f64 = (0..3).map(|k| (points[i][k] - points[j][k]).powi(2)).sum();
                if dist2.sqrt() <= d {
                    set.insert((i, j));
                }
            }
        }
        Self::from_sorted_set(n, set)
    }

    /// The point cloud behind [`Graph::random_geometric`].
    pub fn geometric_points(n: usize, seed: u64) -> Vec<[f64; 3]> {
        let mut rng = rng::stream(seed, rng::tags::GEOMETRIC, n as u64);
        (0..n)
            .map(|_| [rng.random(), rng.random(), rng.random()])
            .collect()
    }
}

fn parse_numbers(line: usize, content: &str) -> Result<Vec<usize>> {
    content
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found `{tok}`")))
        })
        .collect()
}

/// `⌊(Δ(G) + 1) / 2⌋`, a lower bound on the cutwidth: the neighbours of a
/// maximum-degree vertex are split between its own cut and the cut of its
/// predecessor.
pub fn degree_lower_bound(graph: &Graph) -> usize {
    if graph.edge_count() == 0 {
        0
    } else {
        (graph.max_degree() + 1) / 2
    }
}
