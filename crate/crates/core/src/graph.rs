//! Simple undirected graphs over dense ids, vertex subsets, and the
//! edge-list text format.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed line {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: header announces {expected} edges, found {found}")]
    EdgeCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("vertex {0} is not in the set")]
    NotMember(usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("induced subgraph is disconnected")]
    Disconnected,
    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),
}

/// Immutable simple undirected graph with sorted adjacency lists, stored
/// contiguously (`targets[offsets[v]..offsets[v + 1]]` lists `v`'s neighbours).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints. Line numbers in errors are edge indices + 1.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            check_edge(i + 1, n, u, v)?;
        }
        let g = Graph::from_pairs_unchecked(n, edges);
        for u in 0..n {
            if let Some(w) = g.neighbors(u).windows(2).find(|w| w[0] == w[1]) {
                let v = w[0];
                let line = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
                    .nth(1)
                    .map_or(0, |(i, _)| i + 1);
                return Err(GraphError::DuplicateEdge {
                    line,
                    u: u.min(v),
                    v: u.max(v),
                });
            }
        }
        Ok(g)
    }

    /// Builds from undirected pairs already known to be in range and
    /// loop-free; each edge is listed once.
    pub(crate) fn from_pairs_unchecked(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut offsets = vec![0; n + 1];
        for &(u, v) in edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { offsets, targets }
    }

    /// Builds from adjacency lists already known to be simple and symmetric.
    pub(crate) fn from_adjacency_unchecked(adj: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(adj.iter().map(Vec::len).sum());
        for mut list in adj {
            list.sort_unstable();
            targets.extend(list);
            offsets.push(targets.len());
        }
        debug_assert!(targets.len() % 2 == 0);
        Graph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Compact copy of `G[c]`; local vertex `i` is `members[i]`, members ascending.
    pub fn induced(&self, c: &VertexSet) -> (Graph, Vec<usize>) {
        let members = c.to_sorted_vec();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        // members ascend, so the local map is monotone and rows stay sorted
        let mut offsets = Vec::with_capacity(members.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for &v in &members {
            targets.extend(self.neighbors(v).iter().filter_map(|&w| (local[w] != usize::MAX).then_some(local[w])));
            offsets.push(targets.len());
        }
        (Graph { offsets, targets }, members)
    }

    /// Serializes to the edge-list format read by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.m())?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

fn check_edge(line: usize, n: usize, u: usize, v: usize) -> Result<(), GraphError> {
    for vertex in [u, v] {
        if vertex >= n {
            return Err(GraphError::VertexOutOfRange { line, vertex, n });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop { line, vertex: u });
    }
    Ok(())
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let malformed = || GraphError::Malformed {
        line,
        content: text.to_string(),
    };
    let mut it = text.split_whitespace();
    let a = it.next().ok_or_else(malformed)?.parse().map_err(|_| malformed())?;
    let b = it.next().ok_or_else(malformed)?.parse().map_err(|_| malformed())?;
    if it.next().is_some() {
        return Err(malformed());
    }
    Ok((a, b))
}

/// Parses the edge-list format: a header `n m` followed by exactly `m`
/// lines `u v`. Lines starting with `#` and blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(GraphError::MissingHeader)?;
    let (n, m) = parse_pair(header_line, header)?;

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut found = 0;
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        if found == m {
            return Err(GraphError::EdgeCountMismatch {
                line,
                expected: m,
                found: found + 1,
            });
        }
        let (u, v) = parse_pair(line, content)?;
        check_edge(line, n, u, v)?;
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(GraphError::DuplicateEdge {
                line,
                u: u.min(v),
                v: u.max(v),
            });
        }
        adj[u].push(v);
        adj[v].push(u);
        found += 1;
    }
    if found != m {
        return Err(GraphError::EdgeCountMismatch {
            line: last_line,
            expected: m,
            found,
        });
    }
    Ok(Graph::from_adjacency_unchecked(adj))
}

/// Erdős–Rényi `G(n, p)`, deterministic per seed.
///
/// Pairs are visited in the order (1,0), (2,0), (2,1), ... and skipped
/// geometrically, so the cost is proportional to `n + m` rather than `n^2`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    if p >= 1.0 {
        let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        return Ok(Graph::from_adjacency_unchecked(adj));
    }
    let mut adj = vec![Vec::new(); n];
    if p > 0.0 && n > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log_q = (1.0 - p).ln();
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.gen();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + if skip.is_finite() { skip as i64 } else { i64::MAX / 4 };
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                let u = w as usize;
                adj[v].push(u);
                adj[u].push(v);
            }
        }
    }
    Ok(Graph::from_adjacency_unchecked(adj))
}

/// `deg_{G[c]}(v)`.
pub fn degree_in(g: &Graph, c: &VertexSet, v: usize) -> Result<usize, GraphError> {
    if !c.contains(v) {
        return Err(GraphError::NotMember(v));
    }
    Ok(g.neighbors(v).iter().filter(|&&w| c.contains(w)).count())
}

/// Whether `G[c]` is connected.
pub fn is_connected(g: &Graph, c: &VertexSet) -> Result<bool, GraphError> {
    let start = c.iter().next().ok_or(GraphError::EmptySet)?;
    let mut seen = vec![false; g.n()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if c.contains(w) && !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    Ok(reached == c.len())
}

/// Subset of `0..n` with O(1) membership, insertion and deletion.
///
/// Members are kept in a list; `truncate` drops the most recently pushed
/// members, so a push-only sequence can be undone exactly.
#[derive(Debug, Clone)]
pub struct VertexSet {
    pos: Vec<usize>,
    list: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            pos: vec![ABSENT; n],
            list: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            pos: (0..n).collect(),
            list: (0..n).collect(),
        }
    }

    pub fn from_slice(n: usize, vertices: &[usize]) -> Result<Self, GraphError> {
        let mut s = VertexSet::new(n);
        for &v in vertices {
            if v >= n {
                return Err(GraphError::OutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.pos.len()
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.pos.get(v).is_some_and(|&p| p != ABSENT)
    }

    /// Returns false if `v` was already present.
    pub fn insert(&mut self, v: usize) -> bool {
        if self.pos[v] != ABSENT {
            return false;
        }
        self.pos[v] = self.list.len();
        self.list.push(v);
        true
    }

    /// Swap-removes `v`; returns false if absent.
    pub fn remove(&mut self, v: usize) -> bool {
        let p = self.pos[v];
        if p == ABSENT {
            return false;
        }
        let last = self.list.pop().expect("non-empty");
        if last != v {
            self.list[p] = last;
            self.pos[last] = p;
        }
        self.pos[v] = ABSENT;
        true
    }

    pub fn truncate(&mut self, len: usize) {
        while self.list.len() > len {
            let v = self.list.pop().expect("non-empty");
            self.pos[v] = ABSENT;
        }
    }

    pub fn clear(&mut self) {
        self.truncate(0);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.list.iter().copied()
    }

    /// Members in insertion order (subject to swap-removal).
    pub fn as_slice(&self) -> &[usize] {
        &self.list
    }

    pub fn to_sorted_vec(&self) -> Vec<usize> {
        let mut v = self.list.clone();
        v.sort_unstable();
        v
    }

    pub fn is_disjoint(&self, vertices: &[usize]) -> bool {
        vertices.iter().all(|&v| !self.contains(v))
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|v| other.contains(v))
    }
}

impl Eq for VertexSet {}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_c4() {
        let g = parse_graph("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(g, c4());
    }

    #[test]
    fn parses_single_vertex() {
        let g = parse_graph("1 0").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn comments_and_crlf() {
        let g = parse_graph("# a triangle\r\n3 3\r\n0 1\r\n# mid\r\n1 2\r\n2 0\r\n").unwrap();
        assert_eq!(g, complete(3));
    }

    #[test]
    fn rejects_duplicate_edge_with_line() {
        let err = parse_graph("3 3\n0 1\n0 1\n1 2").unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge { line: 3, u: 0, v: 1 });
        let err = parse_graph("3 2\n0 1\n1 0").unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge { line: 3, .. }));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_graph("3 1\n0 3"),
            Err(GraphError::VertexOutOfRange { line: 2, vertex: 3, .. })
        ));
        assert!(matches!(
            parse_graph("3 1\n1 1"),
            Err(GraphError::SelfLoop { line: 2, vertex: 1 })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 x"),
            Err(GraphError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("3 2\n0 1"),
            Err(GraphError::EdgeCountMismatch { expected: 2, found: 1, .. })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 1\n1 2"),
            Err(GraphError::EdgeCountMismatch { line: 3, .. })
        ));
        assert_eq!(parse_graph("# nothing\n"), Err(GraphError::MissingHeader));
    }

    #[test]
    fn degree_examples() {
        let d = diamond();
        assert_eq!(degree_in(&d, &set(4, &[0, 1, 2]), 0), Ok(2));
        assert_eq!(degree_in(&d, &VertexSet::full(4), 1), Ok(3));
        let k4 = complete(4);
        for v in 0..4 {
            assert_eq!(degree_in(&k4, &VertexSet::full(4), v), Ok(3));
        }
        assert_eq!(
            degree_in(&d, &set(4, &[0, 1]), 3),
            Err(GraphError::NotMember(3))
        );
    }

    #[test]
    fn connectivity_examples() {
        let g = dumbbell();
        assert_eq!(is_connected(&g, &VertexSet::full(6)), Ok(true));
        assert_eq!(is_connected(&g, &set(6, &[0, 1, 4])), Ok(false));
        assert_eq!(is_connected(&g, &set(6, &[5])), Ok(true));
        assert_eq!(is_connected(&g, &VertexSet::new(6)), Err(GraphError::EmptySet));
    }

    #[test]
    fn random_graph_extremes() {
        assert_eq!(random_graph(5, 1.0, 3).unwrap(), complete(5));
        assert_eq!(random_graph(4, 0.0, 3).unwrap().m(), 0);
        assert_eq!(
            random_graph(8, 0.5, 11).unwrap(),
            random_graph(8, 0.5, 11).unwrap()
        );
        assert!(matches!(
            random_graph(3, 1.5, 0),
            Err(GraphError::InvalidProbability(_))
        ));
    }

    #[test]
    fn random_graph_density_is_plausible() {
        let g = random_graph(400, 0.1, 5).unwrap();
        let expected = 0.1 * (400.0 * 399.0 / 2.0);
        let m = g.m() as f64;
        assert!((m - expected).abs() < 0.1 * expected, "m = {m}");
    }

    #[test]
    fn induced_copy() {
        let (h, back) = dumbbell().induced(&set(6, &[5, 3, 2, 4]));
        assert_eq!(back, vec![2, 3, 4, 5]);
        assert_eq!(h.m(), 4);
        assert!(h.has_edge(0, 1));
        assert!(!h.has_edge(0, 2));
    }

    #[test]
    fn vertex_set_remove_keeps_positions() {
        let mut s = set(6, &[0, 1, 2, 3]);
        assert!(s.remove(1));
        assert!(!s.remove(1));
        assert!(s.contains(3));
        assert!(s.remove(3));
        assert_eq!(s.to_sorted_vec(), vec![0, 2]);
        assert!(s.insert(5));
        assert!(!s.insert(5));
        assert_eq!(s.len(), 3);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..9).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .zip(bits)
                    .filter_map(|(e, b)| b.then_some(e))
                    .collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
        }

        #[test]
        fn full_degree_is_adjacency_length(g in arb_graph()) {
            let full = VertexSet::full(g.n());
            for v in 0..g.n() {
                prop_assert_eq!(degree_in(&g, &full, v).unwrap(), g.degree(v));
            }
        }

        #[test]
        fn truncate_restores_prior_state(
            start in proptest::collection::vec(0usize..20, 0..10),
            pushed in proptest::collection::vec(0usize..20, 0..10),
        ) {
            let mut s = VertexSet::from_slice(20, &start).unwrap();
            let before = s.as_slice().to_vec();
            let len = s.len();
            for v in pushed {
                s.insert(v);
            }
            s.truncate(len);
            prop_assert_eq!(s.as_slice(), &before[..]);
            for v in 0..20 {
                prop_assert_eq!(s.contains(v), before.contains(&v));
            }
        }

        #[test]
        fn random_graph_is_deterministic(n in 0usize..40, p in 0.0f64..=1.0, seed: u64) {
            prop_assert_eq!(random_graph(n, p, seed).unwrap(), random_graph(n, p, seed).unwrap());
        }
    }
}
