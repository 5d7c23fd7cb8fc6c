//! Lowlink machinery on induced subgraphs: bridges, articulation points,
//! blocks and maximal 2-edge-connected components.
//!
//! Every traversal uses an explicit stack; components can be path-like with
//! depth proportional to `n`.

use crate::graph::{is_connected, Graph, GraphError, VertexSet};

const NONE: usize = usize::MAX;

/// DFS forest with discovery times and lowpoints over the vertices accepted
/// by `member`.
struct Lowlink {
    disc: Vec<usize>,
    low: Vec<usize>,
    parent: Vec<usize>,
    /// Vertices in discovery order.
    order: Vec<usize>,
}

impl Lowlink {
    fn run(g: &Graph, member: impl Fn(usize) -> bool, roots: impl IntoIterator<Item = usize>) -> Self {
        let n = g.n();
        let mut ll = Lowlink {
            disc: vec![NONE; n],
            low: vec![NONE; n],
            parent: vec![NONE; n],
            order: Vec::new(),
        };
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in roots {
            if !member(root) || ll.disc[root] != NONE {
                continue;
            }
            ll.visit(root);
            stack.push((root, 0));
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let nbrs = g.neighbors(v);
                if *next < nbrs.len() {
                    let w = nbrs[*next];
                    *next += 1;
                    if !member(w) || w == ll.parent[v] {
                        continue;
                    }
                    if ll.disc[w] == NONE {
                        ll.parent[w] = v;
                        ll.visit(w);
                        stack.push((w, 0));
                    } else {
                        ll.low[v] = ll.low[v].min(ll.disc[w]);
                    }
                } else {
                    stack.pop();
                    let p = ll.parent[v];
                    if p != NONE {
                        ll.low[p] = ll.low[p].min(ll.low[v]);
                    }
                }
            }
        }
        ll
    }

    fn visit(&mut self, v: usize) {
        let t = self.order.len();
        self.disc[v] = t;
        self.low[v] = t;
        self.order.push(v);
    }

    fn bridges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .order
            .iter()
            .filter_map(|&v| {
                let p = self.parent[v];
                (p != NONE && self.low[v] > self.disc[p]).then(|| (p.min(v), p.max(v)))
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn articulation_points(&self) -> Vec<usize> {
        let n = self.disc.len();
        let mut children = vec![0usize; n];
        let mut is_cut = vec![false; n];
        for &v in &self.order {
            let p = self.parent[v];
            if p == NONE {
                continue;
            }
            children[p] += 1;
            if self.parent[p] != NONE && self.low[v] >= self.disc[p] {
                is_cut[p] = true;
            }
        }
        for &v in &self.order {
            if self.parent[v] == NONE && children[v] >= 2 {
                is_cut[v] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }
}

fn require_connected(g: &Graph, c: &VertexSet) -> Result<(), GraphError> {
    if is_connected(g, c)? {
        Ok(())
    } else {
        Err(GraphError::Disconnected)
    }
}

/// Bridges of `G[c]` as `(u, v)` with `u < v`, sorted.
pub fn bridges(g: &Graph, c: &VertexSet) -> Result<Vec<(usize, usize)>, GraphError> {
    require_connected(g, c)?;
    Ok(Lowlink::run(g, |v| c.contains(v), c.iter().take(1)).bridges())
}

/// `Art(c)`: articulation points of `G[c]`, ascending.
pub fn articulation_points(g: &Graph, c: &VertexSet) -> Result<Vec<usize>, GraphError> {
    require_connected(g, c)?;
    Ok(Lowlink::run(g, |v| c.contains(v), c.iter().take(1)).articulation_points())
}

/// Articulation points of `h` minus the `excluded` vertices, over every
/// connected component of the remainder.
pub(crate) fn articulation_points_excluding(h: &Graph, excluded: &[bool]) -> Vec<usize> {
    Lowlink::run(h, |v| !excluded[v], 0..h.n()).articulation_points()
}

/// Vertices `u` such that `{y, u}` is a cut point pair of the
/// 2-vertex-connected graph `h`, i.e. the articulation points of `h - y`.
pub fn cut_partners(h: &Graph, y: usize) -> Result<Vec<usize>, GraphError> {
    if y >= h.n() {
        return Err(GraphError::OutOfRange { vertex: y, n: h.n() });
    }
    let mut excluded = vec![false; h.n()];
    excluded[y] = true;
    Ok(articulation_points_excluding(h, &excluded))
}

/// Block-cut decomposition of an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex sets of the blocks, each ascending.
    pub blocks: Vec<Vec<usize>>,
    /// Edges of each block, parallel to `blocks`.
    pub block_edges: Vec<Vec<(usize, usize)>>,
    /// Vertices lying in two or more blocks, ascending.
    pub articulation: Vec<usize>,
}

impl BlockDecomposition {
    /// Compact copy of block `i`: local vertex `j` is `self.blocks[i][j]`.
    pub fn block_graph(&self, i: usize) -> Graph {
        let members = &self.blocks[i];
        let local = |v: usize| members.binary_search(&v).expect("block edge endpoint");
        let edges: Vec<(usize, usize)> = self.block_edges[i].iter().map(|&(u, v)| (local(u), local(v))).collect();
        Graph::from_pairs_unchecked(members.len(), &edges)
    }

    /// Indices of blocks with at least three vertices, i.e. the maximal
    /// 2-vertex-connected subsets.
    pub fn biconnected(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.blocks.len()).filter(|&i| self.blocks[i].len() >= 3)
    }
}

fn decompose(g: &Graph, member: impl Fn(usize) -> bool, roots: impl IntoIterator<Item = usize>) -> BlockDecomposition {
    let n = g.n();
    let mut disc = vec![NONE; n];
    let mut low = vec![NONE; n];
    let mut parent = vec![NONE; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut stamp = vec![NONE; n];
    let mut hits = vec![0usize; n];
    let mut out = BlockDecomposition {
        blocks: Vec::new(),
        block_edges: Vec::new(),
        articulation: Vec::new(),
    };

    for root in roots {
        if !member(root) || disc[root] != NONE {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, 0));
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(v);
            if *next < nbrs.len() {
                let w = nbrs[*next];
                *next += 1;
                if !member(w) || w == parent[v] {
                    continue;
                }
                if disc[w] == NONE {
                    parent[w] = v;
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    edge_stack.push((v, w));
                    stack.push((w, 0));
                } else if disc[w] < disc[v] {
                    low[v] = low[v].min(disc[w]);
                    edge_stack.push((v, w));
                }
            } else {
                stack.pop();
                let p = parent[v];
                if p == NONE {
                    continue;
                }
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let id = out.blocks.len();
                    let mut vertices = Vec::new();
                    let mut edges = Vec::new();
                    loop {
                        let e = edge_stack.pop().expect("tree edge on stack");
                        for x in [e.0, e.1] {
                            if stamp[x] != id {
                                stamp[x] = id;
                                hits[x] += 1;
                                vertices.push(x);
                            }
                        }
                        edges.push((e.0.min(e.1), e.0.max(e.1)));
                        if e == (p, v) {
                            break;
                        }
                    }
                    vertices.sort_unstable();
                    edges.sort_unstable();
                    out.blocks.push(vertices);
                    out.block_edges.push(edges);
                }
            }
        }
    }
    out.articulation = (0..n).filter(|&v| hits[v] >= 2).collect();
    out
}

/// Blocks of the connected subgraph `G[c]`; blocks with at least three
/// vertices are exactly its maximal 2-vertex-connected subsets.
pub fn blocks(g: &Graph, c: &VertexSet) -> Result<BlockDecomposition, GraphError> {
    require_connected(g, c)?;
    Ok(decompose(g, |v| c.contains(v), c.iter().take(1)))
}

/// Blocks of the whole graph, over all connected components.
pub fn all_blocks(g: &Graph) -> BlockDecomposition {
    decompose(g, |_| true, 0..g.n())
}

/// Maximal 2-edge-connected vertex sets of `g` (connected components of `g`
/// minus its bridges with at least two vertices), each ascending, ordered by
/// smallest vertex.
pub fn maximal_e_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let bridge_list = Lowlink::run(g, |_| true, 0..n).bridges();
    let mut comp = vec![NONE; n];
    let mut out = Vec::new();
    let is_bridge = |u: usize, v: usize| bridge_list.binary_search(&(u.min(v), u.max(v))).is_ok();
    for s in 0..n {
        if comp[s] != NONE {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if comp[w] == NONE && !is_bridge(v, w) {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out.retain(|m| m.len() >= 2);
    out
}

/// `G[c]` is 2-edge-connected with at least two vertices.
pub fn is_2ec(g: &Graph, c: &VertexSet) -> bool {
    c.len() >= 2 && bridges(g, c).is_ok_and(|b| b.is_empty())
}

/// `G[c]` is 2-vertex-connected with at least three vertices.
pub fn is_2vc(g: &Graph, c: &VertexSet) -> bool {
    c.len() >= 3 && articulation_points(g, c).is_ok_and(|a| a.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    fn full(g: &Graph) -> VertexSet {
        VertexSet::full(g.n())
    }

    #[test]
    fn bridge_examples() {
        let g = dumbbell();
        assert_eq!(bridges(&g, &full(&g)), Ok(vec![(2, 3)]));
        assert_eq!(bridges(&bowtie(), &VertexSet::full(5)), Ok(vec![]));
        assert_eq!(bridges(&c4(), &VertexSet::full(4)), Ok(vec![]));
        assert_eq!(
            bridges(&g, &set(6, &[0, 5])),
            Err(GraphError::Disconnected)
        );
    }

    #[test]
    fn articulation_examples() {
        assert_eq!(articulation_points(&bowtie(), &VertexSet::full(5)), Ok(vec![2]));
        assert_eq!(articulation_points(&complete(4), &VertexSet::full(4)), Ok(vec![]));
        assert_eq!(articulation_points(&dumbbell(), &VertexSet::full(6)), Ok(vec![2, 3]));
    }

    #[test]
    fn block_examples() {
        let b = blocks(&bowtie(), &VertexSet::full(5)).unwrap();
        let mut bl = b.blocks.clone();
        bl.sort();
        assert_eq!(bl, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(b.articulation, vec![2]);

        let b = blocks(&diamond(), &VertexSet::full(4)).unwrap();
        assert_eq!(b.blocks, vec![vec![0, 1, 2, 3]]);
        assert!(b.articulation.is_empty());

        let b = blocks(&dumbbell(), &VertexSet::full(6)).unwrap();
        let mut bl = b.blocks.clone();
        bl.sort();
        assert_eq!(bl, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5]]);
        assert_eq!(b.articulation, vec![2, 3]);
        assert_eq!(b.biconnected().count(), 2);
    }

    #[test]
    fn block_graph_is_compact() {
        let b = blocks(&bowtie(), &VertexSet::full(5)).unwrap();
        for i in 0..b.blocks.len() {
            let h = b.block_graph(i);
            assert_eq!(h.n(), 3);
            assert_eq!(h.m(), 3);
        }
    }

    #[test]
    fn maximal_e_component_examples() {
        assert_eq!(maximal_e_components(&dumbbell()), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(maximal_e_components(&bowtie()), vec![vec![0, 1, 2, 3, 4]]);
        let path = build(3, &[(0, 1), (1, 2)]);
        assert!(maximal_e_components(&path).is_empty());
    }

    #[test]
    fn predicate_examples() {
        assert!(is_2ec(&c4(), &VertexSet::full(4)));
        assert!(is_2vc(&c4(), &VertexSet::full(4)));
        assert!(is_2ec(&bowtie(), &VertexSet::full(5)));
        assert!(!is_2vc(&bowtie(), &VertexSet::full(5)));
        assert!(!is_2ec(&complete(4), &set(4, &[0, 1])));
        assert!(!is_2ec(&complete(4), &set(4, &[0])));
        assert!(!is_2vc(&complete(4), &VertexSet::new(4)));
    }

    #[test]
    fn cut_partner_examples() {
        // K_{2,3}: ordinary 0, 1 (for diamond vertices 1, 2); aux 2, 3, 4.
        let h = build(5, &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]);
        assert_eq!(cut_partners(&h, 2), Ok(vec![]));
        assert_eq!(cut_partners(&h, 0), Ok(vec![1]));
        assert_eq!(cut_partners(&complete(4), 0), Ok(vec![]));
        assert!(cut_partners(&h, 5).is_err());
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 200_000;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        assert!(is_2vc(&g, &VertexSet::full(n)));
    }

    // Definitional oracles: delete each edge / vertex and test connectivity.
    fn connected_without(g: &Graph, c: &[usize], skip_v: Option<usize>, skip_e: Option<(usize, usize)>) -> bool {
        let members: Vec<usize> = c.iter().copied().filter(|&v| Some(v) != skip_v).collect();
        if members.is_empty() {
            return true;
        }
        let mut seen = vec![false; g.n()];
        let mut stack = vec![members[0]];
        seen[members[0]] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                let cut = skip_e.is_some_and(|(a, b)| (a, b) == (v.min(w), v.max(w)));
                if !cut && members.contains(&w) && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == members.len()
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .zip(bits)
                    .filter_map(|(e, b)| b.then_some(e))
                    .collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    fn largest_component(g: &Graph) -> Vec<usize> {
        let mut best = Vec::new();
        let mut seen = vec![false; g.n()];
        for s in 0..g.n() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                for &w in g.neighbors(comp[i]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            if comp.len() > best.len() {
                best = comp;
            }
        }
        best
    }

    fn is_2ec_brute(g: &Graph, c: &[usize]) -> bool {
        let edges: Vec<_> = g.edges().filter(|(u, v)| c.contains(u) && c.contains(v)).collect();
        c.len() >= 2
            && connected_without(g, c, None, None)
            && edges.iter().all(|&e| connected_without(g, c, None, Some(e)))
    }

    proptest! {
        #[test]
        fn bridges_and_cuts_match_definition(g in arb_graph(7)) {
            let comp = largest_component(&g);
            let c = VertexSet::from_slice(g.n(), &comp).unwrap();
            let expected_bridges: Vec<_> = g
                .edges()
                .filter(|(u, v)| c.contains(*u) && c.contains(*v))
                .filter(|&e| !connected_without(&g, &comp, None, Some(e)))
                .collect();
            prop_assert_eq!(bridges(&g, &c).unwrap(), expected_bridges);
            let mut expected_cuts: Vec<_> = comp
                .iter()
                .copied()
                .filter(|&v| !connected_without(&g, &comp, Some(v), None))
                .collect();
            expected_cuts.sort_unstable();
            prop_assert_eq!(articulation_points(&g, &c).unwrap(), expected_cuts);
        }

        #[test]
        fn block_structure(g in arb_graph(8)) {
            let comp = largest_component(&g);
            let c = VertexSet::from_slice(g.n(), &comp).unwrap();
            let b = blocks(&g, &c).unwrap();
            for i in 0..b.blocks.len() {
                for j in i + 1..b.blocks.len() {
                    let shared = b.blocks[i].iter().filter(|v| b.blocks[j].contains(v)).count();
                    prop_assert!(shared <= 1);
                }
                if b.blocks[i].len() >= 3 {
                    let s = VertexSet::from_slice(g.n(), &b.blocks[i]).unwrap();
                    prop_assert!(is_2vc(&g, &s));
                }
            }
            if comp.len() > 1 {
                let mut covered: Vec<usize> = b.blocks.concat();
                covered.sort_unstable();
                covered.dedup();
                let mut sorted = comp.clone();
                sorted.sort_unstable();
                prop_assert_eq!(covered, sorted);
            }
            prop_assert_eq!(b.articulation, articulation_points(&g, &c).unwrap());
            let edge_total: usize = b.block_edges.iter().map(Vec::len).sum();
            let induced_edges = g.edges().filter(|(u, v)| c.contains(*u) && c.contains(*v)).count();
            prop_assert_eq!(edge_total, induced_edges);
        }

        #[test]
        fn maximal_e_components_are_maximal(g in arb_graph(9)) {
            let comps = maximal_e_components(&g);
            for comp in &comps {
                prop_assert!(is_2ec_brute(&g, comp));
                for extra in 0..g.n() {
                    if comp.contains(&extra) { continue; }
                    let mut bigger = comp.clone();
                    bigger.push(extra);
                    prop_assert!(!is_2ec_brute(&g, &bigger));
                }
            }
            // every 2ec subset lies inside one of them
            let n = g.n();
            for mask in 1u32..(1 << n) {
                let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                if is_2ec_brute(&g, &s) {
                    prop_assert!(comps.iter().any(|comp| s.iter().all(|v| comp.contains(v))));
                }
                let vs = VertexSet::from_slice(n, &s).unwrap();
                prop_assert_eq!(is_2ec(&g, &vs), is_2ec_brute(&g, &s));
            }
        }
    }

    fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (0u64..1 << pairs.len()).map(move |mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter_map(|(i, &e)| (mask >> i & 1 == 1).then_some(e))
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    }

    fn check_cut_partners(g: &Graph) {
        let all: Vec<usize> = (0..g.n()).collect();
        for y in 0..g.n() {
            let rest: Vec<usize> = all.iter().copied().filter(|&v| v != y).collect();
            let expected: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|&u| !connected_without(g, &rest, Some(u), None))
                .collect();
            assert_eq!(cut_partners(g, y).unwrap(), expected, "graph:\n{g}");
        }
    }

    #[test]
    fn cut_partners_match_definition() {
        let mut checked = 0;
        for n in 3..=6 {
            for g in all_graphs(n).filter(|g| is_2vc(g, &VertexSet::full(g.n()))) {
                check_cut_partners(&g);
                checked += 1;
            }
        }
        for seed in 0..400 {
            let g = crate::graph::random_graph(7, 0.55, seed).unwrap();
            if is_2vc(&g, &VertexSet::full(7)) {
                check_cut_partners(&g);
                checked += 1;
            }
        }
        assert!(checked > 1000);
    }
}
