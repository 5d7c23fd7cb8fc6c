//! Minimal removable sets of 2-edge-connected and 2-vertex-connected
//! components.
//!
//! Every MRS is a candidate: either a vertex of degree above two or a
//! maximal path of degree-two vertices. Whether a candidate is removable is
//! decided on the auxiliary graph `H_C`, in which each maximal two-degree
//! path is contracted to one vertex and each edge between two high-degree
//! vertices is subdivided. Removing candidate `Y` leaves `G[C] - Y`
//!
//! * 2-edge-connected iff `Y` is not the boundary of a two-degree path and
//!   no auxiliary vertex is a cut vertex of `H_C - Y`;
//! * 2-vertex-connected iff no ordinary vertex is a cut vertex of `H_C - Y`.
//!
//! Edge-auxiliary vertices adjacent to a removed ordinary vertex represent
//! edges that vanish with it; they are dropped before the cut-vertex search.
//!
//! For an e-component that is not 2-vertex-connected the family is
//! assembled from its blocks: a non-cycle block contributes its own
//! removable candidates that avoid the articulation points, and a cycle
//! block with exactly one articulation point contributes the rest of the
//! cycle.

use thiserror::Error;

use crate::connectivity::{articulation_points_excluding, blocks, is_2vc};
use crate::engine::MrsOracle;
use crate::graph::{Graph, GraphError, VertexSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MrsError {
    #[error("component is not 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("component is not 2-vertex-connected")]
    NotTwoVertexConnected,
    #[error("component induces a cycle")]
    Cycle,
    #[error("vertex {vertex} has degree {degree} in the component")]
    LowDegree { vertex: usize, degree: usize },
    #[error("both ends of a two-degree path attach to vertex {0}")]
    SharedBoundary(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateKind {
    /// A single vertex of degree above two.
    HighDeg,
    /// A maximal path of degree-two vertices.
    TwoDegPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub kind: CandidateKind,
    /// The vertex for `HighDeg`; the path in order for `TwoDegPath`.
    pub vertices: Vec<usize>,
    /// Neighbours of the two path ends. `None` when the whole component is
    /// a cycle.
    pub boundaries: Option<(usize, usize)>,
}

impl Candidate {
    fn high(v: usize) -> Self {
        Candidate {
            kind: CandidateKind::HighDeg,
            vertices: vec![v],
            boundaries: None,
        }
    }

    pub fn min_vertex(&self) -> usize {
        *self.vertices.iter().min().expect("candidates are nonempty")
    }

    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }

    fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        Candidate {
            kind: self.kind,
            vertices: self.vertices.iter().map(|&v| map(v)).collect(),
            boundaries: self.boundaries.map(|(a, b)| (map(a), map(b))),
        }
    }
}

fn other_neighbor(g: &Graph, v: usize, prev: usize) -> usize {
    let nb = g.neighbors(v);
    if nb[0] == prev {
        nb[1]
    } else {
        nb[0]
    }
}

/// `Can(C)` for a compact graph with minimum degree two.
fn local_candidates(l: &Graph) -> Result<Vec<Candidate>, MrsError> {
    let n = l.n();
    if let Some(v) = (0..n).find(|&v| l.degree(v) < 2) {
        return Err(MrsError::LowDegree {
            vertex: v,
            degree: l.degree(v),
        });
    }
    let mut out = Vec::new();
    let mut done = vec![false; n];
    for v in 0..n {
        if l.degree(v) > 2 {
            out.push(Candidate::high(v));
            continue;
        }
        if done[v] {
            continue;
        }
        // walk both ways until a high-degree vertex, or back to v on a cycle
        let mut ends = [v; 2];
        let mut arms: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut cycle = false;
        for side in 0..2 {
            let (mut prev, mut cur) = (v, l.neighbors(v)[side]);
            while l.degree(cur) == 2 && cur != v {
                arms[side].push(cur);
                let next = other_neighbor(l, cur, prev);
                prev = cur;
                cur = next;
            }
            if cur == v {
                cycle = true;
                break;
            }
            ends[side] = cur;
        }
        let (vertices, boundaries) = if cycle {
            let mut path = vec![v];
            path.extend(arms[0].iter().copied());
            (path, None)
        } else {
            let mut path: Vec<usize> = arms[0].iter().rev().copied().collect();
            path.push(v);
            path.extend(arms[1].iter().copied());
            (path, Some((ends[0], ends[1])))
        };
        for &u in &vertices {
            done[u] = true;
        }
        out.push(Candidate {
            kind: CandidateKind::TwoDegPath,
            vertices,
            boundaries,
        });
    }
    out.sort_by_key(Candidate::min_vertex);
    Ok(out)
}

fn local_is_cycle(l: &Graph) -> bool {
    l.n() >= 3 && (0..l.n()).all(|v| l.degree(v) == 2) && {
        // connected 2-regular graph: walking from 0 visits everything
        let (mut prev, mut cur, mut steps) = (0, l.neighbors(0)[0], 1);
        while cur != 0 {
            let next = other_neighbor(l, cur, prev);
            prev = cur;
            cur = next;
            steps += 1;
        }
        steps == l.n()
    }
}

/// Partition of `c` into maximal two-degree paths and high-degree
/// singletons, ordered by smallest vertex.
pub fn candidates(g: &Graph, c: &VertexSet) -> Result<Vec<Candidate>, MrsError> {
    let (l, back) = g.induced(c);
    let cands = local_candidates(&l).map_err(|e| match e {
        MrsError::LowDegree { vertex, degree } => MrsError::LowDegree {
            vertex: back[vertex],
            degree,
        },
        e => e,
    })?;
    Ok(cands.iter().map(|cd| cd.relabel(|v| back[v])).collect())
}

/// `G[c]` is connected and 2-regular.
pub fn is_cycle(g: &Graph, c: &VertexSet) -> bool {
    if c.is_empty() {
        return false;
    }
    let (l, _) = g.induced(c);
    local_is_cycle(&l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxVertex {
    /// A high-degree vertex of the component.
    Ordinary(usize),
    /// A contracted two-degree path, by index into `AuxGraph::candidates`.
    PathAux(usize),
    /// A subdivided edge between two high-degree vertices.
    EdgeAux(usize, usize),
}

impl AuxVertex {
    pub fn is_auxiliary(&self) -> bool {
        !matches!(self, AuxVertex::Ordinary(_))
    }
}

/// The auxiliary graph `H_C` of a 2-vertex-connected non-cycle component.
#[derive(Debug, Clone)]
pub struct AuxGraph {
    pub h: Graph,
    pub vertices: Vec<AuxVertex>,
    pub candidates: Vec<Candidate>,
    /// `H_C` vertex of each candidate.
    node_of: Vec<usize>,
}

impl AuxGraph {
    fn build(l: &Graph, candidates: Vec<Candidate>) -> Result<Self, MrsError> {
        let n = l.n();
        let mut ordinary = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        let mut node_of = vec![usize::MAX; candidates.len()];
        for (i, cd) in candidates.iter().enumerate() {
            if cd.kind == CandidateKind::HighDeg {
                let v = cd.vertices[0];
                ordinary[v] = vertices.len();
                node_of[i] = vertices.len();
                vertices.push(AuxVertex::Ordinary(v));
            }
        }
        let mut edges = Vec::new();
        for (i, cd) in candidates.iter().enumerate() {
            if cd.kind == CandidateKind::TwoDegPath {
                let (a, b) = cd.boundaries.ok_or(MrsError::Cycle)?;
                if a == b {
                    return Err(MrsError::SharedBoundary(a));
                }
                let p = vertices.len();
                node_of[i] = p;
                vertices.push(AuxVertex::PathAux(i));
                edges.push((p, ordinary[a]));
                edges.push((p, ordinary[b]));
            }
        }
        for (u, v) in l.edges() {
            if ordinary[u] != usize::MAX && ordinary[v] != usize::MAX {
                let e = vertices.len();
                vertices.push(AuxVertex::EdgeAux(u, v));
                edges.push((e, ordinary[u]));
                edges.push((e, ordinary[v]));
            }
        }
        Ok(AuxGraph {
            h: Graph::from_pairs_unchecked(vertices.len(), &edges),
            vertices,
            candidates,
            node_of,
        })
    }

    /// `H_C` vertex standing for `candidates[i]`.
    pub fn node_of(&self, i: usize) -> usize {
        self.node_of[i]
    }

    /// Cut vertices of `H_C` once candidate `i` and the edge-auxiliary
    /// vertices hanging off it are gone.
    fn cut_vertices_without(&self, i: usize) -> Vec<usize> {
        let y = self.node_of[i];
        let mut removed = vec![false; self.h.n()];
        removed[y] = true;
        if self.candidates[i].kind == CandidateKind::HighDeg {
            for &w in self.h.neighbors(y) {
                if matches!(self.vertices[w], AuxVertex::EdgeAux(..)) {
                    removed[w] = true;
                }
            }
        }
        articulation_points_excluding(&self.h, &removed)
    }

    fn is_path_boundary(&self, i: usize) -> bool {
        self.candidates[i].kind == CandidateKind::HighDeg
            && self.h.neighbors(self.node_of[i])
                .iter()
                .any(|&w| matches!(self.vertices[w], AuxVertex::PathAux(_)))
    }

    /// `G[C] - candidates[i]` is 2-edge-connected.
    pub fn is_e_removable(&self, i: usize) -> bool {
        !self.is_path_boundary(i)
            && !self
                .cut_vertices_without(i)
                .iter()
                .any(|&u| self.vertices[u].is_auxiliary())
    }

    /// `G[C] - candidates[i]` is 2-vertex-connected.
    pub fn is_v_removable(&self, i: usize) -> bool {
        // a boundary's path neighbour would drop to degree one
        !self.is_path_boundary(i)
            && !self
                .cut_vertices_without(i)
            .iter()
            .any(|&u| !self.vertices[u].is_auxiliary())
    }

    fn relabel(&self, back: &[usize]) -> AuxGraph {
        AuxGraph {
            h: self.h.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|&a| match a {
                    AuxVertex::Ordinary(v) => AuxVertex::Ordinary(back[v]),
                    AuxVertex::EdgeAux(u, v) => AuxVertex::EdgeAux(back[u], back[v]),
                    p => p,
                })
                .collect(),
            candidates: self.candidates.iter().map(|c| c.relabel(|v| back[v])).collect(),
            node_of: self.node_of.clone(),
        }
    }
}

fn require_block(g: &Graph, c: &VertexSet) -> Result<(Graph, Vec<usize>), MrsError> {
    if !is_2vc(g, c) {
        return Err(MrsError::NotTwoVertexConnected);
    }
    let (l, back) = g.induced(c);
    if local_is_cycle(&l) {
        return Err(MrsError::Cycle);
    }
    Ok((l, back))
}

/// `H_C` for a 2-vertex-connected `G[c]` that is not a cycle, in the
/// original vertex ids.
pub fn build_aux_graph(g: &Graph, c: &VertexSet) -> Result<AuxGraph, MrsError> {
    let (l, back) = require_block(g, c)?;
    let aux = AuxGraph::build(&l, local_candidates(&l)?)?;
    Ok(aux.relabel(&back))
}

/// Candidates `Y` of a 2-vertex-connected non-cycle `G[c]` with
/// `G[c] - Y` 2-edge-connected.
pub fn block_e_mrs(g: &Graph, c: &VertexSet) -> Result<Vec<Candidate>, MrsError> {
    let (l, back) = require_block(g, c)?;
    let aux = AuxGraph::build(&l, local_candidates(&l)?)?;
    Ok((0..aux.candidates.len())
        .filter(|&i| aux.is_e_removable(i))
        .map(|i| aux.candidates[i].relabel(|v| back[v]))
        .collect())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    First,
    All,
}

struct PendingCandidate {
    key: usize,
    /// `Some((block, candidate))` when the cut test still has to run.
    test: Option<(usize, usize)>,
    candidate: Candidate,
}

struct BlockState {
    graph: Graph,
    candidates: Vec<Candidate>,
    aux: Option<AuxGraph>,
}

fn e_family(g: &Graph, c: &VertexSet, x: &VertexSet, scope: Scope) -> Result<Vec<Candidate>, MrsError> {
    if c.len() < 2 {
        return Err(MrsError::NotTwoEdgeConnected);
    }
    let (l, back) = g.induced(c);
    let dec = blocks(&l, &VertexSet::full(l.n())).map_err(|e| match e {
        GraphError::Disconnected => MrsError::NotTwoEdgeConnected,
        e => e.into(),
    })?;
    if dec.blocks.iter().any(|b| b.len() < 3) {
        return Err(MrsError::NotTwoEdgeConnected);
    }
    let mut is_art = vec![false; l.n()];
    for &a in &dec.articulation {
        is_art[a] = true;
    }

    let mut states: Vec<Option<BlockState>> = Vec::with_capacity(dec.blocks.len());
    let mut pending = Vec::new();
    for (bi, members) in dec.blocks.iter().enumerate() {
        let bg = dec.block_graph(bi);
        let to_global = |j: usize| back[members[j]];
        if local_is_cycle(&bg) {
            states.push(None);
            let arts: Vec<usize> = (0..bg.n()).filter(|&j| is_art[members[j]]).collect();
            if arts.len() != 1 {
                continue;
            }
            let a = arts[0];
            let (mut prev, mut cur) = (a, bg.neighbors(a)[0]);
            let mut path = Vec::new();
            while cur != a {
                path.push(to_global(cur));
                let next = other_neighbor(&bg, cur, prev);
                prev = cur;
                cur = next;
            }
            if x.is_disjoint(&path) {
                let ga = to_global(a);
                let candidate = Candidate {
                    kind: CandidateKind::TwoDegPath,
                    vertices: path,
                    boundaries: Some((ga, ga)),
                };
                pending.push(PendingCandidate {
                    key: candidate.min_vertex(),
                    test: None,
                    candidate,
                });
            }
            continue;
        }
        let cands = local_candidates(&bg)?;
        for (ci, cd) in cands.iter().enumerate() {
            if cd.vertices.iter().any(|&j| is_art[members[j]]) {
                continue;
            }
            let candidate = cd.relabel(to_global);
            if x.is_disjoint(&candidate.vertices) {
                pending.push(PendingCandidate {
                    key: candidate.min_vertex(),
                    test: Some((bi, ci)),
                    candidate,
                });
            }
        }
        states.push(Some(BlockState {
            graph: bg,
            candidates: cands,
            aux: None,
        }));
    }

    pending.sort_by_key(|p| p.key);
    let mut out = Vec::new();
    for p in pending {
        let ok = match p.test {
            None => true,
            Some((bi, ci)) => {
                let st = states[bi].as_mut().expect("non-cycle block");
                if st.aux.is_none() {
                    st.aux = Some(AuxGraph::build(&st.graph, st.candidates.clone())?);
                }
                st.aux.as_ref().expect("built").is_e_removable(ci)
            }
        };
        if ok {
            out.push(p.candidate);
            if scope == Scope::First {
                break;
            }
        }
    }
    Ok(out)
}

fn v_family(g: &Graph, c: &VertexSet, x: &VertexSet, scope: Scope) -> Result<Vec<Candidate>, MrsError> {
    if !is_2vc(g, c) {
        return Err(MrsError::NotTwoVertexConnected);
    }
    let (l, back) = g.induced(c);
    if local_is_cycle(&l) {
        return Ok(Vec::new());
    }
    let aux = AuxGraph::build(&l, local_candidates(&l)?)?;
    let mut out = Vec::new();
    for (i, cd) in aux.candidates.iter().enumerate() {
        let candidate = cd.relabel(|v| back[v]);
        if !x.is_disjoint(&candidate.vertices) || !aux.is_v_removable(i) {
            continue;
        }
        out.push(candidate);
        if scope == Scope::First {
            break;
        }
    }
    Ok(out)
}

/// Every e-MRS of the e-component `c` disjoint from `x`, ordered by
/// smallest vertex.
pub fn e_mrs_all(g: &Graph, c: &VertexSet, x: &VertexSet) -> Result<Vec<Candidate>, MrsError> {
    e_family(g, c, x, Scope::All)
}

/// Every v-MRS of the v-component `c` disjoint from `x`, ordered by
/// smallest vertex.
pub fn v_mrs_all(g: &Graph, c: &VertexSet, x: &VertexSet) -> Result<Vec<Candidate>, MrsError> {
    v_family(g, c, x, Scope::All)
}

/// The e-MRS of `c` disjoint from `x` with the smallest minimum vertex.
pub fn compute_mrs_e(g: &Graph, c: &VertexSet, x: &VertexSet) -> Result<Option<Candidate>, MrsError> {
    Ok(e_family(g, c, x, Scope::First)?.pop())
}

/// The v-MRS of `c` disjoint from `x` with the smallest minimum vertex.
pub fn compute_mrs_v(g: &Graph, c: &VertexSet, x: &VertexSet) -> Result<Option<Candidate>, MrsError> {
    Ok(v_family(g, c, x, Scope::First)?.pop())
}

/// Oracle for the system of 2-edge-connected vertex sets.
#[derive(Debug, Clone, Copy)]
pub struct EdgeOracle<'g> {
    pub graph: &'g Graph,
}

/// Oracle for the system of 2-vertex-connected vertex sets.
#[derive(Debug, Clone, Copy)]
pub struct VertexOracle<'g> {
    pub graph: &'g Graph,
}

impl MrsOracle for EdgeOracle<'_> {
    fn compute_mrs(&mut self, component: &VertexSet, forbidden: &VertexSet) -> Result<Option<Vec<usize>>, MrsError> {
        Ok(compute_mrs_e(self.graph, component, forbidden)?.map(|c| c.sorted_vertices()))
    }

    fn is_component(&self, set: &VertexSet) -> bool {
        crate::connectivity::is_2ec(self.graph, set)
    }
}

impl MrsOracle for VertexOracle<'_> {
    fn compute_mrs(&mut self, component: &VertexSet, forbidden: &VertexSet) -> Result<Option<Vec<usize>>, MrsError> {
        Ok(compute_mrs_v(self.graph, component, forbidden)?.map(|c| c.sorted_vertices()))
    }

    fn is_component(&self, set: &VertexSet) -> bool {
        is_2vc(self.graph, set)
    }
}
