//! Exhaustive reference implementations over vertex subsets, used only for
//! verification. Connectivity here is decided from the definitions
//! (delete every edge or vertex and test reachability) on bitmasks, with no
//! shared code with the lowlink routines.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::engine::MrsOracle;
use crate::graph::{Graph, VertexSet};
use crate::mrs::MrsError;
use crate::Mode;

/// Largest graph accepted by [`brute_components`].
pub const MAX_COMPONENTS_N: usize = 22;
/// Largest component accepted by [`brute_mrs`].
pub const MAX_MRS_SIZE: usize = 16;
/// Largest graph accepted by [`check_sd_property`] and [`ComponentTable`].
pub const MAX_SD_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteError {
    #[error("{what} has {size} vertices, over the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("vertex set {0:?} is not a component")]
    NotComponent(Vec<usize>),
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<(), BruteError> {
    if size > limit {
        Err(BruteError::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

/// Reachability inside `s`, ignoring the edge `cut` if given.
fn connected(adj: &[u32], s: u32, cut: Option<(usize, usize)>) -> bool {
    if s == 0 {
        return false;
    }
    let mut seen = s & s.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            let mut nb = adj[v];
            if let Some((a, b)) = cut {
                if v == a {
                    nb &= !(1 << b);
                } else if v == b {
                    nb &= !(1 << a);
                }
            }
            next |= nb;
        }
        frontier = next & s & !seen;
        seen |= frontier;
    }
    seen == s
}

fn is_2ec_mask(adj: &[u32], s: u32) -> bool {
    s.count_ones() >= 2
        && connected(adj, s, None)
        && bits(s).all(|u| bits(adj[u] & s).filter(|&v| v > u).all(|v| connected(adj, s, Some((u, v)))))
}

fn is_2vc_mask(adj: &[u32], s: u32) -> bool {
    s.count_ones() >= 3 && connected(adj, s, None) && bits(s).all(|v| connected(adj, s & !(1 << v), None))
}

fn is_component_mask(adj: &[u32], s: u32, mode: Mode) -> bool {
    match mode {
        Mode::Edge => is_2ec_mask(adj, s),
        Mode::Vertex => is_2vc_mask(adj, s),
    }
}

fn to_vec(mask: u32) -> Vec<usize> {
    bits(mask).collect()
}

/// Minimal removable subsets of `full`, given a removability test on
/// subsets `t` of `0..k` (bit `i` of `t` stands for the `i`-th member).
fn minimal_removable(k: usize, removable: impl Fn(u32) -> bool) -> Vec<u32> {
    let size = 1usize << k;
    let mut rem = vec![false; size];
    let mut below = vec![false; size];
    let mut out = Vec::new();
    for t in 1..size {
        rem[t] = removable(t as u32);
        below[t] = bits(t as u32).any(|i| {
            let s = t & !(1 << i);
            s != 0 && (rem[s] || below[s])
        });
        if rem[t] && !below[t] {
            out.push(t as u32);
        }
    }
    out
}

/// Every vertex set of `g` inducing a 2-edge-connected (at least two
/// vertices) or 2-vertex-connected (at least three) subgraph.
pub fn brute_components(g: &Graph, mode: Mode) -> Result<BTreeSet<Vec<usize>>, BruteError> {
    guard("graph", g.n(), MAX_COMPONENTS_N)?;
    let adj = adjacency_masks(g);
    Ok((1u32..1 << g.n())
        .filter(|&s| is_component_mask(&adj, s, mode))
        .map(to_vec)
        .collect())
}

/// Every minimal removable set of the component `c`, from the definition.
pub fn brute_mrs(g: &Graph, c: &VertexSet, mode: Mode) -> Result<BTreeSet<Vec<usize>>, BruteError> {
    guard("component", c.len(), MAX_MRS_SIZE)?;
    let (l, back) = g.induced(c);
    let adj = adjacency_masks(&l);
    let k = l.n();
    let full = if k == 0 { 0 } else { u32::MAX >> (32 - k) };
    if !is_component_mask(&adj, full, mode) {
        return Err(BruteError::NotComponent(back));
    }
    Ok(minimal_removable(k, |t| is_component_mask(&adj, full & !t, mode))
        .into_iter()
        .map(|t| bits(t).map(|i| back[i]).collect())
        .collect())
}

/// Membership table over all `2^n` subsets.
pub struct ComponentTable {
    n: usize,
    mode: Mode,
    member: Vec<bool>,
}

impl ComponentTable {
    pub fn new(g: &Graph, mode: Mode) -> Result<Self, BruteError> {
        guard("graph", g.n(), MAX_SD_N)?;
        let adj = adjacency_masks(g);
        let member = (0u32..1 << g.n()).map(|s| is_component_mask(&adj, s, mode)).collect();
        Ok(ComponentTable { n: g.n(), mode, member })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.member[mask as usize]
    }

    pub fn components(&self) -> impl Iterator<Item = u32> + '_ {
        (0u32..1 << self.n).filter(|&s| self.contains(s))
    }

    /// MRSs of the component `c`, as masks.
    pub fn mrs(&self, c: u32) -> Vec<u32> {
        let members = to_vec(c);
        let expand = |t: u32| bits(t).fold(0u32, |m, i| m | 1 << members[i]);
        minimal_removable(members.len(), |t| self.contains(c & !expand(t)))
            .into_iter()
            .map(expand)
            .collect()
    }
}

/// Whether every MRS of every component `C` is inside or disjoint from each
/// component strictly inside `C`.
pub fn check_sd_property(g: &Graph, mode: Mode) -> Result<bool, BruteError> {
    let table = ComponentTable::new(g, mode)?;
    for c in table.components() {
        let mrs = table.mrs(c);
        if mrs.is_empty() {
            continue;
        }
        // proper submasks of c
        let mut sub = (c - 1) & c;
        while sub != 0 {
            if table.contains(sub) && mrs.iter().any(|&y| y & sub != y && y & sub != 0) {
                return Ok(false);
            }
            sub = (sub - 1) & c;
        }
    }
    Ok(true)
}

fn mask_of(set: &VertexSet) -> u32 {
    set.iter().fold(0u32, |m, v| m | 1 << v)
}

/// Oracle answering from a [`ComponentTable`] with the same tie-break as the
/// linear-time oracles: the MRS with the smallest minimum vertex.
pub struct BruteOracle {
    table: ComponentTable,
}

impl BruteOracle {
    pub fn new(g: &Graph, mode: Mode) -> Result<Self, BruteError> {
        Ok(BruteOracle {
            table: ComponentTable::new(g, mode)?,
        })
    }
}

impl MrsOracle for BruteOracle {
    fn compute_mrs(&mut self, component: &VertexSet, forbidden: &VertexSet) -> Result<Option<Vec<usize>>, MrsError> {
        let x = mask_of(forbidden);
        Ok(self
            .table
            .mrs(mask_of(component))
            .into_iter()
            .filter(|&y| y & x == 0)
            .min_by_key(|&y| y.trailing_zeros())
            .map(to_vec))
    }

    fn is_component(&self, set: &VertexSet) -> bool {
        self.table.contains(mask_of(set))
    }
}
