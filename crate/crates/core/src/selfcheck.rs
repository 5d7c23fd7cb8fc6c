//! End-to-end cross-validation of the engine and oracles against the
//! exhaustive references in [`crate::bruteforce`]. Shared by the CLI's
//! `verify` command and the acceptance tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bruteforce::{check_sd_property, ComponentTable, MAX_SD_N};
use crate::engine::{enumerate_recursive, reconstruct, roots, DiffRecord, EngineStats, MrsOracle, StreamEnumerator};
use crate::graph::{random_graph, Graph, VertexSet};
use crate::mrs::{e_mrs_all, v_mrs_all, EdgeOracle, MrsError, VertexOracle};
use crate::Mode;

/// Loop iterations allowed between consecutive outputs.
pub const MAX_ITERATIONS_BETWEEN: usize = 4;
/// Oracle calls allowed between consecutive outputs.
pub const MAX_ORACLE_CALLS_BETWEEN: usize = 4;
/// Ops allowed in a single diff record.
pub const MAX_OPS_PER_RECORD: usize = 3;
/// Largest graph [`check_graph`] accepts.
pub const MAX_CHECK_N: usize = MAX_SD_N;
/// Largest `n` enumerated exhaustively by [`connected_graphs`].
pub const MAX_EXHAUSTIVE_N: usize = 6;
/// Edge probabilities cycled through by [`random_corpus`].
pub const CORPUS_PROBABILITIES: [f64; 3] = [0.3, 0.5, 0.8];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Completeness,
    NoDuplicates,
    EngineAgreement,
    OracleEquality,
    SdProperty,
    Delay,
    Space,
    Engine,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Completeness => "completeness",
            Property::NoDuplicates => "no-duplicates",
            Property::EngineAgreement => "stream/recursive agreement",
            Property::OracleEquality => "MRS oracle equality",
            Property::SdProperty => "SD property",
            Property::Delay => "structural delay",
            Property::Space => "space bound",
            Property::Engine => "engine error",
        })
    }
}

/// A failed property, with the graph that exhibits it.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub property: Property,
    pub mode: Mode,
    pub detail: String,
    pub graph: Graph,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} failed (mode {}): {}", self.property, self.mode, self.detail)?;
        write!(f, "witness graph:\n{}", self.graph)
    }
}

#[derive(Debug, Clone, Error)]
pub enum CheckError {
    #[error("graph has {0} vertices; self-check supports at most {MAX_CHECK_N}")]
    TooLarge(usize),
    #[error("{0}")]
    Mismatch(Box<Mismatch>),
}

/// Which of the more expensive checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub oracle_equality: bool,
    pub sd_property: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            oracle_equality: true,
            sd_property: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub components: usize,
    /// Distinct `(component, forbidden)` oracle queries compared.
    pub oracle_queries: usize,
    pub stats: EngineStats,
}

type Query = (Vec<usize>, Vec<usize>, Option<Vec<usize>>);

/// Logs every query answered by the wrapped oracle.
struct Recording<O> {
    inner: O,
    log: Vec<Query>,
}

impl<O: MrsOracle> MrsOracle for Recording<O> {
    fn compute_mrs(&mut self, component: &VertexSet, forbidden: &VertexSet) -> Result<Option<Vec<usize>>, MrsError> {
        let answer = self.inner.compute_mrs(component, forbidden)?;
        self.log
            .push((component.to_sorted_vec(), forbidden.to_sorted_vec(), answer.clone()));
        Ok(answer)
    }

    fn is_component(&self, set: &VertexSet) -> bool {
        self.inner.is_component(set)
    }
}

struct Checker<'g> {
    g: &'g Graph,
    mode: Mode,
}

impl Checker<'_> {
    fn fail(&self, property: Property, detail: impl Into<String>) -> CheckError {
        CheckError::Mismatch(Box::new(Mismatch {
            property,
            mode: self.mode,
            detail: detail.into(),
            graph: self.g.clone(),
        }))
    }

    fn stream_root<O: MrsOracle>(
        &self,
        root: &VertexSet,
        oracle: O,
        records: &mut Vec<DiffRecord>,
    ) -> Result<(EngineStats, Vec<Query>), CheckError> {
        let mut en = StreamEnumerator::new(root, Recording { inner: oracle, log: Vec::new() });
        let start = records.len();
        let n = self.g.n();
        loop {
            let rec = en.next_record().map_err(|e| self.fail(Property::Engine, e.to_string()))?;
            let st = en.state();
            if st.forced.len() > n || st.seq_vertices() > n || st.depth > n || st.idx.len() > n {
                return Err(self.fail(Property::Space, format!("state exceeds n = {n}")));
            }
            match rec {
                Some(r) => records.push(r),
                None => break,
            }
        }
        let root_vec = root.to_sorted_vec();
        for (i, r) in records[start..].iter().enumerate() {
            let ok = if i == 0 {
                r.full.as_ref() == Some(&root_vec) && r.ops.is_empty()
            } else {
                r.full.is_none() && !r.ops.is_empty() && r.ops.len() <= MAX_OPS_PER_RECORD
            };
            if !ok {
                return Err(self.fail(Property::Delay, format!("record {i} of root {root_vec:?} is `{r}`")));
            }
        }
        let stats = en.stats().clone();
        if stats.max_iterations_between > MAX_ITERATIONS_BETWEEN
            || stats.max_oracle_calls_between > MAX_ORACLE_CALLS_BETWEEN
            || stats.max_ops > MAX_OPS_PER_RECORD
        {
            return Err(self.fail(Property::Delay, format!("{stats:?}")));
        }
        if stats.peak_forced > n || stats.peak_seq > n || stats.peak_depth > n || stats.peak_idx > n {
            return Err(self.fail(Property::Space, format!("{stats:?}")));
        }
        let log = en.oracle().log.clone();
        Ok((stats, log))
    }

    fn recursive_root<O: MrsOracle>(&self, root: &VertexSet, mut oracle: O, out: &mut Vec<Vec<usize>>) -> Result<(), CheckError> {
        let forced = VertexSet::new(self.g.n());
        enumerate_recursive(root, &forced, &mut oracle, &mut |c: &[usize]| out.push(c.to_vec()))
            .map_err(|e| self.fail(Property::Engine, format!("recursive: {e}")))
    }

    fn mrs_family(&self, c: &VertexSet, x: &VertexSet) -> Result<BTreeSet<Vec<usize>>, CheckError> {
        let family = match self.mode {
            Mode::Edge => e_mrs_all(self.g, c, x),
            Mode::Vertex => v_mrs_all(self.g, c, x),
        }
        .map_err(|e| self.fail(Property::OracleEquality, e.to_string()))?;
        Ok(family.iter().map(|cand| cand.sorted_vertices()).collect())
    }
}

fn mask(vs: &[usize]) -> u32 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

fn unmask(m: u32) -> Vec<usize> {
    (0..32).filter(|&i| m >> i & 1 == 1).collect()
}

/// Runs the whole property suite on one graph with at most
/// [`MAX_CHECK_N`] vertices.
pub fn check_graph(g: &Graph, mode: Mode, opts: CheckOptions) -> Result<CheckReport, CheckError> {
    let n = g.n();
    if n > MAX_CHECK_N {
        return Err(CheckError::TooLarge(n));
    }
    let ck = Checker { g, mode };
    let table = ComponentTable::new(g, mode).map_err(|e| ck.fail(Property::Completeness, e.to_string()))?;

    let mut records = Vec::new();
    let mut queries = Vec::new();
    let mut recursive = Vec::new();
    let mut report = CheckReport::default();
    for root in roots(g, mode) {
        let root = VertexSet::from_slice(n, &root).expect("root ids are in range");
        let (stats, log) = match mode {
            Mode::Edge => ck.stream_root(&root, EdgeOracle { graph: g }, &mut records)?,
            Mode::Vertex => ck.stream_root(&root, VertexOracle { graph: g }, &mut records)?,
        };
        report.stats.merge(&stats);
        queries.extend(log);
        match mode {
            Mode::Edge => ck.recursive_root(&root, EdgeOracle { graph: g }, &mut recursive)?,
            Mode::Vertex => ck.recursive_root(&root, VertexOracle { graph: g }, &mut recursive)?,
        }
    }

    let streamed = reconstruct(&records).map_err(|e| ck.fail(Property::Engine, e.to_string()))?;
    let streamed_set: BTreeSet<Vec<usize>> = streamed.iter().cloned().collect();
    if streamed_set.len() != streamed.len() {
        return Err(ck.fail(Property::NoDuplicates, "streaming output repeats a component"));
    }
    let expected: BTreeSet<Vec<usize>> = table.components().map(unmask).collect();
    if streamed_set != expected {
        let missing: Vec<_> = expected.difference(&streamed_set).take(3).collect();
        let extra: Vec<_> = streamed_set.difference(&expected).take(3).collect();
        return Err(ck.fail(Property::Completeness, format!("missing {missing:?}, unexpected {extra:?}")));
    }
    let recursive_set: BTreeSet<Vec<usize>> = recursive.iter().cloned().collect();
    if recursive_set.len() != recursive.len() || recursive_set != streamed_set {
        return Err(ck.fail(
            Property::EngineAgreement,
            format!("recursive gave {} ({} distinct), stream gave {}", recursive.len(), recursive_set.len(), streamed.len()),
        ));
    }
    report.components = streamed.len();

    if opts.oracle_equality {
        let mut brute: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        let distinct: BTreeSet<Query> = queries.into_iter().collect();
        for (c, x, answer) in &distinct {
            let cm = mask(c);
            let family = brute.entry(cm).or_insert_with(|| table.mrs(cm));
            let xm = mask(x);
            let allowed: BTreeSet<Vec<usize>> = family.iter().filter(|&&y| y & xm == 0).map(|&y| unmask(y)).collect();
            let cs = VertexSet::from_slice(n, c).expect("in range");
            let xs = VertexSet::from_slice(n, x).expect("in range");
            let ours = ck.mrs_family(&cs, &xs)?;
            if ours != allowed {
                return Err(ck.fail(
                    Property::OracleEquality,
                    format!("component {c:?}, forbidden {x:?}: oracle family {ours:?}, brute force {allowed:?}"),
                ));
            }
            let best = allowed.iter().min_by_key(|y| y[0]).cloned();
            let got = answer.as_ref().map(|y| {
                let mut y = y.clone();
                y.sort_unstable();
                y
            });
            if got != best {
                return Err(ck.fail(
                    Property::OracleEquality,
                    format!("component {c:?}, forbidden {x:?}: oracle answered {got:?}, expected {best:?}"),
                ));
            }
        }
        report.oracle_queries = distinct.len();
    }

    if opts.sd_property && !check_sd_property(g, mode).map_err(|e| ck.fail(Property::SdProperty, e.to_string()))? {
        return Err(ck.fail(Property::SdProperty, "an MRS straddles a smaller component"));
    }
    Ok(report)
}

/// Every connected labeled graph on `n` vertices, for `n` up to
/// [`MAX_EXHAUSTIVE_N`].
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= MAX_EXHAUSTIVE_N, "exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE_N}");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|m| {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|&(i, _)| m >> i & 1 == 1).map(|(_, &e)| e).collect();
            Graph::from_edges(n, &edges).expect("pairs are valid")
        })
        .filter(|g| n == 0 || crate::graph::is_connected(g, &VertexSet::full(n)).unwrap_or(false))
        .collect()
}

/// `trials` seeded random graphs with `n` uniform in `n_min..=n_max` and `p`
/// cycling through [`CORPUS_PROBABILITIES`].
pub fn random_corpus(trials: usize, n_min: usize, n_max: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|i| {
            let n = rng.gen_range(n_min..=n_max);
            let p = CORPUS_PROBABILITIES[i % CORPUS_PROBABILITIES.len()];
            random_graph(n, p, rng.gen()).expect("probability in range")
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub graphs: usize,
    pub components: usize,
    pub oracle_queries: usize,
    pub stats: EngineStats,
}

/// Checks every connected graph up to `min(n_max, 5)` vertices exhaustively,
/// then `trials` random graphs with `n` in `6..=n_max` (or `1..=n_max` when
/// `n_max < 6`), in both modes.
pub fn verify(n_max: usize, trials: usize, seed: u64) -> Result<VerifyReport, CheckError> {
    if n_max > MAX_CHECK_N {
        return Err(CheckError::TooLarge(n_max));
    }
    let mut graphs: Vec<Graph> = (1..=n_max.min(5)).flat_map(connected_graphs).collect();
    if trials > 0 && n_max > 0 {
        let n_min = if n_max >= 6 { 6 } else { 1 };
        graphs.extend(random_corpus(trials, n_min, n_max, seed));
    }
    let mut report = VerifyReport::default();
    for g in &graphs {
        for mode in [Mode::Edge, Mode::Vertex] {
            let r = check_graph(g, mode, CheckOptions::default())?;
            report.components += r.components;
            report.oracle_queries += r.oracle_queries;
            report.stats.merge(&r.stats);
        }
        report.graphs += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn connected_graph_counts() {
        // number of connected labeled graphs on n vertices
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 38, 728]);
    }

    #[test]
    fn named_graphs_pass() {
        for g in [c4(), complete(4), diamond(), bowtie(), complete(5), dumbbell()] {
            for mode in [Mode::Edge, Mode::Vertex] {
                check_graph(&g, mode, CheckOptions::default()).unwrap();
            }
        }
    }

    #[test]
    fn guard_rejects_large_graphs() {
        assert!(matches!(
            check_graph(&Graph::empty(13), Mode::Edge, CheckOptions::default()),
            Err(CheckError::TooLarge(13))
        ));
        assert!(matches!(verify(13, 0, 0), Err(CheckError::TooLarge(13))));
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let a = random_corpus(10, 6, 12, 3);
        let b = random_corpus(10, 6, 12, 3);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| (6..=12).contains(&g.n())));
    }

    #[test]
    fn mismatch_reports_witness() {
        let m = Mismatch {
            property: Property::Completeness,
            mode: Mode::Edge,
            detail: "x".into(),
            graph: diamond(),
        };
        let text = m.to_string();
        assert!(text.contains("completeness failed (mode e)"));
        assert!(text.contains("4 5\n0 1\n"));
    }

    #[test]
    fn small_verify_passes() {
        let r = verify(5, 20, 1).unwrap();
        assert_eq!(r.graphs, 1 + 1 + 4 + 38 + 728 + 20);
    }
}
