//! Binary-partition enumeration of the components below a root component
//! of a set system in which every minimal removable set (MRS) of a
//! component is either contained in or disjoint from each smaller
//! component.
//!
//! Given an MRS `Y` of `C` avoiding the forced set `X`, the components
//! between `X` and `C` split into those avoiding `Y` (below `C - Y`) and
//! those containing `Y` (below `C`, with `Y` forced). [`enumerate_recursive`]
//! follows this directly. [`StreamEnumerator`] runs the same search with
//! explicit stacks and emits nodes at odd depth on the way down and nodes at
//! even depth on the way up, so consecutive outputs are a bounded number of
//! search steps apart; each output is a diff against the previous one.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use thiserror::Error;

use crate::connectivity::{all_blocks, maximal_e_components};
use crate::graph::{Graph, VertexSet};
use crate::mrs::{EdgeOracle, MrsError, VertexOracle};
use crate::Mode;

/// Source of minimal removable sets for one set system.
pub trait MrsOracle {
    /// One MRS of `component` disjoint from `forbidden`, as ascending ids,
    /// or `None` if there is none. Must be deterministic.
    fn compute_mrs(&mut self, component: &VertexSet, forbidden: &VertexSet) -> Result<Option<Vec<usize>>, MrsError>;

    /// Membership test for the set system.
    fn is_component(&self, set: &VertexSet) -> bool;
}

impl<O: MrsOracle + ?Sized> MrsOracle for &mut O {
    fn compute_mrs(&mut self, component: &VertexSet, forbidden: &VertexSet) -> Result<Option<Vec<usize>>, MrsError> {
        (**self).compute_mrs(component, forbidden)
    }

    fn is_component(&self, set: &VertexSet) -> bool {
        (**self).is_component(set)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("oracle returned an empty set")]
    EmptyMrs,
    #[error("oracle returned {set:?}, which meets the forbidden set")]
    MrsMeetsForbidden { set: Vec<usize> },
    #[error("oracle returned {set:?}, which is not inside the component")]
    MrsOutsideComponent { set: Vec<usize> },
    #[error("oracle returned {set:?}, whose removal does not leave a component")]
    MrsNotRemovable { set: Vec<usize> },
    #[error("malformed diff stream at record {record}: {reason}")]
    MalformedStream { record: usize, reason: String },
    #[error(transparent)]
    Oracle(#[from] MrsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffOp {
    Add(Vec<usize>),
    Remove(Vec<usize>),
}

/// One output of the streaming enumerator.
///
/// A record with `full` starts a new root and carries its complete vertex
/// set; every other record lists signed changes to the previous component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffRecord {
    pub full: Option<Vec<usize>>,
    pub ops: Vec<DiffOp>,
}

fn write_ids(f: &mut fmt::Formatter<'_>, ids: &[usize]) -> fmt::Result {
    for (i, v) in ids.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for DiffRecord {
    /// `= 0 1 2` for a root, `+0 -1,2` for changes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(full) = &self.full {
            f.write_str("=")?;
            for v in full {
                write!(f, " {v}")?;
            }
            return Ok(());
        }
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match op {
                DiffOp::Add(ids) => {
                    f.write_str("+")?;
                    write_ids(f, ids)?;
                }
                DiffOp::Remove(ids) => {
                    f.write_str("-")?;
                    write_ids(f, ids)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for DiffRecord {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('=') {
            let full = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| format!("bad id {t:?}")))
                .collect::<Result<Vec<usize>, _>>()?;
            if full.is_empty() {
                return Err("root line without vertices".into());
            }
            return Ok(DiffRecord { full: Some(full), ops: Vec::new() });
        }
        let ops = line
            .split_whitespace()
            .map(|tok| {
                let (sign, ids) = tok.split_at(1);
                let ids = ids
                    .split(',')
                    .map(|t| t.parse().map_err(|_| format!("bad id {t:?} in {tok:?}")))
                    .collect::<Result<Vec<usize>, _>>()?;
                match sign {
                    "+" => Ok(DiffOp::Add(ids)),
                    "-" => Ok(DiffOp::Remove(ids)),
                    _ => Err(format!("bad op {tok:?}")),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ops.is_empty() {
            return Err("empty record".into());
        }
        Ok(DiffRecord { full: None, ops })
    }
}

/// Incremental decoder for a diff stream.
#[derive(Debug, Clone, Default)]
pub struct Replayer {
    current: Option<BTreeSet<usize>>,
    records: usize,
}

impl Replayer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Applies one record and returns the component it denotes.
    pub fn apply(&mut self, r: &DiffRecord) -> Result<&BTreeSet<usize>, EngineError> {
        let record = self.records;
        self.records += 1;
        let bad = |reason: String| EngineError::MalformedStream { record, reason };
        if let Some(full) = &r.full {
            self.current = Some(full.iter().copied().collect());
        } else {
            let cur = self
                .current
                .as_mut()
                .ok_or_else(|| bad("first record must carry the full root".into()))?;
            for op in &r.ops {
                match op {
                    DiffOp::Add(ids) => {
                        for &v in ids {
                            if !cur.insert(v) {
                                return Err(bad(format!("+{v}: already present")));
                            }
                        }
                    }
                    DiffOp::Remove(ids) => {
                        for &v in ids {
                            if !cur.remove(&v) {
                                return Err(bad(format!("-{v}: not present")));
                            }
                        }
                    }
                }
            }
        }
        Ok(self.current.as_ref().expect("set above"))
    }
}

/// Replays a diff stream into the full component sequence (each ascending).
pub fn reconstruct(stream: &[DiffRecord]) -> Result<Vec<Vec<usize>>, EngineError> {
    let mut replay = Replayer::new();
    stream
        .iter()
        .map(|r| replay.apply(r).map(|c| c.iter().copied().collect()))
        .collect()
}

fn validate(y: &[usize], component: &VertexSet, forbidden: &VertexSet) -> Result<(), EngineError> {
    if y.is_empty() {
        return Err(EngineError::EmptyMrs);
    }
    if !y.iter().all(|&v| component.contains(v)) {
        return Err(EngineError::MrsOutsideComponent { set: y.to_vec() });
    }
    if !forbidden.is_disjoint(y) {
        return Err(EngineError::MrsMeetsForbidden { set: y.to_vec() });
    }
    Ok(())
}

/// Reference enumerator: emits every component between `forced` and
/// `component` exactly once, as full ascending vertex lists.
///
/// Recursion depth equals the length of the longest MRS chain, so this is
/// meant for small instances; it also checks that each oracle answer is
/// actually removable.
pub fn enumerate_recursive<O, F>(
    component: &VertexSet,
    forced: &VertexSet,
    oracle: &mut O,
    sink: &mut F,
) -> Result<(), EngineError>
where
    O: MrsOracle + ?Sized,
    F: FnMut(&[usize]),
{
    sink(&component.to_sorted_vec());
    let mut x = forced.clone();
    let mut child = component.clone();
    while let Some(y) = oracle.compute_mrs(component, &x)? {
        validate(&y, component, &x)?;
        for &v in &y {
            child.remove(v);
        }
        if !oracle.is_component(&child) {
            return Err(EngineError::MrsNotRemovable { set: y });
        }
        enumerate_recursive(&child, &x, oracle, sink)?;
        for &v in &y {
            child.insert(v);
            x.insert(v);
        }
    }
    Ok(())
}

/// Instrumentation gathered while streaming.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Records emitted, including root records.
    pub records: usize,
    pub iterations: usize,
    pub oracle_calls: usize,
    /// Most loop iterations touching any gap between consecutive outputs
    /// (start and end of the run count as outputs).
    pub max_iterations_between: usize,
    /// Most oracle calls in any such gap.
    pub max_oracle_calls_between: usize,
    /// Most ops in one non-root record.
    pub max_ops: usize,
    /// Peak number of vertices on the forced-set stack.
    pub peak_forced: usize,
    /// Peak total vertices across the MRS-sequence stack.
    pub peak_seq: usize,
    pub peak_depth: usize,
    pub peak_idx: usize,
}

impl EngineStats {
    pub fn merge(&mut self, other: &EngineStats) {
        self.records += other.records;
        self.iterations += other.iterations;
        self.oracle_calls += other.oracle_calls;
        self.max_iterations_between = self.max_iterations_between.max(other.max_iterations_between);
        self.max_oracle_calls_between = self.max_oracle_calls_between.max(other.max_oracle_calls_between);
        self.max_ops = self.max_ops.max(other.max_ops);
        self.peak_forced = self.peak_forced.max(other.peak_forced);
        self.peak_seq = self.peak_seq.max(other.peak_seq);
        self.peak_depth = self.peak_depth.max(other.peak_depth);
        self.peak_idx = self.peak_idx.max(other.peak_idx);
    }
}

/// Search state of the streaming enumerator.
#[derive(Debug, Clone)]
pub struct EngineState {
    /// Component at the current search node.
    pub current: VertexSet,
    /// MRSs removed on the way from the root, bottom first.
    pub seq: Vec<Vec<usize>>,
    seq_total: usize,
    /// Forced set, pushed in order; truncated when returning from a child.
    pub forced: VertexSet,
    /// Length of `forced` at each descent.
    pub idx: Vec<usize>,
    pub depth: usize,
    /// Ops accumulated since the last output.
    pub pending: Vec<DiffOp>,
    /// The last move was a descent (or the run just started).
    pub advancing: bool,
}

impl EngineState {
    pub fn seq_vertices(&self) -> usize {
        self.seq_total
    }
}

/// Outcome of one loop iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Emitted(DiffRecord),
    Continue,
    Done,
}

/// Iterative enumerator over the components below one root.
pub struct StreamEnumerator<O> {
    oracle: O,
    root: Vec<usize>,
    state: EngineState,
    stats: EngineStats,
    first: bool,
    gap_iterations: usize,
    gap_oracle_calls: usize,
}

impl<O: MrsOracle> StreamEnumerator<O> {
    /// `root` must be a component of the oracle's system.
    pub fn new(root: &VertexSet, oracle: O) -> Self {
        let n = root.universe();
        StreamEnumerator {
            oracle,
            root: root.to_sorted_vec(),
            state: EngineState {
                current: root.clone(),
                seq: Vec::new(),
                seq_total: 0,
                forced: VertexSet::new(n),
                idx: Vec::new(),
                depth: 1,
                pending: Vec::new(),
                advancing: true,
            },
            stats: EngineStats::default(),
            first: true,
            gap_iterations: 0,
            gap_oracle_calls: 0,
        }
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    fn flush(&mut self) -> DiffRecord {
        let record = if self.first {
            self.first = false;
            DiffRecord {
                full: Some(self.root.clone()),
                ops: Vec::new(),
            }
        } else {
            let ops = std::mem::take(&mut self.state.pending);
            self.stats.max_ops = self.stats.max_ops.max(ops.len());
            DiffRecord { full: None, ops }
        };
        self.stats.records += 1;
        self.close_gap();
        // the rest of this iteration belongs to the next gap
        self.gap_iterations = 1;
        record
    }

    fn close_gap(&mut self) {
        self.stats.max_iterations_between = self.stats.max_iterations_between.max(self.gap_iterations);
        self.stats.max_oracle_calls_between = self.stats.max_oracle_calls_between.max(self.gap_oracle_calls);
        self.gap_iterations = 0;
        self.gap_oracle_calls = 0;
    }

    /// Runs one loop iteration.
    pub fn step(&mut self) -> Result<Step, EngineError> {
        if self.state.depth == 0 {
            return Ok(Step::Done);
        }
        self.stats.iterations += 1;
        self.gap_iterations += 1;
        let mut emitted = None;
        if self.state.depth % 2 == 1 && self.state.advancing {
            emitted = Some(self.flush());
        }

        self.stats.oracle_calls += 1;
        self.gap_oracle_calls += 1;
        let st = &mut self.state;
        match self.oracle.compute_mrs(&st.current, &st.forced)? {
            Some(y) => {
                validate(&y, &st.current, &st.forced)?;
                for &v in &y {
                    st.current.remove(v);
                }
                st.idx.push(st.forced.len());
                st.seq_total += y.len();
                st.pending.push(DiffOp::Remove(y.clone()));
                st.seq.push(y);
                st.depth += 1;
                st.advancing = true;
            }
            None => {
                if st.depth.is_multiple_of(2) {
                    emitted = Some(self.flush());
                }
                let st = &mut self.state;
                match st.seq.pop() {
                    None => st.depth = 0,
                    Some(y) => {
                        for &v in &y {
                            st.current.insert(v);
                        }
                        st.forced.truncate(st.idx.pop().expect("idx tracks depth"));
                        for &v in &y {
                            st.forced.insert(v);
                        }
                        st.seq_total -= y.len();
                        st.pending.push(DiffOp::Add(y));
                        st.depth -= 1;
                        st.advancing = false;
                    }
                }
            }
        }

        let st = &self.state;
        self.stats.peak_forced = self.stats.peak_forced.max(st.forced.len());
        self.stats.peak_seq = self.stats.peak_seq.max(st.seq_total);
        self.stats.peak_depth = self.stats.peak_depth.max(st.depth);
        self.stats.peak_idx = self.stats.peak_idx.max(st.idx.len());
        if st.depth == 0 {
            self.close_gap();
        }
        Ok(match emitted {
            Some(r) => Step::Emitted(r),
            None if self.state.depth == 0 => Step::Done,
            None => Step::Continue,
        })
    }

    /// Advances to the next output, or `None` when the search is finished.
    pub fn next_record(&mut self) -> Result<Option<DiffRecord>, EngineError> {
        loop {
            match self.step()? {
                Step::Emitted(r) => return Ok(Some(r)),
                Step::Continue => {}
                Step::Done => return Ok(None),
            }
        }
    }
}

/// Streams every component below `root` to `sink` as diff records. The sink
/// may stop the run early with `ControlFlow::Break`.
pub fn enumerate_stream<O, F>(root: &VertexSet, oracle: O, sink: &mut F) -> Result<EngineStats, EngineError>
where
    O: MrsOracle,
    F: FnMut(&DiffRecord) -> ControlFlow<()>,
{
    let mut en = StreamEnumerator::new(root, oracle);
    while let Some(record) = en.next_record()? {
        if sink(&record).is_break() {
            break;
        }
    }
    Ok(en.stats)
}

/// Roots whose component families partition the whole system: maximal
/// 2-edge-connected sets for [`Mode::Edge`], blocks with at least three
/// vertices for [`Mode::Vertex`]. Ordered by smallest vertex.
pub fn roots(g: &Graph, mode: Mode) -> Vec<Vec<usize>> {
    match mode {
        Mode::Edge => maximal_e_components(g),
        Mode::Vertex => {
            let dec = all_blocks(g);
            let mut out: Vec<Vec<usize>> = dec.biconnected().map(|i| dec.blocks[i].clone()).collect();
            out.sort();
            out
        }
    }
}

/// Enumerates every component of the chosen system in `g`, one root after
/// another; each root's stream opens with a full record.
pub fn enumerate_all<F>(g: &Graph, mode: Mode, sink: &mut F) -> Result<EngineStats, EngineError>
where
    F: FnMut(&DiffRecord) -> ControlFlow<()>,
{
    let mut total = EngineStats::default();
    let mut stopped = false;
    for root in roots(g, mode) {
        let root = VertexSet::from_slice(g.n(), &root).expect("root ids are in range");
        let mut guarded = |r: &DiffRecord| {
            let flow = sink(r);
            stopped = flow.is_break();
            flow
        };
        let stats = match mode {
            Mode::Edge => enumerate_stream(&root, EdgeOracle { graph: g }, &mut guarded)?,
            Mode::Vertex => enumerate_stream(&root, VertexOracle { graph: g }, &mut guarded)?,
        };
        total.merge(&stats);
        if stopped {
            break;
        }
    }
    Ok(total)
}
