//! Subcommands of the `twoconn` binary. Each returns the process exit code:
//! 0 on success, 2 on bad input or flags, 3 when a verification fails.

use std::io::{self, Read, Write};
use std::ops::ControlFlow;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;
use twoconn_core::selfcheck::{self, CheckError, CheckOptions, MAX_CHECK_N};
use twoconn_core::{enumerate_all, parse_graph, random_graph, DiffRecord, EngineStats, Mode, Replayer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// One line per component, ascending vertex ids.
    Full,
    /// `= ...` at each root, then one line of `+`/`-` ops per component.
    Diff,
    /// The number of components only.
    Count,
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    /// `e` for 2-edge-connected, `v` for 2-vertex-connected.
    #[arg(long)]
    pub mode: Mode,
    /// Edge-list file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    pub input: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Diff)]
    pub output: OutputFormat,
    /// Print run statistics as JSON on standard error.
    #[arg(long)]
    pub stats: bool,
    /// Cross-check against brute force first (graphs with at most 12 vertices).
    #[arg(long)]
    pub self_check: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Edge probability in [0, 1].
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Largest random graph size (at most 12); graphs up to 5 vertices are
    /// checked exhaustively.
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    /// Number of random graphs.
    #[arg(long, default_value_t = 300)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Summary of one enumeration run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub components: usize,
    pub max_iterations_between: usize,
    pub mean_iterations_between: f64,
    pub max_delay_ns: u128,
    pub mean_delay_ns: f64,
    pub peak_forced: usize,
    pub peak_seq: usize,
    pub peak_idx: usize,
    pub peak_depth: usize,
    pub oracle_calls: usize,
}

impl RunStats {
    fn new(engine: &EngineStats, delays: &[u128]) -> Self {
        let gaps = delays.len().max(1);
        RunStats {
            components: engine.records,
            max_iterations_between: engine.max_iterations_between,
            mean_iterations_between: engine.iterations as f64 / gaps as f64,
            max_delay_ns: delays.iter().copied().max().unwrap_or(0),
            mean_delay_ns: delays.iter().sum::<u128>() as f64 / gaps as f64,
            peak_forced: engine.peak_forced,
            peak_seq: engine.peak_seq,
            peak_idx: engine.peak_idx,
            peak_depth: engine.peak_depth,
            oracle_calls: engine.oracle_calls,
        }
    }
}

fn read_input(path: &str) -> io::Result<String> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    Ok(text)
}

fn write_record(out: &mut impl Write, format: OutputFormat, replay: &mut Replayer, r: &DiffRecord) -> io::Result<()> {
    match format {
        OutputFormat::Diff => writeln!(out, "{r}")?,
        OutputFormat::Full => {
            let c = replay
                .apply(r)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
            let line: Vec<String> = c.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        OutputFormat::Count => return Ok(()),
    }
    out.flush()
}

/// `enumerate`: streams every component of the input graph.
pub fn cmd_enumerate(args: &EnumerateArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", args.input);
            return EXIT_USAGE;
        }
    };
    let g = match parse_graph(&text) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };

    if args.self_check {
        if g.n() > MAX_CHECK_N {
            let _ = writeln!(err, "note: self-check skipped, graph has more than {MAX_CHECK_N} vertices");
        } else if let Err(e) = selfcheck::check_graph(&g, args.mode, CheckOptions::default()) {
            let _ = writeln!(err, "self-check failed: {e}");
            return EXIT_MISMATCH;
        }
    }

    let mut replay = Replayer::new();
    let mut delays = Vec::new();
    let mut write_error = None;
    let mut last = Instant::now();
    let result = enumerate_all(&g, args.mode, &mut |r: &DiffRecord| {
        delays.push(last.elapsed().as_nanos());
        if let Err(e) = write_record(out, args.output, &mut replay, r) {
            write_error = Some(e);
            return ControlFlow::Break(());
        }
        last = Instant::now();
        ControlFlow::Continue(())
    });
    delays.push(last.elapsed().as_nanos());
    let engine = match result {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "internal error: {e}");
            return EXIT_MISMATCH;
        }
    };
    if let Some(e) = write_error {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return EXIT_OK;
        }
        let _ = writeln!(err, "error: {e}");
        return EXIT_MISMATCH;
    }
    if args.output == OutputFormat::Count && writeln!(out, "{}", engine.records).is_err() {
        return EXIT_OK;
    }
    if args.stats {
        let stats = RunStats::new(&engine, &delays);
        let _ = writeln!(err, "{}", serde_json::to_string_pretty(&stats).expect("stats serialize"));
    }
    EXIT_OK
}

/// `gen`: writes a seeded G(n, p) graph in edge-list format.
pub fn cmd_gen(args: &GenArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match random_graph(args.n, args.p, args.seed) {
        Ok(g) => {
            let _ = write!(out, "{}", g.to_edge_list());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// `verify`: runs the brute-force property suite.
pub fn cmd_verify(args: &VerifyArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    if args.n_max > MAX_CHECK_N {
        let _ = writeln!(err, "error: --n-max must be at most {MAX_CHECK_N}");
        return EXIT_USAGE;
    }
    match selfcheck::verify(args.n_max, args.trials, args.seed) {
        Ok(r) => {
            let _ = writeln!(
                out,
                "ok: {} graphs, {} components, {} oracle queries checked in both modes",
                r.graphs, r.components, r.oracle_queries
            );
            EXIT_OK
        }
        Err(CheckError::TooLarge(n)) => {
            let _ = writeln!(err, "error: graph size {n} over the limit of {MAX_CHECK_N}");
            EXIT_USAGE
        }
        Err(CheckError::Mismatch(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            EXIT_MISMATCH
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_enumerate(input: &str, mode: Mode, output: OutputFormat) -> (i32, String) {
        let dir = std::env::temp_dir().join(format!("twoconn-unit-{}-{mode}-{output:?}", std::process::id()));
        std::fs::write(&dir, input).unwrap();
        let args = EnumerateArgs {
            mode,
            input: dir.to_string_lossy().into_owned(),
            output,
            stats: false,
            self_check: true,
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cmd_enumerate(&args, &mut out, &mut err);
        std::fs::remove_file(&dir).ok();
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn diamond_full_output() {
        let (code, out) = run_enumerate("4 5\n0 1\n0 2\n1 2\n1 3\n2 3\n", Mode::Vertex, OutputFormat::Full);
        assert_eq!(code, 0);
        let mut lines: Vec<&str> = out.lines().collect();
        lines.sort();
        assert_eq!(lines, vec!["0 1 2", "0 1 2 3", "1 2 3"]);
    }

    #[test]
    fn parse_error_exits_2() {
        let (code, out) = run_enumerate("3 1\n0 0\n", Mode::Edge, OutputFormat::Diff);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
    }

    #[test]
    fn run_stats_means() {
        let engine = EngineStats {
            records: 2,
            iterations: 6,
            ..Default::default()
        };
        let s = RunStats::new(&engine, &[10, 20, 30]);
        assert_eq!(s.components, 2);
        assert_eq!(s.mean_iterations_between, 2.0);
        assert_eq!(s.max_delay_ns, 30);
        assert_eq!(s.mean_delay_ns, 20.0);
    }

    #[test]
    fn gen_rejects_bad_probability() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(cmd_gen(&GenArgs { n: 3, p: 1.5, seed: 0 }, &mut out, &mut err), EXIT_USAGE);
    }
}
