//! `zforce`: zero forcing sets and strong structural controllability of
//! leader-follower networks on directed graphs.
//!
//! Exit codes: 0 for a definite verdict, 1 for usage or input errors, 2 when
//! the result is inconclusive (subset budget exhausted, a subclass too poor
//! to decide, or a numerically ambiguous rank test).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zforce::{
    check_strong_structural, derived_set, is_zfs, leaders_from_cover, lmin_matrix, matrix_from_json,
    minimal_path_cover, parse_digraph, parse_undirected, zero_forcing_number_budgeted,
    ControllabilityError, Digraph, ForcingChronicle, LeaderSet, Sign, SubclassSpec,
    UndirectedGraph, Verdict, VerdictOutcome, VertexSet, ZfnOutcome, DEFAULT_RANK_TOL,
};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "zforce",
    version,
    about = "Zero forcing sets and strong structural controllability on directed graphs"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for every randomized path (also read from ZFORCE_SEED).
    #[arg(long, global = true, env = "ZFORCE_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Complete,
    Circulant,
    RandomDigraph,
    RandomDitree,
    RandomArborescence,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subclass {
    Full,
    Sym,
    #[value(name = "symsign+")]
    SymsignPlus,
    #[value(name = "symsign-")]
    SymsignMinus,
}

impl Subclass {
    fn to_spec(self) -> SubclassSpec {
        match self {
            Subclass::Full => SubclassSpec::Full,
            Subclass::Sym => SubclassSpec::Symmetric,
            Subclass::SymsignPlus => SubclassSpec::SymmetricSameSign(Sign::Positive),
            Subclass::SymsignMinus => SubclassSpec::SymmetricSameSign(Sign::Negative),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it in edge-list format.
    Gen {
        /// Graph family.
        #[arg(value_enum)]
        family: Family,
        /// Number of vertices.
        n: usize,
        /// Circulant offsets, e.g. --offsets 1,2,3.
        #[arg(long, value_delimiter = ',')]
        offsets: Vec<usize>,
        /// Arc probability for random-digraph.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Compute the derived set of an initial coloring.
    Derive {
        file: PathBuf,
        /// Initially black vertices, e.g. --colors 1,5.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        colors: Vec<usize>,
        /// Parse the file as an undirected edge list and lift it.
        #[arg(long)]
        undirected: bool,
        /// Parse the file as a directed edge list (the default).
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
    },
    /// Compute the zero forcing number with a minimal witness.
    Zfn {
        file: PathBuf,
        #[arg(long)]
        undirected: bool,
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
        /// Abort after this many candidate subsets.
        #[arg(long)]
        budget: Option<u64>,
        /// Scan subsets of at most this size.
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Decide strong structural controllability for a leader set.
    Check {
        file: PathBuf,
        /// Leader vertices, e.g. --leaders 1,5.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        leaders: Vec<usize>,
        #[arg(long)]
        undirected: bool,
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
        /// Matrices sampled for the numeric diagnostic.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Qualitative subclass to sample from.
        #[arg(long, value_enum, default_value_t = Subclass::Full)]
        subclass: Subclass,
        /// Relative rank tolerance.
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
    },
    /// Minimum number of leaders: for a graph (whole class) or for one matrix.
    Lmin {
        /// Graph file; the class-level answer is the zero forcing number.
        file: Option<PathBuf>,
        /// JSON matrix file ({"n": .., "rows": [[..], ..]}); exhaustive
        /// leader search on this single matrix.
        #[arg(long, conflicts_with = "file")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        undirected: bool,
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
    },
    /// Minimal path cover of a ditree and the leader set it induces.
    Pathcover {
        file: PathBuf,
        #[arg(long)]
        undirected: bool,
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
    },
    /// Sample a matrix from a qualitative subclass and dump it as JSON.
    Sample {
        file: PathBuf,
        #[arg(long)]
        undirected: bool,
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
        /// Qualitative subclass to sample from.
        #[arg(long, value_enum, default_value_t = Subclass::Full)]
        subclass: Subclass,
    },
}

struct Report {
    json: serde_json::Value,
    text: String,
    exit: u8,
    /// Emit `text` verbatim regardless of --format (used by gen, whose
    /// report is the graph file itself).
    raw: bool,
}

impl Report {
    fn new(json: serde_json::Value, text: String, exit: u8) -> Self {
        Report {
            json,
            text,
            exit,
            raw: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let format = cli.format;
    let output = cli.output.clone();
    match run(cli) {
        Ok(report) => {
            let body = if report.raw {
                report.text
            } else {
                match format {
                    Format::Json => {
                        let mut s = serde_json::to_string_pretty(&report.json)
                            .expect("report serializes");
                        s.push('\n');
                        s
                    }
                    Format::Text => report.text,
                }
            };
            if let Some(path) = output {
                if let Err(e) = fs::write(&path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_ERROR);
                }
            } else {
                print!("{body}");
            }
            ExitCode::from(report.exit)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<Report, String> {
    match cli.command {
        Command::Gen {
            family,
            n,
            ref offsets,
            p,
        } => cmd_gen(family, n, offsets, p, cli.seed),
        Command::Derive {
            ref file,
            ref colors,
            undirected,
            ..
        } => cmd_derive(file, colors, undirected),
        Command::Zfn {
            ref file,
            undirected,
            budget,
            max_size,
            ..
        } => cmd_zfn(file, undirected, budget, max_size),
        Command::Check {
            ref file,
            ref leaders,
            undirected,
            samples,
            subclass,
            tol,
            ..
        } => cmd_check(file, leaders, undirected, samples, subclass, cli.seed, tol),
        Command::Lmin {
            ref file,
            ref matrix,
            undirected,
            tol,
            ..
        } => cmd_lmin(file.as_ref(), matrix.as_ref(), undirected, tol),
        Command::Pathcover {
            ref file,
            undirected,
            ..
        } => cmd_pathcover(file, undirected),
        Command::Sample {
            ref file,
            undirected,
            subclass,
            ..
        } => cmd_sample(file, undirected, subclass, cli.seed),
    }
}

fn cmd_sample(
    file: &PathBuf,
    undirected: bool,
    subclass: Subclass,
    seed: u64,
) -> Result<Report, String> {
    let g = load_digraph(file, undirected)?;
    let x = zforce::sample_matrix(&g, subclass.to_spec(), seed).map_err(|e| e.to_string())?;
    let json = json!({
        "command": "sample",
        "matrix": x.to_json_value(),
        "seed": seed,
    });
    let mut text = String::new();
    for r in 0..g.n() {
        let row: Vec<String> = (0..g.n())
            .map(|c| format!("{:8.4}", x.entries()[(r, c)]))
            .collect();
        let _ = writeln!(text, "{}", row.join(" "));
    }
    let _ = writeln!(text, "seed: {seed}");
    Ok(Report::new(json, text, EXIT_OK))
}

fn load_digraph(path: &PathBuf, undirected: bool) -> Result<Digraph, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    if undirected {
        Ok(parse_undirected(&text).map_err(|e| e.to_string())?.lift())
    } else {
        parse_digraph(&text).map_err(|e| e.to_string())
    }
}

fn parse_vertex_set(vs: &[usize], n: usize, what: &str) -> Result<VertexSet, String> {
    let mut set = VertexSet::EMPTY;
    for &v in vs {
        if v == 0 || v > n {
            return Err(format!("{what} vertex {v} outside 1..={n}"));
        }
        if set.contains(v) {
            return Err(format!("duplicate {what} vertex {v}"));
        }
        set.insert(v);
    }
    Ok(set)
}

fn forces_text(chronicle: &ForcingChronicle) -> String {
    if chronicle.is_empty() {
        "(none)".to_string()
    } else {
        chronicle
            .forces()
            .iter()
            .map(|(u, v)| format!("{u} -> {v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn cmd_gen(
    family: Family,
    n: usize,
    offsets: &[usize],
    p: f64,
    seed: u64,
) -> Result<Report, String> {
    let err = |e: zforce::GraphError| e.to_string();
    let (body, seeded) = match family {
        Family::Path => (UndirectedGraph::path(n).map_err(err)?.to_edge_list(), false),
        Family::Cycle => (UndirectedGraph::cycle(n).map_err(err)?.to_edge_list(), false),
        Family::Complete => (
            UndirectedGraph::complete(n).map_err(err)?.to_edge_list(),
            false,
        ),
        Family::Circulant => {
            if offsets.is_empty() {
                return Err("circulant requires --offsets".into());
            }
            (
                UndirectedGraph::circulant(n, offsets)
                    .map_err(err)?
                    .to_edge_list(),
                false,
            )
        }
        Family::RandomDigraph => (Digraph::random(n, p, seed).map_err(err)?.to_edge_list(), true),
        Family::RandomDitree => (
            Digraph::random_ditree(n, seed).map_err(err)?.to_edge_list(),
            true,
        ),
        Family::RandomArborescence => (
            Digraph::random_arborescence(n, seed)
                .map_err(err)?
                .to_edge_list(),
            true,
        ),
    };
    let body = if seeded {
        format!("# seed {seed}\n{body}")
    } else {
        body
    };
    // The generated graph is the report in both formats.
    Ok(Report {
        json: serde_json::Value::Null,
        text: body,
        exit: EXIT_OK,
        raw: true,
    })
}

fn cmd_derive(file: &PathBuf, colors: &[usize], undirected: bool) -> Result<Report, String> {
    let g = load_digraph(file, undirected)?;
    let initial = parse_vertex_set(colors, g.n(), "color")?;
    let (derived, chronicle) = derived_set(&g, initial);
    let zfs = derived == g.vertex_set();
    let json = json!({
        "command": "derive",
        "n": g.n(),
        "colors": initial.to_json_value(),
        "derived": derived.to_json_value(),
        "chronicle": chronicle.to_json_value(),
        "is_zfs": zfs,
    });
    let mut text = String::new();
    let _ = writeln!(text, "derived set: {derived}");
    let _ = writeln!(text, "forces: {}", forces_text(&chronicle));
    let _ = writeln!(text, "zfs: {zfs}");
    Ok(Report::new(json, text, EXIT_OK))
}

fn cmd_zfn(
    file: &PathBuf,
    undirected: bool,
    budget: Option<u64>,
    max_size: Option<usize>,
) -> Result<Report, String> {
    let g = load_digraph(file, undirected)?;
    match zero_forcing_number_budgeted(&g, budget, max_size) {
        ZfnOutcome::Exact(res) => {
            let json = json!({
                "command": "zfn",
                "n": g.n(),
                "status": "exact",
                "zfn": res.zfn,
                "witness": res.witness.to_json_value(),
                "subsets_examined": res.subsets_examined,
            });
            let mut text = String::new();
            let _ = writeln!(text, "Z(G) = {}", res.zfn);
            let _ = writeln!(text, "witness: {}", res.witness);
            let _ = writeln!(text, "subsets examined: {}", res.subsets_examined);
            Ok(Report::new(json, text, EXIT_OK))
        }
        ZfnOutcome::NoneWithinMaxSize {
            max_size,
            subsets_examined,
        } => {
            let json = json!({
                "command": "zfn",
                "n": g.n(),
                "status": "no_zfs_within_max_size",
                "max_size": max_size,
                "subsets_examined": subsets_examined,
            });
            let text = format!(
                "no ZFS of size <= {max_size} exists ({subsets_examined} subsets examined)\n"
            );
            Ok(Report::new(json, text, EXIT_OK))
        }
        ZfnOutcome::BudgetExhausted {
            lower_bound,
            subsets_examined,
        } => {
            let json = json!({
                "command": "zfn",
                "n": g.n(),
                "status": "inconclusive",
                "lower_bound": lower_bound,
                "subsets_examined": subsets_examined,
            });
            let text = format!(
                "inconclusive: subset budget exhausted; Z(G) >= {lower_bound} \
                 ({subsets_examined} subsets examined)\n"
            );
            Ok(Report::new(json, text, EXIT_INCONCLUSIVE))
        }
    }
}

fn verdict_text(verdict: &Verdict) -> String {
    let mut text = String::new();
    match &verdict.outcome {
        VerdictOutcome::Controllable { chronicle } => {
            let _ = writeln!(text, "verdict: controllable");
            let _ = writeln!(text, "forces: {}", forces_text(chronicle));
            let _ = writeln!(
                text,
                "samples: {}/{} numeric passes",
                verdict.samples_checked - verdict.diagnostics.len(),
                verdict.samples_checked
            );
            for d in &verdict.diagnostics {
                let _ = writeln!(text, "diagnostic: {d}");
            }
        }
        VerdictOutcome::Uncontrollable { witness } => {
            let _ = writeln!(text, "verdict: uncontrollable");
            let _ = writeln!(text, "null vector: {:?}", witness.null_vector);
        }
        VerdictOutcome::Unknown { reason } => {
            let _ = writeln!(text, "verdict: unknown ({reason})");
        }
    }
    let _ = writeln!(text, "seed: {}", verdict.seed);
    text
}

fn cmd_check(
    file: &PathBuf,
    leaders: &[usize],
    undirected: bool,
    samples: usize,
    subclass: Subclass,
    seed: u64,
    tol: f64,
) -> Result<Report, String> {
    if samples < 1 {
        return Err("--samples must be at least 1".into());
    }
    if tol <= 0.0 {
        return Err("--tol must be positive".into());
    }
    let g = load_digraph(file, undirected)?;
    parse_vertex_set(leaders, g.n(), "leader")?;
    let leader_set =
        LeaderSet::new(leaders.to_vec(), g.n()).map_err(|e: ControllabilityError| e.to_string())?;
    let verdict = check_strong_structural(&g, &leader_set, samples, seed, subclass.to_spec(), tol)
        .map_err(|e| e.to_string())?;
    let exit = if verdict.is_definite() {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    };
    Ok(Report::new(verdict.to_json_value(), verdict_text(&verdict), exit))
}

fn cmd_lmin(
    file: Option<&PathBuf>,
    matrix: Option<&PathBuf>,
    undirected: bool,
    tol: f64,
) -> Result<Report, String> {
    if tol <= 0.0 {
        return Err("--tol must be positive".into());
    }
    match (file, matrix) {
        (Some(path), None) => {
            let g = load_digraph(path, undirected)?;
            let (k, leaders) = zforce::lmin_graph(&g);
            let json = json!({
                "command": "lmin",
                "mode": "graph",
                "n": g.n(),
                "k": k,
                "leaders": leaders.vertices(),
            });
            let text = format!(
                "minimum leaders (whole class) = {k}\nleaders: {}\n",
                leaders.to_set()
            );
            Ok(Report::new(json, text, EXIT_OK))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let x = matrix_from_json(&text).map_err(|e| e.to_string())?;
            match lmin_matrix(&x, tol) {
                Ok((k, leaders)) => {
                    let json = json!({
                        "command": "lmin",
                        "mode": "matrix",
                        "n": x.nrows(),
                        "k": k,
                        "leaders": leaders.vertices(),
                    });
                    let text = format!(
                        "minimum leaders (this matrix) = {k}\nleaders: {}\n",
                        leaders.to_set()
                    );
                    Ok(Report::new(json, text, EXIT_OK))
                }
                Err(e @ ControllabilityError::NumericalAmbiguity { .. }) => Ok(Report::new(
                    json!({
                        "command": "lmin",
                        "mode": "matrix",
                        "status": "inconclusive",
                        "reason": e.to_string(),
                    }),
                    format!("inconclusive: {e}\n"),
                    EXIT_INCONCLUSIVE,
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        _ => Err("provide either a graph file or --matrix".into()),
    }
}

fn cmd_pathcover(file: &PathBuf, undirected: bool) -> Result<Report, String> {
    let g = load_digraph(file, undirected)?;
    let cover = minimal_path_cover(&g).map_err(|e| e.to_string())?;
    let leaders = leaders_from_cover(&cover);
    debug_assert!(is_zfs(&g, leaders));
    let json = json!({
        "command": "pathcover",
        "n": g.n(),
        "count": cover.len(),
        "paths": cover.to_json_value(),
        "leaders": leaders.to_json_value(),
    });
    let paths_text = cover
        .paths()
        .iter()
        .map(|p| {
            p.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" -> ")
        })
        .collect::<Vec<_>>()
        .join("; ");
    let text = format!(
        "path cover number: {}\npaths: {paths_text}\nleaders: {leaders}\n",
        cover.len()
    );
    Ok(Report::new(json, text, EXIT_OK))
}
