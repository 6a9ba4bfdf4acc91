//! `lapsep` — analyze density matrices of labeled graphs on p×q arrays.
//!
//! Exit codes: 0 success, 2 input error, 3 internal assertion failure.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lapsep::enumerate::CANONICAL_VERTEX_CAP;
use lapsep::families::{counterexample_graph, family_graph, Family};
use lapsep::graph::ArrayedGraph;
use lapsep::measures::EntropyBase;
use lapsep::report::{
    analyze_graph, decomposition_json, record_csv_row, record_json, records_csv, sweep_records,
    table4_report, Analysis, AnalyzeOptions, ReportError, CSV_HEADER,
};

#[derive(Parser)]
#[command(
    name = "lapsep",
    about = "Separability criteria, separable decompositions and entanglement measures \
             for density matrices of labeled graphs on p x q vertex arrays",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one graph: criteria, verdict, measures.
    Analyze(AnalyzeArgs),
    /// Emit the explicit separable decomposition of a 2xq graph.
    Decompose(SelectorArgs),
    /// Analyze every non-empty labeled graph on the array (CSV).
    Enumerate(EnumerateArgs),
    /// The 3x3 graph that is PPT yet entangled.
    Counterexample {
        #[arg(long)]
        json: bool,
    },
    /// The 4-vertex concurrence table over isomorphism classes.
    Table4 {
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct SelectorArgs {
    /// Edge-list file: first line "p q", then "k1 l1 k2 l2" per edge.
    #[arg(long, conflicts_with_all = ["family", "rows", "cols"])]
    file: Option<PathBuf>,

    /// Builtin family: complete | star | crisscross | tallymark(s) |
    /// nearest_point_sample.
    #[arg(long, requires = "rows", requires = "cols")]
    family: Option<String>,

    /// Array rows p.
    #[arg(long)]
    rows: Option<usize>,

    /// Array columns q.
    #[arg(long)]
    cols: Option<usize>,

    /// Absolute tolerance for floating comparisons (default 1e-9,
    /// or the LAPSEP_TOL environment variable).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    selector: SelectorArgs,

    #[arg(long, conflicts_with = "csv")]
    json: bool,

    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    rows: usize,

    #[arg(long)]
    cols: usize,

    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    workers: Option<usize>,

    #[arg(long)]
    tol: Option<f64>,

    /// Enumerate past the built-in size cap.
    #[arg(long)]
    allow_large: bool,
}

struct Failure {
    code: &'static str,
    message: String,
    exit: u8,
}

impl Failure {
    fn input(code: &'static str, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
            exit: 2,
        }
    }

    fn assertion(message: impl ToString) -> Self {
        Failure {
            code: "assertion",
            message: message.to_string(),
            exit: 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            // Tolerate a closed pipe (e.g. `lapsep enumerate ... | head`).
            let _ = std::io::stdout().lock().write_all(output.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("lapsep: error[{}]: {}", f.code, f.message);
            ExitCode::from(f.exit)
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Analyze(args) => {
            let graph = select_graph(&args.selector)?;
            let opts = options(args.selector.tol)?;
            let analysis = analyze(&graph, &opts)?;
            Ok(if args.json {
                format!("{}\n", record_json(&analysis.record))
            } else if args.csv {
                format!("{CSV_HEADER}\n{}\n", record_csv_row(&analysis.record))
            } else {
                render_human(&analysis)
            })
        }
        Command::Decompose(selector) => {
            let graph = select_graph(&selector)?;
            let opts = options(selector.tol)?;
            let dec = lapsep::decompose::decompose_graph(&graph, opts.tol)
                .map_err(|e| Failure::input("decompose", e))?;
            Ok(format!("{}\n", decomposition_json(&dec)))
        }
        Command::Enumerate(args) => {
            let opts = options(args.tol)?;
            if let Some(workers) = args.workers {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build_global()
                    .map_err(|e| Failure::input("workers", e))?;
            }
            let records = sweep_records(args.rows, args.cols, &opts, args.allow_large)
                .map_err(report_failure)?;
            let csv = records_csv(&records);
            match args.out {
                Some(path) => {
                    std::fs::write(&path, csv)
                        .map_err(|e| Failure::input("io", format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Counterexample { json } => {
            let graph = counterexample_graph();
            let opts = options(None)?;
            let analysis = analyze(&graph, &opts)?;
            Ok(if json {
                format!("{}\n", record_json(&analysis.record))
            } else {
                let mut out = String::from(
                    "3x3 graph with edges (1,1)-(2,3), (1,2)-(3,1), (1,3)-(3,2), (2,1)-(3,3):\n\
                     vertex (2,2) is isolated; all four edges are unmatched.\n",
                );
                out.push_str(&render_human(&analysis));
                out
            })
        }
        Command::Table4 { csv } => {
            let table = table4_report().map_err(report_failure)?;
            let mut out = String::new();
            if csv {
                out.push_str("class_id,edge_count,labelings,entangled_labelings,concurrence\n");
                for c in &table.classes {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        c.class_id,
                        c.edge_count,
                        c.labelings,
                        c.entangled_labelings,
                        c.concurrence
                            .map(|v| format!("{v:.11e}"))
                            .unwrap_or_default()
                    );
                }
            } else {
                let _ = writeln!(
                    out,
                    "{} isomorphism classes of non-empty graphs on 4 vertices; \
                     {} admit entangled labelings.",
                    table.classes.len(),
                    table.entangled_class_count
                );
                let _ = writeln!(out, "(Concurrence of every entangled labeling is 1/edges.)");
                for c in &table.classes {
                    match c.concurrence {
                        Some(v) => {
                            let _ = writeln!(
                                out,
                                "class {} edges {}: {}/{} labelings entangled, concurrence {:.6}",
                                c.class_id, c.edge_count, c.entangled_labelings, c.labelings, v
                            );
                        }
                        None => {
                            let _ = writeln!(
                                out,
                                "class {} edges {}: separable for every labeling",
                                c.class_id, c.edge_count
                            );
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

fn options(tol_flag: Option<f64>) -> Result<AnalyzeOptions, Failure> {
    let tol = match tol_flag {
        Some(t) => t,
        None => match std::env::var("LAPSEP_TOL") {
            Ok(raw) => raw.parse::<f64>().map_err(|_| {
                Failure::input("tol", format!("LAPSEP_TOL={raw:?} is not a number"))
            })?,
            Err(_) => lapsep::DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::input(
            "tol",
            format!("tolerance {tol} must be positive"),
        ));
    }
    Ok(AnalyzeOptions {
        tol,
        entropy_base: EntropyBase::Bits,
        canonical_cap: CANONICAL_VERTEX_CAP,
    })
}

fn select_graph(selector: &SelectorArgs) -> Result<ArrayedGraph, Failure> {
    match (&selector.file, &selector.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::input("io", format!("{}: {e}", path.display())))?;
            let parsed =
                ArrayedGraph::parse_edge_list(&text).map_err(|e| Failure::input("parse", e))?;
            for dup in &parsed.duplicates {
                eprintln!("lapsep: warning: duplicate edge {dup} collapsed");
            }
            Ok(parsed.graph)
        }
        (None, Some(name)) => {
            let family: Family = name.parse().map_err(|e| Failure::input("family", e))?;
            let (rows, cols) = (selector.rows.unwrap_or(0), selector.cols.unwrap_or(0));
            family_graph(family, rows, cols).map_err(|e| Failure::input("family", e))
        }
        _ => Err(Failure::input(
            "usage",
            "pass exactly one of --file PATH or --family NAME --rows P --cols Q",
        )),
    }
}

fn analyze(graph: &ArrayedGraph, opts: &AnalyzeOptions) -> Result<Analysis, Failure> {
    analyze_graph(graph, opts).map_err(report_failure)
}

fn report_failure(e: ReportError) -> Failure {
    match e {
        ReportError::AssertionFailure(msg) => Failure::assertion(msg),
        other => Failure::input("input", other),
    }
}

fn render_human(analysis: &Analysis) -> String {
    let r = &analysis.record;
    let mut out = String::new();
    let edges = r
        .edges
        .iter()
        .map(|e| format!("({},{})-({},{})", e[0], e[1], e[2], e[3]))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(
        out,
        "graph {}x{} with {} edges: {}",
        r.p,
        r.q,
        r.edges.len(),
        edges
    );
    let _ = writeln!(
        out,
        "id: {}  class: {}",
        r.id,
        r.class_id.as_deref().unwrap_or("-")
    );
    let _ = writeln!(
        out,
        "degree criterion: {}",
        if r.degree_criterion {
            "satisfied"
        } else {
            "violated"
        }
    );
    let _ = writeln!(
        out,
        "ppt: {} (min eigenvalue of the partial transpose {:+.6e})",
        if analysis.criteria.ppt.holds {
            "holds"
        } else {
            "fails"
        },
        r.ppt_min_eig
    );
    let _ = writeln!(
        out,
        "realignment trace norm: {:.9}{}",
        r.realignment_trace_norm,
        if analysis.criteria.realignment.flags_entangled {
            "  (flags entanglement)"
        } else {
            ""
        }
    );
    let _ = writeln!(out, "verdict: {}", r.verdict);
    if let Some(c) = r.concurrence {
        let _ = writeln!(out, "concurrence (Wootters): {c:.9}");
    }
    let _ = writeln!(
        out,
        "concurrence bound n2/(n1+n2): {}  (n1 = {}, n2 = {})",
        r.concurrence_bound, r.n1, r.n2
    );
    if let Some(ef) = r.ef {
        let _ = writeln!(out, "entanglement of formation (base 2): {ef:.9}");
    }
    let _ = writeln!(out, "logarithmic negativity: {:.9}", r.ln);
    let _ = writeln!(out, "degree discrepancy norm: {:.9}", r.en);
    if let Some(dec) = &analysis.decomposition {
        let _ = writeln!(
            out,
            "separable decomposition: {} terms, reconstruction residual {:.3e}",
            dec.terms.len(),
            dec.reconstruction_residual
        );
    }
    out
}
