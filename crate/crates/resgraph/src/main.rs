//! Command line front end. Exit codes: 0 success, 1 invalid or unreadable
//! graph data (including oracle box overflows and internal failures), 2
//! hypothesis or precondition refusals, 3 usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use resgraph::elliptic::elliptic_sequence;
use resgraph::invariants::{
    classify, geometric_genus, hilbert_samuel, invariant_report, Assumptions,
};
use resgraph::oracle::{self, SearchBound};
use resgraph::report::{
    classification_text, document, invariants_text, sequence_text, summary_line, verify_text,
    ReportDocument,
};
use resgraph::{Error, ResolutionGraph, Violation};

#[derive(Parser)]
#[command(
    name = "resgraph",
    version,
    about = "Topological invariants of normal surface singularities, \
             computed from weighted dual resolution graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file against the validity axioms
    Validate {
        file: PathBuf,
        /// Accept graphs containing smooth rational -1 curves (downstream
        /// formulas then carry no guarantee)
        #[arg(long)]
        allow_nonminimal: bool,
    },
    /// Classify the singularity: rational, elliptic, or neither
    Classify {
        file: PathBuf,
        /// Declare the (analytic, non-computable) Gorenstein property
        #[arg(long)]
        assume_gorenstein: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the elliptic sequence
    Sequence { file: PathBuf },
    /// Full pipeline: genus verdict, multiplicity, embedding dimension,
    /// Hilbert-Samuel data, generator degrees, flags
    Invariants {
        file: PathBuf,
        /// Declare the (analytic, non-computable) Gorenstein property
        #[arg(long)]
        assume_gorenstein: bool,
        #[arg(long)]
        json: bool,
    },
    /// Hilbert-Samuel dimensions dim O/m^k and dim m^k/m^(k+1) at one k
    Hilbert {
        file: PathBuf,
        #[arg(short, long)]
        k: u32,
        /// Declare the (analytic, non-computable) Gorenstein property
        #[arg(long)]
        assume_gorenstein: bool,
    },
    /// Cross-check fast-path answers against the brute-force oracle
    Verify {
        file: PathBuf,
        /// Search cap: "default" (canonical + fundamental cycle), "<n>x"
        /// (n times the fundamental cycle), or a comma-separated list of
        /// per-vertex caps
        #[arg(long, default_value = "default")]
        oracle_cap: String,
    },
    /// Classify every *.graph file in a directory, one line per file
    Batch {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    ExitCode::from(run(cli.command))
}

fn lib_err(e: &Error) -> u8 {
    eprintln!("error: {e}");
    match e {
        Error::Hypothesis(_) | Error::Precondition(_) => 2,
        _ => 1,
    }
}

fn load(path: &Path) -> Result<ResolutionGraph, u8> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return Err(3);
        }
    };
    ResolutionGraph::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        1
    })
}

/// Loads and insists on full validity, printing each violation by name.
fn load_valid(path: &Path) -> Result<ResolutionGraph, u8> {
    let g = load(path)?;
    let report = g.validate();
    if !report.is_valid() {
        for line in report.describe(&g) {
            eprintln!("invalid: {line}");
        }
        return Err(1);
    }
    Ok(g)
}

fn oracle_limit() -> Result<u64, u8> {
    match std::env::var("RESGRAPH_ORACLE_LIMIT") {
        Err(_) => Ok(oracle::DEFAULT_LIMIT),
        Ok(s) => s.parse().map_err(|_| {
            eprintln!("error: RESGRAPH_ORACLE_LIMIT must be a non-negative integer, got {s:?}");
            3
        }),
    }
}

fn run(cmd: Command) -> u8 {
    match cmd {
        Command::Validate {
            file,
            allow_nonminimal,
        } => {
            let g = match load(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            let report = g.validate();
            let summary = format!("{} vertices, {} edges", g.vertex_count(), g.edge_count());
            if report.is_valid() {
                println!("valid: {summary}");
                return 0;
            }
            let only_minimality = report
                .violations
                .iter()
                .all(|v| matches!(v, Violation::ContractibleCurve { .. }));
            if allow_nonminimal && only_minimality {
                for line in report.describe(&g) {
                    println!("warning: {line}");
                }
                println!("valid apart from minimality: {summary}");
                return 0;
            }
            for line in report.describe(&g) {
                eprintln!("invalid: {line}");
            }
            1
        }

        Command::Classify {
            file,
            assume_gorenstein,
            json,
        } => {
            let g = match load_valid(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            let assumptions = Assumptions {
                gorenstein: assume_gorenstein,
            };
            let report = match classify(&g) {
                Ok(r) => r,
                Err(e) => return lib_err(&e),
            };
            if json {
                let doc = document(&g, &report, None, None, &assumptions);
                print!("{}", doc.to_json_pretty());
            } else {
                print!("{}", classification_text(&g, &report));
            }
            0
        }

        Command::Sequence { file } => {
            let g = match load_valid(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            match elliptic_sequence(&g) {
                Ok(seq) => {
                    print!("{}", sequence_text(&g, &seq));
                    0
                }
                Err(e) => lib_err(&e),
            }
        }

        Command::Invariants {
            file,
            assume_gorenstein,
            json,
        } => {
            let g = match load_valid(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            let assumptions = Assumptions {
                gorenstein: assume_gorenstein,
            };
            let report = match classify(&g) {
                Ok(r) => r,
                Err(e) => return lib_err(&e),
            };
            let inv = match invariant_report(&g, &report, &assumptions) {
                Ok(i) => i,
                Err(e) => return lib_err(&e),
            };
            if json {
                let doc = document(&g, &report, Some(&inv), None, &assumptions);
                print!("{}", doc.to_json_pretty());
            } else {
                print!("{}", classification_text(&g, &report));
                if let Some(seq) = &report.sequence {
                    print!("{}", sequence_text(&g, seq));
                }
                print!("{}", invariants_text(&inv));
            }
            0
        }

        Command::Hilbert {
            file,
            k,
            assume_gorenstein,
        } => {
            let g = match load_valid(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            let assumptions = Assumptions {
                gorenstein: assume_gorenstein,
            };
            let report = match classify(&g) {
                Ok(r) => r,
                Err(e) => return lib_err(&e),
            };
            let pg = geometric_genus(&report, &assumptions);
            match hilbert_samuel(&g, &report, &pg, k) {
                Ok(v) => {
                    println!(
                        "k = {}: dim O/m^k = {}, dim m^k/m^(k+1) = {}",
                        v.k, v.dim_quotient, v.dim_graded
                    );
                    0
                }
                Err(e) => lib_err(&e),
            }
        }

        Command::Verify { file, oracle_cap } => {
            let g = match load_valid(&file) {
                Ok(g) => g,
                Err(code) => return code,
            };
            let limit = match oracle_limit() {
                Ok(l) => l,
                Err(code) => return code,
            };
            let bound = if oracle_cap == "default" {
                match SearchBound::default_for(&g) {
                    Ok(b) => b,
                    Err(e) => return lib_err(&e),
                }
            } else if let Some(t) = oracle_cap
                .strip_suffix('x')
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|&t| t >= 1)
            {
                match SearchBound::fundamental_multiple(&g, t) {
                    Ok(b) => b,
                    Err(e) => return lib_err(&e),
                }
            } else if let Ok(caps) = oracle_cap
                .split(',')
                .map(|s| s.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
            {
                if caps.len() != g.vertex_count() {
                    eprintln!(
                        "error: --oracle-cap lists {} entries for a graph with {} vertices",
                        caps.len(),
                        g.vertex_count()
                    );
                    return 3;
                }
                match SearchBound::explicit(caps) {
                    Ok(b) => b,
                    Err(e) => return lib_err(&e),
                }
            } else {
                eprintln!(
                    "error: bad --oracle-cap {oracle_cap:?}: expected \"default\", \"<n>x\", \
                     or a comma-separated integer list"
                );
                return 3;
            };
            let bound = bound.with_limit(limit);
            match oracle::verify_graph(&g, &bound) {
                Ok(rows) => {
                    print!("{}", verify_text(&rows));
                    if rows.iter().any(|r| r.status == oracle::CheckStatus::Fail) {
                        eprintln!("error: oracle cross-checks failed");
                        1
                    } else {
                        0
                    }
                }
                Err(e) => lib_err(&e),
            }
        }

        Command::Batch { dir, json } => batch(&dir, json),
    }
}

#[derive(Serialize)]
struct BatchLine<'a> {
    file: String,
    report: Option<&'a ReportDocument>,
    error: Option<String>,
}

fn batch(dir: &Path, json: bool) -> u8 {
    let entries = match std::fs::read_dir(dir) {
        Ok(es) => es,
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return 3;
        }
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "graph"))
        .collect();
    files.sort();
    let assumptions = Assumptions::default();
    let mut any_failed = false;
    for path in files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let outcome = std::fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| ResolutionGraph::parse(&text).map_err(|e| e.to_string()))
            .and_then(|g| {
                classify(&g)
                    .map(|report| (g, report))
                    .map_err(|e| e.to_string())
            });
        match outcome {
            Ok((g, report)) => {
                if json {
                    let doc = document(&g, &report, None, None, &assumptions);
                    let line = BatchLine {
                        file: name,
                        report: Some(&doc),
                        error: None,
                    };
                    println!(
                        "{}",
                        serde_json::to_string(&line).expect("report serializes")
                    );
                } else {
                    println!("{}", summary_line(&name, &report));
                }
            }
            Err(msg) => {
                any_failed = true;
                if json {
                    let line = BatchLine {
                        file: name,
                        report: None,
                        error: Some(msg),
                    };
                    println!(
                        "{}",
                        serde_json::to_string(&line).expect("report serializes")
                    );
                } else {
                    println!("{name}: error: {msg}");
                }
            }
        }
    }
    u8::from(any_failed)
}
