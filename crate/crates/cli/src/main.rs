use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polaris::check::{minimize, run_checks, run_fuzz, CheckReport};
use polaris::{analyze, dot, fixtures, parse_graph, scott, AnalyzeError, AnalyzeOptions, LimitTrees, ResolutionGraph};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "polaris", version, about = "Generic polar curves of minimal surface singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one graph, as JSON on stdout.
    Analyze {
        file: PathBuf,
        /// Skip the plane-curve model and its verification.
        #[arg(long)]
        no_realize: bool,
        #[arg(long, value_enum, default_value_t = TreeMode::All)]
        limit_trees: TreeMode,
        /// Seed for sampling limit assignments beyond the cap.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every cross-check on a graph, a golden report, or random graphs.
    Check {
        #[arg(required_unless_present = "fuzz", conflicts_with = "fuzz")]
        file: Option<PathBuf>,
        #[arg(long)]
        fuzz: bool,
        #[arg(long, env = "POLARIS_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Maximum vertex count of generated graphs.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
    },
    /// Graphviz export.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: What,
    },
    /// Built-in example graphs.
    Fixtures {
        /// Print name and description of every fixture.
        #[arg(long, conflicts_with = "show")]
        list: bool,
        /// Print the graph file of one fixture.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeMode {
    All,
    One,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Graph,
    LimitTree,
    Scott,
}

enum Failure {
    Usage(String),
    Parse(String),
    Invalid(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Invalid(_) => 3,
            Failure::Check(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Invalid(m) | Failure::Check(m) => f.write_str(m),
        }
    }
}

impl From<AnalyzeError> for Failure {
    fn from(e: AnalyzeError) -> Self {
        match e.exit_code() {
            3 => Failure::Invalid(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<ResolutionGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_valid(path: &Path) -> Result<ResolutionGraph, Failure> {
    let g = load_graph(path)?;
    let v = g.validate_minimal();
    if v.is_empty() {
        Ok(g)
    } else {
        let msg: Vec<String> = v.iter().map(ToString::to_string).collect();
        Err(Failure::Invalid(format!("{}: {}", path.display(), msg.join("; "))))
    }
}

fn cmd_analyze(file: &Path, no_realize: bool, mode: TreeMode, seed: u64) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let opts = AnalyzeOptions {
        realize: !no_realize,
        limit_trees: match mode {
            TreeMode::All => LimitTrees::All,
            TreeMode::One => LimitTrees::One,
        },
        seed,
    };
    let report = analyze(&g, &opts)?;
    print!("{}", report.to_pretty());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(report.failures.join("\n")))
    }
}

fn failed_names(r: &CheckReport) -> BTreeSet<&'static str> {
    r.failures().map(|o| o.check).collect()
}

fn print_outcomes(r: &CheckReport) {
    for o in &r.outcomes {
        if o.passed {
            println!("ok    {}", o.check);
        } else {
            println!("FAIL  {}: {}", o.check, o.detail);
        }
    }
}

fn check_graph(g: &ResolutionGraph, seed: u64) -> Result<(), Failure> {
    let r = run_checks(g, seed);
    print_outcomes(&r);
    if r.passed() {
        return Ok(());
    }
    let failed = failed_names(&r);
    let small = minimize(g, |h| failed.is_subset(&failed_names(&run_checks(h, seed))));
    println!("reproducer:");
    print!("{}", small.to_text());
    Err(Failure::Check(format!("{} check(s) failed", failed.len())))
}

/// A golden report: rerun the analysis with default options and compare.
fn check_golden(text: &str, path: &Path) -> Result<(), Failure> {
    let golden: Value = serde_json::from_str(text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let g = polaris::report::graph_from_json(&golden["graph"])
        .ok_or_else(|| Failure::Parse(format!("{}: no readable `graph` block", path.display())))?;
    let fresh = analyze(&g, &AnalyzeOptions::default())?;
    let (Some(want), Some(got)) = (golden.as_object(), fresh.json.as_object()) else {
        return Err(Failure::Parse(format!("{}: report is not an object", path.display())));
    };
    let keys: BTreeSet<&String> = want.keys().chain(got.keys()).collect();
    let differing: Vec<&String> = keys.into_iter().filter(|k| want.get(*k) != got.get(*k)).collect();
    for k in got.keys() {
        if differing.contains(&k) {
            println!("FAIL  {k}: differs from the golden report");
        } else {
            println!("ok    {k}");
        }
    }
    if differing.is_empty() && fresh.passed() {
        return Ok(());
    }
    for f in &fresh.failures {
        println!("FAIL  {f}");
    }
    println!("reproducer:");
    print!("{}", g.to_text());
    Err(Failure::Check(format!("{} field(s) differ from the golden report", differing.len())))
}

fn cmd_check(file: Option<&Path>, seed: u64, count: usize, size: usize) -> Result<(), Failure> {
    let Some(file) = file else {
        let s = run_fuzz(seed, count, size);
        println!(
            "fuzz seed={} count={} size={}: {} failure(s), {} floor-oracle case(s)",
            s.seed,
            s.count,
            s.size,
            s.failures.len(),
            s.oracle_cases
        );
        for f in &s.failures {
            println!("case {} (seed {}): {}", f.case, f.seed, f.failed.join("; "));
            println!("reproducer:");
            print!("{}", f.reproducer);
        }
        return if s.failures.is_empty() {
            Ok(())
        } else {
            Err(Failure::Check(format!("{} of {} cases failed", s.failures.len(), s.count)))
        };
    };
    let text = read(file)?;
    if text.trim_start().starts_with('{') {
        return check_golden(&text, file);
    }
    check_graph(&load_valid(file)?, seed)
}

fn cmd_export(file: &Path, what: What) -> Result<(), Failure> {
    let g = load_valid(file)?;
    let out = match what {
        What::Graph => dot::graph_dot(&g),
        What::LimitTree => dot::limit_tree_dot(&g),
        What::Scott => dot::scott_dot(&scott::scott_tree(&g)),
    };
    print!("{out}");
    Ok(())
}

fn cmd_fixtures(show: Option<&str>) -> Result<(), Failure> {
    match show {
        Some(name) => {
            let src = fixtures::source(name).ok_or_else(|| Failure::Usage(format!("unknown fixture `{name}`")))?;
            print!("{src}");
        }
        None => {
            for f in fixtures::all() {
                println!("{:<6} {}", f.name, f.description);
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            file,
            no_realize,
            limit_trees,
            seed,
        } => cmd_analyze(&file, no_realize, limit_trees, seed),
        Command::Check {
            file,
            seed,
            count,
            size,
            ..
        } => cmd_check(file.as_deref(), seed, count, size as usize),
        Command::Export { file, what } => cmd_export(&file, what),
        Command::Fixtures { show, .. } => cmd_fixtures(show.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
