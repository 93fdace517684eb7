//! `qreality` command-line front end.
//!
//! Coevent expressions use `+` for symmetric difference (XOR) and `*` for
//! product, e.g. `w1 + w2*w3`; `1` is the coevent that is 1 on every nonempty
//! event.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qreality::census::{emit_report, run_census, CensusError, CensusMode, ReportFormat};
use qreality::filters::{
    decide, verdict_to_json, verify_witness, BranchRule, FilterError, FilterMode, GenerationProblem, MeasureSpec,
    SearchOptions, VerdictFile,
};
use qreality::logic::{classify, enumerate_coevents, max_index, Coevent, Event, SampleSpace, TruthFunction};
use qreality::measure::{measure_from_json, QMeasure};

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 4;

#[derive(Parser)]
#[command(name = "qreality", version, about = "Reality filters for quantum measures on finite sample spaces")]
struct Cli {
    /// Worker threads for census runs.
    #[arg(long, global = true, env = "QREALITY_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a coevent on one event; prints 0 or 1.
    Eval {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        coevent: String,
        #[arg(long)]
        event: String,
    },
    /// Print class flags for one coevent, or for every coevent of an n-element space.
    Classify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        coevent: Option<String>,
    },
    /// Decide whether a coevent is generated or actualized.
    Check {
        #[arg(long, value_parser = parse_mode)]
        mode: FilterMode,
        #[arg(long)]
        coevent: String,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Write the verdict file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Classify and filter every coevent of an n-element space.
    Census {
        #[arg(long)]
        n: usize,
        /// Comma-separated: classify, gen1, gen2, actualize.
        #[arg(long, value_delimiter = ',', default_value = "classify")]
        modes: Vec<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-check a verdict file's witness by direct integration; prints OK or FAIL.
    Verify {
        verdict: PathBuf,
        /// Defaults to the coevent recorded in the verdict file.
        #[arg(long)]
        coevent: Option<String>,
        /// Defaults to the mode recorded in the verdict file.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<FilterMode>,
        #[command(flatten)]
        measure: MeasureArgs,
    },
}

#[derive(Args)]
struct MeasureArgs {
    /// Measure file (full event table, or singletons and pairs).
    #[arg(long, conflicts_with = "existential")]
    measure: Option<PathBuf>,
    /// Quantify over all q-measures instead of fixing one.
    #[arg(long)]
    existential: bool,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = Rule::WeakOrder)]
    rule: Rule,
    #[arg(long, default_value_t = SearchOptions::default().max_branches)]
    max_branches: u64,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        let rule = match self.rule {
            Rule::WeakOrder => BranchRule::WeakOrder,
            Rule::ClosedCones => BranchRule::ClosedCones,
        };
        SearchOptions { max_branches: self.max_branches, rule }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    WeakOrder,
    ClosedCones,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

fn parse_mode(s: &str) -> Result<FilterMode, String> {
    s.parse::<FilterMode>().map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<FilterError> for Failure {
    fn from(e: FilterError) -> Self {
        let code = if matches!(e, FilterError::BranchLimit { .. }) { EXIT_GUARD } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        let code = match e {
            CensusError::Guard(_) | CensusError::Filter(FilterError::BranchLimit { .. }) => EXIT_GUARD,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_measure(path: &Path) -> Result<QMeasure, Failure> {
    measure_from_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_coevent(expr: &str, n: Option<usize>) -> Result<Coevent, Failure> {
    let n = match n {
        Some(n) => n,
        None => max_index(expr).map_err(Failure::input)?.max(1),
    };
    let space = SampleSpace::new(n).map_err(Failure::input)?;
    Coevent::parse(space, expr).map_err(Failure::input)
}

/// Resolves the measure flags against a coevent expression.
fn problem(expr: &str, mode: FilterMode, args: &MeasureArgs) -> Result<GenerationProblem, Failure> {
    match &args.measure {
        Some(path) => {
            let mu = load_measure(path)?;
            let n = mu.space().n();
            if args.n.is_some_and(|k| k != n) {
                return Err(Failure::input(format!("--n {} disagrees with the {n}-element measure", args.n.unwrap())));
            }
            let phi = parse_coevent(expr, Some(n))?;
            Ok(GenerationProblem::new(phi, mode, MeasureSpec::Fixed(mu))?)
        }
        None if args.existential => Ok(GenerationProblem::existential(parse_coevent(expr, args.n)?, mode)),
        None => Err(Failure::input("either --measure or --existential is required")),
    }
}

fn flags(phi: &Coevent) -> String {
    let c = classify(phi);
    format!(
        "classical={} unital={} additive={} multiplicative={} quadratic={}",
        c.classical, c.unital, c.additive, c.multiplicative, c.quadratic
    )
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match cli.command {
        Command::Eval { n, coevent, event } => {
            let phi = parse_coevent(&coevent, n)?;
            let a: Event = event.parse().map_err(Failure::input)?;
            phi.space().check_event(a).map_err(Failure::input)?;
            println!("{}", u8::from(phi.value(a)));
        }
        Command::Classify { n, coevent } => match coevent {
            Some(expr) => println!("{}", flags(&parse_coevent(&expr, n)?)),
            None => {
                let n = n.ok_or_else(|| Failure::input("either --coevent or --n is required"))?;
                let space = SampleSpace::new(n).map_err(Failure::input)?;
                let all = enumerate_coevents(space, None).map_err(Failure::input)?;
                for phi in all {
                    println!("{} {} {}", phi.index(), flags(&phi), phi);
                }
            }
        },
        Command::Check { mode, coevent, measure, out, search } => {
            let p = problem(&coevent, mode, &measure)?;
            let verdict = decide(&p, &search.options())?;
            if let Some(path) = out {
                let mut text = verdict_to_json(&verdict, Some(p.phi()));
                text.push('\n');
                write(&path, text.as_bytes())?;
            }
            println!("{}", if verdict.is_feasible() { "FEASIBLE" } else { "INFEASIBLE" });
            println!("branches_explored={}", verdict.branches_explored);
        }
        Command::Census { n, modes, format, out, search } => {
            let modes = modes.iter().map(|m| m.parse::<CensusMode>()).collect::<Result<Vec<_>, _>>()?;
            let report = run_census(n, &modes, &search.options(), jobs)?;
            let fmt = match format.unwrap_or(Format::Json) {
                Format::Json => ReportFormat::Json,
                Format::Csv => ReportFormat::Csv,
                Format::Markdown => ReportFormat::Markdown,
            };
            let a = &report.aggregates;
            let mut line = format!(
                "total={} classical={} unital={} additive={} multiplicative={} quadratic={}",
                a.total, a.classical, a.unital, a.additive, a.multiplicative, a.quadratic
            );
            for (name, v) in [("gen1", a.gen1), ("gen2", a.gen2), ("actualized", a.actualized)] {
                if let Some(v) = v {
                    line.push_str(&format!(" {name}={v}"));
                }
            }
            match (out, format) {
                (Some(path), _) => {
                    write(&path, &emit_report(&report, fmt))?;
                    println!("{line}");
                }
                (None, Some(_)) => print!("{}", String::from_utf8_lossy(&emit_report(&report, fmt))),
                (None, None) => println!("{line}"),
            }
        }
        Command::Verify { verdict, coevent, mode, measure } => {
            let file: VerdictFile = serde_json::from_str(&read(&verdict)?)
                .map_err(|e| Failure::input(format!("{}: {e}", verdict.display())))?;
            let expr = coevent
                .or_else(|| file.coevent.clone())
                .ok_or_else(|| Failure::input("verdict file names no coevent; pass --coevent"))?;
            let mode = mode.unwrap_or(file.mode);
            let margs = MeasureArgs {
                existential: measure.existential || measure.measure.is_none(),
                measure: measure.measure,
                n: measure.n.or(file.n),
            };
            let p = problem(&expr, mode, &margs)?;
            let v = file.into_verdict()?;
            if !v.is_feasible() {
                return Err(Failure::input("verdict is infeasible; there is no witness to verify"));
            }
            let ok = verify_witness(&v, &p);
            println!("{}", if ok { "OK" } else { "FAIL" });
            return Ok(if ok { 0 } else { EXIT_VERIFY });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
