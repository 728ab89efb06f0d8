//! `hironaka`: characteristic polyhedra, the resolution invariant and CJS resolution traces for
//! polynomial jobs given as JSON.
//!
//! Exit codes: 0 success, 2 input error, 3 scope error (or an unfinished resolution), 4
//! monotonicity failure.

mod job;
mod run;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::job::Job;
use hironaka::cjs_driver::check_monotone;

use crate::run::{exit_code, export_dot, parse_trace, run_job, JobCommand, EXIT_INPUT, EXIT_MONOTONE, EXIT_OK};

#[derive(Parser)]
#[command(name = "hironaka", version, about = "Characteristic polyhedra and CJS resolution invariants of surface singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ν*, directrix dimensions e and e^O, the maximal stratum with labels and the case tag.
    Analyze(JobArgs),
    /// Prepared characteristic polyhedron with vertices, δ, face numbers, σ and the solving log.
    Polyhedron(JobArgs),
    /// The invariant ι = (ι₀, ι_c, ι_poly) at the origin.
    Invariant(JobArgs),
    /// Blows up a center (the closed point by default) and reports the child charts.
    Blowup(JobArgs),
    /// Runs the resolution loop and checks that ι decreases above every center.
    Resolve(ResolveArgs),
    /// Converts a stored trace into DOT or JSON.
    Export(ExportArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Job file (JSON); standard input when omitted or "-".
    job: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Maximal number of solved vertices during preparation.
    #[arg(long)]
    prepare_budget: Option<usize>,
    /// Maximal number of straightening steps in the σ search.
    #[arg(long)]
    sigma_budget: Option<usize>,
}

#[derive(Args)]
struct ResolveArgs {
    #[command(flatten)]
    job: JobArgs,
    /// Maximal number of blow-ups along one branch.
    #[arg(long)]
    max_steps: Option<u32>,
    /// Maximal total number of blow-ups.
    #[arg(long)]
    max_events: Option<usize>,
    /// Components in a new exceptional divisor do not inherit the label of the center.
    #[arg(long)]
    no_inherit: bool,
    /// Also write the bare trace document here, for `export`.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    /// Trace file written by `resolve`; standard input when omitted or "-".
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    /// Re-run the monotonicity check on the stored trace; exit 4 when it fails.
    #[arg(long)]
    check: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| format!("{}: {}", p.display(), e)),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| format!("standard input: {}", e))?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {}", p.display(), e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| format!("standard output: {}", e)),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize to JSON");
    s.push('\n');
    s
}

fn fail(code: i32, msg: &str) -> i32 {
    eprintln!("error: {}", msg);
    code
}

fn run_job_command(args: &JobArgs, cmd: JobCommand, resolve: Option<&ResolveArgs>) -> i32 {
    let text = match read_input(&args.job) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INPUT, &e),
    };
    let job: Job = match serde_json::from_str(&text) {
        Ok(j) => j,
        Err(e) => return fail(EXIT_INPUT, &format!("job: {}", e)),
    };
    let mut opts = job.options.resolve_options();
    if let Some(b) = args.prepare_budget {
        opts.iota.prepare_budget = b;
    }
    if let Some(b) = args.sigma_budget {
        opts.iota.sigma_budget = b;
    }
    if let Some(r) = resolve {
        if let Some(m) = r.max_steps {
            opts.max_steps = m;
        }
        if let Some(m) = r.max_events {
            opts.max_events = m;
        }
        if r.no_inherit {
            opts.labelling = hironaka::cjs_driver::LabelMode::NoInherit;
        }
    }
    let outcome = match run_job(&job, cmd, &opts) {
        Ok(o) => o,
        Err(e) => return fail(exit_code(&e), &e.to_string()),
    };
    if let (Some(r), Some(trace)) = (resolve, &outcome.trace) {
        if let Some(path) = &r.trace_out {
            if let Err(e) = write_output(&Some(path.clone()), &pretty(trace)) {
                return fail(EXIT_INPUT, &e);
            }
        }
    }
    if let Err(e) = write_output(&args.output, &pretty(&outcome.doc)) {
        return fail(EXIT_INPUT, &e);
    }
    if outcome.code != EXIT_OK {
        let reason = outcome.doc.get("monotonicity").and_then(|m| m.get("ok")).and_then(|ok| ok.as_bool());
        match reason {
            Some(false) => eprintln!("error: the invariant does not decrease at a tracked point"),
            _ => eprintln!("error: the resolution did not finish: {}", outcome.doc["trace"]["message"].as_str().unwrap_or("unknown reason")),
        }
    }
    outcome.code
}

fn export(args: &ExportArgs) -> i32 {
    let text = match read_input(&args.trace) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INPUT, &e),
    };
    let doc = match parse_trace(&text) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_INPUT, &e),
    };
    let out = match args.format {
        Format::Dot => export_dot(&doc),
        Format::Json => pretty(&doc),
    };
    if let Err(e) = write_output(&args.output, &out) {
        return fail(EXIT_INPUT, &e);
    }
    if args.check {
        let report = check_monotone(&doc);
        if let Some(f) = &report.failure {
            eprintln!("{}", pretty(f).trim_end());
            return fail(EXIT_MONOTONE, &format!("ι does not decrease from chart {} to chart {} (event {})", f.parent, f.child, f.event));
        }
    }
    EXIT_OK
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Analyze(a) => run_job_command(a, JobCommand::Analyze, None),
        Command::Polyhedron(a) => run_job_command(a, JobCommand::Polyhedron, None),
        Command::Invariant(a) => run_job_command(a, JobCommand::Invariant, None),
        Command::Blowup(a) => run_job_command(a, JobCommand::Blowup, None),
        Command::Resolve(r) => run_job_command(&r.job, JobCommand::Resolve, Some(r)),
        Command::Export(e) => export(e),
    };
    ExitCode::from(code as u8)
}
