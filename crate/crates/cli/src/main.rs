use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use divmod::corpus::{builtin, load_dir, verify_entries};
use divmod::job::{format_report, run, to_json, Command, JobSpec};
use divmod::{Error, MonomialOrder};
use serde_json::Value;

/// Divisors, Bourbaki ideals and Rees-algebra invariants of modules over
/// polynomial rings.
#[derive(Debug, Parser)]
#[command(name = "divmod", version)]
struct Cli {
    /// Job file (JSON); a corpus entry is accepted too. Reads stdin when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Seed for generic specializations; overrides the job file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest reduction number tried; overrides the job file.
    #[arg(long, global = true)]
    rmax: Option<usize>,
    /// Monomial order of the ring; overrides the job file.
    #[arg(long, global = true)]
    order: Option<OrderArg>,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// The i-th Fitting ideal.
    Fitting {
        #[arg(long)]
        index: usize,
    },
    /// The order determinant det0(E).
    Det0,
    /// A norm representative I_{n-e}(rho).
    Norm,
    /// The psi submatrix and its ideal of maximal minors.
    Psi,
    /// A generic Bourbaki ideal with certificates.
    Bourbaki,
    /// Defining ideal of the Rees algebra.
    Rees,
    /// Fiber cone and its dimension.
    Fiber,
    /// Analytic spread.
    Spread,
    /// Reduction number of the submodule spanned by the given columns.
    Reduction {
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        u: Option<Vec<usize>>,
    },
    /// Numerical invariants and the equimultiple / principal class flags.
    Classify,
    /// Zak-type inequalities for the analytic spread.
    Zak,
    /// The ideal cutting out the non-free locus.
    NonfreeLocus,
    /// Runs the command named in the job file.
    Run,
    /// Checks the shipped corpus, or the JSON files of a directory.
    VerifyCorpus {
        /// Only the checks carrying this tag.
        filter: Option<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load_job(src: &str) -> Result<JobSpec, Error> {
    let v: Value = serde_json::from_str(src).map_err(|e| Error::Input(e.to_string()))?;
    let job = match v.get("job") {
        Some(inner) if v.get("expected").is_some() => inner.clone(),
        _ => v,
    };
    serde_json::from_value(job).map_err(|e| Error::Input(e.to_string()))
}

fn emit(report: &Value, format: Format) {
    match format {
        Format::Json => print!("{}", to_json(report)),
        Format::Text => print!("{}", format_report(report)),
    }
}

fn execute(cli: &Cli) -> Result<bool, Error> {
    if let Cmd::VerifyCorpus { filter, corpus } = &cli.command {
        let entries = match corpus {
            Some(dir) => load_dir(dir)?,
            None => builtin(),
        };
        let summary = verify_entries(&entries, filter.as_deref(), cli.seed)?;
        match cli.format {
            Format::Json => print!("{}", to_json(&serde_json::to_value(&summary).expect("summary serializes"))),
            Format::Text => print!("{}", summary.render()),
        }
        return Ok(summary.passed);
    }
    let mut job = load_job(&read_input(cli.input.as_ref())?)?;
    let command = match &cli.command {
        Cmd::Fitting { index } => {
            job.options.index = Some(*index);
            Command::Fitting
        }
        Cmd::Det0 => Command::Det0,
        Cmd::Norm => Command::Norm,
        Cmd::Psi => Command::Psi,
        Cmd::Bourbaki => Command::Bourbaki,
        Cmd::Rees => Command::Rees,
        Cmd::Fiber => Command::Fiber,
        Cmd::Spread => Command::Spread,
        Cmd::Reduction { u } => {
            if let Some(u) = u {
                job.reduction = Some(u.clone());
            }
            Command::Reduction
        }
        Cmd::Classify => Command::Classify,
        Cmd::Zak => Command::Zak,
        Cmd::NonfreeLocus => Command::NonfreeLocus,
        Cmd::Run => job.command.ok_or_else(|| Error::Input("the job file names no command".into()))?,
        Cmd::VerifyCorpus { .. } => unreachable!("handled above"),
    };
    job.command = Some(command);
    if let Some(s) = cli.seed {
        job.options.seed = s;
    }
    if let Some(r) = cli.rmax {
        job.options.rmax = r;
    }
    if let Some(o) = cli.order {
        job.options.order = Some(match o {
            OrderArg::Grevlex => MonomialOrder::Grevlex,
            OrderArg::Lex => MonomialOrder::Lex,
        });
    }
    emit(&run(&job)?, cli.format);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
