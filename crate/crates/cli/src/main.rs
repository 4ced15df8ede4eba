//! `sepvar`: run problem definition files through the solvers and write
//! CSV or JSON tables.

mod registry;
mod spec;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::registry::RunError;
use crate::spec::{apply_overrides, FieldError, Format, ProblemSpecFile};
use crate::table::write_atomic;

#[derive(Parser)]
#[command(name = "sepvar", version, about = "Separation-of-variables solvers for boundary-value problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a spec file.
    Run {
        /// Problem definition (TOML).
        #[arg(long)]
        spec: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a field, e.g. `--set l=2` or `--set output.truncation=10`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output format, overriding the spec file.
        #[arg(long, value_parser = ["csv", "json"])]
        format: Option<String>,
        /// Suppress the summary line on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// List registered problem kinds and their parameters.
    List {
        /// Only kinds whose name contains this text.
        filter: Option<String>,
    },
}

const EXIT_VALIDATION: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_IO: u8 = 1;

enum Failure {
    Validation(FieldError),
    Solver(String),
    Io(String),
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Validation(e) => {
                eprintln!("error: invalid spec: {e}");
                ExitCode::from(EXIT_VALIDATION)
            }
            Failure::Solver(msg) => {
                eprintln!("error: solver failed: {msg}");
                ExitCode::from(EXIT_SOLVER)
            }
            Failure::Io(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(EXIT_IO)
            }
        }
    }
}

fn run(spec: PathBuf, out: Option<PathBuf>, overrides: Vec<String>, format: Option<String>, quiet: bool) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&spec).map_err(|e| Failure::Io(format!("cannot read {}: {e}", spec.display())))?;
    let mut doc: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Failure::Validation(FieldError::new(spec.display().to_string(), e.message().to_string())))?;
    apply_overrides(&mut doc, &overrides).map_err(Failure::Validation)?;
    let mut file = ProblemSpecFile::from_table(&doc).map_err(Failure::Validation)?;
    if let Some(f) = format.as_deref().and_then(Format::parse) {
        file.output.format = f;
    }
    let kind = registry::lookup(&file.kind).ok_or_else(|| {
        let known: Vec<&str> = registry::list(None).iter().map(|k| k.name).collect();
        Failure::Validation(FieldError::new("kind", format!("unknown kind {:?} (known: {})", file.kind, known.join(", "))))
    })?;
    let table = kind.run(&file.parameters, &file.output).map_err(|e| match e {
        RunError::Field(f) => Failure::Validation(f),
        RunError::Solver(s) => Failure::Solver(s.to_string()),
    })?;
    let table = table
        .meta("schema_version", file.schema_version)
        .meta("solver", concat!("sepvar ", env!("CARGO_PKG_VERSION")));
    let rows = table.rows();
    let bytes = table.render(file.output.format).map_err(Failure::Solver)?;
    match &out {
        Some(path) => write_atomic(path, &bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout().write_all(&bytes).map_err(|e| Failure::Io(e.to_string()))?,
    }
    if !quiet {
        let dest = out.map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
        eprintln!("{}: {rows} rows ({}) -> {dest}", file.kind, file.output.format.name());
    }
    Ok(())
}

fn list(filter: Option<String>) {
    let mut out = String::new();
    for kind in registry::list(filter.as_deref()) {
        out.push_str(&format!("{}  {}\n", kind.name, kind.summary));
        for p in kind.params {
            out.push_str(&format!("    {}: {} ({}) {}\n", p.name, p.ty, p.default, p.help));
        }
        out.push_str(&format!("    truncation: {}\n", kind.truncation));
    }
    print!("{out}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            spec,
            out,
            overrides,
            format,
            quiet,
        } => match run(spec, out, overrides, format, quiet) {
            Ok(()) => ExitCode::SUCCESS,
            Err(f) => f.report(),
        },
        Command::List { filter } => {
            list(filter);
            ExitCode::SUCCESS
        }
    }
}
