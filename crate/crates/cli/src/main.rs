use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gencps::sample::DEFAULT_SEED;
use gencps_cli::{check_source, DEFAULT_MAX_DEGREE};

#[derive(Parser)]
#[command(
    name = "gencps",
    version,
    about = "Exact checker for generalized c.p.s. structure documents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a document and report the results.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn max_degree() -> Result<u32, String> {
    match std::env::var("GENCPS_MAX_DEGREE") {
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("GENCPS_MAX_DEGREE must be a non-negative integer, found '{v}'")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    let Command::Check {
        file,
        seed,
        format,
        out,
    } = cli.command;
    let limit = match max_degree() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let report = match check_source(&text, seed, limit) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let rendered = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => report.to_text(),
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID);
            }
        }
        None => print!("{rendered}"),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}
