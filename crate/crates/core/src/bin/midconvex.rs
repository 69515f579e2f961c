use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use midconvex::dsl::{execute, parse, Format, RunOptions};

#[derive(Parser)]
#[command(
    name = "midconvex",
    version,
    about = "Decide, close and decompose midconvex sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a program read from FILE, from -e, or from standard input.
    Run {
        file: Option<PathBuf>,
        #[arg(short = 'e', long = "expr", conflicts_with = "file")]
        expr: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Include elapsed time in the report.
        #[arg(long)]
        timing: bool,
        /// Worker threads for verification campaigns.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Parse a program and print it in normal form.
    Parse {
        file: Option<PathBuf>,
        #[arg(short = 'e', long = "expr", conflicts_with = "file")]
        expr: Option<String>,
    },
}

fn source(file: Option<PathBuf>, expr: Option<String>) -> Result<String, String> {
    if let Some(e) = expr {
        return Ok(e);
    }
    match file {
        Some(path) => {
            std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| e.to_string())?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run {
            file,
            expr,
            format,
            timing,
            jobs,
        } => {
            if let Some(n) = jobs {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            let src = match source(file, expr) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let opts = RunOptions {
                format: match format {
                    FormatArg::Text => Format::Text,
                    FormatArg::Json => Format::Json,
                },
                timing,
            };
            let (code, out, err) = execute(&src, &opts);
            print!("{out}");
            eprint!("{err}");
            ExitCode::from(code as u8)
        }
        Cmd::Parse { file, expr } => {
            let parsed = source(file, expr).and_then(|s| parse(&s).map_err(|e| e.to_string()));
            match parsed {
                Ok(p) => {
                    println!("{p}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
