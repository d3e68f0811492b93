use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use posilab::report::{error_json, exit_code, run, Options, ReportEnvelope};
use posilab::scalar::{set_eps, EPS_ENV};
use posilab::{Backend, Error, MapSpec};
use serde_json::{json, Value as Json};

/// Posinormality, coposinormality and hyponormality of composition operators
/// with linear-fractional symbols.
#[derive(Parser, Debug)]
#[command(name = "posilab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one map, given as a descriptor or a JSON line.
    Analyze {
        spec: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Classify every line of a JSON-lines file, one report per line.
    Batch {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Debug)]
struct Flags {
    /// Rational arithmetic (default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Floating-point arithmetic with tolerance from POSILAB_EPS.
    #[arg(long)]
    float: bool,
    /// Run finite-section checks over a ladder of section sizes.
    #[arg(
        long,
        value_name = "N,..",
        num_args = 0..=1,
        require_equals = true,
        value_delimiter = ',',
        default_missing_values = ["16", "32", "64", "128"]
    )]
    verify: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write each residual trace as CSV into this directory; implies --verify.
    #[arg(long, value_name = "PATH")]
    csv_dir: Option<PathBuf>,
    /// Omit timing so identical inputs give identical bytes.
    #[arg(long)]
    canonical: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

const DEFAULT_LADDER: [usize; 4] = [16, 32, 64, 128];

impl Flags {
    fn options(&self) -> Options {
        let backend = if self.float { Backend::Float } else { Backend::Exact };
        let ladder = match (&self.verify, &self.csv_dir) {
            (Some(l), _) => Some(l.clone()),
            (None, Some(_)) => Some(DEFAULT_LADDER.to_vec()),
            (None, None) => None,
        };
        Options { backend, ladder }
    }

    fn render(&self, env: &ReportEnvelope, pretty: bool) -> String {
        match self.format {
            Format::Json => {
                let v = env.to_json(self.canonical);
                let s = if pretty { serde_json::to_string_pretty(&v) } else { serde_json::to_string(&v) };
                s.expect("report serializes")
            }
            Format::Text => {
                let mut t = env.to_text();
                if !self.canonical {
                    t.push_str(&format!("timing: {:.3} ms\n", env.timing_ms));
                }
                t.trim_end().to_string()
            }
        }
    }
}

fn fail(kind: &str, message: impl Into<String>) -> Json {
    json!({"error": {"kind": kind, "message": message.into()}})
}

fn emit_error(v: &Json, code: u8) -> ExitCode {
    eprintln!("{v}");
    ExitCode::from(code)
}

fn write_csv(dir: &Path, prefix: &str, env: &ReportEnvelope) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for t in env.numerics.iter().flatten() {
        fs::write(dir.join(format!("{prefix}{}.csv", t.name)), t.to_csv())?;
    }
    Ok(())
}

fn analyze(spec: &str, flags: &Flags) -> ExitCode {
    let result = MapSpec::from_line(spec).and_then(|s| run(&s, &flags.options()));
    let env = match result {
        Ok(env) => env,
        Err(e) => {
            let mut v = error_json(&e);
            v["input"] = json!(spec);
            return emit_error(&v, exit_code(&e) as u8);
        }
    };
    if let Some(dir) = &flags.csv_dir {
        if let Err(e) = write_csv(dir, "", &env) {
            return emit_error(&fail("IoError", format!("{}: {e}", dir.display())), 1);
        }
    }
    println!("{}", flags.render(&env, true));
    ExitCode::SUCCESS
}

enum Line {
    Report(Box<ReportEnvelope>),
    Failed(Error),
}

fn run_line(text: &str, options: &Options) -> Line {
    match MapSpec::from_line(text).and_then(|s| run(&s, options)) {
        Ok(env) => Line::Report(Box::new(env)),
        Err(e) => Line::Failed(e),
    }
}

/// Runs every line on a pool of scoped threads and returns results in input order.
fn run_all(lines: &[(usize, &str)], options: &Options) -> Vec<Line> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(lines.len().max(1));
    let mut out: Vec<(usize, Line)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|id| {
                s.spawn(move || {
                    (id..lines.len()).step_by(workers).map(|i| (i, run_line(lines[i].1, options))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, l)| l).collect()
}

fn batch(path: &Path, flags: &Flags) -> ExitCode {
    let content = match fs::read_to_string(path) {
        Ok(c) => c,
        Err(e) => return emit_error(&fail("IoError", format!("{}: {e}", path.display())), 1),
    };
    let lines: Vec<(usize, &str)> =
        content.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
    let options = flags.options();
    let results = run_all(&lines, &options);

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut mismatch = false;
    for (&(k, text), result) in lines.iter().zip(&results) {
        let rendered = match result {
            Line::Report(env) => {
                if let Some(dir) = &flags.csv_dir {
                    if let Err(e) = write_csv(dir, &format!("line{k}_"), env) {
                        return emit_error(&fail("IoError", format!("{}: {e}", dir.display())), 1);
                    }
                }
                let r = flags.render(env, false);
                match flags.format {
                    Format::Json => r,
                    Format::Text => format!("# line {k}\n{r}\n"),
                }
            }
            Line::Failed(e) => {
                mismatch |= matches!(e, Error::CrossCheckMismatch(_));
                match flags.format {
                    Format::Json => {
                        let mut v = error_json(e);
                        v["line"] = json!(k);
                        v["input"] = json!(text);
                        v.to_string()
                    }
                    Format::Text => format!("# line {k}\nerror: {}: {e}\n", e.kind()),
                }
            }
        };
        if writeln!(out, "{rendered}").is_err() {
            return ExitCode::from(1);
        }
    }
    if mismatch {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return emit_error(&fail("UsageError", e.render().to_string().trim_end()), 1),
    };
    if let Ok(raw) = std::env::var(EPS_ENV) {
        match raw.trim().parse::<f64>() {
            Ok(e) if e.is_finite() && e >= 0.0 => set_eps(e),
            _ => {
                return emit_error(
                    &fail("UsageError", format!("{EPS_ENV} must be a nonnegative number, got {raw:?}")),
                    1,
                )
            }
        }
    }
    match &cli.command {
        Command::Analyze { spec, flags } => analyze(spec, flags),
        Command::Batch { file, flags } => batch(file, flags),
    }
}
