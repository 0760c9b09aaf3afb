use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use okounkov::scalar::parse_fraction;
use okounkov::Rational;
use okounkov_cli::{run, Command, FlagSpec, JobSpec};

/// Exact Newton–Okounkov bodies of graded linear series.
#[derive(Debug, Parser)]
#[command(name = "okounkov", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Series (or surface) description in JSON.
    input: PathBuf,
    /// Truncation degree.
    #[arg(long = "K", default_value_t = 6)]
    truncation: usize,
    /// identity, seed:N or matrix:[[…]].
    #[arg(long, default_value = "identity")]
    flag: FlagSpec,
    /// Slice height `a/b` for `slice`.
    #[arg(long, value_parser = parse_rational)]
    t: Option<Rational>,
    /// Number of random flags for `generic-test`.
    #[arg(long = "flags", default_value_t = 5)]
    flag_count: usize,
    /// First seed for `generic-test`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Degrees for `fujita`.
    #[arg(long = "p", value_delimiter = ',', default_values_t = [1usize, 2, 4])]
    fujita_degrees: Vec<usize>,
    /// Bound on |σ| for `filtered-dims`.
    #[arg(long, default_value_t = 4)]
    sigma_max: u32,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write an SVG figure.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    parse_fraction(s).ok_or_else(|| format!("`{s}` is not a rational p/q"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let job = JobSpec {
        command: args.command,
        input: args.input,
        truncation: args.truncation,
        flag: args.flag,
        output: args.out,
        emit_svg: args.svg,
        t: args.t,
        flag_count: args.flag_count,
        seed: args.seed,
        fujita_degrees: args.fujita_degrees,
        sigma_max: args.sigma_max,
    };
    match run(&job) {
        Ok(envelope) => {
            let text = envelope.to_json();
            match &job.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
