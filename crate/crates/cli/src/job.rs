use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use okounkov::scalar::parse_fraction;
use okounkov::{Flag, RatMatrix, Rational};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Command {
    Body,
    Slice,
    Volume,
    Sheafify,
    BaseLocus,
    Birational,
    Surface,
    GenericTest,
    FilteredDims,
    Fujita,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Body => "body",
            Command::Slice => "slice",
            Command::Volume => "volume",
            Command::Sheafify => "sheafify",
            Command::BaseLocus => "base-locus",
            Command::Birational => "birational",
            Command::Surface => "surface",
            Command::GenericTest => "generic-test",
            Command::FilteredDims => "filtered-dims",
            Command::Fujita => "fujita",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `identity`, `seed:N`, or `matrix:[[a, b, …], …]` with entries written as `"p/q"` or integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum FlagSpec {
    #[default]
    Identity,
    Seed(u64),
    Matrix(Vec<Vec<Rational>>),
}

impl FlagSpec {
    pub fn build(&self, ambient_dim: usize) -> Result<Flag, CliError> {
        match self {
            FlagSpec::Identity => Ok(Flag::standard(ambient_dim)),
            FlagSpec::Seed(seed) => Ok(Flag::random(ambient_dim, *seed)),
            FlagSpec::Matrix(rows) => {
                let n = ambient_dim + 1;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Argument(format!("flag matrix must be {n}x{n}")));
                }
                Flag::from_matrix(RatMatrix::from_rows(rows.clone()), "matrix")
                    .map_err(|e| CliError::Argument(e.to_string()))
            }
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            FlagSpec::Seed(s) => Some(*s),
            _ => None,
        }
    }
}

impl FromStr for FlagSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "identity" {
            return Ok(FlagSpec::Identity);
        }
        if let Some(seed) = s.strip_prefix("seed:") {
            return seed.parse().map(FlagSpec::Seed).map_err(|e| format!("bad seed: {e}"));
        }
        if let Some(json) = s.strip_prefix("matrix:") {
            let rows: Vec<Vec<serde_json::Value>> =
                serde_json::from_str(json).map_err(|e| format!("bad matrix: {e}"))?;
            let entry = |v: &serde_json::Value| -> Result<Rational, String> {
                let text = match v {
                    serde_json::Value::String(t) => t.clone(),
                    serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
                    other => return Err(format!("matrix entry {other} is not an integer or \"p/q\" string")),
                };
                parse_fraction(&text).ok_or_else(|| format!("bad matrix entry {text}"))
            };
            let parsed = rows
                .iter()
                .map(|r| r.iter().map(entry).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(FlagSpec::Matrix(parsed));
        }
        Err(format!("unknown flag `{s}`: expected identity, seed:N or matrix:[[…]]"))
    }
}

impl fmt::Display for FlagSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlagSpec::Identity => f.write_str("identity"),
            FlagSpec::Seed(s) => write!(f, "seed:{s}"),
            FlagSpec::Matrix(rows) => {
                let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                write!(f, "matrix:{}", serde_json::to_string(&text).expect("strings serialize"))
            }
        }
    }
}

/// One invocation of the tool.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub input: PathBuf,
    pub truncation: usize,
    pub flag: FlagSpec,
    pub output: Option<PathBuf>,
    pub emit_svg: Option<PathBuf>,
    /// Slice height for `slice`.
    pub t: Option<Rational>,
    /// Number of random flags for `generic-test`, seeded `seed, seed + 1, …`.
    pub flag_count: usize,
    pub seed: u64,
    /// Degrees for `fujita`.
    pub fujita_degrees: Vec<usize>,
    /// Bound on `|σ|` for `filtered-dims`.
    pub sigma_max: u32,
}

impl JobSpec {
    pub fn new(command: Command, input: impl Into<PathBuf>, truncation: usize) -> Self {
        Self {
            command,
            input: input.into(),
            truncation,
            flag: FlagSpec::Identity,
            output: None,
            emit_svg: None,
            t: None,
            flag_count: 5,
            seed: 1,
            fujita_degrees: vec![1, 2, 4],
            sigma_max: 4,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.truncation == 0 {
            return Err(CliError::Argument("--K must be at least 1".into()));
        }
        if self.command == Command::Slice && self.t.is_none() {
            return Err(CliError::Argument("slice needs --t".into()));
        }
        if self.command == Command::GenericTest && self.flag_count < 2 {
            return Err(CliError::Argument("generic-test needs at least two flags".into()));
        }
        if self.fujita_degrees.contains(&0) {
            return Err(CliError::Argument("Fujita degrees must be positive".into()));
        }
        Ok(())
    }

    /// Every parameter that influences the result, in a fixed textual form.
    pub fn canonical_parameters(&self) -> String {
        let t = self.t.as_ref().map(ToString::to_string).unwrap_or_default();
        let degrees: Vec<String> = self.fujita_degrees.iter().map(ToString::to_string).collect();
        format!(
            "command={};K={};flag={};t={};flags={};seed={};p={};sigma={}",
            self.command,
            self.truncation,
            self.flag,
            t,
            self.flag_count,
            self.seed,
            degrees.join(","),
            self.sigma_max
        )
    }
}
