use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tubed_core::moves::DEFAULT_GRAPH_CAP;
use tubed_core::oracle::DEFAULT_ORACLE_CAP;
use tubed_core::{BridgeParams, IndexSet};

use crate::CliError;

/// Largest `n` for which `enumerate`, batch `classify` and batch `tunnels`
/// run without the acknowledge flag.
pub const DEFAULT_BATCH_CAP: u32 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "tubed",
    version,
    about = "Tubed Heegaard surfaces of high-distance bridge knots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// List every index for a bridge number.
    Enumerate,
    /// Build the tubed surface of an index and cross-check it against the oracle.
    Pair,
    /// Report which side of the surface the knot lies on.
    Classify,
    /// List compression moves out of a surface, or apply one.
    Moves,
    /// Build the full move graph.
    Graph,
    /// Shortest compression path between two indices.
    Path,
    /// Split a surface into chunks.
    Chunks,
    /// Tunnel system of a surface.
    Tunnels,
    /// Genus and stable-genus bounds.
    Bounds,
    /// Run the invariant suites for every n up to --n.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Enumerate => "enumerate",
            Command::Pair => "pair",
            Command::Classify => "classify",
            Command::Moves => "moves",
            Command::Graph => "graph",
            Command::Path => "path",
            Command::Chunks => "chunks",
            Command::Tunnels => "tunnels",
            Command::Bounds => "bounds",
            Command::Verify => "verify",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Dot,
    Csv,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct Options {
    /// Bridge number (for `verify`, the largest n checked; default 4).
    #[arg(long, global = true)]
    pub n: Option<u32>,

    /// Comma-separated tube start punctures, e.g. 1,3,5.
    #[arg(long, global = true)]
    pub index: Option<String>,

    /// Target index for `path`.
    #[arg(long, global = true)]
    pub target: Option<String>,

    /// Distance, or a comma-separated list of distances for `bounds`.
    #[arg(long, global = true)]
    pub d: Option<String>,

    /// Move to apply with `moves`, as i,j.
    #[arg(long, global = true)]
    pub apply: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP, global = true)]
    pub oracle_cap: u32,

    #[arg(long, default_value_t = DEFAULT_GRAPH_CAP, global = true)]
    pub graph_cap: u32,

    /// Permit caps above their defaults.
    #[arg(long, global = true)]
    pub allow_large_caps: bool,
}

/// The validated command, echoed into every document.
#[derive(Debug, Clone, Serialize)]
pub struct Invocation {
    pub subcommand: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub d: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apply: Option<[u32; 2]>,
    pub format: Format,
    pub oracle_cap: u32,
    pub graph_cap: u32,
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl Invocation {
    /// Canonical command line for the provenance comment.
    pub fn echo(&self) -> String {
        let mut parts = vec![self.subcommand.name().to_string()];
        if let Some(n) = self.n {
            parts.push(format!("--n {n}"));
        }
        if let Some(i) = &self.index {
            parts.push(format!("--index {}", join(i)));
        }
        if let Some(t) = &self.target {
            parts.push(format!("--target {}", join(t)));
        }
        if !self.d.is_empty() {
            parts.push(format!("--d {}", join(&self.d)));
        }
        if let Some([i, j]) = self.apply {
            parts.push(format!("--apply {i},{j}"));
        }
        parts.push(format!("--format {}", self.format.name()));
        parts.push(format!("--oracle-cap {}", self.oracle_cap));
        parts.push(format!("--graph-cap {}", self.graph_cap));
        parts.join(" ")
    }

    pub fn params(&self) -> Result<BridgeParams, CliError> {
        let n = self.n.ok_or_else(|| CliError::usage("--n is required"))?;
        Ok(BridgeParams::new(n)?)
    }

    pub fn index_set(&self) -> Result<Option<IndexSet>, CliError> {
        self.index.as_ref().map(|i| self.to_set(i)).transpose()
    }

    pub fn target_set(&self) -> Result<Option<IndexSet>, CliError> {
        self.target.as_ref().map(|i| self.to_set(i)).transpose()
    }

    fn to_set(&self, values: &[u32]) -> Result<IndexSet, CliError> {
        Ok(IndexSet::new(&self.params()?, values.iter().copied())?)
    }
}

fn parse_list<T: std::str::FromStr>(flag: &str, raw: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(str::trim)
        .map(|s| {
            s.parse::<T>().map_err(|_| {
                CliError::usage(format!("--{flag}: '{s}' is not a non-negative integer"))
            })
        })
        .collect()
}

/// Sort and deduplicate, then insist on exactly `n` distinct punctures in range.
pub fn parse_index(flag: &str, raw: &str, n: u32) -> Result<Vec<u32>, CliError> {
    let mut values: Vec<u32> = parse_list(flag, raw)?;
    values.sort_unstable();
    values.dedup();
    if values.len() != n as usize {
        return Err(CliError::usage(format!(
            "--{flag} must list exactly {n} distinct punctures for n = {n}, got {} ({})",
            values.len(),
            join(&values)
        )));
    }
    if let Some(bad) = values.iter().find(|&&v| v == 0 || v > 2 * n) {
        return Err(CliError::usage(format!(
            "--{flag}: puncture {bad} is outside 1..={}",
            2 * n
        )));
    }
    Ok(values)
}

fn check_cap(name: &str, value: u32, default: u32, allowed: bool) -> Result<(), CliError> {
    if value > default && !allowed {
        return Err(CliError::usage(format!(
            "--{name} {value} exceeds the default {default}; pass --allow-large-caps to confirm"
        )));
    }
    Ok(())
}

/// Check every argument the subcommand needs before any computation runs.
pub fn validate(command: Command, opts: &Options) -> Result<Invocation, CliError> {
    check_cap(
        "oracle-cap",
        opts.oracle_cap,
        DEFAULT_ORACLE_CAP,
        opts.allow_large_caps,
    )?;
    check_cap(
        "graph-cap",
        opts.graph_cap,
        DEFAULT_GRAPH_CAP,
        opts.allow_large_caps,
    )?;

    let n = match (command, opts.n) {
        (Command::Verify, None) => Some(4),
        (_, Some(n)) => Some(n),
        (_, None) => return Err(CliError::usage(format!("{} requires --n", command.name()))),
    };
    let n_val = n.unwrap();
    if n_val < 2 {
        return Err(CliError::usage(format!(
            "--n must be at least 2, got {n_val}"
        )));
    }

    let needs_index = matches!(
        command,
        Command::Pair | Command::Moves | Command::Path | Command::Chunks
    );
    let takes_index = needs_index || matches!(command, Command::Classify | Command::Tunnels);
    let index = match (&opts.index, takes_index) {
        (Some(raw), true) => Some(parse_index("index", raw, n_val)?),
        (Some(_), false) => {
            return Err(CliError::usage(format!(
                "{} does not take --index",
                command.name()
            )))
        }
        (None, _) if needs_index => {
            return Err(CliError::usage(format!(
                "{} requires --index",
                command.name()
            )))
        }
        (None, _) => None,
    };

    let target = match (&opts.target, command) {
        (Some(raw), Command::Path) => Some(parse_index("target", raw, n_val)?),
        (None, Command::Path) => return Err(CliError::usage("path requires --target")),
        (Some(_), _) => return Err(CliError::usage("--target is only used by path")),
        (None, _) => None,
    };

    let d = match (&opts.d, command) {
        (Some(raw), Command::Bounds) => parse_list("d", raw)?,
        (Some(_), _) => return Err(CliError::usage("--d is only used by bounds")),
        (None, _) => Vec::new(),
    };

    let apply = match (&opts.apply, command) {
        (Some(raw), Command::Moves) => match parse_list::<u32>("apply", raw)?.as_slice() {
            &[i, j] => Some([i, j]),
            _ => return Err(CliError::usage("--apply takes exactly two punctures, i,j")),
        },
        (Some(_), _) => return Err(CliError::usage("--apply is only used by moves")),
        (None, _) => None,
    };

    let allowed: &[Format] = match command {
        Command::Graph => &[Format::Json, Format::Dot, Format::Text],
        Command::Bounds => &[Format::Json, Format::Csv, Format::Text],
        _ => &[Format::Json, Format::Text],
    };
    if !allowed.contains(&opts.format) {
        return Err(CliError::usage(format!(
            "{} does not support --format {}",
            command.name(),
            opts.format.name()
        )));
    }

    let batch = matches!(command, Command::Enumerate)
        || (matches!(command, Command::Classify | Command::Tunnels) && index.is_none());
    if batch && n_val > DEFAULT_BATCH_CAP && !opts.allow_large_caps {
        return Err(CliError::Core(tubed_core::Error::ResourceLimit(format!(
            "listing every index is capped at n <= {DEFAULT_BATCH_CAP}; pass --allow-large-caps to confirm"
        ))));
    }

    Ok(Invocation {
        subcommand: command,
        n,
        index,
        target,
        d,
        apply,
        format: opts.format,
        oracle_cap: opts.oracle_cap,
        graph_cap: opts.graph_cap,
    })
}
