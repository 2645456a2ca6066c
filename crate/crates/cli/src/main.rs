//! `gkdim` command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 resource cap, 4 algebra not split
//! over the base field, 5 internal assertion failure.

mod commands;
mod document;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gkdim::analysis::Window;
use gkdim::closure::DEFAULT_WORD_CAP;
use gkdim::growth::DEFAULT_CAP;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] gkdim::Error),
    #[error("document: {0}")]
    Document(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use gkdim::Error as E;
        match self {
            CliError::Engine(e) => match e {
                E::CapExceeded { .. } | E::NonStabilizing { .. } => 3,
                E::NotSplitOverBase(_) => 4,
                E::Internal(_) => 5,
                _ => 2,
            },
            CliError::Document(_) | CliError::Io { .. } | CliError::Usage(_) => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad upper bound '{hi}'"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok(Window(lo, hi))
}

/// Options shared by all subcommands. Everything except `workers`,
/// `cache_dir` and `out` enters the cache key.
#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct RunConfig {
    /// Highest filtration level computed.
    #[arg(long, global = true, default_value_t = 12)]
    pub max_n: usize,
    /// Comparison window LO:HI.
    #[arg(long, global = true, value_parser = parse_window)]
    pub window: Option<Window>,
    /// Word length for trace generators.
    #[arg(long, global = true)]
    pub word_len: Option<usize>,
    /// Largest admissible dimension of a filtration level.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Largest number of words enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_CAP)]
    pub word_cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[serde(skip)]
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Directory for cached outputs.
    #[serde(skip)]
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Write output here instead of standard output.
    #[serde(skip)]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.cap == 0 || self.word_cap == 0 || self.workers == 0 {
            return Err(CliError::Usage("caps and worker count must be positive".into()));
        }
        if let Some(w) = self.window {
            if w.hi() > self.max_n {
                return Err(CliError::Usage(format!("window {w} exceeds --max-n {}", self.max_n)));
            }
        }
        if self.word_len == Some(0) {
            return Err(CliError::Usage("--word-len must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "gkdim", version, about = "Growth of matrix algebras over Q, Q[x..] and Q(x)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Dimensions of the filtration levels.
    Growth { file: PathBuf },
    /// Gelfand-Kirillov dimension estimate.
    Gkdim { file: PathBuf },
    /// Growth dominance in both directions.
    Compare { file_a: PathBuf, file_b: PathBuf },
    /// Trace closure by characteristic polynomial coefficients.
    Charclosure { file: PathBuf },
    /// Cayley-Hamilton and regular representation checks.
    Cayley { file: PathBuf },
    /// Reduction to a commutative algebra of the same growth.
    Pipeline { file: PathBuf },
    /// The diagonal algebra Q[diag(x1..xm)] and its trace closure.
    Exbig { m: usize },
}

impl Command {
    fn files(&self) -> Vec<&Path> {
        match self {
            Command::Growth { file }
            | Command::Gkdim { file }
            | Command::Charclosure { file }
            | Command::Cayley { file }
            | Command::Pipeline { file } => vec![file],
            Command::Compare { file_a, file_b } => vec![file_a, file_b],
            Command::Exbig { .. } => Vec::new(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Growth { .. } => "growth",
            Command::Gkdim { .. } => "gkdim",
            Command::Compare { .. } => "compare",
            Command::Charclosure { .. } => "charclosure",
            Command::Cayley { .. } => "cayley",
            Command::Pipeline { .. } => "pipeline",
            Command::Exbig { .. } => "exbig",
        }
    }
}

fn cache_key(cmd: &Command, inputs: &[String], config: &RunConfig) -> String {
    let mut h = Sha256::new();
    h.update(concat!("gkdim-cli ", env!("CARGO_PKG_VERSION")).as_bytes());
    h.update([0]);
    h.update(cmd.name().as_bytes());
    if let Command::Exbig { m } = cmd {
        h.update(m.to_le_bytes());
    }
    for text in inputs {
        h.update([0]);
        h.update(text.as_bytes());
    }
    h.update([0]);
    h.update(serde_json::to_vec(config).expect("config serializes"));
    hex::encode(h.finalize())
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let config = &cli.config;
    config.validate()?;
    let inputs = cli.command.files().into_iter().map(read).collect::<Result<Vec<_>, _>>()?;
    let cached = config.cache_dir.as_ref().map(|dir| {
        let ext = match config.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        dir.join(format!("{}.{ext}", cache_key(&cli.command, &inputs, config)))
    });
    if let Some(path) = &cached {
        if let Ok(text) = fs::read_to_string(path) {
            return Ok(text);
        }
    }
    let docs = inputs
        .iter()
        .map(|t| document::PresentationDocument::from_toml(t))
        .collect::<Result<Vec<_>, _>>()?;
    let output = match &cli.command {
        Command::Growth { .. } => commands::growth(&docs[0], config)?,
        Command::Gkdim { .. } => commands::gkdim(&docs[0], config)?,
        Command::Compare { .. } => commands::compare(&docs[0], &docs[1], config)?,
        Command::Charclosure { .. } => commands::charclosure(&docs[0], config)?,
        Command::Cayley { .. } => commands::cayley(&docs[0], config)?,
        Command::Pipeline { .. } => commands::pipeline(&docs[0], config)?,
        Command::Exbig { m } => commands::exbig(*m, config)?,
    };
    if let Some(path) = &cached {
        let dir = path.parent().expect("cache file has a directory");
        fs::create_dir_all(dir)
            .and_then(|_| fs::write(path, &output))
            .map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
    }
    Ok(output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.config.out {
        Some(path) => fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gkdim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
