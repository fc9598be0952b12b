//! Shared plumbing for the `seaweed` binary: spec flags, fixture loading,
//! batch enumeration and JSON-lines corpora.

use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use seaweed_core::chevalley::load_fixture;
use seaweed_core::report::{build_report, Options, Report, Target};
use seaweed_core::rootsystem::TypeLabel;
use seaweed_core::seaweed::{is_indecomposable, SeaweedSpec};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(seaweed_core::error::Error),
    Io(PathBuf, io::Error),
    Json(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Json(m) => write!(f, "invalid report: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<seaweed_core::error::Error> for CliError {
    fn from(e: seaweed_core::error::Error) -> CliError {
        CliError::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Args, Clone, Debug, Default)]
pub struct SpecArgs {
    /// Root system type: A, B, C, D, E, F or G.
    #[arg(long = "type")]
    pub type_label: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Comma-separated 1-based simple roots, e.g. "1,2".
    #[arg(long, default_value = "")]
    pub pi1: String,
    #[arg(long, default_value = "")]
    pub pi2: String,
    /// Structure-constant file; with root annotations it hosts the seaweed,
    /// without them it is the seaweed.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
}

impl SpecArgs {
    pub fn spec(&self) -> Result<Option<SeaweedSpec>> {
        match (&self.type_label, self.rank) {
            (Some(t), Some(r)) => Ok(Some(SeaweedSpec::parse(t, r, &self.pi1, &self.pi2)?)),
            (None, None) => Ok(None),
            _ => Err(CliError::Usage("--type and --rank go together".into())),
        }
    }

    pub fn target(&self) -> Result<Target> {
        let spec = self.spec()?;
        match &self.fixture {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
                Ok(Target::from_fixture(load_fixture(&text)?, spec)?)
            }
            None => {
                let spec = spec.ok_or_else(|| CliError::Usage("give --type and --rank, or --fixture".into()))?;
                Ok(Target::canonical(&spec)?)
            }
        }
    }
}

/// Ranks of a type up to `max_rank`, or exactly `rank`.
pub fn ranks(t: TypeLabel, max_rank: usize, rank: Option<usize>) -> Vec<usize> {
    match rank {
        Some(r) => vec![r].into_iter().filter(|&r| t.is_valid_rank(r)).collect(),
        None => (1..=max_rank).filter(|&r| t.is_valid_rank(r)).collect(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub indecomposable: usize,
    pub decomposable: usize,
    pub rigid_verified: usize,
    pub cg_verified: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[Report], strict: bool) -> Summary {
        let mut s = Summary::default();
        for r in reports {
            s.total += 1;
            if r.info.indecomposable == Some(true) {
                s.indecomposable += 1;
            } else {
                s.decomposable += 1;
            }
            if r.rigid_verified() {
                s.rigid_verified += 1;
            }
            if r.cg_verified() {
                s.cg_verified += 1;
            }
            if !r.failures(strict).is_empty() {
                s.failed += 1;
            }
        }
        s
    }
}

/// All `(π₁, π₂)` for the given type and ranks, in a fixed order.
pub fn enumerate_specs(t: TypeLabel, ranks: &[usize]) -> Vec<SeaweedSpec> {
    ranks.iter().flat_map(|&r| SeaweedSpec::all(t, r)).collect()
}

/// Reports in the order of `specs`, computed on `jobs` worker threads.
pub fn enumerate(specs: &[SeaweedSpec], opts: &Options, jobs: Option<usize>) -> Result<Vec<Report>> {
    let run = || -> Result<Vec<Report>> {
        specs
            .par_iter()
            .map(|s| Ok(build_report(&Target::canonical(s)?, opts)?))
            .collect()
    };
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(run),
        None => run(),
    }
}

pub fn indecomposable_count(specs: &[SeaweedSpec]) -> usize {
    specs.iter().filter(|s| is_indecomposable(s)).count()
}

pub fn write_corpus<W: Write>(out: W, reports: &[Report]) -> io::Result<()> {
    let mut w = BufWriter::new(out);
    for r in reports {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn write_corpus_file(path: &Path, reports: &[Report]) -> Result<()> {
    let f = fs::File::create(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    write_corpus(f, reports).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn read_corpus(path: &Path) -> Result<Vec<Report>> {
    let f = fs::File::open(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    io::BufReader::new(f)
        .lines()
        .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
        .map(|l| {
            let l = l.map_err(|e| CliError::Io(path.to_path_buf(), e))?;
            serde_json::from_str(&l).map_err(|e| CliError::Json(e.to_string()))
        })
        .collect()
}

/// Recomputes a corpus record from its spec echo with the same degree range.
pub fn reverify(r: &Report, opts: &Options) -> Result<Report> {
    let echo = r
        .spec
        .as_ref()
        .ok_or_else(|| CliError::Usage("record has no spec".into()))?;
    let opts = Options {
        max_degree: r.dims.last().map(|d| d.degree),
        allow_large: true,
        ..opts.clone()
    };
    Ok(build_report(&Target::canonical(&echo.to_spec()?)?, &opts)?)
}

pub fn to_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}

/// Human-readable summary used by `info`.
pub fn info_text(target: &Target) -> String {
    let info = seaweed_core::report::info(target);
    let mut out = String::new();
    if let Some(spec) = target.spec() {
        out.push_str(&format!("{spec}\n{}\n", seaweed_core::seaweed::render_split_dynkin(spec)));
    }
    out.push_str(&format!("dim s      {}\n", info.dim_s));
    if let (Some(r), Some(n)) = (info.dim_r, info.dim_n) {
        out.push_str(&format!("dim r      {r}\ndim n      {n}\n"));
    }
    out.push_str(&format!("dim Z(s)   {}\n", info.dim_center));
    if let Some(i) = info.indecomposable {
        out.push_str(&format!("indecomposable  {i}\n"));
    }
    out.push_str(&format!("components [{}]\n", info.components.join(", ")));
    out
}
