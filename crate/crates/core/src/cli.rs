//! Batch command line: parses a config, runs one estimator, writes JSON and
//! CSV reports.
//!
//! Exit codes: 0 success, 1 selftest failure or I/O trouble, 2 invalid
//! input, 3 degenerate input (inadmissible or unstable configurations).

use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use crate::braid::{linking_matrix, theta1_bounds, Theta1Bounds};
use crate::config::ExperimentConfig;
use crate::disk::{stream_rng, Configuration, Point};
use crate::error::Error;
use crate::extraction::{beta_traced, ExtractOptions};
use crate::invariants::{
    calabi, entropy_report, invariance_experiment, theta_estimate, InvariantEstimate, Kind, SCHEMA_VERSION,
};

#[derive(Debug, Parser)]
#[command(name = "braiddyn", version, about = "Orbit braids and their asymptotic invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract one braid β(P; φ^N) with N = N_max and dump its trace.
    Extract(Common),
    /// Estimate Θ^(1) and/or Θ^(2).
    Theta {
        #[command(flatten)]
        common: Common,
        /// theta1 or theta2; defaults to the config's kinds, else both.
        #[arg(long)]
        kind: Option<Kind>,
    },
    /// Monte Carlo Calabi invariant for a pair of measures.
    Calabi(Common),
    /// Θ^(2) as an entropy lower bound, next to a line-stretching estimate.
    EntropyBound(Common),
    /// Compare Θ for the map and its conjugate by the config's conjugator.
    InvarianceCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kind: Option<Kind>,
    },
    /// Run built-in checks against independently computed values.
    Selftest,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (default: the config's output_dir, else ./braiddyn-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Base diameter direction in radians, overriding the config.
    #[arg(long, allow_hyphen_values = true)]
    pub base_angle: Option<f64>,
    /// Overwrite existing report files.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Degenerate(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotAdmissible | Error::Degenerate(_) | Error::Unstable { .. } | Error::AllRejected { .. } => {
                Failure::Degenerate(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Extract(c) => with_config(&c, extract),
        Command::Theta { common, kind } => with_config(&common, |cfg, out| theta(cfg, out, kind)),
        Command::Calabi(c) => with_config(&c, run_calabi),
        Command::EntropyBound(c) => with_config(&c, run_entropy),
        Command::InvarianceCheck { common, kind } => with_config(&common, |cfg, out| invariance(cfg, out, kind)),
        Command::Selftest => selftest(),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Degenerate(msg)) => {
            eprintln!("error: {msg}");
            3
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Where reports go, refusing to clobber files unless forced.
struct Output {
    dir: PathBuf,
    force: bool,
}

impl Output {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn check_free(&self, names: &[&str]) -> CmdResult {
        if self.force {
            return Ok(());
        }
        for n in names {
            let p = self.path(n);
            if p.exists() {
                return Err(Failure::Input(format!(
                    "{} exists; pass --force to overwrite",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    fn write(&self, name: &str, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> CmdResult {
        let path = self.path(name);
        let io = |e: std::io::Error| Failure::Other(format!("{}: {e}", path.display()));
        std::fs::create_dir_all(&self.dir).map_err(io)?;
        let file = OpenOptions::new()
            .write(true)
            .create(true)
            .truncate(true)
            .open(&path)
            .map_err(io)?;
        let mut w = std::io::BufWriter::new(file);
        body(&mut w).and_then(|_| w.flush()).map_err(io)?;
        info!("wrote {}", path.display());
        Ok(())
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> CmdResult {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)
        })
    }
}

fn with_config(common: &Common, f: impl FnOnce(&ExperimentConfig, &Output) -> CmdResult) -> CmdResult {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    if let Some(a) = common.base_angle {
        cfg.base_angle = a;
    }
    let dir = common
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("braiddyn-out"));
    f(
        &cfg,
        &Output {
            dir,
            force: common.force,
        },
    )
}

#[derive(Serialize)]
struct ExtractReport<'a> {
    schema_version: u32,
    strands: usize,
    iterations: usize,
    points: &'a [Point],
    braid: &'a [i32],
    purity: bool,
    theta1_bounds: Theta1Bounds,
    linking_matrix: Option<Vec<Vec<i64>>>,
    resolution: usize,
    axis_angle: f64,
}

fn extract(cfg: &ExperimentConfig, out: &Output) -> CmdResult {
    const FILES: [&str; 3] = ["extract.json", "extract_trace.csv", "extract_letters.csv"];
    out.check_free(&FILES)?;
    let mut rng = stream_rng(cfg.seed, 0);
    let points: Vec<Point> = cfg.measures.iter().map(|m| m.sample(&mut rng)).collect();
    let config = Configuration::new(points)?;
    let opts = ExtractOptions {
        resolution: cfg.resolution,
        max_resolution: cfg.max_resolution,
        base_angle: cfg.base_angle,
        atoms: cfg.measures.iter().flat_map(|m| m.atoms()).collect(),
    };
    let (word, extraction, trace) = beta_traced(&config, &cfg.map, cfg.n_max, &opts)?;
    let lk = linking_matrix(&word).ok();
    let report = ExtractReport {
        schema_version: SCHEMA_VERSION,
        strands: word.strands(),
        iterations: cfg.n_max,
        points: config.points(),
        braid: word.letters(),
        purity: lk.is_some(),
        theta1_bounds: theta1_bounds(&word),
        linking_matrix: lk.map(|m| m.rows()),
        resolution: extraction.resolution,
        axis_angle: extraction.axis_angle,
    };
    out.json(FILES[0], &report)?;
    out.write(FILES[1], |w| trace.write_samples_csv(w))?;
    out.write(FILES[2], |w| trace.write_letters_csv(w))?;
    println!("{:?}", word.letters());
    Ok(())
}

#[derive(Serialize)]
struct FamilySup {
    label: &'static str,
    value: f64,
    per_family: Vec<f64>,
}

#[derive(Serialize)]
struct ThetaReport {
    #[serde(flatten)]
    estimate: InvariantEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    family_sup: Option<FamilySup>,
}

fn kinds(cfg: &ExperimentConfig, flag: Option<Kind>, fallback: &[Kind]) -> std::result::Result<Vec<Kind>, Failure> {
    let kinds = match flag {
        Some(k) => vec![k],
        None if cfg.kinds.is_empty() => fallback.to_vec(),
        None => cfg.kinds.clone(),
    };
    if let Some(k) = kinds.iter().find(|k| !matches!(k, Kind::Theta1 | Kind::Theta2)) {
        return Err(Failure::Input(format!("kind {k:?} is not a Θ estimate")));
    }
    Ok(kinds)
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Theta1 => "theta1",
        Kind::Theta2 => "theta2",
        Kind::Calabi => "calabi",
        Kind::Growth => "growth",
    }
}

fn theta(cfg: &ExperimentConfig, out: &Output, flag: Option<Kind>) -> CmdResult {
    let kinds = kinds(cfg, flag, &[Kind::Theta1, Kind::Theta2])?;
    let names: Vec<String> = kinds
        .iter()
        .flat_map(|&k| ["json", "csv"].map(|ext| format!("theta_{}.{ext}", kind_name(k))))
        .collect();
    out.check_free(&names.iter().map(String::as_str).collect::<Vec<_>>())?;
    let opts = cfg.estimate_options();
    for kind in kinds {
        let estimate = theta_estimate(&cfg.map, &cfg.measures, kind, &opts)?;
        let family_sup = if cfg.extra_families.is_empty() {
            None
        } else {
            let mut per_family = vec![estimate.point_estimate];
            for family in &cfg.extra_families {
                per_family.push(theta_estimate(&cfg.map, family, kind, &opts)?.point_estimate);
            }
            Some(FamilySup {
                label: "family-sup",
                value: per_family.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                per_family,
            })
        };
        println!("{}: {}", kind_name(kind), estimate.point_estimate);
        let name = kind_name(kind);
        out.write(&format!("theta_{name}.csv"), |w| estimate.write_csv(w))?;
        out.json(&format!("theta_{name}.json"), &ThetaReport { estimate, family_sup })?;
    }
    Ok(())
}

fn run_calabi(cfg: &ExperimentConfig, out: &Output) -> CmdResult {
    if cfg.n != 2 {
        return Err(Failure::Input("calabi needs exactly two measures".into()));
    }
    out.check_free(&["calabi.json", "calabi.csv"])?;
    let report = calabi(&cfg.map, &cfg.measures[0], &cfg.measures[1], &cfg.estimate_options())?;
    println!("calabi: {} half turns", report.estimate.point_estimate);
    out.write("calabi.csv", |w| report.estimate.write_csv(w))?;
    out.json("calabi.json", &report)
}

fn run_entropy(cfg: &ExperimentConfig, out: &Output) -> CmdResult {
    out.check_free(&["entropy.json", "entropy.csv", "stretch.csv"])?;
    let stretch = cfg.stretch.clone().unwrap_or_default();
    let report = entropy_report(&cfg.map, &cfg.measures, &cfg.estimate_options(), &stretch)?;
    println!(
        "entropy lower bound: {}, stretch rate: {}",
        report.entropy_lower_bound.point_estimate, report.stretch.rate
    );
    out.write("entropy.csv", |w| report.entropy_lower_bound.write_csv(w))?;
    out.write("stretch.csv", |w| {
        writeln!(w, "iteration,length,points")?;
        for (k, (l, p)) in report.stretch.lengths.iter().zip(&report.stretch.points).enumerate() {
            writeln!(w, "{k},{l},{p}")?;
        }
        Ok(())
    })?;
    out.json("entropy.json", &report)
}

fn invariance(cfg: &ExperimentConfig, out: &Output, flag: Option<Kind>) -> CmdResult {
    let kind = kinds(cfg, flag, &[Kind::Theta2])?[0];
    let h = cfg
        .conjugator
        .as_ref()
        .ok_or_else(|| Failure::Input("invariance-check needs a conjugator map".into()))?;
    out.check_free(&["invariance.json", "invariance.csv"])?;
    let report = invariance_experiment(&cfg.map, h, &cfg.measures, kind, &cfg.estimate_options())?;
    println!(
        "{}: {} vs {} (difference {})",
        kind_name(kind),
        report.original.point_estimate,
        report.conjugated.point_estimate,
        report.difference
    );
    out.write("invariance.csv", |w| {
        writeln!(w, "N,original_mean,conjugated_mean")?;
        for (a, b) in report.original.per_n.iter().zip(&report.conjugated.per_n) {
            writeln!(w, "{},{},{}", a.n, a.mean, b.mean)?;
        }
        Ok(())
    })?;
    out.json("invariance.json", &report)
}

fn selftest() -> CmdResult {
    let checks = crate::selftest::run_all();
    let mut failed = 0;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(Failure::Other(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}
