//! Command-line front end: argument parsing, the subcommands and the exit-code contract.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::capture::{assemble_w_r, probability_with_exact, CaptureCase, CaptureSet, ProbabilityReport};
use crate::error::Error;
use crate::extrema::{segment_error_bound, ExtremaLadder, ExtremaTable, ExtremumKind, MAX_Q};
use crate::map::{MapFamily, MapSpec};
use crate::oracle::{mc_capture_probability, verify, McConfig, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::orbit::{
    capture_intervals, find_supercycle_parameter, CaptureIntervalSet, CaptureMode, OrbitOptions, PeriodicOrbit,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_ATTRACTOR: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "orbitcap",
    version,
    about = "Capture intervals and capture probabilities of stable orbits of unimodal maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Logistic,
    Tent,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Map description file (JSON).
    #[arg(long, global = true, conflicts_with = "family")]
    pub map: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_root: f64,
    #[arg(long, global = true, default_value_t = 1e-11)]
    pub tol_orbit: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_measure: f64,
    /// Largest period searched for.
    #[arg(long, global = true, default_value_t = 16)]
    pub p_max: usize,
    #[arg(long, global = true, value_enum, default_value = "figure")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Figure,
    Text,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Stable orbit, saddles, companions and capture intervals.
    Orbit,
    /// Parameter value of a superstable p-cycle inside a bracket.
    Supercycle {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r_lo: f64,
        #[arg(long)]
        r_hi: f64,
    },
    /// Extrema of f^q and the segment model.
    Extrema {
        #[arg(long)]
        q: usize,
        /// Segment table file (CSV output only); defaults to a sibling of --out.
        #[arg(long)]
        segments_out: Option<PathBuf>,
    },
    /// Capture set W_R for one q.
    Capture {
        #[arg(long)]
        q: usize,
    },
    /// Capture probability table over a range of q.
    Prob {
        /// First q; the orbit period when absent.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        q_max: usize,
        /// Cross-check every row against Monte Carlo.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Monte Carlo and dense-grid verification of one capture set.
    Verify {
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 1_000_000)]
        resolution: usize,
    },
    /// Critical-orbit samples over a parameter range.
    Bifurcation {
        #[arg(long)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        #[arg(long, default_value_t = 400)]
        r_steps: usize,
        #[arg(long, default_value_t = 10_000)]
        burn_in: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub map: MapFamily,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub orbit: OrbitOptions,
    pub tol_measure: f64,
    pub p_max: usize,
    pub mode: CaptureMode,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("no stable orbit of period <= {0} found")]
    NoAttractor(usize),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_USAGE,
            CliError::NoAttractor(_) => EXIT_NO_ATTRACTOR,
            CliError::Numeric(Error::InvalidMap(_) | Error::InvalidConfig(_)) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    pub fn from_args(common: &CommonArgs) -> CliResult<RunConfig> {
        let map = match (&common.map, common.family) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)?;
                let spec: MapSpec = serde_json::from_str(&text)?;
                let spec = match (spec, common.r) {
                    (MapSpec::Logistic { domain, .. }, Some(r)) => MapSpec::Logistic { r, domain },
                    (MapSpec::Tent { domain, .. }, Some(r)) => MapSpec::Tent { r, domain },
                    (
                        MapSpec::Custom {
                            coeffs,
                            critical,
                            domain,
                            ..
                        },
                        Some(r),
                    ) => MapSpec::Custom {
                        coeffs,
                        critical,
                        domain,
                        r: Some(r),
                    },
                    (spec, None) => spec,
                };
                MapFamily::from_spec(&spec)?
            }
            (None, family) => {
                let r = common
                    .r
                    .ok_or_else(|| CliError::Usage("--r is required with --family".into()))?;
                match family.unwrap_or(FamilyArg::Logistic) {
                    FamilyArg::Logistic => MapFamily::logistic(r)?,
                    FamilyArg::Tent => MapFamily::tent(r)?,
                }
            }
        };
        for (name, v) in [
            ("--tol-root", common.tol_root),
            ("--tol-orbit", common.tol_orbit),
            ("--tol-measure", common.tol_measure),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        if common.p_max == 0 || common.p_max > MAX_Q {
            return Err(CliError::Usage(format!("--p-max must be in 1..={MAX_Q}")));
        }
        Ok(RunConfig {
            map,
            format: common.format,
            out: common.out.clone(),
            seed: common.seed,
            orbit: OrbitOptions {
                tol_orbit: common.tol_orbit,
                tol_root: common.tol_root,
                ..OrbitOptions::default()
            },
            tol_measure: common.tol_measure,
            p_max: common.p_max,
            mode: match common.mode {
                ModeArg::Figure => CaptureMode::Figure,
                ModeArg::Text => CaptureMode::Text,
            },
        })
    }

    fn sink(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
            None => Box::new(io::BufWriter::new(io::stdout().lock())),
        })
    }

    fn write_json<T: Serialize>(&self, value: &T) -> CliResult<()> {
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn write_csv<T: Serialize>(&self, rows: &[T]) -> CliResult<()> {
        write_csv_to(self.sink()?, rows)
    }
}

fn write_csv_to<T: Serialize>(w: Box<dyn Write>, rows: &[T]) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

fn check_q(q: usize) -> CliResult<()> {
    if q > MAX_Q {
        return Err(CliError::Usage(format!("q = {q} exceeds {MAX_Q}")));
    }
    Ok(())
}

struct Pipeline {
    orbit: PeriodicOrbit,
    captures: CaptureIntervalSet,
}

fn pipeline(cfg: &RunConfig) -> CliResult<Pipeline> {
    let orbit = PeriodicOrbit::find(&cfg.map, cfg.p_max, &cfg.orbit)?.ok_or(CliError::NoAttractor(cfg.p_max))?;
    let captures = capture_intervals(&cfg.map, &orbit, cfg.mode, &cfg.orbit)?;
    Ok(Pipeline { orbit, captures })
}

#[derive(Debug, Serialize)]
pub struct OrbitReport {
    pub p: usize,
    pub r: f64,
    pub points: Vec<f64>,
    pub multiplier: f64,
    pub saddles: Vec<f64>,
    pub companions: Vec<f64>,
    pub capture_intervals: Vec<[f64; 2]>,
    pub critical_index: Option<usize>,
}

impl OrbitReport {
    pub fn new(r: f64, orbit: &PeriodicOrbit, captures: &CaptureIntervalSet) -> OrbitReport {
        OrbitReport {
            p: orbit.period,
            r,
            points: orbit.points.clone(),
            multiplier: orbit.multiplier,
            saddles: orbit.saddles.clone(),
            companions: orbit.companions.clone(),
            capture_intervals: captures.intervals.iter().map(|iv| [iv.lo, iv.hi]).collect(),
            critical_index: captures.critical_index,
        }
    }
}

#[derive(Serialize)]
struct OrbitRow {
    i: usize,
    point: f64,
    saddle: f64,
    companion: f64,
    lo: f64,
    hi: f64,
    critical: bool,
}

pub fn cmd_orbit(cfg: &RunConfig) -> CliResult<()> {
    let pl = pipeline(cfg)?;
    match cfg.format {
        Format::Json => cfg.write_json(&OrbitReport::new(cfg.map.r(), &pl.orbit, &pl.captures)),
        Format::Csv => {
            let rows: Vec<OrbitRow> = (0..pl.orbit.period)
                .map(|i| OrbitRow {
                    i,
                    point: pl.orbit.points[i],
                    saddle: pl.orbit.saddles[i],
                    companion: pl.orbit.companions[i],
                    lo: pl.captures.intervals[i].lo,
                    hi: pl.captures.intervals[i].hi,
                    critical: pl.captures.critical_index == Some(i),
                })
                .collect();
            cfg.write_csv(&rows)
        }
    }
}

pub fn cmd_supercycle(cfg: &RunConfig, p: usize, r_lo: f64, r_hi: f64) -> CliResult<()> {
    if p == 0 {
        return Err(CliError::Usage("--p must be positive".into()));
    }
    let s = find_supercycle_parameter(&cfg.map, p, r_lo, r_hi)?;
    match cfg.format {
        Format::Json => cfg.write_json(&s),
        Format::Csv => cfg.write_csv(&[s]),
    }
}

#[derive(Debug, Serialize)]
pub struct ExtremumRow {
    pub q: usize,
    pub x: f64,
    pub y: f64,
    pub kind: ExtremumKind,
    pub depth: usize,
}

#[derive(Debug, Serialize)]
pub struct SegmentRow {
    pub x_l: f64,
    pub y_l: f64,
    pub x_r: f64,
    pub y_r: f64,
    pub slope: f64,
    pub intercept: f64,
    pub error_bound: Option<f64>,
}

pub fn extrema_rows(table: &ExtremaTable) -> Vec<ExtremumRow> {
    table
        .entries
        .iter()
        .map(|e| ExtremumRow {
            q: table.q,
            x: e.x,
            y: e.y,
            kind: e.kind,
            depth: e.depth,
        })
        .collect()
}

pub fn segment_rows(map: &MapFamily, table: &ExtremaTable) -> Vec<SegmentRow> {
    table
        .segment_model(map)
        .segments
        .iter()
        .map(|s| SegmentRow {
            x_l: s.x_l,
            y_l: s.y_l,
            x_r: s.x_r,
            y_r: s.y_r,
            slope: s.slope(),
            intercept: s.intercept(),
            error_bound: segment_error_bound(map, table.q, s).ok().map(|b| b.bound),
        })
        .collect()
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}{ext}"))
}

pub fn cmd_extrema(cfg: &RunConfig, q: usize, segments_out: Option<&Path>) -> CliResult<()> {
    check_q(q)?;
    let ladder = ExtremaLadder::build(&cfg.map, q, cfg.orbit.tol_root)?;
    let table = ladder.table(q);
    let extrema = extrema_rows(table);
    let segments = segment_rows(&cfg.map, table);
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                q: usize,
                extrema: &'a [ExtremumRow],
                segments: &'a [SegmentRow],
            }
            cfg.write_json(&Out {
                q,
                extrema: &extrema,
                segments: &segments,
            })
        }
        Format::Csv => {
            cfg.write_csv(&extrema)?;
            let seg_path = segments_out
                .map(Path::to_path_buf)
                .or_else(|| cfg.out.as_deref().map(|p| sibling(p, "_segments")));
            match seg_path {
                Some(path) => write_csv_to(Box::new(io::BufWriter::new(fs::File::create(path)?)), &segments),
                None => {
                    let mut w = io::stdout().lock();
                    writeln!(w)?;
                    write_csv_to(Box::new(w), &segments)
                }
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SubintervalRow {
    pub lo: f64,
    pub hi: f64,
    pub i: usize,
    pub j: usize,
    pub level: usize,
    pub case: CaptureCase,
}

#[derive(Debug, Serialize)]
pub struct CaptureReport {
    pub q: usize,
    #[serde(rename = "P_q")]
    pub p_q: f64,
    #[serde(rename = "P_exact_q")]
    pub p_exact_q: Option<f64>,
    pub measure: f64,
    pub intervals: Vec<SubintervalRow>,
    pub merged: Vec<[f64; 2]>,
}

impl CaptureReport {
    pub fn new(set: &CaptureSet, report: &ProbabilityReport) -> CaptureReport {
        CaptureReport {
            q: set.q,
            p_q: report.p_q,
            p_exact_q: report.p_exact_q,
            measure: set.measure,
            intervals: set
                .subintervals
                .iter()
                .map(|s| SubintervalRow {
                    lo: s.lo,
                    hi: s.hi,
                    i: s.orbit_index,
                    j: s.partition_index,
                    level: s.level,
                    case: s.case,
                })
                .collect(),
            merged: set.merged.iter().map(|iv| [iv.lo, iv.hi]).collect(),
        }
    }
}

pub fn cmd_capture(cfg: &RunConfig, q: usize) -> CliResult<()> {
    check_q(q)?;
    let pl = pipeline(cfg)?;
    let ladder = ExtremaLadder::build(&cfg.map, q, cfg.orbit.tol_root)?;
    let (set, report) =
        probability_with_exact(&cfg.map, q, pl.orbit.period, &pl.captures, &ladder, cfg.orbit.tol_root)?;
    match cfg.format {
        Format::Json => cfg.write_json(&CaptureReport::new(&set, &report)),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                lo: f64,
                hi: f64,
                length: f64,
            }
            let rows: Vec<Row> = set
                .merged
                .iter()
                .map(|iv| Row {
                    lo: iv.lo,
                    hi: iv.hi,
                    length: iv.len(),
                })
                .collect();
            cfg.write_csv(&rows)
        }
    }
}

#[derive(Debug, Serialize)]
struct ProbRow {
    q: usize,
    #[serde(rename = "P_q")]
    p_q: f64,
    #[serde(rename = "P_exact_q")]
    p_exact_q: f64,
    mc_estimate: Option<f64>,
    mc_halfwidth: Option<f64>,
}

pub fn cmd_prob(cfg: &RunConfig, q_min: Option<usize>, q_max: usize, check: bool, samples: usize) -> CliResult<()> {
    check_q(q_max)?;
    let pl = pipeline(cfg)?;
    let p = pl.orbit.period;
    let q_min = q_min.unwrap_or(p);
    if q_min > q_max {
        return Err(CliError::Usage(format!("--q {q_min} exceeds --q-max {q_max}")));
    }
    let ladder = ExtremaLadder::build(&cfg.map, q_max, cfg.orbit.tol_root)?;
    let width = cfg.map.width();
    let mut sets: Vec<CaptureSet> = Vec::new();
    for q in q_min.saturating_sub(1)..=q_max {
        sets.push(assemble_w_r(&cfg.map, q, p, &pl.captures, &ladder, cfg.orbit.tol_root)?);
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for q in q_min..=q_max {
        let set = sets.iter().find(|s| s.q == q).expect("assembled above");
        let prev = if q == 0 {
            None
        } else {
            sets.iter().find(|s| s.q == q - 1)
        };
        let p_q = set.probability();
        let p_exact_q = prev.map_or(p_q, |s| p_q - s.probability());
        if p_exact_q < -cfg.tol_measure / width {
            failures.push(format!("q={q}: P_exact_q = {p_exact_q}"));
        }
        let (mc_estimate, mc_halfwidth) = if check {
            let mc = mc_capture_probability(
                &cfg.map,
                &pl.captures,
                &McConfig {
                    n_samples: samples,
                    rng_seed: cfg.seed,
                    q,
                    ..McConfig::new(q)
                },
            )?;
            if (mc.estimate - p_q).abs() > mc.halfwidth {
                failures.push(format!("q={q}: |{p_q} - {}| > {}", mc.estimate, mc.halfwidth));
            }
            (Some(mc.estimate), Some(mc.halfwidth))
        } else {
            (None, None)
        };
        rows.push(ProbRow {
            q,
            p_q,
            p_exact_q,
            mc_estimate,
            mc_halfwidth,
        });
    }
    match cfg.format {
        Format::Json => cfg.write_json(&rows)?,
        Format::Csv => cfg.write_csv(&rows)?,
    }
    if check && !failures.is_empty() {
        return Err(CliError::Verification(failures.join("; ")));
    }
    Ok(())
}

pub fn cmd_verify(cfg: &RunConfig, q: usize, samples: usize, resolution: usize) -> CliResult<()> {
    check_q(q)?;
    let pl = pipeline(cfg)?;
    let ladder = ExtremaLadder::build(&cfg.map, q, cfg.orbit.tol_root)?;
    let set = assemble_w_r(&cfg.map, q, pl.orbit.period, &pl.captures, &ladder, cfg.orbit.tol_root)?;
    let mc = McConfig {
        n_samples: samples,
        rng_seed: cfg.seed,
        ..McConfig::new(q)
    };
    let report = verify(&cfg.map, &set, &pl.captures, &mc, resolution)?;
    match cfg.format {
        Format::Json => cfg.write_json(&report)?,
        Format::Csv => cfg.write_csv(&[report])?,
    }
    if !report.pass {
        return Err(CliError::Verification(format!("q={q}")));
    }
    Ok(())
}

/// Parameter values of a bifurcation scan, `steps` points from `r_min` to `r_max`.
pub fn parameter_grid(r_min: f64, r_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![r_min],
        n => (0..n)
            .map(|k| r_min + (r_max - r_min) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Critical-orbit samples after `burn_in` iterations.
pub fn attractor_samples(map: &MapFamily, burn_in: usize, samples: usize) -> Vec<f64> {
    let mut x = map.raw_iterate(map.critical(), burn_in);
    (0..samples)
        .map(|_| {
            x = map.raw(x);
            x
        })
        .collect()
}

pub fn cmd_bifurcation(
    cfg: &RunConfig,
    r_min: f64,
    r_max: f64,
    steps: usize,
    burn_in: usize,
    samples: usize,
) -> CliResult<()> {
    let mut columns = Vec::new();
    for r in parameter_grid(r_min, r_max, steps) {
        let map = cfg.map.with_parameter(r)?;
        columns.push((r, attractor_samples(&map, burn_in, samples)));
    }
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Column<'a> {
                r: f64,
                samples: &'a [f64],
            }
            let out: Vec<Column> = columns.iter().map(|(r, s)| Column { r: *r, samples: s }).collect();
            cfg.write_json(&out)
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                r: f64,
                x: f64,
            }
            let rows: Vec<Row> = columns
                .iter()
                .flat_map(|(r, s)| s.iter().map(move |&x| Row { r: *r, x }))
                .collect();
            cfg.write_csv(&rows)
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let needs_r = !matches!(cli.command, Command::Supercycle { .. } | Command::Bifurcation { .. });
    let mut common = cli.common.clone();
    if common.map.is_none() && common.r.is_none() && !needs_r {
        // Parameter scans only need the family; any valid r will do.
        common.r = Some(match common.family {
            Some(FamilyArg::Tent) => 1.0,
            _ => 2.0,
        });
    }
    let cfg = RunConfig::from_args(&common)?;
    match &cli.command {
        Command::Orbit => cmd_orbit(&cfg),
        Command::Supercycle { p, r_lo, r_hi } => cmd_supercycle(&cfg, *p, *r_lo, *r_hi),
        Command::Extrema { q, segments_out } => cmd_extrema(&cfg, *q, segments_out.as_deref()),
        Command::Capture { q } => cmd_capture(&cfg, *q),
        Command::Prob {
            q,
            q_max,
            verify,
            samples,
        } => cmd_prob(&cfg, *q, *q_max, *verify, *samples),
        Command::Verify { q, samples, resolution } => cmd_verify(&cfg, *q, *samples, *resolution),
        Command::Bifurcation {
            r_min,
            r_max,
            r_steps,
            burn_in,
            samples,
        } => cmd_bifurcation(&cfg, *r_min, *r_max, *r_steps, *burn_in, *samples),
    }
}

/// Parse `args`, run, report errors on stderr and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("orbitcap: {e}");
            e.exit_code()
        }
    }
}
