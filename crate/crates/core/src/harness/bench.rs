//! Strong-scaling driver: wall time of the three-body routine, MMUPS and hitrate.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::config::ConfigMap;
use super::scenario::InitKind;
use crate::dynamics::{init_velocities, step, Thermostat};
use crate::error::{Error, Result};
use crate::params::{CutoffMode, Params, TraversalKind};
use crate::pbc::SimBox;
use crate::phase::PhaseSpace;
use crate::traversal::{hitrate, ForceEngine, TripletCounters};

/// Repetitions whose relative standard deviation exceeds this are flagged.
pub const VARIANCE_FLAG: f64 = 0.10;

/// Million molecule updates per second.
pub fn mmups(n: usize, iterations: u64, wall_seconds: f64) -> Result<f64> {
    if !(wall_seconds > 0.0) {
        return Err(Error::NonPositiveWallTime(wall_seconds));
    }
    Ok(n as f64 * iterations as f64 / (wall_seconds * 1e6))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub n: usize,
    pub box_length: f64,
    pub t_target: f64,
    pub r_c: f64,
    pub nu: f64,
    pub traversals: Vec<TraversalKind>,
    pub cutoffs: Vec<CutoffMode>,
    pub threads: Vec<usize>,
    pub iterations: u64,
    pub repetitions: usize,
    pub seed: u64,
    pub init: InitKind,
    pub output: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n: 37_000,
            box_length: 37.5,
            t_target: 1.2,
            r_c: 2.5,
            nu: Params::default().nu,
            traversals: TraversalKind::ALL.to_vec(),
            cutoffs: CutoffMode::ALL.to_vec(),
            threads: vec![1],
            iterations: 10,
            repetitions: 5,
            seed: 1,
            init: InitKind::Lattice,
            output: None,
        }
    }
}

impl BenchConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_config(ConfigMap::load(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_config(ConfigMap::parse(text)?)
    }

    pub fn from_config(mut c: ConfigMap) -> Result<Self> {
        let d = BenchConfig::default();
        let cfg = BenchConfig {
            n: c.take_or("n", d.n)?,
            box_length: c.take_or("box_length", d.box_length)?,
            t_target: c.take_or("t_target", d.t_target)?,
            r_c: c.take_or("r_c", d.r_c)?,
            nu: c.take_or("nu", d.nu)?,
            traversals: c.take_list("traversals")?.unwrap_or(d.traversals),
            cutoffs: c.take_list("cutoffs")?.unwrap_or(d.cutoffs),
            threads: c.take_list("threads")?.unwrap_or(d.threads),
            iterations: c.take_or("iterations", d.iterations)?,
            repetitions: c.take_or("repetitions", d.repetitions)?,
            seed: c.take_or("seed", d.seed)?,
            init: c.take_or("init", d.init)?,
            output: c.take_str("output").map(PathBuf::from),
        };
        c.finish()?;
        if cfg.threads.contains(&0) || cfg.threads.is_empty() {
            return Err(Error::config("threads must be a non-empty list of positive counts"));
        }
        if cfg.iterations == 0 || cfg.repetitions == 0 {
            return Err(Error::config("iterations and repetitions must be positive"));
        }
        if cfg.traversals.is_empty() || cfg.cutoffs.is_empty() {
            return Err(Error::config("traversals and cutoffs must not be empty"));
        }
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub traversal: TraversalKind,
    pub cutoff: CutoffMode,
    pub threads: usize,
    /// Mean over repetitions of the accumulated three-body routine time.
    pub wall_seconds: f64,
    /// Sample standard deviation over repetitions.
    pub wall_std: f64,
    /// Mean total time of the timed steps, for context.
    pub step_seconds: f64,
    pub mmups: f64,
    pub hitrate: f64,
    /// Wall time at the smallest thread count over this row's.
    pub speedup: f64,
    pub high_variance: bool,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub warnings: Vec<String>,
    pub metadata: Vec<(String, String)>,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str =
        "traversal,cutoff,threads,wall_seconds,wall_std,step_seconds,mmups,hitrate,speedup,high_variance";

    pub fn csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.4},{:.4},{}",
                r.traversal,
                r.cutoff,
                r.threads,
                r.wall_seconds,
                r.wall_std,
                r.step_seconds,
                r.mmups,
                r.hitrate,
                r.speedup,
                r.high_variance
            );
        }
        s
    }

    pub fn metadata_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "{k} = {v}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning = {w}");
        }
        s
    }

    pub fn row(&self, traversal: TraversalKind, cutoff: CutoffMode, threads: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.traversal == traversal && r.cutoff == cutoff && r.threads == threads)
    }
}

struct Repetition {
    triplet_seconds: f64,
    step_seconds: f64,
    counters: TripletCounters,
}

fn one_repetition(cfg: &BenchConfig, params: Params, threads: usize, seed: u64) -> Result<Repetition> {
    let bx = SimBox::cubic(cfg.box_length)?;
    let positions = cfg.init.positions(cfg.n, &bx, seed)?;
    let velocities = init_velocities(cfg.n, cfg.t_target, params.mass, seed ^ 0x5851_f42d)?;
    let mut phase = PhaseSpace::from_positions(bx, positions)?.with_velocities(velocities)?;
    let mut engine = ForceEngine::new(params, bx, threads)?;
    engine.compute(&mut phase)?;
    let mut rep = Repetition { triplet_seconds: 0.0, step_seconds: 0.0, counters: TripletCounters::default() };
    for _ in 0..cfg.iterations {
        let t0 = Instant::now();
        let eval = step(&mut phase, &mut engine, &Thermostat::off())?;
        rep.step_seconds += t0.elapsed().as_secs_f64();
        rep.triplet_seconds += eval.triplet_seconds;
        rep.counters += eval.counters;
    }
    Ok(rep)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = if xs.len() > 1 { xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (m, v.sqrt())
}

pub fn hardware_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Runs every (traversal, cutoff, threads) combination; `progress` gets one line per row.
pub fn run_benchmark(cfg: &BenchConfig, mut progress: impl FnMut(&BenchRow)) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    let hw = hardware_threads();
    for &t in &cfg.threads {
        if t > hw {
            report.warnings.push(format!("{t} threads requested but {hw} hardware threads available"));
        }
    }
    let base_threads = *cfg.threads.iter().min().unwrap_or(&1);
    report.metadata = vec![
        ("n".into(), cfg.n.to_string()),
        ("box_length".into(), cfg.box_length.to_string()),
        ("t_target".into(), cfg.t_target.to_string()),
        ("r_c".into(), cfg.r_c.to_string()),
        ("nu".into(), cfg.nu.to_string()),
        ("iterations".into(), cfg.iterations.to_string()),
        ("repetitions".into(), cfg.repetitions.to_string()),
        ("init".into(), format!("{:?}", cfg.init).to_lowercase()),
        ("hardware_threads".into(), hw.to_string()),
        ("speedup_reference_threads".into(), base_threads.to_string()),
        ("timing_scope".into(), "three-body pass only; step_seconds covers whole steps".into()),
        (
            "scheduling".into(),
            "colors run in sequence; tasks of one color are split by rayon work stealing, one task per cell".into(),
        ),
        ("pinning".into(), std::env::var("TRIBODY_PINNING").unwrap_or_else(|_| "platform default".into())),
    ];

    for &traversal in &cfg.traversals {
        for &cutoff in &cfg.cutoffs {
            let params =
                Params { nu: cfg.nu, r_c: cfg.r_c, t_target: cfg.t_target, cutoff, traversal, ..Params::default() };
            let mut base_wall = None;
            let mut threads_sorted = cfg.threads.clone();
            threads_sorted.sort_unstable();
            threads_sorted.dedup();
            for threads in threads_sorted {
                let mut walls = Vec::with_capacity(cfg.repetitions);
                let mut steps = Vec::with_capacity(cfg.repetitions);
                let mut counters = TripletCounters::default();
                for r in 0..cfg.repetitions {
                    let rep = one_repetition(cfg, params, threads, cfg.seed.wrapping_add(r as u64))?;
                    walls.push(rep.triplet_seconds);
                    steps.push(rep.step_seconds);
                    counters += rep.counters;
                }
                let (wall, std) = mean_std(&walls);
                let step_seconds = mean_std(&steps).0;
                let base = *base_wall.get_or_insert(wall);
                let row = BenchRow {
                    traversal,
                    cutoff,
                    threads,
                    wall_seconds: wall,
                    wall_std: std,
                    step_seconds,
                    mmups: mmups(cfg.n, cfg.iterations, wall)?,
                    hitrate: hitrate(&counters)?,
                    speedup: base / wall,
                    high_variance: wall > 0.0 && std / wall > VARIANCE_FLAG,
                };
                progress(&row);
                report.rows.push(row);
            }
        }
    }
    if let Some(out) = &cfg.output {
        if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(out, report.csv())?;
        std::fs::write(out.with_extension("meta"), report.metadata_text())?;
    }
    Ok(report)
}
