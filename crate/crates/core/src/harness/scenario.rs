//! Melt, equilibration and production runs driven by a config file.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use super::config::ConfigMap;
use crate::dynamics::{init_lattice, init_random, init_velocities, remove_net_momentum, step, Thermostat};
use crate::error::{Error, Result};
use crate::observables::{
    fit_interface, lrc_homogeneous, split_at_center_of_mass, DensityProfile, InterfaceFit, RadialDistribution, Side,
    ThermoAccumulator, ThermoAverages, ThermoSample,
};
use crate::params::{CutoffMode, Params, TraversalKind};
use crate::pbc::SimBox;
use crate::phase::PhaseSpace;
use crate::traversal::{ForceEngine, TripletCounters};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    Lattice,
    Random,
}

impl FromStr for InitKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lattice" => Ok(InitKind::Lattice),
            "random" => Ok(InitKind::Random),
            other => Err(format!("unknown init `{other}` (lattice or random)")),
        }
    }
}

impl InitKind {
    /// Initial positions; random placement keeps particles 0.8 apart.
    pub fn positions(self, n: usize, bx: &SimBox, seed: u64) -> Result<Vec<Vec3>> {
        match self {
            InitKind::Lattice => Ok(init_lattice(n, bx)),
            InitKind::Random => init_random(n, bx, 0.8, seed),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepPhase {
    Melt,
    Equil,
    Prod,
}

impl fmt::Display for StepPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepPhase::Melt => "melt",
            StepPhase::Equil => "equil",
            StepPhase::Prod => "prod",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub box_lengths: [f64; 3],
    /// Temperature, time step, cutoff, nu, traversal and cutoff mode live here.
    pub params: Params,
    pub steps_melt: u64,
    pub steps_equil: u64,
    pub steps_prod: u64,
    /// First step whose force evaluation includes the triplet term.
    pub nu_active_from_step: u64,
    pub seed: u64,
    pub threads: usize,
    pub init: InitKind,
    pub lrc: bool,
    pub sample_thermo: bool,
    pub sample_rdf: bool,
    pub sample_profile: bool,
    /// RDF accumulation stride in production steps.
    pub rdf_every: u64,
    /// Box length along z after the melt phase; switches to slab geometry.
    pub slab_lz: Option<f64>,
    pub output_dir: Option<PathBuf>,
    /// Progress line stride on stderr, 0 for silent.
    pub progress_every: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: "scenario".into(),
            n: 0,
            box_lengths: [0.0; 3],
            params: Params::default(),
            steps_melt: 0,
            steps_equil: 0,
            steps_prod: 0,
            nu_active_from_step: 0,
            seed: 1,
            threads: 1,
            init: InitKind::Lattice,
            lrc: true,
            sample_thermo: true,
            sample_rdf: false,
            sample_profile: false,
            rdf_every: 1,
            slab_lz: None,
            output_dir: None,
            progress_every: 0,
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_config(ConfigMap::load(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_config(ConfigMap::parse(text)?)
    }

    /// Box from `box_length`, from `lx`/`ly`/`lz`, or a cube of `density`.
    pub fn from_config(mut c: ConfigMap) -> Result<Self> {
        let d = Scenario::default();
        let pd = Params::default();
        let n: usize = c.take("n")?.ok_or_else(|| Error::config("missing key `n`"))?;
        let density: Option<f64> = c.take("density")?;
        let cube: Option<f64> = c.take("box_length")?;
        let (lx, ly, lz): (Option<f64>, Option<f64>, Option<f64>) = (c.take("lx")?, c.take("ly")?, c.take("lz")?);
        let box_lengths = match (density, cube, lx, ly, lz) {
            (None, Some(l), None, None, None) => [l; 3],
            (None, None, Some(x), Some(y), Some(z)) => [x, y, z],
            (Some(rho), None, None, None, None) if rho > 0.0 => [(n as f64 / rho).cbrt(); 3],
            _ => return Err(Error::config("give exactly one of `density`, `box_length` or all of `lx`, `ly`, `lz`")),
        };
        let params = Params {
            epsilon: c.take_or("epsilon", pd.epsilon)?,
            sigma: c.take_or("sigma", pd.sigma)?,
            mass: c.take_or("mass", pd.mass)?,
            nu: c.take_or("nu", pd.nu)?,
            r_c: c.take_or("r_c", pd.r_c)?,
            dt: c.take_or("dt", pd.dt)?,
            t_target: c.take("t_target")?.ok_or_else(|| Error::config("missing key `t_target`"))?,
            cutoff: c.take_or("cutoff", CutoffMode::Pair)?,
            traversal: c.take_or("traversal", TraversalKind::C08)?,
        };
        let s = Scenario {
            name: c.take_str("name").unwrap_or(d.name),
            n,
            box_lengths,
            params,
            steps_melt: c.take_or("steps_melt", 0)?,
            steps_equil: c.take_or("steps_equil", 0)?,
            steps_prod: c.take_or("steps_prod", 0)?,
            nu_active_from_step: c.take_or("nu_active_from_step", 0)?,
            seed: c.take_or("seed", d.seed)?,
            threads: c.take_or("threads", d.threads)?,
            init: c.take_or("init", d.init)?,
            lrc: c.take_or("lrc", d.lrc)?,
            sample_thermo: c.take_or("sample_thermo", d.sample_thermo)?,
            sample_rdf: c.take_or("sample_rdf", d.sample_rdf)?,
            sample_profile: c.take_or("sample_profile", d.sample_profile)?,
            rdf_every: c.take_or("rdf_every", d.rdf_every)?,
            slab_lz: c.take("slab_lz")?,
            output_dir: c.take_str("output_dir").map(PathBuf::from),
            progress_every: c.take_or("progress_every", 0)?,
        };
        c.finish()?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        SimBox::new(self.box_lengths[0], self.box_lengths[1], self.box_lengths[2])?.check_cutoff(self.params.r_c)?;
        if self.threads == 0 {
            return Err(Error::config("threads must be at least 1"));
        }
        if self.n < 2 {
            return Err(Error::config("a run needs at least two particles"));
        }
        if self.rdf_every == 0 {
            return Err(Error::config("rdf_every must be at least 1"));
        }
        if let Some(lz) = self.slab_lz {
            if !(lz > self.box_lengths[2]) {
                return Err(Error::config(format!("slab_lz {lz} must exceed lz {}", self.box_lengths[2])));
            }
        }
        Ok(())
    }

    pub fn total_steps(&self) -> u64 {
        self.steps_melt + self.steps_equil + self.steps_prod
    }

    pub fn phase_of(&self, s: u64) -> StepPhase {
        if s <= self.steps_melt {
            StepPhase::Melt
        } else if s <= self.steps_melt + self.steps_equil {
            StepPhase::Equil
        } else {
            StepPhase::Prod
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioReport {
    pub name: String,
    /// One sample per step, melt through production.
    pub thermo: Vec<ThermoSample>,
    /// Production means with the energy tail; `None` without production steps.
    pub averages: Option<ThermoAverages>,
    pub e_tail_per_n: f64,
    pub p_tail: f64,
    /// Counters summed over production.
    pub counters: TripletCounters,
    pub rdf: Option<Vec<(f64, f64)>>,
    pub profile: Option<Vec<(f64, f64)>>,
    pub fits: Vec<InterfaceFit>,
    pub fit_errors: Vec<(Side, String)>,
    pub final_phase: PhaseSpace,
    /// Accumulated three-body routine time over all steps.
    pub triplet_seconds: f64,
    pub total_seconds: f64,
}

impl ScenarioReport {
    pub fn thermo_csv(&self) -> String {
        let mut s = String::with_capacity(160 * (self.thermo.len() + 1));
        s.push_str(ThermoSample::CSV_HEADER);
        s.push('\n');
        for t in &self.thermo {
            s.push_str(&t.csv_row());
            s.push('\n');
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut rows = vec![("name".to_string(), self.name.clone())];
        match &self.averages {
            Some(a) => {
                rows.push(("samples".into(), a.samples.to_string()));
                for (k, v) in [
                    ("E/N", a.energy_per_n),
                    ("E2/N", a.e2_per_n),
                    ("E3/N", a.e3_per_n),
                    ("P", a.pressure),
                    ("T", a.temperature),
                    ("W2", a.w2),
                    ("W3", a.w3),
                ] {
                    rows.push((k.into(), format!("{v:.10}")));
                }
            }
            None => rows.push(("samples".into(), "absent".into())),
        }
        rows.push(("E_tail/N".into(), format!("{:.10}", self.e_tail_per_n)));
        rows.push(("P_tail".into(), format!("{:.10}", self.p_tail)));
        if let Ok(h) = crate::traversal::hitrate(&self.counters) {
            rows.push(("hitrate".into(), format!("{h:.4}")));
        }
        rows.push(("triplet_seconds".into(), format!("{:.6}", self.triplet_seconds)));
        rows.push(("total_seconds".into(), format!("{:.6}", self.total_seconds)));
        let mut s = String::from("key,value\n");
        for (k, v) in rows {
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

/// Runs all phases and writes outputs when `output_dir` is set.
pub fn run_scenario(sc: &Scenario) -> Result<ScenarioReport> {
    sc.validate()?;
    let started = Instant::now();
    let p = sc.params;
    let [lx, ly, lz] = sc.box_lengths;
    let bx = SimBox::new(lx, ly, lz)?;
    let positions = sc.init.positions(sc.n, &bx, sc.seed)?;
    let velocities = init_velocities(sc.n, p.t_target, p.mass, sc.seed.wrapping_add(0x9e37_79b9))?;
    let mut phase = PhaseSpace::from_positions(bx, positions)?.with_velocities(velocities)?;

    let nu_at = |s: u64| if s >= sc.nu_active_from_step { p.nu } else { 0.0 };
    let mut engine = ForceEngine::new(Params { nu: nu_at(0), ..p }, bx, sc.threads)?;
    let thermostat = Thermostat::rescale(p.t_target)?;
    let mut eval = engine.compute(&mut phase).map_err(|e| e.at_step(0))?;
    let mut triplet_seconds = eval.triplet_seconds;

    let mut slab = false;
    let tails = |phase: &PhaseSpace, slab: bool| {
        if sc.lrc && !slab {
            lrc_homogeneous(phase.density(), p.r_c, &p)
        } else {
            (0.0, 0.0)
        }
    };
    let (mut e_tail, mut p_tail) = tails(&phase, slab);

    let mut thermo = Vec::new();
    let mut acc = ThermoAccumulator::default();
    let mut counters = TripletCounters::default();
    let mut rdf: Option<RadialDistribution> = None;
    let mut profile: Option<DensityProfile> = None;
    let total = sc.total_steps();

    for s in 1..=total {
        let stage = sc.phase_of(s);
        if s == sc.nu_active_from_step && engine.params().nu != p.nu {
            engine.set_nu(p.nu)?;
        }
        eval = step(&mut phase, &mut engine, &thermostat).map_err(|e| e.at_step(s))?;
        triplet_seconds += eval.triplet_seconds;

        let sample = ThermoSample::new(
            s,
            phase.len(),
            phase.sim_box().volume(),
            &eval.energies,
            phase.kinetic_energy(p.mass),
            p_tail,
        );
        if sc.sample_thermo {
            thermo.push(sample);
        }
        if stage == StepPhase::Prod {
            acc.add(&sample);
            counters += eval.counters;
            if sc.sample_rdf && (s - sc.steps_melt - sc.steps_equil) % sc.rdf_every == 0 {
                match rdf.as_mut() {
                    Some(r) => r.accumulate(&phase),
                    None => {
                        let mut r = RadialDistribution::new(&phase)?;
                        r.accumulate(&phase);
                        rdf = Some(r);
                    }
                }
            }
            if sc.sample_profile {
                match profile.as_mut() {
                    Some(h) => h.accumulate(&phase),
                    None => {
                        let mut h = DensityProfile::new(&phase)?;
                        h.accumulate(&phase);
                        profile = Some(h);
                    }
                }
            }
        }
        if sc.progress_every > 0 && s % sc.progress_every == 0 {
            eprintln!(
                "{} step {s}/{total} [{stage}] E2/N {:.5} E3/N {:.5} P {:.5}",
                sc.name, sample.e2_per_n, sample.e3_per_n, sample.pressure
            );
        }

        if s == sc.steps_melt {
            if let Some(new_lz) = sc.slab_lz {
                extend_to_slab(&mut phase, &mut engine, new_lz).map_err(|e| e.at_step(s))?;
                slab = true;
                (e_tail, p_tail) = tails(&phase, slab);
            }
        }
    }

    let averages = acc.finish(e_tail);
    let rdf = rdf.map(|r| r.finalize(phase.density(), phase.len()));
    let profile = profile.map(|h| h.finalize());
    let mut fits = Vec::new();
    let mut fit_errors = Vec::new();
    if let (Some(prof), true) = (&profile, slab) {
        let (left, right) = split_at_center_of_mass(prof);
        for (side, half) in [(Side::Left, left), (Side::Right, right)] {
            match fit_interface(&half, side) {
                Ok(f) => fits.push(f),
                Err(e) => fit_errors.push((side, e.to_string())),
            }
        }
    }

    let report = ScenarioReport {
        name: sc.name.clone(),
        thermo,
        averages,
        e_tail_per_n: e_tail,
        p_tail,
        counters,
        rdf,
        profile,
        fits,
        fit_errors,
        final_phase: phase,
        triplet_seconds,
        total_seconds: started.elapsed().as_secs_f64(),
    };
    if let Some(dir) = &sc.output_dir {
        write_outputs(&report, dir)?;
    }
    Ok(report)
}

/// Stretches the box along z with the film centered, then removes net momentum.
fn extend_to_slab(phase: &mut PhaseSpace, engine: &mut ForceEngine, new_lz: f64) -> Result<()> {
    let l = phase.sim_box().lengths();
    let bx = SimBox::new(l.x, l.y, new_lz)?;
    let dz = 0.5 * (new_lz - l.z);
    for x in &mut phase.positions {
        x.z += dz;
    }
    phase.set_box(bx);
    phase.wrap_all();
    remove_net_momentum(&mut phase.velocities);
    engine.resize(bx)?;
    engine.compute(phase)?;
    Ok(())
}

fn write_table(path: &Path, header: &str, rows: &[(f64, f64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for (a, b) in rows {
        writeln!(w, "{a:.8},{b:.10e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_outputs(report: &ScenarioReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("thermo.csv"), report.thermo_csv())?;
    fs::write(dir.join("summary.csv"), report.summary_csv())?;
    if let Some(r) = &report.rdf {
        write_table(&dir.join("rdf.csv"), "r,g", r)?;
    }
    if let Some(p) = &report.profile {
        write_table(&dir.join("profile.csv"), "z,rho", p)?;
    }
    if !report.fits.is_empty() || !report.fit_errors.is_empty() {
        let mut w = BufWriter::new(File::create(dir.join("fit.csv"))?);
        writeln!(w, "# rho(z) = (rho_l+rho_g)/2 -+ (rho_l-rho_g)/2 tanh(2(z-z0)/d), minus on the right interface")?;
        writeln!(w, "side,rho_l,rho_g,z0,d,residual")?;
        for f in &report.fits {
            writeln!(w, "{},{:.8},{:.8},{:.8},{:.8},{:.6e}", f.side, f.rho_l, f.rho_g, f.z0, f.d, f.residual)?;
        }
        for (side, e) in &report.fit_errors {
            writeln!(w, "# {side}: {e}")?;
        }
        w.flush()?;
    }
    report.final_phase.write_snapshot(BufWriter::new(File::create(dir.join("final.snap"))?))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "name = small\nn = 216\ndensity = 0.5\nt_target = 1.5\nsteps_melt = 5\nsteps_prod = 5\nnu_active_from_step = 5\n";

    #[test]
    fn parses_defaults_and_box() {
        let s = Scenario::parse(SMALL).unwrap();
        assert_eq!(s.n, 216);
        assert!((s.box_lengths[0] - 7.5595).abs() < 1e-3);
        assert_eq!(s.params.traversal, TraversalKind::C08);
        assert_eq!(s.total_steps(), 10);
        assert_eq!(s.phase_of(5), StepPhase::Melt);
        assert_eq!(s.phase_of(6), StepPhase::Prod);
    }

    #[test]
    fn unknown_keys_are_listed() {
        let err = Scenario::parse(&format!("{SMALL}colour = red\nspeed = 3\n")).unwrap_err();
        match err {
            Error::UnknownKeys(k) => assert_eq!(k, vec!["colour".to_string(), "speed".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conflicting_box_keys() {
        assert!(Scenario::parse("n = 10\nt_target = 1\ndensity = 0.5\nbox_length = 6\n").is_err());
    }

    #[test]
    fn empty_production_has_no_averages() {
        let s = Scenario { steps_prod: 0, ..Scenario::parse(SMALL).unwrap() };
        let r = run_scenario(&s).unwrap();
        assert!(r.averages.is_none());
        assert_eq!(r.thermo.len(), 5);
        assert!(r.summary_csv().contains("samples,absent"));
    }

    #[test]
    fn nu_switches_on() {
        let r = run_scenario(&Scenario::parse(SMALL).unwrap()).unwrap();
        assert_eq!(r.thermo.len(), 10);
        assert!(r.thermo[..4].iter().all(|t| t.e3_per_n == 0.0));
        assert!(r.thermo[4..].iter().all(|t| t.e3_per_n > 0.0));
        let a = r.averages.unwrap();
        assert_eq!(a.samples, 5);
        assert!((a.temperature - 1.5).abs() < 1e-12);
    }

    #[test]
    fn slab_extension_centers_film() {
        let text = "n = 300\nlx = 7.5\nly = 7.5\nlz = 7.5\nt_target = 0.9\nsteps_melt = 3\nsteps_prod = 3\nslab_lz = 22.5\nsample_profile = true\n";
        let r = run_scenario(&Scenario::parse(text).unwrap()).unwrap();
        assert_eq!(r.final_phase.sim_box().lengths().z, 22.5);
        assert_eq!(r.p_tail, 0.0);
        let prof = r.profile.unwrap();
        let mass: f64 = prof.iter().map(|x| x.1).sum::<f64>() * 7.5 * 7.5 * 22.5 / 600.0;
        assert!((mass - 300.0).abs() < 1e-9);
        assert!(r.final_phase.total_momentum(1.0).norm() < 1e-10);
    }
}
