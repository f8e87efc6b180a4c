//! Verb dispatch, output layout and run records.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::dynamics::{energy_residual, random_perturbation, simulate, write_energy_csv, DynamicsError};
use crate::experiments::{
    run_decay_experiment, run_growth_experiment, run_hyperbolic_escape_experiment, run_normal_stability_experiment,
    sweep_phase_diagram, write_sweep_csv, EscapeSetup, ExperimentError, SweepSpec,
};
use crate::params::Equilibrium;
use crate::snapshot::write_snapshot;
use crate::stability::{classify_disordered, classify_ordered, classify_polar_manifold, AnalysisError, RegimeVerdict};

pub const THREADS_ENV: &str = "ACTIFLOW_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Classify,
    Simulate,
    Decay,
    Growth,
    NormalStability,
    Escape,
    Sweep,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Self::Classify => "classify",
            Self::Simulate => "simulate",
            Self::Decay => "experiment decay",
            Self::Growth => "experiment growth",
            Self::NormalStability => "experiment normal-stability",
            Self::Escape => "experiment escape",
            Self::Sweep => "experiment sweep",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 1 for numerical failures during a run, 2 for everything that stops a
    /// run from starting.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Dynamics(_) | Self::Experiment(ExperimentError::Dynamics(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub outdir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub serial: bool,
}

impl RunOptions {
    /// 1 in serial mode, else `ACTIFLOW_THREADS` or the available cores.
    pub fn threads(&self) -> usize {
        if self.serial {
            return 1;
        }
        let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
        match std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
            Some(cap) if cap > 0 => cap.min(cores).max(1),
            _ => cores,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub tool_version: String,
    pub timestamp: String,
    pub verb: String,
    pub seed: u64,
    pub threads: usize,
    /// The config file byte for byte.
    pub config: String,
    pub pass: Option<bool>,
    pub results: Value,
    pub files: Vec<FileEntry>,
    /// SHA-256 over every field except `timestamp` and this one.
    pub record_hash: String,
}

impl RunRecord {
    fn seal(mut self) -> Self {
        let mut v = serde_json::to_value(&self).expect("record serializes");
        let obj = v.as_object_mut().expect("record is an object");
        obj.remove("timestamp");
        obj.remove("record_hash");
        obj.remove("threads");
        self.record_hash = hex::encode(Sha256::digest(v.to_string().as_bytes()));
        self
    }
}

pub struct Outcome {
    pub exit_code: i32,
    pub record: RunRecord,
    pub outdir: PathBuf,
}

struct Output {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Output {
    fn create(dir: PathBuf) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: Vec::new() })
    }

    fn write(&mut self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> std::io::Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        f(&mut w)?;
        w.flush()?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> std::io::Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)
        })
    }

    fn manifest(&self) -> std::io::Result<Vec<FileEntry>> {
        let mut out = Vec::new();
        for name in &self.files {
            let bytes = std::fs::read(self.dir.join(name))?;
            out.push(FileEntry {
                path: name.to_string_lossy().into_owned(),
                bytes: bytes.len() as u64,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        Ok(out)
    }
}

fn verdict_line(equilibrium: &str, analysis: &str, v: &RegimeVerdict) -> Value {
    json!({
        "equilibrium": equilibrium,
        "analysis": analysis,
        "label": v.regime,
        "witness_mode": v.witness.as_ref().map(|w| w.mode.clone()),
        "quadratic_form": v.witness.as_ref().map(|w| w.quadratic_form),
        "growth_rate": v.witness.as_ref().map(|w| w.growth_rate),
        "rule": v.rule,
        "near_boundary": v.near_boundary,
        "details": v.details,
    })
}

/// Runs `verb`, writing its outputs and `meta.json` under the output
/// directory and human-facing lines to `console`.
pub fn dispatch(verb: Verb, cfg: &RunConfig, opts: &RunOptions, console: &mut dyn Write) -> Result<Outcome, RunError> {
    let seed = opts.seed.unwrap_or(cfg.seed);
    let threads = opts.threads();
    let dir = opts.outdir.clone().unwrap_or_else(|| cfg.outdir.clone());
    let mut out = Output::create(dir.clone())?;
    let (pass, results) = match verb {
        Verb::Classify => classify(cfg, &mut out, console)?,
        Verb::Simulate => simulate_verb(cfg, seed, &mut out, console)?,
        Verb::Decay => {
            let sim = cfg.sim_config()?;
            if cfg.ordered {
                return Err(ExperimentError::Hypothesis("decay experiments run at the disordered state".into()).into());
            }
            let u0 = random_perturbation(sim.lattice, seed, cfg.perturbation_h2);
            let r = run_decay_experiment(&sim, &u0)?;
            out.write("energy.csv", |w| write_energy_csv(w, &r.energy))?;
            writeln!(
                console,
                "{} decay: guaranteed rate {:.6}, worst bound ratio {:.9}",
                status(r.pass),
                r.guaranteed_rate,
                r.worst_bound_ratio
            )?;
            (Some(r.pass), serde_json::to_value(&r).expect("report serializes"))
        }
        Verb::Growth => {
            let sim = cfg.sim_config()?;
            let mode = cfg.ell0.as_ref().map(|l| {
                let mut m = [0; 3];
                m[..l.len()].copy_from_slice(l);
                m
            });
            let r = run_growth_experiment(&sim, mode)?;
            out.write("growth.csv", |w| {
                writeln!(w, "t,amplitude")?;
                for (t, a) in &r.series {
                    writeln!(w, "{t:.17e},{a:.17e}")?;
                }
                Ok(())
            })?;
            writeln!(
                console,
                "{} growth of mode {:?}: fitted {:.6}, predicted {:.6}, relative error {:.2e}",
                status(r.pass),
                r.mode,
                r.fitted_rate,
                r.predicted_rate,
                r.rel_error
            )?;
            (Some(r.pass), serde_json::to_value(&r).expect("report serializes"))
        }
        Verb::NormalStability => {
            let sim = cfg.sim_config()?;
            let u0 = random_perturbation(sim.lattice, seed, cfg.perturbation_h2);
            let r = run_normal_stability_experiment(&sim, &u0)?;
            out.write("distance.csv", |w| {
                writeln!(w, "t,dist_l2,dist_h2")?;
                for d in &r.distances {
                    writeln!(w, "{:.17e},{:.17e},{:.17e}", d.t, d.dist_l2, d.dist_h2)?;
                }
                Ok(())
            })?;
            writeln!(
                console,
                "{} normal stability: decay rate {:.6}, terminal speed error {:.2e}",
                status(r.pass),
                r.decay_rate,
                r.terminal_speed_error
            )?;
            let mut v = serde_json::to_value(&r).expect("report serializes");
            v.as_object_mut().expect("object").remove("distances");
            (Some(r.pass), v)
        }
        Verb::Escape => {
            let sim = cfg.sim_config()?;
            let speed = cfg.params.polar_speed().unwrap_or(0.0);
            let setup = EscapeSetup {
                rho: cfg.rho.unwrap_or(0.1 * speed),
                seeds: (seed..seed + cfg.seeds).collect(),
                h2: cfg.perturbation_h2,
                stable_subspace: cfg.stable_subspace,
                threads,
            };
            let r = run_hyperbolic_escape_experiment(&sim, &setup)?;
            out.write("escape.csv", |w| {
                writeln!(w, "seed,branch,exit_time,initial_dist_h2,final_dist_h2")?;
                for run in &r.runs {
                    let exit = run.exit_time.map_or(String::new(), |t| format!("{t:.17e}"));
                    writeln!(
                        w,
                        "{},{:?},{exit},{:.17e},{:.17e}",
                        run.seed, run.branch, run.initial_distance, run.final_distance
                    )?;
                }
                Ok(())
            })?;
            writeln!(
                console,
                "{} escape: {} of {} seeds left the rho = {} neighbourhood, {} converged",
                status(r.pass),
                r.escaped,
                r.runs.len(),
                r.rho,
                r.converged
            )?;
            let mut v = serde_json::to_value(&r).expect("report serializes");
            for run in v["runs"].as_array_mut().expect("runs array") {
                run.as_object_mut().expect("object").remove("distances");
            }
            (Some(r.pass), v)
        }
        Verb::Sweep => {
            let spec = SweepSpec {
                base: cfg.params,
                direction: cfg.direction.clone(),
                gamma0: cfg.sweep_gamma0,
                alpha: cfg.sweep_alpha,
                points: cfg.sweep_points,
            };
            let rows = sweep_phase_diagram(&spec)?;
            out.write("sweep.csv", |w| write_sweep_csv(w, &rows))?;
            let boundary = rows.iter().filter(|r| r.disordered_boundary || r.ordered_boundary).count();
            writeln!(console, "sweep: {} cells classified, {boundary} near a boundary", rows.len())?;
            (None, json!({ "cells": rows.len(), "boundary_cells": boundary }))
        }
    };
    out.json("result.json", &json!({ "verb": verb.name(), "pass": pass, "results": results }))?;
    let record = RunRecord {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string(),
        verb: verb.name().to_string(),
        seed,
        threads,
        config: cfg.raw.clone(),
        pass,
        results,
        files: out.manifest()?,
        record_hash: String::new(),
    }
    .seal();
    write_meta(&dir, &record)?;
    Ok(Outcome {
        exit_code: if pass == Some(false) { 1 } else { 0 },
        record,
        outdir: dir,
    })
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn write_meta(dir: &Path, record: &RunRecord) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(dir.join("meta.json"))?);
    serde_json::to_writer_pretty(&mut w, record)?;
    writeln!(w)?;
    w.flush()
}

fn classify(cfg: &RunConfig, out: &mut Output, console: &mut dyn Write) -> Result<(Option<bool>, Value), RunError> {
    let mut lines = Vec::new();
    match cfg.equilibrium() {
        Equilibrium::Disordered => {
            let v = classify_disordered(&cfg.params, cfg.lattice_bound)?;
            lines.push(verdict_line("disordered", "linear", &v));
        }
        Equilibrium::Ordered { v } => {
            let lin = classify_ordered(&cfg.params, &v, cfg.lattice_bound)?;
            lines.push(verdict_line("ordered", "linear", &lin));
            let man = classify_polar_manifold(&cfg.params, &v)?;
            lines.push(verdict_line("ordered", "manifold", &man));
        }
    }
    for l in &lines {
        writeln!(console, "{l}")?;
    }
    out.write("verdicts.jsonl", |w| {
        for l in &lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    })?;
    Ok((None, Value::Array(lines)))
}

fn simulate_verb(cfg: &RunConfig, seed: u64, out: &mut Output, console: &mut dyn Write) -> Result<(Option<bool>, Value), RunError> {
    let sim = cfg.sim_config()?;
    let u0 = random_perturbation(sim.lattice, seed, cfg.perturbation_h2);
    let traj = simulate(&sim, &u0)?;
    for (k, (_, v)) in traj.snapshots.iter().enumerate() {
        out.write(&format!("snapshot_{k:06}.bin"), |w| {
            write_snapshot(w, v).map_err(std::io::Error::other)
        })?;
    }
    out.write("energy.csv", |w| write_energy_csv(w, &traj.energy))?;
    let residual = energy_residual(&traj, &sim).ok().map(|r| r.into_iter().fold(0.0, f64::max));
    let last = traj.energy.last().expect("at least the initial record");
    writeln!(
        console,
        "simulated {} steps to t = {}, final |u|^2 = {:.6e}",
        traj.steps, traj.final_time, last.l2sq
    )?;
    let times: Vec<f64> = traj.snapshots.iter().map(|s| s.0).collect();
    Ok((
        None,
        json!({
            "steps": traj.steps,
            "final_time": traj.final_time,
            "final_l2sq": last.l2sq,
            "max_energy_residual": residual,
            "snapshot_times": times,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;

    const EXAMPLE: &str = "n = 2\nN = 4\nL = 2pi\nlambda0 = 1\nalpha = -1/4\nbeta = 1\ngamma0 = -5\ngamma2 = 4\nequilibrium = ordered\n";

    #[test]
    fn classify_writes_two_verdicts_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config_str(EXAMPLE).unwrap();
        let opts = RunOptions {
            outdir: Some(dir.path().to_path_buf()),
            serial: true,
            ..Default::default()
        };
        let mut console = Vec::new();
        let o = dispatch(Verb::Classify, &cfg, &opts, &mut console).unwrap();
        assert_eq!(o.exit_code, 0);
        let text = String::from_utf8(console).unwrap();
        assert!(text.lines().nth(1).unwrap().contains("NormallyHyperbolic"));
        let names: Vec<&str> = o.record.files.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(names, ["verdicts.jsonl", "result.json"]);
        assert_eq!(o.record.config, EXAMPLE);
        let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("meta.json")).unwrap()).unwrap();
        assert_eq!(meta["record_hash"], o.record.record_hash.as_str());
    }

    #[test]
    fn hypothesis_gates_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let stable = "n = 2\nN = 4\nL = 2pi\nalpha = 1\nbeta = 1\ngamma0 = 1\ngamma2 = 1\n";
        let cfg = parse_config_str(stable).unwrap();
        let opts = RunOptions {
            outdir: Some(dir.path().to_path_buf()),
            serial: true,
            ..Default::default()
        };
        for verb in [Verb::Growth, Verb::NormalStability, Verb::Escape] {
            let err = dispatch(verb, &cfg, &opts, &mut std::io::sink()).err().unwrap();
            assert_eq!(err.exit_code(), 2, "{verb:?}: {err}");
        }
    }

    #[test]
    fn serial_mode_ignores_thread_env() {
        let opts = RunOptions {
            serial: true,
            ..Default::default()
        };
        assert_eq!(opts.threads(), 1);
    }
}
