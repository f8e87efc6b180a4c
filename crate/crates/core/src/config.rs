//! Flat `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Numbers accept `pi` multiples (`2pi`, `0.5*pi`) and fractions (`-1/4`).
//! Unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dynamics::SimConfig;
use crate::lattice::Lattice;
use crate::params::{Equilibrium, ModelParams, ParamError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    Unknown { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: cannot read `{value}` as {expected}")]
    Type {
        key: &'static str,
        value: String,
        expected: &'static str,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Param(#[from] ParamError),
}

const REQUIRED: [&str; 7] = ["n", "N", "L", "alpha", "beta", "gamma0", "gamma2"];
const OPTIONAL: [&str; 20] = [
    "lambda0",
    "lambda1",
    "dt",
    "t_end",
    "equilibrium",
    "V_direction",
    "seed",
    "perturbation_h2",
    "dealias",
    "snapshot_every",
    "outdir",
    "rho",
    "ell0",
    "seeds",
    "stable_subspace",
    "sweep_gamma0",
    "sweep_alpha",
    "sweep_points",
    "linear_only",
    "lattice_bound",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub radius: usize,
    pub dt: f64,
    pub t_end: f64,
    pub ordered: bool,
    pub direction: Vec<f64>,
    pub seed: u64,
    pub perturbation_h2: f64,
    pub dealias: bool,
    pub snapshot_every: usize,
    pub outdir: PathBuf,
    /// Escape radius; defaults to `0.1·sqrt(-α/β)`.
    pub rho: Option<f64>,
    pub ell0: Option<Vec<i64>>,
    /// Number of consecutive seeds for the escape experiment.
    pub seeds: u64,
    pub stable_subspace: bool,
    pub sweep_gamma0: (f64, f64),
    pub sweep_alpha: (f64, f64),
    pub sweep_points: usize,
    pub linear_only: bool,
    /// Restrict classification scans to `|ℓ_i| <= lattice_bound`.
    pub lattice_bound: Option<usize>,
    /// The file exactly as read.
    pub raw: String,
}

pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(coef) = s.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_number(other)?,
        };
        return Some(c * std::f64::consts::PI);
    }
    if let Some((a, b)) = s.split_once('/') {
        return Some(parse_number(a)? / parse_number(b)?);
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    s.split(',').map(|x| item(x.trim())).collect()
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn typed<T>(&self, key: &'static str, expected: &'static str, f: impl Fn(&str) -> Option<T>) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => f(v).map(Some).ok_or_else(|| ConfigError::Type {
                key,
                value: v.to_string(),
                expected,
            }),
        }
    }

    fn number(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        self.typed(key, "a number", parse_number)
    }

    fn required(&self, key: &'static str) -> Result<f64, ConfigError> {
        self.number(key)?.ok_or(ConfigError::Missing(key))
    }

    fn count(&self, key: &'static str) -> Result<Option<u64>, ConfigError> {
        self.typed(key, "a non-negative integer", |s| s.parse::<u64>().ok())
    }

    fn pair(&self, key: &'static str) -> Result<Option<(f64, f64)>, ConfigError> {
        self.typed(key, "two comma-separated numbers", |s| {
            let v = parse_list(s, parse_number)?;
            (v.len() == 2).then(|| (v[0], v[1]))
        })
    }
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !REQUIRED.contains(&k) && !OPTIONAL.contains(&k) {
            return Err(ConfigError::Unknown {
                line: line_no,
                key: k.to_string(),
            });
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ConfigError::Duplicate {
                line: line_no,
                key: k.to_string(),
            });
        }
    }
    let e = Entries(map);
    let dim = e.typed("n", "2 or 3", |s| s.parse::<usize>().ok())?.ok_or(ConfigError::Missing("n"))?;
    let radius = e
        .typed("N", "a non-negative integer", |s| s.parse::<usize>().ok())?
        .ok_or(ConfigError::Missing("N"))?;
    let params = ModelParams {
        lambda0: e.number("lambda0")?.unwrap_or(0.0),
        lambda1: e.number("lambda1")?.unwrap_or(0.0),
        alpha: e.required("alpha")?,
        beta: e.required("beta")?,
        gamma0: e.required("gamma0")?,
        gamma2: e.required("gamma2")?,
        length: e.required("L")?,
        dim,
    };
    params.validate()?;
    let ordered = match e.get("equilibrium").unwrap_or("disordered") {
        "disordered" => false,
        "ordered" => true,
        other => {
            return Err(ConfigError::Type {
                key: "equilibrium",
                value: other.to_string(),
                expected: "`disordered` or `ordered`",
            })
        }
    };
    let mut default_dir = vec![0.0; dim];
    default_dir[0] = 1.0;
    let direction = e
        .typed("V_direction", "comma-separated numbers", |s| parse_list(s, parse_number))?
        .unwrap_or(default_dir);
    if direction.len() != dim {
        return Err(ConfigError::Invalid(format!(
            "V_direction has {} entries, expected n = {dim}",
            direction.len()
        )));
    }
    if ordered {
        Equilibrium::ordered(&params, &direction)?;
    }
    let ell0 = e.typed("ell0", "comma-separated integers", |s| parse_list(s, |x| x.parse::<i64>().ok()))?;
    if let Some(l) = &ell0 {
        if l.len() != dim {
            return Err(ConfigError::Invalid(format!("ell0 has {} entries, expected n = {dim}", l.len())));
        }
    }
    let cfg = RunConfig {
        params,
        radius,
        dt: e.number("dt")?.unwrap_or(1e-3),
        t_end: e.number("t_end")?.unwrap_or(1.0),
        ordered,
        direction,
        seed: e.count("seed")?.unwrap_or(0),
        perturbation_h2: e.number("perturbation_h2")?.unwrap_or(1e-3),
        dealias: e.typed("dealias", "a boolean", parse_bool)?.unwrap_or(true),
        snapshot_every: e.count("snapshot_every")?.unwrap_or(10) as usize,
        outdir: PathBuf::from(e.get("outdir").unwrap_or("out")),
        rho: e.number("rho")?,
        ell0,
        seeds: e.count("seeds")?.unwrap_or(10),
        stable_subspace: e.typed("stable_subspace", "a boolean", parse_bool)?.unwrap_or(false),
        sweep_gamma0: e.pair("sweep_gamma0")?.unwrap_or((-5.0, 5.0)),
        sweep_alpha: e.pair("sweep_alpha")?.unwrap_or((-2.0, 2.0)),
        sweep_points: e.count("sweep_points")?.unwrap_or(41) as usize,
        linear_only: e.typed("linear_only", "a boolean", parse_bool)?.unwrap_or(false),
        lattice_bound: e.count("lattice_bound")?.map(|b| b as usize),
        raw: text.to_string(),
    };
    if !(cfg.dt > 0.0) {
        return Err(ConfigError::Invalid(format!("dt must be positive, got {}", cfg.dt)));
    }
    if !(cfg.t_end >= 0.0) {
        return Err(ConfigError::Invalid(format!("t_end must be non-negative, got {}", cfg.t_end)));
    }
    if cfg.snapshot_every == 0 {
        return Err(ConfigError::Invalid("snapshot_every must be at least 1".into()));
    }
    if !(cfg.perturbation_h2 >= 0.0) {
        return Err(ConfigError::Invalid("perturbation_h2 must be non-negative".into()));
    }
    if cfg.sweep_points == 0 {
        return Err(ConfigError::Invalid("sweep_points must be at least 1".into()));
    }
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    parse_config_str(&std::fs::read_to_string(path)?)
}

impl RunConfig {
    pub fn equilibrium(&self) -> Equilibrium {
        if self.ordered {
            Equilibrium::ordered(&self.params, &self.direction).expect("checked at parse time")
        } else {
            Equilibrium::Disordered
        }
    }

    pub fn lattice(&self) -> Result<Lattice, ConfigError> {
        Lattice::new(self.params.dim, self.radius, self.params.length).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn sim_config(&self) -> Result<SimConfig, ConfigError> {
        let mut sim = SimConfig::new(self.params, self.equilibrium(), self.lattice()?, self.dt, self.t_end);
        sim.dealias = self.dealias;
        sim.snapshot_every = self.snapshot_every;
        sim.linear_only = self.linear_only;
        Ok(sim)
    }
}
