//! `key = value` run configuration. Blank lines and `#` comments are
//! ignored; command-line overrides replace file entries key by key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use vortinv::field::Grid;
use vortinv::fixtures::Fixture;
use vortinv::forward::{SolverConfig, StoragePolicy};
use vortinv::inverse::{InverseConfig, JacobianMode, Method};

use crate::error::{CliError, Result};
use crate::fixture::parse_fixture_spec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Forward,
    Inverse,
    Verify,
    Stability,
    Convergence,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Forward,
        Command::Inverse,
        Command::Verify,
        Command::Stability,
        Command::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Forward => "forward",
            Command::Inverse => "inverse",
            Command::Verify => "verify",
            Command::Stability => "stability",
            Command::Convergence => "convergence",
        }
    }
}

/// Mean vorticity target: `auto` takes the mean of the initial field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Auto,
    Value(f64),
}

/// Boundary vorticity for forward runs: `auto` holds `h` at the boundary
/// value of the initial field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Auto,
    Value(f64),
}

/// Every accepted key with its default and meaning, in echo order.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("command", "", "forward | inverse | verify | stability | convergence"),
    ("grid", "65", "nodes per axis (sets nx and ny)"),
    ("nx", "", "nodes along x (overrides grid)"),
    ("ny", "", "nodes along y (overrides grid)"),
    ("lx", "1", "domain length along x"),
    ("ly", "1", "domain length along y"),
    ("dt", "0.001", "time step"),
    ("tmax", "0.1", "final time, a whole multiple of dt"),
    ("fixture", "taylor", "taylor | constant:C | mode:M,N[,AMP] | random-stream:SEED,MODES | file:PATH"),
    ("boundary", "auto", "forward boundary vorticity: auto or a constant"),
    ("advection", "true", "include the transport term"),
    ("cfl", "0.5", "fraction of the advective step limit"),
    ("store", "norms", "stored fields: all | norms | every:M"),
    ("method", "projection", "projection | landweber | lm"),
    ("L", "auto", "target mean vorticity, or auto for the initial mean"),
    ("max_iters", "200", "iteration cap for landweber and lm"),
    ("stop_tol", "1e-8", "residual norm that stops landweber and lm"),
    ("step_size", "auto", "Landweber step, or auto for 1/|J|^2"),
    ("damping", "1e-6", "initial Levenberg-Marquardt damping"),
    ("growth", "10", "damping growth factor"),
    ("jacobian", "sensitivity", "sensitivity | fd"),
    ("fd_eps", "1e-4", "finite-difference step for the Jacobian"),
    ("grids", "33,65,129", "grid ladder for convergence (at least 3)"),
    ("eps", "0.1,0.01,0.001", "perturbation sizes for stability"),
    ("directions", "2:2,1:2,3:1", "stream-function perturbation modes M:N for stability"),
    ("samples", "100", "elliptic probe sample count for verify"),
    ("seed", "0", "seed for the elliptic probe"),
    ("out", "out", "output directory"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dt: f64,
    pub tmax: f64,
    pub fixture: Fixture,
    pub boundary: Boundary,
    pub advection: bool,
    pub cfl: f64,
    pub store: StoragePolicy,
    pub method: Method,
    pub target: Target,
    pub max_iters: usize,
    pub stop_tol: f64,
    pub step_size: Option<f64>,
    pub damping: f64,
    pub growth: f64,
    pub jacobian: JacobianMode,
    pub fd_eps: f64,
    pub grids: Vec<usize>,
    pub eps: Vec<f64>,
    pub directions: Vec<(u32, u32)>,
    pub samples: usize,
    pub seed: u64,
    pub out: PathBuf,
}

/// Splits config text into entries. Keys must be known and appear once.
pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = BTreeMap::new();
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Syntax {
                line: i + 1,
                message: format!("expected key = value, got `{line}`"),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.iter().any(|(key, _, _)| *key == k) {
            return Err(CliError::UnknownKey(k.to_string()));
        }
        if seen.insert(k.to_string(), i + 1).is_some() {
            return Err(CliError::Syntax {
                line: i + 1,
                message: format!("duplicate key `{k}`"),
            });
        }
        entries.push((k.to_string(), v.to_string()));
    }
    Ok(entries)
}

/// Builds a validated [`RunConfig`] from config text and overrides.
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut map: BTreeMap<String, String> = parse_entries(text)?.into_iter().collect();
    for (k, v) in overrides {
        if !KEYS.iter().any(|(key, _, _)| key == k) {
            return Err(CliError::UnknownKey(k.clone()));
        }
        map.insert(k.clone(), v.trim().to_string());
    }
    let get = |k: &str| -> Option<&str> {
        map.get(k).map(String::as_str).or_else(|| {
            KEYS.iter()
                .find(|(key, _, _)| *key == k)
                .map(|(_, d, _)| *d)
                .filter(|d| !d.is_empty())
        })
    };

    let command = match get("command") {
        None => return Err(CliError::Inconsistent("no command given".into())),
        Some(c) => Command::ALL
            .into_iter()
            .find(|x| x.name() == c)
            .ok_or_else(|| mismatch("command", c, "a subcommand name"))?,
    };
    let grid: usize = number(&get, "grid", "a node count")?;
    let nx = optional(&get, "nx", "a node count")?.unwrap_or(grid);
    let ny = optional(&get, "ny", "a node count")?.unwrap_or(grid);
    let fixture_spec = get("fixture").unwrap_or_default();
    let fixture = parse_fixture_spec(fixture_spec).map_err(|_| mismatch("fixture", fixture_spec, "a fixture spec"))?;
    if let Fixture::File(p) = &fixture {
        if !Path::new(p).is_file() {
            return Err(CliError::MissingFile(PathBuf::from(p)));
        }
    }
    let cfg = RunConfig {
        command,
        nx,
        ny,
        lx: number(&get, "lx", "a length")?,
        ly: number(&get, "ly", "a length")?,
        dt: number(&get, "dt", "a number")?,
        tmax: number(&get, "tmax", "a number")?,
        fixture,
        boundary: match get("boundary") {
            Some("auto") | None => Boundary::Auto,
            Some(v) => Boundary::Value(finite(v).ok_or_else(|| mismatch("boundary", v, "auto or a number"))?),
        },
        advection: number(&get, "advection", "true or false")?,
        cfl: number(&get, "cfl", "a number")?,
        store: parse_storage(get("store").unwrap_or_default())?,
        method: match get("method").unwrap_or_default() {
            "projection" => Method::Projection,
            "landweber" => Method::Landweber,
            "lm" => Method::LevenbergMarquardt,
            v => return Err(mismatch("method", v, "projection, landweber, or lm")),
        },
        target: match get("L") {
            Some("auto") | None => Target::Auto,
            Some(v) => Target::Value(finite(v).ok_or_else(|| mismatch("L", v, "auto or a number"))?),
        },
        max_iters: number(&get, "max_iters", "a count")?,
        stop_tol: number(&get, "stop_tol", "a number")?,
        step_size: match get("step_size") {
            Some("auto") | None => None,
            Some(v) => Some(finite(v).ok_or_else(|| mismatch("step_size", v, "auto or a number"))?),
        },
        damping: number(&get, "damping", "a number")?,
        growth: number(&get, "growth", "a number")?,
        jacobian: match get("jacobian").unwrap_or_default() {
            "sensitivity" => JacobianMode::Sensitivity,
            "fd" => JacobianMode::FiniteDifference,
            v => return Err(mismatch("jacobian", v, "sensitivity or fd")),
        },
        fd_eps: number(&get, "fd_eps", "a number")?,
        grids: list(&get, "grids", "a comma-separated list of node counts", |s| s.parse().ok())?,
        eps: list(&get, "eps", "a comma-separated list of numbers", finite)?,
        directions: list(&get, "directions", "a comma-separated list of M:N pairs", |s| {
            let (m, n) = s.split_once(':')?;
            Some((m.trim().parse().ok()?, n.trim().parse().ok()?))
        })?,
        samples: number(&get, "samples", "a count")?,
        seed: number(&get, "seed", "an unsigned integer")?,
        out: PathBuf::from(get("out").unwrap_or_default()),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn mismatch(key: &str, value: &str, expected: &'static str) -> CliError {
    CliError::TypeMismatch {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    }
}

fn finite(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn number<'a, T: FromStr>(get: &impl Fn(&str) -> Option<&'a str>, key: &str, expected: &'static str) -> Result<T> {
    let v = get(key).unwrap_or_default();
    let parsed = v.parse::<T>().map_err(|_| mismatch(key, v, expected))?;
    // reject inf/nan spelled as floats
    if v.parse::<f64>().is_ok_and(|x| !x.is_finite()) {
        return Err(mismatch(key, v, expected));
    }
    Ok(parsed)
}

fn optional<'a, T: FromStr>(
    get: &impl Fn(&str) -> Option<&'a str>,
    key: &str,
    expected: &'static str,
) -> Result<Option<T>> {
    match get(key) {
        None => Ok(None),
        Some(_) => number(get, key, expected).map(Some),
    }
}

fn list<'a, T>(
    get: &impl Fn(&str) -> Option<&'a str>,
    key: &str,
    expected: &'static str,
    item: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>> {
    let v = get(key).unwrap_or_default();
    v.split(',')
        .map(|s| item(s.trim()))
        .collect::<Option<Vec<T>>>()
        .filter(|l| !l.is_empty())
        .ok_or_else(|| mismatch(key, v, expected))
}

fn parse_storage(v: &str) -> Result<StoragePolicy> {
    match v {
        "all" => Ok(StoragePolicy::All),
        "norms" => Ok(StoragePolicy::NormsOnly),
        _ => v
            .strip_prefix("every:")
            .and_then(|m| m.parse::<usize>().ok())
            .filter(|&m| m > 0)
            .map(StoragePolicy::Every)
            .ok_or_else(|| mismatch("store", v, "all, norms, or every:M")),
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.nx, self.ny, self.lx, self.ly).map_err(|e| CliError::Inconsistent(e.to_string()))
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut c = SolverConfig::new(self.grid()?, self.dt, self.tmax)
            .with_advection(self.advection)
            .with_storage(self.store);
        c.cfl_safety = self.cfl;
        Ok(c)
    }

    pub fn inverse_config(&self, target: f64) -> InverseConfig {
        let mut c = InverseConfig::new(self.method, target);
        c.max_iters = self.max_iters;
        c.step_size = self.step_size;
        c.damping = self.damping;
        c.growth = self.growth;
        c.stop_tol = self.stop_tol;
        c.jacobian_mode = self.jacobian;
        c.fd_eps = self.fd_eps;
        c
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Inconsistent(m));
        if self.dt > self.tmax {
            return bad(format!("dt = {} exceeds tmax = {}", self.dt, self.tmax));
        }
        self.solver_config()?
            .validate()
            .map_err(|e| CliError::Inconsistent(e.to_string()))?;
        self.inverse_config(0.0)
            .validate()
            .map_err(|e| CliError::Inconsistent(e.to_string()))?;
        if self.grids.iter().any(|&n| n < vortinv::field::MIN_NODES) {
            return bad(format!("every grid in the ladder needs at least {} nodes", vortinv::field::MIN_NODES));
        }
        if self.eps.contains(&0.0) {
            return bad("perturbation sizes must be nonzero".into());
        }
        if self
            .directions
            .iter()
            .any(|&(m, n)| m == 0 || n == 0 || m > vortinv::fixtures::MAX_MODES || n > vortinv::fixtures::MAX_MODES)
        {
            return bad("perturbation modes must lie in 1..=64".into());
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        Ok(())
    }

    /// Effective configuration as config text; parsing it back yields `self`.
    pub fn echo(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let opt = |v: Option<f64>| v.map_or("auto".to_string(), |x| format!("{x:?}"));
        let values: Vec<(&str, String)> = vec![
            ("command", self.command.name().into()),
            ("nx", self.nx.to_string()),
            ("ny", self.ny.to_string()),
            ("lx", format!("{:?}", self.lx)),
            ("ly", format!("{:?}", self.ly)),
            ("dt", format!("{:?}", self.dt)),
            ("tmax", format!("{:?}", self.tmax)),
            ("fixture", self.fixture.to_string()),
            (
                "boundary",
                opt(match self.boundary {
                    Boundary::Auto => None,
                    Boundary::Value(v) => Some(v),
                }),
            ),
            ("advection", self.advection.to_string()),
            ("cfl", format!("{:?}", self.cfl)),
            (
                "store",
                match self.store {
                    StoragePolicy::All => "all".into(),
                    StoragePolicy::NormsOnly => "norms".into(),
                    StoragePolicy::Every(m) => format!("every:{m}"),
                },
            ),
            (
                "method",
                match self.method {
                    Method::Projection => "projection",
                    Method::Landweber => "landweber",
                    Method::LevenbergMarquardt => "lm",
                }
                .into(),
            ),
            (
                "L",
                opt(match self.target {
                    Target::Auto => None,
                    Target::Value(v) => Some(v),
                }),
            ),
            ("max_iters", self.max_iters.to_string()),
            ("stop_tol", format!("{:?}", self.stop_tol)),
            ("step_size", opt(self.step_size)),
            ("damping", format!("{:?}", self.damping)),
            ("growth", format!("{:?}", self.growth)),
            (
                "jacobian",
                match self.jacobian {
                    JacobianMode::Sensitivity => "sensitivity",
                    JacobianMode::FiniteDifference => "fd",
                }
                .into(),
            ),
            ("fd_eps", format!("{:?}", self.fd_eps)),
            ("grids", join(self.grids.iter().map(|n| n.to_string()).collect())),
            ("eps", join(self.eps.iter().map(|e| format!("{e:?}")).collect())),
            ("directions", join(self.directions.iter().map(|(m, n)| format!("{m}:{n}")).collect())),
            ("samples", self.samples.to_string()),
            ("seed", self.seed.to_string()),
            ("out", self.out.display().to_string()),
        ];
        values.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// SHA-256 of [`RunConfig::echo`], in hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.echo().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.echo())
    }
}

/// Text of the usage table for `--help`.
pub fn key_help() -> String {
    let mut s = String::from("Config keys (key = value; flags override the file):\n");
    for (k, d, h) in KEYS {
        let d = if d.is_empty() { "-" } else { d };
        s.push_str(&format!("  {k:<11} {h} [default: {d}]\n"));
    }
    s
}
