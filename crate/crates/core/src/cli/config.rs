//! Run configuration files.
//!
//! A configuration is a TOML document with four sections:
//!
//! ```toml
//! [system]
//! k = 1
//! m = 1
//! n = 2                       # optional, must equal k + m
//! speeds = [1.0, 1.0]         # one entry per component: number or sample array
//! coupling = "u"              # "u" (S(x) u(t, 0)) or "w" (C(x) w)
//! matrix = [[0.0, 0.0], [0.0, 0.0]]   # n x n, entries number or sample array; optional
//! b = [[1.0]]                 # k x m, nested rows or flat row-major
//!
//! [grid]
//! nx = 400
//! cfl = 0.9
//!
//! [hum]
//! eps = 1e-6                  # relative to the estimated Gramian norm
//! cg_tol = 1e-8
//! cg_maxit = 500
//! experimental = false
//!
//! [run]
//! T = 2.4
//! mode = "null"               # or "exact"
//! out = "out"
//! seed = 0
//! store_trajectory = false
//! initial = [0.0, "raised_cosine"]
//! target = [0.0, "bump 0.6 0.2"]
//! control = [0.0]
//! scan = [1.0, 1.8, 2.2]
//! grids = [100, 200]
//! trials = 50
//! ```
//!
//! Data entries (`initial`, `target`, `control`) hold one item per
//! component: a number (constant), `"raised_cosine"`, `"bump C R"`,
//! `"sin Q"` or an array of samples on a uniform grid of [0, 1]. Control
//! items are evaluated at `t / T`. Components are listed in order
//! `1..=n`, minus family first.

use std::fmt::Write as _;
use std::path::PathBuf;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::experiments::sampling::{compact_bump, raised_cosine};
use crate::model::{
    BoundaryMatrix, Coupling, HyperbolicSystem, Matrix, Profile, ProfileMatrix, SpeedProfile,
};
use crate::solver::Grid;

/// One component of a data specification.
#[derive(Clone, Debug, PartialEq)]
pub enum DataSpec {
    Constant(f64),
    RaisedCosine,
    Bump { center: f64, half_width: f64 },
    Sine { mode: f64 },
    Samples(Vec<f64>),
}

impl DataSpec {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::RaisedCosine => raised_cosine(s),
            Self::Bump { center, half_width } => compact_bump(s, *center, *half_width),
            Self::Sine { mode } => (mode * std::f64::consts::PI * s).sin(),
            Self::Samples(v) => Profile::Samples(v.clone()).eval(s),
        }
    }

    fn to_toml(&self) -> String {
        match self {
            Self::Constant(v) => float(*v),
            Self::RaisedCosine => "\"raised_cosine\"".into(),
            Self::Bump { center, half_width } => {
                format!("\"bump {} {}\"", float(*center), float(*half_width))
            }
            Self::Sine { mode } => format!("\"sin {}\"", float(*mode)),
            Self::Samples(v) => float_array(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ControlMode {
    #[default]
    Null,
    Exact,
}

impl std::str::FromStr for ControlMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "null" => Ok(Self::Null),
            "exact" => Ok(Self::Exact),
            other => Err(format!("mode must be \"null\" or \"exact\", got \"{other}\"")),
        }
    }
}

impl ControlMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Null => "null",
            Self::Exact => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub system_path: Option<PathBuf>,
    pub command: Option<String>,
    pub nx: usize,
    pub cfl: f64,
    pub horizon: Option<f64>,
    pub eps: f64,
    pub cg_tol: f64,
    pub cg_maxit: usize,
    pub experimental: bool,
    pub mode: ControlMode,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub store_trajectory: bool,
    pub initial: Option<Vec<DataSpec>>,
    pub target: Option<Vec<DataSpec>>,
    pub control: Option<Vec<DataSpec>>,
    pub scan: Option<Vec<f64>>,
    pub grids: Option<Vec<usize>>,
    pub trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system_path: None,
            command: None,
            nx: 200,
            cfl: 0.9,
            horizon: None,
            eps: 1e-6,
            cg_tol: 1e-8,
            cg_maxit: 500,
            experimental: false,
            mode: ControlMode::Null,
            out_dir: PathBuf::from("out"),
            seed: 0,
            store_trajectory: false,
            initial: None,
            target: None,
            control: None,
            scan: None,
            grids: None,
            trials: 50,
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.nx, self.cfl)
    }
}

/// Parse error with its 1-based source line when known.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of `key = ...` inside `[section]`, or of the section header.
fn locate(text: &str, section: &str, key: Option<&str>) -> Option<usize> {
    let mut current = String::new();
    let mut header = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            current = line.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            if current == section {
                header = Some(i + 1);
            }
            continue;
        }
        if current != section {
            continue;
        }
        if let Some(key) = key {
            if let Some((lhs, _)) = line.split_once('=') {
                if lhs.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    header
}

struct Ctx<'a> {
    text: &'a str,
    errors: Vec<ConfigError>,
}

impl Ctx<'_> {
    fn err(&mut self, section: &str, key: Option<&str>, message: impl Into<String>) {
        self.errors.push(ConfigError {
            line: locate(self.text, section, key),
            message: message.into(),
        });
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn float_list(v: &Value) -> Option<Vec<f64>> {
    v.as_array()?.iter().map(as_f64).collect()
}

fn profile_value(v: &Value) -> Option<Profile> {
    if let Some(x) = as_f64(v) {
        return Some(Profile::Constant(x));
    }
    float_list(v).map(Profile::Samples)
}

fn data_spec(v: &Value) -> std::result::Result<DataSpec, String> {
    if let Some(x) = as_f64(v) {
        return Ok(DataSpec::Constant(x));
    }
    if let Some(list) = float_list(v) {
        if list.len() < 2 {
            return Err("sample arrays need at least two values".into());
        }
        return Ok(DataSpec::Samples(list));
    }
    let s = v.as_str().ok_or("expected a number, a sample array or a shape name")?;
    let parts: Vec<&str> = s.split_whitespace().collect();
    let num = |i: usize| -> std::result::Result<f64, String> {
        parts
            .get(i)
            .ok_or(format!("'{s}' is missing an argument"))?
            .parse::<f64>()
            .map_err(|e| format!("'{s}': {e}"))
    };
    match parts.first().copied() {
        Some("raised_cosine") if parts.len() == 1 => Ok(DataSpec::RaisedCosine),
        Some("bump") if parts.len() == 3 => Ok(DataSpec::Bump {
            center: num(1)?,
            half_width: num(2)?,
        }),
        Some("sin") if parts.len() == 2 => Ok(DataSpec::Sine { mode: num(1)? }),
        _ => Err(format!(
            "unknown shape '{s}' (expected raised_cosine, \"bump C R\" or \"sin Q\")"
        )),
    }
}

fn check_keys(ctx: &mut Ctx<'_>, table: &Table, section: &str, allowed: &[&str]) {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            ctx.err(section, Some(key), format!("unknown key '{key}' in [{section}]"));
        }
    }
}

const SYSTEM_KEYS: &[&str] = &["n", "k", "m", "speeds", "coupling", "matrix", "b"];
const GRID_KEYS: &[&str] = &["nx", "cfl"];
const HUM_KEYS: &[&str] = &["eps", "cg_tol", "cg_maxit", "experimental"];
const RUN_KEYS: &[&str] = &[
    "system", "command", "T", "mode", "out", "seed", "store_trajectory", "initial", "target",
    "control", "scan", "grids", "trials",
];

fn parse_system(ctx: &mut Ctx<'_>, t: &Table) -> Option<HyperbolicSystem> {
    const S: &str = "system";
    check_keys(ctx, t, S, SYSTEM_KEYS);
    let get_usize = |ctx: &mut Ctx<'_>, key: &str| -> Option<usize> {
        match t.get(key) {
            None => None,
            Some(Value::Integer(i)) if *i >= 0 => Some(*i as usize),
            Some(_) => {
                ctx.err(S, Some(key), format!("'{key}' must be a nonnegative integer"));
                None
            }
        }
    };
    let k = get_usize(ctx, "k");
    let m = get_usize(ctx, "m");
    let n_decl = get_usize(ctx, "n");
    let (Some(k), Some(m)) = (k, m) else {
        ctx.err(S, None, "[system] needs integer keys k and m");
        return None;
    };
    let n = k + m;
    if let Some(nd) = n_decl {
        if nd != n {
            ctx.err(S, Some("n"), format!("n = {nd} but k + m = {k} + {m} = {n}"));
            return None;
        }
    }
    let speeds: Vec<Profile> = match t.get("speeds").and_then(Value::as_array) {
        Some(arr) => {
            let parsed: Option<Vec<Profile>> = arr.iter().map(profile_value).collect();
            match parsed {
                Some(p) if p.len() == n => p,
                Some(p) => {
                    ctx.err(S, Some("speeds"), format!("{} speeds given for n = {n} components", p.len()));
                    return None;
                }
                None => {
                    ctx.err(S, Some("speeds"), "speed entries must be numbers or number arrays");
                    return None;
                }
            }
        }
        None => {
            ctx.err(S, Some("speeds"), "missing 'speeds' array");
            return None;
        }
    };
    let u_form = match t.get("coupling").map(|v| v.as_str()) {
        None | Some(Some("u")) => true,
        Some(Some("w")) => false,
        Some(_) => {
            ctx.err(S, Some("coupling"), "coupling must be \"u\" or \"w\"");
            return None;
        }
    };
    let matrix = match t.get("matrix") {
        None => ProfileMatrix::zeros(n, n),
        Some(v) => {
            let rows = v.as_array().map(|a| a.as_slice()).unwrap_or(&[]);
            let nested = rows.len() == n && rows.iter().all(|r| r.as_array().map(|a| a.len()) == Some(n));
            let flat: Vec<&Value> = if nested {
                rows.iter().flat_map(|r| r.as_array().unwrap().iter()).collect()
            } else {
                rows.iter().collect()
            };
            if flat.len() != n * n {
                ctx.err(S, Some("matrix"), format!("coupling matrix must be {n} x {n}"));
                return None;
            }
            match flat.into_iter().map(profile_value).collect::<Option<Vec<_>>>() {
                Some(e) => ProfileMatrix::from_entries(n, n, e),
                None => {
                    ctx.err(S, Some("matrix"), "matrix entries must be numbers or number arrays");
                    return None;
                }
            }
        }
    };
    let b = match t.get("b") {
        None => {
            ctx.err(S, Some("b"), "missing boundary matrix 'b'");
            return None;
        }
        Some(v) => {
            let rows = v.as_array().map(|a| a.as_slice()).unwrap_or(&[]);
            let data: Option<Vec<f64>> = if rows.iter().all(|r| r.is_array()) {
                if rows.len() != k || rows.iter().any(|r| r.as_array().unwrap().len() != m) {
                    ctx.err(S, Some("b"), format!("b must have {k} rows of {m} entries"));
                    return None;
                }
                rows.iter().flat_map(|r| r.as_array().unwrap().iter()).map(as_f64).collect()
            } else {
                rows.iter().map(as_f64).collect()
            };
            match data {
                Some(d) if d.len() == k * m => Matrix::from_row_major(k, m, d).ok()?,
                Some(d) => {
                    ctx.err(S, Some("b"), format!("b has {} entries, expected k x m = {}", d.len(), k * m));
                    return None;
                }
                None => {
                    ctx.err(S, Some("b"), "b entries must be numbers");
                    return None;
                }
            }
        }
    };
    let coupling = if u_form {
        Coupling::UForm(matrix)
    } else {
        Coupling::WForm(matrix)
    };
    let system = HyperbolicSystem::new_unchecked(
        SpeedProfile::new_unchecked(k, m, speeds),
        coupling,
        BoundaryMatrix::new(b),
    );
    let diags = crate::model::validate(&system);
    if !diags.is_empty() {
        for d in diags {
            let key = match d.kind {
                crate::model::DiagnosticKind::StructuralZero | crate::model::DiagnosticKind::CouplingBound => "matrix",
                crate::model::DiagnosticKind::Dimension => "b",
                _ => "speeds",
            };
            ctx.err(S, Some(key), d.message);
        }
        return None;
    }
    Some(system)
}

fn data_list(ctx: &mut Ctx<'_>, t: &Table, key: &str) -> Option<Vec<DataSpec>> {
    let arr = t.get(key)?;
    let Some(arr) = arr.as_array() else {
        ctx.err("run", Some(key), format!("'{key}' must be an array with one entry per component"));
        return None;
    };
    let mut out = Vec::new();
    for v in arr {
        match data_spec(v) {
            Ok(d) => out.push(d),
            Err(e) => {
                ctx.err("run", Some(key), e);
                return None;
            }
        }
    }
    Some(out)
}

fn parse_run(ctx: &mut Ctx<'_>, root: &Table, cfg: &mut RunConfig) {
    let empty = Table::new();
    let section = |name: &str| -> &Table { root.get(name).and_then(Value::as_table).unwrap_or(&empty) };

    let grid = section("grid");
    check_keys(ctx, grid, "grid", GRID_KEYS);
    if let Some(v) = grid.get("nx") {
        match v.as_integer() {
            Some(i) if i >= crate::solver::MIN_CELLS as i64 => cfg.nx = i as usize,
            _ => ctx.err("grid", Some("nx"), format!("nx must be an integer >= {}", crate::solver::MIN_CELLS)),
        }
    }
    if let Some(v) = grid.get("cfl") {
        match as_f64(v) {
            Some(c) if c > 0.0 && c <= 1.0 => cfg.cfl = c,
            _ => ctx.err("grid", Some("cfl"), "cfl must lie in (0, 1]"),
        }
    }

    let hum = section("hum");
    check_keys(ctx, hum, "hum", HUM_KEYS);
    let positive = |ctx: &mut Ctx<'_>, key: &str, target: &mut f64, allow_zero: bool| {
        if let Some(v) = hum.get(key) {
            match as_f64(v) {
                Some(x) if x > 0.0 || (allow_zero && x == 0.0) => *target = x,
                _ => ctx.err("hum", Some(key), format!("'{key}' must be positive")),
            }
        }
    };
    positive(ctx, "eps", &mut cfg.eps, true);
    positive(ctx, "cg_tol", &mut cfg.cg_tol, false);
    if let Some(v) = hum.get("cg_maxit") {
        match v.as_integer() {
            Some(i) if i >= 1 => cfg.cg_maxit = i as usize,
            _ => ctx.err("hum", Some("cg_maxit"), "cg_maxit must be a positive integer"),
        }
    }
    if let Some(v) = hum.get("experimental") {
        match v.as_bool() {
            Some(b) => cfg.experimental = b,
            None => ctx.err("hum", Some("experimental"), "experimental must be true or false"),
        }
    }

    let run = section("run");
    check_keys(ctx, run, "run", RUN_KEYS);
    if let Some(v) = run.get("system") {
        match v.as_str() {
            Some(p) => cfg.system_path = Some(PathBuf::from(p)),
            None => ctx.err("run", Some("system"), "system must be a path string"),
        }
    }
    if let Some(v) = run.get("command") {
        match v.as_str() {
            Some(c) => cfg.command = Some(c.to_string()),
            None => ctx.err("run", Some("command"), "command must be a string"),
        }
    }
    if let Some(v) = run.get("T") {
        match as_f64(v) {
            Some(t) if t > 0.0 => cfg.horizon = Some(t),
            _ => ctx.err("run", Some("T"), "T must be positive"),
        }
    }
    if let Some(v) = run.get("mode") {
        match v.as_str().map(str::parse::<ControlMode>) {
            Some(Ok(m)) => cfg.mode = m,
            Some(Err(e)) => ctx.err("run", Some("mode"), e),
            None => ctx.err("run", Some("mode"), "mode must be a string"),
        }
    }
    if let Some(v) = run.get("out") {
        match v.as_str() {
            Some(p) => cfg.out_dir = PathBuf::from(p),
            None => ctx.err("run", Some("out"), "out must be a path string"),
        }
    }
    if let Some(v) = run.get("seed") {
        match v.as_integer() {
            Some(s) if s >= 0 => cfg.seed = s as u64,
            _ => ctx.err("run", Some("seed"), "seed must be a nonnegative integer"),
        }
    }
    if let Some(v) = run.get("store_trajectory") {
        match v.as_bool() {
            Some(b) => cfg.store_trajectory = b,
            None => ctx.err("run", Some("store_trajectory"), "store_trajectory must be true or false"),
        }
    }
    if let Some(v) = run.get("trials") {
        match v.as_integer() {
            Some(s) if s >= 0 => cfg.trials = s as usize,
            _ => ctx.err("run", Some("trials"), "trials must be a nonnegative integer"),
        }
    }
    if let Some(v) = run.get("scan") {
        match float_list(v) {
            Some(ts) if ts.iter().all(|t| *t > 0.0) => cfg.scan = Some(ts),
            _ => ctx.err("run", Some("scan"), "scan must be an array of positive horizons"),
        }
    }
    if let Some(v) = run.get("grids") {
        let parsed: Option<Vec<usize>> = v.as_array().and_then(|a| {
            a.iter()
                .map(|x| x.as_integer().filter(|i| *i >= crate::solver::MIN_CELLS as i64).map(|i| i as usize))
                .collect()
        });
        match parsed {
            Some(g) => cfg.grids = Some(g),
            None => ctx.err("run", Some("grids"), "grids must be an array of cell counts >= 8"),
        }
    }
    cfg.initial = data_list(ctx, run, "initial");
    cfg.target = data_list(ctx, run, "target");
    cfg.control = data_list(ctx, run, "control");
}

fn check_data_lengths(ctx: &mut Ctx<'_>, cfg: &RunConfig, system: &HyperbolicSystem) {
    for (key, list, len) in [
        ("initial", &cfg.initial, system.n()),
        ("target", &cfg.target, system.n()),
        ("control", &cfg.control, system.m()),
    ] {
        if let Some(l) = list {
            if l.len() != len {
                ctx.err("run", Some(key), format!("'{key}' has {} entries, expected {len}", l.len()));
            }
        }
    }
}

/// Parse a configuration. When `[system]` is absent the system is read from
/// the file named by `run.system`, resolved against `base_dir`.
pub fn parse_config_with_base(
    text: &str,
    base_dir: Option<&std::path::Path>,
) -> std::result::Result<(RunConfig, HyperbolicSystem), Vec<ConfigError>> {
    let root: Table = match toml::from_str(text) {
        Ok(t) => t,
        Err(e) => {
            return Err(vec![ConfigError {
                line: e.span().map(|s| line_of_offset(text, s.start)),
                message: e.message().to_string(),
            }])
        }
    };
    let mut ctx = Ctx {
        text,
        errors: Vec::new(),
    };
    for key in root.keys() {
        if !["system", "grid", "hum", "run"].contains(&key.as_str()) {
            let line = text
                .lines()
                .position(|l| l.trim().trim_matches(|c| c == '[' || c == ']').trim() == key || l.trim_start().starts_with(&format!("{key} ")))
                .map(|i| i + 1);
            ctx.errors.push(ConfigError {
                line,
                message: format!("unknown section or key '{key}'"),
            });
        }
    }
    let mut cfg = RunConfig::default();
    parse_run(&mut ctx, &root, &mut cfg);

    let system = match root.get("system") {
        Some(Value::Table(t)) => parse_system(&mut ctx, t),
        Some(_) => {
            ctx.err("system", None, "[system] must be a table");
            None
        }
        None => match &cfg.system_path {
            Some(p) => {
                let path = match base_dir {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.clone(),
                };
                match std::fs::read_to_string(&path) {
                    Ok(sub) => match parse_config_with_base(&sub, path.parent()) {
                        Ok((_, sys)) => Some(sys),
                        Err(errs) => {
                            for e in errs {
                                ctx.errors.push(ConfigError {
                                    line: e.line,
                                    message: format!("{}: {}", path.display(), e.message),
                                });
                            }
                            None
                        }
                    },
                    Err(e) => {
                        ctx.err("run", Some("system"), format!("cannot read {}: {e}", path.display()));
                        None
                    }
                }
            }
            None => {
                ctx.errors.push(ConfigError {
                    line: None,
                    message: "no [system] section and no run.system path".into(),
                });
                None
            }
        },
    };
    if let Some(sys) = &system {
        check_data_lengths(&mut ctx, &cfg, sys);
    }
    match system {
        Some(sys) if ctx.errors.is_empty() => Ok((cfg, sys)),
        _ => Err(ctx.errors),
    }
}

pub fn parse_config(text: &str) -> std::result::Result<(RunConfig, HyperbolicSystem), Vec<ConfigError>> {
    parse_config_with_base(text, None)
}

/// Join parse errors into a single [`Error::Config`].
pub fn config_error(errors: &[ConfigError]) -> Error {
    Error::Config(
        errors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n"),
    )
}

pub fn load_config(path: &std::path::Path) -> Result<(RunConfig, HyperbolicSystem)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_with_base(&text, path.parent()).map_err(|e| config_error(&e))
}

/// Shortest round-trip float rendering, always with a decimal point or exponent.
fn float(v: f64) -> String {
    let s = format!("{v:?}");
    if s.contains(['.', 'e', 'E', 'n', 'i']) {
        s
    } else {
        format!("{s}.0")
    }
}

fn float_array(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|x| float(*x)).collect::<Vec<_>>().join(", "))
}

fn profile_toml(p: &Profile) -> String {
    match p {
        Profile::Constant(v) => float(*v),
        Profile::Samples(v) => float_array(v),
    }
}

fn data_toml(list: &[DataSpec]) -> String {
    format!("[{}]", list.iter().map(DataSpec::to_toml).collect::<Vec<_>>().join(", "))
}

fn quote(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

/// Render a configuration that parses back to the same objects. The system
/// is always written inline.
pub fn serialize_config(cfg: &RunConfig, system: &HyperbolicSystem) -> String {
    let mut s = String::new();
    let (n, k, m) = (system.n(), system.k(), system.m());
    let _ = writeln!(s, "[system]");
    let _ = writeln!(s, "n = {n}\nk = {k}\nm = {m}");
    let speeds: Vec<String> = system.speeds().profiles().iter().map(profile_toml).collect();
    let _ = writeln!(s, "speeds = [{}]", speeds.join(", "));
    let _ = writeln!(s, "coupling = \"{}\"", if system.coupling().is_u_form() { "u" } else { "w" });
    let mat = system.coupling().matrix();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let row: Vec<String> = (0..n).map(|j| profile_toml(mat.get(i, j))).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    let _ = writeln!(s, "matrix = [{}]", rows.join(", "));
    let b = system.boundary().matrix();
    let rows: Vec<String> = (0..k).map(|i| float_array(b.row(i))).collect();
    let _ = writeln!(s, "b = [{}]", rows.join(", "));

    let _ = writeln!(s, "\n[grid]\nnx = {}\ncfl = {}", cfg.nx, float(cfg.cfl));
    let _ = writeln!(
        s,
        "\n[hum]\neps = {}\ncg_tol = {}\ncg_maxit = {}\nexperimental = {}",
        float(cfg.eps),
        float(cfg.cg_tol),
        cfg.cg_maxit,
        cfg.experimental
    );
    let _ = writeln!(s, "\n[run]");
    if let Some(c) = &cfg.command {
        let _ = writeln!(s, "command = {}", quote(c));
    }
    if let Some(t) = cfg.horizon {
        let _ = writeln!(s, "T = {}", float(t));
    }
    let _ = writeln!(s, "mode = \"{}\"", cfg.mode.as_str());
    let _ = writeln!(s, "out = {}", quote(&cfg.out_dir.to_string_lossy()));
    let _ = writeln!(s, "seed = {}", cfg.seed);
    let _ = writeln!(s, "store_trajectory = {}", cfg.store_trajectory);
    let _ = writeln!(s, "trials = {}", cfg.trials);
    for (key, list) in [("initial", &cfg.initial), ("target", &cfg.target), ("control", &cfg.control)] {
        if let Some(l) = list {
            let _ = writeln!(s, "{key} = {}", data_toml(l));
        }
    }
    if let Some(ts) = &cfg.scan {
        let _ = writeln!(s, "scan = {}", float_array(ts));
    }
    if let Some(g) = &cfg.grids {
        let g: Vec<String> = g.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "grids = [{}]", g.join(", "));
    }
    s
}
