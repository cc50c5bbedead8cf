//! Configuration files: `[section]` headers followed by `key = value` lines.
//! `#` starts a comment. Keys are the field names of the configured types;
//! anything unrecognised is an error.
//!
//! ```text
//! [scenario]
//! family = gaussian
//! amplitude_theta = 0.2
//! N = 512
//!
//! [params]
//! b = 3
//!
//! [run]
//! output_dir = out
//! sample_cadence = 0.1
//! probes = 1, 2
//!
//! [sweep]
//! b_values = 1.8, 2, 3, 4
//! beta_values = 0, 1, b+8
//! max_parallel = 4
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use radgas::{Boundary, InitialFamily, Params64, Scenario64};

use crate::CliError;

/// Raw `section -> key -> (value, line)` contents of a file.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    sections: BTreeMap<String, BTreeMap<String, (String, usize)>>,
}

const SECTIONS: [&str; 4] = ["scenario", "params", "run", "sweep"];

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        let mut current: Option<String> = None;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| config_err(format!("line {lineno}: malformed section header")))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(config_err(format!("line {lineno}: unknown section [{name}]")));
                }
                if raw.sections.contains_key(name) {
                    return Err(config_err(format!("line {lineno}: section [{name}] repeated")));
                }
                raw.sections.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {lineno}: expected `key = value`")))?;
            let section = current
                .as_ref()
                .ok_or_else(|| config_err(format!("line {lineno}: key outside of any section")))?;
            let entries = raw.sections.get_mut(section).expect("section was inserted");
            let key = key.trim().to_string();
            if entries
                .insert(key.clone(), (value.trim().to_string(), lineno))
                .is_some()
            {
                return Err(config_err(format!("line {lineno}: key `{key}` repeated")));
            }
        }
        Ok(raw)
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.sections.contains_key(name)
    }

    fn entries(&self, section: &str) -> impl Iterator<Item = (&str, &str, usize)> {
        self.sections
            .get(section)
            .into_iter()
            .flat_map(|m| m.iter().map(|(k, (v, l))| (k.as_str(), v.as_str(), *l)))
    }
}

fn real(key: &str, value: &str, line: usize) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| config_err(format!("line {line}: `{key}` needs a finite number, got `{value}`")))
}

fn integer(key: &str, value: &str, line: usize) -> Result<usize, CliError> {
    value.parse::<usize>().map_err(|_| {
        config_err(format!(
            "line {line}: `{key}` needs a nonnegative integer, got `{value}`"
        ))
    })
}

fn boolean(key: &str, value: &str, line: usize) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(config_err(format!(
            "line {line}: `{key}` needs true or false, got `{value}`"
        ))),
    }
}

fn list<T>(value: &str, mut item: impl FnMut(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(&mut item)
        .collect()
}

fn set_param(params: &mut Params64, key: &str, value: f64) -> bool {
    let slot = match key {
        "R" => &mut params.r,
        "Cv" => &mut params.cv,
        "a" => &mut params.a,
        "mu" => &mut params.mu,
        "kappa1" => &mut params.kappa1,
        "kappa2" => &mut params.kappa2,
        "b" => &mut params.b,
        "d" => &mut params.d,
        "lambda" => &mut params.lambda,
        "K_react" => &mut params.k_react,
        "A" => &mut params.activation,
        "beta" => &mut params.beta,
        _ => return false,
    };
    *slot = value;
    true
}

/// Reads `[scenario]` and `[params]` on top of the canonical scenario.
pub fn scenario_from(raw: &RawConfig) -> Result<Scenario64, CliError> {
    let mut s = Scenario64::canonical();
    for (key, value, line) in raw.entries("scenario") {
        let r = || real(key, value, line);
        match key {
            "family" => s.family = InitialFamily::parse(value).map_err(|e| config_err(format!("line {line}: {e}")))?,
            "boundary" => s.boundary = Boundary::parse(value).map_err(|e| config_err(format!("line {line}: {e}")))?,
            "amplitude_v" => s.amplitude_v = r()?,
            "amplitude_u" => s.amplitude_u = r()?,
            "amplitude_theta" => s.amplitude_theta = r()?,
            "amplitude_z" => s.amplitude_z = r()?,
            "width" => s.width = r()?,
            "L" => s.half_width = r()?,
            "N" => s.n = integer(key, value, line)?,
            "T_end" => s.t_end = r()?,
            "cfl" => s.cfl = r()?,
            "picard_tol" => s.picard_tol = r()?,
            "picard_max_iters" => s.picard_max_iters = integer(key, value, line)?,
            "floor_v" => s.floor_v = r()?,
            "floor_theta" => s.floor_theta = r()?,
            "dt_min" => s.dt_min = r()?,
            "dt_max" => s.dt_max = r()?,
            "max_step_rejections" => s.max_step_rejections = integer(key, value, line)?,
            _ => return Err(config_err(format!("line {line}: unknown key `{key}` in [scenario]"))),
        }
    }
    for (key, value, line) in raw.entries("params") {
        let x = real(key, value, line)?;
        if !set_param(&mut s.params, key, x) {
            return Err(config_err(format!("line {line}: unknown key `{key}` in [params]")));
        }
    }
    s.check().map_err(|e| config_err(e.to_string()))?;
    s.grid().map_err(|e| config_err(e.to_string()))?;
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario64,
    pub output_dir: PathBuf,
    pub sample_cadence: f64,
    /// Window indices `k` for the interval and representation probes.
    pub probes: Vec<usize>,
    pub emit_snapshots: bool,
    pub snapshot_times: Vec<f64>,
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig, base_dir: &Path) -> Result<Self, CliError> {
        let scenario = scenario_from(raw)?;
        let mut cfg = RunConfig {
            scenario,
            output_dir: base_dir.join("radgas_out"),
            sample_cadence: 0.1,
            probes: vec![2],
            emit_snapshots: false,
            snapshot_times: Vec::new(),
        };
        for (key, value, line) in raw.entries("run") {
            match key {
                "output_dir" => cfg.output_dir = base_dir.join(value),
                "sample_cadence" => cfg.sample_cadence = real(key, value, line)?,
                "probes" => cfg.probes = list(value, |v| integer(key, v, line))?,
                "emit_snapshots" => cfg.emit_snapshots = boolean(key, value, line)?,
                "snapshot_times" => cfg.snapshot_times = list(value, |v| real(key, v, line))?,
                _ => return Err(config_err(format!("line {line}: unknown key `{key}` in [run]"))),
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), CliError> {
        if !(self.sample_cadence > 0.0) {
            return Err(config_err(format!(
                "sample_cadence must be positive, got {}",
                self.sample_cadence
            )));
        }
        let l = self.scenario.half_width;
        if let Some(k) = self.probes.iter().find(|&&k| (k + 2) as f64 > l) {
            return Err(config_err(format!(
                "probe window k = {k} needs L >= {}, have L = {l}",
                k + 2
            )));
        }
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|&&t| t < 0.0 || t > self.scenario.t_end)
        {
            return Err(config_err(format!("snapshot time {t} outside [0, T_end]")));
        }
        Ok(())
    }
}

/// A `beta` entry of a sweep, possibly relative to `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaValue {
    Fixed(f64),
    /// `b + offset`.
    RelativeToB(f64),
}

impl BetaValue {
    pub fn parse(token: &str) -> Option<Self> {
        let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "b" {
            return Some(BetaValue::RelativeToB(0.0));
        }
        if let Some(rest) = t.strip_prefix('b') {
            return rest
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(BetaValue::RelativeToB);
        }
        t.parse::<f64>().ok().filter(|x| x.is_finite()).map(BetaValue::Fixed)
    }

    pub fn resolve(self, b: f64) -> f64 {
        match self {
            BetaValue::Fixed(x) => x,
            BetaValue::RelativeToB(c) => b + c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub b_values: Vec<f64>,
    pub beta_values: Vec<BetaValue>,
    pub max_parallel: usize,
}

impl SweepConfig {
    pub fn from_raw(raw: &RawConfig, base_dir: &Path) -> Result<Self, CliError> {
        if !raw.has_section("sweep") {
            return Err(config_err("sweep config needs a [sweep] section"));
        }
        let base = RunConfig::from_raw(raw, base_dir)?;
        let mut cfg = SweepConfig {
            base,
            b_values: Vec::new(),
            beta_values: Vec::new(),
            max_parallel: 1,
        };
        for (key, value, line) in raw.entries("sweep") {
            match key {
                "b_values" => cfg.b_values = list(value, |v| real(key, v, line))?,
                "beta_values" => {
                    cfg.beta_values = list(value, |v| {
                        BetaValue::parse(v).ok_or_else(|| config_err(format!("line {line}: bad beta value `{v}`")))
                    })?
                }
                "max_parallel" => cfg.max_parallel = integer(key, value, line)?,
                _ => return Err(config_err(format!("line {line}: unknown key `{key}` in [sweep]"))),
            }
        }
        if cfg.b_values.is_empty() || cfg.beta_values.is_empty() {
            return Err(config_err("b_values and beta_values must be nonempty"));
        }
        if cfg.max_parallel == 0 {
            return Err(config_err("max_parallel must be at least 1"));
        }
        Ok(cfg)
    }

    /// `(b, beta)` cells with `b` varying slowest.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        self.b_values
            .iter()
            .flat_map(|&b| self.beta_values.iter().map(move |beta| (b, beta.resolve(b))))
            .collect()
    }
}

/// Reads and parses a config file; any failure to read it is a config error.
pub fn load(path: &Path) -> Result<(RawConfig, PathBuf), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((RawConfig::parse(&text)?, base))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Result<RunConfig, CliError> {
        RunConfig::from_raw(&RawConfig::parse(text)?, Path::new("/tmp"))
    }

    #[test]
    fn empty_file_gives_canonical_defaults() {
        let cfg = run("").unwrap();
        assert_eq!(cfg.scenario, Scenario64::canonical());
        assert_eq!(cfg.probes, vec![2]);
        assert_eq!(cfg.output_dir, PathBuf::from("/tmp/radgas_out"));
    }

    #[test]
    fn keys_are_applied() {
        let cfg = run("[scenario]\nfamily = compact_bump\nN = 64 # mesh\nL = 8\nboundary = far_field\n[params]\nK_react = 2.5\nbeta=0\n[run]\nprobes = 1, 3\nemit_snapshots = true\nsnapshot_times = 0, 20\noutput_dir = o\n").unwrap();
        assert_eq!(cfg.scenario.family, InitialFamily::CompactBump);
        assert_eq!(cfg.scenario.n, 64);
        assert_eq!(cfg.scenario.boundary, Boundary::FarField);
        assert_eq!(cfg.scenario.params.k_react, 2.5);
        assert_eq!(cfg.scenario.params.beta, 0.0);
        assert_eq!(cfg.probes, vec![1, 3]);
        assert!(cfg.emit_snapshots);
        assert_eq!(cfg.snapshot_times, vec![0.0, 20.0]);
        assert_eq!(cfg.output_dir, PathBuf::from("/tmp/o"));
    }

    #[test]
    fn unknown_and_malformed_entries_are_errors() {
        for text in [
            "[scenario]\nkapa1 = 1\n",
            "[params]\nkapa1 = 1\n",
            "[physics]\n",
            "N = 3\n",
            "[scenario]\nN 3\n",
            "[scenario]\nN = -3\n",
            "[scenario]\ncfl = fast\n",
            "[scenario]\ncfl = 0.5\ncfl = 0.4\n",
            "[scenario]\ncfl = 2\n",
            "[scenario]\nN = 7\n",
            "[run]\nsample_cadence = 0\n",
            "[run]\nprobes = 19\n",
            "[run]\nemit_snapshots = yes\n",
            "[params]\nmu = 0\n",
        ] {
            assert!(matches!(run(text), Err(CliError::Config(_))), "{text:?} accepted");
        }
    }

    #[test]
    fn sweep_values() {
        let raw =
            RawConfig::parse("[sweep]\nb_values = 1.8, 2\nbeta_values = 0, b+8, b - 1, b\nmax_parallel = 3\n").unwrap();
        let cfg = SweepConfig::from_raw(&raw, Path::new(".")).unwrap();
        assert_eq!(cfg.max_parallel, 3);
        assert_eq!(cfg.cells()[..4], [(1.8, 0.0), (1.8, 9.8), (1.8, 0.8), (1.8, 1.8)]);
        assert_eq!(cfg.cells().len(), 8);
        assert!(SweepConfig::from_raw(&RawConfig::parse("").unwrap(), Path::new(".")).is_err());
        let raw = RawConfig::parse("[sweep]\nb_values = 2\nbeta_values = c+1\n").unwrap();
        assert!(SweepConfig::from_raw(&raw, Path::new(".")).is_err());
        let raw = RawConfig::parse("[sweep]\nb_values = 2\nbeta_values = 1\nmax_parallel = 0\n").unwrap();
        assert!(SweepConfig::from_raw(&raw, Path::new(".")).is_err());
    }
}
