//! INI-style run configuration.
//!
//! Grammar: `key = value` lines, `#` starts a comment, `[section]` headers
//! for `solver`, `interface`, `scenario`, `diagnostics` and `output`. Keys
//! before the first header are top-level (`n`, `dim`, `eps`, `k`, `seed`), and
//! `section.key = value` is accepted anywhere.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::solver::{Boundary, Scheme};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid value for `{field}`: {msg}")]
    Invalid { field: String, msg: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn invalid(field: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), msg: msg.into() }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InterfaceShape {
    Sphere { center: [f64; 2], r0: f64 },
    Flat,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScenarioChoice {
    Constant,
    Rotating { winding: i32 },
}

/// Full description of one experiment. `cells == 0` and `probe_delta == 0`
/// mean "derive from eps" (see [`RunConfig::resolved_cells`] and
/// [`RunConfig::resolved_probe_delta`]).
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub dim: usize,
    pub eps: f64,
    pub k: u32,
    pub seed: u64,
    pub cells: usize,
    pub side: f64,
    pub boundary: Boundary,
    pub scheme: Scheme,
    pub dt_safety: f64,
    pub t_final: f64,
    /// Number of equally spaced snapshots after `t = 0`, used when `times` is empty.
    pub snapshots: usize,
    pub times: Vec<f64>,
    pub shape: InterfaceShape,
    pub delta_gamma: f64,
    pub scenario: ScenarioChoice,
    pub angle: f64,
    pub delta: f64,
    pub probe_delta: f64,
    pub probe_samples: usize,
    pub hausdorff_samples: usize,
    pub out_dir: PathBuf,
    pub dumps: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            dim: 2,
            eps: 0.04,
            k: 5,
            seed: 0,
            cells: 0,
            side: 2.0,
            boundary: Boundary::Dirichlet,
            scheme: Scheme::Euler,
            dt_safety: 0.2,
            t_final: 0.02,
            snapshots: 20,
            times: Vec::new(),
            shape: InterfaceShape::Sphere { center: [0.0, 0.0], r0: 0.3 },
            delta_gamma: 0.22,
            scenario: ScenarioChoice::Constant,
            angle: 0.3,
            delta: 0.1,
            probe_delta: 0.0,
            probe_samples: 256,
            hausdorff_samples: 1024,
            out_dir: PathBuf::from("out"),
            dumps: true,
        }
    }
}

impl RunConfig {
    /// `max(128, round(8 / eps))` cells per side unless set explicitly.
    pub fn resolved_cells(&self) -> usize {
        if self.cells > 0 {
            self.cells
        } else {
            ((8.0 / self.eps).round() as usize).max(128)
        }
    }

    /// `3 eps` unless set explicitly.
    pub fn resolved_probe_delta(&self) -> f64 {
        if self.probe_delta > 0.0 {
            self.probe_delta
        } else {
            3.0 * self.eps
        }
    }

    /// Snapshot times in `(0, t_final]`.
    pub fn snapshot_times(&self) -> Vec<f64> {
        if !self.times.is_empty() {
            return self.times.clone();
        }
        if self.t_final == 0.0 || self.snapshots == 0 {
            return Vec::new();
        }
        let m = self.snapshots;
        (1..=m).map(|i| self.t_final * i as f64 / m as f64).collect()
    }

    pub fn with_eps(&self, eps: f64) -> RunConfig {
        RunConfig { eps, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(2..=4).contains(&self.n) {
            return Err(invalid("n", format!("{} not in 2..=4", self.n)));
        }
        if self.dim != 1 && self.dim != 2 {
            return Err(invalid("dim", format!("{} not in {{1, 2}}", self.dim)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(invalid("eps", format!("{} outside (0, 1)", self.eps)));
        }
        if self.k < 2 {
            return Err(invalid("k", "must be at least 2"));
        }
        if self.cells != 0 && self.cells < 4 {
            return Err(invalid("solver.cells", "need at least 4 cells"));
        }
        if !(self.side > 0.0 && self.side.is_finite()) {
            return Err(invalid("solver.side", "must be positive"));
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(invalid("solver.dt_safety", "must lie in (0, 1]"));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(invalid("solver.t_final", "must be >= 0"));
        }
        if self.times.iter().any(|&t| !(t > 0.0 && t <= self.t_final)) {
            return Err(invalid("solver.times", format!("times must lie in (0, {}]", self.t_final)));
        }
        if !(self.delta_gamma > 0.0 && self.delta_gamma < 1.0) {
            return Err(invalid("interface.delta_gamma", "must lie in (0, 1)"));
        }
        if let InterfaceShape::Sphere { r0, .. } = self.shape {
            if !(r0 > 0.0) {
                return Err(invalid("interface.r0", "must be positive"));
            }
        }
        if !(self.delta > 0.0 && self.delta < 0.5 * self.delta_gamma) {
            return Err(invalid(
                "scenario.delta",
                format!("must lie in (0, delta_gamma / 2 = {})", 0.5 * self.delta_gamma),
            ));
        }
        if let ScenarioChoice::Rotating { .. } = self.scenario {
            if self.dim != 2 || self.shape == InterfaceShape::Flat {
                return Err(invalid("scenario.kind", "rotating needs a 2D sphere"));
            }
        }
        if self.probe_delta < 0.0 {
            return Err(invalid("diagnostics.probe_delta", "must be >= 0"));
        }
        if self.probe_samples == 0 || self.hausdorff_samples < 2 {
            return Err(invalid("diagnostics", "sample counts must be positive"));
        }
        Ok(())
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut section = String::new();
    const SECTIONS: [&str; 5] = ["solver", "interface", "scenario", "diagnostics", "output"];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Parse { line: line_no, msg: "unterminated section header".into() })?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::Parse { line: line_no, msg: format!("unknown section [{name}]") });
            }
            section = name.to_string();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::Parse { line: line_no, msg: "expected `key = value`".into() })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(ConfigError::Parse { line: line_no, msg: "empty key".into() });
        }
        let full = if k.contains('.') || section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
        if entries.insert(full.clone(), (line_no, v.to_string())).is_some() {
            return Err(ConfigError::Parse { line: line_no, msg: format!("duplicate key `{full}`") });
        }
    }
    let cfg = build(entries)?;
    cfg.validate()?;
    Ok(cfg)
}

fn build(entries: BTreeMap<String, (usize, String)>) -> Result<RunConfig, ConfigError> {
    let mut c = RunConfig::default();
    let mut center = [0.0, 0.0];
    let mut r0 = 0.3;
    let mut flat = false;
    let mut kind = "constant".to_string();
    let mut winding = 1i32;
    for (key, (line, v)) in &entries {
        let num = || v.parse::<f64>().map_err(|_| invalid(key, format!("`{v}` is not a number (line {line})")));
        let int =
            || v.parse::<u64>().map_err(|_| invalid(key, format!("`{v}` is not a non-negative integer (line {line})")));
        let list = || -> Result<Vec<f64>, ConfigError> {
            v.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| invalid(key, format!("`{v}` is not a number list (line {line})")))
                })
                .collect()
        };
        let flag = || match v.as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(invalid(key, format!("`{v}` is not a boolean (line {line})"))),
        };
        match key.as_str() {
            "n" => c.n = int()? as usize,
            "dim" => c.dim = int()? as usize,
            "eps" => c.eps = num()?,
            "k" => c.k = int()? as u32,
            "seed" => c.seed = int()?,
            "solver.cells" => c.cells = int()? as usize,
            "solver.side" => c.side = num()?,
            "solver.boundary" => {
                c.boundary = match v.as_str() {
                    "dirichlet" => Boundary::Dirichlet,
                    "periodic" => Boundary::Periodic,
                    _ => return Err(invalid(key, format!("`{v}`: expected dirichlet or periodic"))),
                }
            }
            "solver.scheme" => {
                c.scheme = match v.as_str() {
                    "euler" => Scheme::Euler,
                    "heun" => Scheme::Heun,
                    _ => return Err(invalid(key, format!("`{v}`: expected euler or heun"))),
                }
            }
            "solver.dt_safety" => c.dt_safety = num()?,
            "solver.t_final" => c.t_final = num()?,
            "solver.snapshots" => c.snapshots = int()? as usize,
            "solver.times" => c.times = list()?,
            "interface.shape" => {
                flat = match v.as_str() {
                    "sphere" => false,
                    "flat" => true,
                    _ => return Err(invalid(key, format!("`{v}`: expected sphere or flat"))),
                }
            }
            "interface.center" => {
                let l = list()?;
                if l.is_empty() || l.len() > 2 {
                    return Err(invalid(key, "expected one or two coordinates"));
                }
                center = [l[0], l.get(1).copied().unwrap_or(0.0)];
            }
            "interface.r0" => r0 = num()?,
            "interface.delta_gamma" => c.delta_gamma = num()?,
            "scenario.kind" => kind = v.clone(),
            "scenario.winding" => winding = v.parse().map_err(|_| invalid(key, format!("`{v}` is not an integer")))?,
            "scenario.angle" => c.angle = num()?,
            "scenario.delta" => c.delta = num()?,
            "diagnostics.probe_delta" => c.probe_delta = num()?,
            "diagnostics.probe_samples" => c.probe_samples = int()? as usize,
            "diagnostics.hausdorff_samples" => c.hausdorff_samples = int()? as usize,
            "output.dir" => c.out_dir = PathBuf::from(v),
            "output.dumps" => c.dumps = flag()?,
            _ => return Err(ConfigError::Parse { line: *line, msg: format!("unknown key `{key}`") }),
        }
    }
    c.shape = if flat { InterfaceShape::Flat } else { InterfaceShape::Sphere { center, r0 } };
    c.scenario = match kind.as_str() {
        "constant" => ScenarioChoice::Constant,
        "rotating" => ScenarioChoice::Rotating { winding },
        _ => return Err(invalid("scenario.kind", format!("`{kind}`: expected constant or rotating"))),
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_alone_is_valid() {
        let c = parse_config("eps = 0.04\n").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.resolved_cells(), 200);
    }

    #[test]
    fn sections_and_dotted_keys() {
        let c = parse_config(
            "eps=0.08 # comment\n[solver]\ncells = 64\nscenario.kind = rotating\n[interface]\ncenter = 0.1, -0.1\n",
        )
        .unwrap();
        assert_eq!(c.cells, 64);
        assert_eq!(c.scenario, ScenarioChoice::Rotating { winding: 1 });
        assert_eq!(c.shape, InterfaceShape::Sphere { center: [0.1, -0.1], r0: 0.3 });
    }

    #[test]
    fn errors_carry_location() {
        assert!(matches!(parse_config("eps = 0.04\nbogus line\n"), Err(ConfigError::Parse { line: 2, .. })));
        assert!(matches!(parse_config("[nowhere]\n"), Err(ConfigError::Parse { line: 1, .. })));
        match parse_config("eps = 2\n") {
            Err(ConfigError::Invalid { field, .. }) => assert_eq!(field, "eps"),
            other => panic!("{other:?}"),
        }
        match parse_config("[scenario]\ndelta = 0.5\n") {
            Err(ConfigError::Invalid { field, .. }) => assert_eq!(field, "scenario.delta"),
            other => panic!("{other:?}"),
        }
    }
}
