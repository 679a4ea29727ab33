//! Declarative scenario configuration.
//!
//! Configs are TOML. A minimal one:
//!
//! ```toml
//! boosts = [0.6]
//!
//! [grid]
//! step = 0.01
//! count = 16384
//!
//! [state]
//! kind = "gaussian_carrier"
//! width = 2.0
//! carrier_k = 20.0
//! ```
//!
//! Everything else has a default. Validation collects every problem before
//! failing, one message per offending field.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classical::FieldConstants;
use crate::error::{Error, Result};
use crate::grid::{Axis, Polarization};
use crate::kinematics::{BoostParams, Direction};

/// The named invariant checks a scenario can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    DopplerCentroid,
    BoxEnergyConservation,
    NaiveEnergyRatio,
    PhotonNumberConservation,
    MomentumPathCommutativity,
    KernelConsistency,
    Parseval,
    SignalExchange,
    Reciprocity,
}

impl CheckName {
    pub const ALL: [CheckName; 9] = [
        CheckName::DopplerCentroid,
        CheckName::BoxEnergyConservation,
        CheckName::NaiveEnergyRatio,
        CheckName::PhotonNumberConservation,
        CheckName::MomentumPathCommutativity,
        CheckName::KernelConsistency,
        CheckName::Parseval,
        CheckName::SignalExchange,
        CheckName::Reciprocity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::DopplerCentroid => "doppler_centroid",
            CheckName::BoxEnergyConservation => "box_energy_conservation",
            CheckName::NaiveEnergyRatio => "naive_energy_ratio",
            CheckName::PhotonNumberConservation => "photon_number_conservation",
            CheckName::MomentumPathCommutativity => "momentum_path_commutativity",
            CheckName::KernelConsistency => "kernel_consistency",
            CheckName::Parseval => "parseval",
            CheckName::SignalExchange => "signal_exchange",
            CheckName::Reciprocity => "reciprocity",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckName::DopplerCentroid | CheckName::KernelConsistency => 1e-3,
            CheckName::BoxEnergyConservation
            | CheckName::NaiveEnergyRatio
            | CheckName::PhotonNumberConservation
            | CheckName::MomentumPathCommutativity => 1e-6,
            CheckName::Parseval => 1e-10,
            CheckName::SignalExchange | CheckName::Reciprocity => 1e-12,
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Gaussian,
    GaussianCarrier,
    Custom,
}

impl FromStr for StateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gaussian" => Ok(StateKind::Gaussian),
            "gaussian_carrier" => Ok(StateKind::GaussianCarrier),
            "custom" => Ok(StateKind::Custom),
            other => Err(format!(
                "unknown kind {other:?} (expected gaussian, gaussian_carrier or custom)"
            )),
        }
    }
}

/// The packet or blip profile a scenario starts from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateParams {
    pub kind: StateKind,
    pub center: f64,
    pub width: f64,
    pub carrier_k: f64,
    pub amplitude: f64,
    pub s: Direction,
    pub lambda: Polarization,
    /// Sample file for `custom`, already resolved against the config directory.
    pub file: Option<PathBuf>,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Short label, normally the config file stem.
    pub name: String,
    /// Hex SHA-256 of the config text.
    pub hash: String,
    /// `None` only for `custom` states, which take their grid from the file.
    pub grid: Option<Axis>,
    pub constants: FieldConstants,
    pub h_density: f64,
    pub state: StateParams,
    pub boosts: Vec<BoostParams>,
    pub checks: Vec<CheckName>,
    pub output_dir: PathBuf,
    pub tolerances: BTreeMap<CheckName, f64>,
}

impl ScenarioConfig {
    pub fn tolerance(&self, check: CheckName) -> f64 {
        self.tolerances
            .get(&check)
            .copied()
            .unwrap_or_else(|| check.default_tolerance())
    }

    /// Parses and validates config text. Relative paths are taken relative
    /// to `base_dir`.
    pub fn parse(text: &str, name: &str, base_dir: &Path) -> Result<Self> {
        let fail = |problems: Vec<String>| Error::InvalidConfig {
            source_name: name.to_string(),
            problems,
        };
        let raw: RawConfig = toml::from_str(text).map_err(|e| fail(vec![e.message().to_string()]))?;
        let hash = format!("{:x}", Sha256::digest(text.as_bytes()));
        let mut v = Validator::default();

        let raw_state = raw.state.unwrap_or_default();
        let kind = match raw_state.kind.as_deref() {
            Some(k) => v.parse("state.kind", k),
            None => v.missing("state.kind"),
        };
        let state = v.state(&raw_state, kind, base_dir);

        let grid = match (raw.grid, kind) {
            (None, Some(StateKind::Custom)) => None,
            (None, _) => {
                v.missing::<()>("grid");
                None
            }
            (Some(g), _) => v.grid(&g),
        };

        let rc = raw.constants.unwrap_or_default();
        let d = FieldConstants::default();
        let constants = FieldConstants {
            c: v.positive("constants.c", rc.c.unwrap_or(d.c)),
            hbar: v.positive("constants.hbar", rc.hbar.unwrap_or(d.hbar)),
            epsilon: v.positive("constants.epsilon", rc.epsilon.unwrap_or(d.epsilon)),
            area: v.positive("constants.area", rc.area.unwrap_or(d.area)),
        };
        let h_density = v.positive("constants.h_density", rc.h_density.unwrap_or(1.0));

        let boosts = match raw.boosts {
            None => {
                v.missing::<()>("boosts");
                Vec::new()
            }
            Some(b) if b.is_empty() => {
                v.problem("boosts", "needs at least one beta");
                Vec::new()
            }
            Some(b) => b
                .iter()
                .enumerate()
                .filter_map(|(i, &beta)| match BoostParams::new(beta) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        v.problem(&format!("boosts[{i}]"), &e.to_string());
                        None
                    }
                })
                .collect(),
        };

        let checks = match raw.checks {
            None => CheckName::ALL.to_vec(),
            Some(list) => {
                let mut out: Vec<CheckName> = Vec::new();
                for (i, c) in list.iter().enumerate() {
                    let field = format!("checks[{i}]");
                    if let Some(c) = v.parse::<CheckName>(&field, c) {
                        if out.contains(&c) {
                            v.problem(&field, &format!("{c} listed twice"));
                        } else {
                            out.push(c);
                        }
                    }
                }
                out
            }
        };

        let mut tolerances = BTreeMap::new();
        for (key, tol) in raw.tolerances.unwrap_or_default() {
            let field = format!("tolerances.{key}");
            if let Some(c) = v.parse::<CheckName>(&field, &key) {
                tolerances.insert(c, v.positive(&field, tol));
            }
        }

        let output_dir = base_dir.join(raw.output_dir.unwrap_or_else(|| format!("out/{name}")));

        if !v.problems.is_empty() {
            return Err(fail(v.problems));
        }
        Ok(Self {
            name: name.to_string(),
            hash,
            grid,
            constants,
            h_density,
            state: state.expect("state validated"),
            boosts,
            checks,
            output_dir,
            tolerances,
        })
    }
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string());
    let base = path.parent().unwrap_or(Path::new("."));
    ScenarioConfig::parse(&text, &name, base).map_err(|e| match e {
        Error::InvalidConfig { problems, .. } => Error::InvalidConfig {
            source_name: path.display().to_string(),
            problems,
        },
        other => other,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grid: Option<RawGrid>,
    constants: Option<RawConstants>,
    state: Option<RawState>,
    boosts: Option<Vec<f64>>,
    checks: Option<Vec<String>>,
    output_dir: Option<String>,
    tolerances: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    start: Option<f64>,
    step: Option<f64>,
    count: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    c: Option<f64>,
    hbar: Option<f64>,
    epsilon: Option<f64>,
    area: Option<f64>,
    h_density: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    kind: Option<String>,
    center: Option<f64>,
    width: Option<f64>,
    carrier_k: Option<f64>,
    amplitude: Option<f64>,
    s: Option<i64>,
    lambda: Option<String>,
    file: Option<String>,
}

#[derive(Default)]
struct Validator {
    problems: Vec<String>,
}

impl Validator {
    fn problem(&mut self, field: &str, msg: &str) {
        self.problems.push(format!("{field}: {msg}"));
    }

    fn missing<T>(&mut self, field: &str) -> Option<T> {
        self.problem(field, "required");
        None
    }

    fn parse<T: FromStr>(&mut self, field: &str, text: &str) -> Option<T>
    where
        T::Err: fmt::Display,
    {
        text.parse()
            .map_err(|e: T::Err| self.problem(field, &e.to_string()))
            .ok()
    }

    fn positive(&mut self, field: &str, x: f64) -> f64 {
        if !(x.is_finite() && x > 0.0) {
            self.problem(field, &format!("must be positive and finite, got {x}"));
        }
        x
    }

    fn finite(&mut self, field: &str, x: f64) -> f64 {
        if !x.is_finite() {
            self.problem(field, &format!("must be finite, got {x}"));
        }
        x
    }

    fn grid(&mut self, g: &RawGrid) -> Option<Axis> {
        let step = match g.step {
            Some(s) => Some(self.positive("grid.step", s)),
            None => self.missing("grid.step"),
        };
        let count = match g.count {
            Some(n) if n < 2 || n % 2 != 0 => {
                self.problem("grid.count", &format!("must be even and at least 2, got {n}"));
                None
            }
            Some(n) => Some(n as usize),
            None => self.missing("grid.count"),
        };
        let start = g.start.map(|s| self.finite("grid.start", s));
        let (step, count) = (step?, count?);
        let start = start.unwrap_or(-(count as f64) * step / 2.0);
        Axis::new(start, step, count)
            .map_err(|e| self.problem("grid", &e.to_string()))
            .ok()
    }

    fn state(&mut self, r: &RawState, kind: Option<StateKind>, base_dir: &Path) -> Option<StateParams> {
        let s = match r.s {
            None => Some(Direction::Right),
            Some(v) => Direction::from_sign(v)
                .map_err(|e| self.problem("state.s", &e.to_string()))
                .ok(),
        };
        let lambda = match &r.lambda {
            None => Some(Polarization::H),
            Some(l) => self.parse("state.lambda", l),
        };
        let analytic = matches!(kind, Some(StateKind::Gaussian | StateKind::GaussianCarrier));
        let width = match (r.width, analytic) {
            (Some(w), _) => self.positive("state.width", w),
            (None, true) => {
                self.problem("state.width", "required for analytic profiles");
                f64::NAN
            }
            (None, false) => f64::NAN,
        };
        let carrier_k = match (kind, r.carrier_k) {
            (Some(StateKind::GaussianCarrier), Some(k)) => self.finite("state.carrier_k", k),
            (Some(StateKind::GaussianCarrier), None) => {
                self.problem("state.carrier_k", "required for gaussian_carrier");
                f64::NAN
            }
            (Some(_), Some(_)) => {
                self.problem("state.carrier_k", "only applies to gaussian_carrier");
                f64::NAN
            }
            (_, None) => 0.0,
            (None, Some(k)) => k,
        };
        let file = match (kind, &r.file) {
            (Some(StateKind::Custom), Some(f)) => Some(base_dir.join(f)),
            (Some(StateKind::Custom), None) => self.missing("state.file"),
            (Some(_), Some(_)) => {
                self.problem("state.file", "only applies to custom");
                None
            }
            _ => None,
        };
        let center = self.finite("state.center", r.center.unwrap_or(0.0));
        let amplitude = self.positive("state.amplitude", r.amplitude.unwrap_or(1.0));
        Some(StateParams {
            kind: kind?,
            center,
            width,
            carrier_k,
            amplitude,
            s: s?,
            lambda: lambda?,
            file,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig> {
        ScenarioConfig::parse(text, "t", Path::new("/base"))
    }

    fn problems(text: &str) -> Vec<String> {
        match parse(text) {
            Err(Error::InvalidConfig { problems, .. }) => problems,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    const MINIMAL: &str = r#"
        boosts = [0.6]
        [grid]
        step = 0.5
        count = 64
        [state]
        kind = "gaussian"
        width = 2.0
    "#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse(MINIMAL).unwrap();
        assert_eq!(c.constants, FieldConstants::default());
        assert_eq!(c.h_density, 1.0);
        assert_eq!(c.checks, CheckName::ALL.to_vec());
        assert_eq!(c.grid.unwrap().start(), -16.0);
        assert_eq!(c.state.s, Direction::Right);
        assert_eq!(c.state.lambda, Polarization::H);
        assert_eq!(c.state.amplitude, 1.0);
        assert_eq!(c.output_dir, Path::new("/base/out/t"));
        assert_eq!(c.tolerance(CheckName::Parseval), 1e-10);
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn superluminal_boost_names_the_field() {
        let p = problems(&MINIMAL.replace("[0.6]", "[0.5, 1.2]"));
        assert_eq!(p.len(), 1);
        assert!(p[0].starts_with("boosts[1]"), "{p:?}");
    }

    #[test]
    fn odd_count_is_rejected() {
        let p = problems(&MINIMAL.replace("count = 64", "count = 65"));
        assert!(p[0].starts_with("grid.count"), "{p:?}");
    }

    #[test]
    fn problems_are_aggregated() {
        let text = MINIMAL
            .replace("count = 64", "count = 3")
            .replace("width = 2.0", "width = -1.0\ns = 0")
            .replace("[0.6]", "[1.0]");
        let p = problems(&text);
        for field in ["grid.count", "state.width", "state.s", "boosts[0]"] {
            assert!(p.iter().any(|m| m.starts_with(field)), "{field} missing in {p:?}");
        }
    }

    #[test]
    fn unknown_check_and_tolerance_keys() {
        let text = format!(
            "checks = [\"parseval\", \"bogus\"]\n{MINIMAL}\n[tolerances]\nnope = 1.0\nparseval = 1e-9\n"
        );
        let p = problems(&text);
        assert!(p.iter().any(|m| m.starts_with("checks[1]")));
        assert!(p.iter().any(|m| m.starts_with("tolerances.nope")));
    }

    #[test]
    fn custom_state_needs_a_file_and_no_grid() {
        let c = parse("boosts = [0.1]\n[state]\nkind = \"custom\"\nfile = \"data/x.csv\"\n").unwrap();
        assert!(c.grid.is_none());
        assert_eq!(c.state.file.as_deref(), Some(Path::new("/base/data/x.csv")));
        let p = problems("boosts = [0.1]\n[state]\nkind = \"custom\"\n");
        assert!(p[0].starts_with("state.file"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let p = problems(&format!("{MINIMAL}\nwidht = 3\n"));
        assert!(p[0].contains("widht"), "{p:?}");
    }

    #[test]
    fn carrier_rules() {
        let p = problems(&MINIMAL.replace("kind = \"gaussian\"", "kind = \"gaussian_carrier\""));
        assert!(p[0].starts_with("state.carrier_k"));
        let p = problems(&MINIMAL.replace("width = 2.0", "width = 2.0\ncarrier_k = 3.0"));
        assert!(p[0].starts_with("state.carrier_k"));
    }
}
