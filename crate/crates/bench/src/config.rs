//! Experiment description, read from TOML or JSON.
//!
//! Field names follow the experiment vocabulary exactly (`N`, `K`, `S`, `T`,
//! `alpha_list`, ...). A minimal TOML file:
//!
//! ```toml
//! N = 500
//! K = 20
//! alpha_list = [0.16, 0.2]
//! smnr_db_list = ["clean", 20.0]
//! signal_kind = "gaussian"
//! S = 10
//! T = 10
//! master_seed = 1
//!
//! [[algorithms]]
//! name = "omp"
//!
//! [[algorithms]]
//! name = "sols"
//! L = 20
//! gamma = 0.5
//! ```

use std::fmt;
use std::path::Path;

use atomsel_core::{Algorithm, Config, SignalKind};
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// A measurement-noise level: noiseless, or an SMNR in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SmnrRepr", into = "SmnrRepr")]
pub enum Smnr {
    Clean,
    Db(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SmnrRepr {
    Db(f64),
    Marker(String),
}

impl TryFrom<SmnrRepr> for Smnr {
    type Error = String;

    fn try_from(r: SmnrRepr) -> Result<Self, String> {
        match r {
            SmnrRepr::Db(v) => Ok(Smnr::Db(v)),
            SmnrRepr::Marker(s) if s.eq_ignore_ascii_case("clean") => Ok(Smnr::Clean),
            SmnrRepr::Marker(s) => Err(format!("SMNR must be a number or \"clean\", got \"{s}\"")),
        }
    }
}

impl From<Smnr> for SmnrRepr {
    fn from(s: Smnr) -> Self {
        match s {
            Smnr::Clean => SmnrRepr::Marker("clean".into()),
            Smnr::Db(v) => SmnrRepr::Db(v),
        }
    }
}

impl fmt::Display for Smnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smnr::Clean => f.write_str("clean"),
            Smnr::Db(v) => write!(f, "{v}"),
        }
    }
}

/// How the noise variance is tied to the SMNR.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmnrCalibration {
    /// `σ² = E‖x‖² / (M · SMNR)`, the same for every trial.
    #[default]
    Expected,
    /// `σ² = ‖x‖² / (M · SMNR)` from the drawn signal.
    Realized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    #[serde(with = "display_fromstr")]
    pub name: Algorithm,
    #[serde(rename = "L", default = "one")]
    pub l: usize,
    #[serde(default)]
    pub gamma: f64,
    /// Column name in reports; derived from the parameters when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn one() -> usize {
    1
}

impl AlgorithmSpec {
    pub fn new(name: Algorithm) -> Self {
        Self { name, l: 1, gamma: 0.0, label: None }
    }

    pub fn with_l(mut self, l: usize) -> Self {
        self.l = l;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match self.name {
            Algorithm::Sols => format!("sols_L{}_g{}", self.l, self.gamma),
            a if a.uses_potential_atoms() => format!("{}_L{}", a, self.l),
            a => a.to_string(),
        }
    }

    pub fn pursuit_config(&self, k: usize, use_recursive_gram: bool) -> Config {
        let cfg = Config::new(k).with_recursive_gram(use_recursive_gram);
        match self.name {
            Algorithm::Sols => cfg.with_potential_atoms(self.l).with_gamma(self.gamma),
            a if a.uses_potential_atoms() => cfg.with_potential_atoms(self.l),
            _ => cfg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub alpha_list: Vec<f64>,
    pub smnr_db_list: Vec<Smnr>,
    #[serde(with = "display_fromstr", default = "gaussian")]
    pub signal_kind: SignalKind,
    /// Signals per matrix realization.
    #[serde(rename = "S")]
    pub s: usize,
    /// Matrix realizations.
    #[serde(rename = "T")]
    pub t: usize,
    pub algorithms: Vec<AlgorithmSpec>,
    pub master_seed: u64,
    /// Store wall-clock time per cell. Off by default since it makes the
    /// output machine-dependent.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub smnr_calibration: SmnrCalibration,
    #[serde(default = "yes")]
    pub use_recursive_gram: bool,
    /// `(N, K)` pairs for running-time measurement; `[[N, K]]` when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timing_pairs: Vec<[usize; 2]>,
    /// Logarithm base in `M = ⌈K log N⌉` for timing runs; natural log by default.
    #[serde(default = "euler")]
    pub log_base: f64,
}

fn gaussian() -> SignalKind {
    SignalKind::Gaussian
}

fn yes() -> bool {
    true
}

fn euler() -> f64 {
    std::f64::consts::E
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, alpha_list: Vec<f64>, algorithms: Vec<AlgorithmSpec>) -> Self {
        Self {
            n,
            k,
            alpha_list,
            smnr_db_list: vec![Smnr::Clean],
            signal_kind: SignalKind::Gaussian,
            s: 1,
            t: 1,
            algorithms,
            master_seed: 0,
            record_timing: false,
            smnr_calibration: SmnrCalibration::Expected,
            use_recursive_gram: true,
            timing_pairs: Vec::new(),
            log_base: std::f64::consts::E,
        }
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        let parsed: Self = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            serde_json::from_str(&text).map_err(|e| BenchError::parse(path, e))?
        } else {
            toml::from_str(&text).map_err(|e| BenchError::parse(path, e))?
        };
        Ok(parsed)
    }

    /// `M = α·N`; `α·N` must be an integer.
    pub fn measurements(&self, alpha: f64) -> Result<usize, BenchError> {
        let m = alpha * self.n as f64;
        let rounded = m.round();
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(BenchError::InvalidConfig(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if (m - rounded).abs() > 1e-9 * m.max(1.0) {
            return Err(BenchError::InvalidConfig(format!(
                "alpha = {alpha} gives non-integral M = {m} for N = {}",
                self.n
            )));
        }
        Ok(rounded as usize)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::InvalidConfig(msg));
        if self.k == 0 || self.k >= self.n {
            return bad(format!("K must satisfy 1 <= K < N, got K = {}, N = {}", self.k, self.n));
        }
        if self.s == 0 || self.t == 0 {
            return bad("S and T must both be at least 1".into());
        }
        if self.alpha_list.is_empty() {
            return bad("alpha_list is empty".into());
        }
        for &alpha in &self.alpha_list {
            let m = self.measurements(alpha)?;
            if self.k >= m {
                return bad(format!("K = {} must be below M = {m} (alpha = {alpha})", self.k));
            }
        }
        if self.smnr_db_list.is_empty() {
            return bad("smnr_db_list is empty".into());
        }
        if let Some(Smnr::Db(v)) = self.smnr_db_list.iter().find(|s| matches!(s, Smnr::Db(v) if !v.is_finite())) {
            return bad(format!("SMNR must be finite, got {v}"));
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms configured".into());
        }
        let mut labels = Vec::new();
        for spec in &self.algorithms {
            spec.pursuit_config(self.k, self.use_recursive_gram)
                .validate()
                .map_err(|e| BenchError::InvalidConfig(format!("{}: {e}", spec.label())))?;
            if !spec.name.uses_potential_atoms() && spec.l != 1 {
                return bad(format!("{} takes no L", spec.name));
            }
            if spec.name != Algorithm::Sols && spec.gamma != 0.0 {
                return bad(format!("{} takes no gamma", spec.name));
            }
            let label = spec.label();
            if labels.contains(&label) {
                return bad(format!("duplicate algorithm label `{label}`"));
            }
            labels.push(label);
        }
        if !(self.log_base > 1.0 && self.log_base.is_finite()) {
            return bad(format!("log_base must be finite and above 1, got {}", self.log_base));
        }
        Ok(())
    }
}

mod display_fromstr {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
N = 100
K = 4
alpha_list = [0.2, 0.3]
smnr_db_list = ["clean", 20]
S = 2
T = 3
master_seed = 9

[[algorithms]]
name = "omp"

[[algorithms]]
name = "sols"
L = 4
gamma = 0.5
"#;

    #[test]
    fn parses_toml() {
        let cfg: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        assert_eq!(cfg.n, 100);
        assert_eq!(cfg.smnr_db_list, vec![Smnr::Clean, Smnr::Db(20.0)]);
        assert_eq!(cfg.signal_kind, SignalKind::Gaussian);
        assert_eq!(cfg.algorithms[1].label(), "sols_L4_g0.5");
        assert!(cfg.use_recursive_gram);
        cfg.validate().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let cfg: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_values() {
        let base: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        let mut c = base.clone();
        c.alpha_list = vec![0.205];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.alpha_list = vec![0.04];
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.algorithms.push(AlgorithmSpec::new(Algorithm::Omp));
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.algorithms[0].l = 3;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.s = 0;
        assert!(c.validate().is_err());
        assert!(toml::from_str::<ExperimentConfig>(&SAMPLE.replace("\"clean\"", "\"loud\"")).is_err());
        assert!(toml::from_str::<ExperimentConfig>(&format!("{SAMPLE}\nbogus = 1")).is_err());
    }
}
