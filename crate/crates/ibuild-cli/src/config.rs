//! Experiment configuration: TOML in, normalized TOML out.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Syntax(String),
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error("unknown preset `{0}` (available: {1})")]
    UnknownPreset(String, String),
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    CoxeterOracle,
    Decompositions,
    Dynamics,
    Transit,
    Chabauty,
}

impl Kind {
    pub fn default_preset(self) -> &'static str {
        match self {
            Kind::CoxeterOracle => "a2-oracle",
            Kind::Decompositions => "sl3-q5-decomp",
            Kind::Dynamics => "sl3-q3-panel",
            Kind::Transit => "sl2-q3-transit",
            Kind::Chabauty => "so2-sl2-q5",
        }
    }
}

/// `A2`, `B2`, `G2`, ... for the Coxeter oracle; `SL3(Q5)` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDesc {
    Coxeter(String),
    Sl { n: usize, p: u32 },
}

impl FromStr for GroupDesc {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("SL") {
            let (n, p) = rest
                .strip_suffix(')')
                .and_then(|r| r.split_once("(Q"))
                .ok_or_else(|| format!("expected SL<n>(Q<p>), got `{s}`"))?;
            let n = n.parse().map_err(|_| format!("bad rank in `{s}`"))?;
            let p = p.parse().map_err(|_| format!("bad prime in `{s}`"))?;
            return Ok(GroupDesc::Sl { n, p });
        }
        let sys = ibuild::coxeter::CoxeterSystem::parse(s).map_err(|e| e.to_string())?;
        if sys.kind() != ibuild::coxeter::Kind::Finite {
            return Err(format!("`{s}` is affine; the oracle enumerates finite groups"));
        }
        Ok(GroupDesc::Coxeter(s.to_string()))
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::Coxeter(s) => write!(f, "{s}"),
            GroupDesc::Sl { n, p } => write!(f, "SL{n}(Q{p})"),
        }
    }
}

impl Serialize for GroupDesc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupDesc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoxeterParams {
    /// Extra types checked alongside the group.
    #[serde(default)]
    pub also: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompParams {
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsParams {
    /// `gamma = diag(p^e_1, ..., p^e_n)`.
    pub gamma: Vec<i64>,
    pub samples: usize,
    pub max_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitParams {
    /// The sequence is `gamma^k`, `k = 1..=steps`.
    pub gamma: Vec<i64>,
    pub steps: usize,
    pub targets: usize,
    pub radius: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChabautyParams {
    /// `so2`, `trivial`, `full`, `upper-borel` or `torus`.
    pub subgroup: String,
    pub exps: Vec<i64>,
    pub max_n: usize,
    pub budget: usize,
    pub op_radii: Vec<i64>,
    pub op_per_radius: usize,
    pub transp_targets: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub group: GroupDesc,
    pub seed: u64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "coxeter-oracle")]
    pub coxeter: Option<CoxeterParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decompositions: Option<DecompParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transit: Option<TransitParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chabauty: Option<ChabautyParams>,
}

fn default_precision() -> u32 {
    ibuild::tolerances::DEFAULT_PRECISION
}

pub const PRESETS: &[(&str, &str)] = &[
    ("a2-oracle", include_str!("../presets/a2-oracle.toml")),
    ("sl3-q5-decomp", include_str!("../presets/sl3-q5-decomp.toml")),
    ("sl3-q3-panel", include_str!("../presets/sl3-q3-panel.toml")),
    ("sl2-q3-transit", include_str!("../presets/sl2-q3-transit.toml")),
    ("so2-sl2-q5", include_str!("../presets/so2-sl2-q5.toml")),
];

pub fn preset(name: &str) -> Result<ExperimentConfig, ConfigError> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        ConfigError::UnknownPreset(name.to_string(), names.join(", "))
    })?;
    parse(text)
}

pub fn load(path: &std::path::Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse(&text)
}

/// Parses and validates; the error message of a syntax or type problem
/// carries the line and column.
pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let cfg = cfg.normalize();
    cfg.validate()?;
    Ok(cfg)
}

pub fn emit(cfg: &ExperimentConfig) -> String {
    toml::to_string(cfg).expect("config serializes")
}

impl ExperimentConfig {
    /// Fills in the section of the selected kind and drops the others.
    pub fn normalize(mut self) -> Self {
        let sl = match self.group {
            GroupDesc::Sl { n, .. } => n,
            GroupDesc::Coxeter(_) => 2,
        };
        let kind = self.kind;
        let coxeter = self.coxeter.take();
        let decomp = self.decompositions.take();
        let dynamics = self.dynamics.take();
        let transit = self.transit.take();
        let chabauty = self.chabauty.take();
        let regular: Vec<i64> = (0..sl as i64).map(|i| (sl as i64 - 1) - 2 * i).collect();
        match kind {
            Kind::CoxeterOracle => self.coxeter = Some(coxeter.unwrap_or(CoxeterParams { also: Vec::new() })),
            Kind::Decompositions => self.decompositions = Some(decomp.unwrap_or(DecompParams { samples: 100 })),
            Kind::Dynamics => {
                self.dynamics = Some(dynamics.unwrap_or(DynamicsParams {
                    gamma: regular,
                    samples: 50,
                    max_n: ibuild::tolerances::DEFAULT_MAX_N,
                }))
            }
            Kind::Transit => self.transit = Some(transit.unwrap_or(TransitParams { gamma: regular, steps: 8, targets: 20, radius: 4 })),
            Kind::Chabauty => {
                self.chabauty = Some(chabauty.unwrap_or(ChabautyParams {
                    subgroup: "so2".into(),
                    exps: regular.iter().rev().copied().collect(),
                    max_n: 24,
                    budget: 12,
                    op_radii: vec![0, 1, 3],
                    op_per_radius: 8,
                    transp_targets: 8,
                }))
            }
        }
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(4..=60).contains(&self.precision) {
            return Err(field("precision", "must lie in 4..=60"));
        }
        let n = match (&self.group, self.kind) {
            (GroupDesc::Coxeter(_), Kind::CoxeterOracle) => {
                for t in &self.coxeter.as_ref().expect("normalized").also {
                    t.parse::<GroupDesc>().map_err(|e| field("coxeter-oracle.also", e))?;
                }
                return Ok(());
            }
            (GroupDesc::Coxeter(_), _) => return Err(field("group", "this kind needs SL<n>(Q<p>)")),
            (GroupDesc::Sl { .. }, Kind::CoxeterOracle) => return Err(field("group", "the Coxeter oracle needs a Coxeter type such as A2")),
            (GroupDesc::Sl { n, p }, _) => {
                if !(2..=5).contains(n) {
                    return Err(field("group", "n must lie in 2..=5"));
                }
                if *p == 2 || !is_prime(*p) {
                    return Err(field("group", "p must be an odd prime"));
                }
                *n
            }
        };
        let exps_ok = |e: &[i64], name: &'static str| -> Result<(), ConfigError> {
            if e.len() != n || e.iter().sum::<i64>() != 0 || e.iter().all(|&x| x == 0) {
                return Err(field(name, format!("needs {n} exponents summing to 0, not all 0")));
            }
            Ok(())
        };
        match self.kind {
            Kind::Dynamics => {
                let d = self.dynamics.as_ref().expect("normalized");
                exps_ok(&d.gamma, "dynamics.gamma")?;
                if d.max_n == 0 {
                    return Err(field("dynamics.max_n", "must be positive"));
                }
            }
            Kind::Transit => {
                let t = self.transit.as_ref().expect("normalized");
                exps_ok(&t.gamma, "transit.gamma")?;
                if t.steps < 2 {
                    return Err(field("transit.steps", "needs at least 2 elements"));
                }
            }
            Kind::Chabauty => {
                let c = self.chabauty.as_ref().expect("normalized");
                exps_ok(&c.exps, "chabauty.exps")?;
                subgroup_spec(&c.subgroup).ok_or_else(|| field("chabauty.subgroup", format!("unknown subgroup `{}`", c.subgroup)))?;
                if c.max_n < ibuild::tolerances::CAUCHY_TAIL + 1 {
                    return Err(field("chabauty.max_n", "too short to detect convergence"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn subgroup_spec(name: &str) -> Option<ibuild::chabauty::SubgroupSpec> {
    use ibuild::chabauty::SubgroupSpec;
    Some(match name {
        "so2" | "so" | "involution" => SubgroupSpec::Involution,
        "trivial" => SubgroupSpec::Trivial,
        "full" => SubgroupSpec::Full,
        "upper-borel" => SubgroupSpec::UpperBorel,
        "torus" => SubgroupSpec::DiagonalTorus,
        _ => return None,
    })
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for (name, _) in PRESETS {
            let cfg = preset(name).unwrap();
            assert_eq!(parse(&emit(&cfg)).unwrap(), cfg, "{name}");
        }
    }

    #[test]
    fn minimal_config_is_filled_in() {
        let cfg = parse("kind = \"transit\"\ngroup = \"SL3(Q3)\"\nseed = 1\n").unwrap();
        assert_eq!(cfg.transit.as_ref().unwrap().gamma, vec![2, 0, -2]);
        assert_eq!(cfg.precision, 32);
        assert!(emit(&cfg).contains("[transit]"));
    }

    #[test]
    fn diagnostics_name_the_line_or_field() {
        let e = parse("kind = \"dynamics\"\ngroup = \"SL3(Q3)\"\nseed = \"x\"\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse("kind = \"dynamics\"\ngroup = \"SL3(Q3)\"\nseed = 1\n[dynamics]\ngamma = [1, 1]\nsamples = 2\nmax_n = 4\n").unwrap_err();
        assert!(e.to_string().contains("dynamics.gamma"), "{e}");
        let e = parse("kind = \"dynamics\"\ngroup = \"SL3(Q4)\"\nseed = 1\n").unwrap_err();
        assert!(e.to_string().contains("group"), "{e}");
        assert!(parse("kind = \"dynamics\"\ngroup = \"A2\"\nseed = 1\n").is_err());
        assert!(parse("kind = \"chabauty\"\ngroup = \"SL2(Q5)\"\nseed = 1\nbogus = 2\n").is_err());
    }

    #[test]
    fn group_descriptors() {
        assert_eq!("SL3(Q5)".parse::<GroupDesc>().unwrap(), GroupDesc::Sl { n: 3, p: 5 });
        assert_eq!("G2".parse::<GroupDesc>().unwrap().to_string(), "G2");
        assert!("A~2".parse::<GroupDesc>().is_err());
        assert!("SL3Q5".parse::<GroupDesc>().is_err());
    }
}
