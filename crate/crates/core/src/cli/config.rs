use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coeff::CoeffProgram;
use crate::index::{IndexOptions, CALIBRATED_SIGN};
use crate::mesh::MeshKind;
use crate::symbolic::{parse_operator, Declarations, OperatorExpr, Shape};
use crate::{Error, Result};

/// Truncation degrees `N0, N0+step, …, ≤ N1`, written `N0:N1:step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl Schedule {
    pub fn degrees(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("schedule `{s}` is not of the form N0:N1:step"));
        let nums: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let nums = match nums.as_slice() {
            [a, b] => [*a, *b, 2],
            [a, b, c] => [*a, *b, *c],
            _ => return Err(bad()),
        };
        let sched = Schedule { start: nums[0], end: nums[1], step: nums[2] };
        if sched.step == 0 || sched.end < sched.start {
            return Err(Error::Config(format!("schedule `{s}` must be strictly increasing")));
        }
        Ok(sched)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.step)
    }
}

impl Serialize for Schedule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub kind: MeshKind,
    pub res: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub eps: f64,
    pub stabilization: f64,
    pub sigma_threshold: f64,
    pub continuity_bound: f64,
    pub integrality: f64,
    pub index_stability: f64,
    pub rockland: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let o = IndexOptions::default();
        Tolerances {
            eps: o.cocycle.eps,
            stabilization: o.cocycle.tol,
            sigma_threshold: o.cocycle.sigma_threshold,
            continuity_bound: o.cocycle.continuity_bound,
            integrality: o.integrality_tol,
            index_stability: o.stability_tol,
            rockland: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub report: Option<PathBuf>,
    pub ch1_csv: Option<PathBuf>,
    pub ch3_csv: Option<PathBuf>,
}

fn default_r() -> usize {
    1
}

fn default_sign() -> f64 {
    CALIBRATED_SIGN
}

/// Complete description of one run; echoed verbatim into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub manifold: Option<ManifoldSpec>,
    pub n: usize,
    #[serde(default = "default_r")]
    pub r: usize,
    pub operator: String,
    pub order: usize,
    /// Scalar helper expressions, evaluated in order and usable by later entries.
    #[serde(default)]
    pub definitions: Vec<(String, String)>,
    #[serde(default)]
    pub coefficients: BTreeMap<String, String>,
    #[serde(default)]
    pub schedule: Option<Schedule>,
    /// Truncation degree for spectrum, rockland and cocycle runs.
    #[serde(default)]
    pub max_degree: Option<usize>,
    #[serde(default)]
    pub margin: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_sign")]
    pub sign: f64,
    #[serde(default)]
    pub outputs: Outputs,
}

/// Parsed operator with its coefficient program.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub decls: Declarations,
    pub expr: OperatorExpr,
    pub program: CoeffProgram,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.r == 0 {
            return Err(Error::Config("n and r must be positive".into()));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("eps", t.eps),
            ("stabilization", t.stabilization),
            ("sigma_threshold", t.sigma_threshold),
            ("continuity_bound", t.continuity_bound),
            ("integrality", t.integrality),
            ("index_stability", t.index_stability),
            ("rockland", t.rockland),
        ] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("tolerance `{name}` must be positive")));
            }
        }
        if self.sign.abs() != 1.0 {
            return Err(Error::Config("sign must be +1 or -1".into()));
        }
        let mut names: Vec<&str> = Vec::new();
        for (name, _) in &self.definitions {
            if names.contains(&name.as_str()) || self.coefficients.contains_key(name) {
                return Err(Error::Config(format!("`{name}` is defined twice")));
            }
            names.push(name);
        }
        Ok(())
    }

    pub fn index_options(&self) -> IndexOptions {
        let t = &self.tolerances;
        let mut o = IndexOptions::default();
        o.cocycle.eps = t.eps;
        o.cocycle.tol = t.stabilization;
        o.cocycle.margin = self.margin;
        o.cocycle.sigma_threshold = t.sigma_threshold;
        o.cocycle.continuity_bound = t.continuity_bound;
        o.integrality_tol = t.integrality;
        o.stability_tol = t.index_stability;
        o.sign = self.sign;
        o
    }

    /// Compiles coefficients (with chart coordinates when a manifold is set),
    /// infers their shapes and parses the operator.
    pub fn prepare(&self) -> Result<Prepared> {
        let coords = self.manifold.map(|m| m.kind);
        let program = CoeffProgram::compile(&self.definitions, &self.coefficients, coords)?;
        let mut decls = Declarations::new(self.n, self.r);
        for (name, e) in program.coefficients() {
            decls.insert(name, e.matrix_size().map_or(Shape::Scalar, Shape::Matrix));
        }
        let expr = parse_operator(&self.operator, &decls)?;
        for name in expr.coefficient_names() {
            if !self.coefficients.contains_key(&name) {
                return Err(Error::Config(format!("coefficient `{name}` is not defined")));
            }
        }
        Ok(Prepared { decls, expr, program })
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWISTED: &str = r#"{
        "manifold": {"kind": "torus3", "res": 8},
        "n": 1,
        "operator": "Z1*Zb1 - i*(1 - beta)*T",
        "order": 2,
        "coefficients": {"beta": "0.5 + 0.3*cos(phi1)"},
        "schedule": "4:8:2"
    }"#;

    #[test]
    fn parse_and_roundtrip() {
        let cfg = RunConfig::from_json(TWISTED).unwrap();
        assert_eq!(cfg.schedule.unwrap().degrees(), vec![4, 6, 8]);
        assert_eq!(cfg.r, 1);
        let back = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let p = cfg.prepare().unwrap();
        assert_eq!(p.decls.shape("beta"), Some(Shape::Scalar));
    }

    #[test]
    fn schedules() {
        assert_eq!("4:14:2".parse::<Schedule>().unwrap().degrees(), vec![4, 6, 8, 10, 12, 14]);
        assert!("4:2:2".parse::<Schedule>().is_err());
        assert!("4:8:0".parse::<Schedule>().is_err());
        assert!("x".parse::<Schedule>().is_err());
    }

    #[test]
    fn invalid_configs() {
        let neg = TWISTED.replace("\"order\": 2,", "\"order\": 2, \"tolerances\": {\"eps\": -1},");
        assert!(RunConfig::from_json(&neg).is_err());
        let missing = TWISTED.replace("\"beta\": ", "\"gamma\": ");
        assert!(RunConfig::from_json(&missing).unwrap().prepare().is_err());
        let unknown = TWISTED.replace("\"n\": 1", "\"n\": 1, \"bogus\": 3");
        assert!(RunConfig::from_json(&unknown).is_err());
    }
}
