//! Analysis configuration.
//!
//! A configuration is a single map, written as TOML (or JSON, which is
//! what the report echoes back):
//!
//! ```toml
//! version = 1
//! operator = "schoenberg"     # bernstein | kantorovich | schoenberg | hat-dirac | custom
//! knots = [0, 0, 0, 0.5, 1, 1, 1]
//! degree = 2
//! grid_points = 1001
//! seed = 42
//!
//! [tolerances]
//! pou = 1e-10
//! stochastic = 1e-10
//! peripheral = 1e-8
//! norm = 1e-10
//!
//! [iterate]
//! m_max = 1048576
//! tol = 1e-12
//!
//! [outputs]
//! json = "report.json"
//! csv = "eigenvalues.csv"
//! svg = "spectrum.svg"
//! ```
//!
//! `custom` operators take a `[basis]` table (`kind` = `bernstein`,
//! `bspline` or `hat`, with `n`, `knots`/`degree` or `nodes`) and one
//! `[[functionals]]` entry per basis function (`kind` = `dirac` with `x`,
//! `interval-average` with `a`, `b` and optional `order`/`panels`, or
//! `weighted-quadrature` with `nodes` and `weights`).

use std::fmt;
use std::path::PathBuf;

use pouspec::{catalog, BasisSystem, Functional, OperatorSpec, QuadratureRule};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_GRID_POINTS: usize = 1001;
pub const MIN_GRID_POINTS: usize = 11;
pub const DEFAULT_SEED: u64 = pouspec::sampling::DEFAULT_SEED;
pub const DEFAULT_M_MAX: u64 = 1 << 20;
pub const DEFAULT_ITERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum BasisConfig {
    Bernstein { n: usize },
    BSpline { knots: Vec<f64>, degree: usize },
    Hat { nodes: Vec<f64> },
}

impl BasisConfig {
    pub fn build(&self) -> pouspec::Result<BasisSystem> {
        match self {
            BasisConfig::Bernstein { n } => BasisSystem::bernstein(*n),
            BasisConfig::BSpline { knots, degree } => BasisSystem::bspline(knots, *degree),
            BasisConfig::Hat { nodes } => BasisSystem::hat(nodes),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionalConfig {
    Dirac { x: f64 },
    IntervalAverage { a: f64, b: f64, rule: QuadratureRule },
    WeightedQuadrature { nodes: Vec<f64>, weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorConfig {
    Bernstein {
        n: usize,
    },
    Kantorovich {
        n: usize,
    },
    Schoenberg {
        knots: Vec<f64>,
        degree: usize,
    },
    HatDirac {
        nodes: Vec<f64>,
    },
    Custom {
        basis: BasisConfig,
        functionals: Vec<FunctionalConfig>,
    },
}

impl OperatorConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            OperatorConfig::Bernstein { .. } => "bernstein",
            OperatorConfig::Kantorovich { .. } => "kantorovich",
            OperatorConfig::Schoenberg { .. } => "schoenberg",
            OperatorConfig::HatDirac { .. } => "hat-dirac",
            OperatorConfig::Custom { .. } => "custom",
        }
    }

    /// Whether any functional integrates (and so carries quadrature error).
    pub fn uses_quadrature(&self) -> bool {
        match self {
            OperatorConfig::Kantorovich { .. } => true,
            OperatorConfig::Custom { functionals, .. } => functionals
                .iter()
                .any(|f| matches!(f, FunctionalConfig::IntervalAverage { .. })),
            _ => false,
        }
    }

    /// Field most likely responsible when [`OperatorConfig::build`] fails.
    fn blame(&self) -> &'static str {
        match self {
            OperatorConfig::Bernstein { .. } | OperatorConfig::Kantorovich { .. } => "n",
            OperatorConfig::Schoenberg { .. } => "knots",
            OperatorConfig::HatDirac { .. } => "nodes",
            OperatorConfig::Custom { basis, .. } => match basis.build() {
                Ok(_) => "functionals",
                Err(_) => "basis",
            },
        }
    }

    pub fn build(&self) -> pouspec::Result<OperatorSpec> {
        match self {
            OperatorConfig::Bernstein { n } => catalog::bernstein(*n),
            OperatorConfig::Kantorovich { n } => catalog::kantorovich(*n),
            OperatorConfig::Schoenberg { knots, degree } => catalog::schoenberg(knots, *degree),
            OperatorConfig::HatDirac { nodes } => catalog::hat_dirac(nodes),
            OperatorConfig::Custom { basis, functionals } => {
                let basis = basis.build()?;
                let functionals = functionals
                    .iter()
                    .map(|f| match f {
                        FunctionalConfig::Dirac { x } => Ok(Functional::dirac(*x)),
                        FunctionalConfig::IntervalAverage { a, b, rule } => {
                            Functional::interval_average_with(*a, *b, *rule)
                        }
                        FunctionalConfig::WeightedQuadrature { nodes, weights } => {
                            Functional::weighted_quadrature(nodes.clone(), weights.clone())
                        }
                    })
                    .collect::<pouspec::Result<Vec<_>>>()?;
                OperatorSpec::new("custom", basis, functionals)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Partition of unity, nonnegativity, functional normalisation,
    /// positivity and constant reproduction.
    pub pou: f64,
    pub stochastic: f64,
    pub peripheral: f64,
    /// Allowed excess of the norm estimate over 1.
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pou: 1e-10,
            stochastic: 1e-10,
            peripheral: 1e-8,
            norm: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateConfig {
    pub m_max: u64,
    pub tol: f64,
}

impl Default for IterateConfig {
    fn default() -> Self {
        Self {
            m_max: DEFAULT_M_MAX,
            tol: DEFAULT_ITERATE_TOL,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outputs {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "RawConfig")]
pub struct AnalysisConfig {
    pub operator: OperatorConfig,
    pub grid_points: usize,
    pub tolerances: Tolerances,
    pub iterate: IterateConfig,
    pub seed: u64,
    pub outputs: Outputs,
}

impl AnalysisConfig {
    pub fn new(operator: OperatorConfig) -> Self {
        Self {
            operator,
            grid_points: DEFAULT_GRID_POINTS,
            tolerances: Tolerances::default(),
            iterate: IterateConfig::default(),
            seed: DEFAULT_SEED,
            outputs: Outputs::default(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&RawConfig::from(self.clone())).expect("config serializes to TOML")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes to JSON")
    }
}

impl fmt::Display for AnalysisConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (seed {})", self.operator.kind(), self.seed)
    }
}

/// Parses and validates a configuration document. Text starting with `{`
/// is read as JSON, anything else as TOML.
pub fn parse_config(text: &str) -> Result<AnalysisConfig, ConfigError> {
    let raw: RawConfig = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| ConfigError::syntax(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| ConfigError::syntax(e.to_string()))?
    };
    let config = raw.validate()?;
    config
        .operator
        .build()
        .map_err(|e| ConfigError::field(config.operator.blame(), e.to_string()))?;
    Ok(config)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    version: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    knots: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_points: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<RawBasis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    functionals: Option<Vec<RawFunctional>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerances: Option<RawTolerances>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterate: Option<RawIterate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outputs: Option<RawOutputs>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    knots: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctional {
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    panels: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pou: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stochastic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peripheral: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIterate {
    #[serde(skip_serializing_if = "Option::is_none")]
    m_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    json: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg: Option<PathBuf>,
}

fn require<T>(value: Option<T>, field: &str) -> Result<T, ConfigError> {
    value.ok_or_else(|| ConfigError::field(field, "missing required field"))
}

fn positive_count(value: Option<i64>, field: &str, label: &str) -> Result<usize, ConfigError> {
    let v = require(value, field)?;
    if v < 1 {
        return Err(ConfigError::field(field, format!("{label} must be ≥ 1")));
    }
    Ok(v as usize)
}

fn nonnegative_count(value: Option<i64>, field: &str) -> Result<usize, ConfigError> {
    let v = require(value, field)?;
    if v < 0 {
        return Err(ConfigError::field(field, "must be ≥ 0"));
    }
    Ok(v as usize)
}

fn positive_real(value: Option<f64>, default: f64, field: &str) -> Result<f64, ConfigError> {
    let v = value.unwrap_or(default);
    if !(v > 0.0 && v.is_finite()) {
        return Err(ConfigError::field(
            field,
            format!("must be a positive finite number, got {v}"),
        ));
    }
    Ok(v)
}

fn finite_list(values: Vec<f64>, field: &str) -> Result<Vec<f64>, ConfigError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ConfigError::field(field, "entries must be finite"));
    }
    Ok(values)
}

impl RawBasis {
    fn validate(self) -> Result<BasisConfig, ConfigError> {
        let kind = require(self.kind, "basis.kind")?;
        match kind.as_str() {
            "bernstein" => Ok(BasisConfig::Bernstein {
                n: positive_count(self.n, "basis.n", "n")?,
            }),
            "bspline" => Ok(BasisConfig::BSpline {
                knots: finite_list(require(self.knots, "basis.knots")?, "basis.knots")?,
                degree: nonnegative_count(self.degree, "basis.degree")?,
            }),
            "hat" => Ok(BasisConfig::Hat {
                nodes: finite_list(require(self.nodes, "basis.nodes")?, "basis.nodes")?,
            }),
            other => Err(ConfigError::field(
                "basis.kind",
                format!("unknown basis kind `{other}`"),
            )),
        }
    }
}

impl RawFunctional {
    fn validate(self, index: usize) -> Result<FunctionalConfig, ConfigError> {
        let at = |name: &str| format!("functionals[{index}].{name}");
        let kind = require(self.kind, &at("kind"))?;
        match kind.as_str() {
            "dirac" => Ok(FunctionalConfig::Dirac {
                x: require(self.x, &at("x"))?,
            }),
            "interval-average" => {
                let default = QuadratureRule::default();
                let order = self.order.unwrap_or(default.order as i64);
                let panels = self.panels.unwrap_or(default.panels as i64);
                if order < 1 {
                    return Err(ConfigError::field(&at("order"), "order must be ≥ 1"));
                }
                if panels < 1 {
                    return Err(ConfigError::field(&at("panels"), "panels must be ≥ 1"));
                }
                Ok(FunctionalConfig::IntervalAverage {
                    a: require(self.a, &at("a"))?,
                    b: require(self.b, &at("b"))?,
                    rule: QuadratureRule {
                        order: order as usize,
                        panels: panels as usize,
                    },
                })
            }
            "weighted-quadrature" => Ok(FunctionalConfig::WeightedQuadrature {
                nodes: finite_list(require(self.nodes, &at("nodes"))?, &at("nodes"))?,
                weights: finite_list(require(self.weights, &at("weights"))?, &at("weights"))?,
            }),
            other => Err(ConfigError::field(
                &at("kind"),
                format!("unknown functional kind `{other}`"),
            )),
        }
    }
}

impl RawConfig {
    fn validate(self) -> Result<AnalysisConfig, ConfigError> {
        match self.version {
            None => {}
            Some(v) if v == SCHEMA_VERSION as i64 => {}
            Some(v) => {
                return Err(ConfigError::field(
                    "version",
                    format!("unsupported schema version {v}, expected {SCHEMA_VERSION}"),
                ))
            }
        }
        let kind = require(self.operator, "operator")?;
        let operator = match kind.as_str() {
            "bernstein" => OperatorConfig::Bernstein {
                n: positive_count(self.n, "n", "n")?,
            },
            "kantorovich" => OperatorConfig::Kantorovich {
                n: positive_count(self.n, "n", "n")?,
            },
            "schoenberg" => OperatorConfig::Schoenberg {
                knots: finite_list(require(self.knots, "knots")?, "knots")?,
                degree: nonnegative_count(self.degree, "degree")?,
            },
            "hat-dirac" => OperatorConfig::HatDirac {
                nodes: finite_list(require(self.nodes, "nodes")?, "nodes")?,
            },
            "custom" => {
                let basis = require(self.basis, "basis")?.validate()?;
                let functionals = require(self.functionals, "functionals")?
                    .into_iter()
                    .enumerate()
                    .map(|(i, f)| f.validate(i))
                    .collect::<Result<Vec<_>, _>>()?;
                OperatorConfig::Custom { basis, functionals }
            }
            other => {
                return Err(ConfigError::field(
                    "operator",
                    format!("unknown operator kind `{other}`"),
                ))
            }
        };

        let grid_points = match self.grid_points {
            None => DEFAULT_GRID_POINTS,
            Some(g) if g >= MIN_GRID_POINTS as i64 => g as usize,
            Some(g) => {
                return Err(ConfigError::field(
                    "grid_points",
                    format!("must be ≥ {MIN_GRID_POINTS}, got {g}"),
                ))
            }
        };

        let t = self.tolerances.unwrap_or_default();
        let d = Tolerances::default();
        let tolerances = Tolerances {
            pou: positive_real(t.pou, d.pou, "tolerances.pou")?,
            stochastic: positive_real(t.stochastic, d.stochastic, "tolerances.stochastic")?,
            peripheral: positive_real(t.peripheral, d.peripheral, "tolerances.peripheral")?,
            norm: positive_real(t.norm, d.norm, "tolerances.norm")?,
        };

        let it = self.iterate.unwrap_or_default();
        let m_max = it.m_max.unwrap_or(DEFAULT_M_MAX as i64);
        if m_max < 2 {
            return Err(ConfigError::field("iterate.m_max", "must be ≥ 2"));
        }
        let iterate = IterateConfig {
            m_max: m_max as u64,
            tol: positive_real(it.tol, DEFAULT_ITERATE_TOL, "iterate.tol")?,
        };

        let o = self.outputs.unwrap_or_default();
        Ok(AnalysisConfig {
            operator,
            grid_points,
            tolerances,
            iterate,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            outputs: Outputs {
                json: o.json,
                csv: o.csv,
                svg: o.svg,
            },
        })
    }
}

impl From<BasisConfig> for RawBasis {
    fn from(b: BasisConfig) -> Self {
        match b {
            BasisConfig::Bernstein { n } => RawBasis {
                kind: Some("bernstein".into()),
                n: Some(n as i64),
                ..Default::default()
            },
            BasisConfig::BSpline { knots, degree } => RawBasis {
                kind: Some("bspline".into()),
                knots: Some(knots),
                degree: Some(degree as i64),
                ..Default::default()
            },
            BasisConfig::Hat { nodes } => RawBasis {
                kind: Some("hat".into()),
                nodes: Some(nodes),
                ..Default::default()
            },
        }
    }
}

impl From<FunctionalConfig> for RawFunctional {
    fn from(f: FunctionalConfig) -> Self {
        match f {
            FunctionalConfig::Dirac { x } => RawFunctional {
                kind: Some("dirac".into()),
                x: Some(x),
                ..Default::default()
            },
            FunctionalConfig::IntervalAverage { a, b, rule } => RawFunctional {
                kind: Some("interval-average".into()),
                a: Some(a),
                b: Some(b),
                order: Some(rule.order as i64),
                panels: Some(rule.panels as i64),
                ..Default::default()
            },
            FunctionalConfig::WeightedQuadrature { nodes, weights } => RawFunctional {
                kind: Some("weighted-quadrature".into()),
                nodes: Some(nodes),
                weights: Some(weights),
                ..Default::default()
            },
        }
    }
}

impl From<AnalysisConfig> for RawConfig {
    fn from(c: AnalysisConfig) -> Self {
        let mut raw = RawConfig {
            version: Some(SCHEMA_VERSION as i64),
            operator: Some(c.operator.kind().into()),
            grid_points: Some(c.grid_points as i64),
            seed: Some(c.seed),
            tolerances: Some(RawTolerances {
                pou: Some(c.tolerances.pou),
                stochastic: Some(c.tolerances.stochastic),
                peripheral: Some(c.tolerances.peripheral),
                norm: Some(c.tolerances.norm),
            }),
            iterate: Some(RawIterate {
                m_max: Some(c.iterate.m_max as i64),
                tol: Some(c.iterate.tol),
            }),
            ..Default::default()
        };
        if c.outputs != Outputs::default() {
            raw.outputs = Some(RawOutputs {
                json: c.outputs.json,
                csv: c.outputs.csv,
                svg: c.outputs.svg,
            });
        }
        match c.operator {
            OperatorConfig::Bernstein { n } | OperatorConfig::Kantorovich { n } => raw.n = Some(n as i64),
            OperatorConfig::Schoenberg { knots, degree } => {
                raw.knots = Some(knots);
                raw.degree = Some(degree as i64);
            }
            OperatorConfig::HatDirac { nodes } => raw.nodes = Some(nodes),
            OperatorConfig::Custom { basis, functionals } => {
                raw.basis = Some(basis.into());
                raw.functionals = Some(functionals.into_iter().map(Into::into).collect());
            }
        }
        raw
    }
}
