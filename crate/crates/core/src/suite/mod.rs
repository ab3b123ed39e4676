//! The verification suite: configuration, the checks of each suite, and the
//! report they produce.

mod checks;
mod emit;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{render_rational, ArithError, Discriminant, Rational};
use crate::check::{CheckResult, CheckStatus};
use crate::poly::PolyMap;
use crate::prop1::ProofTrace;

pub use emit::{emit_json, emit_report, emit_text, Format};

pub const DEFAULT_SEED: u64 = 424242;
pub const DEFAULT_BOUND: u32 = 8;
pub const SAMPLES: usize = 100;
pub const PROPERTY_CASES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Arith,
    Schwarz,
    Twist,
    Prop1,
    /// Checks on a user-supplied map.
    Map,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Arith, Suite::Schwarz, Suite::Twist, Suite::Prop1];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Arith => "arith",
            Suite::Schwarz => "schwarz",
            Suite::Twist => "twist",
            Suite::Prop1 => "prop1",
            Suite::Map => "map",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("alpha is a square: {0} = ({1})^2")]
    SquareAlpha(String, String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("degree bound {0} is outside 0..=12")]
    Bound(u32),
    #[error("map file: {0}")]
    Map(String),
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub alpha: Rational,
    /// Selected suites; arith always runs and order is fixed.
    pub suites: Vec<Suite>,
    pub degree_bound: u32,
    pub seed: u64,
    pub trace: bool,
    pub timing: bool,
    pub map: Option<PolyMap>,
}

impl SuiteConfig {
    pub fn new(alpha: Rational) -> Self {
        SuiteConfig {
            alpha,
            suites: Suite::ALL.to_vec(),
            degree_bound: DEFAULT_BOUND,
            seed: DEFAULT_SEED,
            trace: false,
            timing: true,
            map: None,
        }
    }

    /// Suites in execution order, arith first.
    pub fn ordered_suites(&self) -> Vec<Suite> {
        Suite::ALL
            .into_iter()
            .filter(|s| *s == Suite::Arith || self.suites.contains(s))
            .collect()
    }

    pub fn validate(&self) -> Result<Discriminant, ConfigError> {
        if self.degree_bound > crate::prop1::MAX_BOUND {
            return Err(ConfigError::Bound(self.degree_bound));
        }
        match Discriminant::new(self.alpha.clone()) {
            Ok(d) => Ok(d),
            Err(ArithError::SquareDiscriminant(_)) => {
                let a = &self.alpha;
                let root = Rational::new(a.numer().sqrt(), a.denom().sqrt());
                Err(ConfigError::SquareAlpha(render_rational(a), render_rational(&root)))
            }
            Err(e) => Err(e.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub anchor: String,
    pub suite: Suite,
    pub status: CheckStatus,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
    /// No checks were executed.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub alpha: String,
    pub seed: u64,
    pub degree_bound: u32,
    pub suites: Vec<Suite>,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ProofTrace>,
}

impl VerificationReport {
    pub fn empty(cfg: &SuiteConfig) -> Self {
        VerificationReport {
            alpha: render_rational(&cfg.alpha),
            seed: cfg.seed,
            degree_bound: cfg.degree_bound,
            suites: vec![],
            records: vec![],
            trace: None,
        }
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    /// Assumptions never affect the outcome.
    pub fn overall(&self) -> Overall {
        if self.records.is_empty() {
            Overall::Empty
        } else if self.count(CheckStatus::Fail) > 0 {
            Overall::Fail
        } else {
            Overall::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Overall::Fail => 1,
            Overall::Pass | Overall::Empty => 0,
        }
    }

    pub fn push(&mut self, suite: Suite, result: CheckResult, wall_time_ms: Option<f64>) {
        self.records.push(Record {
            name: result.name,
            anchor: result.anchor,
            suite,
            status: result.status,
            details: result.details,
            wall_time_ms,
        });
    }
}

/// Runs a check, timing it when requested.
pub(crate) fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    if timing {
        let start = Instant::now();
        let out = f();
        (out, Some(start.elapsed().as_secs_f64() * 1000.0))
    } else {
        (f(), None)
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport, ConfigError> {
    let disc = cfg.validate()?;
    if let Some(m) = &cfg.map {
        if m.disc() != &disc {
            return Err(ConfigError::Map(format!(
                "map is over alpha = {}, run uses alpha = {}",
                m.disc(),
                disc
            )));
        }
        if !matches!(m.domain_dim(), 2 | 4) || !m.is_endo() {
            return Err(ConfigError::Map(format!(
                "expected an endomorphism of K^2 or A^4, got {} -> {} components",
                m.domain_dim(),
                m.codomain_dim()
            )));
        }
    }
    let mut report = VerificationReport::empty(cfg);
    report.suites = cfg.ordered_suites();
    for suite in report.suites.clone() {
        match suite {
            Suite::Arith => checks::arith(&disc, cfg, &mut report),
            Suite::Schwarz => checks::schwarz(&disc, cfg, &mut report),
            Suite::Twist => checks::twist(&disc, cfg, &mut report),
            Suite::Prop1 => checks::prop1(&disc, cfg, &mut report),
            Suite::Map => {}
        }
    }
    if let Some(m) = &cfg.map {
        report.suites.push(Suite::Map);
        checks::user_map(m, cfg, &mut report);
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
