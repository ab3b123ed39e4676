use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A fact taken from outside the artifact; never affects the verdict.
    Assumption,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Assumption => "ASSUMPTION",
        }
    }
}

/// Outcome of one verification step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// The identity or statement being checked.
    pub anchor: String,
    pub status: CheckStatus,
    pub details: Vec<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        CheckResult {
            name: name.into(),
            anchor: anchor.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            details: Vec::new(),
        }
    }

    pub fn assumption(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            anchor: anchor.into(),
            status: CheckStatus::Assumption,
            details: Vec::new(),
        }
    }

    pub fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}
