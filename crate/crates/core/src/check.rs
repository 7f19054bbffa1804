use serde::Serialize;

/// Outcome of a single numerical check.
///
/// `measured` is the quantity compared against `tolerance`: a maximum
/// deviation for equality checks and a minimum value for sign checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    /// Abscissa at which the worst value was observed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_at: Option<f64>,
    /// Row or item index of the worst value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, passed: bool, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed,
            measured,
            tolerance,
            worst_at: None,
            worst_index: None,
            detail: None,
        }
    }

    pub fn at(mut self, x: f64) -> Self {
        self.worst_at = Some(x);
        self
    }

    pub fn index(mut self, i: usize) -> Self {
        self.worst_index = Some(i);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}
