//! Numeric results with a statistical error bar and provenance.

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Quadrature,
    MonteCarlo,
}

/// A value plus how it was obtained. Exact results carry stderr 0.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Measurement {
    pub value: f64,
    pub stderr: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Measurement {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0, method: Method::Exact, seed: None }
    }

    pub fn quadrature(value: f64, stderr: f64) -> Self {
        Self { value, stderr, method: Method::Quadrature, seed: None }
    }

    pub fn monte_carlo(value: f64, stderr: f64, seed: u64) -> Self {
        Self { value, stderr, method: Method::MonteCarlo, seed: Some(seed) }
    }

    /// |value - reference| <= k * stderr + slack, the workhorse of the
    /// statistical assertions.
    pub fn consistent_with(&self, reference: f64, k_sigma: f64, slack: f64) -> bool {
        (self.value - reference).abs() <= k_sigma * self.stderr + slack
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_has_zero_stderr() {
        let m = Measurement::exact(1.5);
        assert_eq!(m.stderr, 0.0);
        assert!(m.consistent_with(1.5, 3.0, 0.0));
        assert!(!m.consistent_with(1.6, 3.0, 0.0));
    }

    #[test]
    fn serializes_with_method_tag() {
        let m = Measurement::monte_carlo(0.25, 0.01, 42);
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"method\":\"monte-carlo\""));
        assert!(json.contains("\"seed\":42"));
    }
}
