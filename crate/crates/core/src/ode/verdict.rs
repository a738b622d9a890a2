use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::completeness::RayLengthReport;
use crate::error::{CurvError, Result};
use crate::io::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Existence,
    Nonexistence,
    Incompleteness,
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Existence => "existence",
            VerdictKind::Nonexistence => "nonexistence",
            VerdictKind::Incompleteness => "incompleteness",
            VerdictKind::Inconclusive => "inconclusive",
        })
    }
}

/// Exponents of the bound `U ≤ C / ((t ln t)^((n-1)/2) (ln t)^β)` and of the
/// resulting ray integrand `C / (t (ln t)^γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayWitness {
    pub beta: f64,
    pub gamma: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub certificate: String,
    pub crossings: Vec<f64>,
    pub crossing_count: usize,
    pub residual: Option<f64>,
    pub decay: Option<DecayWitness>,
    pub ray: Option<RayLengthReport>,
    pub params: BTreeMap<String, f64>,
    pub witness: BTreeMap<String, f64>,
    pub reason: Option<String>,
}

impl Verdict {
    fn blank(kind: VerdictKind, certificate: &str) -> Self {
        Self {
            kind,
            certificate: certificate.to_string(),
            crossings: Vec::new(),
            crossing_count: 0,
            residual: None,
            decay: None,
            ray: None,
            params: BTreeMap::new(),
            witness: BTreeMap::new(),
            reason: None,
        }
    }

    /// Nonexistence backed by the zero crossings of a comparison trajectory.
    pub fn nonexistence(certificate: &str, crossings: Vec<f64>) -> Result<Self> {
        if crossings.is_empty() {
            return Err(CurvError::InvalidArgument(
                "a nonexistence verdict needs at least one zero crossing".into(),
            ));
        }
        let mut v = Self::blank(VerdictKind::Nonexistence, certificate);
        v.crossing_count = crossings.len();
        v.crossings = crossings;
        Ok(v)
    }

    pub fn inconclusive(certificate: &str, reason: impl Into<String>) -> Self {
        let mut v = Self::blank(VerdictKind::Inconclusive, certificate);
        v.reason = Some(reason.into());
        v
    }

    pub fn incompleteness(certificate: &str, decay: DecayWitness, ray: RayLengthReport) -> Self {
        let mut v = Self::blank(VerdictKind::Incompleteness, certificate);
        v.decay = Some(decay);
        v.ray = Some(ray);
        v
    }

    pub fn existence(certificate: &str, residual: f64) -> Self {
        let mut v = Self::blank(VerdictKind::Existence, certificate);
        v.residual = Some(residual);
        v
    }

    pub fn with_crossings(mut self, crossings: Vec<f64>) -> Self {
        self.crossing_count = crossings.len();
        self.crossings = crossings;
        self
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn witness(mut self, key: &str, value: f64) -> Self {
        self.witness.insert(key.to_string(), value);
        self
    }

    pub fn first_crossing(&self) -> Option<f64> {
        self.crossings.first().copied()
    }

    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("kind: {}\n", self.kind));
        s.push_str(&format!("certificate: {}\n", self.certificate));
        let cs: Vec<String> = self.crossings.iter().map(|&c| fmt_f64(c)).collect();
        s.push_str(&format!("crossings: {}\n", cs.join(",")));
        s.push_str(&format!("crossing_count: {}\n", self.crossing_count));
        if let Some(r) = self.residual {
            s.push_str(&format!("residual: {}\n", fmt_f64(r)));
        }
        if let Some(d) = &self.decay {
            s.push_str(&format!("decay_beta: {}\n", fmt_f64(d.beta)));
            s.push_str(&format!("decay_gamma: {}\n", fmt_f64(d.gamma)));
            s.push_str(&format!("decay_constant: {}\n", fmt_f64(d.constant)));
        }
        if let Some(r) = &self.ray {
            s.push_str(&format!("ray_integral: {}\n", fmt_f64(r.integral)));
            s.push_str(&format!(
                "ray_tail_exponent: {}\n",
                fmt_f64(r.tail_exponent)
            ));
            if let Some(c) = r.completed() {
                s.push_str(&format!("ray_length: {}\n", fmt_f64(c)));
            }
            s.push_str(&format!("ray_verdict: {}\n", r.verdict));
        }
        for (k, v) in &self.params {
            s.push_str(&format!("param.{k}: {}\n", fmt_f64(*v)));
        }
        for (k, v) in &self.witness {
            s.push_str(&format!("witness.{k}: {}\n", fmt_f64(*v)));
        }
        if let Some(r) = &self.reason {
            s.push_str(&format!("reason: {r}\n"));
        }
        s
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| CurvError::Malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonexistence_requires_a_crossing() {
        assert!(Verdict::nonexistence("x", vec![]).is_err());
        let v = Verdict::nonexistence("x", vec![3.5]).unwrap();
        assert_eq!(v.crossing_count, 1);
    }

    #[test]
    fn text_and_json_records() {
        let v = Verdict::inconclusive("oscillation", "c <= 1")
            .param("c", 0.8)
            .witness("alpha", 0.25);
        let text = v.to_text();
        assert!(text.starts_with("kind: inconclusive\n"));
        assert!(text.contains("param.c: 8.0000000000000004e-1\n"));
        assert!(text.contains("reason: c <= 1\n"));
        let back = Verdict::from_json_line(&v.to_json_line()).unwrap();
        assert_eq!(back, v);
    }
}
