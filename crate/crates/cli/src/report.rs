//! JSON report schemas shared by the subcommands: every report carries
//! {command, inputs, results, residuals, trace}.

use serde::{Deserialize, Serialize};

use quadric_axes::chasles::ChaslesTrace;
use quadric_axes::conjugate::Provenance;
use quadric_axes::exact::ParamConstructibility;
use quadric_axes::AxesResult;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxesOut {
    pub directions: Vec<Vec<f64>>,
    pub lengths: Vec<f64>,
    pub provenance: Provenance,
}

impl From<&AxesResult> for AxesOut {
    fn from(a: &AxesResult) -> Self {
        AxesOut {
            directions: (0..a.dim()).map(|k| a.directions.column(k).0).collect(),
            lengths: a.lengths.clone(),
            provenance: a.provenance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxesResiduals {
    pub direction_angle_rad: f64,
    pub length_rel_err: f64,
    pub intercept_spread: f64,
    pub edge_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxesReport {
    pub command: String,
    pub inputs: AxesInputs,
    pub results: AxesResults,
    pub residuals: AxesResiduals,
    pub trace: ChaslesTrace,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxesInputs {
    pub diameters: Vec<Vec<f64>>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxesResults {
    pub oracle: AxesOut,
    pub construction: AxesOut,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub cases: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: Vec<InvariantCheck>,
    pub residuals: serde_json::Value,
    pub trace: serde_json::Value,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructibleReport {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: ParamConstructibility,
    pub residuals: serde_json::Value,
    pub trace: serde_json::Value,
}
