//! Run configuration files.
//!
//! A config is a JSON object with the subcommand name, optional output path
//! and seed, and a `parameters` object whose keys depend on the subcommand.
//! Unknown keys are rejected at every level.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::deviation::Scenario;
use crate::josephson::JosephsonArraySpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub parameters: serde_json::Value,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Typed parameters; an absent or null block gives the defaults.
    pub fn parameters<T: DeserializeOwned + Default>(&self) -> Result<T, String> {
        if self.parameters.is_null() {
            return Ok(T::default());
        }
        serde_json::from_value(self.parameters.clone()).map_err(|e| format!("parameters: {e}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviationSweepParams {
    pub scenarios: Vec<Scenario>,
    pub n_min: usize,
    pub n_max: usize,
    /// J2 in units of |J1|.
    pub j2: Vec<f64>,
    /// Explicit time grid; when absent each (n, j2) gets `t_points` times
    /// spanning [0, pi / (2 J2 n)].
    pub t: Option<Vec<f64>>,
    pub t_points: usize,
}

impl Default for DeviationSweepParams {
    fn default() -> Self {
        DeviationSweepParams {
            scenarios: Scenario::ALL.to_vec(),
            n_min: 2,
            n_max: 6,
            j2: vec![0.005, 0.01, 0.05],
            t: None,
            t_points: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GateFidelityParams {
    pub j1: f64,
    pub j2: Vec<f64>,
    pub x1: f64,
    pub tau: Vec<f64>,
    pub naive: bool,
    /// Also write every compiled schedule to `<stem>.schedules.json`.
    pub emit_schedules: bool,
}

impl Default for GateFidelityParams {
    fn default() -> Self {
        GateFidelityParams {
            j1: 1.0,
            j2: vec![0.05],
            x1: 0.5,
            tau: vec![0.1, 0.2, 0.4],
            naive: false,
            emit_schedules: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JosephsonMapParams {
    pub arrays: Vec<JosephsonArraySpec>,
}

impl Default for JosephsonMapParams {
    fn default() -> Self {
        JosephsonMapParams {
            arrays: vec![JosephsonArraySpec {
                n_boxes: 8,
                c_g: 0.5,
                c_j: 0.5,
                c_c: 0.01,
                gate_charges: None,
                x1_max: 0.0,
                si_units: false,
            }],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutKind {
    /// Two spins per qubit, blocks of `m` blockades in |0>.
    Pair,
    /// One spin per qubit, alternating single blockades.
    Single,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockadeCase {
    pub layout: LayoutKind,
    pub n_logical: usize,
    #[serde(default = "one")]
    pub m: usize,
    /// Ising strength by order, nearest neighbor first.
    pub couplings: Vec<f64>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlockadeCheckParams {
    pub cases: Vec<BlockadeCase>,
}

impl Default for BlockadeCheckParams {
    fn default() -> Self {
        let case = |layout, n_logical, m, couplings: &[f64]| BlockadeCase {
            layout,
            n_logical,
            m,
            couplings: couplings.to_vec(),
        };
        BlockadeCheckParams {
            cases: vec![
                case(LayoutKind::Pair, 2, 2, &[1.0, 0.05]),
                case(LayoutKind::Single, 4, 1, &[1.0]),
                case(LayoutKind::Pair, 2, 2, &[1.0, 0.05, 0.01]),
            ],
        }
    }
}
