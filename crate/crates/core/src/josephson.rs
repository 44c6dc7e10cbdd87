//! Capacitively coupled Cooper-pair boxes mapped onto an Ising chain.
//!
//! The charging energy (2e)^2/2 sum_ij (n_i - n_gi) Cinv_ij (n_j - n_gj)
//! with n_i = (1 + Z_i)/2 gives Z_i Z_j couplings (2e)^2 Cinv_ij / 4 for
//! i < j and fields (2e)^2/2 sum_j Cinv_ij (1/2 - n_gj).
//!
//! Energies are reported in units of (2e)^2 / C0 unless `si_units` is set,
//! in which case capacitances are in farads and energies in joules.

use std::collections::BTreeMap;

use log::warn;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;

/// Above this coupling ratio the decay analysis is not expected to hold.
pub const REGIME_EPSILON: f64 = 0.1;

const INVERSE_TOL: f64 = 1e-12;

/// A uniform array of Cooper-pair boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JosephsonArraySpec {
    pub n_boxes: usize,
    pub c_g: f64,
    pub c_j: f64,
    pub c_c: f64,
    /// Gate charge per box; every box sits at 1/2 when absent.
    #[serde(default)]
    pub gate_charges: Option<Vec<f64>>,
    /// Bound on the tunable XY element carried into the emitted chain.
    #[serde(default)]
    pub x1_max: f64,
    #[serde(default)]
    pub si_units: bool,
}

impl JosephsonArraySpec {
    pub fn new(n_boxes: usize, c_g: f64, c_j: f64, c_c: f64) -> Result<Self> {
        let spec = JosephsonArraySpec {
            n_boxes,
            c_g,
            c_j,
            c_c,
            gate_charges: None,
            x1_max: 0.0,
            si_units: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Boxes with C0 = 1 and coupling ratio `epsilon`.
    pub fn with_epsilon(n_boxes: usize, epsilon: f64) -> Result<Self> {
        Self::new(n_boxes, 0.5, 0.5, epsilon)
    }

    pub fn c0(&self) -> f64 {
        self.c_g + self.c_j
    }

    pub fn epsilon(&self) -> f64 {
        self.c_c / self.c0()
    }

    pub fn gate_charge(&self, i: usize) -> f64 {
        self.gate_charges.as_ref().map_or(0.5, |g| g[i])
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_boxes < 2 {
            return Err(Error::invalid(format!(
                "array needs at least 2 boxes, got {}",
                self.n_boxes
            )));
        }
        let values = [self.c_g, self.c_j, self.c_c, self.x1_max];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("array parameters"));
        }
        if self.c_g <= 0.0 || self.c_j <= 0.0 || self.c_c < 0.0 || self.x1_max < 0.0 {
            return Err(Error::invalid(
                "capacitances must be positive (c_c may be 0) and x1_max >= 0",
            ));
        }
        if self.epsilon() >= 1.0 {
            return Err(Error::invalid(format!(
                "coupling ratio {} is not below 1",
                self.epsilon()
            )));
        }
        if let Some(g) = &self.gate_charges {
            if g.len() != self.n_boxes {
                return Err(Error::DimensionMismatch(g.len(), self.n_boxes));
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("gate charges"));
            }
        }
        Ok(())
    }

    pub fn in_regime(&self) -> bool {
        self.epsilon() <= REGIME_EPSILON
    }

    /// Converts Cinv entries into the reporting energy unit, without the
    /// 1/4 or 1/2 of the spin expansion.
    fn energy_scale(&self) -> f64 {
        if self.si_units {
            (2.0 * ELEMENTARY_CHARGE).powi(2)
        } else {
            self.c0()
        }
    }
}

/// C0 [(1 + 2 eps) on the diagonal, -eps off it], edge diagonals C0 (1 + eps).
pub fn build_capacitance_matrix(spec: &JosephsonArraySpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = spec.n_boxes;
    let (c0, cc) = (spec.c0(), spec.c_c);
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let neighbors = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            c0 + neighbors * cc
        } else if i.abs_diff(j) == 1 {
            -cc
        } else {
            0.0
        }
    }))
}

/// Inverse of a symmetric positive-definite matrix, checked by C Cinv = I.
pub fn invert_capacitance(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch(c.nrows(), c.ncols()));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("capacitance matrix"));
    }
    if (c - c.transpose()).amax() > 0.0 {
        return Err(Error::invalid("capacitance matrix is not symmetric"));
    }
    let chol = c
        .clone()
        .cholesky()
        .ok_or_else(|| Error::invalid("capacitance matrix is not positive definite"))?;
    let inv = chol.inverse();
    let scale = c.amax() * inv.amax();
    let defect = (c * &inv - DMatrix::identity(c.nrows(), c.ncols())).amax();
    if defect > INVERSE_TOL * scale.max(1.0) {
        return Err(Error::Invariant(format!(
            "capacitance inverse is ill-conditioned (|C Cinv - I| = {defect:e})"
        )));
    }
    Ok(inv)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    /// |Cinv[i][i+k+1] / Cinv[i][i+k]| for every interior row i, row-major.
    pub ratios: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub passed: bool,
    pub in_regime: bool,
}

impl DecayCheck {
    pub fn status(&self) -> &'static str {
        match (self.in_regime, self.passed) {
            (false, _) => "out_of_regime",
            (true, true) => "pass",
            (true, false) => "fail",
        }
    }
}

/// Ratios of successive inverse entries along interior rows, against the
/// band [(1 - 5 eps) eps, (1 + 5 eps) eps].
pub fn decay_check(c_inv: &DMatrix<f64>, epsilon: f64) -> Result<DecayCheck> {
    let n = c_inv.nrows();
    if n < 5 {
        return Err(Error::invalid(format!(
            "decay check needs at least 5 boxes, got {n}"
        )));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::invalid(format!("bad coupling ratio {epsilon}")));
    }
    let mut ratios = Vec::new();
    for i in 1..n - 1 {
        for j in i..n - 1 {
            let (near, far) = (c_inv[(i, j)], c_inv[(i, j + 1)]);
            ratios.push(if near == 0.0 { 0.0 } else { (far / near).abs() });
        }
    }
    let lower = (1.0 - 5.0 * epsilon) * epsilon;
    let upper = (1.0 + 5.0 * epsilon) * epsilon;
    let passed = ratios.iter().all(|&r| r >= lower && r <= upper);
    let in_regime = epsilon <= REGIME_EPSILON;
    if !in_regime {
        warn!("coupling ratio {epsilon} > {REGIME_EPSILON}; decay law is outside its regime");
    }
    Ok(DecayCheck {
        ratios,
        lower,
        upper,
        passed,
        in_regime,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub epsilon: f64,
    pub capacitance: Vec<Vec<f64>>,
    pub c_inverse: Vec<Vec<f64>>,
    /// Full coupling matrix; entry (i, j), i < j, multiplies Z_i Z_j.
    pub couplings: Vec<Vec<f64>>,
    /// Order k -> coupling of the pair at distance k closest to the middle.
    pub couplings_by_order: BTreeMap<usize, f64>,
    /// Coefficient of Z_i.
    pub linear_fields: Vec<f64>,
    /// Absent for arrays shorter than five boxes.
    pub decay: Option<DecayCheck>,
    pub effective_chain: ChainSpec,
    /// Largest |J_k| for k >= 3.
    pub residual_bound: f64,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn extract_couplings(
    spec: &JosephsonArraySpec,
    c_inv: &DMatrix<f64>,
) -> Result<CouplingReport> {
    spec.validate()?;
    let n = spec.n_boxes;
    if c_inv.nrows() != n || c_inv.ncols() != n {
        return Err(Error::DimensionMismatch(c_inv.nrows(), n));
    }
    let scale = spec.energy_scale();
    let coupling = DMatrix::from_fn(n, n, |i, j| {
        if i < j {
            scale * c_inv[(i, j)] / 4.0
        } else {
            0.0
        }
    });
    let by_order: BTreeMap<usize, f64> = (1..n)
        .map(|k| {
            let i = (n - 1 - k) / 2;
            (k, coupling[(i, i + k)])
        })
        .collect();
    let linear_fields = (0..n)
        .map(|i| {
            let s: f64 = (0..n)
                .map(|j| c_inv[(i, j)] * (0.5 - spec.gate_charge(j)))
                .sum();
            scale * s / 2.0
        })
        .collect();
    let decay = if n >= 5 {
        Some(decay_check(c_inv, spec.epsilon())?)
    } else {
        None
    };
    let j1 = by_order[&1];
    let j2 = by_order.get(&2).copied().unwrap_or(0.0);
    let residual_bound = by_order
        .range(3..)
        .map(|(_, j)| j.abs())
        .fold(0.0, f64::max);
    Ok(CouplingReport {
        epsilon: spec.epsilon(),
        capacitance: rows(&build_capacitance_matrix(spec)?),
        c_inverse: rows(c_inv),
        couplings: rows(&coupling),
        couplings_by_order: by_order,
        linear_fields,
        decay,
        effective_chain: ChainSpec::new(n, j1, j2, spec.x1_max)?,
        residual_bound,
    })
}

/// Build, invert and extract in one go.
pub fn coupling_report(spec: &JosephsonArraySpec) -> Result<CouplingReport> {
    if !spec.in_regime() {
        warn!(
            "coupling ratio {} > {REGIME_EPSILON}; couplings beyond nearest neighbor are not small",
            spec.epsilon()
        );
    }
    let c_inv = invert_capacitance(&build_capacitance_matrix(spec)?)?;
    extract_couplings(spec, &c_inv)
}
