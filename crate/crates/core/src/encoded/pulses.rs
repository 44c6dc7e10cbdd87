//! Composite pi pulses that stay exact when the two exchanged states are
//! split by a fixed diagonal energy.
//!
//! On a two-level block with Hamiltonian X sigma^x + b sigma^z, three pulses
//! X1, X2, X1 with durations pi / (2 Omega) multiply out to a pi rotation
//! about x as long as the X2 axis sits at twice the X1 tilt angle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::linalg::{expm_unitary, CMatrix, TimeSign};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseParameters {
    /// Matrix element of the outer pulses (twice the bond strength).
    pub x1: f64,
    /// Half the diagonal splitting the pulses compensate.
    pub tilt: f64,
    pub theta: f64,
    pub x2: f64,
    pub t_r1: f64,
    pub t_r2: f64,
}

impl PulseParameters {
    /// Length of the three-pulse sequence.
    pub fn duration(&self) -> f64 {
        2.0 * self.t_r1 + self.t_r2
    }

    /// Three (bond strength, duration) pairs; strengths are x/2.
    pub fn pulses(&self) -> [(f64, f64); 3] {
        [
            (self.x1 / 2.0, self.t_r1),
            (self.x2 / 2.0, self.t_r2),
            (self.x1 / 2.0, self.t_r1),
        ]
    }
}

/// Pulse parameters for matrix element `x1` against half-splitting `tilt`.
pub fn solve_tilted(x1: f64, tilt: f64) -> Result<PulseParameters> {
    if !(x1.is_finite() && tilt.is_finite()) {
        return Err(Error::NonFinite("pulse parameters"));
    }
    if x1 <= 0.0 {
        return Err(Error::invalid(format!("x1 must be > 0, got {x1}")));
    }
    let b = tilt.abs();
    let theta = b.atan2(x1);
    // b = 0 leaves every pulse untilted; any x2 > 0 then works and x1 keeps
    // the sequence uniform.
    let x2 = if b == 0.0 {
        x1
    } else {
        (x1 * x1 - b * b) / (2.0 * x1)
    };
    let t_r1 = PI / (2.0 * x1.hypot(b));
    let t_r2 = PI / (2.0 * x2.hypot(b));
    Ok(PulseParameters {
        x1,
        tilt: b,
        theta,
        x2,
        t_r1,
        t_r2,
    })
}

/// Parameters for the first CPHASE step, where the splitting is 4 J2.
pub fn solve_pulse_parameters(spec: &ChainSpec) -> Result<PulseParameters> {
    spec.validate()?;
    solve_tilted(spec.x1_max, 2.0 * spec.j2)
}

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| Complex64::new(v, 0.0)))
}

fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0].map(|v| Complex64::new(v, 0.0)))
}

/// R(X) = exp(+i (X sigma^x + b sigma^z) pi / (2 Omega)), Omega = sqrt(X^2 + b^2).
pub fn rotation_matrix(x: f64, tilt: f64) -> Result<CMatrix> {
    let omega = x.hypot(tilt);
    if omega == 0.0 {
        return Err(Error::invalid("rotation with zero generator"));
    }
    let h = pauli_x() * Complex64::new(x, 0.0) + pauli_z() * Complex64::new(tilt, 0.0);
    Ok(expm_unitary(&h, PI / (2.0 * omega), TimeSign::Backward)?.into_matrix())
}

/// R(X1) R(X2) R(X1).
pub fn composite_rotation(p: &PulseParameters) -> Result<CMatrix> {
    let r1 = rotation_matrix(p.x1, p.tilt)?;
    let r2 = rotation_matrix(p.x2, p.tilt)?;
    Ok(&r1 * r2 * &r1)
}

/// exp(-i angle sigma^x / 2).
pub fn x_rotation(angle: f64) -> CMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::new(c, 0.0),
        ],
    )
}
