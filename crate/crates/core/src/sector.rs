//! Fixed-magnetization sectors.
//!
//! With every sigma^x field switched off the chain Hamiltonians conserve the
//! number of |1> spins, so propagators are block diagonal and each block can
//! be exponentiated on its own.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::operator::OperatorSum;

/// Leaked amplitude below this is treated as exact cancellation.
const LEAK_TOL: f64 = 1e-13;

/// Basis states of an N-spin register with exactly `excitations` ones.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBasis {
    n_spins: usize,
    excitations: usize,
    states: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl SectorBasis {
    pub fn new(n_spins: usize, excitations: usize) -> Result<Self> {
        if excitations > n_spins {
            return Err(Error::invalid(format!(
                "{excitations} excitations on {n_spins} spins"
            )));
        }
        let states: Vec<usize> = (0..1usize << n_spins)
            .filter(|s| s.count_ones() as usize == excitations)
            .collect();
        let position = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        Ok(SectorBasis {
            n_spins,
            excitations,
            states,
            position,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn excitations(&self) -> usize {
        self.excitations
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    /// Position of a full-register basis index inside the sector.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.position.get(&index).copied()
    }
}

/// Block of `op` on one sector. Fails if `op` moves amplitude out of it.
pub fn sector_block(op: &OperatorSum, basis: &SectorBasis) -> Result<CMatrix> {
    if op.n_spins() != basis.n_spins {
        return Err(Error::DimensionMismatch(op.n_spins(), basis.n_spins));
    }
    let d = basis.dim();
    let mut m = CMatrix::zeros(d, d);
    for (col, &state) in basis.states.iter().enumerate() {
        for (target, amp) in op.apply_to_basis(state) {
            match basis.position(target) {
                Some(row) => m[(row, col)] += amp,
                None if amp.norm() <= LEAK_TOL => {}
                None => {
                    return Err(Error::invalid(format!(
                        "operator does not conserve excitation number (|{state:b}> leaks {:e})",
                        amp.norm()
                    )))
                }
            }
        }
    }
    Ok(m)
}

/// Unitary restricted to one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorPropagator {
    pub basis: SectorBasis,
    pub matrix: CMatrix,
}

impl SectorPropagator {
    pub fn identity(basis: SectorBasis) -> Self {
        let d = basis.dim();
        SectorPropagator {
            basis,
            matrix: CMatrix::identity(d, d),
        }
    }

    /// Amplitude <row|U|col> for full-register basis indices.
    pub fn amplitude(&self, row: usize, col: usize) -> Complex64 {
        match (self.basis.position(row), self.basis.position(col)) {
            (Some(r), Some(c)) => self.matrix[(r, c)],
            _ => Complex64::new(0.0, 0.0),
        }
    }
}
