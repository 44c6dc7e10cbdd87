//! Pauli-string operators and state vectors on an N-spin register.
//!
//! Basis convention: site 1 is the most significant bit of a basis index,
//! bit value 1 is the spin state |1> with sigma^z = +1 and bit value 0 is
//! |0> with sigma^z = -1. The charge-number substitution n = (1 + sigma^z)/2
//! then gives n|1> = |1>.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register `realize` will build densely unless told otherwise.
pub const DEFAULT_MAX_SPINS: usize = 14;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Bit mask of `site` (1-based) in an `n_spins` register.
#[inline]
pub fn site_mask(n_spins: usize, site: usize) -> usize {
    1usize << (n_spins - site)
}

/// sigma^z eigenvalue (+1 or -1) of `site` in basis state `index`.
#[inline]
pub fn z_eigenvalue(n_spins: usize, index: usize, site: usize) -> f64 {
    if index & site_mask(n_spins, site) != 0 {
        1.0
    } else {
        -1.0
    }
}

/// Basis index of a bit pattern given site by site, site 1 first.
pub fn basis_index(bits: &[u8]) -> usize {
    bits.iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0))
}

/// Parses a ket label such as `"0110"` into a basis index.
pub fn parse_ket(label: &str) -> Result<usize> {
    let bits = label
        .chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Error::invalid(format!("bad ket character {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(basis_index(&bits))
}

/// A real coefficient times a tensor product of site Paulis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    coefficient: f64,
    letters: BTreeMap<usize, Pauli>,
}

impl PauliTerm {
    pub fn new(
        coefficient: f64,
        letters: impl IntoIterator<Item = (usize, Pauli)>,
    ) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::NonFinite("Pauli term coefficient"));
        }
        let mut map = BTreeMap::new();
        for (site, p) in letters {
            if site == 0 {
                return Err(Error::SiteOutOfRange { site, n_spins: 0 });
            }
            if map.insert(site, p).is_some() {
                return Err(Error::invalid(format!(
                    "site {site} appears twice in one Pauli term"
                )));
            }
        }
        Ok(PauliTerm {
            coefficient,
            letters: map,
        })
    }

    pub fn identity(coefficient: f64) -> Result<Self> {
        Self::new(coefficient, [])
    }

    pub fn single(coefficient: f64, site: usize, p: Pauli) -> Result<Self> {
        Self::new(coefficient, [(site, p)])
    }

    pub fn pair(coefficient: f64, a: usize, pa: Pauli, b: usize, pb: Pauli) -> Result<Self> {
        Self::new(coefficient, [(a, pa), (b, pb)])
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn letters(&self) -> &BTreeMap<usize, Pauli> {
        &self.letters
    }

    pub fn max_site(&self) -> usize {
        self.letters.keys().next_back().copied().unwrap_or(0)
    }

    /// Only sigma^z letters (or none).
    pub fn is_diagonal(&self) -> bool {
        self.letters.values().all(|&p| p == Pauli::Z)
    }

    /// Applies the Pauli string (without the coefficient) to a basis state.
    pub fn apply_to_basis(&self, n_spins: usize, index: usize) -> (Complex64, usize) {
        let mut amp = ONE;
        let mut out = index;
        for (&site, &p) in &self.letters {
            let mask = site_mask(n_spins, site);
            let up = index & mask != 0;
            match p {
                Pauli::Z => {
                    if !up {
                        amp = -amp;
                    }
                }
                Pauli::X => out ^= mask,
                Pauli::Y => {
                    // Y|1> = i|0>, Y|0> = -i|1>
                    amp *= if up { I } else { -I };
                    out ^= mask;
                }
            }
        }
        (amp, out)
    }

    /// Diagonal element on a basis state; only meaningful for Z-type terms.
    pub fn diagonal_value(&self, n_spins: usize, index: usize) -> f64 {
        self.letters
            .keys()
            .map(|&s| z_eigenvalue(n_spins, index, s))
            .product::<f64>()
            * self.coefficient
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for (site, p) in &self.letters {
            write!(f, " {p}{site}")?;
        }
        Ok(())
    }
}

/// Sum of Pauli terms on a fixed register. Real coefficients make it Hermitian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSum {
    n_spins: usize,
    terms: Vec<PauliTerm>,
}

impl OperatorSum {
    pub fn zero(n_spins: usize) -> Self {
        OperatorSum {
            n_spins,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(n_spins: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut op = Self::zero(n_spins);
        for t in terms {
            op.push(t)?;
        }
        Ok(op)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: PauliTerm) -> Result<()> {
        let site = term.max_site();
        if site > self.n_spins {
            return Err(Error::SiteOutOfRange {
                site,
                n_spins: self.n_spins,
            });
        }
        self.terms.push(term);
        Ok(())
    }

    /// Appends a term unless its coefficient is exactly zero.
    pub(crate) fn push_nonzero(&mut self, term: PauliTerm) -> Result<()> {
        if term.coefficient != 0.0 {
            self.push(term)?;
        }
        Ok(())
    }

    pub fn extend(&mut self, other: &OperatorSum) -> Result<()> {
        if other.n_spins != self.n_spins {
            return Err(Error::DimensionMismatch(self.n_spins, other.n_spins));
        }
        self.terms.extend(other.terms.iter().cloned());
        Ok(())
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(PauliTerm::is_diagonal)
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_spins
    }

    /// Diagonal of a Z-type operator without building a matrix.
    pub fn diagonal_energies(&self) -> Result<Vec<f64>> {
        if !self.is_diagonal() {
            return Err(Error::invalid("operator has off-diagonal Pauli letters"));
        }
        Ok((0..self.dim())
            .map(|idx| {
                self.terms
                    .iter()
                    .map(|t| t.diagonal_value(self.n_spins, idx))
                    .sum()
            })
            .collect())
    }

    /// Amplitudes of `self |index>` as (target, amplitude) pairs, duplicates merged.
    pub fn apply_to_basis(&self, index: usize) -> Vec<(usize, Complex64)> {
        let mut out: BTreeMap<usize, Complex64> = BTreeMap::new();
        for t in &self.terms {
            let (amp, j) = t.apply_to_basis(self.n_spins, index);
            *out.entry(j).or_insert(Complex64::new(0.0, 0.0)) += amp * t.coefficient;
        }
        out.into_iter().collect()
    }

    pub fn realize(&self) -> Result<DMatrix<Complex64>> {
        self.realize_with_cap(DEFAULT_MAX_SPINS)
    }

    /// Dense 2^N x 2^N matrix of the operator.
    pub fn realize_with_cap(&self, max_spins: usize) -> Result<DMatrix<Complex64>> {
        if self.n_spins > max_spins {
            return Err(Error::DimensionCap {
                n_spins: self.n_spins,
                cap: max_spins,
            });
        }
        let dim = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for col in 0..dim {
            for t in &self.terms {
                let (amp, row) = t.apply_to_basis(self.n_spins, col);
                m[(row, col)] += amp * t.coefficient;
            }
        }
        Ok(m)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<DVector<Complex64>> {
        if psi.n_spins() != self.n_spins {
            return Err(Error::DimensionMismatch(self.n_spins, psi.n_spins()));
        }
        let mut out = DVector::<Complex64>::zeros(self.dim());
        for (col, &a) in psi.amplitudes().iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for t in &self.terms {
                let (amp, row) = t.apply_to_basis(self.n_spins, col);
                out[row] += a * amp * t.coefficient;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Amplitudes on the 2^N computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_spins: usize,
    amplitudes: DVector<Complex64>,
    normalized: bool,
}

impl StateVector {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn basis(n_spins: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_spins;
        if index >= dim {
            return Err(Error::invalid(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = ONE;
        Ok(StateVector {
            n_spins,
            amplitudes,
            normalized: true,
        })
    }

    pub fn from_ket(label: &str) -> Result<Self> {
        Self::basis(label.len(), parse_ket(label)?)
    }

    /// Normalized state; rejects vectors whose norm is off by more than `NORM_TOL`.
    pub fn new(n_spins: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        let s = Self::unnormalized(n_spins, amplitudes)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::Invariant(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector {
            normalized: true,
            ..s
        })
    }

    pub fn unnormalized(n_spins: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n_spins {
            return Err(Error::DimensionMismatch(
                1usize << n_spins,
                amplitudes.len(),
            ));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Ok(StateVector {
            n_spins,
            amplitudes,
            normalized: false,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_z_follows_basis_convention() {
        let op =
            OperatorSum::from_terms(1, [PauliTerm::single(1.0, 1, Pauli::Z).unwrap()]).unwrap();
        let m = op.realize().unwrap();
        assert_eq!(m[(1, 1)], c(1.0));
        assert_eq!(m[(0, 0)], c(-1.0));
        assert_eq!(m[(0, 1)], c(0.0));
    }

    #[test]
    fn xy_exchange_couples_only_single_excitations() {
        let j = 0.7;
        let op = OperatorSum::from_terms(
            2,
            [
                PauliTerm::pair(j, 1, Pauli::X, 2, Pauli::X).unwrap(),
                PauliTerm::pair(j, 1, Pauli::Y, 2, Pauli::Y).unwrap(),
            ],
        )
        .unwrap();
        let m = op.realize().unwrap();
        let (s01, s10) = (parse_ket("01").unwrap(), parse_ket("10").unwrap());
        assert!((m[(s10, s01)] - c(2.0 * j)).norm() < 1e-15);
        assert!((m[(s01, s10)] - c(2.0 * j)).norm() < 1e-15);
        for idx in [0usize, 3] {
            assert!(m.column(idx).iter().all(|a| a.norm() < 1e-15));
        }
    }

    #[test]
    fn three_site_ising_matches_basis_loop() {
        let (j1, j2) = (1.0, 0.05);
        let op = OperatorSum::from_terms(
            3,
            [
                PauliTerm::pair(j1, 1, Pauli::Z, 2, Pauli::Z).unwrap(),
                PauliTerm::pair(j1, 2, Pauli::Z, 3, Pauli::Z).unwrap(),
                PauliTerm::pair(j2, 1, Pauli::Z, 3, Pauli::Z).unwrap(),
            ],
        )
        .unwrap();
        let m = op.realize().unwrap();
        for idx in 0..8usize {
            let s: Vec<f64> = (0..3)
                .map(|k| if idx >> (2 - k) & 1 == 1 { 1.0 } else { -1.0 })
                .collect();
            let e = j1 * (s[0] * s[1] + s[1] * s[2]) + j2 * s[0] * s[2];
            for col in 0..8 {
                let want = if col == idx { e } else { 0.0 };
                assert!((m[(idx, col)] - c(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn y_letter_is_hermitian_and_squares_to_identity() {
        let op =
            OperatorSum::from_terms(1, [PauliTerm::single(1.0, 1, Pauli::Y).unwrap()]).unwrap();
        let m = op.realize().unwrap();
        assert!((&m - m.adjoint()).norm() < 1e-15);
        assert!((&m * &m - DMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let mut op = OperatorSum::zero(2);
        assert!(matches!(
            op.push(PauliTerm::single(1.0, 3, Pauli::X).unwrap()),
            Err(Error::SiteOutOfRange {
                site: 3,
                n_spins: 2
            })
        ));
        assert!(PauliTerm::single(f64::NAN, 1, Pauli::X).is_err());
        assert!(PauliTerm::new(1.0, [(1, Pauli::X), (1, Pauli::Z)]).is_err());
        assert!(matches!(
            OperatorSum::zero(15).realize(),
            Err(Error::DimensionCap {
                n_spins: 15,
                cap: 14
            })
        ));
    }

    #[test]
    fn state_vector_norm_checked() {
        let s = StateVector::from_ket("101").unwrap();
        assert_eq!(s.n_spins(), 3);
        assert_eq!(s.probability(5), 1.0);
        let bad = DVector::from_element(4, c(1.0));
        assert!(StateVector::new(2, bad.clone()).is_err());
        assert!(!StateVector::unnormalized(2, bad).unwrap().is_normalized());
    }

    #[test]
    fn apply_matches_realized_matrix() {
        let op = OperatorSum::from_terms(
            3,
            [
                PauliTerm::single(0.3, 2, Pauli::X).unwrap(),
                PauliTerm::pair(0.2, 1, Pauli::Y, 3, Pauli::Y).unwrap(),
                PauliTerm::pair(-0.4, 2, Pauli::Z, 3, Pauli::Z).unwrap(),
            ],
        )
        .unwrap();
        let m = op.realize().unwrap();
        let psi = StateVector::from_ket("011").unwrap();
        let direct = op.apply(&psi).unwrap();
        assert!((direct - &m * psi.amplitudes()).norm() < 1e-15);
    }
}
