//! Chain Hamiltonians and piecewise-constant control evolution.
//!
//! H_S = sum_i bx_i X_i + bz_i Z_i, H_I = sum_i jxy_i (X_i X_{i+1} + Y_i Y_{i+1})
//! + J1 Z_i Z_{i+1}, H_L = J2 sum_i Z_i Z_{i+2}. Time is in units with hbar = 1.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianEigen, Propagator, TimeSign, TraceEntry};
use crate::operator::{OperatorSum, Pauli, PauliTerm};
use crate::sector::{sector_block, SectorBasis, SectorPropagator};

/// Static chain parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub n_spins: usize,
    pub j1: f64,
    pub j2: f64,
    /// Largest tunable XY matrix element X1; bond strengths are bounded by X1/2.
    pub x1_max: f64,
}

impl ChainSpec {
    pub fn new(n_spins: usize, j1: f64, j2: f64, x1_max: f64) -> Result<Self> {
        let spec = ChainSpec {
            n_spins,
            j1,
            j2,
            x1_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 2 {
            return Err(Error::invalid(format!(
                "chain needs at least 2 spins, got {}",
                self.n_spins
            )));
        }
        if !(self.j1.is_finite() && self.j2.is_finite() && self.x1_max.is_finite()) {
            return Err(Error::NonFinite("chain energies"));
        }
        if self.x1_max < 0.0 {
            return Err(Error::invalid("x1_max must be >= 0"));
        }
        if self.j2.abs() >= self.j1.abs() && self.j2 != 0.0 {
            warn!(
                "|J2| = {} is not below |J1| = {}; outside the usual regime",
                self.j2, self.j1
            );
        }
        Ok(())
    }

    pub fn with_spins(&self, n_spins: usize) -> Result<Self> {
        Self::new(n_spins, self.j1, self.j2, self.x1_max)
    }
}

/// One constant-control time slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSegment {
    pub duration: f64,
    pub bx: Vec<f64>,
    pub bz: Vec<f64>,
    pub jxy: Vec<f64>,
}

impl ControlSegment {
    pub fn new(duration: f64, bx: Vec<f64>, bz: Vec<f64>, jxy: Vec<f64>) -> Result<Self> {
        let seg = ControlSegment {
            duration,
            bx,
            bz,
            jxy,
        };
        if seg.bx.len() != seg.bz.len() || seg.jxy.len() + 1 != seg.bx.len() {
            return Err(Error::invalid(format!(
                "control lengths bx={} bz={} jxy={} are inconsistent",
                seg.bx.len(),
                seg.bz.len(),
                seg.jxy.len()
            )));
        }
        seg.validate(seg.bx.len())?;
        Ok(seg)
    }

    /// All controls off.
    pub fn idle(n_spins: usize, duration: f64) -> Result<Self> {
        Self::new(
            duration,
            vec![0.0; n_spins],
            vec![0.0; n_spins],
            vec![0.0; n_spins.saturating_sub(1)],
        )
    }

    /// Only the XY strength of bond (site, site + 1) switched on.
    pub fn bond_pulse(n_spins: usize, site: usize, strength: f64, duration: f64) -> Result<Self> {
        if site == 0 || site >= n_spins {
            return Err(Error::SiteOutOfRange { site, n_spins });
        }
        let mut seg = Self::idle(n_spins, duration)?;
        seg.jxy[site - 1] = strength;
        Ok(seg)
    }

    pub fn validate(&self, n_spins: usize) -> Result<()> {
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::invalid(format!(
                "segment duration must be > 0, got {}",
                self.duration
            )));
        }
        if self.bx.len() != n_spins || self.bz.len() != n_spins || self.jxy.len() + 1 != n_spins {
            return Err(Error::invalid(format!(
                "segment control lengths do not match a {n_spins}-spin chain"
            )));
        }
        if self
            .bx
            .iter()
            .chain(&self.bz)
            .chain(&self.jxy)
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("control values"));
        }
        Ok(())
    }

    pub fn n_spins(&self) -> usize {
        self.bx.len()
    }

    /// No transverse fields: total magnetization is conserved.
    pub fn conserves_excitations(&self) -> bool {
        self.bx.iter().all(|&b| b == 0.0)
    }

    /// Same pulse with every XY strength negated.
    pub fn with_negated_exchange(&self) -> Self {
        ControlSegment {
            jxy: self.jxy.iter().map(|j| -j).collect(),
            ..self.clone()
        }
    }
}

/// Ordered control segments; the first segment acts first.
///
/// An empty schedule is the identity.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSchedule {
    pub segments: Vec<ControlSegment>,
}

impl ControlSchedule {
    pub fn new(segments: Vec<ControlSegment>) -> Result<Self> {
        if let Some(first) = segments.first() {
            let n = first.n_spins();
            for s in &segments {
                s.validate(n)?;
            }
        }
        Ok(ControlSchedule { segments })
    }

    pub fn empty() -> Self {
        ControlSchedule {
            segments: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn validate_for(&self, spec: &ChainSpec) -> Result<()> {
        self.segments
            .iter()
            .try_for_each(|s| s.validate(spec.n_spins))
    }

    pub fn append(&mut self, other: &ControlSchedule) {
        self.segments.extend(other.segments.iter().cloned());
    }

    pub fn conserves_excitations(&self) -> bool {
        self.segments
            .iter()
            .all(ControlSegment::conserves_excitations)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ControlSchedule = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("schedule json: {e}")))?;
        Self::new(raw.segments)
    }
}

fn check_segment(spec: &ChainSpec, seg: &ControlSegment) -> Result<()> {
    spec.validate()?;
    seg.validate(spec.n_spins)
}

/// H_S + H_I for one segment.
pub fn build_h_ideal(spec: &ChainSpec, seg: &ControlSegment) -> Result<OperatorSum> {
    check_segment(spec, seg)?;
    let n = spec.n_spins;
    let mut op = OperatorSum::zero(n);
    for i in 1..=n {
        op.push_nonzero(PauliTerm::single(seg.bx[i - 1], i, Pauli::X)?)?;
        op.push_nonzero(PauliTerm::single(seg.bz[i - 1], i, Pauli::Z)?)?;
    }
    for i in 1..n {
        let j = seg.jxy[i - 1];
        op.push_nonzero(PauliTerm::pair(j, i, Pauli::X, i + 1, Pauli::X)?)?;
        op.push_nonzero(PauliTerm::pair(j, i, Pauli::Y, i + 1, Pauli::Y)?)?;
        op.push_nonzero(PauliTerm::pair(spec.j1, i, Pauli::Z, i + 1, Pauli::Z)?)?;
    }
    Ok(op)
}

/// J2 sum_i Z_i Z_{i+2}; the zero operator for chains shorter than 3.
pub fn build_h_long(spec: &ChainSpec) -> Result<OperatorSum> {
    let n = spec.n_spins;
    let mut op = OperatorSum::zero(n);
    for i in 1..=n.saturating_sub(2) {
        op.push_nonzero(PauliTerm::pair(spec.j2, i, Pauli::Z, i + 2, Pauli::Z)?)?;
    }
    Ok(op)
}

/// H_S + H_I + H_L. With `require_zero_bz` any sigma^z field is rejected.
pub fn build_h_m(
    spec: &ChainSpec,
    seg: &ControlSegment,
    require_zero_bz: bool,
) -> Result<OperatorSum> {
    if require_zero_bz && seg.bz.iter().any(|&b| b != 0.0) {
        return Err(Error::invalid(
            "encoded-gate segments must keep every bz at 0",
        ));
    }
    let mut op = build_h_ideal(spec, seg)?;
    op.extend(&build_h_long(spec)?)?;
    Ok(op)
}

fn segment_hamiltonian(
    spec: &ChainSpec,
    seg: &ControlSegment,
    include_long_range: bool,
) -> Result<OperatorSum> {
    if include_long_range {
        build_h_m(spec, seg, false)
    } else {
        build_h_ideal(spec, seg)
    }
}

/// Time-ordered product U_K ... U_1 with U_k = exp(-i duration_k H_k).
///
/// Uses the diagonal path for Z-only segments and sector blocks when no
/// transverse field is on; otherwise exponentiates the full matrix.
pub fn evolve(
    spec: &ChainSpec,
    sched: &ControlSchedule,
    include_long_range: bool,
) -> Result<Propagator> {
    sched.validate_for(spec)?;
    let n = spec.n_spins;
    let dim = 1usize << n;
    if n > crate::operator::DEFAULT_MAX_SPINS {
        return Err(Error::DimensionCap {
            n_spins: n,
            cap: crate::operator::DEFAULT_MAX_SPINS,
        });
    }
    if sched.conserves_excitations() {
        let mut full = CMatrix::zeros(dim, dim);
        for k in 0..=n {
            let block = evolve_sector(spec, sched, include_long_range, k)?;
            let states = block.basis.states();
            for (c, &sc) in states.iter().enumerate() {
                for (r, &sr) in states.iter().enumerate() {
                    full[(sr, sc)] = block.matrix[(r, c)];
                }
            }
        }
        let trace = traces(spec, sched, include_long_range)?;
        return Ok(Propagator::from_parts(full, trace));
    }
    let mut u = CMatrix::identity(dim, dim);
    let mut trace = Vec::with_capacity(sched.segments.len());
    for seg in &sched.segments {
        let h = segment_hamiltonian(spec, seg, include_long_range)?;
        let step = if h.is_diagonal() {
            diagonal_exp(&h.diagonal_energies()?, seg.duration)
        } else {
            HermitianEigen::new(&h.realize()?)?.exp(seg.duration, TimeSign::Forward)?
        };
        u = step * u;
        trace.push(TraceEntry {
            hamiltonian: Some(h),
            duration: seg.duration,
        });
    }
    Ok(Propagator::from_parts(u, trace))
}

fn traces(
    spec: &ChainSpec,
    sched: &ControlSchedule,
    include_long_range: bool,
) -> Result<Vec<TraceEntry>> {
    sched
        .segments
        .iter()
        .map(|seg| {
            Ok(TraceEntry {
                hamiltonian: Some(segment_hamiltonian(spec, seg, include_long_range)?),
                duration: seg.duration,
            })
        })
        .collect()
}

fn diagonal_exp(energies: &[f64], t: f64) -> CMatrix {
    let d = nalgebra::DVector::from_iterator(
        energies.len(),
        energies
            .iter()
            .map(|&e| num_complex::Complex64::from_polar(1.0, -e * t)),
    );
    CMatrix::from_diagonal(&d)
}

/// Evolution restricted to the sector with `excitations` spins in |1>.
pub fn evolve_sector(
    spec: &ChainSpec,
    sched: &ControlSchedule,
    include_long_range: bool,
    excitations: usize,
) -> Result<SectorPropagator> {
    sched.validate_for(spec)?;
    if !sched.conserves_excitations() {
        return Err(Error::invalid(
            "schedule has transverse fields; sectors are not invariant",
        ));
    }
    let basis = SectorBasis::new(spec.n_spins, excitations)?;
    let mut u = CMatrix::identity(basis.dim(), basis.dim());
    for seg in &sched.segments {
        let h = segment_hamiltonian(spec, seg, include_long_range)?;
        let block = sector_block(&h, &basis)?;
        let step = if h.is_diagonal() {
            diagonal_exp(
                &block.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(),
                seg.duration,
            )
        } else {
            HermitianEigen::new(&block)?.exp(seg.duration, TimeSign::Forward)?
        };
        u = step * u;
    }
    Ok(SectorPropagator { basis, matrix: u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_entry;
    use num_complex::Complex64;

    fn spec(n: usize) -> ChainSpec {
        ChainSpec::new(n, 1.0, 0.05, 0.5).unwrap()
    }

    #[test]
    fn two_spins_idle_is_one_ising_term() {
        let seg = ControlSegment::idle(2, 1.0).unwrap();
        let h = build_h_ideal(&spec(2), &seg).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(
            h.terms()[0],
            PauliTerm::pair(1.0, 1, Pauli::Z, 2, Pauli::Z).unwrap()
        );
    }

    #[test]
    fn three_spin_term_count() {
        let mut seg = ControlSegment::idle(3, 1.0).unwrap();
        seg.bx[1] = 0.2;
        let h = build_h_ideal(&spec(3), &seg).unwrap();
        let want = OperatorSum::from_terms(
            3,
            [
                PauliTerm::single(0.2, 2, Pauli::X).unwrap(),
                PauliTerm::pair(1.0, 1, Pauli::Z, 2, Pauli::Z).unwrap(),
                PauliTerm::pair(1.0, 2, Pauli::Z, 3, Pauli::Z).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(h, want);
    }

    #[test]
    fn long_range_terms() {
        let h3 = build_h_long(&spec(3)).unwrap();
        assert_eq!(
            h3.terms(),
            &[PauliTerm::pair(0.05, 1, Pauli::Z, 3, Pauli::Z).unwrap()]
        );
        assert!(build_h_long(&spec(2)).unwrap().is_empty());
        let h6 = build_h_long(&spec(6)).unwrap();
        assert_eq!(h6.len(), 4);
        assert!(h6.realize().unwrap().trace().norm() < 1e-14);
    }

    #[test]
    fn h_m_edges() {
        let s2 = spec(2);
        let seg = ControlSegment::new(0.5, vec![0.1, 0.3], vec![0.2, 0.0], vec![0.4]).unwrap();
        assert_eq!(
            build_h_m(&s2, &seg, false).unwrap(),
            build_h_ideal(&s2, &seg).unwrap()
        );
        assert!(build_h_m(&s2, &seg, true).is_err());
        let zero = ChainSpec::new(4, 0.0, 0.0, 0.0).unwrap();
        assert!(
            build_h_m(&zero, &ControlSegment::idle(4, 1.0).unwrap(), true)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn length_mismatch_rejected() {
        let seg = ControlSegment::idle(3, 1.0).unwrap();
        assert!(build_h_ideal(&spec(4), &seg).is_err());
        assert!(ControlSegment::new(1.0, vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]).is_err());
        assert!(ControlSegment::idle(3, 0.0).is_err());
    }

    #[test]
    fn idle_zero_chain_is_identity() {
        let zero = ChainSpec::new(3, 0.0, 0.0, 0.0).unwrap();
        let sched = ControlSchedule::new(vec![ControlSegment::idle(3, 2.0).unwrap()]).unwrap();
        let u = evolve(&zero, &sched, true).unwrap();
        assert!((u.matrix() - CMatrix::identity(8, 8)).norm() < 1e-15);
    }

    #[test]
    fn split_segments_compose() {
        let s = spec(4);
        let mut seg = ControlSegment::idle(4, 0.3).unwrap();
        seg.bx = vec![0.1, -0.2, 0.3, 0.05];
        seg.jxy = vec![0.2, 0.1, -0.3];
        let mut whole = seg.clone();
        whole.duration = 0.7;
        let mut rest = seg.clone();
        rest.duration = 0.4;
        let a = evolve(&s, &ControlSchedule::new(vec![seg, rest]).unwrap(), true).unwrap();
        let b = evolve(&s, &ControlSchedule::new(vec![whole]).unwrap(), true).unwrap();
        assert!(max_entry(&(a.matrix() - b.matrix())) < 1e-10);
        assert_eq!(a.trace().len(), 2);
    }

    #[test]
    fn empty_schedule_is_identity() {
        let u = evolve(&spec(3), &ControlSchedule::empty(), true).unwrap();
        assert!(max_entry(&(u.matrix() - CMatrix::identity(8, 8))) < 1e-15);
    }

    #[test]
    fn sector_path_matches_dense_path() {
        let s = spec(5);
        let mut seg = ControlSegment::idle(5, 0.8).unwrap();
        seg.jxy = vec![0.3, -0.1, 0.25, 0.4];
        seg.bz = vec![0.1, 0.0, -0.2, 0.0, 0.05];
        let sched = ControlSchedule::new(vec![seg.clone()]).unwrap();
        let fast = evolve(&s, &sched, true).unwrap();
        let h = build_h_m(&s, &seg, false).unwrap().realize().unwrap();
        let dense = crate::linalg::expm_unitary(&h, 0.8, TimeSign::Forward).unwrap();
        assert!(max_entry(&(fast.matrix() - dense.matrix())) < 1e-10);
        assert!(fast.unitarity_defect() < 1e-10);
    }

    #[test]
    fn without_long_range_j2_is_irrelevant() {
        let a = ChainSpec::new(4, 1.0, 0.0, 0.5).unwrap();
        let mut seg = ControlSegment::idle(4, 1.3).unwrap();
        seg.bx = vec![0.2, 0.0, 0.1, 0.3];
        seg.jxy = vec![0.1, 0.2, 0.3];
        let sched = ControlSchedule::new(vec![seg]).unwrap();
        let on = evolve(&a, &sched, true).unwrap();
        let off = evolve(&a, &sched, false).unwrap();
        assert!(max_entry(&(on.matrix() - off.matrix())) < 1e-12);

        let b = ChainSpec::new(4, 1.0, 0.05, 0.5).unwrap();
        let on = evolve(&b, &sched, true).unwrap();
        let off = evolve(&b, &sched, false).unwrap();
        assert!(max_entry(&(on.matrix() - off.matrix())) > 1e-4);
    }

    #[test]
    fn schedule_json_roundtrip() {
        let sched =
            ControlSchedule::new(vec![ControlSegment::bond_pulse(3, 2, 0.25, 1.5).unwrap()])
                .unwrap();
        let back = ControlSchedule::from_json(&sched.to_json()).unwrap();
        assert_eq!(back, sched);
        assert!(ControlSchedule::from_json(r#"{"segments": [], "extra": 1}"#).is_err());
        let _ = Complex64::new(0.0, 0.0);
    }
}
