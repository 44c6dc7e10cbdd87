//! CPHASE, logical sigma^x and the sigma^z composite on pair-encoded qubits,
//! and their verification by full-chain evolution.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{evolve, evolve_sector, ChainSpec, ControlSchedule, ControlSegment};
use crate::encoded::layout::{LogicalLayout, QubitSites};
use crate::encoded::pulses::{solve_tilted, PulseParameters};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Whether the pulse tilt accounts for J2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiltMode {
    #[default]
    Compensated,
    /// Every pulse parameter computed as if J2 were zero.
    Naive,
}

/// Reduced Hamiltonians of the six-spin window 3..8 of the ten-spin chain,
/// measured from the energy of |010010>.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedHamiltonians {
    /// Basis {|100010>, |100100>}.
    pub h2: CMatrix,
    /// Basis {|010001>, |001001>}.
    pub h3: CMatrix,
    /// Basis {|010010>, |010100>, |001010>, |001100>}.
    pub h4: CMatrix,
    /// h4 with only bond (4,5) on, block {|010010>, |001010>}.
    pub h4_prime: CMatrix,
    /// h4 with only bond (6,7) on, block {|001010>, |001100>}.
    pub h4_double_prime: CMatrix,
    /// Full-chain energy of |010010> with the outer blockades in |0>.
    pub background: f64,
}

pub const H2_BASIS: [&str; 2] = ["100010", "100100"];
pub const H3_BASIS: [&str; 2] = ["010001", "001001"];
pub const H4_BASIS: [&str; 4] = ["010010", "010100", "001010", "001100"];

fn real(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
    CMatrix::from_iterator(rows, cols, v.iter().map(|&x| Complex64::new(x, 0.0))).transpose()
}

pub fn reduced_hamiltonians(spec: &ChainSpec, j45: f64, j67: f64) -> ReducedHamiltonians {
    let (j1, j2) = (spec.j1, spec.j2);
    let (a, b) = (2.0 * j45, 2.0 * j67);
    ReducedHamiltonians {
        h2: real(2, 2, &[0.0, b, b, 0.0]),
        h3: real(2, 2, &[0.0, a, a, 0.0]),
        h4: real(
            4,
            4,
            &[
                0.0,
                b,
                a,
                0.0, //
                b,
                4.0 * j2,
                0.0,
                a, //
                a,
                0.0,
                4.0 * j2,
                b, //
                0.0,
                a,
                b,
                4.0 * j1,
            ],
        ),
        h4_prime: real(2, 2, &[0.0, a, a, 4.0 * j2]),
        h4_double_prime: real(2, 2, &[4.0 * j2, b, b, 4.0 * j1]),
        background: j1,
    }
}

/// diag(1, e^{i phi}, 1, 1) on |q0 q1>.
pub fn cphase_matrix(phi: f64) -> CMatrix {
    let one = Complex64::new(1.0, 0.0);
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        one,
        Complex64::from_polar(1.0, phi),
        one,
        one,
    ]))
}

/// Phase picked up by |01>_L per unit of idle time.
pub fn cphase_rate(spec: &ChainSpec) -> f64 {
    -4.0 * spec.j1
}

/// The two exchange bonds used by the CPHASE between qubits 0 and 1, as
/// left sites: (right spin of qubit 0, left neighbor of qubit 1).
fn cphase_bonds(spec: &ChainSpec, layout: &LogicalLayout) -> Result<(usize, usize)> {
    check_layout(spec, layout)?;
    if layout.blockade_width != 2 || layout.n_logical < 2 {
        return Err(Error::invalid(
            "CPHASE needs two pair-encoded qubits separated by two blockades",
        ));
    }
    match (layout.qubit_sites[0], layout.qubit_sites[1]) {
        (QubitSites::Pair(_, b0), QubitSites::Pair(a1, _)) if a1 == b0 + 3 => Ok((b0, a1 - 1)),
        _ => Err(Error::invalid(
            "CPHASE needs two pair-encoded qubits separated by two blockades",
        )),
    }
}

fn check_layout(spec: &ChainSpec, layout: &LogicalLayout) -> Result<()> {
    spec.validate()?;
    layout.validate()?;
    if layout.n_spins != spec.n_spins {
        return Err(Error::DimensionMismatch(layout.n_spins, spec.n_spins));
    }
    Ok(())
}

fn model_j2(spec: &ChainSpec, mode: TiltMode) -> f64 {
    match mode {
        TiltMode::Compensated => spec.j2,
        TiltMode::Naive => 0.0,
    }
}

/// Pulse parameters of steps 1 and 2. Step 2 exchanges states split by
/// 4 (J1 - J2) rather than 4 J2.
pub fn cphase_pulses(
    spec: &ChainSpec,
    mode: TiltMode,
) -> Result<(PulseParameters, PulseParameters)> {
    let j2 = model_j2(spec, mode);
    Ok((
        solve_tilted(spec.x1_max, 2.0 * j2)?,
        solve_tilted(spec.x1_max, 2.0 * (spec.j1 - j2))?,
    ))
}

fn pulse_train(
    n: usize,
    bond: usize,
    p: &PulseParameters,
    sign: f64,
) -> Result<Vec<ControlSegment>> {
    p.pulses()
        .iter()
        .map(|&(j, d)| ControlSegment::bond_pulse(n, bond, sign * j, d))
        .collect()
}

/// Steps 1 and 2 of the protocol as separate schedules.
pub fn cphase_steps(
    spec: &ChainSpec,
    layout: &LogicalLayout,
    mode: TiltMode,
) -> Result<(ControlSchedule, ControlSchedule)> {
    let (bond_a, bond_b) = cphase_bonds(spec, layout)?;
    let (p1, p2) = cphase_pulses(spec, mode)?;
    let n = spec.n_spins;
    Ok((
        ControlSchedule::new(pulse_train(n, bond_a, &p1, 1.0)?)?,
        ControlSchedule::new(pulse_train(n, bond_b, &p2, 1.0)?)?,
    ))
}

/// Same pulses with every exchange strength negated.
pub fn negated(sched: &ControlSchedule) -> ControlSchedule {
    ControlSchedule {
        segments: sched
            .segments
            .iter()
            .map(ControlSegment::with_negated_exchange)
            .collect(),
    }
}

/// Extra idle time that cancels the phase |01>_L collects while parked in
/// the split states during steps 1, 2 and their inverses.
pub fn phase_offset_time(spec: &ChainSpec, mode: TiltMode) -> Result<f64> {
    if spec.j1 == 0.0 {
        return Err(Error::invalid("CPHASE needs J1 != 0"));
    }
    let j2 = model_j2(spec, mode);
    let (p1, p2) = cphase_pulses(spec, mode)?;
    let offset = -4.0 * j2 * p1.duration() - 4.0 * (spec.j1 + j2) * p2.duration();
    let rate = 4.0 * spec.j1;
    Ok((offset / rate).rem_euclid(TAU / rate.abs()))
}

/// Four-step CPHASE between logical qubits 0 and 1 with idle time `tau`.
/// The simulated gate is diag(1, e^{i phi}, 1, 1) with phi = -4 J1 tau.
pub fn compile_cphase(
    spec: &ChainSpec,
    layout: &LogicalLayout,
    tau: f64,
    mode: TiltMode,
) -> Result<ControlSchedule> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::invalid(format!(
            "tau must be finite and >= 0, got {tau}"
        )));
    }
    if spec.x1_max <= 0.0 {
        return Err(Error::invalid("CPHASE needs x1_max > 0"));
    }
    let (step1, step2) = cphase_steps(spec, layout, mode)?;
    let wait = tau + phase_offset_time(spec, mode)?;
    let mut sched = step1.clone();
    sched.append(&step2);
    if wait > 0.0 {
        sched
            .segments
            .push(ControlSegment::idle(spec.n_spins, wait)?);
    }
    sched.append(&negated(&step2));
    sched.append(&negated(&step1));
    Ok(sched)
}

/// CPHASE whose phase is `phi` (mod 2 pi).
pub fn compile_cphase_with_phase(
    spec: &ChainSpec,
    layout: &LogicalLayout,
    phi: f64,
    mode: TiltMode,
) -> Result<ControlSchedule> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    if spec.j1 == 0.0 {
        return Err(Error::invalid("CPHASE needs J1 != 0"));
    }
    let rate = cphase_rate(spec);
    compile_cphase(
        spec,
        layout,
        (phi / rate).rem_euclid(TAU / rate.abs()),
        mode,
    )
}

/// Logical rotation exp(-i angle sigma^x / 2) by the intra-pair exchange
/// at full strength x1_max / 2.
pub fn logical_sigma_x(
    spec: &ChainSpec,
    layout: &LogicalLayout,
    qubit: usize,
    angle: f64,
) -> Result<ControlSchedule> {
    check_layout(spec, layout)?;
    if !angle.is_finite() {
        return Err(Error::NonFinite("rotation angle"));
    }
    let a = match layout.qubit_sites.get(qubit) {
        Some(QubitSites::Pair(a, _)) => *a,
        Some(QubitSites::Single(_)) => {
            return Err(Error::invalid("logical sigma^x needs a pair-encoded qubit"))
        }
        None => {
            return Err(Error::invalid(format!(
                "qubit {qubit} out of range for {} logical qubits",
                layout.n_logical
            )))
        }
    };
    if angle == 0.0 {
        return Ok(ControlSchedule::empty());
    }
    if spec.x1_max <= 0.0 {
        return Err(Error::invalid("logical sigma^x needs x1_max > 0"));
    }
    let j = angle.signum() * spec.x1_max / 2.0;
    let duration = angle.abs() / (2.0 * spec.x1_max);
    ControlSchedule::new(vec![ControlSegment::bond_pulse(
        spec.n_spins,
        a,
        j,
        duration,
    )?])
}

/// exp(i phi sigma^z) on `qubit` (0 or 1) from two rounds of
/// [sigma^x(pi) on the other qubit, CPHASE].
pub fn logical_sigma_z(
    spec: &ChainSpec,
    layout: &LogicalLayout,
    qubit: usize,
    phi: f64,
    mode: TiltMode,
) -> Result<ControlSchedule> {
    if layout.n_logical < 2 {
        return Err(Error::invalid("sigma^z composite needs two logical qubits"));
    }
    let (other, cphase) = match qubit {
        0 => (1, 2.0 * phi),
        1 => (0, -2.0 * phi),
        _ => {
            return Err(Error::invalid(format!(
                "sigma^z composite acts on qubit 0 or 1, got {qubit}"
            )))
        }
    };
    let flip = logical_sigma_x(spec, layout, other, PI)?;
    let gate = compile_cphase_with_phase(spec, layout, cphase, mode)?;
    let mut sched = ControlSchedule::empty();
    for _ in 0..2 {
        sched.append(&flip);
        sched.append(&gate);
    }
    Ok(sched)
}

/// Propagator restricted to the logical basis, columns indexed by input.
pub fn logical_action(
    spec: &ChainSpec,
    layout: &LogicalLayout,
    sched: &ControlSchedule,
) -> Result<CMatrix> {
    check_layout(spec, layout)?;
    sched.validate_for(spec)?;
    let basis = layout.logical_basis();
    let d = basis.len();
    if sched.conserves_excitations() {
        let k = basis[0].count_ones() as usize;
        if basis.iter().any(|b| b.count_ones() as usize != k) {
            return Err(Error::invalid(
                "logical states span several magnetization sectors",
            ));
        }
        let u = evolve_sector(spec, sched, true, k)?;
        return Ok(CMatrix::from_fn(d, d, |r, c| {
            u.amplitude(basis[r], basis[c])
        }));
    }
    let u = evolve(spec, sched, true)?;
    Ok(CMatrix::from_fn(d, d, |r, c| {
        u.matrix()[(basis[r], basis[c])]
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateReport {
    /// Global phase fixed so the |00>_L -> |00>_L element is real-positive.
    pub logical_matrix: CMatrix,
    /// Largest population any logical input loses from the logical space.
    pub leakage: f64,
    /// Average gate fidelity against diag(1, e^{i phase_phi}, 1, 1).
    pub fidelity: f64,
    /// arg of the |01>_L diagonal element.
    pub phase_phi: f64,
}

/// Global phase removed so m[(0,0)] is real-positive.
pub fn remove_global_phase(m: &CMatrix) -> Result<CMatrix> {
    let a = m[(0, 0)];
    if a.norm() < 1e-12 {
        return Err(Error::Invariant(
            "logical |0...0> amplitude vanished".into(),
        ));
    }
    Ok(m * (a.conj() / a.norm()))
}

/// (Tr(M^dagger M) + |Tr(C^dagger M)|^2) / (d (d + 1)).
pub fn average_gate_fidelity(m: &CMatrix, target: &CMatrix) -> f64 {
    let d = m.nrows() as f64;
    let overlap = (target.adjoint() * m).trace().norm_sqr();
    let norm = (m.adjoint() * m).trace().re;
    ((norm + overlap) / (d * (d + 1.0))).clamp(0.0, 1.0)
}

/// Worst population lost from the logical space over logical inputs.
pub fn leakage(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| (1.0 - c.iter().map(|z| z.norm_sqr()).sum::<f64>()).max(0.0))
        .fold(0.0, f64::max)
}

/// Runs `sched` on the full chain and compares its two-qubit logical action
/// with a CPHASE.
pub fn simulate_gate(
    spec: &ChainSpec,
    layout: &LogicalLayout,
    sched: &ControlSchedule,
) -> Result<GateReport> {
    if layout.n_logical != 2 {
        return Err(Error::invalid("gate reports cover two logical qubits"));
    }
    let m = remove_global_phase(&logical_action(spec, layout, sched)?)?;
    let phase_phi = m[(1, 1)].arg();
    let fidelity = average_gate_fidelity(&m, &cphase_matrix(phase_phi));
    Ok(GateReport {
        leakage: leakage(&m),
        logical_matrix: m,
        fidelity,
        phase_phi,
    })
}
