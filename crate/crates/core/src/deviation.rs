//! Gate deviation caused by leaving the next-nearest-neighbor Ising term out
//! of the model, for a chain of 2n+1 spins with n single-spin qubits on the
//! even sites and alternating frozen blockades on the odd sites.
//!
//! Every scenario lives in a subspace where the nearest-neighbor Ising term
//! is cancelled by the blockades, so the realistic evolution differs from
//! the ideal one by a diagonal factor exp(-i J2 t E(s)) with
//! E(s) = -n + sum_k s_k s_{k+1} over qubit sigma^z values s_k. The
//! scenarios differ only in which qubits are frozen.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{evolve, ChainSpec, ControlSchedule, ControlSegment};
use crate::error::{Error, Result};
use crate::linalg::{
    phase_optimized_distance_matrices, phase_set_distance, spectral_norm, CMatrix,
};

/// Most free-qubit patterns the reduced-space enumeration will visit.
pub const PATTERN_CAP: usize = 1 << 20;

/// Time offsets used for the small-t slope.
pub const SPEED_STEPS: [f64; 2] = [1e-4, 2e-4];

/// Default drive used for the sigma^z / sigma^x / exchange controls in the
/// full-chain check.
pub const DEFAULT_FIELD: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Idle,
    SigmaZ,
    SigmaX,
    InterQubit,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Idle,
        Scenario::SigmaZ,
        Scenario::SigmaX,
        Scenario::InterQubit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Idle => "idle",
            Scenario::SigmaZ => "sigma_z",
            Scenario::SigmaX => "sigma_x",
            Scenario::InterQubit => "inter_qubit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown scenario {s:?}")))
    }

    pub fn min_qubits(self) -> usize {
        match self {
            Scenario::Idle | Scenario::SigmaZ => 2,
            Scenario::SigmaX => 4,
            Scenario::InterQubit => 3,
        }
    }

    /// Multiplier k in the bound 2|sin(J2 t k / 2)|.
    pub fn bound_order(self, n: usize) -> usize {
        match self {
            Scenario::Idle | Scenario::SigmaZ => n - 1,
            Scenario::SigmaX => n - 3,
            Scenario::InterQubit => n - 2,
        }
    }

    /// Default 1-based position of the driven qubit (first of the pair for
    /// the inter-qubit gate).
    pub fn default_target(self, n: usize) -> usize {
        match self {
            Scenario::Idle => 1,
            Scenario::SigmaZ => n.div_ceil(2),
            Scenario::SigmaX => n.div_ceil(2).clamp(2, n.saturating_sub(1).max(2)),
            // The blockade between the pair must be |0> so the exchange
            // pulses act trivially; with the alternating pattern that means
            // an even first qubit.
            Scenario::InterQubit => (1..n)
                .filter(|i| i % 2 == 0)
                .min_by(|a, b| {
                    let center = n as f64 / 2.0;
                    (*a as f64 + 0.5 - center)
                        .abs()
                        .total_cmp(&(*b as f64 + 0.5 - center).abs())
                })
                .unwrap_or(2),
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    pub n_logical: usize,
    pub j2: f64,
    pub t: f64,
    pub exact_raw: f64,
    pub exact_phase_opt: f64,
    pub lower_bound: f64,
}

impl ScenarioResult {
    pub const BOUND_SLACK: f64 = 1e-9;

    pub fn bound_holds(&self) -> bool {
        self.exact_phase_opt >= self.lower_bound - Self::BOUND_SLACK
    }
}

pub fn lower_bound(scenario: Scenario, n: usize, j2: f64, t: f64) -> f64 {
    2.0 * (j2 * t * scenario.bound_order(n) as f64 / 2.0).sin().abs()
}

/// State of a logical qubit in a scenario subspace.
#[derive(Clone, Copy, Debug, PartialEq)]
enum QubitRole {
    Free,
    /// Frozen in a sigma^z eigenstate with this eigenvalue.
    Frozen(i64),
    /// The sigma^x target, held in (|0> + |1>)/sqrt(2).
    Superposed,
}

fn roles(scenario: Scenario, n: usize, target: usize) -> Result<Vec<QubitRole>> {
    if n < scenario.min_qubits() {
        return Err(Error::invalid(format!(
            "{scenario} needs at least {} qubits, got {n}",
            scenario.min_qubits()
        )));
    }
    let mut r = vec![QubitRole::Free; n];
    let t = target;
    match scenario {
        Scenario::Idle => {}
        Scenario::SigmaZ => {
            check_target(t, 1, n)?;
            r[t - 1] = QubitRole::Frozen(-1);
        }
        Scenario::SigmaX => {
            check_target(t, 2, n - 1)?;
            r[t - 2] = QubitRole::Frozen(-1);
            r[t - 1] = QubitRole::Superposed;
            r[t] = QubitRole::Frozen(1);
        }
        Scenario::InterQubit => {
            check_target(t, 1, n - 1)?;
            r[t - 1] = QubitRole::Frozen(-1);
            r[t] = QubitRole::Frozen(-1);
        }
    }
    Ok(r)
}

fn check_target(t: usize, lo: usize, hi: usize) -> Result<()> {
    if t < lo || t > hi {
        return Err(Error::invalid(format!(
            "target qubit {t} outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn free_qubits(roles: &[QubitRole]) -> Vec<usize> {
    roles
        .iter()
        .enumerate()
        .filter(|(_, r)| **r == QubitRole::Free)
        .map(|(k, _)| k)
        .collect()
}

/// sigma^z values of all qubits for one free pattern (bit k of `pattern`
/// counted from the most significant free qubit). The superposed qubit
/// carries 0: its couplings cancel against its opposite neighbors.
fn qubit_values(roles: &[QubitRole], free: &[usize], pattern: usize) -> Vec<i64> {
    let mut s: Vec<i64> = roles
        .iter()
        .map(|r| match r {
            QubitRole::Frozen(v) => *v,
            _ => 0,
        })
        .collect();
    let f = free.len();
    for (pos, &q) in free.iter().enumerate() {
        s[q] = if pattern >> (f - 1 - pos) & 1 == 1 {
            1
        } else {
            -1
        };
    }
    s
}

/// E(s) = -n + sum_k s_k s_{k+1}, in units of J2.
fn long_range_energy(s: &[i64]) -> i64 {
    -(s.len() as i64) + s.windows(2).map(|w| w[0] * w[1]).sum::<i64>()
}

/// Distinct long-range energies (units of J2) over the scenario subspace,
/// in pattern order with duplicates removed.
fn energy_levels(scenario: Scenario, n: usize, target: usize) -> Result<BTreeSet<i64>> {
    let r = roles(scenario, n, target)?;
    let free = free_qubits(&r);
    if free.len() >= usize::BITS as usize || (1usize << free.len()) > PATTERN_CAP {
        return Err(Error::DimensionCap {
            n_spins: free.len(),
            cap: PATTERN_CAP.trailing_zeros() as usize,
        });
    }
    Ok((0..1usize << free.len())
        .map(|p| long_range_energy(&qubit_values(&r, &free, p)))
        .collect())
}

fn check_inputs(j2: f64, t: f64) -> Result<()> {
    if !j2.is_finite() || !t.is_finite() {
        return Err(Error::NonFinite("deviation parameters"));
    }
    if t < 0.0 {
        return Err(Error::invalid(format!(
            "evolution time must be >= 0, got {t}"
        )));
    }
    Ok(())
}

/// Exact deviation of a scenario with the driven qubit at `target`.
pub fn scenario_deviation_at(
    scenario: Scenario,
    n: usize,
    j2: f64,
    t: f64,
    target: usize,
) -> Result<ScenarioResult> {
    check_inputs(j2, t)?;
    let levels = energy_levels(scenario, n, target)?;
    // U^dagger V = exp(-i J2 t E): the ideal part is a common factor on the
    // subspace and cancels.
    let phases: Vec<f64> = levels.iter().map(|&e| -j2 * t * e as f64).collect();
    let exact_raw = phases
        .iter()
        .map(|&a| (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, a)).norm())
        .fold(0.0, f64::max);
    let (_, exact_phase_opt) = phase_set_distance(&phases);
    Ok(ScenarioResult {
        scenario,
        n_logical: n,
        j2,
        t,
        exact_raw,
        exact_phase_opt: exact_phase_opt.min(exact_raw),
        lower_bound: lower_bound(scenario, n, j2, t),
    })
}

pub fn scenario_deviation(scenario: Scenario, n: usize, j2: f64, t: f64) -> Result<ScenarioResult> {
    if n < scenario.min_qubits() {
        return Err(Error::invalid(format!(
            "{scenario} needs at least {} qubits, got {n}",
            scenario.min_qubits()
        )));
    }
    scenario_deviation_at(scenario, n, j2, t, scenario.default_target(n))
}

pub fn idle_deviation(n: usize, j2: f64, t: f64) -> Result<ScenarioResult> {
    scenario_deviation(Scenario::Idle, n, j2, t)
}

/// The sigma^z field only adds a phase common to the subspace, so `bz`
/// does not enter the reduced result.
pub fn sigma_z_deviation(n: usize, j2: f64, t: f64, bz: f64) -> Result<ScenarioResult> {
    if !bz.is_finite() {
        return Err(Error::NonFinite("bz"));
    }
    scenario_deviation(Scenario::SigmaZ, n, j2, t)
}

pub fn sigma_x_deviation(n: usize, j2: f64, t: f64, bx: f64) -> Result<ScenarioResult> {
    if !bx.is_finite() {
        return Err(Error::NonFinite("bx"));
    }
    scenario_deviation(Scenario::SigmaX, n, j2, t)
}

pub fn interqubit_deviation(n: usize, j2: f64, t: f64) -> Result<ScenarioResult> {
    scenario_deviation(Scenario::InterQubit, n, j2, t)
}

/// Small-t slope of the phase-optimized deviation: (d(2h) - d(h)) / h.
pub fn scenario_speed(scenario: Scenario, n: usize, j2: f64) -> Result<f64> {
    let [h1, h2] = SPEED_STEPS;
    let d1 = scenario_deviation(scenario, n, j2, h1)?.exact_phase_opt;
    let d2 = scenario_deviation(scenario, n, j2, h2)?.exact_phase_opt;
    Ok((d2 - d1) / (h2 - h1))
}

pub fn deviation_speed(n: usize, j2: f64) -> Result<f64> {
    scenario_speed(Scenario::Idle, n, j2)
}

/// `points` equally spaced times over [0, pi / (2 j2 n)] (just t = 0 for j2 = 0).
pub fn default_t_grid(n: usize, j2: f64, points: usize) -> Vec<f64> {
    if points == 0 {
        return Vec::new();
    }
    if j2 == 0.0 || points == 1 {
        return vec![0.0; points.min(1)];
    }
    let t_max = PI / (2.0 * j2.abs() * n as f64);
    (0..points)
        .map(|k| t_max * k as f64 / (points - 1) as f64)
        .collect()
}

/// Deviation of full-chain propagators restricted to a scenario subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct FullChainDeviation {
    pub exact_raw: f64,
    pub exact_phase_opt: f64,
    /// Largest probability that the ideal evolution leaves the subspace.
    pub leakage: f64,
}

/// sigma^z value of blockade spin `k` (site 2k - 1): |0>, |1>, |0>, ...
fn blockade_value(k: usize) -> i64 {
    if k % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Simulates the 2n+1 spin chain with the driven controls on, with and
/// without the J2 term, and measures the deviation on the scenario subspace.
pub fn full_chain_deviation(
    scenario: Scenario,
    n: usize,
    j1: f64,
    j2: f64,
    t: f64,
    field: f64,
    target: usize,
) -> Result<FullChainDeviation> {
    check_inputs(j2, t)?;
    let r = roles(scenario, n, target)?;
    if scenario == Scenario::InterQubit && blockade_value(target + 1) != -1 {
        return Err(Error::invalid(format!(
            "inter-qubit pair starting at {target} has a |1> blockade between the qubits"
        )));
    }
    let spins = 2 * n + 1;
    let spec = ChainSpec::new(spins, j1, j2, 0.0)?;
    let free = free_qubits(&r);
    let dim_sub = 1usize << free.len();
    let dim = 1usize << spins;

    let mut basis = CMatrix::zeros(dim, dim_sub);
    for p in 0..dim_sub {
        let s = qubit_values(&r, &free, p);
        let mut bits = vec![0u8; spins];
        for k in 1..=n + 1 {
            bits[2 * k - 2] = u8::from(blockade_value(k) == 1);
        }
        for (q, &v) in s.iter().enumerate() {
            bits[2 * q + 1] = u8::from(v == 1);
        }
        let idx = crate::operator::basis_index(&bits);
        match r.iter().position(|x| *x == QubitRole::Superposed) {
            Some(q) => {
                let flip = crate::operator::site_mask(spins, 2 * q + 2);
                let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                basis[(idx & !flip, p)] = amp;
                basis[(idx | flip, p)] = amp;
            }
            None => basis[(idx, p)] = Complex64::new(1.0, 0.0),
        }
    }

    if t == 0.0 {
        return Ok(FullChainDeviation {
            exact_raw: 0.0,
            exact_phase_opt: 0.0,
            leakage: 0.0,
        });
    }
    let mut seg = ControlSegment::idle(spins, t)?;
    match scenario {
        Scenario::Idle => {}
        Scenario::SigmaZ => seg.bz[2 * target - 1] = field,
        Scenario::SigmaX => seg.bx[2 * target - 1] = field,
        Scenario::InterQubit => {
            seg.jxy[2 * target - 1] = field;
            seg.jxy[2 * target] = field;
        }
    }
    let sched = ControlSchedule::new(vec![seg])?;
    let u = evolve(&spec, &sched, false)?.restrict(&basis)?;
    let v = evolve(&spec, &sched, true)?.restrict(&basis)?;
    let leakage = (0..dim_sub)
        .map(|c| 1.0 - u.column(c).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    let exact_raw = spectral_norm(&(&u - &v))?;
    let (_, exact_phase_opt) = phase_optimized_distance_matrices(&u, &v)?;
    Ok(FullChainDeviation {
        exact_raw,
        exact_phase_opt: exact_phase_opt.min(exact_raw),
        leakage,
    })
}
