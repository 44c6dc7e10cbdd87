//! Dense complex kernels: Hermitian exponentials, spectral norms and the
//! phase-optimized gate distance.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::OperatorSum;

pub type CMatrix = DMatrix<Complex64>;

pub const UNITARITY_TOL: f64 = 1e-10;
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Required resolution of the optimal phase.
pub const PHASE_TOL: f64 = 1e-8;

const EIGEN_MAX_ITER: usize = 10_000;
const PHASE_GRID: usize = 2048;

/// Largest entry modulus.
pub fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-entry |H - H^dagger|.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max-entry |U^dagger U - I|.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

fn check_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Direction of time evolution: `Forward` is exp(-i t H).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeSign {
    Forward,
    Backward,
}

impl TimeSign {
    fn factor(self) -> f64 {
        match self {
            TimeSign::Forward => 1.0,
            TimeSign::Backward => -1.0,
        }
    }
}

/// One piece of the generator history of a propagator.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub hamiltonian: Option<OperatorSum>,
    pub duration: f64,
}

/// A unitary on the full register together with how it was generated.
#[derive(Clone, Debug, PartialEq)]
pub struct Propagator {
    matrix: CMatrix,
    trace: Vec<TraceEntry>,
}

impl Propagator {
    pub fn identity(dim: usize) -> Self {
        Propagator {
            matrix: CMatrix::identity(dim, dim),
            trace: Vec::new(),
        }
    }

    /// Wraps a matrix after checking the unitarity certificate.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(matrix.nrows(), matrix.ncols()));
        }
        check_finite(&matrix, "propagator")?;
        let defect = unitarity_defect(&matrix);
        if defect >= UNITARITY_TOL {
            return Err(Error::Invariant(format!(
                "propagator unitarity defect {defect:e}"
            )));
        }
        Ok(Propagator {
            matrix,
            trace: Vec::new(),
        })
    }

    /// Diagonal unitary exp(-i phase_k) on basis states.
    pub fn from_phases(phases: &[f64]) -> Self {
        let d = DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&p| Complex64::from_polar(1.0, -p)),
        );
        Propagator {
            matrix: CMatrix::from_diagonal(&d),
            trace: Vec::new(),
        }
    }

    pub(crate) fn from_parts(matrix: CMatrix, trace: Vec<TraceEntry>) -> Self {
        Propagator { matrix, trace }
    }

    pub fn with_trace(mut self, entry: TraceEntry) -> Self {
        self.trace.push(entry);
        self
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    /// `later * self`: apply `self` first.
    pub fn then(&self, later: &Propagator) -> Result<Propagator> {
        if later.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), later.dim()));
        }
        let mut trace = self.trace.clone();
        trace.extend(later.trace.iter().cloned());
        Ok(Propagator {
            matrix: &later.matrix * &self.matrix,
            trace,
        })
    }

    /// P^dagger U P for an isometry P whose columns span the subspace.
    pub fn restrict(&self, basis: &CMatrix) -> Result<CMatrix> {
        if basis.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), basis.nrows()));
        }
        Ok(basis.adjoint() * &self.matrix * basis)
    }
}

/// Eigendecomposition of a Hermitian matrix, reusable across many times.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch(h.nrows(), h.ncols()));
        }
        check_finite(h, "Hamiltonian")?;
        let defect = hermiticity_defect(h);
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, EIGEN_MAX_ITER)
            .ok_or(Error::NoConvergence)?;
        Ok(HermitianEigen {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    /// exp(sign * (-i) t H) = V diag(exp(-i sign t lambda)) V^dagger.
    pub fn exp(&self, t: f64, sign: TimeSign) -> Result<CMatrix> {
        if !t.is_finite() {
            return Err(Error::NonFinite("evolution time"));
        }
        let s = sign.factor();
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -s * t * lam);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= phase;
            }
        }
        let u = scaled * self.vectors.adjoint();
        let defect = unitarity_defect(&u);
        if defect >= UNITARITY_TOL {
            return Err(Error::Invariant(format!(
                "exponential unitarity defect {defect:e}"
            )));
        }
        Ok(u)
    }
}

/// exp(sign * (-i) t H) for Hermitian `h`.
pub fn expm_unitary(h: &CMatrix, t: f64, sign: TimeSign) -> Result<Propagator> {
    let u = HermitianEigen::new(h)?.exp(t, sign)?;
    Ok(Propagator::from_parts(
        u,
        vec![TraceEntry {
            hamiltonian: None,
            duration: sign.factor() * t,
        }],
    ))
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    check_finite(a, "spectral_norm input")?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let sv = a.clone().singular_values();
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

/// Eigenvalue phases of a unitary, each in (-pi, pi].
pub fn unitary_eigenphases(w: &CMatrix) -> Result<Vec<f64>> {
    if !w.is_square() {
        return Err(Error::DimensionMismatch(w.nrows(), w.ncols()));
    }
    check_finite(w, "unitary")?;
    if is_diagonal(w) {
        return Ok(w.diagonal().iter().map(|z| z.arg()).collect());
    }
    // A normal matrix is diagonalized by the eigenvectors of a generic real
    // combination of its commuting Hermitian and anti-Hermitian parts. An
    // unlucky mixing weight merges distinct eigenvalues, so each candidate
    // basis is checked before use.
    let half = Complex64::new(0.5, 0.0);
    let herm = (w + w.adjoint()) * half;
    let anti = (w - w.adjoint()) * Complex64::new(0.0, -0.5);
    for weight in [0.919_262_3, 0.377_215_9, 2.431_729_5, 0.061_803_4] {
        let mix = &herm + &anti * Complex64::new(weight, 0.0);
        let mix = (&mix + mix.adjoint()) * half;
        let eig = HermitianEigen::new(&mix)?;
        let mut phases = Vec::with_capacity(w.nrows());
        let mut ok = true;
        for k in 0..w.nrows() {
            let v = eig.vectors.column(k);
            let wv = w * v;
            let lam = (v.adjoint() * &wv)[(0, 0)];
            if (wv - v * lam).norm() > 1e-9 {
                ok = false;
                break;
            }
            phases.push(lam.arg());
        }
        if ok {
            return Ok(phases);
        }
    }
    Err(Error::NoConvergence)
}

fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == Complex64::new(0.0, 0.0)))
}

/// Distance max_k |1 - exp(i(phi + a_k))| for a set of eigenphases.
pub fn phase_set_objective(phases: &[f64], phi: f64) -> f64 {
    phases
        .iter()
        .map(|&a| 2.0 * ((phi + a) / 2.0).sin().abs())
        .fold(0.0, f64::max)
}

/// Minimizes `phase_set_objective` over phi in [0, 2 pi).
///
/// A uniform grid locates every candidate basin; each one is polished by
/// golden-section search well below `PHASE_TOL`.
pub fn phase_set_distance(phases: &[f64]) -> (f64, f64) {
    if phases.is_empty() {
        return (0.0, 0.0);
    }
    let mut uniq: Vec<f64> = phases.iter().map(|a| a.rem_euclid(TAU)).collect();
    uniq.sort_by(f64::total_cmp);
    uniq.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let step = TAU / PHASE_GRID as f64;
    let grid: Vec<f64> = (0..PHASE_GRID)
        .map(|k| phase_set_objective(&uniq, k as f64 * step))
        .collect();
    let best_grid = grid.iter().copied().fold(f64::INFINITY, f64::min);

    let mut best = (0.0, f64::INFINITY);
    for k in 0..PHASE_GRID {
        let prev = grid[(k + PHASE_GRID - 1) % PHASE_GRID];
        let next = grid[(k + 1) % PHASE_GRID];
        if grid[k] > prev || grid[k] > next || grid[k] > best_grid + 2.0 * step {
            continue;
        }
        let center = k as f64 * step;
        let (phi, val) = golden_section(
            |p| phase_set_objective(&uniq, p),
            center - step,
            center + step,
        );
        let (phi, val) = if grid[k] <= val {
            (center, grid[k])
        } else {
            (phi, val)
        };
        if val < best.1 {
            best = (phi.rem_euclid(TAU), val);
        }
    }
    if best.1 <= 1e-300 {
        best.1 = 0.0;
    }
    best
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// min over phi of || U - e^{i phi} V ||, returned as (phi*, d*).
///
/// The global phase multiplies the realistic evolution `v`. Because both
/// operators are unitary the norm equals max_k |1 - e^{i(phi + a_k)}| over
/// the eigenphases a_k of U^dagger V.
pub fn phase_optimized_distance(u: &Propagator, v: &Propagator) -> Result<(f64, f64)> {
    phase_optimized_distance_matrices(u.matrix(), v.matrix())
}

pub fn phase_optimized_distance_matrices(u: &CMatrix, v: &CMatrix) -> Result<(f64, f64)> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch(u.nrows(), v.nrows()));
    }
    let w = u.adjoint() * v;
    let phases = unitary_eigenphases(&w)?;
    Ok(phase_set_distance(&phases))
}

/// Wraps an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}
