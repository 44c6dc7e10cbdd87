//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMatrix = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let a = random_complex(rng, n, n);
    (&a + a.adjoint()).scale(0.5)
}

/// Frobenius norm, an upper bound on the spectral norm.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// exp(-i t H) by a 20-term Taylor series with scaling and squaring.
pub fn taylor_expm(h: &CMatrix, t: f64) -> CMatrix {
    let n = h.nrows();
    let a = h.map(|z| z * Complex64::new(0.0, -t));
    let norm = frobenius(&a);
    let mut squarings = 0;
    while norm / f64::powi(2.0, squarings) > 0.5 {
        squarings += 1;
    }
    let a = a.unscale(f64::powi(2.0, squarings));
    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=20 {
        term = (&term * &a).unscale(k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Largest singular value via power iteration on A^dagger A.
pub fn power_norm(a: &CMatrix, seed: u64) -> f64 {
    let ata = a.adjoint() * a;
    let mut rng = rng(seed);
    let mut v = random_complex(&mut rng, a.ncols(), 1);
    v.unscale_mut(frobenius(&v));
    let mut lambda = 0.0;
    for _ in 0..200_000 {
        let w = &ata * &v;
        let next = v.dotc(&w).re;
        let nw = frobenius(&w);
        v = w.unscale(nw);
        if (next - lambda).abs() <= 1e-16 * next.abs() {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

/// Integrates dU/dt = -i H U with classical RK4.
pub fn rk4_propagate(h: &CMatrix, t: f64, steps: usize, start: &CMatrix) -> CMatrix {
    let dt = t / steps as f64;
    let mih = h.map(|z| z * Complex64::new(0.0, -1.0));
    let f = |u: &CMatrix| &mih * u;
    let mut u = start.clone();
    for _ in 0..steps {
        let k1 = f(&u);
        let k2 = f(&(&u + k1.scale(dt / 2.0)));
        let k3 = f(&(&u + k2.scale(dt / 2.0)));
        let k4 = f(&(&u + k3.scale(dt)));
        u += (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0);
    }
    u
}

/// Dense matrix of a tensor product of single-site 2x2 operators, site 1 first.
pub fn kron_all(ops: &[CMatrix]) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for op in ops {
        out = out.kronecker(op);
    }
    out
}

pub fn pauli(letter: char) -> CMatrix {
    let c = |re, im| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    match letter {
        'I' => CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(1.0, 0.0)]),
        'X' => CMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        // Basis order (|0>, |1>) with |1> as spin up: Y|1> = i|0>, Z|1> = |1>.
        'Y' => CMatrix::from_row_slice(2, 2, &[z, c(0.0, 1.0), c(0.0, -1.0), z]),
        'Z' => CMatrix::from_row_slice(2, 2, &[c(-1.0, 0.0), z, z, c(1.0, 0.0)]),
        _ => panic!("unknown Pauli letter {letter}"),
    }
}

/// Dense operator with `letters` placed at 1-based sites on `n` spins.
pub fn pauli_string(n: usize, letters: &[(usize, char)]) -> CMatrix {
    let ops: Vec<CMatrix> = (1..=n)
        .map(|site| {
            letters
                .iter()
                .find(|(s, _)| *s == site)
                .map_or_else(|| pauli('I'), |(_, l)| pauli(*l))
        })
        .collect();
    kron_all(&ops)
}

/// Golden-section minimum of a unimodal `f` on [lo, hi].
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f((lo + hi) / 2.0)
}

/// min over phi of `f(phi)` on [0, 2 pi): uniform scan, then golden refinement.
pub fn scan_min(f: impl Fn(f64) -> f64, points: usize) -> f64 {
    let step = std::f64::consts::TAU / points as f64;
    let (mut best_phi, mut best) = (0.0, f64::INFINITY);
    for k in 0..points {
        let phi = k as f64 * step;
        let d = f(phi);
        if d < best {
            best = d;
            best_phi = phi;
        }
    }
    best.min(golden_min(&f, best_phi - step, best_phi + step))
}

/// Distance min over phi of ||e^{i phi} U - V||.
pub fn brute_phase_distance(u: &CMatrix, v: &CMatrix, norm: impl Fn(&CMatrix) -> f64) -> f64 {
    scan_min(
        |phi| norm(&(u.map(|z| z * Complex64::from_polar(1.0, phi)) - v)),
        2000,
    )
}
