//! Helpers shared by the integration suites: seeded generators and the
//! nalgebra-backed reference computations.
#![allow(dead_code)]

use impnet_core::{Complex64, ComplexMatrix, Element};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Random ring of inductors and capacitors with at least one of each.
pub fn random_reactance_ring(rng: &mut impl Rng, n: usize) -> Vec<Element> {
    let mut els: Vec<Element> = (0..n)
        .map(|_| {
            let v = log_uniform(rng, 0.2, 5.0);
            if rng.gen_bool(0.5) {
                Element::Inductor(v)
            } else {
                Element::Capacitor(v)
            }
        })
        .collect();
    let has =
        |els: &[Element], ind: bool| els.iter().any(|e| matches!(e, Element::Inductor(_)) == ind);
    if !has(&els, true) {
        els[0] = Element::Inductor(log_uniform(rng, 0.2, 5.0));
    }
    if !has(&els, false) {
        els[n - 1] = Element::Capacitor(log_uniform(rng, 0.2, 5.0));
    }
    els
}

/// Random complex symmetric matrix with entries uniform in the unit square.
pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z;
        }
    }
    m
}

/// Symmetric circulant matrix: `c_k = c_{n−k}` makes the `k` and `n−k`
/// Fourier modes share a singular value, so every order ≥ 3 has exact
/// degenerate pairs.
pub fn random_symmetric_circulant(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..=n / 2 {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        c[k] = z;
        c[(n - k) % n] = z;
    }
    ComplexMatrix::from_fn(n, |i, j| c[(j + n - i) % n])
}

pub fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    let n = m.order();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

/// Singular values in ascending order.
pub fn reference_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(f64::total_cmp);
    s
}

/// Effective resistance from the real Laplacian eigenbasis:
/// `Σ_{i≥2} (ψ_ip − ψ_iq)² / λ_i`.
pub fn reference_resistance(lap: &ComplexMatrix, p: usize, q: usize) -> f64 {
    let n = lap.order();
    let real = DMatrix::from_fn(n, n, |i, j| lap[(i, j)].re);
    let eig = SymmetricEigen::new(real);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order[1..]
        .iter()
        .map(|&i| {
            let d = eig.eigenvectors[(p - 1, i)] - eig.eigenvectors[(q - 1, i)];
            d * d / eig.eigenvalues[i]
        })
        .sum()
}
