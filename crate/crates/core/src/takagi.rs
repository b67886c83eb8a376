//! Takagi factorization of complex symmetric matrices.
//!
//! For symmetric `L` we build orthonormal `u_α` and complex `λ_α` with
//! `L·u_α = λ_α·u_α*`, `|λ_α|² = σ_α`, where `σ_α` are the eigenvalues of the
//! Hermitian matrix `L^†L`:
//!
//! * eigenvectors of `L^†L` with a nondegenerate eigenvalue already satisfy the
//!   relation, and `λ` is read off by projecting `L·ψ` onto `ψ*`;
//! * a cluster of (numerically) equal `σ` spans a subspace `Ψ` that `L` maps
//!   onto `Ψ*`, so the cluster reduces to the small symmetric matrix
//!   `B = Ψ^T·L·Ψ`, which is factorized recursively. When every singular value
//!   of `B` coincides, vectors are built directly from `v = (B·c)* + √σ·e^{iθ}·c`.
//!
//! Phases are fixed so that the largest component of each `u_α` is real and
//! positive; `λ_α` absorbs the factor.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{dot, inner, norm, ComplexMatrix};

pub const DEFAULT_MAX_SWEEPS: usize = 100;
pub const DEFAULT_DEGENERACY_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ZERO_REL_TOL: f64 = 1e-10;

/// Allowed asymmetry of the input relative to its Frobenius norm.
const SYMMETRY_TOL: f64 = 1e-13;
/// Relative norm below which a constructed cluster vector counts as vanishing.
const CONSTRUCTION_TOL: f64 = 1e-10;
const CONSTRUCTION_RETRIES: usize = 4;

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigendecomposition(h: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eigendecomposition_with(h, DEFAULT_MAX_SWEEPS)
}

/// Cyclic Jacobi for a Hermitian matrix. Each rotation first removes the phase
/// of `h_pq` with `diag(1, e^{-iφ})` and then applies the real symmetric
/// rotation that annihilates the (now real) pair.
pub fn hermitian_eigendecomposition_with(
    h: &ComplexMatrix,
    max_sweeps: usize,
) -> Result<HermitianEigen> {
    let n = h.order();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = 1e-3 * f64::EPSILON * scale;

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if off_norm(&a) <= target {
            converged = true;
            break;
        }
        if sweep == max_sweeps {
            break;
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= 1e-300 || b <= 1e-20 * scale {
                    continue;
                }
                let phase = apq / b;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * b).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let g00 = Complex64::new(c, 0.0);
                let g01 = Complex64::new(s, 0.0);
                let g10 = phase.conj() * -s;
                let g11 = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g00 + akq * g10;
                    a[(k, q)] = akp * g01 + akq * g11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
                    a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g00 + vkq * g10;
                    v[(k, q)] = vkp * g01 + vkq * g11;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Convergence { sweeps: max_sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// `L·u_α = λ_α·u_α*` with `U` unitary, sorted by `σ_α = |λ_α|²` ascending.
#[derive(Debug, Clone)]
pub struct TakagiDecomposition {
    u: ComplexMatrix,
    lambda: Vec<Complex64>,
    sigma: Vec<f64>,
    residual: f64,
    matrix_norm: f64,
}

impl TakagiDecomposition {
    pub fn order(&self) -> usize {
        self.lambda.len()
    }

    /// Unitary matrix whose columns are the `u_α`.
    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn vector(&self, alpha: usize) -> Vec<Complex64> {
        self.u.column(alpha)
    }

    /// Component `p` (0-based) of `u_α`.
    pub fn component(&self, alpha: usize, p: usize) -> Complex64 {
        self.u[(p, alpha)]
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// `max_α ‖L·u_α − λ_α·u_α*‖₂`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Frobenius norm of the factorized matrix.
    pub fn matrix_norm(&self) -> f64 {
        self.matrix_norm
    }

    /// Applies the gauge `u_α → u_α·e^{iτ_α}`, `λ_α → λ_α·e^{2iτ_α}`.
    pub fn with_gauge(&self, taus: &[f64]) -> Self {
        assert_eq!(taus.len(), self.order());
        let mut out = self.clone();
        for (alpha, &tau) in taus.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, tau);
            for p in 0..self.order() {
                out.u[(p, alpha)] *= ph;
            }
            out.lambda[alpha] *= ph * ph;
        }
        out
    }

    /// `max |U^T·L·U − diag(λ)|`.
    pub fn diagonalization_error(&self, l: &ComplexMatrix) -> f64 {
        let d = &(&self.u.transpose() * l) * &self.u;
        let mut err = 0.0f64;
        for i in 0..self.order() {
            for j in 0..self.order() {
                let target = if i == j {
                    self.lambda[i]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                err = err.max((d[(i, j)] - target).norm());
            }
        }
        err
    }

    /// `max |U^†·U − I|`.
    pub fn unitarity_error(&self) -> f64 {
        let g = &self.u.adjoint() * &self.u;
        g.sub(&ComplexMatrix::identity(self.order())).max_abs()
    }
}

pub fn takagi_decompose(l: &ComplexMatrix, degeneracy_rel_tol: f64) -> Result<TakagiDecomposition> {
    takagi_decompose_with(l, degeneracy_rel_tol, DEFAULT_MAX_SWEEPS)
}

pub fn takagi_decompose_with(
    l: &ComplexMatrix,
    degeneracy_rel_tol: f64,
    max_sweeps: usize,
) -> Result<TakagiDecomposition> {
    let n = l.order();
    let matrix_norm = l.frobenius_norm();
    let deviation = l.symmetry_deviation();
    if !l.is_finite() || deviation > SYMMETRY_TOL * matrix_norm {
        return Err(Error::NotSymmetric { deviation });
    }

    let columns = takagi_columns(l, degeneracy_rel_tol, max_sweeps)?;

    let mut modes: Vec<(Vec<Complex64>, Complex64)> = columns
        .into_iter()
        .map(|mut u| {
            canonicalize_phase(&mut u);
            let lam = dot(&u, &l.mul_vec(&u));
            (u, lam)
        })
        .collect();
    modes.sort_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()));

    let mut residual = 0.0f64;
    for (u, lam) in &modes {
        let lu = l.mul_vec(u);
        let r: f64 = lu
            .iter()
            .zip(u)
            .map(|(a, b)| (a - lam * b.conj()).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r);
    }

    let u = ComplexMatrix::from_fn(n, |i, j| modes[j].0[i]);
    let lambda: Vec<Complex64> = modes.iter().map(|m| m.1).collect();
    let sigma = lambda.iter().map(|z| z.norm_sqr()).collect();
    Ok(TakagiDecomposition {
        u,
        lambda,
        sigma,
        residual,
        matrix_norm,
    })
}

/// Rotates `u` so that its largest-magnitude component (first one, up to
/// rounding) is real and positive.
fn canonicalize_phase(u: &mut [Complex64]) {
    let max = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let k = u
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let ph = u[k].conj() / u[k].norm();
    for z in u.iter_mut() {
        *z *= ph;
    }
    u[k] = Complex64::new(u[k].norm(), 0.0);
}

/// Orthonormal Takagi vectors of the symmetric matrix `m` (unsorted, phases free).
fn takagi_columns(m: &ComplexMatrix, tol: f64, max_sweeps: usize) -> Result<Vec<Vec<Complex64>>> {
    let n = m.order();
    if n <= 1 || m.max_abs() == 0.0 {
        return Ok(unit_columns(n));
    }
    let h = (&m.adjoint() * m).hermitian_part();
    let eig = hermitian_eigendecomposition_with(&h, max_sweeps)?;
    let sigma: Vec<f64> = eig.values.iter().map(|s| s.max(0.0)).collect();

    let floor = m.frobenius_norm().powi(2) * 1e-300;
    let gap = tol * sigma[n - 1].max(floor);
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for k in 1..n {
        if sigma[k] - sigma[k - 1] <= gap {
            clusters.last_mut().unwrap().push(k);
        } else {
            clusters.push(vec![k]);
        }
    }

    if clusters.len() == 1 {
        let s = (sigma.iter().sum::<f64>() / n as f64).sqrt();
        return degenerate_cluster(m, s, max_sweeps);
    }

    let mut out = Vec::with_capacity(n);
    for cluster in clusters {
        let basis: Vec<Vec<Complex64>> = cluster.iter().map(|&k| eig.vectors.column(k)).collect();
        if basis.len() == 1 {
            out.extend(basis);
            continue;
        }
        let reduced = reduce(m, &basis);
        for c in takagi_columns(&reduced, tol, max_sweeps)? {
            out.push(lift(&basis, &c));
        }
    }
    Ok(out)
}

/// Takagi vectors of a symmetric `b` whose singular values all equal `s`.
fn degenerate_cluster(b: &ComplexMatrix, s: f64, max_sweeps: usize) -> Result<Vec<Vec<Complex64>>> {
    let k = b.order();
    if k <= 1 || s <= 1e-300 {
        return Ok(unit_columns(k));
    }
    // Real symmetric: eigenvectors are real, so B·u = μ·u = μ·u*.
    if b.entries().iter().all(|z| z.im == 0.0) {
        let eig = hermitian_eigendecomposition_with(b, max_sweeps)?;
        return Ok((0..k).map(|j| eig.vectors.column(j)).collect());
    }

    let seed = |j: usize, theta: f64| -> Vec<Complex64> {
        let e = Complex64::from_polar(s, theta);
        let mut v: Vec<Complex64> = b.column(j).iter().map(|z| z.conj()).collect();
        v[j] += e;
        v
    };

    let mut worst = f64::INFINITY;
    if k == 2 {
        // v_i = (B·e_i)* + √σ·e^{iθ}·e_i with a common phase θ keeps (v_2, v_1)
        // real, so one Gram-Schmidt step preserves the Takagi relation.
        for attempt in 0..=CONSTRUCTION_RETRIES {
            let theta = attempt as f64 * FRAC_PI_4;
            let v1 = seed(0, theta);
            let v2 = seed(1, theta);
            let n1 = norm(&v1);
            if n1 <= CONSTRUCTION_TOL * s {
                worst = worst.min(n1);
                continue;
            }
            let u1: Vec<Complex64> = v1.iter().map(|z| z / n1).collect();
            let proj = inner(&u1, &v2);
            let y: Vec<Complex64> = v2.iter().zip(&u1).map(|(a, b)| a - proj * b).collect();
            let ny = norm(&y);
            if ny <= CONSTRUCTION_TOL * s {
                worst = worst.min(ny);
                continue;
            }
            let u2 = y.iter().map(|z| z / ny).collect();
            return Ok(vec![u1, u2]);
        }
        return Err(Error::DegenerateConstruction { norm: worst });
    }

    // k > 2: build one vector, then deflate to its orthogonal complement,
    // which B maps onto the conjugate complement.
    for attempt in 0..=CONSTRUCTION_RETRIES {
        let theta = attempt as f64 * FRAC_PI_4;
        let (v, nv) = (0..k)
            .map(|j| {
                let v = seed(j, theta);
                let nv = norm(&v);
                (v, nv)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if nv <= CONSTRUCTION_TOL * s {
            worst = worst.min(nv);
            continue;
        }
        let w: Vec<Complex64> = v.iter().map(|z| z / nv).collect();
        let complement = orthogonal_complement(&w);
        let reduced = reduce(b, &complement);
        let mut out = vec![w];
        for c in degenerate_cluster(&reduced, s, max_sweeps)? {
            out.push(lift(&complement, &c));
        }
        return Ok(out);
    }
    Err(Error::DegenerateConstruction { norm: worst })
}

/// Orthonormal basis of `{x : w^† x = 0}` for unit `w`.
fn orthogonal_complement(w: &[Complex64]) -> Vec<Vec<Complex64>> {
    let k = w.len();
    let drop = (0..k)
        .max_by(|&a, &b| w[a].norm().total_cmp(&w[b].norm()))
        .unwrap();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k - 1);
    for j in (0..k).filter(|&j| j != drop) {
        let mut x = vec![Complex64::new(0.0, 0.0); k];
        x[j] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in std::iter::once(w).chain(basis.iter().map(|b| b.as_slice())) {
                let c = inner(q, &x);
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= c * qi;
                }
            }
        }
        let nx = norm(&x);
        basis.push(x.into_iter().map(|z| z / nx).collect());
    }
    basis
}

/// `Ψ^T·M·Ψ`, symmetrized.
fn reduce(m: &ComplexMatrix, basis: &[Vec<Complex64>]) -> ComplexMatrix {
    let k = basis.len();
    let images: Vec<Vec<Complex64>> = basis.iter().map(|b| m.mul_vec(b)).collect();
    let raw = ComplexMatrix::from_fn(k, |i, j| dot(&basis[i], &images[j]));
    ComplexMatrix::from_fn(k, |i, j| (raw[(i, j)] + raw[(j, i)]) * 0.5)
}

fn lift(basis: &[Vec<Complex64>], coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = basis[0].len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (b, &c) in basis.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

fn unit_columns(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect()
}

/// Zero modes of a Laplacian's factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeClassification {
    /// Indices `α` with `σ_α ≤ threshold`.
    pub zero_indices: Vec<usize>,
    /// The zero mode closest to the constant vector.
    pub trivial_index: usize,
    pub nontrivial_zero_count: usize,
    pub threshold: f64,
    /// `|⟨u_trivial, ψ₁⟩|` with `ψ₁ = (1,…,1)/√n`.
    pub trivial_overlap: f64,
}

impl ZeroModeClassification {
    pub fn is_zero_mode(&self, alpha: usize) -> bool {
        self.zero_indices.contains(&alpha)
    }
}

pub fn classify_zero_modes(
    d: &TakagiDecomposition,
    zero_rel_tol: f64,
) -> Result<ZeroModeClassification> {
    let n = d.order();
    let sigma_max = d.sigma().iter().copied().fold(0.0, f64::max);
    let threshold = zero_rel_tol * sigma_max;
    let zero_indices: Vec<usize> = (0..n).filter(|&a| d.sigma()[a] <= threshold).collect();

    let psi = 1.0 / (n as f64).sqrt();
    let overlap = |alpha: usize| -> f64 {
        (0..n)
            .map(|p| d.component(alpha, p).conj())
            .sum::<Complex64>()
            .norm()
            * psi
    };
    let Some((trivial_index, best)) = zero_indices
        .iter()
        .map(|&a| (a, overlap(a)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return Err(Error::NoTrivialZero { overlap: 0.0 });
    };
    // With several exact zeros the constant vector may be spread over the
    // null-space basis; accept it when it lies in that span.
    let in_span = zero_indices
        .iter()
        .map(|&a| overlap(a).powi(2))
        .sum::<f64>()
        .sqrt();
    if best < 0.99 && in_span < 0.99 {
        return Err(Error::NoTrivialZero { overlap: best });
    }
    Ok(ZeroModeClassification {
        nontrivial_zero_count: zero_indices.len() - 1,
        zero_indices,
        trivial_index,
        threshold,
        trivial_overlap: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplacian::{assemble_laplacian, AngularFrequency};
    use crate::netmodel::parse_netlist;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn triangle() -> ComplexMatrix {
        let net = parse_netlist(
            "NET 3\nZ 1 2 0 1.7320508075688772\nZ 2 3 0 -1.7320508075688772\nZ 3 1 1 0",
        )
        .unwrap();
        assemble_laplacian(&net, AngularFrequency::new(1.0).unwrap()).unwrap()
    }

    fn random_symmetric(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z;
            }
        }
        m
    }

    #[test]
    fn identity_eigen() {
        let e = hermitian_eigendecomposition(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn hermitian_eigen_residuals() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 7, 20] {
            let a = random_symmetric(&mut rng, n);
            let h = (&a.adjoint() * &a).hermitian_part();
            let e = hermitian_eigendecomposition(&h).unwrap();
            let hn = h.frobenius_norm();
            for k in 0..n {
                let v = e.vectors.column(k);
                let hv = h.mul_vec(&v);
                let r: f64 = hv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * e.values[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(r <= 1e-12 * hn, "n={n} r={r}");
            }
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let g = &e.vectors.adjoint() * &e.vectors;
            assert!(g.sub(&ComplexMatrix::identity(n)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn convergence_budget_is_enforced() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = random_symmetric(&mut rng, 6);
        let h = (&a.adjoint() * &a).hermitian_part();
        assert_eq!(
            hermitian_eigendecomposition_with(&h, 1).unwrap_err(),
            Error::Convergence { sweeps: 1 }
        );
    }

    #[test]
    fn triangle_spectrum_of_gram_matrix() {
        let l = triangle();
        let h = (&l.adjoint() * &l).hermitian_part();
        let e = hermitian_eigendecomposition(&h).unwrap();
        let s2 = 2f64.sqrt();
        let expected = [0.0, 3.0 - 2.0 * s2, 3.0 + 2.0 * s2];
        for (got, want) in e.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn equal_ring_gram_spectrum() {
        let n = 7;
        let net = crate::netmodel::ring_network(
            n,
            &vec![crate::netmodel::Element::FixedImpedance(c(1.0, 0.0)); n],
        )
        .unwrap();
        let l = assemble_laplacian(&net, AngularFrequency::new(1.0).unwrap()).unwrap();
        let h = (&l.adjoint() * &l).hermitian_part();
        let e = hermitian_eigendecomposition(&h).unwrap();
        let mut expected: Vec<f64> = (0..n)
            .map(|k| {
                let mu = 2.0 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos());
                mu * mu
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        for (got, want) in e.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_takagi_magnitudes_and_phases() {
        let l = triangle();
        let d = takagi_decompose(&l, DEFAULT_DEGENERACY_REL_TOL).unwrap();
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        assert!(d.lambda()[0].norm() < 1e-14);
        assert!((d.lambda()[1].norm() - (s2 - 1.0)).abs() < 1e-13);
        assert!((d.lambda()[2].norm() - (s2 + 1.0)).abs() < 1e-13);

        // Re-gauge u_2, u_3 onto the printed eigenvectors (last component real
        // positive for ψ₂, real negative for ψ₃) before comparing phases.
        let printed_phase = [
            c(3.0 * s2 - 2.0, s3 * (2.0 * s2 + 1.0)) / 7.0,
            c(3.0 * s2 + 2.0, s3 * (2.0 * s2 - 1.0)) / 7.0,
        ];
        let printed_last = [2.0 * s2 - 1.0, -2.0 * s2 - 1.0];
        for (k, alpha) in [1usize, 2].into_iter().enumerate() {
            let u = d.vector(alpha);
            let tau = -(u[2] / printed_last[k]).arg();
            let g = d.with_gauge(&[
                0.0,
                if alpha == 1 { tau } else { 0.0 },
                if alpha == 2 { tau } else { 0.0 },
            ]);
            let phase = g.lambda()[alpha] / g.lambda()[alpha].norm();
            assert!(
                (phase - printed_phase[k]).norm() < 1e-12,
                "alpha={alpha}: {phase}"
            );
        }
    }

    #[test]
    fn real_input_gives_real_vectors() {
        let net = parse_netlist("NET 3\nR 1 2 1\nR 2 3 1").unwrap();
        let l = assemble_laplacian(&net, AngularFrequency::new(1.0).unwrap()).unwrap();
        let d = takagi_decompose(&l, DEFAULT_DEGENERACY_REL_TOL).unwrap();
        for alpha in 0..3 {
            assert!(d.lambda()[alpha].im.abs() < 1e-12);
            assert!(d.vector(alpha).iter().all(|z| z.im.abs() < 1e-12));
        }
        // Path graph P3 Laplacian eigenvalues 0, 1, 3.
        let lam: Vec<f64> = d.lambda().iter().map(|z| z.re).collect();
        for (got, want) in lam.iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_two_fold_cluster_uses_construction() {
        // Complex-scaled periodic ring: every nonzero σ has multiplicity 2.
        let n = 5;
        let z = c(0.3, -1.1);
        let net =
            crate::netmodel::ring_network(n, &vec![crate::netmodel::Element::FixedImpedance(z); n])
                .unwrap();
        let l = assemble_laplacian(&net, AngularFrequency::new(1.0).unwrap()).unwrap();
        let d = takagi_decompose(&l, DEFAULT_DEGENERACY_REL_TOL).unwrap();
        let ln = l.frobenius_norm();
        assert!(d.residual() <= 1e-12 * ln);
        assert!(d.unitarity_error() <= 1e-12);
        assert!(d.diagonalization_error(&l) <= 1e-12 * ln);
    }

    #[test]
    fn two_by_two_construction() {
        let s = 2.0;
        let bi =
            ComplexMatrix::from_row_major(2, vec![c(0.0, 0.0), c(0.0, s), c(0.0, s), c(0.0, 0.0)]);
        let cols = degenerate_cluster(&bi, s, DEFAULT_MAX_SWEEPS).unwrap();
        for u in &cols {
            let lam = dot(u, &bi.mul_vec(u));
            let r: f64 = bi
                .mul_vec(u)
                .iter()
                .zip(u)
                .map(|(a, x)| (a - lam * x.conj()).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-13);
        }
        assert!(inner(&cols[0], &cols[1]).norm() < 1e-14);
    }

    #[test]
    fn higher_degeneracy_via_deflation() {
        // A symmetric unitary matrix times s: all singular values equal.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for k in [3, 4, 6] {
            let a = random_symmetric(&mut rng, k);
            // Symmetric unitary: W^T W for unitary W from a Takagi factorization.
            let d = takagi_decompose(&a, DEFAULT_DEGENERACY_REL_TOL).unwrap();
            let w = d.u().adjoint();
            let su = &w.transpose() * &w;
            let m = su.scale(c(1.5, 0.0));
            let t = takagi_decompose(&m, DEFAULT_DEGENERACY_REL_TOL).unwrap();
            assert!(
                t.residual() < 1e-12 * m.frobenius_norm(),
                "k={k} {}",
                t.residual()
            );
            assert!(t.unitarity_error() < 1e-12);
            for s in t.sigma() {
                assert!((s - 2.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = ComplexMatrix::from_row_major(
            2,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        assert!(matches!(
            takagi_decompose(&m, 1e-8),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn gauge_changes_preserve_relation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let l = random_symmetric(&mut rng, 8);
        let d = takagi_decompose(&l, 1e-8).unwrap();
        let taus: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..6.3)).collect();
        let g = d.with_gauge(&taus);
        assert!(g.diagonalization_error(&l) < 1e-12 * l.frobenius_norm());
    }

    #[test]
    fn zero_mode_classification() {
        let w1 = AngularFrequency::new(1.0).unwrap();
        let d = takagi_decompose(&triangle(), 1e-8).unwrap();
        let z = classify_zero_modes(&d, DEFAULT_ZERO_REL_TOL).unwrap();
        assert_eq!(z.zero_indices, vec![0]);
        assert_eq!(z.trivial_index, 0);
        assert_eq!(z.nontrivial_zero_count, 0);
        assert!(z.trivial_overlap >= 1.0 - 1e-8);

        let lc = parse_netlist("NET 2\nL 1 2 1\nC 1 2 1").unwrap();
        let d = takagi_decompose(&assemble_laplacian(&lc, w1).unwrap(), 1e-8).unwrap();
        let z = classify_zero_modes(&d, DEFAULT_ZERO_REL_TOL).unwrap();
        assert_eq!(z.zero_indices.len(), 2);
        assert_eq!(z.nontrivial_zero_count, 1);

        let r = parse_netlist("NET 2\nR 1 2 3").unwrap();
        let d = takagi_decompose(&assemble_laplacian(&r, w1).unwrap(), 1e-8).unwrap();
        let z = classify_zero_modes(&d, DEFAULT_ZERO_REL_TOL).unwrap();
        assert_eq!((z.zero_indices.len(), z.nontrivial_zero_count), (1, 0));

        // A nonsingular matrix has no zero mode at all.
        let m = ComplexMatrix::identity(3);
        let d = takagi_decompose(&m, 1e-8).unwrap();
        assert!(matches!(
            classify_zero_modes(&d, 1e-10),
            Err(Error::NoTrivialZero { .. })
        ));
    }
}
