//! Reference impedances from a direct Kirchhoff solve.
//!
//! One node is grounded (`V = 0`), a unit current enters at `p` and leaves at
//! `q`, and the remaining `N − 1` potentials come from dense LU with partial
//! pivoting. This path shares nothing with the spectral one beyond the
//! Laplacian assembly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laplacian::{assemble_laplacian, AngularFrequency};
use crate::matrix::ComplexMatrix;
use crate::netmodel::Network;

/// Pivots smaller than this fraction of the largest matrix entry mark the
/// grounded system as singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

/// Laplacian with the grounded node's row and column removed.
#[derive(Debug, Clone)]
pub struct GroundedSystem {
    pub reduced_matrix: ComplexMatrix,
    /// 1-based.
    pub ground: usize,
}

impl GroundedSystem {
    pub fn new(lap: &ComplexMatrix, ground: usize) -> Self {
        Self {
            reduced_matrix: lap.minor(ground - 1),
            ground,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectSolution {
    pub impedance: Complex64,
    /// All node potentials (index `k` is node `k + 1`), grounded node at 0.
    pub potentials: Vec<Complex64>,
    pub p: usize,
    pub q: usize,
    /// Smallest pivot over largest entry.
    pub pivot_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DirectOutcome {
    Solved(DirectSolution),
    /// The grounded system is numerically singular: the network is at resonance.
    SingularSystem {
        pivot_ratio: f64,
    },
}

impl DirectOutcome {
    pub fn impedance(&self) -> Option<Complex64> {
        match self {
            DirectOutcome::Solved(s) => Some(s.impedance),
            DirectOutcome::SingularSystem { .. } => None,
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, DirectOutcome::SingularSystem { .. })
    }
}

/// In-place LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
    pivot_ratio: f64,
}

impl LuFactors {
    pub fn new(a: &ComplexMatrix) -> Self {
        let n = a.order();
        let scale = a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap();
            if piv != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
                perm.swap(k, piv);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            min_pivot = min_pivot.min(pivot.norm());
            if pivot.norm() == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] -= f * t;
                }
            }
        }
        let pivot_ratio = if n == 0 {
            1.0
        } else if scale == 0.0 {
            0.0
        } else {
            min_pivot / scale
        };
        Self {
            lu,
            perm,
            swaps,
            pivot_ratio,
        }
    }

    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    pub fn is_singular(&self) -> bool {
        self.pivot_ratio < SINGULAR_PIVOT_RATIO
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.lu.order();
        let mut det = if self.swaps.is_multiple_of(2) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        for k in 0..n {
            det *= self.lu[(k, k)];
        }
        det
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.order();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(i, j)] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[(i, j)] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// `Z_pq` with node `q` grounded, so that `Z_pq = V_p`.
pub fn solve_direct(
    net: &Network,
    omega: AngularFrequency,
    p: usize,
    q: usize,
) -> Result<DirectOutcome> {
    solve_direct_grounded(net, omega, p, q, q)
}

/// `Z_pq = V_p − V_q` with an arbitrary grounded node.
pub fn solve_direct_grounded(
    net: &Network,
    omega: AngularFrequency,
    p: usize,
    q: usize,
    ground: usize,
) -> Result<DirectOutcome> {
    for node in [p, q, ground] {
        net.check_node(node)?;
    }
    if p == q {
        return Err(Error::Validation(format!(
            "impedance needs two distinct nodes, got {p} twice"
        )));
    }
    let lap = assemble_laplacian(net, omega)?;
    let sys = GroundedSystem::new(&lap, ground);
    let lu = LuFactors::new(&sys.reduced_matrix);
    if lu.is_singular() {
        return Ok(DirectOutcome::SingularSystem {
            pivot_ratio: lu.pivot_ratio(),
        });
    }

    let n = net.node_count();
    let reduced_index = |node: usize| if node < ground { node - 1 } else { node - 2 };
    let mut rhs = vec![Complex64::new(0.0, 0.0); n - 1];
    if p != ground {
        rhs[reduced_index(p)] += 1.0;
    }
    if q != ground {
        rhs[reduced_index(q)] -= 1.0;
    }
    let x = lu.solve(&rhs);
    let mut potentials = vec![Complex64::new(0.0, 0.0); n];
    for node in (1..=n).filter(|&k| k != ground) {
        potentials[node - 1] = x[reduced_index(node)];
    }
    Ok(DirectOutcome::Solved(DirectSolution {
        impedance: potentials[p - 1] - potentials[q - 1],
        potentials,
        p,
        q,
        pivot_ratio: lu.pivot_ratio(),
    }))
}

/// `I = L·V`.
pub fn node_currents(
    net: &Network,
    omega: AngularFrequency,
    potentials: &[Complex64],
) -> Result<Vec<Complex64>> {
    if potentials.len() != net.node_count() {
        return Err(Error::Validation(format!(
            "expected {} potentials, got {}",
            net.node_count(),
            potentials.len()
        )));
    }
    Ok(assemble_laplacian(net, omega)?.mul_vec(potentials))
}

/// Largest deviation of `L·V` from the injected currents `+1` at `p`, `−1` at
/// `q` and `0` elsewhere.
pub fn check_current_conservation(
    net: &Network,
    omega: AngularFrequency,
    solution: &DirectSolution,
) -> Result<f64> {
    let currents = node_currents(net, omega, &solution.potentials)?;
    Ok(currents
        .iter()
        .enumerate()
        .map(|(k, i)| {
            let node = k + 1;
            let injected = if node == solution.p {
                1.0
            } else if node == solution.q {
                -1.0
            } else {
                0.0
            };
            (i - injected).norm()
        })
        .fold(0.0, f64::max))
}
