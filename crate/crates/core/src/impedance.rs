//! Two-point impedance from the Takagi factorization of `L(ω)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::laplacian::{assemble_laplacian, AngularFrequency};
use crate::netmodel::Network;
use crate::takagi::{
    classify_zero_modes, takagi_decompose, TakagiDecomposition, ZeroModeClassification,
    DEFAULT_DEGENERACY_REL_TOL, DEFAULT_ZERO_REL_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedanceOptions {
    /// Modes with `σ ≤ zero_rel_tol·σ_max` count as zero modes.
    pub zero_rel_tol: f64,
    pub degeneracy_rel_tol: f64,
}

impl Default for ImpedanceOptions {
    fn default() -> Self {
        Self {
            zero_rel_tol: DEFAULT_ZERO_REL_TOL,
            degeneracy_rel_tol: DEFAULT_DEGENERACY_REL_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpedanceStatus {
    Finite,
    Resonant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceResult {
    pub status: ImpedanceStatus,
    /// The impedance when finite; the principal sum over nonzero modes when resonant.
    pub value: Complex64,
    pub resonant_mode_count: usize,
    /// Largest `|(u_αp − u_αq)²|` over the zero modes, reported when resonant.
    pub divergent_coefficient: Option<f64>,
    pub omega: AngularFrequency,
    /// Set when the smallest nontrivial `σ` is within 10× of the zero threshold.
    pub near_resonance: bool,
}

impl ImpedanceResult {
    pub fn is_finite(&self) -> bool {
        self.status == ImpedanceStatus::Finite
    }
}

/// Factorization of `L(ω)` together with its zero-mode classification; shared
/// by every node pair of the network.
#[derive(Debug, Clone)]
pub struct SpectralSolution {
    omega: AngularFrequency,
    node_count: usize,
    decomposition: TakagiDecomposition,
    zeros: ZeroModeClassification,
}

impl SpectralSolution {
    pub fn new(net: &Network, omega: AngularFrequency, opts: &ImpedanceOptions) -> Result<Self> {
        let lap = assemble_laplacian(net, omega)?;
        let decomposition = takagi_decompose(&lap, opts.degeneracy_rel_tol)?;
        Self::from_decomposition(decomposition, omega, opts.zero_rel_tol)
    }

    pub fn from_decomposition(
        decomposition: TakagiDecomposition,
        omega: AngularFrequency,
        zero_rel_tol: f64,
    ) -> Result<Self> {
        let zeros = classify_zero_modes(&decomposition, zero_rel_tol)?;
        Ok(Self {
            omega,
            node_count: decomposition.order(),
            decomposition,
            zeros,
        })
    }

    pub fn decomposition(&self) -> &TakagiDecomposition {
        &self.decomposition
    }

    pub fn zero_modes(&self) -> &ZeroModeClassification {
        &self.zeros
    }

    pub fn is_resonant(&self) -> bool {
        self.zeros.nontrivial_zero_count > 0
    }

    /// Smallest `σ` over all modes except the trivial one.
    pub fn min_nontrivial_sigma(&self) -> f64 {
        self.decomposition
            .sigma()
            .iter()
            .enumerate()
            .filter(|&(a, _)| a != self.zeros.trivial_index)
            .map(|(_, &s)| s)
            .fold(f64::INFINITY, f64::min)
    }

    /// `Z_pq` for 1-based nodes `p`, `q`.
    pub fn impedance(&self, p: usize, q: usize) -> Result<ImpedanceResult> {
        for node in [p, q] {
            if node == 0 || node > self.node_count {
                return Err(crate::Error::InvalidNode {
                    node,
                    node_count: self.node_count,
                });
            }
        }
        let (p, q) = (p - 1, q - 1);
        let resonant = self.is_resonant();
        let near_resonance =
            !resonant && self.min_nontrivial_sigma() <= 10.0 * self.zeros.threshold;
        if p == q {
            return Ok(ImpedanceResult {
                status: ImpedanceStatus::Finite,
                value: Complex64::new(0.0, 0.0),
                resonant_mode_count: self.zeros.nontrivial_zero_count,
                divergent_coefficient: None,
                omega: self.omega,
                near_resonance,
            });
        }

        let d = &self.decomposition;
        let diff = |alpha: usize| d.component(alpha, p) - d.component(alpha, q);
        let mut value = Complex64::new(0.0, 0.0);
        for alpha in 0..d.order() {
            if self.zeros.is_zero_mode(alpha) {
                continue;
            }
            // Analytic square, not |·|².
            let t = diff(alpha);
            value += t * t / d.lambda()[alpha];
        }

        // The trivial mode is included: its coefficient vanishes, and when the
        // null space is degenerate the constant vector may be mixed into it.
        let divergent_coefficient = resonant.then(|| {
            self.zeros
                .zero_indices
                .iter()
                .map(|&a| diff(a).norm_sqr())
                .fold(0.0, f64::max)
        });
        Ok(ImpedanceResult {
            status: if resonant {
                ImpedanceStatus::Resonant
            } else {
                ImpedanceStatus::Finite
            },
            value,
            resonant_mode_count: self.zeros.nontrivial_zero_count,
            divergent_coefficient,
            omega: self.omega,
            near_resonance,
        })
    }
}

pub fn two_point_impedance(
    net: &Network,
    omega: AngularFrequency,
    p: usize,
    q: usize,
) -> Result<ImpedanceResult> {
    two_point_impedance_with(net, omega, p, q, &ImpedanceOptions::default())
}

/// Requires `p ≠ q`, both in `1..=node_count`.
pub fn two_point_impedance_with(
    net: &Network,
    omega: AngularFrequency,
    p: usize,
    q: usize,
    opts: &ImpedanceOptions,
) -> Result<ImpedanceResult> {
    net.check_node(p)?;
    net.check_node(q)?;
    if p == q {
        return Err(crate::Error::Validation(format!(
            "impedance needs two distinct nodes, got {p} twice"
        )));
    }
    SpectralSolution::new(net, omega, opts)?.impedance(p, q)
}

/// All-pairs impedances from a single factorization.
#[derive(Debug, Clone)]
pub struct ImpedanceMatrix {
    node_count: usize,
    entries: Vec<ImpedanceResult>,
}

impl ImpedanceMatrix {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Entry for 1-based nodes `p`, `q`.
    pub fn get(&self, p: usize, q: usize) -> &ImpedanceResult {
        &self.entries[(p - 1) * self.node_count + (q - 1)]
    }
}

pub fn impedance_matrix(net: &Network, omega: AngularFrequency) -> Result<ImpedanceMatrix> {
    impedance_matrix_with(net, omega, &ImpedanceOptions::default())
}

/// Diagonal entries are `Finite 0`.
pub fn impedance_matrix_with(
    net: &Network,
    omega: AngularFrequency,
    opts: &ImpedanceOptions,
) -> Result<ImpedanceMatrix> {
    let sol = SpectralSolution::new(net, omega, opts)?;
    let n = net.node_count();
    let mut entries: Vec<ImpedanceResult> = Vec::with_capacity(n * n);
    for p in 1..=n {
        for q in 1..=n {
            entries.push(if q < p {
                entries[(q - 1) * n + (p - 1)].clone()
            } else {
                sol.impedance(p, q)?
            });
        }
    }
    Ok(ImpedanceMatrix {
        node_count: n,
        entries,
    })
}
