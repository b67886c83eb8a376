//! Effective two-point impedance of finite R/L/C networks.
//!
//! A network is described by its complex symmetric Laplacian `L(ω)`. Solving
//! `L·u = λ·u*` for an orthonormal set `u_α` (a Takagi factorization) gives the
//! impedance between nodes `p` and `q` as
//!
//! ```text
//! Z_pq = Σ_α (u_αp − u_αq)² / λ_α        (λ_α ≠ 0, trivial mode excluded)
//! ```
//!
//! and any additional vanishing `λ_α` signals an LC resonance.
//!
//! ```
//! use impnet_core::{parse_netlist, two_point_impedance, AngularFrequency};
//!
//! let net = parse_netlist("NET 3\nR 1 2 1\nR 2 3 2\n").unwrap();
//! let z = two_point_impedance(&net, AngularFrequency::new(1.0).unwrap(), 1, 3).unwrap();
//! assert!((z.value.re - 3.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod impedance;
pub mod laplacian;
pub mod matrix;
pub mod netmodel;
pub mod oracle;
pub mod resonance;
pub mod takagi;

pub use error::{Error, Result};
pub use impedance::{
    impedance_matrix, impedance_matrix_with, two_point_impedance, two_point_impedance_with,
    ImpedanceMatrix, ImpedanceOptions, ImpedanceResult, ImpedanceStatus, SpectralSolution,
};
pub use laplacian::{assemble_laplacian, branch_admittance, AngularFrequency};
pub use matrix::ComplexMatrix;
pub use netmodel::{
    grid_network, parse_netlist, random_network, ring_network, serialize_netlist, Boundary, Branch,
    Element, ElementKind, Network,
};
pub use num_complex::Complex64;
pub use oracle::{
    check_current_conservation, node_currents, solve_direct, solve_direct_grounded, DirectOutcome,
    DirectSolution, GroundedSystem, LuFactors,
};
pub use resonance::{
    eigenvalue_product_identity_check, grid_resonances_analytic, log_grid,
    ring_reactance_resonance_check, smallest_nontrivial_sigma, sweep_resonances,
    sweep_resonances_with, ResonanceMethod, ResonanceReport, SumRuleCheck, SweepOptions,
};
pub use takagi::{
    classify_zero_modes, hermitian_eigendecomposition, hermitian_eigendecomposition_with,
    takagi_decompose, takagi_decompose_with, HermitianEigen, TakagiDecomposition,
    ZeroModeClassification,
};
