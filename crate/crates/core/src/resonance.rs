//! Resonance frequencies: closed forms for rings and rectangular LC nets, and
//! a numerical sweep over the smallest nontrivial `σ(ω)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::impedance::{ImpedanceOptions, SpectralSolution};
use crate::laplacian::{assemble_laplacian, AngularFrequency};
use crate::netmodel::{ring_network, Element, Network};
use crate::oracle::LuFactors;

/// Frequencies closer than this (relative) are reported once.
pub const MERGE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonanceMethod {
    Analytic,
    SweepRefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceReport {
    /// Strictly ascending angular frequencies.
    pub omegas: Vec<f64>,
    /// Smallest nontrivial `σ` at each frequency (0 for analytic entries).
    pub residuals: Vec<f64>,
    pub method: ResonanceMethod,
    pub distinct_count: usize,
    /// Number of frequencies before merging.
    pub raw_count: usize,
}

impl ResonanceReport {
    fn merged(mut found: Vec<(f64, f64)>, method: ResonanceMethod) -> Self {
        let raw_count = found.len();
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(found.len());
        for (w, r) in found {
            match out.last_mut() {
                Some(last) if (w - last.0).abs() <= MERGE_REL_TOL * w.abs().max(last.0.abs()) => {
                    if r < last.1 {
                        *last = (w, r);
                    }
                }
                _ => out.push((w, r)),
            }
        }
        Self {
            distinct_count: out.len(),
            omegas: out.iter().map(|x| x.0).collect(),
            residuals: out.iter().map(|x| x.1).collect(),
            method,
            raw_count,
        }
    }
}

/// `ω_mn = |sin(nπ/2N) / sin(mπ/2M)| / √(LC)` for `m < M`, `n < N` on a free
/// `M × N` net with capacitors along M and inductors along N.
pub fn grid_resonances_analytic(
    m: usize,
    n: usize,
    inductance: f64,
    capacitance: f64,
) -> Result<ResonanceReport> {
    if m < 2 || n < 2 {
        return Err(Error::Validation(format!(
            "grid must be at least 2x2, got {m}x{n}"
        )));
    }
    for v in [inductance, capacitance] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Validation(format!(
                "inductance and capacitance must be positive, got {v}"
            )));
        }
    }
    let base = 1.0 / (inductance * capacitance).sqrt();
    let mut found = Vec::with_capacity((m - 1) * (n - 1));
    for i in 1..m {
        for j in 1..n {
            let ratio =
                (j as f64 * PI / (2.0 * n as f64)).sin() / (i as f64 * PI / (2.0 * m as f64)).sin();
            found.push((ratio.abs() * base, 0.0));
        }
    }
    Ok(ResonanceReport::merged(found, ResonanceMethod::Analytic))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRuleCheck {
    pub is_resonant: bool,
    /// `Σ x_k` with `x = ωL` for inductors and `x = −1/(ωC)` for capacitors.
    pub reactance_sum: f64,
}

fn reactances(elements: &[Element], omega: AngularFrequency) -> Result<Vec<f64>> {
    let w = omega.value();
    elements
        .iter()
        .map(|e| {
            e.validate()?;
            match *e {
                Element::Inductor(l) => Ok(w * l),
                Element::Capacitor(c) => Ok(-1.0 / (w * c)),
                _ => Err(Error::Validation(
                    "ring reactance checks accept only inductors and capacitors".into(),
                )),
            }
        })
        .collect()
}

/// A ring of pure reactances resonates where the reactances sum to zero.
pub fn ring_reactance_resonance_check(
    elements: &[Element],
    omega: AngularFrequency,
) -> Result<SumRuleCheck> {
    let x = reactances(elements, omega)?;
    let sum: f64 = x.iter().sum();
    let scale: f64 = x.iter().map(|v| v.abs()).sum();
    Ok(SumRuleCheck {
        is_resonant: sum.abs() <= 1e-9 * scale,
        reactance_sum: sum,
    })
}

/// Compares the product of the nonzero Laplacian eigenvalues of a reactance
/// ring with `N·(−j)^{N−1}·(x₁+⋯+x_N)/(x₁⋯x_N)` and returns the relative
/// deviation. The product is taken as `N` times the determinant of a grounded
/// minor (matrix-tree theorem).
pub fn eigenvalue_product_identity_check(
    elements: &[Element],
    omega: AngularFrequency,
) -> Result<f64> {
    let n = elements.len();
    let x = reactances(elements, omega)?;
    let sum: f64 = x.iter().sum();
    let scale: f64 = x.iter().map(|v| v.abs()).sum();
    let deviation = sum.abs() / scale;
    if deviation <= 1e-8 {
        return Err(Error::NearSingular { deviation });
    }
    let net = ring_network(n, elements)?;
    let lap = assemble_laplacian(&net, omega)?;
    let product = LuFactors::new(&lap.minor(0)).determinant() * n as f64;

    let closed =
        Complex64::new(0.0, -1.0).powu(n as u32 - 1) * (n as f64 * sum) / x.iter().product::<f64>();
    Ok((product - closed).norm() / closed.norm())
}

/// Smallest `σ` of `L(ω)` over all modes except the constant one.
pub fn smallest_nontrivial_sigma(
    net: &Network,
    omega: AngularFrequency,
    opts: &ImpedanceOptions,
) -> Result<f64> {
    Ok(SpectralSolution::new(net, omega, opts)?.min_nontrivial_sigma())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub spectral: ImpedanceOptions,
    /// A minimum counts as a resonance when its `σ` is below this fraction of
    /// the median `σ` over the grid.
    pub detection_rel: f64,
    /// Golden-section stops once the bracket is below this fraction of ω.
    pub omega_rel_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            spectral: ImpedanceOptions::default(),
            detection_rel: 1e-6,
            omega_rel_tol: 1e-10,
        }
    }
}

/// Log-spaced grid of `points` frequencies from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let ratio = hi / lo;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo * ratio.powf(i as f64 / (points - 1) as f64)
            }
        })
        .collect()
}

pub fn sweep_resonances(
    net: &Network,
    omega_lo: AngularFrequency,
    omega_hi: AngularFrequency,
    points: usize,
    refine: bool,
) -> Result<ResonanceReport> {
    sweep_resonances_with(
        net,
        omega_lo,
        omega_hi,
        points,
        refine,
        &SweepOptions::default(),
    )
}

/// Samples `s(ω)` on a log grid, golden-section refines every discrete local
/// minimum (when `refine`), and keeps the minima whose `σ` falls below
/// `detection_rel · median(s)`.
pub fn sweep_resonances_with(
    net: &Network,
    omega_lo: AngularFrequency,
    omega_hi: AngularFrequency,
    points: usize,
    refine: bool,
    opts: &SweepOptions,
) -> Result<ResonanceReport> {
    let (lo, hi) = (omega_lo.value(), omega_hi.value());
    if lo >= hi {
        return Err(Error::Validation(format!("empty sweep range [{lo}, {hi}]")));
    }
    if points < 3 {
        return Err(Error::Validation(format!(
            "sweep needs at least 3 points, got {points}"
        )));
    }
    let sigma_at = |w: f64| -> Result<f64> {
        smallest_nontrivial_sigma(net, AngularFrequency::new(w)?, &opts.spectral)
    };
    let grid = log_grid(lo, hi, points);
    let s: Vec<f64> = grid.iter().map(|&w| sigma_at(w)).collect::<Result<_>>()?;

    let mut sorted = s.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if points % 2 == 1 {
        sorted[points / 2]
    } else {
        0.5 * (sorted[points / 2 - 1] + sorted[points / 2])
    };
    let threshold = opts.detection_rel * median;

    let mut found = Vec::new();
    for i in 0..points {
        let left_ok = i == 0 || s[i] < s[i - 1];
        let right_ok = i + 1 == points || s[i] <= s[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let (w, sig) = if refine {
            let a = grid[i.saturating_sub(1)];
            let b = grid[(i + 1).min(points - 1)];
            golden_section_min(a, b, opts.omega_rel_tol, &sigma_at, (grid[i], s[i]))?
        } else {
            (grid[i], s[i])
        };
        if sig <= threshold {
            found.push((w, sig));
        }
    }
    Ok(ResonanceReport::merged(
        found,
        ResonanceMethod::SweepRefined,
    ))
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` on `[a, b]` until the bracket is narrower than `rel_tol·ω`.
/// Returns the best point evaluated, including `seed`.
fn golden_section_min(
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
    f: &impl Fn(f64) -> Result<f64>,
    seed: (f64, f64),
) -> Result<(f64, f64)> {
    let mut best = seed;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a) <= rel_tol * 0.5 * (a + b) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    Ok(best)
}
