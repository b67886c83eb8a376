//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes a netlist as text and returns a JSON string, so the page
//! needs nothing beyond `JSON.parse`. The same functions are plain Rust on
//! native targets, which is how they are tested.

use impnet_core::{
    parse_netlist, sweep_resonances, two_point_impedance, AngularFrequency, ImpedanceOptions,
    Network, SpectralSolution,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper bound on grid points per call; keeps the page responsive.
pub const MAX_POINTS: usize = 4000;

#[derive(Debug, Serialize, PartialEq)]
pub struct Curve {
    pub omega: Vec<f64>,
    /// `null` where the pair is resonant.
    pub z_re: Vec<Option<f64>>,
    pub z_im: Vec<Option<f64>>,
    pub min_sigma: Vec<f64>,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct PointResult {
    pub status: &'static str,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub resonant_mode_count: usize,
    pub divergent_coefficient: Option<f64>,
    pub near_resonance: bool,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct Resonances {
    pub omegas: Vec<f64>,
    pub residuals: Vec<f64>,
}

fn parse(netlist: &str) -> Result<Network, String> {
    parse_netlist(netlist).map_err(|e| e.to_string())
}

fn check_range(lo: f64, hi: f64, points: usize) -> Result<(), String> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(format!("invalid frequency range [{lo}, {hi}]"));
    }
    if !(3..=MAX_POINTS).contains(&points) {
        return Err(format!(
            "points must be between 3 and {MAX_POINTS}, got {points}"
        ));
    }
    Ok(())
}

pub fn impedance_at_impl(
    netlist: &str,
    p: usize,
    q: usize,
    omega: f64,
) -> Result<PointResult, String> {
    let net = parse(netlist)?;
    let w = AngularFrequency::new(omega).map_err(|e| e.to_string())?;
    let r = two_point_impedance(&net, w, p, q).map_err(|e| e.to_string())?;
    let finite = r.is_finite();
    Ok(PointResult {
        status: if finite { "finite" } else { "resonant" },
        z_re: finite.then_some(r.value.re),
        z_im: finite.then_some(r.value.im),
        resonant_mode_count: r.resonant_mode_count,
        divergent_coefficient: r.divergent_coefficient,
        near_resonance: r.near_resonance,
    })
}

/// `Z_pq(ω)` and the smallest nontrivial σ on a log grid.
pub fn impedance_curve_impl(
    netlist: &str,
    p: usize,
    q: usize,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> Result<Curve, String> {
    let net = parse(netlist)?;
    check_range(omega_min, omega_max, points)?;
    for node in [p, q] {
        net.check_node(node).map_err(|e| e.to_string())?;
    }
    if p == q {
        return Err(format!("pick two different nodes (got {p} twice)"));
    }
    let opts = ImpedanceOptions::default();
    let omega = impnet_core::log_grid(omega_min, omega_max, points);
    let mut curve = Curve {
        omega: Vec::with_capacity(points),
        z_re: Vec::with_capacity(points),
        z_im: Vec::with_capacity(points),
        min_sigma: Vec::with_capacity(points),
    };
    for w in omega {
        let sol = SpectralSolution::new(
            &net,
            AngularFrequency::new(w).map_err(|e| e.to_string())?,
            &opts,
        )
        .map_err(|e| e.to_string())?;
        let r = sol.impedance(p, q).map_err(|e| e.to_string())?;
        let finite = r.is_finite();
        curve.omega.push(w);
        curve.z_re.push(finite.then_some(r.value.re));
        curve.z_im.push(finite.then_some(r.value.im));
        curve.min_sigma.push(sol.min_nontrivial_sigma());
    }
    Ok(curve)
}

pub fn find_resonances_impl(
    netlist: &str,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> Result<Resonances, String> {
    let net = parse(netlist)?;
    check_range(omega_min, omega_max, points)?;
    let to_w = |x: f64| AngularFrequency::new(x).map_err(|e| e.to_string());
    let report = sweep_resonances(&net, to_w(omega_min)?, to_w(omega_max)?, points, true)
        .map_err(|e| e.to_string())?;
    Ok(Resonances {
        omegas: report.omegas,
        residuals: report.residuals,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

/// Impedance between nodes `p` and `q` at angular frequency `omega`.
#[wasm_bindgen]
pub fn impedance_at(netlist: &str, p: usize, q: usize, omega: f64) -> Result<String, JsError> {
    to_js(impedance_at_impl(netlist, p, q, omega))
}

#[wasm_bindgen]
pub fn impedance_curve(
    netlist: &str,
    p: usize,
    q: usize,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> Result<String, JsError> {
    to_js(impedance_curve_impl(
        netlist, p, q, omega_min, omega_max, points,
    ))
}

#[wasm_bindgen]
pub fn find_resonances(
    netlist: &str,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> Result<String, JsError> {
    to_js(find_resonances_impl(netlist, omega_min, omega_max, points))
}
