use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use impnet_core::{
    grid_network, grid_resonances_analytic, log_grid, parse_netlist, random_network, ring_network,
    serialize_netlist, solve_direct, sweep_resonances_with, AngularFrequency, Boundary, Complex64,
    Element, ElementKind, ImpedanceOptions, ImpedanceResult, ImpedanceStatus, Network,
    ResonanceMethod, ResonanceReport, SpectralSolution, SweepOptions,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Format, Frequency, Range, Shape, SweepFormat, Tolerances};
use crate::format::{complex, csv_number, sig15};

pub const EXIT_OK: u8 = 0;
pub const EXIT_RESONANT: u8 = 2;
pub const EXIT_CHECK_FAILED: u8 = 3;

/// Largest spectral-vs-direct relative deviation accepted by `check`.
pub const CHECK_REL_TOL: f64 = 1e-8;

/// Everything a command prints to standard output, plus its exit code.
pub struct Report {
    pub stdout: String,
    pub exit: u8,
}

pub type CmdResult = Result<Report, String>;

fn err(e: impnet_core::Error) -> String {
    e.to_string()
}

pub fn load_netlist(path: &Path) -> Result<Network, String> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading standard input: {e}"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    parse_netlist(&text).map_err(err)
}

fn omega_of(f: &Frequency) -> Result<AngularFrequency, String> {
    match (f.omega, f.freq) {
        (Some(w), None) => AngularFrequency::new(w).map_err(err),
        (None, Some(hz)) => AngularFrequency::from_hz(hz).map_err(err),
        _ => Err("give exactly one of --omega and --freq".into()),
    }
}

fn options_of(t: &Tolerances) -> Result<ImpedanceOptions, String> {
    let mut opts = ImpedanceOptions::default();
    for (name, value, slot) in [
        ("--zero-rel-tol", t.zero_rel_tol, &mut opts.zero_rel_tol),
        (
            "--degeneracy-rel-tol",
            t.degeneracy_rel_tol,
            &mut opts.degeneracy_rel_tol,
        ),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(format!("{name} must lie in (0, 1), got {v}"));
            }
            *slot = v;
        }
    }
    Ok(opts)
}

fn status_word(r: &ImpedanceResult) -> &'static str {
    match r.status {
        ImpedanceStatus::Finite => "finite",
        ImpedanceStatus::Resonant => "resonant",
    }
}

#[derive(Serialize)]
struct ImpedanceJson {
    status: &'static str,
    z_re: Option<f64>,
    z_im: Option<f64>,
    omega: f64,
    resonant_mode_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    divergent_coefficient: Option<f64>,
}

impl From<&ImpedanceResult> for ImpedanceJson {
    fn from(r: &ImpedanceResult) -> Self {
        let finite = r.is_finite();
        Self {
            status: status_word(r),
            z_re: finite.then_some(r.value.re),
            z_im: finite.then_some(r.value.im),
            omega: r.omega.value(),
            resonant_mode_count: r.resonant_mode_count,
            divergent_coefficient: r.divergent_coefficient,
        }
    }
}

pub fn impedance(
    netlist: &Path,
    freq: &Frequency,
    pair: (usize, usize),
    format: Format,
    tol: &Tolerances,
) -> CmdResult {
    let net = load_netlist(netlist)?;
    let omega = omega_of(freq)?;
    let opts = options_of(tol)?;
    let (p, q) = pair;
    let r = impnet_core::two_point_impedance_with(&net, omega, p, q, &opts).map_err(err)?;
    if r.near_resonance {
        eprintln!(
            "warning: omega = {} is close to a resonance",
            sig15(omega.value())
        );
    }

    let mut out = String::new();
    match format {
        Format::Human => {
            let _ = writeln!(out, "Z({p},{q}) at omega = {} rad/s", sig15(omega.value()));
            match r.status {
                ImpedanceStatus::Finite => {
                    let _ = writeln!(out, "status: finite");
                    let _ = writeln!(out, "Z = {}", complex(r.value));
                    let _ = writeln!(out, "|Z| = {}", sig15(r.value.norm()));
                    let _ = writeln!(out, "phase = {} rad", sig15(r.value.arg()));
                }
                ImpedanceStatus::Resonant => {
                    let _ = writeln!(
                        out,
                        "status: RESONANT ({} nontrivial zero mode(s))",
                        r.resonant_mode_count
                    );
                    let _ = writeln!(
                        out,
                        "divergent coefficient = {}",
                        sig15(r.divergent_coefficient.unwrap_or(0.0))
                    );
                }
            }
        }
        Format::Json => {
            out = serde_json::to_string_pretty(&ImpedanceJson::from(&r)).expect("serializable");
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("p,q,omega,status,z_re,z_im,resonant_mode_count,divergent_coefficient\n");
            let (re, im) = if r.is_finite() {
                (csv_number(r.value.re), csv_number(r.value.im))
            } else {
                ("inf".into(), "inf".into())
            };
            let _ = writeln!(
                out,
                "{p},{q},{},{},{re},{im},{},{}",
                csv_number(omega.value()),
                status_word(&r),
                r.resonant_mode_count,
                r.divergent_coefficient.map(csv_number).unwrap_or_default()
            );
        }
    }
    Ok(Report {
        stdout: out,
        exit: if r.is_finite() {
            EXIT_OK
        } else {
            EXIT_RESONANT
        },
    })
}

fn check_range(range: &Range) -> Result<(), String> {
    let (lo, hi) = (range.omega_min, range.omega_max);
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(format!("invalid frequency range [{lo}, {hi}]"));
    }
    if range.points < 2 {
        return Err(format!("need at least 2 points, got {}", range.points));
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    omega: f64,
    z_re: Option<f64>,
    z_im: Option<f64>,
    min_sigma: f64,
    status: &'static str,
}

pub fn sweep(
    netlist: &Path,
    pair: (usize, usize),
    range: &Range,
    linear: bool,
    format: SweepFormat,
    tol: &Tolerances,
) -> CmdResult {
    let net = load_netlist(netlist)?;
    let opts = options_of(tol)?;
    check_range(range)?;
    let (p, q) = pair;
    net.check_node(p).map_err(err)?;
    net.check_node(q).map_err(err)?;
    if p == q {
        return Err(format!("impedance needs two distinct nodes, got {p} twice"));
    }

    let grid: Vec<f64> = if linear {
        let step = (range.omega_max - range.omega_min) / (range.points - 1) as f64;
        (0..range.points)
            .map(|i| {
                if i + 1 == range.points {
                    range.omega_max
                } else {
                    range.omega_min + step * i as f64
                }
            })
            .collect()
    } else {
        log_grid(range.omega_min, range.omega_max, range.points)
    };

    let mut rows = Vec::with_capacity(grid.len());
    for &w in &grid {
        let sol = SpectralSolution::new(&net, AngularFrequency::new(w).map_err(err)?, &opts)
            .map_err(err)?;
        let r = sol.impedance(p, q).map_err(err)?;
        let finite = r.is_finite();
        rows.push(SweepRow {
            omega: w,
            z_re: finite.then_some(r.value.re),
            z_im: finite.then_some(r.value.im),
            min_sigma: sol.min_nontrivial_sigma(),
            status: if finite { "ok" } else { "resonant" },
        });
    }

    let mut out = String::new();
    match format {
        SweepFormat::Csv => {
            out.push_str("omega,z_re,z_im,min_sigma,status\n");
            for row in &rows {
                let part = |v: Option<f64>| v.map(csv_number).unwrap_or_else(|| "inf".into());
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_number(row.omega),
                    part(row.z_re),
                    part(row.z_im),
                    csv_number(row.min_sigma),
                    row.status
                );
            }
        }
        SweepFormat::Json => {
            out = serde_json::to_string_pretty(&rows).expect("serializable");
            out.push('\n');
        }
    }
    Ok(Report {
        stdout: out,
        exit: EXIT_OK,
    })
}

#[derive(Serialize)]
struct ResonanceJson<'a> {
    method: &'static str,
    distinct_count: usize,
    raw_count: usize,
    omegas: &'a [f64],
    residuals: &'a [f64],
}

pub struct ResonanceSource<'a> {
    pub netlist: Option<&'a Path>,
    pub grid: Option<(usize, usize)>,
    pub inductance: f64,
    pub capacitance: f64,
}

pub fn resonances(
    source: &ResonanceSource<'_>,
    range: &Range,
    refine: bool,
    format: Format,
    tol: &Tolerances,
) -> CmdResult {
    let report: ResonanceReport = match (source.netlist, source.grid) {
        (_, Some((m, n))) => {
            grid_resonances_analytic(m, n, source.inductance, source.capacitance).map_err(err)?
        }
        (Some(path), None) => {
            let net = load_netlist(path)?;
            check_range(range)?;
            let opts = SweepOptions {
                spectral: options_of(tol)?,
                ..SweepOptions::default()
            };
            sweep_resonances_with(
                &net,
                AngularFrequency::new(range.omega_min).map_err(err)?,
                AngularFrequency::new(range.omega_max).map_err(err)?,
                range.points,
                refine,
                &opts,
            )
            .map_err(err)?
        }
        (None, None) => return Err("give a netlist or --grid".into()),
    };

    let method = match report.method {
        ResonanceMethod::Analytic => "analytic",
        ResonanceMethod::SweepRefined if refine => "sweep-refined",
        ResonanceMethod::SweepRefined => "sweep",
    };
    let mut out = String::new();
    match format {
        Format::Human => {
            let _ = writeln!(
                out,
                "{} distinct resonance(s) [{method}, {} before merging]",
                report.distinct_count, report.raw_count
            );
            for (w, s) in report.omegas.iter().zip(&report.residuals) {
                let _ = writeln!(
                    out,
                    "omega = {} rad/s  (f = {} Hz)  sigma = {}",
                    sig15(*w),
                    sig15(w / std::f64::consts::TAU),
                    sig15(*s)
                );
            }
        }
        Format::Json => {
            out = serde_json::to_string_pretty(&ResonanceJson {
                method,
                distinct_count: report.distinct_count,
                raw_count: report.raw_count,
                omegas: &report.omegas,
                residuals: &report.residuals,
            })
            .expect("serializable");
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("omega,freq_hz,residual\n");
            for (w, s) in report.omegas.iter().zip(&report.residuals) {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    csv_number(*w),
                    csv_number(w / std::f64::consts::TAU),
                    csv_number(*s)
                );
            }
        }
    }
    Ok(Report {
        stdout: out,
        exit: EXIT_OK,
    })
}

pub struct GenerateParams {
    pub z: (f64, f64),
    pub inductance: f64,
    pub capacitance: f64,
    pub toroidal: bool,
    pub seed: u64,
    pub extra: Option<usize>,
}

pub fn generate(shape: &Shape, p: &GenerateParams) -> CmdResult {
    let net = if let Some(n) = shape.ring {
        let z = Element::FixedImpedance(Complex64::new(p.z.0, p.z.1));
        ring_network(n, &vec![z; n]).map_err(err)?
    } else if let Some((m, n)) = shape.grid {
        let boundary = if p.toroidal {
            Boundary::Toroidal
        } else {
            Boundary::Free
        };
        grid_network(m, n, p.inductance, p.capacitance, boundary).map_err(err)?
    } else if let Some(n) = shape.random {
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let kinds = [
            ElementKind::Resistor,
            ElementKind::Inductor,
            ElementKind::Capacitor,
        ];
        random_network(&mut rng, n, p.extra.unwrap_or(n), &kinds).map_err(err)?
    } else {
        return Err("give one of --ring, --grid or --random".into());
    };
    Ok(Report {
        stdout: serialize_netlist(&net),
        exit: EXIT_OK,
    })
}

#[derive(Serialize)]
struct PairCheck {
    p: usize,
    q: usize,
    spectral: &'static str,
    direct: &'static str,
    spectral_re: Option<f64>,
    spectral_im: Option<f64>,
    direct_re: Option<f64>,
    direct_im: Option<f64>,
    /// Relative difference when both are finite.
    deviation: Option<f64>,
    agree: bool,
}

#[derive(Serialize)]
struct CheckJson {
    omega: f64,
    max_deviation: f64,
    verdicts_agree: bool,
    passed: bool,
    pairs: Vec<PairCheck>,
}

/// Relative difference of two impedances. Values far below the network's
/// impedance scale are compared against that scale instead, so a pair joined
/// by a zero-impedance path does not divide rounding noise by rounding noise.
fn deviation(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / b.norm().max(1e-6 * scale).max(f64::MIN_POSITIVE)
}

fn compare(
    sol: &SpectralSolution,
    net: &Network,
    omega: AngularFrequency,
    (p, q): (usize, usize),
) -> Result<PairCheck, String> {
    let s = sol.impedance(p, q).map_err(err)?;
    let d = solve_direct(net, omega, p, q).map_err(err)?;
    let spectral_z = s.is_finite().then_some(s.value);
    let direct_z = d.impedance();
    Ok(PairCheck {
        p,
        q,
        spectral: status_word(&s),
        direct: if d.is_singular() {
            "singular"
        } else {
            "solved"
        },
        spectral_re: spectral_z.map(|z| z.re),
        spectral_im: spectral_z.map(|z| z.im),
        direct_re: direct_z.map(|z| z.re),
        direct_im: direct_z.map(|z| z.im),
        deviation: None,
        agree: spectral_z.is_some() == direct_z.is_some(),
    })
}

pub fn check(
    netlist: &Path,
    freq: &Frequency,
    pair: Option<(usize, usize)>,
    format: Format,
    tol: &Tolerances,
) -> CmdResult {
    let net = load_netlist(netlist)?;
    let omega = omega_of(freq)?;
    let opts = options_of(tol)?;
    let pairs: Vec<(usize, usize)> = match pair {
        Some((p, q)) => {
            net.check_node(p).map_err(err)?;
            net.check_node(q).map_err(err)?;
            if p == q {
                return Err(format!("impedance needs two distinct nodes, got {p} twice"));
            }
            vec![(p, q)]
        }
        None => {
            let n = net.node_count();
            (1..=n)
                .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
                .collect()
        }
    };
    let sol = SpectralSolution::new(&net, omega, &opts).map_err(err)?;
    let mut rows: Vec<PairCheck> = pairs
        .iter()
        .map(|&pq| compare(&sol, &net, omega, pq))
        .collect::<Result<_, _>>()?;
    // Impedance scale: the largest direct result, or the smallest branch
    // impedance when every pair is tiny.
    let lap_max = impnet_core::assemble_laplacian(&net, omega)
        .map_err(err)?
        .max_abs();
    let scale = rows
        .iter()
        .filter_map(|r| Some(Complex64::new(r.direct_re?, r.direct_im?).norm()))
        .fold(1.0 / lap_max, f64::max);
    for r in &mut rows {
        if let (Some(a), Some(b), Some(c), Some(d)) =
            (r.spectral_re, r.spectral_im, r.direct_re, r.direct_im)
        {
            r.deviation = Some(deviation(Complex64::new(a, b), Complex64::new(c, d), scale));
        }
    }
    let max_deviation = rows.iter().filter_map(|r| r.deviation).fold(0.0, f64::max);
    let verdicts_agree = rows.iter().all(|r| r.agree);
    let passed = verdicts_agree && max_deviation <= CHECK_REL_TOL;

    let mut out = String::new();
    match format {
        Format::Human => {
            let _ = writeln!(
                out,
                "spectral vs direct at omega = {} rad/s",
                sig15(omega.value())
            );
            for r in &rows {
                let show = |re: Option<f64>, im: Option<f64>, word: &str| match (re, im) {
                    (Some(a), Some(b)) => complex(Complex64::new(a, b)),
                    _ => word.to_uppercase(),
                };
                let _ = writeln!(
                    out,
                    "{:>3} {:>3}  {:<40} {:<40} {}",
                    r.p,
                    r.q,
                    show(r.spectral_re, r.spectral_im, r.spectral),
                    show(r.direct_re, r.direct_im, r.direct),
                    match (r.deviation, r.agree) {
                        (Some(d), _) => format!("{d:.2e}"),
                        (None, true) => "both resonant".into(),
                        (None, false) => "VERDICT MISMATCH".into(),
                    }
                );
            }
            let _ = writeln!(out, "max relative deviation: {max_deviation:.3e}");
            let _ = writeln!(out, "{}", if passed { "PASS" } else { "FAIL" });
        }
        Format::Json => {
            out = serde_json::to_string_pretty(&CheckJson {
                omega: omega.value(),
                max_deviation,
                verdicts_agree,
                passed,
                pairs: rows,
            })
            .expect("serializable");
            out.push('\n');
        }
        Format::Csv => {
            out.push_str(
                "p,q,spectral,direct,spectral_re,spectral_im,direct_re,direct_im,deviation\n",
            );
            let num = |v: Option<f64>| v.map(csv_number).unwrap_or_default();
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.p,
                    r.q,
                    r.spectral,
                    r.direct,
                    num(r.spectral_re),
                    num(r.spectral_im),
                    num(r.direct_re),
                    num(r.direct_im),
                    num(r.deviation)
                );
            }
        }
    }
    Ok(Report {
        stdout: out,
        exit: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}
