//! Network data model, netlist text format and canonical network families.
//!
//! Netlist grammar (UTF-8, LF or CRLF):
//!
//! ```text
//! # comment
//! NET <node_count>
//! R <a> <b> <ohms>
//! L <a> <b> <henries>
//! C <a> <b> <farads>
//! Z <a> <b> <re_ohms> <im_ohms>
//! ```
//!
//! Node numbers are 1-based everywhere in the public API. Parallel branches
//! between the same pair of nodes are kept as written.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Resistor,
    Inductor,
    Capacitor,
    FixedImpedance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Ohms.
    Resistor(f64),
    /// Henries.
    Inductor(f64),
    /// Farads.
    Capacitor(f64),
    /// Frequency-independent impedance in ohms.
    FixedImpedance(Complex64),
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Resistor(_) => ElementKind::Resistor,
            Element::Inductor(_) => ElementKind::Inductor,
            Element::Capacitor(_) => ElementKind::Capacitor,
            Element::FixedImpedance(_) => ElementKind::FixedImpedance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Element::Resistor(v) | Element::Inductor(v) | Element::Capacitor(v) => {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Validation(format!(
                        "element value must be positive and finite, got {v}"
                    )));
                }
            }
            Element::FixedImpedance(z) => {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::Validation(format!("impedance {z} is not finite")));
                }
                if z.re == 0.0 && z.im == 0.0 {
                    return Err(Error::Validation("impedance must be nonzero".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub node_a: usize,
    pub node_b: usize,
    pub element: Element,
}

impl Branch {
    pub fn new(node_a: usize, node_b: usize, element: Element) -> Self {
        Self {
            node_a,
            node_b,
            element,
        }
    }
}

/// A validated, connected network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    node_count: usize,
    branches: Vec<Branch>,
}

impl Network {
    /// Validates elements, node ranges and connectivity.
    pub fn new(node_count: usize, branches: Vec<Branch>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Validation("node count must be positive".into()));
        }
        if branches.is_empty() {
            return Err(Error::Validation("network has no branches".into()));
        }
        for br in &branches {
            for node in [br.node_a, br.node_b] {
                if node == 0 || node > node_count {
                    return Err(Error::Validation(format!(
                        "node {node} out of range 1..={node_count}"
                    )));
                }
            }
            if br.node_a == br.node_b {
                return Err(Error::Validation(format!(
                    "self-loop at node {}",
                    br.node_a
                )));
            }
            br.element.validate()?;
        }
        let components = connected_components(node_count, &branches);
        if components.len() > 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(Self {
            node_count,
            branches,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.node_count {
            Err(Error::InvalidNode {
                node,
                node_count: self.node_count,
            })
        } else {
            Ok(())
        }
    }
}

/// Components as sorted lists of 1-based node numbers, ordered by smallest node.
fn connected_components(node_count: usize, branches: &[Branch]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..node_count).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for br in branches {
        let a = find(&mut parent, br.node_a - 1);
        let b = find(&mut parent, br.node_b - 1);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; node_count];
    for node in 0..node_count {
        let root = find(&mut parent, node);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(node + 1);
    }
    groups
}

pub fn parse_netlist(text: &str) -> Result<Network> {
    let mut node_count: Option<usize> = None;
    let mut branches = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |reason: String| Error::Syntax {
            line: line_no,
            reason,
        };
        let tokens: Vec<&str> = line.split([' ', '\t']).filter(|t| !t.is_empty()).collect();
        let Some(count) = node_count else {
            if tokens.len() != 2 || tokens[0] != "NET" {
                return Err(syntax("expected `NET <node_count>` header".into()));
            }
            let n: usize = tokens[1]
                .parse()
                .map_err(|_| syntax(format!("invalid node count `{}`", tokens[1])))?;
            if n == 0 {
                return Err(Error::Validation("node count must be positive".into()));
            }
            node_count = Some(n);
            continue;
        };

        let expected = match tokens[0] {
            "R" | "L" | "C" => 4,
            "Z" => 5,
            "NET" => return Err(syntax("duplicate NET header".into())),
            other => return Err(syntax(format!("unknown element kind `{other}`"))),
        };
        if tokens.len() != expected {
            return Err(syntax(format!(
                "`{}` line takes {} fields, found {}",
                tokens[0],
                expected - 1,
                tokens.len() - 1
            )));
        }
        let node = |tok: &str| -> Result<usize> {
            let v: i64 = tok
                .parse()
                .map_err(|_| syntax(format!("invalid node `{tok}`")))?;
            if v < 1 || v as u64 > count as u64 {
                return Err(Error::Validation(format!(
                    "line {line_no}: node {v} out of range 1..={count}"
                )));
            }
            Ok(v as usize)
        };
        let number = |tok: &str| -> Result<f64> {
            tok.parse::<f64>()
                .map_err(|_| syntax(format!("invalid number `{tok}`")))
        };
        let a = node(tokens[1])?;
        let b = node(tokens[2])?;
        let element = match tokens[0] {
            "R" => Element::Resistor(number(tokens[3])?),
            "L" => Element::Inductor(number(tokens[3])?),
            "C" => Element::Capacitor(number(tokens[3])?),
            _ => Element::FixedImpedance(Complex64::new(number(tokens[3])?, number(tokens[4])?)),
        };
        if a == b {
            return Err(Error::Validation(format!(
                "line {line_no}: self-loop at node {a}"
            )));
        }
        element
            .validate()
            .map_err(|e| Error::Validation(format!("line {line_no}: {e}")))?;
        branches.push(Branch::new(a, b, element));
    }

    let node_count = node_count.ok_or(Error::Syntax {
        line: text.lines().count().max(1),
        reason: "missing `NET <node_count>` header".into(),
    })?;
    Network::new(node_count, branches)
}

/// Shortest decimal that parses back to the same `f64`.
fn fmt_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn serialize_netlist(net: &Network) -> String {
    let mut out = format!("NET {}\n", net.node_count);
    for br in &net.branches {
        let (a, b) = (br.node_a, br.node_b);
        let _ = match br.element {
            Element::Resistor(v) => writeln!(out, "R {a} {b} {}", fmt_value(v)),
            Element::Inductor(v) => writeln!(out, "L {a} {b} {}", fmt_value(v)),
            Element::Capacitor(v) => writeln!(out, "C {a} {b} {}", fmt_value(v)),
            Element::FixedImpedance(z) => {
                writeln!(out, "Z {a} {b} {} {}", fmt_value(z.re), fmt_value(z.im))
            }
        };
    }
    out
}

/// Edge `k` joins nodes `k` and `k+1`; the last edge closes the ring back to node 1.
pub fn ring_network(n: usize, elements: &[Element]) -> Result<Network> {
    if n < 3 {
        return Err(Error::Validation(format!(
            "a ring needs at least 3 nodes, got {n}"
        )));
    }
    if elements.len() != n {
        return Err(Error::Validation(format!(
            "ring of {n} nodes needs {n} elements, got {}",
            elements.len()
        )));
    }
    let branches = elements
        .iter()
        .enumerate()
        .map(|(k, &e)| Branch::new(k + 1, (k + 1) % n + 1, e))
        .collect();
    Network::new(n, branches)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Free,
    Toroidal,
}

/// `m × n` rectangular net. Node `(x, y)` is numbered `x·n + y + 1`.
/// Capacitors join neighbours along `x` (the M direction), inductors along `y`.
pub fn grid_network(
    m: usize,
    n: usize,
    inductance: f64,
    capacitance: f64,
    boundary: Boundary,
) -> Result<Network> {
    if m < 2 || n < 2 {
        return Err(Error::Validation(format!(
            "grid must be at least 2x2, got {m}x{n}"
        )));
    }
    let cap = Element::Capacitor(capacitance);
    let ind = Element::Inductor(inductance);
    cap.validate()?;
    ind.validate()?;
    let id = |x: usize, y: usize| x * n + y + 1;
    let wrap = boundary == Boundary::Toroidal;
    let mut branches = Vec::new();
    for x in 0..m {
        for y in 0..n {
            if x + 1 < m {
                branches.push(Branch::new(id(x, y), id(x + 1, y), cap));
            } else if wrap {
                branches.push(Branch::new(id(x, y), id(0, y), cap));
            }
            if y + 1 < n {
                branches.push(Branch::new(id(x, y), id(x, y + 1), ind));
            } else if wrap {
                branches.push(Branch::new(id(x, y), id(x, 0), ind));
            }
        }
    }
    Network::new(m * n, branches)
}

/// Random connected network: a random spanning tree plus `extra_branches`
/// further branches, each element drawn uniformly from `kinds` with
/// log-uniform magnitudes in `[0.1, 10]`.
pub fn random_network<R: Rng + ?Sized>(
    rng: &mut R,
    node_count: usize,
    extra_branches: usize,
    kinds: &[ElementKind],
) -> Result<Network> {
    if node_count < 2 {
        return Err(Error::Validation(
            "random network needs at least 2 nodes".into(),
        ));
    }
    if kinds.is_empty() {
        return Err(Error::Validation("no element kinds to draw from".into()));
    }
    let draw = |rng: &mut R| -> Element {
        let mag = 10f64.powf(rng.gen_range(-1.0..=1.0));
        match kinds[rng.gen_range(0..kinds.len())] {
            ElementKind::Resistor => Element::Resistor(mag),
            ElementKind::Inductor => Element::Inductor(mag),
            ElementKind::Capacitor => Element::Capacitor(mag),
            ElementKind::FixedImpedance => {
                let phase =
                    rng.gen_range(-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2);
                Element::FixedImpedance(Complex64::from_polar(mag, phase))
            }
        }
    };
    let mut branches = Vec::with_capacity(node_count - 1 + extra_branches);
    for node in 2..=node_count {
        let parent = rng.gen_range(1..node);
        let e = draw(rng);
        branches.push(Branch::new(parent, node, e));
    }
    for _ in 0..extra_branches {
        let a = rng.gen_range(1..=node_count);
        let mut b = rng.gen_range(1..node_count);
        if b >= a {
            b += 1;
        }
        let e = draw(rng);
        branches.push(Branch::new(a, b, e));
    }
    Network::new(node_count, branches)
}
