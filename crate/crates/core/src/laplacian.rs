//! Branch admittances and the complex symmetric network Laplacian.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::netmodel::{Element, Network};

/// Angular frequency ω in rad/s. Always finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngularFrequency(f64);

impl AngularFrequency {
    pub fn new(omega: f64) -> Result<Self> {
        if omega.is_finite() && omega > 0.0 {
            Ok(Self(omega))
        } else {
            Err(Error::Validation(format!(
                "angular frequency must be positive and finite, got {omega}"
            )))
        }
    }

    pub fn from_hz(freq: f64) -> Result<Self> {
        Self::new(2.0 * std::f64::consts::PI * freq)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn branch_admittance(e: &Element, omega: AngularFrequency) -> Result<Complex64> {
    let w = omega.0;
    Ok(match *e {
        Element::Resistor(r) => Complex64::new(1.0 / r, 0.0),
        // 1/(jωL)
        Element::Inductor(l) => Complex64::new(0.0, -1.0 / (w * l)),
        Element::Capacitor(c) => Complex64::new(0.0, w * c),
        Element::FixedImpedance(z) => {
            if z.norm_sqr() == 0.0 {
                return Err(Error::DegenerateElement);
            }
            z.inv()
        }
    })
}

/// Assembles `L(ω)`: off-diagonal `(a, b)` holds minus the summed admittance of
/// every branch joining `a` and `b`; each diagonal entry is the negated sum of
/// its row's off-diagonals, so rows sum to zero and the constant vector is an
/// exact null vector.
pub fn assemble_laplacian(net: &Network, omega: AngularFrequency) -> Result<ComplexMatrix> {
    let n = net.node_count();
    let mut lap = ComplexMatrix::zeros(n);
    for br in net.branches() {
        let y = branch_admittance(&br.element, omega)?;
        let (a, b) = (br.node_a - 1, br.node_b - 1);
        lap[(a, b)] -= y;
        lap[(b, a)] = lap[(a, b)];
    }
    for i in 0..n {
        let off: Complex64 = (0..n).filter(|&j| j != i).map(|j| lap[(i, j)]).sum();
        lap[(i, i)] = -off;
    }
    Ok(lap)
}
