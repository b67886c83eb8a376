//! Number formatting for human-readable and CSV output.

use impnet_core::Complex64;

/// `x` rounded to 15 significant digits, printed without trailing zeros.
pub fn sig15(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    let mag = rounded.abs().log10();
    if (-5.0..16.0).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// `a + bj` / `a - bj`.
pub fn complex(z: Complex64) -> String {
    let im = sig15(z.im.abs());
    let sign = if z.im.is_sign_negative() && z.im != 0.0 {
        '-'
    } else {
        '+'
    };
    format!("{} {sign} {im}j", sig15(z.re))
}

/// Full-precision shortest round-trip form, switching to exponent notation
/// for very large or small magnitudes; always uses '.' as the separator.
pub fn csv_number(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig15(3.0000000000000004), "3");
        assert_eq!(sig15(1.7320508075688772), "1.73205080756888");
        assert_eq!(sig15(-0.25), "-0.25");
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(-0.0), "0");
        assert_eq!(sig15(1.5e-30), "1.5e-30");
        assert_eq!(sig15(f64::INFINITY), "inf");
    }

    #[test]
    fn complex_signs() {
        assert_eq!(
            complex(Complex64::new(3.0, 3f64.sqrt())),
            "3 + 1.73205080756888j"
        );
        assert_eq!(complex(Complex64::new(3.0, -1.0)), "3 - 1j");
        assert_eq!(complex(Complex64::new(0.0, -0.0)), "0 + 0j");
    }

    #[test]
    fn csv_numbers() {
        assert_eq!(csv_number(0.5), "0.5");
        assert_eq!(csv_number(1.0), "1.0");
        assert_eq!(csv_number(1e-30), "1e-30");
    }
}
