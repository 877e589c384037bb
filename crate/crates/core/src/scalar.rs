//! One-variable special functions, kept independent of the Jack machinery so
//! they can serve as reference values.

use std::f64::consts::PI;

/// `0F1(; b; z) = sum_k z^k / ((b)_k k!)` by direct summation.
pub fn hyp0f1(b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut comp = 0.0;
    for k in 0..500 {
        let kf = k as f64;
        term *= z / ((b + kf) * (kf + 1.0));
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && kf > z.abs().sqrt() {
            break;
        }
    }
    sum
}

/// Normalized Bessel function `j_nu(z) = 0F1(; nu + 1; -z^2/4)`, so `j_nu(0) = 1`.
pub fn bessel_j_normalized(nu: f64, z: f64) -> f64 {
    hyp0f1(nu + 1.0, -0.25 * z * z)
}

/// Classical `J_0(x) = (1/pi) int_0^pi cos(x sin t) dt`, by the trapezoid rule
/// on the periodic integrand (exponentially convergent).
pub fn bessel_j0(x: f64) -> f64 {
    let n = 64 + 4 * x.abs().ceil() as usize;
    let h = 2.0 * PI / n as f64;
    let sum: f64 = (0..n).map(|i| (x * (i as f64 * h).sin()).cos()).sum();
    sum / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((bessel_j0(2.0) - 0.223_890_779_141_235_67).abs() < 1e-15);
        assert!((bessel_j0(0.0) - 1.0).abs() < 1e-15);
        // j_{1/2}(z) = sin z / z, j_{-1/2}(z) = cos z
        assert!((bessel_j_normalized(0.5, 1.3) - 1.3f64.sin() / 1.3).abs() < 1e-15);
        assert!((bessel_j_normalized(-0.5, 2.0) - 2.0f64.cos()).abs() < 1e-15);
        assert!((hyp0f1(1.0, -1.0) - bessel_j0(2.0)).abs() < 1e-15);
    }
}
