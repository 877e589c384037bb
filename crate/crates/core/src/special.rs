//! Gamma function of a complex argument and the cone Gamma/Beta constants.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::FieldParams;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Gamma(z)` (principal branch up to multiples of `2 pi i`), Lanczos with reflection.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::GammaPole(format!("Gamma({z})")));
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (z * PI).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z)?);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln())
}

/// `Gamma(z)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `Gamma_Omega^q(mu) = (2 pi)^((n - q)/2) prod_{j<q} Gamma(mu - j d/2)`.
pub fn gamma_omega(fp: FieldParams, mu: Complex64) -> Result<Complex64> {
    let mut log = Complex64::new(0.5 * (fp.n() - fp.q) as f64 * (2.0 * PI).ln(), 0.0);
    for j in 0..fp.q {
        let arg = mu - j as f64 * fp.d_f64() / 2.0;
        log += ln_gamma(arg).map_err(|_| Error::GammaPole(format!("factor j = {j}: Gamma({arg}) has a pole")))?;
    }
    Ok(log.exp())
}

/// `ln Gamma_Omega^q(mu)` for real `mu > d(q-1)/2`.
pub fn ln_gamma_omega_real(fp: FieldParams, mu: f64) -> Result<f64> {
    let floor = fp.d_f64() * (fp.q as f64 - 1.0) / 2.0;
    if mu <= floor {
        return Err(Error::domain(format!("need mu > {floor}, got {mu}")));
    }
    let mut log = 0.5 * (fp.n() - fp.q) as f64 * (2.0 * PI).ln();
    for j in 0..fp.q {
        log += ln_gamma(Complex64::new(mu - j as f64 * fp.d_f64() / 2.0, 0.0))?.re;
    }
    Ok(log)
}

/// `B_Omega^q(mu, nu) = Gamma_Omega(mu) Gamma_Omega(nu) / Gamma_Omega(mu + nu)`.
pub fn beta_const(fp: FieldParams, mu: f64, nu: f64) -> Result<f64> {
    Ok((ln_gamma_omega_real(fp, mu)? + ln_gamma_omega_real(fp, nu)? - ln_gamma_omega_real(fp, mu + nu)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(c(5.0)).unwrap().re - 24.0).abs() < 1e-12);
        assert!((gamma(c(0.5)).unwrap().re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(-0.5)).unwrap().re + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!(gamma(c(-2.0)).is_err());
        // |Gamma(i)|^2 = pi / sinh(pi)
        let g = gamma(Complex64::new(0.0, 1.0)).unwrap();
        assert!((g.norm_sqr() - PI / PI.sinh()).abs() < 1e-14);
    }

    #[test]
    fn gamma_omega_examples() {
        let r1 = FieldParams::new(Field::R, 1).unwrap();
        assert!((gamma_omega(r1, c(3.5)).unwrap() - gamma(c(3.5)).unwrap()).norm() < 1e-12);
        let r2 = FieldParams::new(Field::R, 2).unwrap();
        let expect = (2.0 * PI).sqrt() * PI.sqrt() / 2.0;
        assert!((gamma_omega(r2, c(2.0)).unwrap().re - expect).abs() < 1e-13);
        assert!((expect - 2.2214).abs() < 1e-4);
        let c3 = FieldParams::new(Field::C, 3).unwrap();
        let mu = c(4.3);
        let ratio = gamma_omega(c3, mu + 1.0).unwrap() / gamma_omega(c3, mu).unwrap();
        let prod: Complex64 = (0..3).map(|j| mu - j as f64).product();
        assert!((ratio - prod).norm() < 1e-11 * prod.norm());
        assert!(matches!(gamma_omega(r2, c(0.5)), Err(Error::GammaPole(_))));
    }

    #[test]
    fn beta_examples() {
        let r1 = FieldParams::new(Field::R, 1).unwrap();
        assert!((beta_const(r1, 2.0, 3.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        let r2 = FieldParams::new(Field::R, 2).unwrap();
        let a = beta_const(r2, 1.5, 2.5).unwrap();
        let b = beta_const(r2, 2.5, 1.5).unwrap();
        assert!((a - b).abs() < 1e-15 * a);
        assert!(beta_const(r2, 0.4, 2.0).is_err());
    }
}
