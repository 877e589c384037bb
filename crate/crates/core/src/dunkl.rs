//! Two-argument hypergeometric series and Dunkl-Bessel functions of types A and B.
//!
//! ```text
//! 0F0^alpha(xi, eta)     = sum_lambda C_lambda(xi) C_lambda(eta) / (|lambda|! C_lambda(1))
//! 0F1^alpha(mu; xi, eta) = sum_lambda C_lambda(xi) C_lambda(eta) / ((mu)_lambda |lambda|! C_lambda(1))
//! J_k^A(xi, eta) = 0F0^{1/k}(xi, eta)
//! J_k^B(xi, eta) = 0F1^{1/k2}(k1 + (q-1) k2 + 1/2; xi^2/2, eta^2/2)
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{check_ascending, rate_table, BesselSeries, RateRow};
use crate::cone::Spectrum;
use crate::error::{Error, Result};
use crate::field::FieldParams;
use crate::jack::{pochhammer_gen, JackEvaluator, JackTable, Partition, Scalar};
use crate::linalg::Matrix;
use crate::mc::{parallel_mean, RngStream};
use crate::measures::haar_unitary;
use crate::quadrature::adaptive_gk15;
use crate::report::VerificationReport;
use crate::scalar::bessel_j0;
use crate::series::{majorant, sum_layers, BesselValue, SeriesControl};

/// Coefficients of `0F0` or `0F1` in `q` variables, computed once.
#[derive(Clone)]
pub struct TwoArgSeries {
    mu: Option<Complex64>,
    ctrl: SeriesControl,
    table: Arc<JackTable>,
    /// Per degree: `to_c^2 / (k! C_lambda(1) (mu)_lambda)`, acting on `P(xi) P(eta)`.
    coefs: Vec<Vec<Complex64>>,
    coef_max: Vec<f64>,
    pole: Option<Partition>,
}

impl TwoArgSeries {
    /// `0F0^alpha` when `mu` is `None`, `0F1^alpha(mu; ., .)` otherwise.
    pub fn new(mu: Option<Complex64>, alpha: f64, q: usize, ctrl: SeriesControl) -> Result<Self> {
        ctrl.validate()?;
        let table = JackTable::get(q, alpha, ctrl.k_max)?;
        let mut coefs = Vec::new();
        let mut coef_max = Vec::new();
        let mut pole = None;
        let mut factorial = 1.0;
        'degrees: for k in 0..=ctrl.k_max {
            if k > 0 {
                factorial *= k as f64;
            }
            let mut layer = Vec::new();
            let mut worst: f64 = 0.0;
            for (i, lam) in table.partitions(k).iter().enumerate() {
                let poch = match mu {
                    Some(m) => pochhammer_gen(m, lam, alpha),
                    None => Complex64::new(1.0, 0.0),
                };
                if poch.norm() == 0.0 {
                    pole = Some(lam.clone());
                    break 'degrees;
                }
                let base = Complex64::new(1.0 / factorial, 0.0) / poch;
                worst = worst.max(base.norm());
                let to_c = table.p_to_c(k)[i];
                layer.push(base * (to_c * to_c / table.ones(k)[i]));
            }
            coefs.push(layer);
            coef_max.push(worst);
        }
        Ok(TwoArgSeries { mu, ctrl, table, coefs, coef_max, pole })
    }

    pub fn eval(&self, xi: &Spectrum, eta: &Spectrum) -> Result<BesselValue> {
        let q = self.table.nvars();
        if xi.len() != q || eta.len() != q {
            return Err(Error::validation(format!("both arguments need length {q}")));
        }
        if xi.is_zero() || eta.is_zero() {
            return Ok(BesselValue::exact(Complex64::new(1.0, 0.0)));
        }
        if let Some(bound) = self.ctrl.guard {
            let scale = (xi.abs_sum() * eta.max_abs()).min(eta.abs_sum() * xi.max_abs());
            if majorant(&self.coef_max, scale) > bound {
                return Ok(BesselValue::refused());
            }
        }
        let (xi, eta) = (xi.canonical(), eta.canonical());
        if xi.is_real() && eta.is_real() {
            self.sum(&xi.real_parts(), &eta.real_parts())
        } else {
            self.sum(xi.values(), eta.values())
        }
    }

    fn sum<S: Scalar>(&self, xi: &[S], eta: &[S]) -> Result<BesselValue> {
        let mut ex = JackEvaluator::new(&self.table, xi)?;
        let mut ey = JackEvaluator::new(&self.table, eta)?;
        sum_layers(&self.ctrl, |k| {
            if k >= self.coefs.len() {
                return Err(Error::IndexPole {
                    mu: format!("{}", self.mu.unwrap_or_default()),
                    partition: self.pole.clone().expect("pole present"),
                });
            }
            ex.advance(&self.table);
            ey.advance(&self.table);
            let mut acc = Complex64::new(0.0, 0.0);
            for ((&a, &b), &c) in ex.p_values(k).iter().zip(ey.p_values(k)).zip(&self.coefs[k]) {
                acc += c * (a * b).to_complex();
            }
            Ok(acc)
        })
    }
}

/// `0F0^alpha(xi, eta)`, the type-A Dunkl-Bessel function `J_{1/alpha}^A`.
#[allow(non_snake_case)]
pub fn hyp0F0(xi: &Spectrum, eta: &Spectrum, alpha: f64, ctrl: &SeriesControl) -> Result<BesselValue> {
    if xi.len() != eta.len() {
        return Err(Error::validation("arguments differ in length"));
    }
    if xi.is_zero() || eta.is_zero() {
        return Ok(BesselValue::exact(Complex64::new(1.0, 0.0)));
    }
    TwoArgSeries::new(None, alpha, xi.len(), *ctrl)?.eval(xi, eta)
}

/// `0F1^alpha(mu; xi, eta)`.
#[allow(non_snake_case)]
pub fn hyp0F1(mu: Complex64, xi: &Spectrum, eta: &Spectrum, alpha: f64, ctrl: &SeriesControl) -> Result<BesselValue> {
    if xi.len() != eta.len() {
        return Err(Error::validation("arguments differ in length"));
    }
    if xi.is_zero() || eta.is_zero() {
        return Ok(BesselValue::exact(Complex64::new(1.0, 0.0)));
    }
    TwoArgSeries::new(Some(mu), alpha, xi.len(), *ctrl)?.eval(xi, eta)
}

/// Multiplicity `(k1, k2)` on the root system `B_q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityB {
    pub k1: f64,
    pub k2: f64,
}

impl MultiplicityB {
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 >= 0.0 && k2 > 0.0) {
            return Err(Error::domain(format!("need k1 >= 0 and k2 > 0, got ({k1}, {k2})")));
        }
        Ok(MultiplicityB { k1, k2 })
    }

    /// `k(mu, d) = (mu - (d(q-1)+1)/2, d/2)`.
    pub fn geometric(mu: f64, fp: FieldParams) -> Result<Self> {
        let d = fp.d_f64();
        MultiplicityB::new(mu - (d * (fp.q as f64 - 1.0) + 1.0) / 2.0, d / 2.0)
    }

    pub fn alpha(&self) -> f64 {
        1.0 / self.k2
    }

    /// `k1 + (q-1) k2 + 1/2`.
    pub fn mu(&self, q: usize) -> f64 {
        self.k1 + (q as f64 - 1.0) * self.k2 + 0.5
    }
}

/// Weyl chamber tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chamber {
    A,
    B,
}

/// Vector in a closed Weyl chamber.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberVector {
    values: Vec<f64>,
    chamber: Chamber,
}

impl ChamberVector {
    /// Validates `xi_1 >= ... >= xi_q` (and `xi_q >= 0` for type B).
    pub fn new(values: Vec<f64>, chamber: Chamber) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::validation("empty chamber vector"));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain("entries must be non-increasing"));
        }
        if chamber == Chamber::B && *values.last().unwrap() < 0.0 {
            return Err(Error::domain("type B chamber needs non-negative entries"));
        }
        Ok(ChamberVector { values, chamber })
    }

    /// Sort into the chamber (absolute values first for type B).
    pub fn project(values: &[f64], chamber: Chamber) -> Self {
        let mut v: Vec<f64> = match chamber {
            Chamber::A => values.to_vec(),
            Chamber::B => values.iter().map(|x| x.abs()).collect(),
        };
        v.sort_by(|a, b| b.total_cmp(a));
        ChamberVector { values: v, chamber }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn chamber(&self) -> Chamber {
        self.chamber
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn squared(&self) -> Spectrum {
        Spectrum::real(&self.values.iter().map(|x| x * x).collect::<Vec<_>>())
    }
}

/// `J_k^B(xi, eta)`; arguments are squared componentwise before the series.
#[allow(non_snake_case)]
pub fn dunkl_bessel_B(k: MultiplicityB, xi: &[Complex64], eta: &[Complex64], ctrl: &SeriesControl) -> Result<BesselValue> {
    if xi.len() != eta.len() || xi.is_empty() {
        return Err(Error::validation("arguments must be non-empty and of equal length"));
    }
    let half_sq = |v: &[Complex64]| Spectrum::complex(v.iter().map(|z| z * z * 0.5).collect());
    hyp0F1(Complex64::new(k.mu(xi.len()), 0.0), &half_sq(xi), &half_sq(eta), k.alpha(), ctrl)
}

/// `J_k^B(xi, i eta)` for real `xi`, `eta`: the square of `i eta` is taken
/// exactly, so the series runs on real arguments.
#[allow(non_snake_case)]
pub fn dunkl_bessel_B_imag(k: MultiplicityB, xi: &[f64], eta: &[f64], ctrl: &SeriesControl) -> Result<BesselValue> {
    if xi.len() != eta.len() || xi.is_empty() {
        return Err(Error::validation("arguments must be non-empty and of equal length"));
    }
    let a: Vec<f64> = xi.iter().map(|x| 0.5 * x * x).collect();
    let b: Vec<f64> = eta.iter().map(|x| -0.5 * x * x).collect();
    hyp0F1(Complex64::new(k.mu(xi.len()), 0.0), &Spectrum::real(&a), &Spectrum::real(&b), k.alpha(), ctrl)
}

/// Type-B Olshanski function `psi_b(xi) = J_{d/2}^A(xi^2, -b)`.
pub fn psi_type_b(b: &[Complex64], xi: &[f64], fp: FieldParams, ctrl: &SeriesControl) -> Result<BesselValue> {
    let sq: Vec<f64> = xi.iter().map(|x| x * x).collect();
    let neg_b = Spectrum::complex(b.iter().map(|z| -z).collect());
    hyp0F0(&Spectrum::real(&sq), &neg_b, fp.alpha(), ctrl)
}

fn diag(v: &[f64]) -> Matrix {
    Matrix::from_diag(v)
}

/// `0F0^{2/d}(xi, eta)` against `int_{U_q} exp(tr(xi u eta u*)) du`.
pub fn harish_chandra_check(fp: FieldParams, xi: &[f64], eta: &[f64], samples: usize, seed: u64) -> Result<VerificationReport> {
    fp.require_matrix_field()?;
    if xi.len() != fp.q || eta.len() != fp.q {
        return Err(Error::validation("arguments must have length q"));
    }
    let timer = std::time::Instant::now();
    let lhs = hyp0F0(&Spectrum::real(xi), &Spectrum::real(eta), fp.alpha(), &SeriesControl::default())?.require()?;
    let (x, y) = (diag(xi), diag(eta));
    let field = fp.field;
    let est = parallel_mean(samples, seed, |rng: &mut RngStream| {
        let u = haar_unitary(fp.q, field, rng).expect("matrix field");
        let conj = &(&u * &y) * &u.adjoint();
        x.trace_of_product(&conj).exp()
    })?;
    Ok(VerificationReport::stochastic("harish-chandra", lhs, est.value, est.stderr, None, seed)
        .with_sigma(3.0)
        .param("q", fp.q)
        .param("field", fp.field.to_string())
        .param("xi", xi.to_vec())
        .param("eta", eta.to_vec())
        .param("samples", samples)
        .timed(timer))
}

/// `J_{k(mu,d)}^B(xi, i eta)` against `int_{U_q} J_mu(eta u xi^2 u* eta / 4) du`.
pub fn dunklchar_check(mu: f64, fp: FieldParams, xi: &[f64], eta: &[f64], samples: usize, seed: u64) -> Result<VerificationReport> {
    fp.require_matrix_field()?;
    if xi.len() != fp.q || eta.len() != fp.q {
        return Err(Error::validation("arguments must have length q"));
    }
    let timer = std::time::Instant::now();
    let ctrl = SeriesControl::default();
    let k = MultiplicityB::geometric(mu, fp)?;
    let lhs = dunkl_bessel_B_imag(k, xi, eta, &ctrl)?.require()?;
    let series = BesselSeries::new(Complex64::new(mu, 0.0), fp, ctrl)?;
    let xi2 = diag(&xi.iter().map(|x| x * x).collect::<Vec<_>>());
    let e = diag(eta);
    let field = fp.field;
    let est = parallel_mean(samples, seed, |rng: &mut RngStream| {
        let u = haar_unitary(fp.q, field, rng).expect("matrix field");
        let inner = &(&(&(&e * &u) * &xi2) * &u.adjoint()) * &e;
        let spec = Spectrum::real(&inner.scale(0.25).eigvalsh());
        series.eval(&spec).and_then(BesselValue::require).unwrap_or(Complex64::new(f64::NAN, 0.0))
    })?;
    if !est.value.is_finite() {
        return Err(Error::Numerical("series failed at a sampled argument".into()));
    }
    Ok(VerificationReport::stochastic("dunklchar", lhs, est.value, est.stderr, None, seed)
        .with_sigma(3.0)
        .param("mu", mu)
        .param("q", fp.q)
        .param("field", fp.field.to_string())
        .param("xi", xi.to_vec())
        .param("eta", eta.to_vec())
        .param("samples", samples)
        .timed(timer))
}

/// Deviation `|J_{k(mu,d)}^B(2 sqrt(mu) xi, i b) - J_{d/2}^A(xi^2, -b^2)|` per `mu`.
pub fn b_to_a_limit(fp: FieldParams, xi: &[f64], b: &[f64], mus: &[f64], ctrl: &SeriesControl) -> Result<Vec<RateRow>> {
    if xi.len() != fp.q || b.len() != fp.q {
        return Err(Error::validation("arguments must have length q"));
    }
    check_ascending(mus, 2.0 * fp.q as f64)?;
    let xi2: Vec<f64> = xi.iter().map(|x| x * x).collect();
    let negb2: Vec<f64> = b.iter().map(|x| -x * x).collect();
    let limit = hyp0F0(&Spectrum::real(&xi2), &Spectrum::real(&negb2), fp.alpha(), ctrl)?.require()?;
    let errors = mus
        .iter()
        .map(|&mu| {
            let k = MultiplicityB::geometric(mu, fp)?;
            let scaled: Vec<f64> = xi.iter().map(|x| 2.0 * mu.sqrt() * x).collect();
            let v = dunkl_bessel_B_imag(k, &scaled, b, ctrl)?.require()?;
            Ok((v - limit).norm())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rate_table(mus, errors))
}

/// The three routes to `psi_{(i,-i)}(xi)` for `q = 2`, real field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleQ2 {
    pub quadrature: f64,
    pub series: Complex64,
    pub classical: f64,
}

impl ExampleQ2 {
    pub fn max_spread(&self) -> f64 {
        let s = self.series;
        (s.re - self.quadrature).abs().max((s.re - self.classical).abs()).max((self.quadrature - self.classical).abs()).max(s.im.abs())
    }
}

/// `(1/2pi) int cos((xi1^2 - xi2^2) cos 2t) dt`, the `0F0` series with
/// `alpha = 2` at `(xi^2, (-i, i))`, and `J_0(xi1^2 - xi2^2)`.
pub fn example_q2_psi(xi: &[f64]) -> Result<ExampleQ2> {
    let cv = ChamberVector::new(xi.to_vec(), Chamber::B)?;
    if cv.len() != 2 {
        return Err(Error::validation("example needs a vector of length 2"));
    }
    let w = xi[0] * xi[0] - xi[1] * xi[1];
    let (integral, _err) = adaptive_gk15(|t| (w * (2.0 * t).cos()).cos(), -PI, PI, 1e-10)?;
    let fp = FieldParams::new(crate::field::Field::R, 2)?;
    let b = [Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
    let series = psi_type_b(&b, xi, fp, &SeriesControl::default())?.require()?;
    Ok(ExampleQ2 { quadrature: integral / (2.0 * PI), series, classical: bessel_j0(w) })
}

/// `psi_b(xi) psi_b(eta)` against `int_{U_q} psi_b(sigma(sqrt(xi^2 + u eta^2 u*))) du`
/// for `psi_b(xi) = 0F0^{2/d}(xi^2, -b)`.
pub fn degenerate_product_check(
    fp: FieldParams,
    b: &[f64],
    xi: &[f64],
    eta: &[f64],
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    fp.require_matrix_field()?;
    if b.len() != fp.q || xi.len() != fp.q || eta.len() != fp.q {
        return Err(Error::validation("arguments must have length q"));
    }
    let timer = std::time::Instant::now();
    let ctrl = SeriesControl::default();
    let bc: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let lhs = psi_type_b(&bc, xi, fp, &ctrl)?.require()? * psi_type_b(&bc, eta, fp, &ctrl)?.require()?;
    let series = TwoArgSeries::new(None, fp.alpha(), fp.q, ctrl)?;
    let neg_b = Spectrum::real(&b.iter().map(|x| -x).collect::<Vec<_>>());
    let xi2 = diag(&xi.iter().map(|x| x * x).collect::<Vec<_>>());
    let eta2 = diag(&eta.iter().map(|x| x * x).collect::<Vec<_>>());
    let field = fp.field;
    let est = parallel_mean(samples, seed, |rng: &mut RngStream| {
        let u = haar_unitary(fp.q, field, rng).expect("matrix field");
        let m = &xi2 + &(&(&u * &eta2) * &u.adjoint());
        // sigma(sqrt(m)) squared is just the spectrum of m
        let spec = Spectrum::real(&m.eigvalsh());
        series.eval(&spec, &neg_b).and_then(BesselValue::require).unwrap_or(Complex64::new(f64::NAN, 0.0))
    })?;
    if !est.value.is_finite() {
        return Err(Error::Numerical("series failed at a sampled argument".into()));
    }
    Ok(VerificationReport::stochastic("degenerate-product", lhs, est.value, est.stderr, None, seed)
        .with_sigma(3.0)
        .param("q", fp.q)
        .param("field", fp.field.to_string())
        .param("b", b.to_vec())
        .param("xi", xi.to_vec())
        .param("eta", eta.to_vec())
        .param("samples", samples)
        .timed(timer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::scalar::bessel_j_normalized;

    fn re(v: &[f64]) -> Spectrum {
        Spectrum::real(v)
    }

    #[test]
    fn rank_one_reductions() {
        let ctrl = SeriesControl::default();
        let v = hyp0F0(&re(&[0.7]), &re(&[1.3]), 2.0, &ctrl).unwrap();
        assert!((v.value.re - (0.7f64 * 1.3).exp()).abs() < 1e-14);
        let mu = Complex64::new(2.5, 0.0);
        let a = hyp0F1(mu, &re(&[0.4]), &re(&[-1.5]), 1.0, &ctrl).unwrap().value;
        let b = crate::scalar::hyp0f1(2.5, -0.6);
        assert!((a.re - b).abs() < 1e-14);
    }

    #[test]
    fn type_b_rank_one_is_normalized_bessel() {
        let k = MultiplicityB::new(1.0, 0.5).unwrap();
        let mu = k.mu(1);
        let v = dunkl_bessel_B_imag(k, &[1.2], &[0.9], &SeriesControl::default()).unwrap();
        assert!((v.value.re - bessel_j_normalized(mu - 1.0, 1.2 * 0.9)).abs() < 1e-13);
    }

    #[test]
    fn geometric_multiplicity_reproduces_mu() {
        for field in [Field::R, Field::C, Field::H] {
            let fp = FieldParams::new(field, 3).unwrap();
            let k = MultiplicityB::geometric(7.5, fp).unwrap();
            assert!((k.mu(3) - 7.5).abs() < 1e-15);
            assert_eq!(k.alpha(), fp.alpha());
        }
    }

    #[test]
    fn chamber_validation() {
        assert!(ChamberVector::new(vec![1.0, 2.0], Chamber::A).is_err());
        assert!(ChamberVector::new(vec![1.0, -0.5], Chamber::B).is_err());
        assert!(ChamberVector::new(vec![1.0, -0.5], Chamber::A).is_ok());
        assert_eq!(ChamberVector::project(&[-2.0, 1.0], Chamber::B).values(), &[2.0, 1.0]);
    }

    #[test]
    fn example_endpoints() {
        let eq = example_q2_psi(&[0.8, 0.8]).unwrap();
        assert!((eq.quadrature - 1.0).abs() < 1e-12 && (eq.series.re - 1.0).abs() < 1e-12);
        let e = example_q2_psi(&[2f64.sqrt(), 0.0]).unwrap();
        assert!((e.classical - 0.223_890_779_141_235_67).abs() < 1e-14);
        assert!(e.max_spread() < 1e-8, "{e:?}");
    }
}
