//! The Bessel function `J_mu` of a matrix argument and the spherical
//! functions built from it.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{ConePoint, RectMatrix, Spectrum};
use crate::error::{Error, Result};
use crate::field::FieldParams;
use crate::jack::{pochhammer_gen, JackEvaluator, JackTable, Partition};
use crate::linalg::Matrix;
use crate::mc::{parallel_mean, McEstimate, RngStream};
use crate::measures::haar_unitary;
use crate::series::{majorant, sum_layers, BesselValue, SeriesControl};

/// `J_mu` for fixed `(mu, field, rank, control)`, with the series
/// coefficients computed once. Use this in loops.
#[derive(Clone)]
pub struct BesselSeries {
    mu: Complex64,
    fp: FieldParams,
    ctrl: SeriesControl,
    table: Arc<JackTable>,
    /// `(-1)^k / ((mu)_lambda k!)` times the `P -> C` factor, per degree.
    coefs: Vec<Vec<Complex64>>,
    /// `max_lambda |1 / ((mu)_lambda k!)|` per degree.
    coef_max: Vec<f64>,
    /// First partition with a vanishing Pochhammer symbol, if any.
    pole: Option<Partition>,
}

impl BesselSeries {
    pub fn new(mu: Complex64, fp: FieldParams, ctrl: SeriesControl) -> Result<Self> {
        ctrl.validate()?;
        let alpha = fp.alpha();
        let table = JackTable::get(fp.q, alpha, ctrl.k_max)?;
        let mut coefs = Vec::with_capacity(ctrl.k_max + 1);
        let mut coef_max = Vec::with_capacity(ctrl.k_max + 1);
        let mut pole = None;
        let mut factorial = 1.0;
        'degrees: for k in 0..=ctrl.k_max {
            if k > 0 {
                factorial *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut layer = Vec::new();
            let mut worst: f64 = 0.0;
            for (lam, &to_c) in table.partitions(k).iter().zip(table.p_to_c(k)) {
                let poch = pochhammer_gen(mu, lam, alpha);
                if poch.norm() == 0.0 {
                    pole = Some(lam.clone());
                    break 'degrees;
                }
                let c = Complex64::new(sign / factorial, 0.0) / poch;
                worst = worst.max(c.norm());
                layer.push(c * to_c);
            }
            coefs.push(layer);
            coef_max.push(worst);
        }
        Ok(BesselSeries { mu, fp, ctrl, table, coefs, coef_max, pole })
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn field_params(&self) -> FieldParams {
        self.fp
    }

    pub fn control(&self) -> &SeriesControl {
        &self.ctrl
    }

    fn pole_error(&self) -> Error {
        Error::IndexPole {
            mu: format!("{}", self.mu),
            partition: self.pole.clone().expect("pole present"),
        }
    }

    /// `J_mu` at a spectrum of length `q`.
    pub fn eval(&self, x: &Spectrum) -> Result<BesselValue> {
        if x.len() != self.fp.q {
            return Err(Error::validation(format!("spectrum length {} does not match rank {}", x.len(), self.fp.q)));
        }
        if x.is_zero() {
            return Ok(BesselValue::exact(Complex64::new(1.0, 0.0)));
        }
        if let Some(bound) = self.ctrl.guard {
            if majorant(&self.coef_max, x.abs_sum()) > bound {
                return Ok(BesselValue::refused());
            }
        }
        let x = x.canonical();
        if x.is_real() {
            self.sum(&x.real_parts())
        } else {
            self.sum(x.values())
        }
    }

    /// Real spectrum fast path; order of entries does not matter.
    pub fn eval_real(&self, x: &[f64]) -> Result<BesselValue> {
        self.eval(&Spectrum::real(x))
    }

    fn sum<S: crate::jack::Scalar>(&self, x: &[S]) -> Result<BesselValue> {
        let mut ev = JackEvaluator::new(&self.table, x)?;
        sum_layers(&self.ctrl, |k| {
            if k >= self.coefs.len() {
                return Err(self.pole_error());
            }
            ev.advance(&self.table);
            let mut acc = Complex64::new(0.0, 0.0);
            for (&p, &c) in ev.p_values(k).iter().zip(&self.coefs[k]) {
                acc += c * p.to_complex();
            }
            Ok(acc)
        })
    }
}

/// `J_mu(x) = sum_lambda (-1)^|lambda| / ((mu)_lambda |lambda|!) Z_lambda(x)`.
#[allow(non_snake_case)]
pub fn bessel_J(mu: Complex64, x: &Spectrum, fp: FieldParams, ctrl: &SeriesControl) -> Result<BesselValue> {
    if x.len() != fp.q {
        return Err(Error::validation(format!("spectrum length {} does not match rank {}", x.len(), fp.q)));
    }
    if x.is_zero() {
        return Ok(BesselValue::exact(Complex64::new(1.0, 0.0)));
    }
    BesselSeries::new(mu, fp, *ctrl)?.eval(x)
}

/// Spectrum of `m`, real when `m` is Hermitian and complex otherwise.
pub fn matrix_spectrum(m: &Matrix) -> Spectrum {
    if m.hermitian_defect() <= 1e-12 * (1.0 + m.max_abs()) {
        Spectrum::real(&m.eigvalsh())
    } else {
        Spectrum::complex(m.eigvals())
    }
}

fn check_shapes(s: &Matrix, r: &ConePoint, fp: FieldParams) -> Result<()> {
    fp.require_matrix_field()?;
    if !s.is_square() || s.rows() != fp.q || r.q() != fp.q {
        return Err(Error::validation(format!("expected {0}x{0} matrices", fp.q)));
    }
    Ok(())
}

/// `f_s^mu(r) = J_mu(r s r / 4)`. `s` may be any complex `q x q` matrix
/// (complexified Hermitian); non-Hermitian products go through complex
/// eigenvalues.
pub fn f_mu(s: &Matrix, r: &ConePoint, mu: Complex64, fp: FieldParams, ctrl: &SeriesControl) -> Result<BesselValue> {
    check_shapes(s, r, fp)?;
    let prod = (&(r.matrix() * s) * r.matrix()).scale(0.25);
    bessel_J(mu, &matrix_spectrum(&prod), fp, ctrl)
}

/// `phi_s^mu(r) = f_{s^2}^mu(r)`.
pub fn phi_mu(s: &Matrix, r: &ConePoint, mu: Complex64, fp: FieldParams, ctrl: &SeriesControl) -> Result<BesselValue> {
    check_shapes(s, r, fp)?;
    f_mu(&(s * s), r, mu, fp, ctrl)
}

/// `psi_b(a) = exp(-tr(a^2 b))`.
pub fn olshanski_psi(b: &Matrix, a: &ConePoint) -> Result<Complex64> {
    if b.rows() != a.q() || b.cols() != a.q() {
        return Err(Error::validation("psi needs b and a of the same size"));
    }
    let a2 = a.matrix() * a.matrix();
    Ok((-a2.trace_of_product(b)).exp())
}

/// One row of a convergence-rate table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub mu: f64,
    pub error: f64,
    /// `error(previous mu) / error(this mu)`.
    pub ratio: Option<f64>,
}

pub(crate) fn rate_table(mus: &[f64], errors: Vec<f64>) -> Vec<RateRow> {
    let mut rows: Vec<RateRow> = Vec::with_capacity(mus.len());
    for (i, (&mu, &error)) in mus.iter().zip(&errors).enumerate() {
        let ratio = (i > 0).then(|| errors[i - 1] / error);
        rows.push(RateRow { mu, error, ratio });
    }
    rows
}

pub(crate) fn check_ascending(mus: &[f64], floor: f64) -> Result<()> {
    if mus.is_empty() {
        return Err(Error::validation("empty mu list"));
    }
    if mus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("mu list must be strictly ascending"));
    }
    if mus[0] < floor {
        return Err(Error::domain(format!("mu must be at least {floor}")));
    }
    Ok(())
}

/// `|J_mu(mu y) - exp(-tr y)|` for each `mu`.
pub fn limit_rate(y: &ConePoint, mus: &[f64], fp: FieldParams, ctrl: &SeriesControl) -> Result<Vec<RateRow>> {
    if y.q() != fp.q {
        return Err(Error::validation("y does not match rank"));
    }
    check_ascending(mus, 2.0 * fp.q as f64)?;
    let target = (-y.eigenvalues().iter().sum::<f64>()).exp();
    let spec = y.spectrum();
    let errors = mus
        .iter()
        .map(|&mu| {
            let v = bessel_J(Complex64::new(mu, 0.0), &spec.scale(Complex64::new(mu, 0.0)), fp, ctrl)?.require()?;
            Ok((v - target).norm())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rate_table(mus, errors))
}

/// Haar average against the series value for the Wolf representation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub mc: McEstimate,
    pub series: BesselValue,
}

/// `J_{pd/2}(x* x / 4)` against `int_{U_p} exp(-i Re tr((u sigma_0)* x)) du`,
/// `sigma_0` the first `q` columns of the identity.
pub fn wolf_haar_oracle(x: &RectMatrix, fp: FieldParams, samples: usize, seed: u64) -> Result<OracleComparison> {
    fp.require_matrix_field()?;
    if samples < 1000 {
        return Err(Error::validation("wolf_haar_oracle needs at least 1000 samples"));
    }
    let (p, q) = (x.matrix().rows(), x.matrix().cols());
    if q != fp.q || p < q {
        return Err(Error::validation(format!("need a p x {} matrix with p >= {}", fp.q, fp.q)));
    }
    if x.field() != fp.field {
        return Err(Error::validation("matrix field does not match"));
    }
    let mu = Complex64::new(p as f64 * fp.d_f64() / 2.0, 0.0);
    let gram = x.gram();
    let series = bessel_J(mu, &gram.spectrum().scale(Complex64::new(0.25, 0.0)), fp, &SeriesControl::default())?;
    let xm = x.matrix().clone();
    let field = fp.field;
    let mc = parallel_mean(samples, seed, move |rng: &mut RngStream| {
        let u = haar_unitary(p, field, rng).expect("matrix field checked");
        let pairing = u.leading_columns(q).real_pairing(&xm);
        Complex64::new(0.0, -pairing).exp()
    })?;
    Ok(OracleComparison { mc, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::scalar::bessel_j_normalized;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn scalar_examples() {
        let fp = FieldParams::new(Field::R, 1).unwrap();
        let ctrl = SeriesControl::default();
        let v = bessel_J(c(1.0), &Spectrum::real(&[1.0]), fp, &ctrl).unwrap();
        assert!(v.converged);
        assert!((v.value.re - 0.223_890_779_141_235_67).abs() < 1e-14);
        for z in [0.5, 1.0, 2.0] {
            let v = bessel_J(c(2.5), &Spectrum::real(&[z * z / 4.0]), fp, &ctrl).unwrap();
            assert!((v.value.re - bessel_j_normalized(1.5, z)).abs() < 1e-13);
        }
        assert_eq!(bessel_J(c(2.5), &Spectrum::zeros(1), fp, &ctrl).unwrap().value, c(1.0));
    }

    #[test]
    fn pole_is_reported() {
        let fp = FieldParams::new(Field::R, 2).unwrap();
        // (mu)_lambda with mu = 0.5 vanishes at lambda = (1,1) for alpha = 2
        let err = bessel_J(c(0.5), &Spectrum::real(&[0.3, 0.2]), fp, &SeriesControl::default()).unwrap_err();
        match err {
            Error::IndexPole { partition, .. } => assert_eq!(partition, Partition::new(vec![1, 1]).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn guard_refuses_huge_arguments() {
        let fp = FieldParams::new(Field::R, 2).unwrap();
        let v = bessel_J(c(1.0), &Spectrum::real(&[400.0, 300.0]), fp, &SeriesControl::default()).unwrap();
        assert!(!v.converged);
        assert_eq!(v.advice, Some(crate::series::Advice::LargeArgument));
    }

    #[test]
    fn psi_examples() {
        let a = ConePoint::identity(2, Field::R).unwrap();
        let b = Matrix::from_diag(&[0.3, 0.5]);
        assert!((olshanski_psi(&b, &a).unwrap() - (-0.8f64).exp()).norm() < 1e-15);
        let a2 = ConePoint::from_diag(&[0.7, 1.1], Field::R).unwrap();
        assert_eq!(olshanski_psi(&Matrix::zeros(2, 2), &a2).unwrap(), c(1.0));
    }

    #[test]
    fn f_at_identity_drops_conjugation() {
        let fp = FieldParams::new(Field::R, 2).unwrap();
        let ctrl = SeriesControl::default();
        let s = Matrix::from_real_rows(2, 2, &[1.0, 0.3, 0.3, 0.5]).unwrap();
        let id = ConePoint::identity(2, Field::R).unwrap();
        let lhs = f_mu(&s, &id, c(3.0), fp, &ctrl).unwrap().value;
        let rhs = bessel_J(c(3.0), &matrix_spectrum(&s.scale(0.25)), fp, &ctrl).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-15);
    }
}
