//! Truncation control for partition-indexed series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default refusal threshold for the absolute-series majorant.
pub const DEFAULT_GUARD: f64 = 1e4;

/// Stopping rule for a series summed by total degree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    /// Hard cap on the degree.
    pub k_max: usize,
    /// A layer is quiet when its magnitude is below `rel_tol * |partial sum|`.
    pub rel_tol: f64,
    /// Quiet layers in a row needed to stop.
    pub quiet_layers: usize,
    /// Refuse arguments whose absolute-series majorant exceeds this bound.
    /// `None` disables the check.
    pub guard: Option<f64>,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { k_max: 30, rel_tol: 1e-12, quiet_layers: 2, guard: Some(DEFAULT_GUARD) }
    }
}

impl SeriesControl {
    pub fn new(k_max: usize, rel_tol: f64) -> Result<Self> {
        let ctrl = SeriesControl { k_max, rel_tol, ..Default::default() };
        ctrl.validate()?;
        Ok(ctrl)
    }

    /// No argument guard, higher degree cap. Used where callers accept the
    /// cancellation, e.g. quadrature nodes far out on the cone whose
    /// contribution is damped by an exponential weight.
    pub fn unguarded(k_max: usize) -> Self {
        SeriesControl { k_max, rel_tol: 1e-14, quiet_layers: 2, guard: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max < 1 {
            return Err(Error::validation("k_max must be at least 1"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::validation("rel_tol must lie in (0, 1)"));
        }
        if self.quiet_layers < 1 {
            return Err(Error::validation("need at least one quiet layer"));
        }
        Ok(())
    }
}

/// Why a value was not fully trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Advice {
    /// Refused up front: cancellation would swamp double precision.
    LargeArgument,
    /// Degree cap reached before the stopping rule fired.
    DegreeCap,
}

/// Result of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselValue {
    pub value: Complex64,
    /// Highest degree summed.
    pub truncation_degree: usize,
    /// Magnitude of the last layer summed.
    pub est_tail: f64,
    pub converged: bool,
    pub advice: Option<Advice>,
}

impl BesselValue {
    pub fn exact(value: Complex64) -> Self {
        BesselValue { value, truncation_degree: 0, est_tail: 0.0, converged: true, advice: None }
    }

    pub fn refused() -> Self {
        BesselValue {
            value: Complex64::new(f64::NAN, f64::NAN),
            truncation_degree: 0,
            est_tail: f64::INFINITY,
            converged: false,
            advice: Some(Advice::LargeArgument),
        }
    }

    /// The value, or an error if the series did not converge.
    pub fn require(self) -> Result<Complex64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Numerical(match self.advice {
                Some(Advice::LargeArgument) => "series refused: argument too large for double precision".into(),
                _ => format!("series not converged at degree {} (tail {:.3e})", self.truncation_degree, self.est_tail),
            }))
        }
    }
}

/// Compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    pub fn new(start: Complex64) -> Self {
        KahanSum { sum: start, comp: Complex64::new(0.0, 0.0) }
    }

    pub fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// Sum `layer(0) + layer(1) + ...` under `ctrl`.
pub(crate) fn sum_layers(ctrl: &SeriesControl, mut layer: impl FnMut(usize) -> Result<Complex64>) -> Result<BesselValue> {
    ctrl.validate()?;
    let mut acc = KahanSum::new(layer(0)?);
    let mut quiet = 0;
    let mut tail = 0.0;
    for k in 1..=ctrl.k_max {
        let t = layer(k)?;
        acc.add(t);
        tail = t.norm();
        if tail < ctrl.rel_tol * acc.value().norm() || (tail == 0.0 && acc.value().norm() == 0.0) {
            quiet += 1;
            if quiet >= ctrl.quiet_layers {
                return Ok(BesselValue { value: acc.value(), truncation_degree: k, est_tail: tail, converged: true, advice: None });
            }
        } else {
            quiet = 0;
        }
    }
    Ok(BesselValue {
        value: acc.value(),
        truncation_degree: ctrl.k_max,
        est_tail: tail,
        converged: false,
        advice: Some(Advice::DegreeCap),
    })
}

/// `sum_k scale^k * coef_max[k]`, an upper bound for the absolute series.
pub(crate) fn majorant(coef_max: &[f64], scale: f64) -> f64 {
    let mut total = 0.0;
    let mut pow = 1.0;
    for &c in coef_max {
        total += pow * c;
        pow *= scale;
        if !total.is_finite() {
            return f64::INFINITY;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_series_converges() {
        let mut fact = 1.0;
        let v = sum_layers(&SeriesControl::default(), |k| {
            if k > 0 {
                fact *= k as f64;
            }
            Ok(Complex64::new(1.0 / fact, 0.0))
        })
        .unwrap();
        assert!(v.converged);
        assert!((v.value.re - std::f64::consts::E).abs() < 1e-14);
        assert!(v.est_tail <= 1e-12 * v.value.norm());
    }

    #[test]
    fn cap_flags_nonconvergence() {
        let ctrl = SeriesControl::new(5, 1e-12).unwrap();
        let v = sum_layers(&ctrl, |_| Ok(Complex64::new(1.0, 0.0))).unwrap();
        assert!(!v.converged);
        assert_eq!(v.advice, Some(Advice::DegreeCap));
        assert_eq!(v.truncation_degree, 5);
    }

    #[test]
    fn invalid_controls() {
        assert!(SeriesControl::new(0, 1e-12).is_err());
        assert!(SeriesControl::new(10, 1.5).is_err());
    }
}
