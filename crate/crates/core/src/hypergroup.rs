//! The hypergroup convolution `delta_r *_mu delta_s` on `Pi_q`.
//!
//! The convolution is the image of the probability measure
//! `kappa_mu Delta(I - w* w)^(mu - gamma) dw` on the ball
//! `B_q = {w : ||w||_op < 1}` under
//! `w -> sqrt(r^2 + s^2 + r w s + s w* r)`. Estimates use uniform proposals
//! in the Frobenius ball of radius `sqrt(q)`, which contains `B_q`, with
//! self-normalized importance weights, so `kappa_mu` cancels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{f_mu, BesselSeries};
use crate::cone::{psd_sqrt, ConePoint, HermMatrix, RectMatrix, Spectrum};
use crate::error::{Error, Result};
use crate::field::{Field, FieldParams};
use crate::linalg::Matrix;
use crate::mc::{parallel_weighted, parallel_mean, McEstimate, RngStream};
use crate::report::VerificationReport;
use crate::series::{BesselValue, SeriesControl};
use crate::special::ln_gamma;

/// Rejection sampling gives up below this acceptance rate.
pub const ACCEPTANCE_FLOOR: f64 = 1e-4;

fn check_params(fp: FieldParams, mu: f64) -> Result<()> {
    fp.require_matrix_field()?;
    let bound = fp.d_f64() * (fp.q as f64 - 0.5);
    if !(mu > bound) {
        let what = if mu == bound {
            "lies on the boundary where only a degenerate product formula exists"
        } else {
            "is below the range of the positive product formula"
        };
        return Err(Error::domain(format!("mu = {mu} {what}; need mu > d(q - 1/2) = {bound}")));
    }
    Ok(())
}

/// Real dimension of `M_q(F)`.
fn ball_dim(fp: FieldParams) -> usize {
    fp.d() as usize * fp.q * fp.q
}

/// Uniform draw from the Frobenius ball of radius `sqrt(q)` in `M_q(F)`.
fn frobenius_ball_draw(fp: FieldParams, rng: &mut RngStream) -> Matrix {
    let q = fp.q;
    let dim = ball_dim(fp);
    let mut m = Matrix::from_fn(q, q, |_, _| match fp.field {
        Field::R => Complex64::new(rng.normal(), 0.0),
        _ => Complex64::new(rng.normal(), rng.normal()),
    });
    let norm = m.frobenius();
    let radius = (q as f64).sqrt() * rng.uniform().powf(1.0 / dim as f64);
    m = m.scale(radius / norm);
    m
}

/// `Delta(I - w* w)^(mu - gamma)`, zero outside the open ball.
fn ball_weight(w: &Matrix, fp: FieldParams, mu: f64) -> f64 {
    let gram = &w.adjoint() * w;
    let co = &Matrix::identity(fp.q) - &gram;
    let eig = co.eigvalsh();
    if eig.iter().any(|&e| e <= 0.0) {
        return 0.0;
    }
    eig.iter().product::<f64>().powf(mu - fp.gamma())
}

/// Draws from the normalized ball law by rejection from the uniform
/// Frobenius ball. Returns the draws and the acceptance rate.
///
/// Needs `mu >= gamma` so that the density is bounded.
pub fn sample_ball(fp: FieldParams, mu: f64, n: usize, rng: &mut RngStream) -> Result<(Vec<RectMatrix>, f64)> {
    check_params(fp, mu)?;
    if mu < fp.gamma() {
        return Err(Error::Unsupported(format!(
            "ball density is unbounded for mu < gamma = {}; use self-normalized estimates",
            fp.gamma()
        )));
    }
    let mut out = Vec::with_capacity(n);
    let mut proposals: usize = 0;
    let budget = ((n as f64 / ACCEPTANCE_FLOOR).ceil() as usize).max(100_000);
    while out.len() < n {
        proposals += 1;
        let w = frobenius_ball_draw(fp, rng);
        let weight = ball_weight(&w, fp, mu);
        if weight > 0.0 && rng.uniform() < weight {
            out.push(RectMatrix::new(w, fp.field)?);
        }
        let checkpoint = proposals >= 100_000 && proposals.is_multiple_of(10_000);
        if (checkpoint || proposals >= budget) && (out.len() as f64) < ACCEPTANCE_FLOOR * proposals as f64 {
            return Err(Error::LowAcceptance { rate: out.len() as f64 / proposals as f64, floor: ACCEPTANCE_FLOOR });
        }
    }
    Ok((out, n as f64 / proposals as f64))
}

/// Estimate of `kappa_mu = (int_{B_q} Delta(I - w* w)^(mu - gamma) dw)^-1`,
/// `dw` Lebesgue measure in the real coordinates of the entries.
pub fn kappa_mu(fp: FieldParams, mu: f64, n: usize, seed: u64) -> Result<McEstimate> {
    check_params(fp, mu)?;
    if n < 2 {
        return Err(Error::validation("need at least two samples"));
    }
    let dim = ball_dim(fp) as f64;
    let radius = (fp.q as f64).sqrt();
    let log_vol = 0.5 * dim * std::f64::consts::PI.ln() + dim * radius.ln()
        - ln_gamma(Complex64::new(dim / 2.0 + 1.0, 0.0))?.re;
    let vol = log_vol.exp();
    let mean = parallel_mean(n, seed, |rng| {
        let w = frobenius_ball_draw(fp, rng);
        Complex64::new(ball_weight(&w, fp, mu), 0.0)
    })?;
    let integral = vol * mean.value.re;
    if !(integral > 0.0) {
        return Err(Error::LowAcceptance { rate: 0.0, floor: ACCEPTANCE_FLOOR });
    }
    // delta method for 1 / integral
    let stderr = vol * mean.stderr / (integral * integral);
    Ok(McEstimate { value: Complex64::new(1.0 / integral, 0.0), stderr, samples: n })
}

/// `r^2 + s^2 + r w s + s w* r`, symmetrized.
fn convolution_square(r: &Matrix, s: &Matrix, w: &Matrix) -> Matrix {
    let rws = &(r * w) * s;
    let sum = &(&(r * r) + &(s * s)) + &(&rws + &rws.adjoint());
    sum.hermitian_part()
}

/// Weighted empirical measure for `delta_r *_mu delta_s`.
#[derive(Clone, Debug)]
pub struct ConvolutionSample {
    pub points: Vec<ConePoint>,
    /// Normalized to sum to one.
    pub weights: Vec<f64>,
    pub proposals: usize,
}

impl ConvolutionSample {
    /// Weighted mean of `f` with the self-normalized standard error.
    pub fn expectation(&self, f: impl Fn(&ConePoint) -> Complex64) -> (Complex64, f64) {
        let values: Vec<Complex64> = self.points.iter().map(&f).collect();
        let mean: Complex64 = values.iter().zip(&self.weights).map(|(v, w)| v * w).sum();
        let spread: f64 = values.iter().zip(&self.weights).map(|(v, w)| w * w * (v - mean).norm_sqr()).sum();
        (mean, spread.sqrt())
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Kish effective sample size.
    pub fn ess(&self) -> f64 {
        1.0 / self.weights.iter().map(|w| w * w).sum::<f64>()
    }
}

fn validate_pair(r: &ConePoint, s: &ConePoint, fp: FieldParams) -> Result<()> {
    if r.q() != fp.q || s.q() != fp.q {
        return Err(Error::validation("points must have rank q"));
    }
    if r.field() != fp.field || s.field() != fp.field {
        return Err(Error::validation("points must be over the chosen field"));
    }
    Ok(())
}

/// Weighted draws `z = sqrt(r^2 + s^2 + r w s + s w* r)` representing
/// `delta_r *_mu delta_s`. Proposals outside `B_q` are dropped.
pub fn convolve_points(
    r: &ConePoint,
    s: &ConePoint,
    mu: f64,
    fp: FieldParams,
    n: usize,
    rng: &mut RngStream,
) -> Result<ConvolutionSample> {
    check_params(fp, mu)?;
    validate_pair(r, s, fp)?;
    let (rm, sm) = (r.matrix(), s.matrix());
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for _ in 0..n {
        let w = frobenius_ball_draw(fp, rng);
        let weight = ball_weight(&w, fp, mu);
        if weight > 0.0 {
            let z2 = ConePoint::from_roundoff(&convolution_square(rm, sm, &w), fp.field)?;
            points.push(psd_sqrt(&z2));
            weights.push(weight);
        }
    }
    let total: f64 = weights.iter().sum();
    if points.is_empty() || (points.len() as f64) < ACCEPTANCE_FLOOR * n as f64 {
        return Err(Error::LowAcceptance { rate: points.len() as f64 / n.max(1) as f64, floor: ACCEPTANCE_FLOOR });
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(ConvolutionSample { points, weights, proposals: n })
}

fn series_value(series: &BesselSeries, x: &Spectrum) -> Complex64 {
    series.eval(x).and_then(BesselValue::require).unwrap_or(Complex64::new(f64::NAN, 0.0))
}

fn clamp_spectrum(m: &Matrix) -> Spectrum {
    Spectrum::real(&m.eigvalsh().into_iter().map(|e| e.max(0.0)).collect::<Vec<_>>())
}

/// `J_mu(r^2) J_mu(s^2)` against the convolution average of `J_mu(z^2)`.
pub fn verify_product_formula(
    mu: f64,
    r: &ConePoint,
    s: &ConePoint,
    fp: FieldParams,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    check_params(fp, mu)?;
    validate_pair(r, s, fp)?;
    let timer = std::time::Instant::now();
    let series = BesselSeries::new(Complex64::new(mu, 0.0), fp, SeriesControl::default())?;
    let sq = |x: &ConePoint| x.spectrum().map(|v| v * v);
    let lhs = series.eval(&sq(r))?.require()? * series.eval(&sq(s))?.require()?;
    let (rm, sm) = (r.matrix().clone(), s.matrix().clone());
    let est = parallel_weighted(samples, seed, |rng| {
        let w = frobenius_ball_draw(fp, rng);
        let weight = ball_weight(&w, fp, mu);
        (weight > 0.0).then(|| (weight, series_value(&series, &clamp_spectrum(&convolution_square(&rm, &sm, &w)))))
    });
    finish_weighted("product-formula", lhs, est, fp, mu, samples, seed, tol, timer, |rep| {
        rep.param("r", r.eigenvalues().to_vec()).param("s", s.eigenvalues().to_vec())
    })
}

/// `f_s(r) f_s(t)` against the convolution average of `f_s(z)`,
/// `z` distributed as `delta_r *_mu delta_t`.
#[allow(clippy::too_many_arguments)]
pub fn verify_multiplicativity(
    s: &HermMatrix,
    r: &ConePoint,
    t: &ConePoint,
    mu: f64,
    fp: FieldParams,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    check_params(fp, mu)?;
    validate_pair(r, t, fp)?;
    if s.q() != fp.q {
        return Err(Error::validation("s must have rank q"));
    }
    let timer = std::time::Instant::now();
    let ctrl = SeriesControl::default();
    let muc = Complex64::new(mu, 0.0);
    let lhs = f_mu(s.matrix(), r, muc, fp, &ctrl)?.require()? * f_mu(s.matrix(), t, muc, fp, &ctrl)?.require()?;
    let series = BesselSeries::new(muc, fp, ctrl)?;
    let (rm, tm, sm) = (r.matrix().clone(), t.matrix().clone(), s.matrix().clone());
    let est = parallel_weighted(samples, seed, |rng| {
        let w = frobenius_ball_draw(fp, rng);
        let weight = ball_weight(&w, fp, mu);
        (weight > 0.0).then(|| {
            let z2 = convolution_square(&rm, &tm, &w);
            let z = match ConePoint::from_roundoff(&z2, fp.field) {
                Ok(p) => psd_sqrt(&p),
                Err(_) => return (weight, Complex64::new(f64::NAN, 0.0)),
            };
            let zm = z.matrix();
            let arg = (&(zm * &sm) * zm).scale(0.25).hermitian_part();
            (weight, series_value(&series, &Spectrum::real(&arg.eigvalsh())))
        })
    });
    finish_weighted("multiplicativity", lhs, est, fp, mu, samples, seed, tol, timer, |rep| {
        rep.param("s", s.eigh_ordered().0).param("r", r.eigenvalues().to_vec()).param("t", t.eigenvalues().to_vec())
    })
}

#[allow(clippy::too_many_arguments)]
fn finish_weighted(
    id: &str,
    lhs: Complex64,
    est: crate::mc::WeightedEstimate,
    fp: FieldParams,
    mu: f64,
    samples: usize,
    seed: u64,
    tol: f64,
    timer: std::time::Instant,
    extra: impl FnOnce(VerificationReport) -> VerificationReport,
) -> Result<VerificationReport> {
    if !est.value.is_finite() {
        return Err(Error::Numerical("series failed at a sampled argument".into()));
    }
    let rep = VerificationReport::stochastic(id, lhs, est.value, est.stderr, Some(tol), seed)
        .param("mu", mu)
        .param("q", fp.q)
        .param("field", fp.field.to_string())
        .param("samples", samples)
        .param("acceptance_rate", est.acceptance_rate())
        .param("ess", est.ess);
    Ok(extra(rep).timed(timer))
}

/// Draws of `(mu, z)` for studying the concentration of the convolution as
/// `mu` grows: returns the weighted mean of `||z - sqrt(r^2 + s^2)||_F^2`.
pub fn spread_about_limit(r: &ConePoint, s: &ConePoint, mu: f64, fp: FieldParams, n: usize, seed: u64) -> Result<f64> {
    let mut rng = RngStream::new(seed, 0);
    let sample = convolve_points(r, s, mu, fp, n, &mut rng)?;
    let limit_sq = &(r.matrix() * r.matrix()) + &(s.matrix() * s.matrix());
    let limit = psd_sqrt(&ConePoint::from_roundoff(&limit_sq, fp.field)?);
    let (v, _) = sample.expectation(|z| {
        let diff = z.matrix() - limit.matrix();
        Complex64::new(diff.frobenius().powi(2), 0.0)
    });
    Ok(v.re)
}

/// Summary of a convolution sample, for the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvolutionSummary {
    pub accepted: usize,
    pub proposals: usize,
    pub ess: f64,
}

impl From<&ConvolutionSample> for ConvolutionSummary {
    fn from(s: &ConvolutionSample) -> Self {
        ConvolutionSummary { accepted: s.points.len(), proposals: s.proposals, ess: s.ess() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r1() -> FieldParams {
        FieldParams::new(Field::R, 1).unwrap()
    }

    #[test]
    fn zero_second_point_collapses() {
        let fp = FieldParams::new(Field::R, 2).unwrap();
        let r = ConePoint::from_diag(&[1.0, 0.5], Field::R).unwrap();
        let s = ConePoint::zeros(2, Field::R).unwrap();
        let mut rng = RngStream::new(3, 0);
        let sample = convolve_points(&r, &s, 3.0, fp, 500, &mut rng).unwrap();
        for z in &sample.points {
            assert!((z.matrix() - r.matrix()).max_abs() < 1e-12);
        }
        assert!((sample.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_is_refused() {
        let fp = FieldParams::new(Field::C, 2).unwrap();
        let r = ConePoint::identity(2, Field::C).unwrap();
        let err = verify_product_formula(3.0, &r, &r, fp, 1000, 0, 0.03).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn scalar_kappa() {
        let mu = 3.0;
        let est = kappa_mu(r1(), mu, 200_000, 1).unwrap();
        // kappa^-1 = B(1/2, mu - 1/2)
        let b = crate::special::beta_const(r1(), 0.5, mu - 0.5).unwrap();
        assert!((est.value.re - 1.0 / b).abs() < 4.0 * est.stderr);
    }

    #[test]
    fn s_zero_is_exact() {
        let r = ConePoint::from_diag(&[1.3], Field::R).unwrap();
        let s = ConePoint::zeros(1, Field::R).unwrap();
        let rep = verify_product_formula(2.0, &r, &s, r1(), 10_000, 0, 1e-12).unwrap();
        assert!(rep.pass, "{}", rep.summary_line());
        assert!(rep.abs_err < 1e-14);
    }
}
