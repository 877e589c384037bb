//! Haar, Wishart and matrix beta samplers, beta densities and the
//! Kolmogorov-Smirnov statistic.
//!
//! Gaussian entries have variance 1 for the real field and variance 1/2 in
//! each of the real and imaginary parts for the complex field, so `E[X* X] = p I`
//! for a `p x q` Gaussian `X` in both cases.

use num_complex::Complex64;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::cone::ConePoint;
use crate::error::{Error, Result};
use crate::field::{Field, FieldParams};
use crate::linalg::Matrix;
use crate::mc::RngStream;
use crate::special::beta_const;

/// Attempts before giving up on a numerically singular `S + T`.
pub const MAX_CHOLESKY_RETRIES: usize = 16;

/// `rows x cols` matrix of standard Gaussian entries over the field.
pub fn gaussian_matrix(rows: usize, cols: usize, field: Field, rng: &mut RngStream) -> Result<Matrix> {
    match field {
        Field::R => Ok(Matrix::from_fn(rows, cols, |_, _| Complex64::new(rng.normal(), 0.0))),
        Field::C => Ok(Matrix::from_fn(rows, cols, |_, _| rng.complex_normal())),
        Field::H => Err(Error::Unsupported("quaternionic sampling".into())),
    }
}

/// Haar-distributed element of `U_p(F)`: QR of a Gaussian matrix with the
/// diagonal of `R` made positive (Gram-Schmidt, applied twice for stability).
pub fn haar_unitary(p: usize, field: Field, rng: &mut RngStream) -> Result<Matrix> {
    let g = gaussian_matrix(p, p, field, rng)?;
    let mut cols: Vec<Vec<Complex64>> = (0..p).map(|j| (0..p).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..p {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..p).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..p {
                    let v = cols[k][i];
                    cols[j][i] -= proj * v;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    Ok(Matrix::from_fn(p, p, |i, j| cols[j][i]))
}

/// `sigma^{1/2} X* X sigma^{1/2}` with `X` a `p x q` Gaussian matrix.
pub fn wishart_sample(fp: FieldParams, p: usize, sigma: &ConePoint, rng: &mut RngStream) -> Result<ConePoint> {
    fp.require_matrix_field()?;
    if p < fp.q || sigma.q() != fp.q {
        return Err(Error::validation(format!("need p >= q = {} and a {0}x{0} scale", fp.q)));
    }
    let x = gaussian_matrix(p, fp.q, fp.field, rng)?;
    let gram = &x.adjoint() * &x;
    let root = sigma.map_spectrum(f64::sqrt);
    ConePoint::from_roundoff(&(&(&root * &gram) * &root), fp.field)
}

/// Parameters of the matrix beta distribution `beta_{q; mu, nu}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub fp: FieldParams,
    pub mu: f64,
    pub nu: f64,
}

impl BetaParams {
    pub fn new(fp: FieldParams, mu: f64, nu: f64) -> Result<Self> {
        let floor = fp.d_f64() * (fp.q as f64 - 1.0) / 2.0;
        if !(mu > floor && nu > floor) {
            return Err(Error::domain(format!("beta parameters must exceed {floor}, got ({mu}, {nu})")));
        }
        Ok(BetaParams { fp, mu, nu })
    }

    /// Parameters produced by [`sample_matrix_beta`] with Gaussian sizes `p`, `r`.
    pub fn from_sizes(fp: FieldParams, p: usize, r: usize) -> Result<Self> {
        BetaParams::new(fp, p as f64 * fp.d_f64() / 2.0, r as f64 * fp.d_f64() / 2.0)
    }

    pub fn normalizer(&self) -> Result<f64> {
        beta_const(self.fp, self.mu, self.nu)
    }
}

/// Density of `beta_{q; mu, nu}` against Lebesgue measure on `H_q`; zero
/// outside `0 <= y <= I`.
pub fn beta_density(y: &ConePoint, params: &BetaParams) -> Result<f64> {
    if y.q() != params.fp.q {
        return Err(Error::validation("y does not match rank"));
    }
    Ok(beta_density_spectral(y.eigenvalues(), params, params.normalizer()?))
}

/// Density from eigenvalues with a precomputed normalizer.
pub fn beta_density_spectral(eig: &[f64], params: &BetaParams, normalizer: f64) -> f64 {
    const EDGE: f64 = 1e-12;
    if eig.iter().any(|&v| !(-EDGE..=1.0 + EDGE).contains(&v)) {
        return 0.0;
    }
    let nq = params.fp.n_over_q();
    let det: f64 = eig.iter().map(|v| v.clamp(0.0, 1.0)).product();
    let co: f64 = eig.iter().map(|v| (1.0 - v).clamp(0.0, 1.0)).product();
    det.powf(params.mu - nq) * co.powf(params.nu - nq) / normalizer
}

/// `L = C^{-1} S C^{-*}` with `S = X* X`, `T = Y* Y`, `C C* = S + T`, where
/// `X` is `p x ptilde` and `Y` is `r x ptilde`. Distributed as
/// `beta_{ptilde; pd/2, rd/2}`.
pub fn sample_matrix_beta(ptilde: usize, field: Field, p: usize, r: usize, rng: &mut RngStream) -> Result<ConePoint> {
    let fp = FieldParams::new(field, ptilde)?;
    fp.require_matrix_field()?;
    if p < ptilde || r < ptilde {
        return Err(Error::validation(format!("need p, r >= {ptilde}")));
    }
    for _ in 0..MAX_CHOLESKY_RETRIES {
        let x = gaussian_matrix(p, ptilde, field, rng)?;
        let y = gaussian_matrix(r, ptilde, field, rng)?;
        let s = &x.adjoint() * &x;
        let t = &y.adjoint() * &y;
        let Ok(c) = (&s + &t).cholesky() else { continue };
        let Ok(cinv) = c.lower_triangular_inverse() else { continue };
        let l = &(&cinv * &s) * &cinv.adjoint();
        return ConePoint::from_roundoff(&l, field);
    }
    Err(Error::Numerical(format!("S + T singular in {MAX_CHOLESKY_RETRIES} consecutive draws")))
}

/// Upper-left `q x q` block.
pub fn project_block(y: &ConePoint, q: usize) -> Result<ConePoint> {
    if q == 0 || q > y.q() {
        return Err(Error::validation(format!("block size {q} out of range 1..={}", y.q())));
    }
    ConePoint::from_roundoff(&y.matrix().block(q, q), y.field())
}

/// Draw from `beta_{q; mu, nu}` for arbitrary real parameters: the scalar Beta
/// law when `q = 1`, and for `q = 2` rejection from the uniform law on
/// `0 <= y <= I` (needs both exponents `mu - n/q`, `nu - n/q` non-negative).
pub fn sample_beta_general(params: &BetaParams, rng: &mut RngStream) -> Result<ConePoint> {
    let fp = params.fp;
    fp.require_matrix_field()?;
    match fp.q {
        1 => {
            let dist = Beta::new(params.mu, params.nu).map_err(|e| Error::domain(e.to_string()))?;
            ConePoint::from_diag(&[dist.sample(rng)], fp.field)
        }
        2 => {
            let nq = fp.n_over_q();
            let (a, b) = (params.mu - nq, params.nu - nq);
            if a < 0.0 || b < 0.0 {
                return Err(Error::Unsupported(format!(
                    "rejection sampler needs mu, nu >= {nq}; got ({}, {})",
                    params.mu, params.nu
                )));
            }
            const MAX_TRIES: usize = 1_000_000;
            for _ in 0..MAX_TRIES {
                // every 0 <= y <= I has |y_12| <= 1/2
                let y11 = rng.uniform();
                let y22 = rng.uniform();
                let off = match fp.field {
                    Field::R => Complex64::new(rng.uniform_in(-0.5, 0.5), 0.0),
                    _ => Complex64::new(rng.uniform_in(-0.5, 0.5), rng.uniform_in(-0.5, 0.5)),
                };
                let det = y11 * y22 - off.norm_sqr();
                let co = (1.0 - y11) * (1.0 - y22) - off.norm_sqr();
                if det < 0.0 || co < 0.0 {
                    continue;
                }
                if rng.uniform() < det.powf(a) * co.powf(b) {
                    let m = Matrix::from_rows(
                        2,
                        2,
                        vec![Complex64::new(y11, 0.0), off, off.conj(), Complex64::new(y22, 0.0)],
                    )?;
                    return ConePoint::from_roundoff(&m, fp.field);
                }
            }
            Err(Error::LowAcceptance { rate: 1.0 / MAX_TRIES as f64, floor: 1e-4 })
        }
        q => Err(Error::Unsupported(format!("general-parameter beta sampling for q = {q}"))),
    }
}

/// One-sample Kolmogorov-Smirnov result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub samples: usize,
}

/// Kolmogorov-Smirnov statistic of `samples` against `cdf`, with the
/// asymptotic p-value (Stephens' small-sample correction).
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let n = samples.len();
    if n < 100 {
        return Err(Error::validation("Kolmogorov-Smirnov needs at least 100 samples"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    let lambda = (nf.sqrt() + 0.12 + 0.11 / nf.sqrt()) * d;
    Ok(KsResult { statistic: d, p_value: kolmogorov_q(lambda), samples: n })
}

/// `Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_columns_orthonormal() {
        let mut rng = RngStream::new(5, 0);
        for field in [Field::R, Field::C] {
            for p in [1, 3, 8] {
                let u = haar_unitary(p, field, &mut rng).unwrap();
                let gram = &u.adjoint() * &u;
                assert!((&gram - &Matrix::identity(p)).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn real_rank_one_haar_is_a_sign() {
        let mut rng = RngStream::new(1, 0);
        let mut seen = [false, false];
        for _ in 0..64 {
            let u = haar_unitary(1, Field::R, &mut rng).unwrap()[(0, 0)];
            assert!((u.re.abs() - 1.0).abs() < 1e-15 && u.im == 0.0);
            seen[(u.re > 0.0) as usize] = true;
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn beta_sample_lies_in_interval() {
        let mut rng = RngStream::new(2, 0);
        for field in [Field::R, Field::C] {
            for _ in 0..200 {
                let l = sample_matrix_beta(2, field, 3, 4, &mut rng).unwrap();
                let e = l.eigenvalues();
                assert!(e[0] <= 1.0 + 1e-10 && e[1] >= -1e-10);
            }
        }
    }

    #[test]
    fn projection_is_identity_at_full_size() {
        let y = ConePoint::from_diag(&[0.3, 0.6], Field::R).unwrap();
        assert_eq!(project_block(&y, 2).unwrap().matrix(), y.matrix());
        let id = ConePoint::identity(3, Field::C).unwrap();
        assert_eq!(project_block(&id, 2).unwrap().matrix(), &Matrix::identity(2));
    }

    #[test]
    fn ks_constant_sample() {
        let samples = vec![0.3; 200];
        let r = ks_distance(&samples, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((r.statistic - 0.7).abs() < 1e-12);
        assert!(ks_distance(&samples[..50], |x| x).is_err());
    }

    #[test]
    fn determinism() {
        let draw = || {
            let mut rng = RngStream::new(11, 3);
            sample_matrix_beta(2, Field::C, 4, 5, &mut rng).unwrap().matrix().clone()
        };
        assert_eq!(draw(), draw());
    }
}
