//! One-dimensional Gauss rules, adaptive Gauss-Kronrod, and product rules on
//! `Pi_q` and `Pi_q^I` for `q <= 2`.
//!
//! For `q = 2` a Hermitian matrix is written spectrally as
//! `x = u diag(a, b) u*`, `a >= b`. Lebesgue measure (for the trace inner
//! product) becomes `K_d (a - b)^d da db dsigma`, with `dsigma` the uniform
//! probability on the angle space, `K_1 = sqrt(2) pi` and `K_2 = 2 pi`. The
//! wedge `b <= a` is mapped to a square by `b = a t`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldParams};
use crate::linalg::Matrix;
use crate::special::ln_gamma;

/// Gauss-Jacobi rule on `[-1, 1]` for the weight `(1 - x)^a (1 + x)^b`,
/// by the Golub-Welsch eigenvalue method. Nodes ascending.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::validation("rule needs at least one node"));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::domain(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for (k, d) in diag.iter_mut().enumerate() {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        *d = if k == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
    }
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let beta = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[k] = beta.sqrt();
    }
    let log_mu0 = (ab + 1.0) * 2f64.ln() + ln_gamma(Complex64::new(a + 1.0, 0.0))?.re
        + ln_gamma(Complex64::new(b + 1.0, 0.0))?.re
        - ln_gamma(Complex64::new(ab + 2.0, 0.0))?.re;
    let mu0 = log_mu0.exp();
    let (nodes, first) = tridiagonal_eigen(diag, off)?;
    let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(first.into_iter().map(|v| mu0 * v * v)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs.into_iter().unzip())
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix (implicit QL). `off[k]` couples rows `k - 1` and `k`.
fn tridiagonal_eigen(mut d: Vec<f64>, off: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    let mut e: Vec<f64> = (0..n).map(|i| if i + 1 < n { off[i + 1] } else { 0.0 }).collect();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

const GK15_X: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const GK15_WK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
const G7_W: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = GK15_WK[7] * fc;
    let mut gauss = G7_W[3] * fc;
    for i in 0..7 {
        let x = h * GK15_X[i];
        let s = f(c - x) + f(c + x);
        kron += GK15_WK[i] * s;
        if i % 2 == 1 {
            gauss += G7_W[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) integration of a real function to an
/// absolute tolerance. Returns the value and the summed error estimate.
pub fn adaptive_gk15(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<(f64, f64)> {
    const MAX_INTERVALS: usize = 4096;
    let mut done_value = 0.0;
    let mut done_err = 0.0;
    let mut stack = vec![(a, b, abs_tol)];
    let mut used = 0;
    while let Some((lo, hi, tol)) = stack.pop() {
        used += 1;
        if used > MAX_INTERVALS {
            return Err(Error::Numerical("adaptive quadrature exceeded its interval budget".into()));
        }
        let (v, e) = gk15(&f, lo, hi);
        if e <= tol || (hi - lo) < 1e-12 * (b - a).abs() {
            done_value += v;
            done_err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, 0.5 * tol));
            stack.push((lo, mid, 0.5 * tol));
        }
    }
    Ok((done_value, done_err))
}

/// Integration domain on the cone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// `Pi_q` truncated to largest eigenvalue `<= radius`.
    Cone { radius: f64 },
    /// `Pi_q^I = {0 <= x <= I}`.
    Interval,
}

/// Rule sizes and built-in weight `Delta(x)^e1 Delta(I - x)^e2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub fp: FieldParams,
    pub domain: Domain,
    /// Exponent of `Delta(x)`; must exceed -1.
    pub e1: f64,
    /// Exponent of `Delta(I - x)`; ignored on the cone.
    pub e2: f64,
    /// Nodes in the largest eigenvalue (or the only one when `q = 1`).
    pub n_radial: usize,
    /// Nodes in the ratio of eigenvalues (`q = 2`).
    pub n_ratio: usize,
    /// Nodes per angle (`q = 2`).
    pub n_angle: usize,
}

impl QuadSpec {
    pub fn new(fp: FieldParams, domain: Domain, e1: f64, e2: f64) -> Self {
        let (n_radial, n_ratio, n_angle) = match (fp.q, domain) {
            (1, Domain::Interval) => (80, 1, 1),
            (1, Domain::Cone { .. }) => (200, 1, 1),
            (_, Domain::Interval) => (40, 32, 24),
            (_, Domain::Cone { .. }) => (72, 36, 28),
        };
        QuadSpec { fp, domain, e1, e2, n_radial, n_ratio, n_angle }
    }

    pub fn sizes(mut self, n_radial: usize, n_ratio: usize, n_angle: usize) -> Self {
        self.n_radial = n_radial;
        self.n_ratio = n_ratio;
        self.n_angle = n_angle;
        self
    }

    /// Roughly two thirds of the nodes in each direction.
    fn coarser(&self) -> Self {
        let shrink = |n: usize| if n <= 1 { n } else { (2 * n).div_ceil(3).max(2) };
        self.sizes(shrink(self.n_radial), shrink(self.n_ratio), shrink(self.n_angle))
    }
}

/// A quadrature node: the matrix, its eigenvalues (descending) and the weight.
#[derive(Clone, Debug)]
pub struct QuadNode {
    pub x: Matrix,
    pub eig: Vec<f64>,
    pub weight: f64,
}

/// A fine rule plus a coarser companion used for the error estimate.
#[derive(Clone, Debug)]
pub struct ConeQuadrature {
    spec: QuadSpec,
    fine: Vec<QuadNode>,
    coarse: Vec<QuadNode>,
}

/// Quadrature value with error estimate `|fine - coarse|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub nodes: usize,
    /// The error estimate exceeded the requested tolerance.
    pub flagged: bool,
}

/// `(nodes, weights)` on `[0, len]` for the weight `x^beta (len - x)^alpha`.
fn jacobi_on(n: usize, len: f64, alpha: f64, beta: f64) -> Result<Vec<(f64, f64)>> {
    let (x, w) = gauss_jacobi(n, alpha, beta)?;
    let scale = (len / 2.0).powf(alpha + beta + 1.0);
    Ok(x.into_iter().zip(w).map(|(x, w)| (len * (1.0 + x) / 2.0, w * scale)).collect())
}

impl ConeQuadrature {
    pub fn new(spec: QuadSpec) -> Result<Self> {
        let fine = build_nodes(&spec)?;
        let coarse = build_nodes(&spec.coarser())?;
        Ok(ConeQuadrature { spec, fine, coarse })
    }

    /// Truncated cone rule for integrands damped by `exp(-<x, y>)`, with
    /// radius chosen so that `exp(-lambda_min(y) R) <= 1e-16`.
    pub fn for_laplace(fp: FieldParams, e1: f64, lambda_min: f64) -> Result<Self> {
        if !(lambda_min > 0.0) {
            return Err(Error::domain("y must be positive definite"));
        }
        let radius = -(1e-16f64).ln() / lambda_min;
        ConeQuadrature::new(QuadSpec::new(fp, Domain::Cone { radius }, e1, 0.0))
    }

    pub fn spec(&self) -> &QuadSpec {
        &self.spec
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.fine
    }

    pub fn radius(&self) -> Option<f64> {
        match self.spec.domain {
            Domain::Cone { radius } => Some(radius),
            Domain::Interval => None,
        }
    }
}

fn build_nodes(spec: &QuadSpec) -> Result<Vec<QuadNode>> {
    let fp = spec.fp;
    if spec.e1 <= -1.0 {
        return Err(Error::domain(format!("Delta(x) exponent {} is not integrable", spec.e1)));
    }
    let (len, e2) = match spec.domain {
        Domain::Cone { radius } => {
            if !(radius > 0.0) {
                return Err(Error::validation("radius must be positive"));
            }
            (radius, 0.0)
        }
        Domain::Interval => {
            if spec.e2 <= -1.0 {
                return Err(Error::domain(format!("Delta(I - x) exponent {} is not integrable", spec.e2)));
            }
            (1.0, spec.e2)
        }
    };
    match fp.q {
        1 => Ok(jacobi_on(spec.n_radial, len, e2, spec.e1)?
            .into_iter()
            .map(|(x, w)| QuadNode { x: Matrix::from_diag(&[x]), eig: vec![x], weight: w })
            .collect()),
        2 => build_rank_two(spec, len, e2),
        q => Err(Error::Unsupported(format!("deterministic quadrature for q = {q}"))),
    }
}

fn build_rank_two(spec: &QuadSpec, len: f64, e2: f64) -> Result<Vec<QuadNode>> {
    let fp = spec.fp;
    let d = fp.d_f64();
    let k_d = match fp.field {
        Field::R => SQRT_2 * PI,
        Field::C => 2.0 * PI,
        Field::H => return Err(Error::Unsupported("quaternionic quadrature".into())),
    };
    let interval = matches!(spec.domain, Domain::Interval);
    // weight a^(2 e1 + d + 1) (len - a)^e2 in a, t^e1 (1 - t)^d in t
    let radial = jacobi_on(spec.n_radial, len, e2, 2.0 * spec.e1 + d + 1.0)?;
    let ratio = jacobi_on(spec.n_ratio, 1.0, d, spec.e1)?;
    // angles as (cos w, sin w, phase) with probability weights
    let mut angles: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    match fp.field {
        Field::R => {
            let n = spec.n_angle;
            for i in 0..n {
                let w = 2.0 * PI * (i as f64 + 0.5) / n as f64;
                angles.push((w.cos(), w.sin(), Complex64::new(1.0, 0.0), 1.0 / n as f64));
            }
        }
        _ => {
            let (cx, cw) = gauss_legendre(spec.n_angle)?;
            let nphi = spec.n_angle;
            for (c, wc) in cx.iter().zip(&cw) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..nphi {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / nphi as f64;
                    angles.push((*c, s, Complex64::from_polar(1.0, phi), 0.5 * wc / nphi as f64));
                }
            }
        }
    }
    let mut nodes = Vec::with_capacity(radial.len() * ratio.len() * angles.len());
    for &(a, wa) in &radial {
        for &(t, wt) in &ratio {
            let b = a * t;
            let mut w = k_d * wa * wt;
            if interval && e2 != 0.0 {
                w *= (1.0 - b).max(0.0).powf(e2);
            }
            let (sum, diff) = (a + b, a - b);
            for &(c, s, phase, wang) in &angles {
                let x11 = Complex64::new(0.5 * (sum + diff * c), 0.0);
                let x22 = Complex64::new(0.5 * (sum - diff * c), 0.0);
                let x12 = phase * (0.5 * diff * s);
                let x = Matrix::from_rows(2, 2, vec![x11, x12, x12.conj(), x22])?;
                nodes.push(QuadNode { x, eig: vec![a, b], weight: w * wang });
            }
        }
    }
    Ok(nodes)
}

fn integrate_nodes<F>(nodes: &[QuadNode], f: &F) -> Result<Complex64>
where
    F: Fn(&QuadNode) -> Result<Complex64> + Sync,
{
    const BLOCK: usize = 1024;
    let partials: Vec<Result<Complex64>> = nodes
        .par_chunks(BLOCK)
        .map(|block| {
            let mut acc = Complex64::new(0.0, 0.0);
            for node in block {
                acc += f(node)? * node.weight;
            }
            Ok(acc)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for p in partials {
        total += p?;
    }
    Ok(total)
}

/// Integrate `f` against the rule. The built-in weight of the rule is
/// already applied; `f` supplies the rest of the integrand.
pub fn cone_integrate<F>(f: F, quad: &ConeQuadrature, tol: Option<f64>) -> Result<QuadResult>
where
    F: Fn(&QuadNode) -> Result<Complex64> + Sync,
{
    let fine = integrate_nodes(&quad.fine, &f)?;
    let coarse = integrate_nodes(&quad.coarse, &f)?;
    let error_estimate = (fine - coarse).norm();
    Ok(QuadResult {
        value: fine,
        error_estimate,
        nodes: quad.fine.len(),
        flagged: tol.is_some_and(|t| error_estimate > t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::BetaParams;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5).unwrap();
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((integral - 2.0 / 9.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_jacobi_moments() {
        // int_{-1}^1 (1-x)^0.5 (1+x)^-0.5 dx = pi
        let (x, w) = gauss_jacobi(12, 0.5, -0.5).unwrap();
        assert!((w.iter().sum::<f64>() - PI).abs() < 1e-13);
        // with x: int (1-x)^0.5 (1+x)^-0.5 x dx = -pi/2
        let m1: f64 = x.iter().zip(&w).map(|(x, w)| w * x).sum();
        assert!((m1 + PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn gk15_adaptive() {
        let (v, e) = adaptive_gk15(|x| x.sin(), 0.0, PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-13 && e < 1e-12);
        let (v, _) = adaptive_gk15(|x| x.abs().sqrt(), -1.0, 1.0, 1e-10).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn scalar_rules() {
        let fp = FieldParams::new(Field::R, 1).unwrap();
        let unit = ConeQuadrature::new(QuadSpec::new(fp, Domain::Interval, 0.0, 0.0)).unwrap();
        let r = cone_integrate(|_| Ok(Complex64::new(1.0, 0.0)), &unit, None).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-14);
        let cone = ConeQuadrature::for_laplace(fp, 0.0, 1.0).unwrap();
        let r = cone_integrate(|n| Ok(Complex64::new((-n.eig[0]).exp(), 0.0)), &cone, None).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_two_gamma_integral() {
        // int e^{-tr x} Delta(x)^{mu - n/q} dx = Gamma_Omega(mu)
        for field in [Field::R, Field::C] {
            let fp = FieldParams::new(field, 2).unwrap();
            let mu = 2.5;
            let quad = ConeQuadrature::for_laplace(fp, mu - fp.n_over_q(), 1.0).unwrap();
            let r = cone_integrate(|n| Ok(Complex64::new((-n.eig[0] - n.eig[1]).exp(), 0.0)), &quad, None).unwrap();
            let exact = crate::special::gamma_omega(fp, Complex64::new(mu, 0.0)).unwrap().re;
            assert!((r.value.re / exact - 1.0).abs() < 1e-10, "{field}: {} vs {exact}", r.value.re);
        }
    }

    #[test]
    fn rank_two_beta_density_normalized() {
        for field in [Field::R, Field::C] {
            let fp = FieldParams::new(field, 2).unwrap();
            let params = BetaParams::new(fp, 2.0, 3.0).unwrap();
            let nq = fp.n_over_q();
            let quad = ConeQuadrature::new(QuadSpec::new(fp, Domain::Interval, params.mu - nq, params.nu - nq)).unwrap();
            let b = params.normalizer().unwrap();
            let r = cone_integrate(|_| Ok(Complex64::new(1.0 / b, 0.0)), &quad, Some(1e-4)).unwrap();
            assert!((r.value.re - 1.0).abs() < 1e-4, "{field}: {}", r.value.re);
            assert!(!r.flagged);
        }
    }
}
