//! The acceptance battery: every identity and property the crate claims,
//! at fixed parameters, sample sizes and tolerances.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bessel::{bessel_J, limit_rate, olshanski_psi, wolf_haar_oracle, RateRow};
use crate::cone::{psd_sqrt, ConePoint, HermMatrix, RectMatrix, Spectrum};
use crate::dunkl::{b_to_a_limit, dunklchar_check, example_q2_psi, harish_chandra_check};
use crate::error::Result;
use crate::field::{Field, FieldParams};
use crate::hypergroup::{verify_multiplicativity, verify_product_formula};
use crate::jack::jack_C_layer;
use crate::laplace::{
    polar_vs_sonine, sonine_eval, sonine_phi, verify_addition, verify_beta_projection, verify_laplace,
    verify_laplace_mod, verify_polar_route, PolarMethod,
};
use crate::linalg::Matrix;
use crate::mc::RngStream;
use crate::report::{SuiteSummary, VerificationReport};
use crate::scalar::bessel_j_normalized;
use crate::series::SeriesControl;

/// Identity ids accepted by `verify`, with the formula each one checks.
pub const IDENTITIES: &[(&str, &str)] = &[
    ("product-formula", "J_mu(r^2) J_mu(s^2) = int_B J_mu(r^2 + s^2 + r w s + s w* r) dm_mu(w)"),
    ("multiplicativity", "f_s(r) f_s(t) = int f_s(z) d(delta_r *_mu delta_t)(z)"),
    ("wolf-haar", "J_{pd/2}(x* x / 4) = int_{U_p} exp(-i Re tr((u sigma_0)* x)) du"),
    ("harish-chandra", "0F0^{2/d}(xi, eta) = int_{U_q} exp(tr(xi u eta u*)) du"),
    ("dunklchar", "J^B_{k(mu,d)}(xi, i eta) = int_{U_q} J_mu(eta u xi^2 u* eta / 4) du"),
    ("limit-exp", "|J_mu(mu y) - exp(-tr y)| = O(1/mu)"),
    ("limit-BtoA", "|J^B_{k(mu,d)}(2 sqrt(mu) xi, i b) - J^A_{d/2}(xi^2, -b^2)| = O(1/mu)"),
    ("laplace", "int J_mu(x) e^{-<x,y>} Delta(x)^{mu-n/q} dx = Gamma_Omega(mu) Delta(y)^{-mu} e^{-tr y^-1}"),
    ("laplace-mod", "int J_mu(xm) e^{-<x,y>} Delta(x)^{mu-n/q} dx = Gamma_Omega(mu) Delta(y)^{-mu} e^{-tr(m y^-1)}"),
    ("addition", "J_{mu+nu}(x(m1+m2)) Delta(x)^{mu+nu-n/q} = B^-1 int_{y<=x} J_mu(y m1) J_nu((x-y) m2) ... dy"),
    ("sonine", "J_{mu+nu}(m) = B(mu,nu)^-1 int_{Pi^I} J_mu(y m) Delta(y)^{mu-n/q} Delta(I-y)^{nu-n/q} dy"),
    ("sonine-phi", "phi_s^{mu+nu}(x) = int_{Pi^I} phi^mu_{sqrt(s y s)}(x) d beta_{q;mu,nu}(y)"),
    ("polar-route", "phi_lambda^{pd/2}(x) = int_{Pi_pt^I} phi^{pt d/2}_{lambda(r)}(x) d beta_{pt; pt d/2, (p-pt) d/2}(r)"),
    ("beta-projection", "upper-left block of beta_{pt; mu, nu} is distributed as beta_{q; mu, nu}"),
    ("example-q2", "psi_{(i,-i)}(xi) = (1/2pi) int cos((xi1^2 - xi2^2) cos 2t) dt = J_0(xi1^2 - xi2^2)"),
];

/// Short descriptions of the acceptance criteria.
pub const CRITERIA: &[(u32, &str)] = &[
    (1, "Jack normalization sum_{|lambda|=k} C_lambda = (sum xi)^k"),
    (2, "scalar reduction J_mu(z^2/4) = j_{mu-1}(z)"),
    (3, "product formula"),
    (4, "multiplicativity of f_s"),
    (5, "Wolf-Haar identity"),
    (6, "Harish-Chandra and Dunkl-char integrals"),
    (7, "exponential limit rate"),
    (8, "B to A limit rate"),
    (9, "Laplace transform, plain and modified"),
    (10, "addition theorem"),
    (11, "Sonine integrals for J and phi"),
    (12, "polar route against Sonine-phi"),
    (13, "beta projection"),
    (14, "q = 2 explicit example"),
    (15, "functional equation of psi_b"),
];

/// Battery settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Ten times fewer Monte Carlo samples.
    pub quick: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64, quick: bool) -> Self {
        SuiteConfig { seed, quick }
    }

    fn samples(&self, n: usize) -> usize {
        if self.quick {
            n / 10
        } else {
            n
        }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn fp(field: Field, q: usize) -> FieldParams {
    FieldParams::new(field, q).expect("rank is positive")
}

fn tag(rep: VerificationReport, criterion: u32) -> VerificationReport {
    rep.param("criterion", criterion)
}

fn settle(criterion: u32, identity: &str, r: Result<VerificationReport>) -> VerificationReport {
    tag(r.unwrap_or_else(|e| VerificationReport::errored(identity, &e)), criterion)
}

fn point(v: &[f64], field: Field) -> ConePoint {
    ConePoint::from_diag(v, field).expect("diagonal test point")
}

fn herm2(a: f64, off: Complex64, b: f64, field: Field) -> Result<HermMatrix> {
    HermMatrix::new(Matrix::from_rows(2, 2, vec![c(a), off, off.conj(), c(b)])?, field)
}

/// Run one criterion.
pub fn run_criterion(n: u32, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    match n {
        1 => jack_normalization(cfg),
        2 => scalar_reduction(),
        3 => product_formula(cfg),
        4 => multiplicativity(cfg),
        5 => vec![settle(5, "wolf-haar", wolf_haar(cfg))],
        6 => haar_integrals(cfg),
        7 => limit_exp(),
        8 => limit_b_to_a(),
        9 => laplace(),
        10 => addition(),
        11 => sonine(),
        12 => polar(cfg),
        13 => beta_projection(cfg),
        14 => example_q2(),
        15 => vec![settle(15, "psi-functional", psi_functional(cfg.seed))],
        _ => Vec::new(),
    }
}

/// Run the whole battery in criterion order.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteSummary {
    SuiteSummary::new(CRITERIA.iter().flat_map(|&(n, _)| run_criterion(n, cfg)).collect())
}

fn jack_normalization(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for alpha in [2.0, 1.0, 0.5] {
        for q in 1..=3 {
            let res = (|| -> Result<VerificationReport> {
                let mut rng = RngStream::new(cfg.seed, 1000 + q as u64);
                let mut worst = (0.0, c(0.0), c(0.0), 0usize);
                for _ in 0..20 {
                    let xi: Vec<f64> = (0..q).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
                    let total: f64 = xi.iter().sum();
                    for k in 0..=8 {
                        let layer: Complex64 = jack_C_layer(k, alpha, &Spectrum::real(&xi))?.iter().map(|(_, v)| v).sum();
                        let power = total.powi(k as i32);
                        let scale = power.abs().max(1.0);
                        let err = (layer.re - power).abs() / scale + layer.im.abs();
                        if err >= worst.0 {
                            worst = (err, layer / scale, c(power / scale), k);
                        }
                    }
                }
                Ok(VerificationReport::absolute("jack-normalization", worst.1, worst.2, 1e-9)
                    .param("alpha", alpha)
                    .param("q", q)
                    .param("worst_degree", worst.3)
                    .param("points", 20)
                    .note("both sides divided by max(1, |sum xi|^k)"))
            })();
            out.push(settle(1, "jack-normalization", res));
        }
    }
    out
}

fn scalar_reduction() -> Vec<VerificationReport> {
    let f1 = fp(Field::R, 1);
    let ctrl = SeriesControl::default();
    [0.8, 1.0, 2.5, 5.0]
        .into_iter()
        .map(|mu| {
            let res = (|| -> Result<VerificationReport> {
                let mut worst = (-1.0, c(0.0), c(0.0), 0.0);
                for i in 0..17 {
                    let z = 0.25 * i as f64;
                    let lhs = bessel_J(c(mu), &Spectrum::real(&[z * z / 4.0]), f1, &ctrl)?.require()?;
                    let rhs = c(bessel_j_normalized(mu - 1.0, z));
                    let err = (lhs - rhs).norm();
                    if err > worst.0 {
                        worst = (err, lhs, rhs, z);
                    }
                }
                Ok(VerificationReport::absolute("scalar-reduction", worst.1, worst.2, 1e-10)
                    .param("mu", mu)
                    .param("worst_z", worst.3)
                    .param("grid", "z = 0, 0.25, ..., 4"))
            })();
            settle(2, "scalar-reduction", res)
        })
        .collect()
}

fn product_formula(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let n = cfg.samples(1_000_000);
    let mut out = Vec::new();
    for mu in [2.0, 3.5] {
        let one = point(&[1.0], Field::R);
        out.push(settle(3, "product-formula", verify_product_formula(mu, &one, &one, fp(Field::R, 1), n, cfg.seed, 1e-2)));
    }
    for field in [Field::R, Field::C] {
        let r = point(&[1.0, 0.5], field);
        let s = point(&[0.8, 0.3], field);
        out.push(settle(3, "product-formula", verify_product_formula(3.0, &r, &s, fp(field, 2), n, cfg.seed, 3e-2)));
    }
    let r = point(&[1.0, 0.5], Field::C);
    let s = point(&[0.8, 0.3], Field::C);
    let extra = verify_product_formula(4.0, &r, &s, fp(Field::C, 2), n, cfg.seed, 3e-2).map(|r| r.param("supplementary", true));
    out.push(settle(3, "product-formula", extra));
    out
}

fn mult_s(field: Field) -> Result<HermMatrix> {
    let off = if field == Field::R { c(0.3) } else { Complex64::new(0.2, 0.25) };
    herm2(1.0, off, -0.4, field)
}

fn multiplicativity(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let n = cfg.samples(1_000_000);
    let mut out = Vec::new();
    for mu in [2.0, 3.5] {
        let res = HermMatrix::from_diag(&[1.0], Field::R).and_then(|s| {
            verify_multiplicativity(&s, &point(&[0.7], Field::R), &point(&[1.3], Field::R), mu, fp(Field::R, 1), n, cfg.seed, 1e-2)
        });
        out.push(settle(4, "multiplicativity", res));
    }
    for field in [Field::R, Field::C] {
        let res = mult_s(field).and_then(|s| {
            verify_multiplicativity(&s, &point(&[1.0, 0.5], field), &point(&[0.8, 0.3], field), 3.0, fp(field, 2), n, cfg.seed, 3e-2)
        });
        out.push(settle(4, "multiplicativity", res));
    }
    let res = mult_s(Field::C).and_then(|s| {
        verify_multiplicativity(&s, &point(&[1.0, 0.5], Field::C), &point(&[0.8, 0.3], Field::C), 4.0, fp(Field::C, 2), n, cfg.seed, 3e-2)
    });
    out.push(settle(4, "multiplicativity", res.map(|r| r.param("supplementary", true))));
    out
}

/// The 4 x 2 test matrix for the Wolf-Haar identity (operator norm below 2).
pub fn wolf_haar_matrix() -> Result<RectMatrix> {
    RectMatrix::new(Matrix::from_real_rows(4, 2, &[0.9, -0.3, 0.4, 0.7, -0.5, 0.2, 0.1, 0.6])?, Field::R)
}

fn wolf_haar(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let x = wolf_haar_matrix()?;
    let n = cfg.samples(100_000);
    let timer = std::time::Instant::now();
    let cmp = wolf_haar_oracle(&x, fp(Field::R, 2), n, cfg.seed)?;
    let lhs = cmp.series.require()?;
    Ok(VerificationReport::stochastic("wolf-haar", lhs, cmp.mc.value, cmp.mc.stderr, None, cfg.seed)
        .with_sigma(3.0)
        .param("p", 4)
        .param("q", 2)
        .param("field", "R")
        .param("op_norm", x.op_norm())
        .param("samples", n)
        .timed(timer))
}

fn haar_integrals(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let n = cfg.samples(100_000);
    let mut out = Vec::new();
    for field in [Field::R, Field::C] {
        out.push(settle(6, "harish-chandra", harish_chandra_check(fp(field, 2), &[1.0, 0.5], &[0.7, 0.2], n, cfg.seed)));
    }
    for field in [Field::R, Field::C] {
        out.push(settle(6, "dunklchar", dunklchar_check(3.0, fp(field, 2), &[1.0, 0.5], &[0.7, 0.2], n, cfg.seed)));
    }
    out
}

/// One report for a convergence-rate table: `lhs` is the successive ratio
/// farthest from 2, which must lie in `[1.6, 2.4]` (relative error 0.2),
/// and the error column must decrease strictly.
pub fn rate_report(identity: &str, rows: &[RateRow]) -> VerificationReport {
    let decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
    let worst = rows
        .iter()
        .filter_map(|r| r.ratio)
        .max_by(|a, b| (a - 2.0).abs().total_cmp(&(b - 2.0).abs()))
        .unwrap_or(f64::NAN);
    let rep = VerificationReport::deterministic(identity, c(worst), c(2.0), 0.2)
        .param("mus", rows.iter().map(|r| r.mu).collect::<Vec<_>>())
        .param("errors", rows.iter().map(|r| r.error).collect::<Vec<_>>())
        .details(json!(rows));
    if decreasing {
        rep
    } else {
        rep.fail("error column is not strictly decreasing")
    }
}

fn limit_exp() -> Vec<VerificationReport> {
    let mus = [8.0, 16.0, 32.0, 64.0];
    let mut out = Vec::new();
    for field in [Field::R, Field::C] {
        let y = point(&[0.5, 1.0], field);
        let rep = limit_rate(&y, &mus, fp(field, 2), &SeriesControl::default())
            .map(|rows| rate_report("limit-exp", &rows).param("field", field.to_string()).param("y", [0.5, 1.0]));
        out.push(settle(7, "limit-exp", rep));
    }
    out
}

fn limit_b_to_a() -> Vec<VerificationReport> {
    let mus = [32.0, 64.0, 128.0];
    let rep = b_to_a_limit(fp(Field::R, 2), &[1.0, 0.5], &[0.3, 0.1], &mus, &SeriesControl::default())
        .map(|rows| rate_report("limit-BtoA", &rows).param("field", "R").param("xi", [1.0, 0.5]).param("b", [0.3, 0.1]));
    vec![settle(8, "limit-BtoA", rep)]
}

fn laplace() -> Vec<VerificationReport> {
    let f1 = fp(Field::R, 1);
    let f2 = fp(Field::R, 2);
    let p1 = |v: f64| point(&[v], Field::R);
    let mut out = vec![
        settle(9, "laplace", verify_laplace(2.0, &p1(1.0), f1, None, None)),
        settle(9, "laplace", verify_laplace(1.0, &p1(2.0), f1, None, None)),
        settle(9, "laplace-mod", verify_laplace_mod(2.0, Some(&p1(3.0)), &p1(1.0), f1, None, None)),
        settle(9, "laplace", verify_laplace(2.0, &point(&[1.0, 2.0], Field::R), f2, None, None)),
    ];
    let m = herm2(1.2, c(0.3), 0.6, Field::R).and_then(ConePoint::new);
    let y = herm2(1.0, c(-0.2), 2.0, Field::R).and_then(ConePoint::new);
    let res = m.and_then(|m| y.and_then(|y| verify_laplace_mod(2.0, Some(&m), &y, f2, None, None)));
    out.push(settle(9, "laplace-mod", res));
    out
}

fn addition() -> Vec<VerificationReport> {
    let f1 = fp(Field::R, 1);
    let p1 = |v: f64| point(&[v], Field::R);
    let p2 = |v: &[f64]| point(v, Field::R);
    vec![
        settle(10, "addition", verify_addition(1.0, 1.0, &p1(1.0), &p1(0.0), &p1(1.0), f1, None, None)),
        settle(10, "addition", verify_addition(1.5, 2.5, &p1(0.7), &p1(1.2), &p1(1.3), f1, None, None)),
        settle(
            10,
            "addition",
            verify_addition(2.0, 2.0, &p2(&[1.0, 1.0]), &p2(&[1.0, 0.0]), &p2(&[1.0, 1.0]), fp(Field::R, 2), None, None),
        ),
    ]
}

fn sonine() -> Vec<VerificationReport> {
    let f1 = fp(Field::R, 1);
    let f2 = fp(Field::R, 2);
    let p1 = |v: f64| point(&[v], Field::R);
    let p2 = |v: &[f64]| point(v, Field::R);
    let strip = |r: Result<VerificationReport>| r.map(|mut rep| {
        rep.details = None;
        rep
    });
    vec![
        settle(11, "sonine", sonine_eval(1.0, 1.0, &p1(1.0), f1, None, None)),
        settle(11, "sonine-phi", strip(sonine_phi(1.5, 2.0, &p1(1.0), &p1(2.0), f1, None, None))),
        settle(11, "sonine", sonine_eval(2.0, 3.0, &p2(&[1.0, 0.5]), f2, None, None)),
        settle(11, "sonine-phi", strip(sonine_phi(2.0, 3.0, &p2(&[1.0, 0.5]), &p2(&[1.2, 0.7]), f2, None, None))),
    ]
}

fn polar(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let f1 = fp(Field::R, 1);
    let lambda = point(&[1.0], Field::R);
    let x = point(&[2.0], Field::R);
    let n = cfg.samples(200_000);
    vec![
        settle(12, "polar-vs-sonine", polar_vs_sonine(2, 6, &lambda, &x, f1, n, cfg.seed, 1e-2)),
        settle(
            12,
            "polar-route",
            verify_polar_route(2, 6, &lambda, &x, f1, PolarMethod::MonteCarlo { samples: n, seed: cfg.seed }, Some(1e-2)),
        ),
        settle(12, "polar-route", verify_polar_route(1, 4, &lambda, &x, f1, PolarMethod::Quadrature, Some(1e-6))),
    ]
}

fn beta_projection(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let n = cfg.samples(200_000);
    [Field::R, Field::C]
        .into_iter()
        .map(|field| settle(13, "beta-projection", verify_beta_projection(2, fp(field, 1), 3, 3, n, cfg.seed)))
        .collect()
}

/// The grid of `xi` for the explicit `q = 2` example.
pub fn example_grid() -> Vec<[f64; 2]> {
    vec![
        [0.0, 0.0],
        [0.5, 0.2],
        [0.8, 0.8],
        [1.0, 0.5],
        [1.2, 0.3],
        [std::f64::consts::SQRT_2, 0.0],
        [1.5, 1.0],
        [1.6, 0.4],
        [1.8, 1.1],
        [2.0, 0.9],
    ]
}

/// The three routes to `psi_{(i,-i)}(xi)`: `lhs` is the series, `rhs` the
/// quadrature; fails if any two routes differ by more than `1e-8`.
pub fn example_q2_report(xi: &[f64]) -> Result<VerificationReport> {
    let ex = example_q2_psi(xi)?;
    let rep = VerificationReport::absolute("example-q2", ex.series, c(ex.quadrature), 1e-8)
        .param("xi", xi.to_vec())
        .details(json!(ex));
    Ok(if ex.max_spread() > 1e-8 { rep.fail(format!("routes spread by {:.3e}", ex.max_spread())) } else { rep })
}

fn example_q2() -> Vec<VerificationReport> {
    example_grid().into_iter().map(|xi| settle(14, "example-q2", example_q2_report(&xi))).collect()
}

fn random_cone_point(rng: &mut RngStream, field: Field) -> Result<ConePoint> {
    let g = Matrix::from_fn(2, 2, |_, _| match field {
        Field::R => c(rng.normal()),
        _ => Complex64::new(rng.normal(), rng.normal()),
    });
    ConePoint::from_roundoff(&(&g.adjoint() * &g).scale(0.5), field)
}

fn psi_functional(seed: u64) -> Result<VerificationReport> {
    let mut worst = (-1.0, c(0.0), c(0.0));
    let mut rng = RngStream::new(seed, 1500);
    for i in 0..50 {
        let field = if i % 2 == 0 { Field::R } else { Field::C };
        let a = random_cone_point(&mut rng, field)?;
        let cpt = random_cone_point(&mut rng, field)?;
        // b complexified Hermitian: Hermitian part plus i times another Hermitian
        let h1 = random_cone_point(&mut rng, field)?;
        let h2 = random_cone_point(&mut rng, field)?;
        let b = (h1.matrix() + &(h2.matrix() - &Matrix::identity(2)).scale_complex(Complex64::new(0.0, 1.0))).scale(0.3);
        let lhs = olshanski_psi(&b, &a)? * olshanski_psi(&b, &cpt)?;
        let sum = &(a.matrix() * a.matrix()) + &(cpt.matrix() * cpt.matrix());
        let root = psd_sqrt(&ConePoint::from_roundoff(&sum, field)?);
        let rhs = olshanski_psi(&b, &root)?;
        let err = (lhs - rhs).norm() / rhs.norm().max(1e-300);
        if err > worst.0 {
            worst = (err, lhs, rhs);
        }
    }
    Ok(VerificationReport::deterministic("psi-functional", worst.1, worst.2, 1e-12)
        .with_seed(seed)
        .param("triples", 50)
        .param("fields", ["R", "C"])
        .note("worst triple reported"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let cfg = SuiteConfig::new(0, true);
        for n in [1, 2, 7, 8, 14, 15] {
            for rep in run_criterion(n, &cfg) {
                assert!(rep.pass, "criterion {n}: {}", rep.summary_line());
            }
        }
    }

    #[test]
    fn identity_table_is_unique() {
        let mut ids: Vec<_> = IDENTITIES.iter().map(|(id, _)| *id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), IDENTITIES.len());
    }
}
