use num_complex::Complex64;
use statrs::distribution::{Beta, ContinuousCDF};

use conebessel::bessel::BesselSeries;
use conebessel::cone::ConePoint;
use conebessel::dunkl::degenerate_product_check;
use conebessel::hypergroup::{convolve_points, sample_ball, spread_about_limit};
use conebessel::mc::RngStream;
use conebessel::measures::ks_distance;
use conebessel::series::SeriesControl;
use conebessel::{Error, Field, FieldParams};

fn fp(field: Field, q: usize) -> FieldParams {
    FieldParams::new(field, q).unwrap()
}

#[test]
fn scalar_ball_law_squared_is_beta() {
    // density (1 - w^2)^(mu - 3/2) on [-1, 1]
    for mu in [2.0, 3.5] {
        let (draws, _) = sample_ball(fp(Field::R, 1), mu, 20_000, &mut RngStream::new(2, 0)).unwrap();
        let squares: Vec<f64> = draws.iter().map(|w| w.matrix()[(0, 0)].norm_sqr()).collect();
        let law = Beta::new(0.5, mu - 0.5).unwrap();
        let ks = ks_distance(&squares, |x| law.cdf(x)).unwrap();
        assert!(ks.p_value > 1e-3, "mu {mu}: D = {}", ks.statistic);
    }
}

#[test]
fn scalar_convolution_mean_of_square() {
    let f1 = fp(Field::R, 1);
    let (r, s) = (ConePoint::from_diag(&[0.9], Field::R).unwrap(), ConePoint::from_diag(&[1.4], Field::R).unwrap());
    let sample = convolve_points(&r, &s, 2.5, f1, 200_000, &mut RngStream::new(1, 0)).unwrap();
    let (mean, err) = sample.expectation(|z| Complex64::new(z.eigenvalues()[0].powi(2), 0.0));
    let expected = 0.81 + 1.96;
    assert!((mean.re - expected).abs() < 4.0 * err, "{} +- {err} vs {expected}", mean.re);
    assert!(sample.points.iter().all(|z| {
        let v = z.eigenvalues()[0];
        (0.5 - 1e-12..=2.3 + 1e-12).contains(&v)
    }));
}

#[test]
fn convolution_is_commutative() {
    for field in [Field::R, Field::C] {
        let f2 = fp(field, 2);
        let mu = f2.d_f64() * 1.5 + 1.5;
        let r = ConePoint::from_diag(&[1.0, 0.5], field).unwrap();
        let s = ConePoint::from_diag(&[0.8, 0.3], field).unwrap();
        let series = BesselSeries::new(Complex64::new(mu, 0.0), f2, SeriesControl::default()).unwrap();
        let test_fn = |z: &ConePoint| {
            let sq: Vec<f64> = z.eigenvalues().iter().map(|v| v * v / 4.0).collect();
            series.eval_real(&sq).unwrap().require().unwrap()
        };
        let a = convolve_points(&r, &s, mu, f2, 100_000, &mut RngStream::new(3, 0)).unwrap().expectation(test_fn);
        let b = convolve_points(&s, &r, mu, f2, 100_000, &mut RngStream::new(4, 0)).unwrap().expectation(test_fn);
        let spread = (a.1 * a.1 + b.1 * b.1).sqrt();
        assert!((a.0 - b.0).norm() < 4.0 * spread, "{field}: {} vs {}", a.0, b.0);
    }
}

#[test]
fn support_shrinks_as_mu_grows() {
    let f2 = fp(Field::R, 2);
    let r = ConePoint::from_diag(&[1.0, 0.5], Field::R).unwrap();
    let s = ConePoint::from_diag(&[0.8, 0.3], Field::R).unwrap();
    let spreads: Vec<f64> =
        [3.0, 12.0, 48.0].iter().map(|&mu| spread_about_limit(&r, &s, mu, f2, 50_000, 6).unwrap()).collect();
    assert!(spreads.windows(2).all(|w| w[1] < 0.5 * w[0]), "{spreads:?}");
}

#[test]
fn small_mu_is_refused() {
    let f2 = fp(Field::C, 2);
    let r = ConePoint::identity(2, Field::C).unwrap();
    let err = convolve_points(&r, &r, 2.0, f2, 100, &mut RngStream::new(0, 0)).unwrap_err();
    assert!(matches!(err, Error::Domain(_)), "{err}");
}

#[test]
fn degenerate_product_of_psi() {
    for field in [Field::R, Field::C] {
        let rep = degenerate_product_check(fp(field, 2), &[0.3, 0.1], &[1.0, 0.5], &[0.7, 0.2], 100_000, 12).unwrap();
        assert!(rep.pass, "{}", rep.summary_line());
    }
}
