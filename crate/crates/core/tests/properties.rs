use num_complex::Complex64;
use proptest::prelude::*;

use conebessel::bessel::bessel_J;
use conebessel::cone::Spectrum;
use conebessel::jack::{jack_C_layer, partitions_of};
use conebessel::mc::RngStream;
use conebessel::measures::{sample_matrix_beta, wishart_sample};
use conebessel::report::VerificationReport;
use conebessel::scalar::bessel_j_normalized;
use conebessel::series::SeriesControl;
use conebessel::cone::ConePoint;
use conebessel::{Field, FieldParams};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::R), Just(Field::C)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_one_bessel_is_classical(mu in 0.6f64..6.0, z in 0.0f64..4.0, field in field_strategy()) {
        let f1 = FieldParams::new(field, 1).unwrap();
        let x = Spectrum::real(&[z * z / 4.0]);
        let v = bessel_J(Complex64::new(mu, 0.0), &x, f1, &SeriesControl::default()).unwrap().require().unwrap();
        prop_assert!((v.re - bessel_j_normalized(mu - 1.0, z)).abs() < 1e-11);
        prop_assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn jack_layer_sums_to_power(xs in prop::collection::vec(-1.0f64..1.0, 1..=3), alpha in 0.3f64..3.0, k in 0usize..7) {
        let total: f64 = xs.iter().sum();
        let layer = jack_C_layer(k, alpha, &Spectrum::real(&xs)).unwrap();
        prop_assert_eq!(layer.len(), partitions_of(k, xs.len()).len());
        let sum: Complex64 = layer.iter().map(|(_, v)| v).sum();
        prop_assert!((sum.re - total.powi(k as i32)).abs() < 1e-10);
    }

    #[test]
    fn wishart_draws_are_positive(seed in any::<u64>(), p in 2usize..6, field in field_strategy()) {
        let f2 = FieldParams::new(field, 2).unwrap();
        let sigma = ConePoint::from_diag(&[1.0, 0.4], field).unwrap();
        let w = wishart_sample(f2, p, &sigma, &mut RngStream::new(seed, 0)).unwrap();
        prop_assert!(w.eigenvalues().iter().all(|&v| v >= -1e-12));
        prop_assert!(w.matrix().hermitian_defect() < 1e-12);
    }

    #[test]
    fn matrix_beta_lies_between_zero_and_identity(seed in any::<u64>(), p in 2usize..6, r in 2usize..6, field in field_strategy()) {
        let y = sample_matrix_beta(2, field, p, r, &mut RngStream::new(seed, 0)).unwrap();
        prop_assert!(y.eigenvalues().iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
    }

    #[test]
    fn reports_round_trip_through_json(lhs in -10.0f64..10.0, rhs in -10.0f64..10.0, tol in 1e-12f64..1.0) {
        let rep = VerificationReport::deterministic("laplace", Complex64::new(lhs, 0.0), Complex64::new(rhs, 0.0), tol)
            .param("q", 1)
            .without_timestamp();
        let text = serde_json::to_string(&rep).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.pass, rep.pass);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
