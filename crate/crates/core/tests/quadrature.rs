use conebessel::cone::ConePoint;
use conebessel::laplace::{sonine_eval, verify_laplace};
use conebessel::{Field, FieldParams};

fn rank_two(field: Field) -> FieldParams {
    FieldParams::new(field, 2).unwrap()
}

#[test]
fn laplace_error_falls_when_spacing_halves() {
    for field in [Field::R, Field::C] {
        let y = ConePoint::from_diag(&[1.0, 2.0], field).unwrap();
        let err = |n| verify_laplace(3.0, &y, rank_two(field), Some((n, n, n)), None).unwrap().abs_err;
        let (coarse, fine) = (err(12), err(24));
        assert!(fine * 4.0 <= coarse, "{field}: {coarse:e} -> {fine:e}");
    }
}

#[test]
fn rank_one_laplace_error_falls_when_spacing_halves() {
    let f1 = FieldParams::new(Field::R, 1).unwrap();
    let y = ConePoint::from_diag(&[1.0], Field::R).unwrap();
    let errors: Vec<f64> =
        [4, 8, 16].into_iter().map(|n| verify_laplace(1.5, &y, f1, Some((n, 1, 1)), None).unwrap().abs_err).collect();
    for w in errors.windows(2) {
        assert!(w[1] * 4.0 <= w[0], "{errors:?}");
    }
}

#[test]
fn sonine_error_falls_when_spacing_halves() {
    let m = ConePoint::from_diag(&[1.0, 0.5], Field::R).unwrap();
    let err = |n| sonine_eval(2.5, 2.0, &m, rank_two(Field::R), Some((n, n, n)), None).unwrap().abs_err;
    let errors: Vec<f64> = [4, 8, 16].into_iter().map(err).collect();
    for w in errors.windows(2) {
        assert!(w[1] * 4.0 <= w[0], "{errors:?}");
    }
}

#[test]
fn default_rules_meet_their_tolerances() {
    for field in [Field::R, Field::C] {
        let y = ConePoint::from_diag(&[1.0, 2.0], field).unwrap();
        let rep = verify_laplace(3.0, &y, rank_two(field), None, None).unwrap();
        assert!(rep.pass, "{}", rep.summary_line());
        assert!(rep.rel_err < 1e-8);
    }
}
