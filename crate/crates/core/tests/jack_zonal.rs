use approx::assert_relative_eq;
use num_complex::Complex64;

use conebessel::bessel::phi_mu;
use conebessel::cone::{spherical_poly_mc, ConePoint, HermMatrix, Spectrum};
use conebessel::jack::{jack_C, jack_at_ones, partitions_of, zonal_Z, Partition};
use conebessel::linalg::Matrix;
use conebessel::series::SeriesControl;
use conebessel::{Field, FieldParams};

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn jack_is_symmetric() {
    let xi = [0.9, -0.3, 0.45];
    let perms = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [1, 2, 0]];
    for alpha in [0.5, 1.0, 2.0] {
        for lambda in partitions_of(4, 3) {
            let base = jack_C(&lambda, alpha, &Spectrum::real(&xi)).unwrap();
            for p in perms {
                let permuted: Vec<f64> = p.iter().map(|&i| xi[i]).collect();
                let v = jack_C(&lambda, alpha, &Spectrum::real(&permuted)).unwrap();
                assert!((v - base).norm() < 1e-13, "alpha {alpha} lambda {lambda}");
            }
        }
    }
}

#[test]
fn jack_is_homogeneous() {
    let xi = [0.7, 0.2];
    let t = 1.7;
    for alpha in [0.5, 2.0] {
        for k in 1..=6 {
            for lambda in partitions_of(k, 2) {
                let a = jack_C(&lambda, alpha, &Spectrum::real(&[t * xi[0], t * xi[1]])).unwrap();
                let b = jack_C(&lambda, alpha, &Spectrum::real(&xi)).unwrap() * t.powi(k as i32);
                assert_relative_eq!(a.re, b.re, max_relative = 1e-12);
            }
        }
    }
}

#[test]
fn jack_at_ones_matches_evaluation() {
    for alpha in [0.5, 1.0, 2.0] {
        for lambda in partitions_of(5, 3) {
            let direct = jack_C(&lambda, alpha, &Spectrum::real(&[1.0, 1.0, 1.0])).unwrap();
            assert_relative_eq!(direct.re, jack_at_ones(&lambda, alpha, 3).unwrap(), max_relative = 1e-12);
        }
    }
}

#[test]
fn zonal_matches_haar_average_of_power_function() {
    // Phi_lambda(x) = Z_lambda(x) / Z_lambda(I)
    let samples = 200_000;
    for field in [Field::R, Field::C] {
        let fp = FieldParams::new(field, 2).unwrap();
        let x = HermMatrix::from_diag(&[1.0, 0.5], field).unwrap();
        for lambda in [part(&[1]), part(&[2]), part(&[2, 1]), part(&[3, 1])] {
            let z = zonal_Z(&lambda, fp, &Spectrum::real(&[1.0, 0.5])).unwrap().re;
            let at_identity = jack_at_ones(&lambda, fp.alpha(), 2).unwrap();
            let mc = spherical_poly_mc(&lambda, &x, fp, samples, 4).unwrap();
            let expected = z / at_identity;
            assert!(
                (mc.value.re - expected).abs() < 4.0 * mc.stderr + 1e-12,
                "{field} {lambda}: mc {} +- {} vs {expected}",
                mc.value.re,
                mc.stderr
            );
        }
    }
}

#[test]
fn phi_is_symmetric_in_its_two_arguments() {
    let ctrl = SeriesControl::default();
    for field in [Field::R, Field::C] {
        let fp = FieldParams::new(field, 2).unwrap();
        let off = if field == Field::R { Complex64::new(0.3, 0.0) } else { Complex64::new(0.2, -0.25) };
        let one = Complex64::new(1.0, 0.0);
        let s = Matrix::from_rows(2, 2, vec![one, off, off.conj(), Complex64::new(0.6, 0.0)]).unwrap();
        let r = Matrix::from_rows(2, 2, vec![Complex64::new(1.2, 0.0), off.conj(), off, Complex64::new(0.8, 0.0)]).unwrap();
        let rp = ConePoint::from_matrix(r.clone(), field).unwrap();
        let sp = ConePoint::from_matrix(s.clone(), field).unwrap();
        for mu in [1.5, 3.0] {
            let mu = Complex64::new(mu, 0.0);
            let a = phi_mu(&s, &rp, mu, fp, &ctrl).unwrap().require().unwrap();
            let b = phi_mu(&r, &sp, mu, fp, &ctrl).unwrap().require().unwrap();
            assert!((a - b).norm() < 1e-12, "{field}: {a} vs {b}");
        }
    }
}
