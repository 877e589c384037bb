//! Hermitian matrices, cone points, spectra and the ball `B_q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldParams};
use crate::jack::Partition;
use crate::linalg::Matrix;
use crate::mc::{McEstimate, RngStream};

/// Tolerance on `A - A*` accepted by [`HermMatrix::new`], relative to `1 + max|A|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Negative eigenvalues above `-PSD_CLAMP * ||x||` are rounded to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Hermitian `q x q` matrix over R or C.
#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix {
    m: Matrix,
    field: Field,
}

impl HermMatrix {
    /// Validates and symmetrizes. Quaternionic matrices are rejected.
    pub fn new(m: Matrix, field: Field) -> Result<Self> {
        if field == Field::H {
            return Err(Error::Unsupported(
                "quaternionic matrices are represented by their spectrum only".into(),
            ));
        }
        if !m.is_square() {
            return Err(Error::validation(format!("matrix is {}x{}, not square", m.rows(), m.cols())));
        }
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL * (1.0 + m.max_abs()) {
            return Err(Error::validation(format!("matrix is not Hermitian (defect {defect:.3e})")));
        }
        let mut h = m.hermitian_part();
        if field == Field::R {
            let imag = h.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if imag > HERMITIAN_TOL * (1.0 + h.max_abs()) {
                return Err(Error::validation("real field requires real entries"));
            }
            h = Matrix::from_fn(h.rows(), h.cols(), |i, j| Complex64::new(h[(i, j)].re, 0.0));
        }
        Ok(HermMatrix { m: h, field })
    }

    pub fn from_diag(diag: &[f64], field: Field) -> Result<Self> {
        HermMatrix::new(Matrix::from_diag(diag), field)
    }

    pub fn zeros(q: usize, field: Field) -> Result<Self> {
        HermMatrix::new(Matrix::zeros(q, q), field)
    }

    pub fn identity(q: usize, field: Field) -> Result<Self> {
        HermMatrix::new(Matrix::identity(q), field)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> usize {
        self.m.rows()
    }

    /// Eigenvalues, descending, and matching eigenvector columns.
    pub fn eigh_ordered(&self) -> (Vec<f64>, Matrix) {
        let (vals, vecs) = self.m.eigh();
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        let sorted: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        let u = Matrix::from_fn(vecs.rows(), vecs.cols(), |i, j| vecs[(i, order[j])]);
        (sorted, u)
    }
}

/// Positive semidefinite Hermitian matrix, with its eigen-decomposition cached.
#[derive(Clone, Debug)]
pub struct ConePoint {
    h: HermMatrix,
    eigvals: Vec<f64>,
    eigvecs: Matrix,
}

impl ConePoint {
    pub fn new(h: HermMatrix) -> Result<Self> {
        let (mut vals, vecs) = h.eigh_ordered();
        let scale = vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        for v in vals.iter_mut() {
            if *v < 0.0 {
                if *v < -PSD_CLAMP * scale.max(f64::MIN_POSITIVE) {
                    return Err(Error::domain(format!("matrix has negative eigenvalue {v:.3e}")));
                }
                *v = 0.0;
            }
        }
        Ok(ConePoint { h, eigvals: vals, eigvecs: vecs })
    }

    pub fn from_matrix(m: Matrix, field: Field) -> Result<Self> {
        ConePoint::new(HermMatrix::new(m, field)?)
    }

    pub fn from_diag(diag: &[f64], field: Field) -> Result<Self> {
        ConePoint::new(HermMatrix::from_diag(diag, field)?)
    }

    pub fn zeros(q: usize, field: Field) -> Result<Self> {
        ConePoint::new(HermMatrix::zeros(q, field)?)
    }

    pub fn identity(q: usize, field: Field) -> Result<Self> {
        ConePoint::new(HermMatrix::identity(q, field)?)
    }

    /// Symmetrize and clamp a matrix that is PSD up to round-off, e.g. a
    /// product `a b a` computed in floating point.
    pub fn from_roundoff(m: &Matrix, field: Field) -> Result<Self> {
        let sym = m.hermitian_part();
        let sym = if field == Field::R {
            Matrix::from_fn(sym.rows(), sym.cols(), |i, j| Complex64::new(sym[(i, j)].re, 0.0))
        } else {
            sym
        };
        ConePoint::from_matrix(sym, field)
    }

    pub fn herm(&self) -> &HermMatrix {
        &self.h
    }

    pub fn matrix(&self) -> &Matrix {
        self.h.matrix()
    }

    pub fn field(&self) -> Field {
        self.h.field()
    }

    pub fn q(&self) -> usize {
        self.h.q()
    }

    /// Clamped eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigvecs
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::chamber(self.eigvals.clone())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eigvals.last().is_some_and(|&v| v > 0.0)
    }

    /// Spectral function `u f(diag) u*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let d: Vec<f64> = self.eigvals.iter().map(|&v| f(v)).collect();
        let u = &self.eigvecs;
        &(u * &Matrix::from_diag(&d)) * &u.adjoint()
    }

    pub fn det(&self) -> f64 {
        self.eigvals.iter().product()
    }

    /// `x <= I` in the Loewner order, with tolerance.
    pub fn below_identity(&self, tol: f64) -> bool {
        self.eigvals.first().is_none_or(|&v| v <= 1.0 + tol)
    }
}

/// Square root of a cone point.
pub fn psd_sqrt(x: &ConePoint) -> ConePoint {
    let root = x.map_spectrum(f64::sqrt);
    ConePoint::from_roundoff(&root, x.field()).expect("square root of a PSD matrix is PSD")
}

/// Ordering of a [`Spectrum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ordering {
    /// Real entries sorted descending.
    Chamber,
    /// As supplied.
    Raw,
}

/// Eigenvalue vector, possibly complex.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    ordering: Ordering,
}

impl Spectrum {
    /// Real values, sorted descending.
    pub fn chamber(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum { values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(), ordering: Ordering::Chamber }
    }

    pub fn real(values: &[f64]) -> Self {
        Spectrum { values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), ordering: Ordering::Raw }
    }

    pub fn complex(values: Vec<Complex64>) -> Self {
        Spectrum { values, ordering: Ordering::Raw }
    }

    pub fn zeros(q: usize) -> Self {
        Spectrum::chamber(vec![0.0; q])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn scale(&self, c: Complex64) -> Spectrum {
        Spectrum { values: self.values.iter().map(|z| z * c).collect(), ordering: Ordering::Raw }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Spectrum {
        Spectrum { values: self.values.iter().map(|&z| f(z)).collect(), ordering: Ordering::Raw }
    }

    /// Sum of absolute values.
    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Deterministic total order (by real part, then imaginary, descending),
    /// so that any permutation of the same multiset maps to the same vector.
    pub fn canonical(&self) -> Spectrum {
        let mut v = self.values.clone();
        v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        let ordering = if v.iter().all(|z| z.im == 0.0) { Ordering::Chamber } else { Ordering::Raw };
        Spectrum { values: v, ordering }
    }
}

/// Descending real spectrum of a Hermitian matrix.
pub fn eigvals_ordered(x: &HermMatrix) -> Spectrum {
    Spectrum::chamber(x.eigh_ordered().0)
}

/// Rectangular `p x q` matrix over R or C.
#[derive(Clone, Debug, PartialEq)]
pub struct RectMatrix {
    m: Matrix,
    field: Field,
}

impl RectMatrix {
    pub fn new(m: Matrix, field: Field) -> Result<Self> {
        if field == Field::H {
            return Err(Error::Unsupported("quaternionic matrices are not materialized".into()));
        }
        if field == Field::R && !m.is_real() {
            return Err(Error::validation("real field requires real entries"));
        }
        Ok(RectMatrix { m, field })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Operator norm, the largest singular value.
    pub fn op_norm(&self) -> f64 {
        let gram = &self.m.adjoint() * &self.m;
        gram.eigvalsh().into_iter().fold(0.0, f64::max).max(0.0).sqrt()
    }

    /// Membership in the open ball `B_q`.
    pub fn in_ball(&self) -> bool {
        self.op_norm() < 1.0
    }

    /// `w* w` as a cone point.
    pub fn gram(&self) -> ConePoint {
        ConePoint::from_roundoff(&(&self.m.adjoint() * &self.m), self.field).expect("Gram matrix is PSD")
    }
}

/// Generalized power function `Delta_lambda(x) = prod_i Delta_i(x)^(lambda_i - lambda_{i+1})`
/// built from the leading principal minors.
pub fn power_function(x: &HermMatrix, lambda: &Partition) -> Result<Complex64> {
    let q = x.q();
    if lambda.len() > q {
        return Err(Error::validation(format!("partition {lambda} has more than {q} parts")));
    }
    let minors = x.matrix().principal_minors();
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..q {
        let e = lambda.part(i) - lambda.part(i + 1);
        if e > 0 {
            acc *= minors[i].powu(e as u32);
        }
    }
    Ok(acc)
}

/// Monte Carlo estimate of `Phi_lambda(x) = int_{U_q} Delta_lambda(u x u*) du`.
pub fn spherical_poly_mc(
    lambda: &Partition,
    x: &HermMatrix,
    fp: FieldParams,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    fp.require_matrix_field()?;
    if samples < 100 {
        return Err(Error::validation("spherical_poly_mc needs at least 100 samples"));
    }
    if x.q() != fp.q {
        return Err(Error::validation("matrix size does not match rank"));
    }
    let m = x.matrix().clone();
    let field = fp.field;
    crate::mc::parallel_mean(samples, seed, move |rng: &mut RngStream| {
        let u = crate::measures::haar_unitary(fp.q, field, rng).expect("matrix field checked");
        let conj = &(&u * &m) * &u.adjoint();
        let h = HermMatrix::new(conj.hermitian_part(), field).expect("conjugate is Hermitian");
        power_function(&h, lambda).expect("rank checked")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_spectra() {
        let x = HermMatrix::from_diag(&[1.0, 3.0], Field::R).unwrap();
        assert_eq!(eigvals_ordered(&x).real_parts(), vec![3.0, 1.0]);
        let id = HermMatrix::identity(3, Field::C).unwrap();
        assert_eq!(eigvals_ordered(&id).real_parts(), vec![1.0; 3]);
    }

    #[test]
    fn quaternionic_matrices_rejected() {
        assert!(matches!(HermMatrix::from_diag(&[1.0], Field::H), Err(Error::Unsupported(_))));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Matrix::from_real_rows(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(HermMatrix::new(m, Field::R).is_err());
    }

    #[test]
    fn sqrt_of_diagonal() {
        let x = ConePoint::from_diag(&[4.0, 9.0], Field::R).unwrap();
        let r = psd_sqrt(&x);
        assert!((r.matrix() - &Matrix::from_diag(&[2.0, 3.0])).max_abs() < 1e-14);
        let z = psd_sqrt(&ConePoint::zeros(2, Field::R).unwrap());
        assert_eq!(z.matrix().max_abs(), 0.0);
    }

    #[test]
    fn clamp_versus_error() {
        assert!(ConePoint::from_diag(&[1.0, -1e-12], Field::R).is_ok());
        assert!(matches!(ConePoint::from_diag(&[1.0, -1e-3], Field::R), Err(Error::Domain(_))));
    }

    #[test]
    fn power_function_examples() {
        let id = HermMatrix::identity(3, Field::R).unwrap();
        let lam = Partition::new(vec![3, 1]).unwrap();
        assert!((power_function(&id, &lam).unwrap() - 1.0).norm() < 1e-15);
        let x = HermMatrix::new(Matrix::from_real_rows(2, 2, &[2.0, 0.5, 0.5, 1.0]).unwrap(), Field::R).unwrap();
        let k3 = Partition::new(vec![3]).unwrap();
        assert!((power_function(&x, &k3).unwrap() - 8.0).norm() < 1e-14);
        let d = HermMatrix::from_diag(&[2.0, 3.0], Field::R).unwrap();
        let one_one = Partition::new(vec![1, 1]).unwrap();
        assert!((power_function(&d, &one_one).unwrap() - 6.0).norm() < 1e-14);
    }

    #[test]
    fn ball_membership() {
        let w = RectMatrix::new(Matrix::from_real_rows(2, 2, &[0.5, 0.3, 0.0, 0.2]).unwrap(), Field::R).unwrap();
        assert!(w.in_ball());
        let big = RectMatrix::new(Matrix::from_real_rows(1, 2, &[0.8, 0.8]).unwrap(), Field::R).unwrap();
        assert!(!big.in_ball());
    }
}
