//! Small dense complex matrices.
//!
//! Everything here targets the tiny dimensions of the cones we work on
//! (q <= 8, occasionally p <= 16 for Haar samples), so the algorithms are the
//! textbook ones: cyclic Jacobi for Hermitian spectra, Cholesky without
//! pivoting, Faddeev-LeVerrier plus Aberth iteration for non-normal spectra.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop, relative to
/// the Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from row-major complex entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::validation(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Matrix::from_rows(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_complex_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn scale_complex(&self, c: Complex64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// (A + A*) / 2.
    pub fn hermitian_part(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Upper-left `k x l` block.
    pub fn block(&self, k: usize, l: usize) -> Matrix {
        Matrix::from_fn(k, l, |i, j| self[(i, j)])
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        self.block(self.rows, k)
    }

    /// Real part of tr(A* B), the real Euclidean pairing on rectangular matrices.
    pub fn real_pairing(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// tr(A B) without forming the product.
    pub fn trace_of_product(&self, other: &Matrix) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap();
            if a[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for i in col + 1..n {
                let factor = a[i * n + col] / p;
                if factor != ZERO {
                    for j in col..n {
                        let v = a[col * n + j];
                        a[i * n + j] -= factor * v;
                    }
                }
            }
        }
        det
    }

    /// Leading principal minors det(A[..i, ..i]) for i = 1..=n.
    pub fn principal_minors(&self) -> Vec<Complex64> {
        (1..=self.rows).map(|k| self.block(k, k).det()).collect()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::validation("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm())).unwrap();
            if a[(pivot, col)].norm() <= 1e-14 * scale {
                return Err(Error::domain("matrix is numerically singular"));
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for i in 0..n {
                if i != col {
                    let factor = a[(i, col)];
                    if factor != ZERO {
                        for j in 0..n {
                            let (av, iv) = (a[(col, j)], inv[(col, j)]);
                            a[(i, j)] -= factor * av;
                            inv[(i, j)] -= factor * iv;
                        }
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Lower-triangular Cholesky factor `L` with `L L* = self` and positive
    /// real diagonal. Only the lower triangle of `self` is read.
    pub fn cholesky(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::validation("Cholesky of a non-square matrix"));
        }
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut diag = self[(j, j)].re;
            for k in 0..j {
                diag -= l[(j, k)].norm_sqr();
            }
            if !(diag > 0.0) {
                return Err(Error::Numerical(format!("Cholesky breakdown at pivot {j}")));
            }
            let ljj = diag.sqrt();
            l[(j, j)] = Complex64::new(ljj, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(l)
    }

    /// Inverse of a lower-triangular matrix by forward substitution.
    pub fn lower_triangular_inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            if self[(j, j)] == ZERO {
                return Err(Error::domain("singular triangular matrix"));
            }
            inv[(j, j)] = self[(j, j)].inv();
            for i in j + 1..n {
                let mut s = ZERO;
                for k in j..i {
                    s += self[(i, k)] * inv[(k, j)];
                }
                inv[(i, j)] = -s / self[(i, i)];
            }
        }
        Ok(inv)
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues (unsorted) and the unitary matrix whose columns are
    /// the matching eigenvectors. The input is assumed Hermitian; only its
    /// Hermitian part is used.
    pub fn eigh(&self) -> (Vec<f64>, Matrix) {
        assert!(self.is_square(), "eigh of a non-square matrix");
        let n = self.rows;
        let mut a = self.hermitian_part();
        let mut v = Matrix::identity(n);
        let norm = a.frobenius();
        if norm == 0.0 || n == 1 {
            return ((0..n).map(|i| a[(i, i)].re).collect(), v);
        }
        let target = JACOBI_TOL * norm;
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= target {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let r = apq.norm();
                    if r <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let phase = apq / r;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let theta = (aqq - app) / (2.0 * r);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    // J = [[c, s*phase], [-s*conj(phase), c]] restricted to
                    // (p, q); a <- J* a J zeroes a[p][q].
                    let jpp = Complex64::new(c, 0.0);
                    let jpq = phase * s;
                    let jqp = -phase.conj() * s;
                    let jqq = Complex64::new(c, 0.0);
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * jpp + akq * jqp;
                        a[(k, q)] = akp * jpq + akq * jqq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                    }
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * jpp + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
        ((0..n).map(|i| a[(i, i)].re).collect(), v)
    }

    /// Eigenvalues of a Hermitian matrix, no vectors.
    pub fn eigvalsh(&self) -> Vec<f64> {
        let n = self.rows;
        match n {
            1 => vec![self[(0, 0)].re],
            2 => {
                // closed form is exact enough and much cheaper in hot loops
                let a = self[(0, 0)].re;
                let d = self[(1, 1)].re;
                let b = (self[(0, 1)] + self[(1, 0)].conj()) * 0.5;
                let mean = 0.5 * (a + d);
                let half = 0.5 * (a - d);
                let rad = (half * half + b.norm_sqr()).sqrt();
                vec![mean + rad, mean - rad]
            }
            _ => self.eigh().0,
        }
    }

    /// Characteristic polynomial coefficients `c[0..=n]` of det(zI - A),
    /// lowest degree first, `c[n] = 1` (Faddeev-LeVerrier).
    pub fn char_poly(&self) -> Vec<Complex64> {
        let n = self.rows;
        let mut c = vec![ZERO; n + 1];
        c[n] = ONE;
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += c[n - k + 1];
            }
            let am = self * &next;
            c[n - k] = -am.trace() / k as f64;
            m = next;
        }
        c
    }

    /// Eigenvalues of a general square complex matrix.
    pub fn eigvals(&self) -> Vec<Complex64> {
        assert!(self.is_square(), "eigvals of a non-square matrix");
        match self.rows {
            0 => vec![],
            1 => vec![self[(0, 0)]],
            2 => {
                let tr = self[(0, 0)] + self[(1, 1)];
                let det = self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)];
                let half = tr * 0.5;
                let disc = (half * half - det).sqrt();
                // pick the larger-magnitude root first, recover the other from det
                let r1 = if (half + disc).norm() >= (half - disc).norm() { half + disc } else { half - disc };
                let r2 = if r1.norm() > 0.0 { det / r1 } else { half - disc };
                vec![r1, r2]
            }
            _ => polynomial_roots(&self.char_poly()),
        }
    }
}

/// Roots of a monic-or-not complex polynomial (lowest degree first) by Aberth
/// iteration followed by Newton polishing.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let c: Vec<Complex64> = coeffs.iter().map(|z| z / lead).collect();
    if deg == 0 {
        return vec![];
    }
    if deg == 1 {
        return vec![-c[0]];
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = c[deg];
        let mut dp = ZERO;
        for k in (0..deg).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        (p, dp)
    };
    // Cauchy bound for the initial circle
    let radius = 1.0 + c[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval(roots[i]);
            if p == ZERO {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (roots[i] - roots[j]).inv())
                .sum();
            let step = ratio / (ONE - ratio * repulsion);
            roots[i] -= step;
            moved = moved.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if moved < 1e-16 {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*r);
            if dp == ZERO {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    roots
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in difference");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_hermitian() -> Matrix {
        Matrix::from_rows(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.5, 0.3),
                c(-0.2, 0.1),
                c(0.5, -0.3),
                c(1.0, 0.0),
                c(0.4, 0.0),
                c(-0.2, -0.1),
                c(0.4, 0.0),
                c(-0.7, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn jacobi_reconstructs() {
        let a = sample_hermitian();
        let (vals, v) = a.eigh();
        let rebuilt = &(&v * &Matrix::from_diag(&vals)) * &v.adjoint();
        assert!((&rebuilt - &a).max_abs() < 1e-12);
        let unit = &v.adjoint() * &v;
        assert!((&unit - &Matrix::identity(3)).max_abs() < 1e-12);
        let mut sorted = vals.clone();
        sorted.sort_by(|x, y| y.total_cmp(x));
        let mut closed = a.eigvals();
        closed.sort_by(|x, y| y.re.total_cmp(&x.re));
        for (x, z) in sorted.iter().zip(&closed) {
            assert!((x - z.re).abs() < 1e-10 && z.im.abs() < 1e-10);
        }
    }

    #[test]
    fn two_by_two_closed_form_matches_jacobi() {
        let a = Matrix::from_rows(2, 2, vec![c(1.5, 0.0), c(0.2, -0.7), c(0.2, 0.7), c(-0.3, 0.0)]).unwrap();
        let mut j = a.eigh().0;
        j.sort_by(|x, y| y.total_cmp(x));
        let cf = a.eigvalsh();
        assert!((j[0] - cf[0]).abs() < 1e-13 && (j[1] - cf[1]).abs() < 1e-13);
    }

    #[test]
    fn det_and_inverse() {
        let a = sample_hermitian();
        let inv = a.inverse().unwrap();
        assert!((&(&a * &inv) - &Matrix::identity(3)).max_abs() < 1e-12);
        let prod: Complex64 = a.eigvals().iter().product();
        assert!((a.det() - prod).norm() < 1e-12);
        assert!(Matrix::zeros(2, 2).inverse().is_err());
    }

    #[test]
    fn cholesky_round_trip() {
        let a = Matrix::from_rows(2, 2, vec![c(4.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)]).unwrap();
        let l = a.cholesky().unwrap();
        assert!((&(&l * &l.adjoint()) - &a).max_abs() < 1e-14);
        let linv = l.lower_triangular_inverse().unwrap();
        assert!((&(&l * &linv) - &Matrix::identity(2)).max_abs() < 1e-14);
        let indefinite = Matrix::from_diag(&[1.0, -1.0]);
        assert!(indefinite.cholesky().is_err());
    }

    #[test]
    fn general_eigenvalues_of_non_normal_matrix() {
        // complex symmetric, not Hermitian
        let a = Matrix::from_rows(
            3,
            3,
            vec![c(1.0, 1.0), c(0.5, 0.0), c(0.0, 0.2), c(0.5, 0.0), c(-1.0, 0.5), c(0.3, 0.0), c(0.0, 0.2), c(0.3, 0.0), c(2.0, -0.5)],
        )
        .unwrap();
        let roots = a.eigvals();
        let tr: Complex64 = roots.iter().sum();
        let det: Complex64 = roots.iter().product();
        assert!((tr - a.trace()).norm() < 1e-12);
        assert!((det - a.det()).norm() < 1e-12);
        for r in roots {
            let shifted = &a - &Matrix::identity(3).scale_complex(r);
            assert!(shifted.det().norm() < 1e-10);
        }
    }

    #[test]
    fn char_poly_of_diagonal() {
        let a = Matrix::from_diag(&[1.0, 2.0, 3.0]);
        let p = a.char_poly();
        let expect = [-6.0, 11.0, -6.0, 1.0];
        for (x, y) in p.iter().zip(expect) {
            assert!((x.re - y).abs() < 1e-12 && x.im.abs() < 1e-12);
        }
    }
}
