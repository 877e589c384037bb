//! Partitions, Jack polynomials `C_lambda^alpha` and generalized Pochhammer symbols.
//!
//! Jack polynomials are evaluated with the branching rule over horizontal
//! strips in the `P` normalization,
//!
//! ```text
//! P_lambda(x_1..x_m) = sum_mu psi_{lambda/mu} x_m^{|lambda|-|mu|} P_mu(x_1..x_{m-1}),
//! ```
//!
//! summed over `mu` interlacing `lambda`, and converted to the `C`
//! normalization with `C_lambda = alpha^k k! / c'_lambda * P_lambda`,
//! `c'_lambda = prod_s (alpha*a(s) + l(s) + alpha)`.
//!
//! The branching coefficients only depend on `(alpha, number of variables)`,
//! so they live in a [`JackTable`] shared through a process-wide registry.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::Spectrum;
use crate::error::{Error, Result};
use crate::field::FieldParams;

/// Integer partition, parts strictly positive and non-increasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Trailing zeros are dropped; anything else out of order is an error.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation(format!("parts {parts:?} are not non-increasing")));
        }
        if parts.contains(&0) {
            return Err(Error::validation("zero part before a positive part"));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of positive parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |lambda|.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        Partition((1..=width).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Cells `(i, j)`, 0-based row and column.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::validation(format!("bad partition part {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Partitions of `k` with at most `max_parts` parts, reverse-lexicographic.
pub fn partitions_of(k: usize, max_parts: usize) -> Vec<Partition> {
    fn rec(remaining: usize, cap: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=cap.min(remaining)).rev() {
            // remaining mass must fit in the remaining slots
            if p * slots < remaining {
                break;
            }
            cur.push(p);
            rec(remaining - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, max_parts, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight `0..=k_max` with at most `max_parts` parts,
/// grouped by weight.
pub fn partitions_up_to(k_max: usize, max_parts: usize) -> Vec<Vec<Partition>> {
    (0..=k_max).map(|k| partitions_of(k, max_parts)).collect()
}

/// Generalized Pochhammer symbol `(mu)_lambda^alpha`.
pub fn pochhammer_gen(mu: Complex64, lambda: &Partition, alpha: f64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &p) in lambda.parts().iter().enumerate() {
        let base = mu - j as f64 / alpha;
        for i in 0..p {
            acc *= base + i as f64;
        }
    }
    acc
}

/// `b_lambda(s) = (alpha a + l + 1) / (alpha a + l + alpha)` with arm/leg taken
/// from the partition and its conjugate.
fn b_factor(parts: &[usize], conj: &[usize], i: usize, j: usize, alpha: f64) -> f64 {
    let arm = (parts[i] - j - 1) as f64;
    let leg = (conj[j] - i - 1) as f64;
    (alpha * arm + leg + 1.0) / (alpha * arm + leg + alpha)
}

/// Branching coefficient `psi_{lambda/mu}` for a horizontal strip `lambda/mu`.
fn psi_coefficient(lambda: &Partition, mu: &Partition, alpha: f64) -> f64 {
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let rows: Vec<usize> = (0..lambda.len()).filter(|&i| mu.part(i) < lambda.part(i)).collect();
    let mut acc = 1.0;
    for &i in &rows {
        for j in 0..mu.part(i) {
            // skip columns that meet the strip
            if mc.part(j) < lc.part(j) {
                continue;
            }
            acc *= b_factor(mu.parts(), mc.parts(), i, j, alpha) / b_factor(lambda.parts(), lc.parts(), i, j, alpha);
        }
    }
    acc
}

/// `alpha^k k! / c'_lambda`, accumulated cell by cell to stay in range.
fn p_to_c(lambda: &Partition, alpha: f64) -> f64 {
    let conj = lambda.conjugate();
    let mut acc = 1.0;
    for (t, (i, j)) in lambda.cells().enumerate() {
        let arm = (lambda.part(i) - j - 1) as f64;
        let leg = (conj.part(j) - i - 1) as f64;
        acc *= alpha * (t + 1) as f64 / (alpha * arm + leg + alpha);
    }
    acc
}

#[derive(Clone, Copy, Debug)]
struct Branch {
    degree: u32,
    index: u32,
    coef: f64,
}

/// Partitions of one degree at one level, with branches into the level below.
#[derive(Clone, Debug, Default)]
struct Layer {
    parts: Vec<Partition>,
    offsets: Vec<u32>,
    branches: Vec<Branch>,
}

/// Branching data for Jack polynomials in a fixed number of variables and
/// fixed `alpha`, up to some degree.
#[derive(Debug)]
pub struct JackTable {
    nvars: usize,
    alpha: f64,
    degree: usize,
    /// `levels[m-1][k]`: partitions of `k` with at most `m` parts.
    levels: Vec<Vec<Layer>>,
    index: HashMap<Partition, (usize, usize)>,
    to_c: Vec<Vec<f64>>,
    at_ones: Vec<Vec<f64>>,
}

impl JackTable {
    fn build(nvars: usize, alpha: f64, degree: usize) -> JackTable {
        let mut levels: Vec<Vec<Layer>> = Vec::with_capacity(nvars);
        for m in 1..=nvars {
            let mut level = Vec::with_capacity(degree + 1);
            let below: Option<HashMap<&Partition, (usize, usize)>> = (m > 1).then(|| {
                levels[m - 2]
                    .iter()
                    .enumerate()
                    .flat_map(|(k, layer): (usize, &Layer)| {
                        layer.parts.iter().enumerate().map(move |(i, p)| (p, (k, i)))
                    })
                    .collect()
            });
            for k in 0..=degree {
                let parts = partitions_of(k, m);
                let mut layer = Layer { offsets: vec![0], ..Default::default() };
                if let Some(below) = &below {
                    for lam in &parts {
                        for mu in interlacing(lam, m) {
                            let (deg, idx) = below[&mu];
                            layer.branches.push(Branch {
                                degree: deg as u32,
                                index: idx as u32,
                                coef: psi_coefficient(lam, &mu, alpha),
                            });
                        }
                        layer.offsets.push(layer.branches.len() as u32);
                    }
                }
                layer.parts = parts;
                level.push(layer);
            }
            drop(below);
            levels.push(level);
        }
        let top = &levels[nvars - 1];
        let index = top
            .iter()
            .enumerate()
            .flat_map(|(k, layer)| layer.parts.iter().enumerate().map(move |(i, p)| (p.clone(), (k, i))))
            .collect();
        let to_c: Vec<Vec<f64>> = top.iter().map(|layer| layer.parts.iter().map(|p| p_to_c(p, alpha)).collect()).collect();
        let mut table = JackTable { nvars, alpha, degree, levels, index, to_c, at_ones: Vec::new() };
        let mut ev = JackEvaluator::<f64>::new_unchecked(&table, &vec![1.0; nvars]);
        let mut at_ones = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            ev.advance(&table);
            at_ones.push(ev.c_values(&table, k));
        }
        table.at_ones = at_ones;
        table
    }

    /// Shared table with at least the requested degree.
    pub fn get(nvars: usize, alpha: f64, degree: usize) -> Result<Arc<JackTable>> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::validation(format!("Jack parameter alpha must be positive, got {alpha}")));
        }
        if nvars == 0 {
            return Err(Error::validation("need at least one variable"));
        }
        type Registry = Mutex<HashMap<(usize, u64), Arc<JackTable>>>;
        static REGISTRY: OnceLock<Registry> = OnceLock::new();
        let registry = REGISTRY.get_or_init(Default::default);
        let key = (nvars, alpha.to_bits());
        if let Some(t) = registry.lock().expect("registry poisoned").get(&key) {
            if t.degree >= degree {
                return Ok(Arc::clone(t));
            }
        }
        // build outside the lock; a concurrent duplicate build is harmless
        let target = degree.max(8);
        let table = Arc::new(JackTable::build(nvars, alpha, target));
        let mut guard = registry.lock().expect("registry poisoned");
        let entry = guard.entry(key).or_insert_with(|| Arc::clone(&table));
        if entry.degree < table.degree {
            *entry = Arc::clone(&table);
        }
        Ok(Arc::clone(entry))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Partitions of degree `k` (at most `nvars` parts) in evaluation order.
    pub fn partitions(&self, k: usize) -> &[Partition] {
        &self.levels[self.nvars - 1][k].parts
    }

    /// Position of `lambda` in [`JackTable::partitions`].
    pub fn locate(&self, lambda: &Partition) -> Option<(usize, usize)> {
        self.index.get(lambda).copied()
    }

    /// `C_lambda(1, ..., 1)` for every partition of degree `k`.
    pub fn ones(&self, k: usize) -> &[f64] {
        &self.at_ones[k]
    }

    /// Conversion factors `C_lambda / P_lambda` for degree `k`.
    pub fn p_to_c(&self, k: usize) -> &[f64] {
        &self.to_c[k]
    }
}

/// Partitions `mu` with `lambda_{i+1} <= mu_i <= lambda_i` and at most `m - 1` parts.
fn interlacing(lambda: &Partition, m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m - 1];
    fn rec(i: usize, lambda: &Partition, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == cur.len() {
            out.push(Partition::new(cur.clone()).expect("interlacing keeps order"));
            return;
        }
        for v in lambda.part(i + 1)..=lambda.part(i) {
            cur[i] = v;
            rec(i + 1, lambda, cur, out);
        }
    }
    rec(0, lambda, &mut cur, &mut out);
    out
}

/// Field of Jack evaluation: `f64` or `Complex64`.
pub trait Scalar:
    Copy + Send + Sync + Add<Output = Self> + AddAssign + Mul<Output = Self> + Mul<f64, Output = Self> + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Degree-by-degree evaluation of all `P_lambda` at one point.
///
/// Each call to [`JackEvaluator::advance`] computes the next degree at every
/// level, reusing lower degrees.
pub struct JackEvaluator<S: Scalar> {
    x: Vec<S>,
    /// `vals[m-1][k][i]`
    vals: Vec<Vec<Vec<S>>>,
    /// `pows[m-1][e] = x_m^e`
    pows: Vec<Vec<S>>,
    next: usize,
}

impl<S: Scalar> JackEvaluator<S> {
    /// `x.len()` must equal `table.nvars()`.
    pub fn new(table: &JackTable, x: &[S]) -> Result<Self> {
        if x.len() != table.nvars {
            return Err(Error::validation(format!(
                "table built for {} variables, got {}",
                table.nvars,
                x.len()
            )));
        }
        Ok(Self::new_unchecked(table, x))
    }

    fn new_unchecked(table: &JackTable, x: &[S]) -> Self {
        JackEvaluator {
            x: x.to_vec(),
            vals: vec![Vec::with_capacity(table.degree + 1); table.nvars],
            pows: vec![vec![S::one()]; table.nvars],
            next: 0,
        }
    }

    /// Degree that the next call to `advance` will compute.
    pub fn next_degree(&self) -> usize {
        self.next
    }

    /// Compute degree `next_degree()`; returns it.
    pub fn advance(&mut self, table: &JackTable) -> usize {
        let k = self.next;
        assert!(k <= table.degree, "Jack table degree {} exceeded", table.degree);
        for m in 0..table.nvars {
            if k > 0 {
                let p = *self.pows[m].last().unwrap() * self.x[m];
                self.pows[m].push(p);
            }
            let layer = &table.levels[m][k];
            let mut out = Vec::with_capacity(layer.parts.len());
            if m == 0 {
                out.push(self.pows[0][k]);
            } else {
                let below = &self.vals[m - 1];
                let pows = &self.pows[m];
                for i in 0..layer.parts.len() {
                    let (lo, hi) = (layer.offsets[i] as usize, layer.offsets[i + 1] as usize);
                    let mut acc = S::zero();
                    for b in &layer.branches[lo..hi] {
                        let j = b.degree as usize;
                        acc += below[j][b.index as usize] * pows[k - j] * b.coef;
                    }
                    out.push(acc);
                }
            }
            self.vals[m].push(out);
        }
        self.next += 1;
        k
    }

    /// `P_lambda(x)` for the partitions of degree `k` (already computed).
    pub fn p_values(&self, k: usize) -> &[S] {
        &self.vals[self.vals.len() - 1][k]
    }

    /// `C_lambda(x)` for the partitions of degree `k` (already computed).
    pub fn c_values(&self, table: &JackTable, k: usize) -> Vec<S> {
        self.p_values(k).iter().zip(&table.to_c[k]).map(|(&p, &c)| p * c).collect()
    }
}

/// `C_lambda^alpha(xi)`; zero when `lambda` has more parts than `xi` has entries.
#[allow(non_snake_case)]
pub fn jack_C(lambda: &Partition, alpha: f64, xi: &Spectrum) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::validation(format!("Jack parameter alpha must be positive, got {alpha}")));
    }
    if xi.is_empty() {
        return Err(Error::validation("empty spectrum"));
    }
    if lambda.len() > xi.len() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = lambda.weight();
    let table = JackTable::get(xi.len(), alpha, k)?;
    let (_, idx) = table.locate(lambda).expect("partition fits the table");
    if xi.is_real() {
        let mut ev = JackEvaluator::new(&table, &xi.real_parts())?;
        while ev.next_degree() <= k {
            ev.advance(&table);
        }
        Ok(Complex64::new(ev.p_values(k)[idx] * table.to_c[k][idx], 0.0))
    } else {
        let mut ev = JackEvaluator::new(&table, xi.values())?;
        while ev.next_degree() <= k {
            ev.advance(&table);
        }
        Ok(ev.p_values(k)[idx] * table.to_c[k][idx])
    }
}

/// All `C_lambda^alpha(xi)` with `|lambda| = k`, in [`partitions_of`] order.
#[allow(non_snake_case)]
pub fn jack_C_layer(k: usize, alpha: f64, xi: &Spectrum) -> Result<Vec<(Partition, Complex64)>> {
    let table = JackTable::get(xi.len(), alpha, k)?;
    let mut ev = JackEvaluator::new(&table, xi.values())?;
    while ev.next_degree() <= k {
        ev.advance(&table);
    }
    Ok(table.partitions(k).iter().cloned().zip(ev.c_values(&table, k)).collect())
}

/// Zonal polynomial `Z_lambda(x) = C_lambda^{2/d}(eig x)`.
#[allow(non_snake_case)]
pub fn zonal_Z(lambda: &Partition, fp: FieldParams, x: &Spectrum) -> Result<Complex64> {
    if x.len() != fp.q {
        return Err(Error::validation(format!("spectrum length {} does not match rank {}", x.len(), fp.q)));
    }
    jack_C(lambda, fp.alpha(), x)
}

/// `C_lambda^alpha(1, ..., 1)` with `q` ones; zero if `lambda` has more than `q` parts.
pub fn jack_at_ones(lambda: &Partition, alpha: f64, q: usize) -> Result<f64> {
    if lambda.len() > q {
        return Ok(0.0);
    }
    let table = JackTable::get(q, alpha, lambda.weight())?;
    let (k, idx) = table.locate(lambda).expect("partition fits the table");
    Ok(table.at_ones[k][idx])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(partitions_up_to(2, 2), vec![vec![p(&[])], vec![p(&[1])], vec![p(&[2]), p(&[1, 1])]]);
        assert_eq!(partitions_up_to(0, 3), vec![vec![p(&[])]]);
        let single: Vec<Partition> = partitions_up_to(4, 1).into_iter().flatten().collect();
        assert_eq!(single, vec![p(&[]), p(&[1]), p(&[2]), p(&[3]), p(&[4])]);
        assert_eq!(partitions_of(4, 4), vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]);
    }

    #[test]
    fn partition_parsing_and_display() {
        let lam: Partition = "(3,1,0)".parse().unwrap();
        assert_eq!(lam, p(&[3, 1]));
        assert_eq!(lam.to_string(), "(3,1)");
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert!("(1,2)".parse::<Partition>().is_err());
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
    }

    #[test]
    fn pochhammer_examples() {
        let mu = Complex64::new(3.0, 0.0);
        assert_eq!(pochhammer_gen(mu, &Partition::empty(), 2.0), Complex64::new(1.0, 0.0));
        assert_eq!(pochhammer_gen(mu, &p(&[1]), 2.0), mu);
        assert!((pochhammer_gen(mu, &p(&[2, 1]), 2.0) - 30.0).norm() < 1e-12);
    }

    #[test]
    fn low_degree_values_at_alpha_two() {
        let ones = Spectrum::real(&[1.0, 1.0]);
        let c2 = jack_C(&p(&[2]), 2.0, &ones).unwrap().re;
        let c11 = jack_C(&p(&[1, 1]), 2.0, &ones).unwrap().re;
        assert!((c2 - 8.0 / 3.0).abs() < 1e-13);
        assert!((c11 - 4.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn too_many_parts_is_zero() {
        let x = Spectrum::real(&[0.3, 0.2]);
        assert_eq!(jack_C(&p(&[1, 1, 1]), 1.0, &x).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(jack_at_ones(&p(&[1, 1, 1]), 1.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn alpha_must_be_positive() {
        assert!(jack_C(&p(&[1]), 0.0, &Spectrum::real(&[1.0])).is_err());
        assert!(jack_C(&p(&[1]), -1.0, &Spectrum::real(&[1.0])).is_err());
    }

    #[test]
    fn cached_table_matches_fresh_build() {
        let shared = JackTable::get(3, 0.5, 6).unwrap();
        let fresh = JackTable::build(3, 0.5, shared.degree());
        let x = [0.3, -0.7, 1.1];
        let mut a = JackEvaluator::new(&shared, &x).unwrap();
        let mut b = JackEvaluator::new(&fresh, &x).unwrap();
        for k in 0..=6 {
            a.advance(&shared);
            b.advance(&fresh);
            let (va, vb) = (a.c_values(&shared, k), b.c_values(&fresh, k));
            assert_eq!(va.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), vb.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }
    }
}
