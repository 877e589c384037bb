//! Seeded random streams and chunked parallel Monte Carlo estimators.
//!
//! Sample `i` always lands in chunk `i / CHUNK`, and chunk `c` always draws
//! from stream `c` of the seed, so results do not depend on the thread count.
//! Chunk partials are combined in chunk order.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Samples per parallel work unit.
pub const CHUNK: usize = 4096;

/// Deterministic generator identified by `(seed, stream)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Position within the stream, in 32-bit words.
    pub fn word_pos(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal.
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Complex normal with variance 1/2 in each of the real and imaginary parts.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(s * self.normal(), s * self.normal())
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Plain Monte Carlo mean with standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: Complex64,
    pub stderr: f64,
    pub samples: usize,
}

/// Self-normalized importance-sampling estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedEstimate {
    pub value: Complex64,
    pub stderr: f64,
    /// Proposals drawn.
    pub proposals: usize,
    /// Proposals with nonzero weight.
    pub accepted: usize,
    /// Kish effective sample size.
    pub ess: f64,
}

impl WeightedEstimate {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposals.max(1) as f64
    }
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, z: Complex64) {
        self.n += 1.0;
        let delta = z - self.mean;
        self.mean += delta / self.n;
        self.m2 += (delta.conj() * (z - self.mean)).re;
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * (other.n / n),
            m2: self.m2 + other.m2 + delta.norm_sqr() * self.n * other.n / n,
        }
    }

    fn estimate(self) -> McEstimate {
        let var = if self.n > 1.0 { self.m2 / (self.n - 1.0) } else { 0.0 };
        McEstimate { value: self.mean, stderr: (var / self.n.max(1.0)).sqrt(), samples: self.n as usize }
    }
}

#[derive(Clone, Default)]
struct WeightedSums {
    proposals: usize,
    accepted: usize,
    w: f64,
    w2: f64,
    wf: Vec<Complex64>,
    w2f: Vec<Complex64>,
    w2f2: Vec<f64>,
}

impl WeightedSums {
    fn with_len(k: usize) -> Self {
        WeightedSums {
            wf: vec![Complex64::new(0.0, 0.0); k],
            w2f: vec![Complex64::new(0.0, 0.0); k],
            w2f2: vec![0.0; k],
            ..Default::default()
        }
    }

    fn merge(mut self, other: &WeightedSums) -> WeightedSums {
        self.proposals += other.proposals;
        self.accepted += other.accepted;
        self.w += other.w;
        self.w2 += other.w2;
        for i in 0..self.wf.len() {
            self.wf[i] += other.wf[i];
            self.w2f[i] += other.w2f[i];
            self.w2f2[i] += other.w2f2[i];
        }
        self
    }
}

fn chunk_ranges(n: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks).into_par_iter().map(move |c| (c as u64, CHUNK.min(n - c * CHUNK)))
}

/// Mean of `f` over `n` draws.
pub fn parallel_mean<F>(n: usize, seed: u64, f: F) -> crate::Result<McEstimate>
where
    F: Fn(&mut RngStream) -> Complex64 + Sync,
{
    let partials: Vec<Moments> = chunk_ranges(n)
        .map(|(c, len)| {
            let mut rng = RngStream::new(seed, c);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(f(&mut rng));
            }
            m
        })
        .collect();
    Ok(partials.into_iter().fold(Moments::default(), Moments::merge).estimate())
}

/// Means of `k` functionals evaluated on shared draws; `f` fills its output slice.
pub fn parallel_mean_multi<F>(n: usize, k: usize, seed: u64, f: F) -> Vec<McEstimate>
where
    F: Fn(&mut RngStream, &mut [Complex64]) + Sync,
{
    let partials: Vec<Vec<Moments>> = chunk_ranges(n)
        .map(|(c, len)| {
            let mut rng = RngStream::new(seed, c);
            let mut m = vec![Moments::default(); k];
            let mut out = vec![Complex64::new(0.0, 0.0); k];
            for _ in 0..len {
                f(&mut rng, &mut out);
                for (acc, &z) in m.iter_mut().zip(&out) {
                    acc.push(z);
                }
            }
            m
        })
        .collect();
    let mut total = vec![Moments::default(); k];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t = t.merge(p);
        }
    }
    total.into_iter().map(Moments::estimate).collect()
}

/// Self-normalized importance sampling for `k` functionals on shared draws.
///
/// `f` returns the importance weight (zero for rejected proposals) and fills
/// the functional values when the weight is positive.
pub fn parallel_weighted_multi<F>(n: usize, k: usize, seed: u64, f: F) -> Vec<WeightedEstimate>
where
    F: Fn(&mut RngStream, &mut [Complex64]) -> f64 + Sync,
{
    let partials: Vec<WeightedSums> = chunk_ranges(n)
        .map(|(c, len)| {
            let mut rng = RngStream::new(seed, c);
            let mut s = WeightedSums::with_len(k);
            let mut out = vec![Complex64::new(0.0, 0.0); k];
            for _ in 0..len {
                s.proposals += 1;
                let w = f(&mut rng, &mut out);
                if w > 0.0 {
                    s.accepted += 1;
                    s.w += w;
                    s.w2 += w * w;
                    for i in 0..k {
                        s.wf[i] += out[i] * w;
                        s.w2f[i] += out[i] * (w * w);
                        s.w2f2[i] += out[i].norm_sqr() * w * w;
                    }
                }
            }
            s
        })
        .collect();
    let total = partials.iter().fold(WeightedSums::with_len(k), |acc, p| acc.merge(p));
    (0..k)
        .map(|i| {
            if total.w <= 0.0 {
                return WeightedEstimate {
                    value: Complex64::new(f64::NAN, f64::NAN),
                    stderr: f64::INFINITY,
                    proposals: total.proposals,
                    accepted: 0,
                    ess: 0.0,
                };
            }
            let r = total.wf[i] / total.w;
            // sum w^2 |f - r|^2, expanded
            let spread = (total.w2f2[i] - 2.0 * (r.conj() * total.w2f[i]).re + r.norm_sqr() * total.w2).max(0.0);
            WeightedEstimate {
                value: r,
                stderr: spread.sqrt() / total.w,
                proposals: total.proposals,
                accepted: total.accepted,
                ess: total.w * total.w / total.w2,
            }
        })
        .collect()
}

/// Single-functional form of [`parallel_weighted_multi`].
pub fn parallel_weighted<F>(n: usize, seed: u64, f: F) -> WeightedEstimate
where
    F: Fn(&mut RngStream) -> Option<(f64, Complex64)> + Sync,
{
    parallel_weighted_multi(n, 1, seed, |rng, out| match f(rng) {
        Some((w, v)) => {
            out[0] = v;
            w
        }
        None => 0.0,
    })
    .pop()
    .expect("one functional")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        let mut c = RngStream::new(7, 4);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn mean_of_uniform() {
        let est = parallel_mean(100_000, 1, |r| Complex64::new(r.uniform(), 0.0)).unwrap();
        assert!((est.value.re - 0.5).abs() < 4.0 * est.stderr);
        assert!((est.stderr - (1.0f64 / 12.0 / 1e5).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let run = || parallel_mean(50_000, 9, |r| Complex64::new(r.normal(), r.normal())).unwrap();
        let a = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        let b = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
        assert_eq!(a, b);
    }

    #[test]
    fn self_normalized_weights() {
        // E_w[x] for weight 2x on U(0,1) is 2/3
        let est = parallel_weighted(200_000, 2, |r| {
            let x = r.uniform();
            Some((2.0 * x, Complex64::new(x, 0.0)))
        });
        assert!((est.value.re - 2.0 / 3.0).abs() < 4.0 * est.stderr);
        assert_eq!(est.accepted, 200_000);
    }
}
