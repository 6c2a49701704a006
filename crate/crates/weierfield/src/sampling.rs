//! Deterministic sample generators.
//!
//! Every estimator in this crate that samples points or directions records a
//! seed and reproduces the same sequence on every run, which is what makes the
//! CLI outputs byte-identical across reruns and thread counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded uniform sampler over boxes and spheres.
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        SampleStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// Log-uniform sample in [lo, hi], lo > 0.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (self.uniform(lo.ln(), hi.ln())).exp()
    }

    /// Uniform point in an axis-aligned box given by per-axis ranges.
    pub fn point_in_box(&mut self, corner: &[f64], side: f64) -> Vec<f64> {
        corner.iter().map(|c| self.uniform(*c, c + side)).collect()
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1: f64 = self.rng.random::<f64>().max(1e-300);
        let u2: f64 = self.rng.random();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform direction on the unit sphere in `dim` dimensions.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
            let n = crate::linalg::norm(&v);
            if n > 1e-8 {
                return v.iter().map(|x| x / n).collect();
            }
        }
    }
}

/// Low-discrepancy direction sequence on the unit sphere.
///
/// Dimension 2 uses the golden-angle lattice on the circle and dimension 3 the
/// Fibonacci sphere; higher dimensions fall back to a seeded normal sampler.
/// The sequence is fully determined by (dim, count, seed).
pub fn sphere_sequence(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9; // 1/φ
    match dim {
        1 => (0..count).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }]).collect(),
        2 => (0..count)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI
                    * ((seed as f64 * GOLDEN).fract() + i as f64 * GOLDEN).fract();
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => (0..count)
            .map(|i| {
                // Fibonacci sphere: uniform in z, golden angle in azimuth.
                let z = if count == 1 {
                    0.0
                } else {
                    1.0 - 2.0 * (i as f64 + 0.5) / count as f64
                };
                let r = (1.0 - z * z).max(0.0).sqrt();
                let t = 2.0 * std::f64::consts::PI
                    * ((seed as f64 * GOLDEN).fract() + i as f64 * GOLDEN).fract();
                vec![r * t.cos(), r * t.sin(), z]
            })
            .collect(),
        _ => {
            let mut s = SampleStream::new(seed);
            (0..count).map(|_| s.unit_vector(dim)).collect()
        }
    }
}

/// Decreasing log-spaced grid from `hi` down to `lo`.
pub fn log_grid_desc(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo);
    let decades = (hi / lo).log10();
    let count = ((decades * points_per_decade as f64).ceil() as usize).max(1) + 1;
    let step = (hi.ln() - lo.ln()) / (count - 1) as f64;
    (0..count).map(|i| (hi.ln() - i as f64 * step).exp()).collect()
}
