//! Weak quasi-regularity estimation and seminorm estimators.
//!
//! The QR ratio compares the box-integrated maximal and minimal directional
//! Hessian energies. Direction extremization is exact, never sampled: the
//! pointwise max of |（HF)e| over unit e is the spectral radius of the
//! symmetric Hessian, and ∫|(HF)e|² = eᵀ(∫HF·HF)e, so the min over e of the
//! integral is the smallest eigenvalue of the integrated Gram matrix.
//! Quadrature is the sole approximation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{BoundaryFunction, HarmonicField};
use crate::lattice::{box_quadrature, CarlesonBox, NadicCube};
use crate::linalg::{norm, SymMat};
use crate::sampling::SampleStream;

/// Threshold below which the Gram matrix is treated as degenerate: the field
/// is (numerically) independent of some direction and the QR ratio is
/// reported as infinite rather than a huge float.
pub const DEGENERATE_DENOMINATOR_FACTOR: f64 = 1e-12;

/// Weak quasi-regularity measurement over one 1/N Carleson box.
#[derive(Debug, Clone, Serialize)]
pub struct QRReport {
    pub cube: String,
    pub n: u32,
    /// ∫ max_{|e|=1} |(HF)e|² = ∫ (spectral radius)².
    pub numerator: f64,
    /// λ_min(∫ HF·HF) = min_{|e|=1} ∫ |(HF)e|².
    pub denominator: f64,
    /// numerator / denominator; None when flagged infinite.
    pub gamma_sq: Option<f64>,
    pub flagged_infinite: bool,
    /// trace(∫HF·HF) = ∫‖HF‖²_F, the scale used by the degeneracy flag.
    pub gram_trace: f64,
}

/// Computes the weak QR ratio of a harmonic field over C_{1/N}(Q) with a
/// tensor midpoint rule of m nodes per axis.
pub fn weak_qr_ratio<F: HarmonicField + ?Sized>(
    field: &F,
    cube: &NadicCube,
    n: u32,
    m: usize,
) -> Result<QRReport> {
    if n < 2 {
        return Err(Error::invalid("QR parameter N must be at least 2"));
    }
    let d = cube.dim();
    let bx = CarlesonBox::new(cube.clone(), 1.0 / n as f64)?;
    let mut gram = SymMat::zeros(d + 1);
    let mut jet_err: Option<Error> = None;
    let numerator = box_quadrature(
        &bx,
        |x, y| {
            if jet_err.is_some() {
                return 0.0;
            }
            match field.jet(x, y) {
                Ok(jet) => {
                    gram.add_scaled(&jet.hessian.squared(), 1.0);
                    match jet.hessian.spectral_radius() {
                        Ok(r) => r * r,
                        Err(e) => {
                            jet_err = Some(e);
                            0.0
                        }
                    }
                }
                Err(e) => {
                    jet_err = Some(e);
                    0.0
                }
            }
        },
        m,
    )?;
    if let Some(e) = jet_err {
        return Err(e);
    }
    // box_quadrature scales the numerator by the cell volume; apply the same
    // weight to the accumulated Gram matrix.
    let cell = bx.volume() / (m as f64).powi(d as i32 + 1);
    gram.scale(cell);

    let gram_trace = gram.trace();
    let denominator = gram.lambda_min()?.max(0.0);
    let flagged_infinite = denominator <= DEGENERATE_DENOMINATOR_FACTOR * gram_trace;
    let gamma_sq = if flagged_infinite {
        None
    } else {
        Some(numerator / denominator)
    };
    Ok(QRReport {
        cube: cube.address(),
        n,
        numerator,
        denominator,
        gamma_sq,
        flagged_infinite,
        gram_trace,
    })
}

/// Result of a Hessian lower-bound scan over a δ-box.
#[derive(Debug, Clone, Serialize)]
pub struct HessianScan {
    /// min over sampled directions of max over the box grid of y·|(HF)e|.
    pub value: f64,
    /// Direction attaining the min.
    pub worst_direction: Vec<f64>,
    /// Grid point (x, y) attaining that direction's max.
    pub witness: (Vec<f64>, f64),
}

/// Scans C_δ(Q) on an m-per-axis grid for the normalized lower bound
/// y·|(HF)e| ≥ c: reports the worst direction's best witness.
pub fn hessian_lower_scan<F: HarmonicField + ?Sized>(
    field: &F,
    cube: &NadicCube,
    delta: f64,
    e_samples: &[Vec<f64>],
    m: usize,
) -> Result<HessianScan> {
    if e_samples.is_empty() {
        return Err(Error::invalid("direction sample set must be nonempty"));
    }
    let d = cube.dim();
    for e in e_samples {
        if e.len() != d + 1 || (norm(e) - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("directions must be unit vectors in R^{d+1}"));
        }
    }
    let bx = CarlesonBox::new(cube.clone(), delta)?;
    let mut best: Vec<(f64, Vec<f64>, f64)> = e_samples
        .iter()
        .map(|_| (0.0, vec![0.0; d], 0.0))
        .collect();
    let mut jet_err: Option<Error> = None;
    box_quadrature(
        &bx,
        |x, y| {
            if jet_err.is_some() {
                return 0.0;
            }
            match field.jet(x, y) {
                Ok(jet) => {
                    for (e, slot) in e_samples.iter().zip(best.iter_mut()) {
                        let he = norm(&jet.hessian.matvec(e));
                        let v = y * he;
                        if v > slot.0 {
                            *slot = (v, x.to_vec(), y);
                        }
                    }
                }
                Err(e) => jet_err = Some(e),
            }
            0.0
        },
        m,
    )?;
    if let Some(e) = jet_err {
        return Err(e);
    }
    let (idx, slot) = best
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("nonempty direction set");
    Ok(HessianScan {
        value: slot.0,
        worst_direction: e_samples[idx].clone(),
        witness: (slot.1.clone(), slot.2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeminormKind {
    Zygmund,
    Bloch,
}

/// A sampled seminorm sup: a lower estimate that is monotone nondecreasing
/// under sample-set enlargement (fixed seed).
#[derive(Debug, Clone, Serialize)]
pub struct SeminormEstimate {
    pub kind: SeminormKind,
    pub value: f64,
    pub sample_count: usize,
    pub scale_lo: f64,
    pub scale_hi: f64,
    pub seed: u64,
}

/// Sampled sup of y·max_ij |(HF)_ij| — the entrywise Bloch seminorm of ∇F —
/// over quasi-random points of x_box × [y_lo, y_hi].
pub fn bloch_seminorm<F: HarmonicField + ?Sized>(
    field: &F,
    x_corner: &[f64],
    x_side: f64,
    y_range: (f64, f64),
    samples: usize,
    seed: u64,
) -> Result<SeminormEstimate> {
    let (y_lo, y_hi) = y_range;
    if !(y_lo > 0.0 && y_lo <= y_hi && y_hi <= 1.0) {
        return Err(Error::invalid("Bloch sampling needs 0 < y_lo ≤ y_hi ≤ 1"));
    }
    let mut stream = SampleStream::new(seed);
    let mut sup = 0.0f64;
    for _ in 0..samples {
        let x = stream.point_in_box(x_corner, x_side);
        let y = stream.log_uniform(y_lo, y_hi);
        let jet = field.jet(&x, y)?;
        sup = sup.max(y * jet.hessian.max_abs_entry());
    }
    Ok(SeminormEstimate {
        kind: SeminormKind::Bloch,
        value: sup,
        sample_count: samples,
        scale_lo: y_lo,
        scale_hi: y_hi,
        seed,
    })
}

/// Sampled sup of the second-difference quotient
/// |f(x+h) + f(x−h) − 2f(x)| / |h| with |h| log-uniform in h_range.
pub fn zygmund_seminorm<F: BoundaryFunction + ?Sized>(
    f: &F,
    x_corner: &[f64],
    x_side: f64,
    h_range: (f64, f64),
    samples: usize,
    seed: u64,
) -> Result<SeminormEstimate> {
    let (h_lo, h_hi) = h_range;
    if !(h_lo > 0.0 && h_lo <= h_hi && h_hi <= 1.0) {
        return Err(Error::invalid("Zygmund sampling needs 0 < h_lo ≤ h_hi ≤ 1"));
    }
    let d = f.boundary_dim();
    let mut stream = SampleStream::new(seed);
    let mut sup = 0.0f64;
    for _ in 0..samples {
        let x = stream.point_in_box(x_corner, x_side);
        let h_len = stream.log_uniform(h_lo, h_hi);
        let dir = stream.unit_vector(d);
        let xp: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + h_len * di).collect();
        let xm: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi - h_len * di).collect();
        let q = (f.eval_boundary(&xp) + f.eval_boundary(&xm) - 2.0 * f.eval_boundary(&x)).abs()
            / h_len;
        sup = sup.max(q);
    }
    Ok(SeminormEstimate {
        kind: SeminormKind::Zygmund,
        value: sup,
        sample_count: samples,
        scale_lo: h_lo,
        scale_hi: h_hi,
        seed,
    })
}
