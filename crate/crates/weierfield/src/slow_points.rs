//! Incremental-quotient analysis on the boundary and vertical-ray analysis
//! of the gradient field.
//!
//! Everything here reports finite-scale profiles and trends: membership in
//! the limsup sets is a statement about limits and is never claimed from
//! finite data.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{BoundaryFunction, HarmonicField, MIN_Y};
use crate::linalg::{dot, norm, sub};
use crate::sampling::{log_grid_desc, sphere_sequence};

/// Gradient magnitudes along one vertical ray, on a decreasing log grid.
#[derive(Debug, Clone, Serialize)]
pub struct RayProfile {
    pub x: Vec<f64>,
    pub y_grid: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub tangential_norms: Vec<f64>,
}

/// Evaluates |∇F| and |∇_x F| along the ray {x} × [y_min, y_max].
pub fn ray_profile<F: HarmonicField + ?Sized>(
    field: &F,
    x: &[f64],
    y_min: f64,
    y_max: f64,
    points_per_decade: usize,
) -> Result<RayProfile> {
    if !(y_min > 0.0 && y_min < y_max && y_max <= 1.0) {
        return Err(Error::invalid("need 0 < y_min < y_max ≤ 1"));
    }
    if y_min < MIN_Y {
        return Err(Error::invalid(format!(
            "y_min = {y_min:e} is below the evaluation floor {MIN_Y:e}"
        )));
    }
    let y_grid = log_grid_desc(y_min, y_max, points_per_decade);
    let mut grad_norms = Vec::with_capacity(y_grid.len());
    let mut tangential_norms = Vec::with_capacity(y_grid.len());
    for y in &y_grid {
        let g = field.gradient(x, *y)?;
        grad_norms.push(norm(&g));
        tangential_norms.push(norm(&g[..g.len() - 1]));
    }
    Ok(RayProfile {
        x: x.to_vec(),
        y_grid,
        grad_norms,
        tangential_norms,
    })
}

/// First-difference quotients of a boundary function at one point, per
/// dyadic scale, maximized over a fixed direction sample.
#[derive(Debug, Clone, Serialize)]
pub struct SlowScore {
    pub x: Vec<f64>,
    /// Dyadic scales, decreasing from h_max.
    pub h_grid: Vec<f64>,
    /// max over sampled directions of |f(x + h e) − f(x)| / h.
    pub quotients: Vec<f64>,
    /// OLS slope of quotient against ln(1/h).
    pub trend: f64,
    pub direction_seed: u64,
}

/// Scans dyadic scales h_max, h_max/2, … ≥ h_min with a fixed
/// low-discrepancy direction set (recorded seed).
pub fn slow_score<F: BoundaryFunction + ?Sized>(
    f: &F,
    x: &[f64],
    h_min: f64,
    h_max: f64,
    directions_per_scale: usize,
    seed: u64,
) -> Result<SlowScore> {
    if !(h_min > 0.0 && h_min < h_max) {
        return Err(Error::invalid("need 0 < h_min < h_max"));
    }
    if directions_per_scale == 0 {
        return Err(Error::invalid("need at least one direction per scale"));
    }
    let d = f.boundary_dim();
    let dirs = sphere_sequence(d, directions_per_scale, seed);
    let f0 = f.eval_boundary(x);

    let mut h_grid = Vec::new();
    let mut h = h_max;
    while h >= h_min {
        h_grid.push(h);
        h /= 2.0;
    }
    let quotients: Vec<f64> = h_grid
        .iter()
        .map(|h| {
            dirs.iter()
                .map(|e| {
                    let xp: Vec<f64> = x.iter().zip(e).map(|(xi, ei)| xi + h * ei).collect();
                    (f.eval_boundary(&xp) - f0).abs() / h
                })
                .fold(0.0f64, f64::max)
        })
        .collect();

    // OLS slope of quotient vs ln(1/h).
    let n = h_grid.len() as f64;
    let xs: Vec<f64> = h_grid.iter().map(|h| (1.0 / h).ln()).collect();
    let sx: f64 = xs.iter().sum();
    let sy: f64 = quotients.iter().sum();
    let sxx: f64 = xs.iter().map(|v| v * v).sum();
    let sxy: f64 = xs.iter().zip(&quotients).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    let trend = if denom.abs() < 1e-12 {
        0.0
    } else {
        (n * sxy - sx * sy) / denom
    };

    Ok(SlowScore {
        x: x.to_vec(),
        h_grid,
        quotients,
        trend,
        direction_seed: seed,
    })
}

/// Residual contract of the first-order expansion through the tangential
/// gradient at height |h|:
/// |f(x+h) − f(x) − h·∇_x F(x, |h|)| / |h| ≤ 4‖f‖_* (plus estimation slack).
#[derive(Debug, Clone, Serialize)]
pub struct Prop23Report {
    pub max_residual: f64,
    /// max residual divided by the Zygmund seminorm estimate.
    pub normalized: f64,
    pub samples: usize,
}

pub fn check_expansion_residual<Fb, Ff>(
    f: &Fb,
    field: &Ff,
    samples: &[(Vec<f64>, Vec<f64>)],
    zygmund_value: f64,
) -> Result<Prop23Report>
where
    Fb: BoundaryFunction + ?Sized,
    Ff: HarmonicField + ?Sized,
{
    if zygmund_value <= 0.0 {
        return Err(Error::invalid("Zygmund seminorm estimate must be positive"));
    }
    let results: Vec<Result<f64>> = samples
        .par_iter()
        .map(|(x, h)| {
            let h_len = norm(h);
            if !(h_len > 0.0 && h_len <= 1.0) {
                return Err(Error::invalid("sample |h| must lie in (0, 1]"));
            }
            let xp: Vec<f64> = x.iter().zip(h).map(|(xi, hi)| xi + hi).collect();
            let g = field.gradient(x, h_len)?;
            let tangential = &g[..g.len() - 1];
            let res =
                (f.eval_boundary(&xp) - f.eval_boundary(x) - dot(h, tangential)).abs() / h_len;
            Ok(res)
        })
        .collect();
    let mut max_residual = 0.0f64;
    for r in results {
        max_residual = max_residual.max(r?);
    }
    Ok(Prop23Report {
        max_residual,
        normalized: max_residual / zygmund_value,
        samples: samples.len(),
    })
}

/// Survey of sup |D_e F(x, y)| over shrinking vertical windows.
///
/// `sups[i][k]` is the sup of the tangential directional derivative along the
/// ray over y ∈ [floor_k, y_top], computed cumulatively on a nested grid, so
/// each row is nondecreasing in the floor index by construction.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceSurvey {
    pub direction: Vec<f64>,
    pub y_top: f64,
    pub floors: Vec<f64>,
    pub sups: Vec<Vec<f64>>,
}

impl DivergenceSurvey {
    /// Fraction of sample points whose sup exceeds the threshold at floor k.
    pub fn exceedance_fraction(&self, threshold: f64, floor_idx: usize) -> f64 {
        if self.sups.is_empty() {
            return 0.0;
        }
        let count = self
            .sups
            .iter()
            .filter(|row| row[floor_idx] > threshold)
            .count();
        count as f64 / self.sups.len() as f64
    }
}

/// Runs the survey for a tangential unit direction e over the given sample
/// points and decreasing y-floor sequence.
pub fn directional_divergence_survey<F: HarmonicField + ?Sized>(
    field: &F,
    e: &[f64],
    x_samples: &[Vec<f64>],
    y_floors: &[f64],
    y_top: f64,
    points_per_decade: usize,
) -> Result<DivergenceSurvey> {
    let d = field.boundary_dim();
    if e.len() != d || (norm(e) - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("direction must be a unit vector in R^d"));
    }
    if y_floors.is_empty() || y_floors.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("y floors must be strictly decreasing"));
    }
    let lowest = *y_floors.last().expect("nonempty");
    if !(lowest >= MIN_Y && y_floors[0] < y_top) {
        return Err(Error::invalid(format!(
            "floors must lie in [{MIN_Y:e}, y_top)"
        )));
    }

    // One nested grid for all floors: [floor_k, y_top] is a prefix extension
    // of [floor_{k−1}, y_top], making each row's sups cumulative maxima.
    let grid = log_grid_desc(lowest, y_top, points_per_decade);

    let sups: Vec<Result<Vec<f64>>> = x_samples
        .par_iter()
        .map(|x| {
            let mut row = Vec::with_capacity(y_floors.len());
            let mut running = 0.0f64;
            let mut gi = 0usize;
            for floor in y_floors {
                while gi < grid.len() && grid[gi] >= *floor {
                    let g = field.gradient(x, grid[gi])?;
                    running = running.max(dot(&g[..d], e).abs());
                    gi += 1;
                }
                row.push(running);
            }
            Ok(row)
        })
        .collect();

    let mut rows = Vec::with_capacity(x_samples.len());
    for r in sups {
        rows.push(r?);
    }
    Ok(DivergenceSurvey {
        direction: e.to_vec(),
        y_top,
        floors: y_floors.to_vec(),
        sups: rows,
    })
}

/// Max observed ratio of |∇F(b,t) − ∇F(a,s)| to the Bloch oscillation
/// envelope B·(|b−a|/max(t,s) + |log(t/s)|): the empirical dimensional
/// factor of the oscillation bound.
pub fn oscillation_ratio<F: HarmonicField + ?Sized>(
    field: &F,
    pairs: &[(Vec<f64>, f64, Vec<f64>, f64)],
    bloch_value: f64,
) -> Result<f64> {
    if bloch_value <= 0.0 {
        return Err(Error::invalid("Bloch seminorm estimate must be positive"));
    }
    let ratios: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|(a, s, b, t)| {
            let ga = field.gradient(a, *s)?;
            let gb = field.gradient(b, *t)?;
            let osc = norm(&sub(&gb, &ga));
            let envelope = norm(&sub(b, a)) / s.max(*t) + (t / s).ln().abs();
            if envelope <= 0.0 {
                return Ok(0.0);
            }
            Ok(osc / (bloch_value * envelope))
        })
        .collect();
    let mut max = 0.0f64;
    for r in ratios {
        max = max.max(r?);
    }
    Ok(max)
}
