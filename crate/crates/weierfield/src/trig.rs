//! The 1-periodic base function φ as a finite real trigonometric polynomial.
//!
//! Restricting φ to finite trigonometric polynomials gives exact analytic
//! jets, exact Fourier data for the half-space extension, and computable
//! coefficient-sum bounds for every seminorm this crate needs. Periodicity is
//! structural: all frequencies are integer vectors.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, SymMat};

const TAU: f64 = 2.0 * PI;

/// One Fourier mode: integer frequency vector and complex coefficient.
#[derive(Debug, Clone)]
pub struct Mode {
    pub k: Vec<i64>,
    pub coeff: Complex64,
    /// Euclidean norm |k|, cached.
    pub k_norm: f64,
}

/// Finite real trigonometric polynomial on ℝ^d:
/// φ(x) = Σ_k c_k e^{2πi k·x}, with c_{−k} = conj(c_k).
///
/// Modes are kept sorted by frequency vector, so iteration order (and with it
/// every summation in the crate) is deterministic.
#[derive(Debug, Clone)]
pub struct TrigPolynomial {
    dim: usize,
    modes: Vec<Mode>,
    /// Largest asymmetry |c_k − conj(c_{−k})| removed while symmetrizing.
    symmetrization_defect: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    k: Vec<i64>,
    re: f64,
    im: f64,
}

/// JSON form: `{"d": int, "terms": [{"k": [int,...], "re": float, "im": float}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrigPolynomialSpec {
    d: usize,
    terms: Vec<TermSpec>,
}

impl TrigPolynomial {
    /// Builds from raw terms, summing duplicates and enforcing Hermitian
    /// symmetry by averaging c_k with conj(c_{−k}).
    pub fn from_terms(dim: usize, terms: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let mut map: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (k, c) in terms {
            if k.len() != dim {
                return Err(Error::invalid(format!(
                    "frequency vector {k:?} has length {} but d = {dim}",
                    k.len()
                )));
            }
            *map.entry(k.clone()).or_insert(Complex64::ZERO) += c;
        }
        // Symmetrize: c_k ← (c_k + conj(c_{−k}))/2 over the union of supports.
        let keys: Vec<Vec<i64>> = map.keys().cloned().collect();
        for k in &keys {
            let neg: Vec<i64> = k.iter().map(|v| -v).collect();
            map.entry(neg).or_insert(Complex64::ZERO);
        }
        let mut defect = 0.0f64;
        let mut sym: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (k, c) in &map {
            let neg: Vec<i64> = k.iter().map(|v| -v).collect();
            let c_neg = map[&neg];
            let target = 0.5 * (c + c_neg.conj());
            defect = defect.max((c - c_neg.conj()).norm());
            sym.insert(k.clone(), target);
        }
        let modes = sym
            .into_iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(k, coeff)| {
                let k_norm = norm(&k.iter().map(|v| *v as f64).collect::<Vec<_>>());
                Mode { k, coeff, k_norm }
            })
            .collect();
        Ok(TrigPolynomial {
            dim,
            modes,
            symmetrization_defect: defect,
        })
    }

    /// The zero polynomial.
    pub fn zero(dim: usize) -> Self {
        TrigPolynomial {
            dim,
            modes: Vec::new(),
            symmetrization_defect: 0.0,
        }
    }

    /// cos(2π x_axis): modes ±e_axis with coefficient 1/2.
    pub fn cosine(dim: usize, axis: usize) -> Self {
        let mut k = vec![0i64; dim];
        k[axis] = 1;
        let mut k_neg = vec![0i64; dim];
        k_neg[axis] = -1;
        let half = Complex64::new(0.5, 0.0);
        Self::from_terms(dim, &[(k, half), (k_neg, half)]).unwrap()
    }

    /// sin(2π x_axis): modes ±e_axis with coefficients ∓i/2.
    pub fn sine(dim: usize, axis: usize) -> Self {
        let mut k = vec![0i64; dim];
        k[axis] = 1;
        let mut k_neg = vec![0i64; dim];
        k_neg[axis] = -1;
        Self::from_terms(
            dim,
            &[
                (k, Complex64::new(0.0, -0.5)),
                (k_neg, Complex64::new(0.0, 0.5)),
            ],
        )
        .unwrap()
    }

    /// Σ_i cos(2π x_i), the standard condition-𝓗 example.
    pub fn coordinate_cosines(dim: usize) -> Self {
        let mut terms = Vec::new();
        for axis in 0..dim {
            let mut k = vec![0i64; dim];
            k[axis] = 1;
            let mut k_neg = vec![0i64; dim];
            k_neg[axis] = -1;
            terms.push((k, Complex64::new(0.5, 0.0)));
            terms.push((k_neg, Complex64::new(0.5, 0.0)));
        }
        Self::from_terms(dim, &terms).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Asymmetry removed at construction; > 1e−12 deserves a loader warning.
    pub fn symmetrization_defect(&self) -> f64 {
        self.symmetrization_defect
    }

    /// K = max |k| over the support.
    pub fn max_freq_norm(&self) -> f64 {
        self.modes.iter().fold(0.0f64, |a, m| a.max(m.k_norm))
    }

    /// Smallest nonzero |k| over the support; None for constants.
    pub fn min_nonzero_freq_norm(&self) -> Option<f64> {
        self.modes
            .iter()
            .filter(|m| m.k_norm > 0.0)
            .map(|m| m.k_norm)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
    }

    /// Mean value c₀ (real by symmetry).
    pub fn mean(&self) -> f64 {
        self.modes
            .iter()
            .find(|m| m.k_norm == 0.0)
            .map_or(0.0, |m| m.coeff.re)
    }

    /// Σ |c_k| (2π|k|)^order — the ℓ¹ bound on the order-th derivatives.
    pub fn weighted_l1(&self, order: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| m.coeff.norm() * (TAU * m.k_norm).powf(order))
            .sum()
    }

    fn phase(&self, x: &[f64], k: &[i64]) -> f64 {
        // Reduce x mod 1 first: exact by integer periodicity and keeps the
        // trig argument small even when the caller passes b^n x.
        let mut s = 0.0;
        for (xi, ki) in x.iter().zip(k) {
            s += xi.rem_euclid(1.0) * *ki as f64;
        }
        TAU * s
    }

    /// Full complex evaluation Σ_k c_k e^{2πi k·x}.
    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = Complex64::ZERO;
        for m in &self.modes {
            let theta = self.phase(x, &m.k);
            acc += m.coeff * Complex64::new(theta.cos(), theta.sin());
        }
        acc
    }

    /// φ(x): real value of the Fourier sum.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_complex(x).re
    }

    /// Exact value, gradient and Hessian by frequency multiplication.
    pub fn jet2(&self, x: &[f64]) -> (f64, Vec<f64>, SymMat) {
        debug_assert_eq!(x.len(), self.dim);
        let d = self.dim;
        let mut value = Complex64::ZERO;
        let mut grad = vec![Complex64::ZERO; d];
        let mut hess = vec![Complex64::ZERO; d * d];
        for m in &self.modes {
            let theta = self.phase(x, &m.k);
            let e = m.coeff * Complex64::new(theta.cos(), theta.sin());
            value += e;
            for i in 0..d {
                let fi = TAU * m.k[i] as f64;
                grad[i] += e * Complex64::new(0.0, fi);
                for j in i..d {
                    let fj = TAU * m.k[j] as f64;
                    hess[i * d + j] -= e * (fi * fj);
                }
            }
        }
        let mut h = SymMat::zeros(d);
        for i in 0..d {
            for j in i..d {
                h.set(i, j, hess[i * d + j].re);
            }
        }
        (value.re, grad.into_iter().map(|g| g.re).collect(), h)
    }

    /// Directional derivative ∇φ(x)·e.
    pub fn directional_derivative(&self, x: &[f64], e: &[f64]) -> f64 {
        let (_, g, _) = self.jet2(x);
        crate::linalg::dot(&g, e)
    }

    /// Coefficient-sum upper bounds for sup|φ|, sup|∇φ|, sup‖Hφ‖ and the
    /// α-Hölder seminorm of the Hessian.
    pub fn seminorm_bounds(&self, alpha: f64) -> Result<SeminormBundle> {
        if !(0.0 < alpha && alpha < 1.0) {
            return Err(Error::invalid(format!(
                "Hölder exponent must lie in (0,1), got {alpha}"
            )));
        }
        // |e^{iθ} − 1| ≤ 2^{1−α} |θ|^α for all θ justifies the Hölder bound.
        Ok(SeminormBundle {
            sup_abs: self.weighted_l1(0.0),
            sup_grad: self.weighted_l1(1.0),
            sup_hess: self.weighted_l1(2.0),
            hess_holder_alpha: 2.0f64.powf(1.0 - alpha) * self.weighted_l1(2.0 + alpha),
            alpha,
        })
    }

    /// Serializes to the canonical JSON schema.
    pub fn to_json(&self) -> serde_json::Value {
        let spec = TrigPolynomialSpec {
            d: self.dim,
            terms: self
                .modes
                .iter()
                .map(|m| TermSpec {
                    k: m.k.clone(),
                    re: m.coeff.re,
                    im: m.coeff.im,
                })
                .collect(),
        };
        serde_json::to_value(spec).expect("trig polynomial serialization cannot fail")
    }

    /// Loads from the JSON schema, symmetrizing as needed.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let spec: TrigPolynomialSpec = serde_json::from_value(v.clone())?;
        let terms: Vec<(Vec<i64>, Complex64)> = spec
            .terms
            .into_iter()
            .map(|t| (t.k, Complex64::new(t.re, t.im)))
            .collect();
        Self::from_terms(spec.d, &terms)
    }
}

impl Serialize for TrigPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        TrigPolynomial::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Upper bounds on the base-function seminorms, from weighted coefficient
/// sums. Every entry dominates the corresponding sampled sup.
#[derive(Debug, Clone, Serialize)]
pub struct SeminormBundle {
    pub sup_abs: f64,
    pub sup_grad: f64,
    pub sup_hess: f64,
    pub hess_holder_alpha: f64,
    pub alpha: f64,
}

/// Outcome of the condition-𝓗 test for a single direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionHStatus {
    HoldsViaDerivative,
    HoldsViaExtremum,
    Fails,
    Inconclusive,
}

/// Per-direction certificate. The verdict only speaks for the sampled window
/// [−T, T] at the given resolution, never for the full quantifier.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionReport {
    pub direction: Vec<f64>,
    pub status: ConditionHStatus,
    /// ∇φ(0)·e.
    pub derivative: f64,
    /// max_t φ(te) − φ(0) over the sampled window.
    pub max_excess: f64,
    /// φ(0) − min_t φ(te) over the sampled window.
    pub min_deficit: f64,
    /// Lipschitz(φ along e) · h/2: grid-to-continuum slack.
    pub margin: f64,
}

/// Checks condition 𝓗 on a finite direction set: for each unit e, either
/// ∇φ(0)·e ≠ 0 or t ↦ φ(te) is nonconstant with a global extremum at 0.
///
/// Sampling semantics per direction, with v₀ = φ(0):
/// * |∇φ(0)·e| > 1e−9·sup|∇φ| → `HoldsViaDerivative`.
/// * all samples on one side of v₀ and at least one further than
///   1e−9·sup|φ| → `HoldsViaExtremum`.
/// * profile constant at sampled resolution, or samples beyond the Lipschitz
///   margin on both sides of v₀ → `Fails`.
/// * otherwise → `Inconclusive`.
pub fn check_condition_h(
    phi: &TrigPolynomial,
    directions: &[Vec<f64>],
    t_window: f64,
    grid_step: f64,
) -> Result<Vec<DirectionReport>> {
    if directions.is_empty() {
        return Err(Error::invalid("direction set must be nonempty"));
    }
    if t_window <= 0.0 {
        return Err(Error::invalid("t_window must be positive"));
    }
    if grid_step <= 0.0 {
        return Err(Error::invalid("grid_step must be positive"));
    }
    let bundle = phi.seminorm_bounds(0.5)?;
    let tol_deriv = 1e-9 * bundle.sup_grad;
    let tol_nonconst = 1e-9 * bundle.sup_abs;
    let lipschitz = bundle.sup_grad;

    let origin = vec![0.0; phi.dim()];
    let v0 = phi.eval(&origin);

    let steps = ((2.0 * t_window / grid_step).ceil() as usize).max(2);
    let step = 2.0 * t_window / steps as f64;
    let margin = lipschitz * step / 2.0;

    let mut reports = Vec::with_capacity(directions.len());
    for e in directions {
        if e.len() != phi.dim() {
            return Err(Error::invalid(format!(
                "direction has length {} but d = {}",
                e.len(),
                phi.dim()
            )));
        }
        if (norm(e) - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "direction {e:?} is not normalized (|e| − 1 = {:.3e})",
                norm(e) - 1.0
            )));
        }
        let derivative = phi.directional_derivative(&origin, e);

        let mut max_val = f64::NEG_INFINITY;
        let mut min_val = f64::INFINITY;
        for i in 0..=steps {
            let t = -t_window + i as f64 * step;
            let x: Vec<f64> = e.iter().map(|ei| t * ei).collect();
            let v = phi.eval(&x);
            max_val = max_val.max(v);
            min_val = min_val.min(v);
        }
        let max_excess = max_val - v0;
        let min_deficit = v0 - min_val;

        let status = if derivative.abs() > tol_deriv {
            ConditionHStatus::HoldsViaDerivative
        } else if max_excess.max(min_deficit) <= tol_nonconst {
            // The one-variable profile is constant at this resolution:
            // condition 𝓗 requires it to be nonconstant.
            ConditionHStatus::Fails
        } else if max_val <= v0 {
            ConditionHStatus::HoldsViaExtremum // global max at t = 0
        } else if min_val >= v0 {
            ConditionHStatus::HoldsViaExtremum // global min at t = 0
        } else if max_excess > margin && min_deficit > margin {
            // Witnesses on both sides beyond the grid margin: t = 0 is
            // neither a global max nor a global min inside the window.
            ConditionHStatus::Fails
        } else {
            ConditionHStatus::Inconclusive
        };

        reports.push(DirectionReport {
            direction: e.clone(),
            status,
            derivative,
            max_excess,
            min_deficit,
            margin,
        });
    }
    Ok(reports)
}

/// Coordinate directions, main diagonals, and `extra` quasi-random sphere
/// samples: the default direction set for condition-𝓗 scans.
pub fn default_direction_set(dim: usize, extra: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        dirs.push(e);
    }
    if dim > 1 {
        let v = (dim as f64).sqrt().recip();
        dirs.push(vec![v; dim]);
        let mut alt = vec![v; dim];
        alt[0] = -v;
        dirs.push(alt);
    }
    dirs.extend(crate::sampling::sphere_sequence(dim, extra, seed));
    dirs
}
