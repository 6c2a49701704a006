//! Harmonic fields on the upper half-space ℝ^{d+1}_+ with analytic jets.
//!
//! The extension Φ of a trigonometric polynomial collapses, via Poisson
//! summation, to finitely many modes c_k e^{−2π|k|y} e^{2πi k·x}, so Φ and its
//! derivatives are exact. The Weierstrass field
//! F(x,y) = Σ_n b^{−n} Φ(b^n x, b^n y) is then summed with certified
//! truncation: the Hessian terms grow like b^n but are crushed by
//! e^{−2π|k| b^n y}, and the sum stops once the remaining tail of each jet
//! order is below `tail_tol`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, SymMat};
use crate::trig::TrigPolynomial;

const TAU: f64 = 2.0 * PI;

/// Hard floor on evaluation heights: keeps the series length bounded by
/// roughly log_b(1/y) terms.
pub const MIN_Y: f64 = 1e-12;

/// Value, gradient and Hessian of a harmonic field at one point.
/// The last coordinate of the gradient is the ∂/∂y derivative.
#[derive(Debug, Clone)]
pub struct HarmonicJet {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: SymMat,
}

impl HarmonicJet {
    pub fn zero(ambient_dim: usize) -> Self {
        HarmonicJet {
            value: 0.0,
            gradient: vec![0.0; ambient_dim],
            hessian: SymMat::zeros(ambient_dim),
        }
    }

    /// Boundary dimension d (ambient is d+1).
    pub fn boundary_dim(&self) -> usize {
        self.gradient.len() - 1
    }

    /// |trace H| / (1 + ‖H‖_F): vanishes for harmonic fields.
    pub fn harmonicity_residual(&self) -> f64 {
        self.hessian.trace().abs() / (1.0 + self.hessian.frobenius_norm())
    }

    /// First d gradient components.
    pub fn tangential_gradient(&self) -> &[f64] {
        &self.gradient[..self.gradient.len() - 1]
    }
}

/// A harmonic field on ℝ^{d+1}_+ exposing jets at interior points.
///
/// Implementations must be pure: jets depend only on (x, y), so batch
/// evaluation parallelizes freely.
pub trait HarmonicField: Sync {
    /// Boundary dimension d.
    fn boundary_dim(&self) -> usize;

    /// Jet at (x, y), y > 0.
    fn jet(&self, x: &[f64], y: f64) -> Result<HarmonicJet>;

    /// Gradient only; override when a cheaper path exists.
    fn gradient(&self, x: &[f64], y: f64) -> Result<Vec<f64>> {
        Ok(self.jet(x, y)?.gradient)
    }
}

/// A function on the boundary ℝ^d.
pub trait BoundaryFunction: Sync {
    fn boundary_dim(&self) -> usize;
    fn eval_boundary(&self, x: &[f64]) -> f64;
}

/// Boundary function defined by a closure, for synthetic test inputs.
pub struct FnBoundary<F: Fn(&[f64]) -> f64 + Sync> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> BoundaryFunction for FnBoundary<F> {
    fn boundary_dim(&self) -> usize {
        self.dim
    }
    fn eval_boundary(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

fn check_y_positive(y: f64) -> Result<()> {
    if !(y > 0.0) {
        return Err(Error::invalid(format!("height y must be positive, got {y}")));
    }
    Ok(())
}

fn check_y_floor(y: f64) -> Result<()> {
    check_y_positive(y)?;
    if y < MIN_Y {
        return Err(Error::invalid(format!(
            "height y = {y:e} is below the evaluation floor {MIN_Y:e}"
        )));
    }
    Ok(())
}

/// Mutable jet accumulator shared by the series summation.
struct JetAccum {
    value: f64,
    grad: Vec<f64>,
    hess: SymMat,
}

impl JetAccum {
    fn new(ambient: usize) -> Self {
        JetAccum {
            value: 0.0,
            grad: vec![0.0; ambient],
            hess: SymMat::zeros(ambient),
        }
    }

    fn into_jet(self) -> HarmonicJet {
        HarmonicJet {
            value: self.value,
            gradient: self.grad,
            hessian: self.hess,
        }
    }
}

/// The bounded harmonic extension Φ of a trigonometric polynomial:
/// Φ(x,y) = Σ_k c_k e^{−2π|k| y} e^{2πi k·x}.  Exact for finite φ.
#[derive(Debug, Clone)]
pub struct PoissonField {
    phi: TrigPolynomial,
}

impl PoissonField {
    pub fn new(phi: TrigPolynomial) -> Self {
        PoissonField { phi }
    }

    pub fn base(&self) -> &TrigPolynomial {
        &self.phi
    }

    /// Adds (w_v·Φ, w_g·∇Φ, w_h·HΦ)(x, y) into `acc`.
    fn accumulate(&self, x: &[f64], y: f64, w_v: f64, w_g: f64, w_h: f64, acc: &mut JetAccum) {
        let d = self.phi.dim();
        for m in self.phi.modes() {
            // Reduce x mod 1 (exact, by integer periodicity) before forming
            // the phase, so huge b^n x arguments do not degrade the trig.
            let mut s = 0.0;
            for (xi, ki) in x.iter().zip(&m.k) {
                s += xi.rem_euclid(1.0) * *ki as f64;
            }
            let theta = TAU * s;
            let decay = (-TAU * m.k_norm * y).exp();
            let e = m.coeff * decay * Complex64::new(theta.cos(), theta.sin());

            acc.value += w_v * e.re;

            // Spatial derivative factors i·2π k_j; vertical factor −2π|k|.
            let fy = -TAU * m.k_norm;
            for i in 0..d {
                let fi = TAU * m.k[i] as f64;
                // gradient_i: (i f_i)·e → real part is −f_i·Im(e)
                acc.grad[i] += w_g * (-fi * e.im);
                for j in i..d {
                    let fj = TAU * m.k[j] as f64;
                    let cur = acc.hess.get(i, j);
                    acc.hess.set(i, j, cur + w_h * (-fi * fj * e.re));
                }
                // mixed x_i, y entry: (i f_i)·f_y·e → real part −f_i f_y Im(e)
                let cur = acc.hess.get(i, d);
                acc.hess.set(i, d, cur + w_h * (-fi * fy * e.im));
            }
            acc.grad[d] += w_g * (fy * e.re);
            let cur = acc.hess.get(d, d);
            acc.hess.set(d, d, cur + w_h * (fy * fy * e.re));
        }
    }
}

impl HarmonicField for PoissonField {
    fn boundary_dim(&self) -> usize {
        self.phi.dim()
    }

    fn jet(&self, x: &[f64], y: f64) -> Result<HarmonicJet> {
        check_y_positive(y)?;
        let mut acc = JetAccum::new(self.phi.dim() + 1);
        self.accumulate(x, y, 1.0, 1.0, 1.0, &mut acc);
        Ok(acc.into_jet())
    }
}

/// Tail bounds certified for one truncated jet evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TailBounds {
    pub value: f64,
    pub gradient: f64,
    pub hessian: f64,
    pub terms_used: usize,
}

/// The Weierstrass field: f_{b,φ}(x) = Σ b^{−n} φ(b^n x) on the boundary and
/// F(x,y) = Σ b^{−n} Φ(b^n x, b^n y) in the half-space.
#[derive(Debug, Clone)]
pub struct WeierstrassField {
    extension: PoissonField,
    b: f64,
    tail_tol: f64,
    // Cached ℓ¹ derivative weights Σ|c_k|(2π|k|)^m and the smallest nonzero
    // frequency norm.
    w0: f64,
    w1: f64,
    w2: f64,
    kappa: Option<f64>,
    // For integer b, (b·(x mod 1)) mod 1 = (b·x) mod 1, so the series
    // argument can be reduced every term; this keeps the trig phases at
    // full precision however deep the summation goes.
    integer_base: bool,
}

impl WeierstrassField {
    pub fn new(phi: TrigPolynomial, b: f64, tail_tol: f64) -> Result<Self> {
        if !(b > 1.0) {
            return Err(Error::invalid(format!("lacunarity base b must exceed 1, got {b}")));
        }
        if !(tail_tol > 0.0) {
            return Err(Error::invalid(format!(
                "tail tolerance must be positive, got {tail_tol}"
            )));
        }
        let w0 = phi.weighted_l1(0.0);
        let w1 = phi.weighted_l1(1.0);
        let w2 = phi.weighted_l1(2.0);
        let kappa = phi.min_nonzero_freq_norm();
        Ok(WeierstrassField {
            extension: PoissonField::new(phi),
            b,
            tail_tol,
            w0,
            w1,
            w2,
            kappa,
            integer_base: b.fract() == 0.0,
        })
    }

    fn initial_argument(&self, x: &[f64]) -> Vec<f64> {
        if self.integer_base {
            x.iter().map(|v| v.rem_euclid(1.0)).collect()
        } else {
            x.to_vec()
        }
    }

    fn advance_argument(&self, arg: &mut [f64]) {
        for a in arg.iter_mut() {
            *a *= self.b;
            if self.integer_base {
                *a = a.rem_euclid(1.0);
            }
        }
    }

    pub fn base(&self) -> &TrigPolynomial {
        self.extension.base()
    }

    pub fn phi_extension(&self) -> &PoissonField {
        &self.extension
    }

    /// Boundary dimension d.
    pub fn dim(&self) -> usize {
        self.extension.base().dim()
    }

    pub fn lacunarity(&self) -> f64 {
        self.b
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// f_{b,φ}(x), truncated once the geometric tail ‖φ‖_∞ b^{−N}/(b−1) drops
    /// below `tail_tol`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        if self.extension.base().is_zero() {
            return 0.0;
        }
        let n_max = if self.w0 > 0.0 {
            (self.w0 / (self.tail_tol * (self.b - 1.0)))
                .log(self.b)
                .ceil()
                .max(0.0) as usize
        } else {
            0
        };
        let mut acc = 0.0;
        let mut scale = 1.0;
        let mut arg = self.initial_argument(x);
        for _ in 0..=n_max {
            acc += scale * self.extension.base().eval(&arg);
            scale /= self.b;
            self.advance_argument(&mut arg);
        }
        acc
    }

    /// Jet of F at (x, y) together with the certified tail bounds.
    pub fn jet_detailed(&self, x: &[f64], y: f64) -> Result<(HarmonicJet, TailBounds)> {
        check_y_floor(y)?;
        let d = self.dim();
        let mut acc = JetAccum::new(d + 1);
        let zero_tail = TailBounds {
            value: 0.0,
            gradient: 0.0,
            hessian: 0.0,
            terms_used: 0,
        };
        if self.extension.base().is_zero() {
            return Ok((acc.into_jet(), zero_tail));
        }

        let Some(kappa) = self.kappa else {
            // Constant φ: F = c₀ b/(b−1), gradient and Hessian vanish.
            acc.value = self.extension.base().mean() * self.b / (self.b - 1.0);
            return Ok((acc.into_jet(), zero_tail));
        };

        const MAX_TERMS: usize = 4000;
        let mut arg = self.initial_argument(x);
        let mut height = y;
        let mut w_v = 1.0;
        let mut w_h = 1.0;
        for n in 0..MAX_TERMS {
            self.extension.accumulate(&arg, height, w_v, 1.0, w_h, &mut acc);

            // Tail of the remaining terms m > n. The value tail is geometric;
            // gradient and Hessian tails use e^{−2πκ b^m y} with
            // b^m ≥ b^{n+1}(1 + (m−n−1)(b−1)).
            let value_tail = self.w0 * w_v / (self.b - 1.0);
            let z = TAU * kappa * self.b * height;
            let q_grad = (-z * (self.b - 1.0)).exp();
            let q_hess = self.b * q_grad;
            let grad_tail = if q_grad < 1.0 {
                self.w1 * (-z).exp() / (1.0 - q_grad)
            } else {
                f64::INFINITY
            };
            let hess_tail = if q_hess < 1.0 {
                self.w2 * w_h * self.b * (-z).exp() / (1.0 - q_hess)
            } else {
                f64::INFINITY
            };
            if value_tail <= self.tail_tol
                && grad_tail <= self.tail_tol
                && hess_tail <= self.tail_tol
            {
                return Ok((
                    acc.into_jet(),
                    TailBounds {
                        value: value_tail,
                        gradient: grad_tail,
                        hessian: hess_tail,
                        terms_used: n + 1,
                    },
                ));
            }

            self.advance_argument(&mut arg);
            height *= self.b;
            w_v /= self.b;
            w_h *= self.b;
        }
        Err(Error::numeric(format!(
            "Weierstrass jet did not reach tail tolerance {:e} within {MAX_TERMS} terms (y = {y:e})",
            self.tail_tol
        )))
    }
}

impl HarmonicField for WeierstrassField {
    fn boundary_dim(&self) -> usize {
        self.extension.base().dim()
    }

    fn jet(&self, x: &[f64], y: f64) -> Result<HarmonicJet> {
        Ok(self.jet_detailed(x, y)?.0)
    }

    fn gradient(&self, x: &[f64], y: f64) -> Result<Vec<f64>> {
        check_y_floor(y)?;
        let d = self.dim();
        if self.extension.base().is_zero() {
            return Ok(vec![0.0; d + 1]);
        }
        let Some(kappa) = self.kappa else {
            return Ok(vec![0.0; d + 1]);
        };
        const MAX_TERMS: usize = 4000;
        let mut acc = JetAccum::new(d + 1);
        let mut arg = self.initial_argument(x);
        let mut height = y;
        for _ in 0..MAX_TERMS {
            self.extension.accumulate(&arg, height, 0.0, 1.0, 0.0, &mut acc);
            let z = TAU * kappa * self.b * height;
            let q = (-z * (self.b - 1.0)).exp();
            if q < 1.0 && self.w1 * (-z).exp() / (1.0 - q) <= self.tail_tol {
                return Ok(acc.grad);
            }
            self.advance_argument(&mut arg);
            height *= self.b;
        }
        Err(Error::numeric("gradient series did not converge"))
    }
}

impl BoundaryFunction for WeierstrassField {
    fn boundary_dim(&self) -> usize {
        self.extension.base().dim()
    }
    fn eval_boundary(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
}

/// F(x, y) = offset + a·(x, y): the trivial harmonic field with constant
/// gradient.
pub struct LinearField {
    pub coeffs: Vec<f64>,
    pub offset: f64,
}

impl LinearField {
    pub fn new(coeffs: Vec<f64>) -> Self {
        LinearField { coeffs, offset: 0.0 }
    }
}

impl HarmonicField for LinearField {
    fn boundary_dim(&self) -> usize {
        self.coeffs.len() - 1
    }
    fn jet(&self, x: &[f64], y: f64) -> Result<HarmonicJet> {
        check_y_positive(y)?;
        let mut value = self.offset;
        for (c, xi) in self.coeffs.iter().zip(x.iter().chain(std::iter::once(&y))) {
            value += c * xi;
        }
        Ok(HarmonicJet {
            value,
            gradient: self.coeffs.clone(),
            hessian: SymMat::zeros(self.coeffs.len()),
        })
    }
}

/// F(x, y) = x₁² − y²: harmonic, with Hessian diag(2, 0, …, −2). For d ≥ 2
/// the field is independent of x₂,…, which makes it the canonical
/// degenerate-direction test input.
pub struct SaddleField {
    pub dim: usize,
}

impl HarmonicField for SaddleField {
    fn boundary_dim(&self) -> usize {
        self.dim
    }
    fn jet(&self, x: &[f64], y: f64) -> Result<HarmonicJet> {
        check_y_positive(y)?;
        let d = self.dim;
        let mut gradient = vec![0.0; d + 1];
        gradient[0] = 2.0 * x[0];
        gradient[d] = -2.0 * y;
        let mut hessian = SymMat::zeros(d + 1);
        hessian.set(0, 0, 2.0);
        hessian.set(d, d, -2.0);
        Ok(HarmonicJet {
            value: x[0] * x[0] - y * y,
            gradient,
            hessian,
        })
    }
}

/// F(x, y) = atan2(x₁, y): harmonic, with a gradient kink concentrated at
/// x₁ = 0 near the boundary. Useful as a stopping-time test field.
pub struct AngleField {
    pub dim: usize,
}

impl HarmonicField for AngleField {
    fn boundary_dim(&self) -> usize {
        self.dim
    }
    fn jet(&self, x: &[f64], y: f64) -> Result<HarmonicJet> {
        check_y_positive(y)?;
        let d = self.dim;
        let u = x[0];
        let r2 = u * u + y * y;
        let r4 = r2 * r2;
        let mut gradient = vec![0.0; d + 1];
        gradient[0] = y / r2;
        gradient[d] = -u / r2;
        let mut hessian = SymMat::zeros(d + 1);
        hessian.set(0, 0, -2.0 * u * y / r4);
        hessian.set(0, d, (u * u - y * y) / r4);
        hessian.set(d, d, 2.0 * u * y / r4);
        Ok(HarmonicJet {
            value: u.atan2(y),
            gradient,
            hessian,
        })
    }
}

/// Max relative residuals of the three functional equations
/// F(bx,by) = bF − bΦ, ∇F(bx,by) = ∇F − ∇Φ, b·HF(bx,by) = HF − HΦ
/// over a sample set.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FunctionalEquationResiduals {
    pub value: f64,
    pub gradient: f64,
    pub hessian: f64,
}

fn rel_scalar(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()))
}

fn rel_vec(lhs: &[f64], rhs: &[f64]) -> f64 {
    let diff = norm(&crate::linalg::sub(lhs, rhs));
    diff / (1.0 + norm(lhs).max(norm(rhs)))
}

fn rel_mat(lhs: &SymMat, rhs: &SymMat) -> f64 {
    let mut diff = lhs.clone();
    diff.add_scaled(rhs, -1.0);
    diff.frobenius_norm() / (1.0 + lhs.frobenius_norm().max(rhs.frobenius_norm()))
}

/// Evaluates both sides of the functional equations at each sample point.
pub fn check_functional_equations(
    field: &WeierstrassField,
    samples: &[(Vec<f64>, f64)],
) -> Result<FunctionalEquationResiduals> {
    let b = field.lacunarity();
    let mut res = FunctionalEquationResiduals {
        value: 0.0,
        gradient: 0.0,
        hessian: 0.0,
    };
    for (x, y) in samples {
        check_y_positive(*y)?;
        let bx: Vec<f64> = x.iter().map(|v| v * b).collect();
        let lhs = field.jet(&bx, b * y)?;
        let at = field.jet(x, *y)?;
        let phi = field.phi_extension().jet(x, *y)?;

        res.value = res
            .value
            .max(rel_scalar(lhs.value, b * at.value - b * phi.value));

        let rhs_grad: Vec<f64> = at
            .gradient
            .iter()
            .zip(&phi.gradient)
            .map(|(a, p)| a - p)
            .collect();
        res.gradient = res.gradient.max(rel_vec(&lhs.gradient, &rhs_grad));

        let mut lhs_h = lhs.hessian.clone();
        lhs_h.scale(b);
        let mut rhs_h = at.hessian.clone();
        rhs_h.add_scaled(&phi.hessian, -1.0);
        res.hessian = res.hessian.max(rel_mat(&lhs_h, &rhs_h));
    }
    Ok(res)
}

/// Result of the boundary-representation identity check
/// f(x) = ∫₀^y t·(eᵀ(HF)e)(x+te) dt − y ∇F(x+ye)·e + F(x+ye).
#[derive(Debug, Clone, Copy)]
pub struct RepresentationCheck {
    pub residual: f64,
    /// Bound on the untouched [0, t₀] piece of the integral.
    pub small_t_bound: f64,
    pub integrand_evals: usize,
}

/// Adaptive Simpson on [a, b] with absolute tolerance.
fn adaptive_simpson<G: FnMut(f64) -> f64>(
    g: &mut G,
    a: f64,
    b: f64,
    tol: f64,
    evals: &mut usize,
    depth: usize,
) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = {
        *evals += 3;
        (g(a), g(m), g(b))
    };

    fn recurse<G: FnMut(f64) -> f64>(
        g: &mut G,
        a: f64,
        m: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        evals: &mut usize,
        depth: usize,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        *evals += 2;
        let flm = g(lm);
        let frm = g(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let err = left + right - whole;
        if err.abs() <= 15.0 * tol || depth == 0 {
            return left + right + err / 15.0;
        }
        recurse(g, a, lm, m, fa, flm, fm, left, tol / 2.0, evals, depth - 1)
            + recurse(g, m, rm, b, fm, frm, fb, right, tol / 2.0, evals, depth - 1)
    }

    let whole = simpson(fa, fm, fb, b - a);
    recurse(g, a, m, b, fa, fm, fb, whole, tol, evals, depth)
}

/// Checks the representation identity for a unit direction `e` in ℝ^{d+1}
/// with positive last coordinate, at boundary point x and height y ∈ (0, 1].
///
/// The integrand t·(eᵀ(HF)e)(x+te) is bounded near t = 0 (the 1/t growth of
/// HF is cancelled by the factor t), but jets cannot be evaluated at y = 0,
/// so integration starts at t₀ = 1e−8·y and the [0, t₀] remainder is bounded
/// by t₀ · sup_t |t (eᵀ(HF)e)|, estimated from log-spaced probes.
pub fn check_representation_identity(
    field: &WeierstrassField,
    x: &[f64],
    y: f64,
    e: &[f64],
    quad_tol: f64,
) -> Result<RepresentationCheck> {
    let d = field.dim();
    if e.len() != d + 1 {
        return Err(Error::invalid("direction must live in R^{d+1}"));
    }
    if e[d] <= 0.0 {
        return Err(Error::invalid(
            "direction must have positive last (vertical) coordinate",
        ));
    }
    if (norm(e) - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("direction must be a unit vector"));
    }
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::invalid("height must lie in (0, 1]"));
    }

    let point_at = |t: f64| -> (Vec<f64>, f64) {
        let xs: Vec<f64> = (0..d).map(|i| x[i] + t * e[i]).collect();
        (xs, t * e[d])
    };

    let mut evals = 0usize;
    let mut integrand = |t: f64| -> f64 {
        let (xs, h) = point_at(t);
        let jet = field
            .jet(&xs, h)
            .expect("height stays above the floor on the integration range");
        let he = jet.hessian.matvec(e);
        t * dot(e, &he)
    };

    // Start above both the relative cut and the absolute evaluation floor.
    let t0 = (1e-8 * y).max(MIN_Y / e[d] * (1.0 + 1e-9));
    // sup of |integrand| from log-spaced probes: bounds the [0, t0] remainder.
    let mut sup = 0.0f64;
    for g in crate::sampling::log_grid_desc(t0, y, 4) {
        sup = sup.max(integrand(g).abs());
        evals += 1;
    }
    let small_t_bound = sup * t0;

    // Geometric panels toward t = 0 resolve the 1/t scale of the integrand.
    let mut integral = 0.0;
    let mut hi = y;
    let mut panels = 0usize;
    while hi > t0 {
        let lo = (0.5 * hi).max(t0);
        panels += 1;
        integral += adaptive_simpson(
            &mut integrand,
            lo,
            hi,
            quad_tol / (panels as f64 * panels as f64),
            &mut evals,
            24,
        );
        hi = lo;
    }

    let (xe, ye) = point_at(y);
    let jet_top = field.jet(&xe, ye)?;
    let reconstructed = integral - y * dot(&jet_top.gradient, e) + jet_top.value;
    let f_val = field.eval(x);

    Ok(RepresentationCheck {
        residual: (f_val - reconstructed).abs(),
        small_t_bound,
        integrand_evals: evals,
    })
}
