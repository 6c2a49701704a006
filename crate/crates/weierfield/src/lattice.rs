//! N-adic cube addressing, Carleson boxes, tensor midpoint quadrature and
//! face-average gradients.
//!
//! Cube geometry is always recomputed from (root, generation, index) — never
//! accumulated through subdivisions — so deep generations carry no drift and
//! dyadic roots stay exact.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::HarmonicField;

/// An addressed N-adic subcube of a root cube in ℝ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct NadicCube {
    root_corner: Vec<f64>,
    root_side: f64,
    n: u32,
    generation: u32,
    index: Vec<u64>,
}

impl NadicCube {
    /// The root cube itself (generation 0).
    pub fn root(corner: Vec<f64>, side: f64, n: u32) -> Result<Self> {
        if corner.is_empty() {
            return Err(Error::invalid("cube dimension must be positive"));
        }
        if !(side > 0.0) {
            return Err(Error::invalid("cube sidelength must be positive"));
        }
        if n < 2 {
            return Err(Error::invalid("subdivision arity N must be at least 2"));
        }
        let dim = corner.len();
        Ok(NadicCube {
            root_corner: corner,
            root_side: side,
            n,
            generation: 0,
            index: vec![0; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.root_corner.len()
    }

    pub fn arity(&self) -> u32 {
        self.n
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    /// N^generation, exact in f64 for the depths this crate reaches.
    fn scale(&self) -> f64 {
        (self.n as f64).powi(self.generation as i32)
    }

    /// l(Q) = l₀ · N^{−generation}.
    pub fn side(&self) -> f64 {
        self.root_side / self.scale()
    }

    /// Corner = root corner + index · l(Q), componentwise.
    pub fn corner(&self) -> Vec<f64> {
        let l = self.side();
        self.root_corner
            .iter()
            .zip(&self.index)
            .map(|(c, i)| c + *i as f64 * l)
            .collect()
    }

    pub fn center(&self) -> Vec<f64> {
        let l = self.side();
        self.corner().into_iter().map(|c| c + 0.5 * l).collect()
    }

    pub fn volume(&self) -> f64 {
        self.side().powi(self.dim() as i32)
    }

    /// The N^d children of generation + 1, in lexicographic digit order.
    pub fn children(&self) -> Vec<NadicCube> {
        let d = self.dim();
        let n = self.n as u64;
        let count = (self.n as usize).pow(d as u32);
        let mut out = Vec::with_capacity(count);
        let mut digits = vec![0u64; d];
        loop {
            let index: Vec<u64> = self
                .index
                .iter()
                .zip(&digits)
                .map(|(i, d)| i * n + d)
                .collect();
            out.push(NadicCube {
                root_corner: self.root_corner.clone(),
                root_side: self.root_side,
                n: self.n,
                generation: self.generation + 1,
                index,
            });
            // Odometer increment over the d digits, last digit fastest.
            let mut pos = d;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < n {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    pub fn parent(&self) -> Option<NadicCube> {
        if self.generation == 0 {
            return None;
        }
        let n = self.n as u64;
        Some(NadicCube {
            root_corner: self.root_corner.clone(),
            root_side: self.root_side,
            n: self.n,
            generation: self.generation - 1,
            index: self.index.iter().map(|i| i / n).collect(),
        })
    }

    /// Descendant at the given relative address inside this cube.
    pub fn descendant(&self, generations_below: u32, rel_index: &[u64]) -> Result<NadicCube> {
        if rel_index.len() != self.dim() {
            return Err(Error::invalid("relative index has wrong dimension"));
        }
        let span = (self.n as u64).pow(generations_below);
        if rel_index.iter().any(|i| *i >= span) {
            return Err(Error::invalid("relative index out of range"));
        }
        Ok(NadicCube {
            root_corner: self.root_corner.clone(),
            root_side: self.root_side,
            n: self.n,
            generation: self.generation + generations_below,
            index: self
                .index
                .iter()
                .zip(rel_index)
                .map(|(i, r)| i * span + r)
                .collect(),
        })
    }

    /// All descendants of relative generation 0..=depth, in generation-major
    /// lexicographic order.
    pub fn descendants_up_to(&self, depth: u32) -> Vec<NadicCube> {
        let mut out = vec![self.clone()];
        let mut frontier = vec![self.clone()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for q in &frontier {
                next.extend(q.children());
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// `"j:i₁,i₂,…,i_d"` — the address used in all tree dumps and reports.
    pub fn address(&self) -> String {
        let idx: Vec<String> = self.index.iter().map(|i| i.to_string()).collect();
        format!("{}:{}", self.generation, idx.join(","))
    }

    /// Rebuilds a cube of this lattice from its address string.
    pub fn from_address(root: &NadicCube, address: &str) -> Result<NadicCube> {
        let (gen_part, idx_part) = address
            .split_once(':')
            .ok_or_else(|| Error::config(format!("malformed cube address '{address}'")))?;
        let generation: u32 = gen_part
            .parse()
            .map_err(|_| Error::config(format!("bad generation in address '{address}'")))?;
        let index: Vec<u64> = idx_part
            .split(',')
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| Error::config(format!("bad index in address '{address}'")))
            })
            .collect::<Result<_>>()?;
        if index.len() != root.dim() {
            return Err(Error::config(format!(
                "address '{address}' has {} indices but d = {}",
                index.len(),
                root.dim()
            )));
        }
        let span = (root.n as u64).pow(generation);
        if index.iter().any(|i| *i >= span) {
            return Err(Error::config(format!("address '{address}' out of range")));
        }
        Ok(NadicCube {
            root_corner: root.root_corner.clone(),
            root_side: root.root_side,
            n: root.n,
            generation,
            index,
        })
    }
}

impl fmt::Display for NadicCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.address())
    }
}

impl Serialize for NadicCube {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.address())
    }
}

/// The box Q × [δ·l(Q), l(Q)] above a cube.
#[derive(Debug, Clone)]
pub struct CarlesonBox {
    pub base: NadicCube,
    pub delta: f64,
}

impl CarlesonBox {
    pub fn new(base: NadicCube, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0,1), got {delta}")));
        }
        Ok(CarlesonBox { base, delta })
    }

    /// The 1/N box C_{1/N}(Q) used by the weak QR condition.
    pub fn one_over_n(base: NadicCube) -> Self {
        let delta = 1.0 / base.arity() as f64;
        CarlesonBox { base, delta }
    }

    pub fn y_range(&self) -> (f64, f64) {
        let l = self.base.side();
        (self.delta * l, l)
    }

    pub fn volume(&self) -> f64 {
        let (lo, hi) = self.y_range();
        self.base.volume() * (hi - lo)
    }
}

/// Tensor midpoint rule over a Carleson box with m nodes per axis
/// (m^{d+1} total), in fixed lexicographic node order.
pub fn box_quadrature<G: FnMut(&[f64], f64) -> f64>(
    bx: &CarlesonBox,
    mut integrand: G,
    m: usize,
) -> Result<f64> {
    if m < 2 {
        return Err(Error::invalid("quadrature needs at least 2 nodes per axis"));
    }
    let d = bx.base.dim();
    let corner = bx.base.corner();
    let l = bx.base.side();
    let (y_lo, y_hi) = bx.y_range();
    let hx = l / m as f64;
    let hy = (y_hi - y_lo) / m as f64;
    let cell = hx.powi(d as i32) * hy;

    let mut sum = 0.0;
    let mut digits = vec![0usize; d + 1];
    let mut x = vec![0.0; d];
    loop {
        for i in 0..d {
            x[i] = corner[i] + (digits[i] as f64 + 0.5) * hx;
        }
        let y = y_lo + (digits[d] as f64 + 0.5) * hy;
        sum += integrand(&x, y);

        let mut pos = d + 1;
        loop {
            if pos == 0 {
                return Ok(sum * cell);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < m {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Midpoint rule at m nodes per axis together with the m vs 2m discrepancy:
/// cheap error telemetry for quadrature consumers. Returns the refined value.
pub fn box_quadrature_with_refinement<G: FnMut(&[f64], f64) -> f64>(
    bx: &CarlesonBox,
    mut integrand: G,
    m: usize,
) -> Result<(f64, f64)> {
    let coarse = box_quadrature(bx, &mut integrand, m)?;
    let fine = box_quadrature(bx, &mut integrand, 2 * m)?;
    Ok((fine, (fine - coarse).abs()))
}

/// Midpoint average over the cube's spatial nodes at a fixed height.
fn face_quadrature<G: FnMut(&[f64])>(q: &NadicCube, m: usize, mut visit: G) -> Result<usize> {
    if m < 2 {
        return Err(Error::invalid("quadrature needs at least 2 nodes per axis"));
    }
    let d = q.dim();
    let corner = q.corner();
    let h = q.side() / m as f64;
    let mut digits = vec![0usize; d];
    let mut x = vec![0.0; d];
    let mut count = 0usize;
    loop {
        for i in 0..d {
            x[i] = corner[i] + (digits[i] as f64 + 0.5) * h;
        }
        visit(&x);
        count += 1;
        let mut pos = d;
        loop {
            if pos == 0 {
                return Ok(count);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < m {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// (∇F)_Q: the midpoint-rule average of ∇F(·, l(Q)) over Q.
pub fn face_average_gradient<F: HarmonicField + ?Sized>(
    field: &F,
    q: &NadicCube,
    m: usize,
) -> Result<Vec<f64>> {
    let d = q.dim();
    if d != field.boundary_dim() {
        return Err(Error::invalid("cube and field dimensions differ"));
    }
    let l = q.side();
    let mut acc = vec![0.0; d + 1];
    let mut err = None;
    let count = face_quadrature(q, m, |x| {
        if err.is_some() {
            return;
        }
        match field.gradient(x, l) {
            Ok(g) => {
                for (a, gi) in acc.iter_mut().zip(&g) {
                    *a += gi;
                }
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc.into_iter().map(|a| a / count as f64).collect())
}
