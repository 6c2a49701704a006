//! Small dense symmetric matrices and their eigenvalues.
//!
//! Everything here operates on (d+1)×(d+1) Hessians with d ≤ 8 or so, so a
//! plain `Vec<f64>` store and cyclic Jacobi sweeps are the right tools; no
//! external linear-algebra crate is needed.

use crate::error::{Error, Result};

/// Dense symmetric matrix stored row-major.
///
/// Constructors keep the symmetry exact: `set` writes both `(i,j)` and
/// `(j,i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

impl SymMat {
    pub fn zeros(n: usize) -> Self {
        SymMat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets the symmetric pair of entries.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Builds from a row-major slice, symmetrizing via (A + Aᵀ)/2.
    pub fn from_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                rows.len()
            )));
        }
        let mut m = SymMat::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = 0.5 * (rows[i * n + j] + rows[j * n + i]);
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm: sqrt of the sum of squared entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let mut s = 0.0;
            for j in 0..self.n {
                s += self.get(i, j) * x[j];
            }
            out[i] = s;
        }
        out
    }

    /// A·A, again symmetric.
    pub fn squared(&self) -> SymMat {
        let n = self.n;
        let mut out = SymMat::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.get(i, k) * self.get(k, j);
                }
                out.set(i, j, s);
            }
        }
        out
    }

    /// self += c·other.
    pub fn add_scaled(&mut self, other: &SymMat, c: f64) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += c * b;
        }
    }

    pub fn scale(&mut self, c: f64) {
        for a in self.data.iter_mut() {
            *a *= c;
        }
    }

    /// Upper-triangular entries in row order: (0,0),(0,1),…,(1,1),…
    pub fn upper_triangular(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Eigenvalues by cyclic Jacobi rotations, unsorted.
    ///
    /// Sweeps run until the off-diagonal Frobenius norm drops below
    /// 1e−12 relative to the matrix norm.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        const REL_TOL: f64 = 1e-12;
        const MAX_SWEEPS: usize = 60;

        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == 1 {
            return Ok(vec![self.get(0, 0)]);
        }
        let mut a = self.clone();
        let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    off += a.get(p, q) * a.get(p, q);
                }
            }
            if (2.0 * off).sqrt() <= REL_TOL * scale {
                return Ok((0..n).map(|i| a.get(i, i)).collect());
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a.get(p, q);
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a.get(p, p);
                    let aqq = a.get(q, q);
                    let theta = 0.5 * (aqq - app) / apq;
                    // Smaller-root tangent keeps rotations well conditioned.
                    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // Apply the rotation to rows/columns p and q.
                    for k in 0..n {
                        if k != p && k != q {
                            let akp = a.get(k, p);
                            let akq = a.get(k, q);
                            a.set(k, p, c * akp - s * akq);
                            a.set(k, q, s * akp + c * akq);
                        }
                    }
                    a.set(p, p, app - t * apq);
                    a.set(q, q, aqq + t * apq);
                    a.set(p, q, 0.0);
                }
            }
        }
        Err(Error::numeric("Jacobi eigenvalue iteration did not converge"))
    }

    /// max_{|e|=1} |A e| for symmetric A: the spectral radius.
    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .fold(0.0f64, |acc, l| acc.max(l.abs())))
    }

    /// Smallest eigenvalue.
    pub fn lambda_min(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }

    /// Largest eigenvalue.
    pub fn lambda_max(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// a − b.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Normalizes to a unit vector; errors on (near-)zero input.
pub fn normalize(v: &[f64]) -> Result<Vec<f64>> {
    let n = norm(v);
    if n < 1e-300 {
        return Err(Error::invalid("cannot normalize a zero vector"));
    }
    Ok(v.iter().map(|x| x / n).collect())
}
