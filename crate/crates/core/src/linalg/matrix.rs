use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 16;

pub type Vector = Vec<Complex64>;

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

pub fn scale(v: &[Complex64], s: Complex64) -> Vector {
    v.iter().map(|x| x * s).collect()
}

pub fn sub(a: &[Complex64], b: &[Complex64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `v / ‖v‖`, or `None` for the zero vector.
pub fn normalize(v: &[Complex64]) -> Option<Vector> {
    let n = norm(v);
    (n > 0.0).then(|| scale(v, Complex64::new(1.0 / n, 0.0)))
}

/// A square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Capacity {
                what: "matrix dimension",
                needed: dim as u128,
                limit: MAX_DIM as u128,
            });
        }
        if data.len() != dim * dim {
            return Err(Error::Structural(format!(
                "{} entries for a {dim}×{dim} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Structural(format!(
                "row of length {} in a {dim}-row matrix",
                r.len()
            )));
        }
        Self::new(dim, rows.concat())
    }

    /// Convenience constructor from real entries.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &v) in values.iter().enumerate() {
            data[i * dim + i] = Complex64::new(v, 0.0);
        }
        Self::new(dim, data)
    }

    /// `|v⟩⟨v|` (not normalised).
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        ComplexMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(<[Complex64]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vector {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimensions must match");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// `‖A − A†‖_max ≤ eps · max(1, ‖A‖_max)`.
    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= eps * self.max_abs().max(1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must match");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must match");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must match");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_adjoint() {
        let i = Complex64::new(0.0, 1.0);
        let a = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), i],
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(&a * &id, a);
        assert_eq!(a.adjoint().get(1, 0), -i);
        assert!(!a.is_hermitian(1e-12));
        let h = &a + &a.adjoint();
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn dimension_limits() {
        assert!(matches!(
            ComplexMatrix::new(0, vec![]),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(17, vec![Complex64::new(0.0, 0.0); 289]),
            Err(Error::Capacity { .. })
        ));
        assert!(ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0]]).is_err());
        assert!(ComplexMatrix::from_real(&[&[f64::NAN]]).is_err());
    }
}
