use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Vector};
use super::spaces::Projector;
use super::TolerancePolicy;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// One eigenvalue with the projector onto its eigenspace.
#[derive(Clone, Debug)]
pub struct SpectralComponent {
    pub value: f64,
    pub projector: Projector,
}

/// A Hermitian matrix with its spectral decomposition.
///
/// Components are sorted by increasing eigenvalue and eigenvalues are
/// pairwise distinct (degenerate eigenvectors share a projector).
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    spectrum: Vec<SpectralComponent>,
}

impl HermitianOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectrum(&self) -> &[SpectralComponent] {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|c| c.value).collect()
    }

    /// `Σ λᵢ Pᵢ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        recombine(self.dim(), &self.spectrum)
    }

    /// Replaces every eigenvalue by the member of `values` within `eps` of it.
    /// Components landing on the same label are merged.
    pub fn snap_to(&self, values: &[f64], eps: f64) -> Result<HermitianOperator> {
        let mut snapped = Vec::with_capacity(self.spectrum.len());
        for c in &self.spectrum {
            let target = values
                .iter()
                .copied()
                .filter(|v| (v - c.value).abs() <= eps * v.abs().max(1.0))
                .min_by(|a, b| (a - c.value).abs().total_cmp(&(b - c.value).abs()))
                .ok_or_else(|| {
                    Error::Validation(format!(
                        "eigenvalue {} is not in the value set {values:?}",
                        c.value
                    ))
                })?;
            snapped.push(SpectralComponent {
                value: target,
                projector: c.projector.clone(),
            });
        }
        let spectrum = merge_equal(self.dim(), snapped);
        Ok(HermitianOperator {
            matrix: recombine(self.dim(), &spectrum),
            spectrum,
        })
    }
}

fn recombine(dim: usize, spectrum: &[SpectralComponent]) -> ComplexMatrix {
    spectrum.iter().fold(ComplexMatrix::zeros(dim), |acc, c| {
        &acc + &c.projector.matrix().scaled(Complex64::new(c.value, 0.0))
    })
}

/// Sorts by value and sums projectors whose values compare equal.
fn merge_equal(dim: usize, mut parts: Vec<SpectralComponent>) -> Vec<SpectralComponent> {
    parts.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut out: Vec<SpectralComponent> = Vec::with_capacity(parts.len());
    for c in parts {
        match out.last_mut() {
            Some(last) if last.value == c.value => {
                let sum = last.projector.matrix() + c.projector.matrix();
                last.projector = Projector::trusted(sum);
            }
            _ => out.push(c),
        }
    }
    debug_assert!(out.iter().all(|c| c.projector.dim() == dim));
    out
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues closer than `eps · max(1, ‖A‖_max)` are merged into one
/// component whose value is their mean.
pub fn hermitian_eig(a: &ComplexMatrix, tol: &TolerancePolicy) -> Result<HermitianOperator> {
    if !a.is_hermitian(tol.eps) {
        return Err(Error::Validation("matrix is not Hermitian".into()));
    }
    let n = a.dim();
    // Symmetrise so that rounding in the input cannot bias the rotation.
    let mut w = (&(a + &a.adjoint())).scaled(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let scale = w.frobenius_norm();
    // Rounding leaves off-diagonal residue of order ε‖A‖ per entry.
    let target = 1e-14 * n as f64 * scale.max(f64::MIN_POSITIVE);
    let mut converged = off_diagonal(&w) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal(&w) <= target;
    }

    let mut pairs: Vec<(f64, Vector)> = (0..n).map(|i| (w.get(i, i).re, v.column(i))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let gap = tol.eps * a.max_abs().max(1.0);
    let mut spectrum = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i + 1;
        while j < pairs.len() && pairs[j].0 - pairs[j - 1].0 <= gap {
            j += 1;
        }
        let value = pairs[i..j].iter().map(|p| p.0).sum::<f64>() / (j - i) as f64;
        let proj = pairs[i..j].iter().fold(ComplexMatrix::zeros(n), |acc, (_, vec)| {
            &acc + &ComplexMatrix::outer(vec)
        });
        spectrum.push(SpectralComponent {
            value,
            projector: Projector::trusted(proj),
        });
        i = j;
    }
    Ok(HermitianOperator {
        matrix: a.clone(),
        spectrum,
    })
}

fn off_diagonal(w: &ComplexMatrix) -> f64 {
    let n = w.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += w.get(r, c).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes `w[p][q]` with `G = diag(1, e^{iθ}) · R(ϑ)` acting on coordinates
/// `p, q`, updating `w ← G† w G` and `v ← v G`.
fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = w.get(p, q);
    let mag = b.norm();
    if mag == 0.0 {
        return;
    }
    let phase = Complex64::from_polar(1.0, -b.arg());
    let app = w.get(p, p).re;
    let aqq = w.get(q, q).re;
    let theta = 0.5 * (2.0 * mag).atan2(app - aqq);
    let (s, c) = theta.sin_cos();
    let g = [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [phase * s, phase * c],
    ];
    let n = w.dim();
    for k in 0..n {
        let (x, y) = (w.get(k, p), w.get(k, q));
        w.set(k, p, x * g[0][0] + y * g[1][0]);
        w.set(k, q, x * g[0][1] + y * g[1][1]);
        let (x, y) = (v.get(k, p), v.get(k, q));
        v.set(k, p, x * g[0][0] + y * g[1][0]);
        v.set(k, q, x * g[0][1] + y * g[1][1]);
    }
    for k in 0..n {
        let (x, y) = (w.get(p, k), w.get(q, k));
        w.set(p, k, g[0][0].conj() * x + g[1][0].conj() * y);
        w.set(q, k, g[0][1].conj() * x + g[1][1].conj() * y);
    }
    w.set(p, q, Complex64::new(0.0, 0.0));
    w.set(q, p, Complex64::new(0.0, 0.0));
    w.set(p, p, Complex64::new(w.get(p, p).re, 0.0));
    w.set(q, q, Complex64::new(w.get(q, q).re, 0.0));
}

/// `Ê[A ∈ Δ]`: the sum of eigenprojectors whose eigenvalue is within `eps` of
/// some member of `delta`. No match gives the zero projector.
pub fn spectral_projector(a: &HermitianOperator, delta: &[f64], eps: f64) -> Projector {
    let sum = a
        .spectrum
        .iter()
        .filter(|c| delta.iter().any(|d| (d - c.value).abs() <= eps * d.abs().max(1.0)))
        .fold(ComplexMatrix::zeros(a.dim()), |acc, c| &acc + c.projector.matrix());
    Projector::trusted(sum)
}

/// `f(Â) = Σ f(λᵢ) Pᵢ`. `f` returns `None` where it is undefined.
pub fn apply_function(
    a: &HermitianOperator,
    f: impl Fn(f64) -> Option<f64>,
) -> Result<HermitianOperator> {
    let mut parts = Vec::with_capacity(a.spectrum.len());
    for c in &a.spectrum {
        let value = f(c.value).ok_or(Error::Domain(c.value))?;
        if !value.is_finite() {
            return Err(Error::Domain(c.value));
        }
        parts.push(SpectralComponent {
            value,
            projector: c.projector.clone(),
        });
    }
    let spectrum = merge_equal(a.dim(), parts);
    Ok(HermitianOperator {
        matrix: recombine(a.dim(), &spectrum),
        spectrum,
    })
}
