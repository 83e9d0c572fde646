use num_complex::Complex64;

use super::matrix::{inner, norm, normalize, scale, sub, ComplexMatrix, Vector};
use super::TolerancePolicy;
use crate::{Error, Result};

/// An orthogonal projector, `P = P† = P²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
}

impl Projector {
    /// Validates `P = P†` and `P² = P` within `eps · max(1, ‖P‖_max)`.
    pub fn new(matrix: ComplexMatrix, eps: f64) -> Result<Self> {
        if !matrix.is_hermitian(eps) {
            return Err(Error::Validation("projector is not Hermitian".into()));
        }
        let sq = &matrix * &matrix;
        if sq.max_abs_diff(&matrix) > eps * matrix.max_abs().max(1.0) {
            return Err(Error::Validation("projector is not idempotent".into()));
        }
        Ok(Projector { matrix })
    }

    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        Projector { matrix }
    }

    pub fn zero(dim: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// The projector onto `span(v)`.
    pub fn onto(v: &[Complex64]) -> Result<Self> {
        let u = normalize(v).ok_or_else(|| Error::Precondition("zero vector has no span".into()))?;
        Ok(Projector {
            matrix: ComplexMatrix::outer(&u),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vector {
        self.matrix.apply(v)
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    pub fn range(&self, tol: &TolerancePolicy) -> Subspace {
        let cols: Vec<Vector> = (0..self.dim()).map(|c| self.matrix.column(c)).collect();
        Subspace::span(self.dim(), &cols, tol)
    }

    /// `1 − P`.
    pub fn complement(&self) -> Projector {
        Projector {
            matrix: &ComplexMatrix::identity(self.dim()) - &self.matrix,
        }
    }
}

/// A subspace of `ℂⁿ` held as an orthonormal basis (possibly empty).
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Subspace {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[i] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        Subspace { dim, basis }
    }

    /// Span of `vectors`, orthonormalised by Gram-Schmidt with one
    /// re-orthogonalisation pass. A residual at or below the null threshold
    /// adds no direction.
    pub fn span(dim: usize, vectors: &[Vector], tol: &TolerancePolicy) -> Self {
        let mut basis: Vec<Vector> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), dim, "vector length must match ambient dimension");
            let mut r = v.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &r);
                    r = sub(&r, &scale(b, c));
                }
            }
            if norm(&r) > tol.null_threshold {
                basis.push(normalize(&r).expect("nonzero residual"));
            }
            if basis.len() == dim {
                break;
            }
        }
        Subspace { dim, basis }
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// `P_K v`.
    pub fn project(&self, v: &[Complex64]) -> Vector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for b in &self.basis {
            let c = inner(b, v);
            for (o, x) in out.iter_mut().zip(b) {
                *o += x * c;
            }
        }
        out
    }

    pub fn projector(&self) -> Projector {
        let m = self
            .basis
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, b| &acc + &ComplexMatrix::outer(b));
        Projector::trusted(m)
    }

    /// Same subspace: equal rank and each basis vector lies in the other.
    pub fn approx_eq(&self, other: &Subspace, tol: &TolerancePolicy) -> bool {
        self.dim == other.dim
            && self.rank() == other.rank()
            && self.basis.iter().all(|b| in_subspace(b, other, tol))
    }
}

/// `closure(A·K)`: the span of `A` applied to a basis of `K`.
pub fn image_subspace(a: &ComplexMatrix, k: &Subspace, tol: &TolerancePolicy) -> Subspace {
    assert_eq!(a.dim(), k.dim, "matrix and subspace dimensions must match");
    let images: Vec<Vector> = k.basis.iter().map(|b| a.apply(b)).collect();
    Subspace::span(k.dim, &images, tol)
}

/// `‖v − P_K v‖ ≤ null · max(‖v‖, 1)`.
pub fn in_subspace(v: &[Complex64], k: &Subspace, tol: &TolerancePolicy) -> bool {
    assert_eq!(v.len(), k.dim, "vector and subspace dimensions must match");
    let residual = norm(&sub(v, &k.project(v)));
    residual <= tol.null_threshold * norm(v).max(1.0)
}

/// A one-dimensional subspace, held as a unit representative.
#[derive(Clone, Debug)]
pub struct Ray {
    rep: Vector,
}

impl Ray {
    pub fn new(v: &[Complex64], tol: &TolerancePolicy) -> Result<Self> {
        if tol.is_null(v) {
            return Err(Error::Precondition("null vector spans no ray".into()));
        }
        Ok(Ray {
            rep: normalize(v).expect("nonzero"),
        })
    }

    pub fn representative(&self) -> &[Complex64] {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    /// Phase-insensitive equality `|⟨a|b⟩| ≥ 1 − eps`.
    pub fn same(&self, other: &Ray, eps: f64) -> bool {
        self.rep.len() == other.rep.len() && inner(&self.rep, &other.rep).norm() >= 1.0 - eps
    }
}

/// A point of projective space with the absorbing zero ray adjoined.
#[derive(Clone, Debug)]
pub enum ProjectivePoint {
    Zero,
    Ray(Ray),
}

impl ProjectivePoint {
    pub fn of(v: &[Complex64], tol: &TolerancePolicy) -> Self {
        match Ray::new(v, tol) {
            Ok(r) => ProjectivePoint::Ray(r),
            Err(_) => ProjectivePoint::Zero,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ProjectivePoint::Zero)
    }

    pub fn same(&self, other: &ProjectivePoint, eps: f64) -> bool {
        match (self, other) {
            (ProjectivePoint::Zero, ProjectivePoint::Zero) => true,
            (ProjectivePoint::Ray(a), ProjectivePoint::Ray(b)) => a.same(b, eps),
            _ => false,
        }
    }
}

/// Whether two non-null vectors span the same ray.
pub fn ray_equal(psi: &[Complex64], phi: &[Complex64], tol: &TolerancePolicy) -> Result<bool> {
    if psi.len() != phi.len() {
        return Err(Error::Usage("vectors have different lengths".into()));
    }
    let a = Ray::new(psi, tol)?;
    let b = Ray::new(phi, tol)?;
    Ok(a.same(&b, tol.eps))
}
