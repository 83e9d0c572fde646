//! Projector strings acting on vectors, rays and density matrices, and the
//! string-indexed valuations built from them.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::algebra::{BoundedIdeal, ProjString, ProjStringMonoid, DEFAULT_STRING_BUDGET};
use crate::linalg::{
    hermitian_eig, image_subspace, in_subspace, norm, normalize, sub, ComplexMatrix,
    ProjectivePoint, Projector, Subspace, TolerancePolicy, Vector,
};
use crate::{Error, Result};

/// Strings longer than this are reduced without being memoised.
const MEMO_DEPTH: usize = 8;

/// What the letters of an alphabet are allowed to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LetterKind {
    /// Orthogonal projectors; the valuations need this.
    Projector,
    /// Arbitrary Hermitian operators; products of these are only compared as vectors.
    Hermitian,
}

/// Named letters and their matrices.
#[derive(Clone, Debug)]
pub struct Alphabet {
    strings: ProjStringMonoid,
    dim: usize,
    letters: Vec<ComplexMatrix>,
    kind: LetterKind,
}

impl Alphabet {
    pub fn projectors(names: Vec<String>, letters: Vec<Projector>) -> Result<Self> {
        let letters = letters.into_iter().map(|p| p.matrix().clone()).collect();
        Self::build(names, letters, LetterKind::Projector)
    }

    pub fn hermitian(names: Vec<String>, letters: Vec<ComplexMatrix>, eps: f64) -> Result<Self> {
        if letters.iter().any(|m| !m.is_hermitian(eps)) {
            return Err(Error::Validation("alphabet letter is not Hermitian".into()));
        }
        Self::build(names, letters, LetterKind::Hermitian)
    }

    fn build(names: Vec<String>, letters: Vec<ComplexMatrix>, kind: LetterKind) -> Result<Self> {
        if names.len() != letters.len() {
            return Err(Error::Structural(format!(
                "{} names for {} letters",
                names.len(),
                letters.len()
            )));
        }
        let dim = match letters.first() {
            Some(m) => m.dim(),
            None => return Err(Error::Validation("alphabet is empty".into())),
        };
        if letters.iter().any(|m| m.dim() != dim) {
            return Err(Error::Validation("alphabet letters differ in dimension".into()));
        }
        Ok(Alphabet {
            strings: ProjStringMonoid::new(names)?,
            dim,
            letters,
            kind,
        })
    }

    pub fn strings(&self) -> &ProjStringMonoid {
        &self.strings
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn kind(&self) -> LetterKind {
        self.kind
    }

    pub fn letter(&self, i: usize) -> &ComplexMatrix {
        &self.letters[i]
    }
}

struct ReducerInner {
    alphabet: Alphabet,
    tol: TolerancePolicy,
    memo: RwLock<HashMap<ProjString, ComplexMatrix>>,
}

/// Computes reductions `Q̂ = R̂_p ⋯ R̂_1` with memoisation along
/// `(P ⋆ Q)^ = P̂ Q̂`. Cheap to clone and safe to share.
#[derive(Clone)]
pub struct Reducer(Arc<ReducerInner>);

impl std::fmt::Debug for Reducer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Reducer")
            .field("alphabet", &self.0.alphabet.strings.alphabet())
            .finish()
    }
}

impl Reducer {
    pub fn new(alphabet: Alphabet, tol: TolerancePolicy) -> Self {
        Reducer(Arc::new(ReducerInner {
            alphabet,
            tol,
            memo: RwLock::new(HashMap::new()),
        }))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    pub fn tolerance(&self) -> &TolerancePolicy {
        &self.0.tol
    }

    pub fn dim(&self) -> usize {
        self.0.alphabet.dim
    }

    /// The product of the letters in display order; the empty string gives `1`.
    pub fn reduce(&self, q: &ProjString) -> Result<ComplexMatrix> {
        let n = self.0.alphabet.len();
        if let Some(&bad) = q.letters().iter().find(|&&l| l >= n) {
            return Err(Error::lookup("letter", bad.to_string()));
        }
        Ok(self.reduce_checked(q))
    }

    fn reduce_checked(&self, q: &ProjString) -> ComplexMatrix {
        if q.is_empty() {
            return ComplexMatrix::identity(self.dim());
        }
        if let Some(m) = self.0.memo.read().expect("memo lock").get(q) {
            return m.clone();
        }
        let rest = self.reduce_checked(&q.without_first());
        let m = self.0.alphabet.letter(q.letters()[0]) * &rest;
        if q.len() <= MEMO_DEPTH {
            self.0
                .memo
                .write()
                .expect("memo lock")
                .insert(q.clone(), m.clone());
        }
        m
    }

    /// `Q̂ψ`.
    pub fn apply(&self, q: &ProjString, psi: &[Complex64]) -> Result<Vector> {
        self.check_vector(psi)?;
        Ok(self.reduce(q)?.apply(psi))
    }

    /// `Q̂ψ / ‖Q̂ψ‖`, defined only when `Q̂ψ` is not null.
    pub fn normalized_reduction(&self, psi: &[Complex64], q: &ProjString) -> Result<Vector> {
        let unit = self.unit(psi)?;
        let v = self.reduce(q)?.apply(&unit);
        if self.0.tol.is_null(&v) {
            return Err(Error::NullReduction);
        }
        Ok(normalize(&v).expect("nonzero"))
    }

    fn check_vector(&self, psi: &[Complex64]) -> Result<()> {
        if psi.len() != self.dim() {
            return Err(Error::Usage(format!(
                "vector has {} components, alphabet acts on dimension {}",
                psi.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    fn unit(&self, psi: &[Complex64]) -> Result<Vector> {
        self.check_vector(psi)?;
        if self.0.tol.is_null(psi) {
            return Err(Error::Precondition("state vector is null".into()));
        }
        Ok(normalize(psi).expect("nonzero"))
    }

    fn require_projectors(&self) -> Result<()> {
        if self.0.alphabet.kind != LetterKind::Projector {
            return Err(Error::Usage(
                "valuations need an alphabet of projectors".into(),
            ));
        }
        Ok(())
    }

    fn check_subspace(&self, k: &Subspace) -> Result<()> {
        if k.ambient() != self.dim() {
            return Err(Error::Usage("subspace dimension does not match the alphabet".into()));
        }
        Ok(())
    }

    fn ideal(
        &self,
        depth: usize,
        pred: impl Fn(&ComplexMatrix) -> bool + Send + Sync + 'static,
    ) -> Result<BoundedIdeal> {
        let me = self.clone();
        BoundedIdeal::build(
            self.0.alphabet.len(),
            depth,
            DEFAULT_STRING_BUDGET,
            Arc::new(move |q: &ProjString| me.reduce(q).map(|m| pred(&m)).unwrap_or(false)),
        )
    }

    /// `{Q | Q̂ψ ∈ Q̂K}`.
    pub fn valuation_vector(&self, psi: &[Complex64], k: &Subspace, depth: usize) -> Result<BoundedIdeal> {
        self.require_projectors()?;
        self.check_subspace(k)?;
        let unit = self.unit(psi)?;
        let k = k.clone();
        let tol = self.0.tol;
        self.ideal(depth, move |q| {
            in_subspace(&q.apply(&unit), &image_subspace(q, &k, &tol), &tol)
        })
    }

    /// `{Q | [Q̂ψ] ∈ ℓ_Q̂(PK ∪ {[0]})}`. The zero ray counts as a member
    /// exactly when `Q̂` annihilates some nonzero vector of `K`.
    pub fn valuation_ray(&self, psi: &[Complex64], k: &Subspace, depth: usize) -> Result<BoundedIdeal> {
        self.require_projectors()?;
        self.check_subspace(k)?;
        let unit = self.unit(psi)?;
        let k = k.clone();
        let tol = self.0.tol;
        self.ideal(depth, move |q| {
            let v = q.apply(&unit);
            let image = image_subspace(q, &k, &tol);
            if tol.is_null(&v) {
                image.rank() < k.rank()
            } else {
                in_subspace(&v, &image, &tol)
            }
        })
    }

    /// `{Q | [Q̂ψ] = [Q̂φ]}` with both images null also counting as equal.
    pub fn truth_ray_equal(&self, psi: &[Complex64], phi: &[Complex64], depth: usize) -> Result<BoundedIdeal> {
        self.require_projectors()?;
        let a = self.unit(psi)?;
        let b = self.unit(phi)?;
        let tol = self.0.tol;
        self.ideal(depth, move |q| {
            let pa = ProjectivePoint::of(&q.apply(&a), &tol);
            let pb = ProjectivePoint::of(&q.apply(&b), &tol);
            pa.same(&pb, tol.eps)
        })
    }

    /// `{Q | Q̂ψ = Q̂φ}` for vectors as given (no normalisation). Meaningful for
    /// either letter kind.
    pub fn truth_vector_equal(&self, psi: &[Complex64], phi: &[Complex64], depth: usize) -> Result<BoundedIdeal> {
        self.check_vector(psi)?;
        self.check_vector(phi)?;
        let (a, b) = (psi.to_vec(), phi.to_vec());
        let tol = self.0.tol;
        self.ideal(depth, move |q| {
            let (qa, qb) = (q.apply(&a), q.apply(&b));
            norm(&sub(&qa, &qb)) <= tol.null_threshold * norm(&qa).max(norm(&qb)).max(1.0)
        })
    }

    /// `{Q | Q̂ρQ̂† is supported in Q̂K}`, tested as
    /// `√tr((1−Π)Q̂ρQ̂†(1−Π)) ≤ null · max(√tr(Q̂ρQ̂†), 1)` with `Π` the
    /// projector onto `Q̂K`. Both traces are summed from vector norms over a
    /// factorisation `ρ = Σ wᵢwᵢ†`; for a pure state this is the vector test.
    pub fn valuation_density(&self, rho: &DensityMatrix, k: &Subspace, depth: usize) -> Result<BoundedIdeal> {
        self.require_projectors()?;
        self.check_subspace(k)?;
        if rho.dim() != self.dim() {
            return Err(Error::Usage("density matrix dimension does not match".into()));
        }
        let factors = rho.factors().to_vec();
        let k = k.clone();
        let tol = self.0.tol;
        self.ideal(depth, move |q| density_supported(q, &factors, &k, &tol))
    }
}

fn density_supported(q: &ComplexMatrix, factors: &[Vector], k: &Subspace, tol: &TolerancePolicy) -> bool {
    let image = image_subspace(q, k, tol);
    let (mut outside, mut total) = (0.0, 0.0);
    for w in factors {
        let v = q.apply(w);
        outside += norm(&sub(&v, &image.project(&v))).powi(2);
        total += norm(&v).powi(2);
    }
    outside.sqrt() <= tol.null_threshold * total.sqrt().max(1.0)
}

/// `ℓ_A[ψ] = [Aψ]`, or `[0]` when `Aψ` is null; `[0]` is absorbing.
pub fn act_on_ray(a: &ComplexMatrix, r: &ProjectivePoint, tol: &TolerancePolicy) -> ProjectivePoint {
    match r {
        ProjectivePoint::Zero => ProjectivePoint::Zero,
        ProjectivePoint::Ray(ray) => ProjectivePoint::of(&a.apply(ray.representative()), tol),
    }
}

/// A positive semidefinite Hermitian matrix with positive trace, kept
/// together with a factorisation `ρ / tr ρ = Σ wᵢwᵢ†`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    factors: Vec<Vector>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: &TolerancePolicy) -> Result<Self> {
        let op = hermitian_eig(&matrix, tol)?;
        let floor = -tol.eps * matrix.max_abs().max(1.0);
        if op.eigenvalues().iter().any(|&v| v < floor) {
            return Err(Error::Validation("density matrix is not positive semidefinite".into()));
        }
        let trace = matrix.trace().re;
        if trace <= tol.null_threshold {
            return Err(Error::Validation("density matrix has zero trace".into()));
        }
        let mut factors = Vec::new();
        for c in op.spectrum().iter().filter(|c| c.value > 0.0) {
            let weight = Complex64::new((c.value / trace).sqrt(), 0.0);
            let basis = c.projector.range(tol);
            factors.extend(basis.basis().iter().map(|b| b.iter().map(|z| z * weight).collect::<Vector>()));
        }
        Ok(DensityMatrix { matrix, factors })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &[Complex64], tol: &TolerancePolicy) -> Result<Self> {
        if tol.is_null(psi) {
            return Err(Error::Precondition("state vector is null".into()));
        }
        let unit = normalize(psi).expect("nonzero");
        Ok(DensityMatrix {
            matrix: ComplexMatrix::outer(&unit),
            factors: vec![unit],
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn factors(&self) -> &[Vector] {
        &self.factors
    }

    /// `ρ / tr ρ`.
    pub fn normalized(&self) -> ComplexMatrix {
        self.matrix
            .scaled(Complex64::new(1.0 / self.matrix.trace().re, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn pz() -> Projector {
        Projector::new(ComplexMatrix::diagonal(&[1.0, 0.0]).unwrap(), 1e-9).unwrap()
    }

    fn pplus() -> Projector {
        Projector::new(ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap(), 1e-9).unwrap()
    }

    fn qubit() -> Reducer {
        let a = Alphabet::projectors(vec!["Pz".into(), "Pplus".into()], vec![pz(), pplus()]).unwrap();
        Reducer::new(a, tol())
    }

    fn e1() -> Vec<Complex64> {
        vec![c(1.0), c(0.0)]
    }

    fn e2() -> Vec<Complex64> {
        vec![c(0.0), c(1.0)]
    }

    fn up_space() -> Subspace {
        Subspace::span(2, &[e1()], &tol())
    }

    #[test]
    fn reduce_examples() {
        let r = qubit();
        assert_eq!(r.reduce(&ProjString::empty()).unwrap(), ComplexMatrix::identity(2));
        let pp = r.reduce(&ProjString::new(vec![0, 0])).unwrap();
        assert!(pp.approx_eq(pz().matrix(), 1e-15));
        let perp = Projector::new(ComplexMatrix::diagonal(&[0.0, 1.0]).unwrap(), 1e-9).unwrap();
        let a = Alphabet::projectors(vec!["P".into(), "Q".into()], vec![pz(), perp]).unwrap();
        let r2 = Reducer::new(a, tol());
        assert!(r2.reduce(&ProjString::new(vec![1, 0])).unwrap().approx_eq(&ComplexMatrix::zeros(2), 0.0));
        assert!(matches!(r.reduce(&ProjString::letter(5)), Err(Error::Lookup { .. })));
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let r = qubit();
        let q = ProjString::new(vec![1, 0, 1]);
        let s = ProjString::new(vec![0, 1]);
        let joined = r.reduce(&q.concat(&s)).unwrap();
        let product = &r.reduce(&q).unwrap() * &r.reduce(&s).unwrap();
        assert!(joined.approx_eq(&product, 1e-14));
    }

    #[test]
    fn ray_action_examples() {
        let t = tol();
        let psi = ProjectivePoint::of(&[c(0.6), c(0.8)], &t);
        assert!(act_on_ray(&ComplexMatrix::identity(2), &psi, &t).same(&psi, 1e-12));
        let down = ProjectivePoint::of(&e2(), &t);
        assert!(act_on_ray(pz().matrix(), &down, &t).is_zero());
        assert!(act_on_ray(pplus().matrix(), &ProjectivePoint::Zero, &t).is_zero());
    }

    #[test]
    fn normalized_reduction_examples() {
        let r = qubit();
        let psi = vec![c(0.6), c(0.8)];
        let same = r.normalized_reduction(&psi, &ProjString::empty()).unwrap();
        assert!(norm(&sub(&same, &psi)) < 1e-15);
        let got = r.normalized_reduction(&e1(), &ProjString::letter(1)).unwrap();
        let h = 0.5f64.sqrt();
        assert!(norm(&sub(&got, &[c(h), c(h)])) < 1e-15);
        assert_eq!(
            r.normalized_reduction(&e2(), &ProjString::letter(0)).unwrap_err(),
            Error::NullReduction
        );
    }

    #[test]
    fn vector_valuation_examples() {
        let r = qubit();
        let all = r.valuation_vector(&e1(), &up_space(), 4).unwrap();
        assert!(all.is_everything());
        assert!(all.certificate().is_clean());
        let h = vec![c(1.0), c(1.0)];
        let v = r.valuation_vector(&h, &up_space(), 4).unwrap();
        assert!(!v.contains(&ProjString::empty()));
        assert!(v.contains(&ProjString::letter(0)));
        assert!(v.certificate().is_clean());
        // Annihilated images are members: Pz annihilates e2.
        let w = r.valuation_vector(&e2(), &Subspace::zero(2), 3).unwrap();
        assert!(w.contains(&ProjString::letter(0)));
        assert!(!w.contains(&ProjString::letter(1)));
    }

    #[test]
    fn ray_valuation_examples() {
        let r = qubit();
        let h = vec![c(1.0), c(1.0)];
        let v = r.valuation_ray(&h, &up_space(), 4).unwrap();
        assert!(v.contains(&ProjString::letter(0)));
        assert!(v.certificate().is_clean());
        assert!(r.valuation_ray(&e1(), &up_space(), 4).unwrap().is_everything());
    }

    #[test]
    fn ray_equality_examples() {
        let r = qubit();
        let t = r.truth_ray_equal(&e1(), &e2(), 3).unwrap();
        assert!(!t.contains(&ProjString::empty()));
        assert!(!t.contains(&ProjString::letter(0)));
        assert!(t.contains(&ProjString::letter(1)));
        assert!(t.certificate().is_clean());
        let same = r
            .truth_ray_equal(&e1(), &[Complex64::new(0.0, 2.0), c(0.0)], 3)
            .unwrap();
        assert!(same.is_everything());
    }

    #[test]
    fn density_examples() {
        let r = qubit();
        let mixed = DensityMatrix::new(ComplexMatrix::identity(2).scaled(c(0.5)), &tol()).unwrap();
        let v = r.valuation_density(&mixed, &up_space(), 3).unwrap();
        assert!(v.contains(&ProjString::letter(0)));
        assert!(!v.contains(&ProjString::empty()));
        assert!(v.certificate().is_clean());
        let pure = DensityMatrix::pure(&e1(), &tol()).unwrap();
        assert!(r.valuation_density(&pure, &up_space(), 3).unwrap().is_everything());
        let not_psd = ComplexMatrix::diagonal(&[1.0, -0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(not_psd, &tol()), Err(Error::Validation(_))));
    }

    #[test]
    fn hermitian_alphabet_is_not_for_valuations() {
        let sx = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let a = Alphabet::hermitian(vec!["X".into()], vec![sx], 1e-9).unwrap();
        let r = Reducer::new(a, tol());
        assert!(matches!(r.valuation_vector(&e1(), &up_space(), 2), Err(Error::Usage(_))));
        let eq = r.truth_vector_equal(&e1(), &e1(), 2).unwrap();
        assert!(eq.is_everything());
    }
}
