//! Generalised valuations of quantum propositions `A ∈ Δ` as left ideals of
//! a finite function monoid acting on (operator, value subset) pairs.

use fixedbitset::FixedBitSet;
use num_complex::Complex64;

use crate::algebra::LeftIdeal;
use crate::classical::{mask_indices, FunctionMonoid, ValueMask, ValueSet, ORBIT_LIMIT};
use crate::linalg::{
    apply_function, hermitian_eig, norm, normalize, spectral_projector, sub, ComplexMatrix,
    HermitianOperator, Projector, TolerancePolicy, Vector,
};
use crate::mset::MSet;
use crate::{Error, Result};

/// A Hilbert space of dimension `dim` with observables whose spectra lie in `X`.
#[derive(Clone, Debug)]
pub struct QuantumSystem {
    dim: usize,
    values: ValueSet,
    tol: TolerancePolicy,
    operators: Vec<Observable>,
}

/// A named Hermitian operator with eigenvalues snapped onto `X`.
#[derive(Clone, Debug)]
pub struct Observable {
    pub name: String,
    pub operator: HermitianOperator,
    /// Value index of each spectral component.
    pub labels: Vec<usize>,
}

impl QuantumSystem {
    pub fn new(dim: usize, values: ValueSet, tol: TolerancePolicy) -> Self {
        QuantumSystem {
            dim,
            values,
            tol,
            operators: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &ValueSet {
        &self.values
    }

    pub fn tolerance(&self) -> &TolerancePolicy {
        &self.tol
    }

    pub fn observables(&self) -> &[Observable] {
        &self.operators
    }

    /// Diagonalises `matrix` and snaps its spectrum onto `X`.
    pub fn add_operator(&mut self, name: &str, matrix: &ComplexMatrix) -> Result<usize> {
        if matrix.dim() != self.dim {
            return Err(Error::Validation(format!(
                "operator {name} has dimension {}, system has {}",
                matrix.dim(),
                self.dim
            )));
        }
        if self.operators.iter().any(|o| o.name == name) {
            return Err(Error::Validation(format!("operator {name} declared twice")));
        }
        let op = hermitian_eig(matrix, &self.tol)?.snap_to(self.values.values(), self.tol.eps)?;
        let labels = op
            .spectrum()
            .iter()
            .map(|c| self.values.index_of(c.value, 0.0).expect("snapped value"))
            .collect();
        self.operators.push(Observable {
            name: name.to_owned(),
            operator: op,
            labels,
        });
        Ok(self.operators.len() - 1)
    }

    pub fn operator(&self, name: &str) -> Result<usize> {
        self.operators
            .iter()
            .position(|o| o.name == name)
            .ok_or_else(|| Error::lookup("operator", name))
    }

    fn observable(&self, a: usize) -> Result<&Observable> {
        self.operators
            .get(a)
            .ok_or_else(|| Error::lookup("operator", a.to_string()))
    }

    fn unit_state(&self, psi: &[Complex64]) -> Result<Vector> {
        if psi.len() != self.dim {
            return Err(Error::Usage(format!(
                "state has {} components, system dimension is {}",
                psi.len(),
                self.dim
            )));
        }
        if self.tol.is_null(psi) {
            return Err(Error::Precondition("state vector is null".into()));
        }
        Ok(normalize(psi).expect("nonzero"))
    }

    fn check_mask(&self, delta: ValueMask) -> Result<()> {
        if delta & !self.values.full_mask() != 0 {
            return Err(Error::Usage("subset mentions values outside X".into()));
        }
        Ok(())
    }

    fn check_monoid(&self, monoid: &FunctionMonoid) -> Result<()> {
        if monoid.points() != self.values.len() {
            return Err(Error::Usage(format!(
                "function monoid acts on {} values, system has {}",
                monoid.points(),
                self.values.len()
            )));
        }
        Ok(())
    }

    fn fixes(&self, p: &Projector, unit: &[Complex64]) -> bool {
        norm(&sub(&p.apply(unit), unit)) <= self.tol.null_threshold
    }

    /// `Ê[B ∈ Γ]`.
    pub fn spectral_projector(&self, b: usize, gamma: ValueMask) -> Result<Projector> {
        self.check_mask(gamma)?;
        let op = self.observable(b)?;
        Ok(spectral_projector(&op.operator, &self.values.values_of(gamma), self.tol.eps))
    }

    /// `Ê[B ∈ Γ]ψ = ψ`, i.e. `‖Ê[B ∈ Γ]ψ − ψ‖ ≤ null · ‖ψ‖`.
    pub fn e_psi_membership(&self, psi: &[Complex64], b: usize, gamma: ValueMask) -> Result<bool> {
        let unit = self.unit_state(psi)?;
        Ok(self.fixes(&self.spectral_projector(b, gamma)?, &unit))
    }

    /// `{f | Ê[f(A) ∈ f(Δ)]ψ = ψ}`, with `f(Â)` built spectrally for each `f`.
    pub fn function_valuation(
        &self,
        monoid: &FunctionMonoid,
        psi: &[Complex64],
        a: usize,
        delta: ValueMask,
    ) -> Result<LeftIdeal> {
        self.check_monoid(monoid)?;
        self.check_mask(delta)?;
        let unit = self.unit_state(psi)?;
        let op = self.observable(a)?;
        let values = &self.values;
        let mut members = Vec::new();
        for f in 0..monoid.size() {
            let fa = apply_function(&op.operator, |v| {
                values.index_of(v, 0.0).map(|i| values.value(monoid.apply(f, i)))
            })?;
            let target = values.values_of(monoid.image(f, delta));
            let p = spectral_projector(&fa, &target, self.tol.eps);
            if self.fixes(&p, &unit) {
                members.push(f);
            }
        }
        LeftIdeal::from_elements(monoid.monoid().clone(), members)
    }

    /// The product M-set of observables `f(B̂)` and subsets of `X`, generated
    /// by the declared observables.
    pub fn observable_set(&self, monoid: &FunctionMonoid) -> Result<ObservableSet<'_>> {
        self.check_monoid(monoid)?;
        let full = self.values.full_mask();
        let seeds = self
            .operators
            .iter()
            .enumerate()
            .flat_map(|(j, o)| (0..=full).map(move |g| (j, o.labels.clone(), g)));
        let (set, points) = MSet::orbit_closure(
            monoid.monoid().clone(),
            seeds,
            |f, (j, labels, g): &(usize, Vec<usize>, ValueMask)| {
                (
                    *j,
                    labels.iter().map(|&x| monoid.apply(f, x)).collect(),
                    monoid.image(f, *g),
                )
            },
            ORBIT_LIMIT,
        )?;
        Ok(ObservableSet {
            system: self,
            set,
            points,
            seeds_per_operator: full as usize + 1,
        })
    }
}

/// Points `(f(B̂), Γ)`, each stored as the base observable, the relabelling of
/// its spectral components, and `Γ`. The action is `f(B̂, Γ) = (f(B̂), f(Γ))`.
#[derive(Clone, Debug)]
pub struct ObservableSet<'a> {
    system: &'a QuantumSystem,
    set: MSet,
    points: Vec<(usize, Vec<usize>, ValueMask)>,
    seeds_per_operator: usize,
}

impl ObservableSet<'_> {
    pub fn mset(&self) -> &MSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_of(&self, a: usize, delta: ValueMask) -> usize {
        a * self.seeds_per_operator + delta as usize
    }

    /// The operator matrix `f(B̂)` at point `i`.
    pub fn operator_matrix(&self, i: usize) -> ComplexMatrix {
        let (j, labels, _) = &self.points[i];
        let op = &self.system.operators[*j].operator;
        op.spectrum()
            .iter()
            .zip(labels)
            .fold(ComplexMatrix::zeros(self.system.dim), |acc, (c, &l)| {
                let v = Complex64::new(self.system.values.value(l), 0.0);
                &acc + &c.projector.matrix().scaled(v)
            })
    }

    /// `Ê[f(B) ∈ Γ]` at point `i`.
    pub fn projector_at(&self, i: usize) -> Projector {
        let (j, labels, gamma) = &self.points[i];
        let op = &self.system.operators[*j].operator;
        let m = op
            .spectrum()
            .iter()
            .zip(labels)
            .filter(|(_, &l)| gamma >> l & 1 == 1)
            .fold(ComplexMatrix::zeros(self.system.dim), |acc, (c, _)| {
                &acc + c.projector.matrix()
            });
        Projector::trusted(m)
    }

    pub fn gamma_at(&self, i: usize) -> Vec<usize> {
        mask_indices(self.points[i].2).collect()
    }

    /// `E^ψ = {(B̂, Γ) | Ê[B ∈ Γ]ψ = ψ}`.
    pub fn e_psi(&self, psi: &[Complex64]) -> Result<FixedBitSet> {
        let unit = self.system.unit_state(psi)?;
        let mut out = FixedBitSet::with_capacity(self.points.len());
        for i in 0..self.points.len() {
            if self.system.fixes(&self.projector_at(i), &unit) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// `[(Â, Δ) ∈ E^ψ]` through the characteristic arrow of `E^ψ`.
    pub fn e_psi_valuation(&self, psi: &[Complex64], a: usize, delta: ValueMask) -> Result<LeftIdeal> {
        self.system.observable(a)?;
        self.system.check_mask(delta)?;
        let e = self.e_psi(psi)?;
        self.set.truth_in_invariant(self.point_of(a, delta), &e)
    }
}
