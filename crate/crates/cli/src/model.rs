//! Resolution of a parsed definition into validated core objects.

use std::collections::HashMap;
use std::sync::Arc;

use mtopos_core::algebra::FiniteMonoid;
use mtopos_core::classical::{ClassicalSystem, ValueSet};
use mtopos_core::context::RaySet;
use mtopos_core::linalg::{hermitian_eig, ComplexMatrix, Projector, Ray, TolerancePolicy, Vector};
use mtopos_core::mset::MSet;
use mtopos_core::quantum::QuantumSystem;
use mtopos_core::reduction::DensityMatrix;

use crate::dsl::{Decl, Diagnostic, DiagnosticKind, MSetBody, Matrix, Name, QuantumItem, Span, Spec};

/// Name of the quantum system that collects items declared at top level.
pub const MAIN_SYSTEM: &str = "main";

/// Settings that take precedence over a definition's `tolerance` block.
#[derive(Clone, Debug)]
pub struct Overrides {
    pub eps: Option<f64>,
    pub null_threshold: Option<f64>,
    pub max_dim: usize,
}

impl Default for Overrides {
    fn default() -> Self {
        Overrides {
            eps: None,
            null_threshold: None,
            max_dim: 16,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MSetModel {
    pub name: String,
    pub monoid: String,
    pub mset: MSet,
    pub point_names: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct UniverseModel {
    pub name: String,
    pub alphabet: Vec<String>,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct QuantumModel {
    pub name: String,
    pub system: QuantumSystem,
    /// True when the value set was inferred from operator spectra.
    pub values_inferred: bool,
    pub projectors: Vec<(String, Projector)>,
    pub states: Vec<(String, Vector)>,
    pub densities: Vec<(String, DensityMatrix)>,
    pub raysets: Vec<RaySet>,
    pub rayset_names: Vec<String>,
    pub universes: Vec<UniverseModel>,
}

impl QuantumModel {
    pub fn dim(&self) -> usize {
        self.system.dim()
    }
}

#[derive(Clone, Debug)]
pub struct Model {
    pub tolerance: TolerancePolicy,
    pub monoids: Vec<(String, Arc<FiniteMonoid>)>,
    pub msets: Vec<MSetModel>,
    pub classical: Vec<(String, ClassicalSystem)>,
    pub quantum: Vec<QuantumModel>,
    pub queries: Vec<(String, String)>,
}

fn find<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, t)| t)
}

impl Model {
    pub fn monoid(&self, name: &str) -> Option<&Arc<FiniteMonoid>> {
        find(&self.monoids, name)
    }

    pub fn mset(&self, name: &str) -> Option<&MSetModel> {
        self.msets.iter().find(|m| m.name == name)
    }

    pub fn classical(&self, name: &str) -> Option<&ClassicalSystem> {
        find(&self.classical, name)
    }

    pub fn quantum(&self, name: &str) -> Option<&QuantumModel> {
        self.quantum.iter().find(|q| q.name == name)
    }

    pub fn query(&self, name: &str) -> Option<&str> {
        find(&self.queries, name).map(String::as_str)
    }
}

struct Resolver {
    diags: Vec<Diagnostic>,
    max_dim: usize,
}

impl Resolver {
    fn invariant(&mut self, span: Span, message: impl Into<String>) {
        self.diags
            .push(Diagnostic::new(DiagnosticKind::Invariant, span, message));
    }

    fn unresolved(&mut self, name: &Name, kind: &str) {
        self.diags.push(Diagnostic::new(
            DiagnosticKind::Unresolved,
            name.span,
            format!("unknown {kind} `{}`", name.text),
        ));
    }

    fn unique(&mut self, seen: &mut HashMap<String, Span>, name: &Name, kind: &str) -> bool {
        if let Some(first) = seen.get(&name.text) {
            let msg = format!(
                "{kind} `{}` already declared at {}:{}",
                name.text, first.line, first.col
            );
            self.invariant(name.span, msg);
            false
        } else {
            seen.insert(name.text.clone(), name.span);
            true
        }
    }

    fn square(&mut self, name: &Name, what: &str, m: &Matrix, dim: usize) -> Option<ComplexMatrix> {
        if m.len() != dim || m.iter().any(|row| row.len() != dim) {
            self.invariant(
                name.span,
                format!("{what} `{}` must be a {dim}×{dim} matrix", name.text),
            );
            return None;
        }
        match ComplexMatrix::from_rows(m) {
            Ok(mat) => Some(mat),
            Err(e) => {
                self.invariant(name.span, format!("{what} `{}`: {e}", name.text));
                None
            }
        }
    }
}

/// Quantum items grouped by the system they belong to, in declaration order.
struct QuantumGroup<'a> {
    name: Name,
    items: Vec<&'a QuantumItem>,
}

fn item_name(item: &QuantumItem) -> Option<&Name> {
    match item {
        QuantumItem::Dim(..) | QuantumItem::Values(..) => None,
        QuantumItem::Operator { name, .. }
        | QuantumItem::Projector { name, .. }
        | QuantumItem::State { name, .. }
        | QuantumItem::Density { name, .. }
        | QuantumItem::RaySet { name, .. }
        | QuantumItem::Universe { name, .. } => Some(name),
    }
}

fn item_dim(item: &QuantumItem) -> Option<usize> {
    match item {
        QuantumItem::Operator { matrix, .. }
        | QuantumItem::Projector { matrix, .. }
        | QuantumItem::Density { matrix, .. } => Some(matrix.len()),
        QuantumItem::State { vector, .. } => Some(vector.len()),
        _ => None,
    }
}

/// Eigenvalues of all operators, merged when within `eps` of each other.
fn inferred_values(mats: &[ComplexMatrix], tol: &TolerancePolicy) -> Vec<f64> {
    let mut all: Vec<f64> = mats
        .iter()
        .filter_map(|m| hermitian_eig(m, tol).ok())
        .flat_map(|op| op.eigenvalues())
        .collect();
    all.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::new();
    for v in all {
        match merged.last() {
            Some(&last) if (v - last).abs() <= tol.eps * last.abs().max(1.0) => {}
            _ => merged.push(v),
        }
    }
    if merged.is_empty() {
        merged.push(0.0);
    }
    merged
}

/// Validates a parsed definition. All problems found are reported, not
/// just the first.
pub fn resolve(spec: &Spec, overrides: &Overrides) -> Result<Model, Vec<Diagnostic>> {
    let mut r = Resolver {
        diags: Vec::new(),
        max_dim: overrides.max_dim,
    };

    let mut eps = TolerancePolicy::default().eps;
    let mut null = TolerancePolicy::default().null_threshold;
    let mut tol_seen: Option<Span> = None;
    for decl in &spec.decls {
        if let Decl::Tolerance(t) = decl {
            if let Some(first) = tol_seen {
                r.invariant(
                    t.span,
                    format!("tolerance block already given at {}:{}", first.line, first.col),
                );
                continue;
            }
            tol_seen = Some(t.span);
            eps = t.eps.unwrap_or(eps);
            null = t.null.unwrap_or(null);
        }
    }
    eps = overrides.eps.unwrap_or(eps);
    null = overrides.null_threshold.unwrap_or(null);
    let tolerance = match TolerancePolicy::new(eps, null) {
        Ok(t) => t,
        Err(e) => {
            r.invariant(tol_seen.unwrap_or_default(), e.to_string());
            TolerancePolicy::default()
        }
    };

    let mut model = Model {
        tolerance,
        monoids: Vec::new(),
        msets: Vec::new(),
        classical: Vec::new(),
        quantum: Vec::new(),
        queries: Vec::new(),
    };

    let mut monoid_names = HashMap::new();
    for decl in &spec.decls {
        let Decl::Monoid(m) = decl else { continue };
        if !r.unique(&mut monoid_names, &m.name, "monoid") {
            continue;
        }
        if m.elements != m.table.len() {
            r.invariant(
                m.name.span,
                format!(
                    "monoid `{}` declares {} elements but its table has {} rows",
                    m.name.text,
                    m.elements,
                    m.table.len()
                ),
            );
            continue;
        }
        let built = FiniteMonoid::from_table(&m.table).and_then(|fm| match &m.names {
            Some(ns) => fm.with_names(ns.iter().map(|n| n.text.clone()).collect()),
            None => Ok(fm),
        });
        match built {
            Ok(fm) => model.monoids.push((m.name.text.clone(), Arc::new(fm))),
            Err(e) => r.invariant(m.name.span, format!("monoid `{}`: {e}", m.name.text)),
        }
    }

    let mut mset_names = HashMap::new();
    for decl in &spec.decls {
        let Decl::MSet(s) = decl else { continue };
        if !r.unique(&mut mset_names, &s.name, "mset") {
            continue;
        }
        let Some(monoid) = model.monoid(&s.monoid.text).cloned() else {
            if !monoid_names.contains_key(&s.monoid.text) {
                r.unresolved(&s.monoid, "monoid");
            }
            continue;
        };
        let (built, point_names) = match &s.body {
            MSetBody::Regular => {
                let names = (0..monoid.size()).map(|m| monoid.label(m)).collect();
                (Ok(MSet::regular(monoid.clone())), names)
            }
            MSetBody::Explicit { points, names, action } => {
                if action.iter().any(|row| row.len() != *points) {
                    r.invariant(
                        s.name.span,
                        format!("mset `{}`: every action row needs {points} entries", s.name.text),
                    );
                    continue;
                }
                let point_names = match names {
                    Some(ns) if ns.len() != *points => {
                        r.invariant(
                            s.name.span,
                            format!("mset `{}` names {} points, declares {points}", s.name.text, ns.len()),
                        );
                        continue;
                    }
                    Some(ns) => ns.iter().map(|n| n.text.clone()).collect(),
                    None => (0..*points).map(|p| p.to_string()).collect(),
                };
                (MSet::new(monoid.clone(), action), point_names)
            }
        };
        match built {
            Ok(mset) => model.msets.push(MSetModel {
                name: s.name.text.clone(),
                monoid: s.monoid.text.clone(),
                mset,
                point_names,
            }),
            Err(e) => r.invariant(s.name.span, format!("mset `{}`: {e}", s.name.text)),
        }
    }

    let mut classical_names = HashMap::new();
    for decl in &spec.decls {
        let Decl::Classical(c) = decl else { continue };
        if !r.unique(&mut classical_names, &c.name, "classical system") {
            continue;
        }
        let built = ValueSet::new(c.values.clone()).and_then(|values| {
            ClassicalSystem::new(
                c.states.iter().map(|s| s.text.clone()).collect(),
                values,
                c.quantities
                    .iter()
                    .map(|q| (q.name.text.clone(), q.values.clone()))
                    .collect(),
                tolerance.eps,
            )
        });
        match built {
            Ok(sys) => model.classical.push((c.name.text.clone(), sys)),
            Err(e) => r.invariant(c.name.span, format!("classical system `{}`: {e}", c.name.text)),
        }
    }

    let mut groups: Vec<QuantumGroup> = Vec::new();
    let mut quantum_names = HashMap::new();
    for decl in &spec.decls {
        match decl {
            Decl::Quantum(q) => {
                if r.unique(&mut quantum_names, &q.name, "quantum system") {
                    groups.push(QuantumGroup {
                        name: q.name.clone(),
                        items: q.items.iter().collect(),
                    });
                }
            }
            Decl::Item(item) => {
                if !groups.iter().any(|g| g.name.text == MAIN_SYSTEM) {
                    let span = match item {
                        QuantumItem::Dim(_, s) | QuantumItem::Values(_, s) => *s,
                        other => item_name(other).map(|n| n.span).unwrap_or_default(),
                    };
                    let name = Name {
                        text: MAIN_SYSTEM.into(),
                        span,
                    };
                    if !r.unique(&mut quantum_names, &name, "quantum system") {
                        continue;
                    }
                    groups.push(QuantumGroup { name, items: Vec::new() });
                }
                let g = groups
                    .iter_mut()
                    .find(|g| g.name.text == MAIN_SYSTEM)
                    .expect("main group exists");
                g.items.push(item);
            }
            _ => {}
        }
    }
    for group in &groups {
        if let Some(q) = resolve_quantum(&mut r, group, tolerance) {
            model.quantum.push(q);
        }
    }

    let mut query_names = HashMap::new();
    for decl in &spec.decls {
        if let Decl::Query(q) = decl {
            if r.unique(&mut query_names, &q.name, "query") {
                model.queries.push((q.name.text.clone(), q.command.clone()));
            }
        }
    }

    if r.diags.is_empty() {
        Ok(model)
    } else {
        Err(r.diags)
    }
}

fn resolve_quantum(r: &mut Resolver, group: &QuantumGroup, tol: TolerancePolicy) -> Option<QuantumModel> {
    let sys = &group.name;
    let before = r.diags.len();
    let mut dim = None;
    let mut values = None;
    for item in &group.items {
        match item {
            QuantumItem::Dim(d, span) => {
                if dim.replace(*d).is_some() {
                    r.invariant(*span, format!("quantum system `{}` gives `dim` twice", sys.text));
                }
            }
            QuantumItem::Values(v, span) => {
                if values.replace(v.clone()).is_some() {
                    r.invariant(*span, format!("quantum system `{}` gives `values` twice", sys.text));
                }
            }
            _ => {}
        }
    }
    let Some(dim) = dim.or_else(|| group.items.iter().find_map(|i| item_dim(i))) else {
        r.invariant(sys.span, format!("quantum system `{}` needs `dim`", sys.text));
        return None;
    };
    if dim == 0 || dim > r.max_dim {
        r.invariant(
            sys.span,
            format!("quantum system `{}` has dimension {dim}, allowed range is 1..={}", sys.text, r.max_dim),
        );
        return None;
    }

    let mut seen = HashMap::new();
    let mut operators = Vec::new();
    let mut projectors = Vec::new();
    let mut states = Vec::new();
    let mut densities = Vec::new();
    let mut raysets = Vec::new();
    let mut universes = Vec::new();
    for item in &group.items {
        let Some(name) = item_name(item) else { continue };
        if !r.unique(&mut seen, name, "item") {
            continue;
        }
        match item {
            QuantumItem::Operator { matrix, .. } => {
                if let Some(m) = r.square(name, "operator", matrix, dim) {
                    if m.is_hermitian(tol.eps) {
                        operators.push((name.clone(), m));
                    } else {
                        r.invariant(name.span, format!("operator `{}` is not Hermitian", name.text));
                    }
                }
            }
            QuantumItem::Projector { matrix, .. } => {
                if let Some(m) = r.square(name, "projector", matrix, dim) {
                    match Projector::new(m, tol.eps) {
                        Ok(p) => projectors.push((name.text.clone(), p)),
                        Err(e) => r.invariant(name.span, format!("projector `{}`: {e}", name.text)),
                    }
                }
            }
            QuantumItem::Density { matrix, .. } => {
                if let Some(m) = r.square(name, "density", matrix, dim) {
                    match DensityMatrix::new(m, &tol) {
                        Ok(d) => densities.push((name.text.clone(), d)),
                        Err(e) => r.invariant(name.span, format!("density `{}`: {e}", name.text)),
                    }
                }
            }
            QuantumItem::State { vector, .. } => {
                if vector.len() != dim {
                    r.invariant(
                        name.span,
                        format!("state `{}` has {} components, dimension is {dim}", name.text, vector.len()),
                    );
                } else if tol.is_null(vector) {
                    r.invariant(name.span, format!("state `{}` is the zero vector", name.text));
                } else {
                    states.push((name.text.clone(), vector.clone()));
                }
            }
            QuantumItem::RaySet { .. } => raysets.push(item),
            QuantumItem::Universe { .. } => universes.push(item),
            QuantumItem::Dim(..) | QuantumItem::Values(..) => {}
        }
    }

    let values_inferred = values.is_none();
    let values = values.unwrap_or_else(|| {
        let mats: Vec<ComplexMatrix> = operators.iter().map(|(_, m)| m.clone()).collect();
        inferred_values(&mats, &tol)
    });
    let value_set = match ValueSet::new(values) {
        Ok(v) => v,
        Err(e) => {
            r.invariant(sys.span, format!("quantum system `{}`: {e}", sys.text));
            return None;
        }
    };
    let mut system = QuantumSystem::new(dim, value_set, tol);
    for (name, m) in &operators {
        if let Err(e) = system.add_operator(&name.text, m) {
            r.invariant(name.span, format!("operator `{}`: {e}", name.text));
        }
    }

    let mut built_raysets = Vec::new();
    let mut rayset_names = Vec::new();
    for item in raysets {
        let QuantumItem::RaySet { name, rays } = item else { continue };
        let mut named = Vec::new();
        for ray in rays {
            match find(&states, &ray.text) {
                Some(v) => match Ray::new(v, &tol) {
                    Ok(rv) => named.push((ray.text.clone(), rv)),
                    Err(e) => r.invariant(ray.span, e.to_string()),
                },
                None => r.unresolved(ray, "state"),
            }
        }
        if named.len() == rays.len() {
            match RaySet::new(named, tol.eps) {
                Ok(set) => {
                    built_raysets.push(set);
                    rayset_names.push(name.text.clone());
                }
                Err(e) => r.invariant(name.span, format!("rayset `{}`: {e}", name.text)),
            }
        }
    }

    let mut built_universes = Vec::new();
    for item in universes {
        let QuantumItem::Universe { name, alphabet, depth } = item else { continue };
        let mut ok = true;
        for letter in alphabet {
            if find(&projectors, &letter.text).is_none() {
                r.unresolved(letter, "projector");
                ok = false;
            }
        }
        if ok {
            built_universes.push(UniverseModel {
                name: name.text.clone(),
                alphabet: alphabet.iter().map(|l| l.text.clone()).collect(),
                depth: *depth,
            });
        }
    }

    if r.diags.len() > before {
        return None;
    }
    Some(QuantumModel {
        name: sys.text.clone(),
        system,
        values_inferred,
        projectors,
        states,
        densities,
        raysets: built_raysets,
        rayset_names,
        universes: built_universes,
    })
}

/// Parses and resolves in one step.
pub fn load(text: &str, overrides: &Overrides) -> Result<Model, Vec<Diagnostic>> {
    let spec = crate::dsl::parse_spec(text).map_err(|d| vec![d])?;
    resolve(&spec, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<DiagnosticKind> {
        load(text, &Overrides::default())
            .unwrap_err()
            .into_iter()
            .map(|d| d.kind)
            .collect()
    }

    #[test]
    fn monoid_and_regular_mset() {
        let m = load(
            "monoid M2 { elements 2; table [[0,1],[1,1]]; } mset R { monoid M2; regular; }",
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(m.monoid("M2").unwrap().size(), 2);
        assert_eq!(m.mset("R").unwrap().mset.points(), 2);
    }

    #[test]
    fn non_idempotent_projector_is_an_invariant_violation() {
        let d = load("projector Pz { matrix [[1,0],[0,2]]; }", &Overrides::default()).unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::Invariant);
        assert_eq!((d[0].span.line, d[0].span.col), (1, 11));
    }

    #[test]
    fn unresolved_references() {
        assert_eq!(kinds("mset X { monoid Nope; regular; }"), vec![DiagnosticKind::Unresolved]);
        assert_eq!(
            kinds("dim 2; rayset V { rays (ghost); }"),
            vec![DiagnosticKind::Unresolved]
        );
        assert_eq!(
            kinds("dim 2; universe U { alphabet (P); depth 2; }"),
            vec![DiagnosticKind::Unresolved]
        );
    }

    #[test]
    fn invariant_violations_are_all_reported() {
        let text = "monoid A { table [[0,1],[0,1]]; }\n\
                    monoid B { elements 3; table [[0]]; }\n\
                    dim 2;\n\
                    operator H { matrix [[0,1],[0,0]]; }\n\
                    state z { vector [0,0]; }";
        let d = load(text, &Overrides::default()).unwrap_err();
        assert_eq!(d.len(), 4, "{d:?}");
        assert!(d.iter().all(|d| d.kind == DiagnosticKind::Invariant));
        assert_eq!(d[1].span.line, 2);
    }

    #[test]
    fn duplicates_and_dimension_cap() {
        assert_eq!(
            kinds("monoid A { table [[0]]; } monoid A { table [[0]]; }"),
            vec![DiagnosticKind::Invariant]
        );
        let over = Overrides {
            max_dim: 1,
            ..Overrides::default()
        };
        assert!(load("dim 2;", &over).is_err());
    }

    #[test]
    fn overrides_beat_the_tolerance_block() {
        let text = "tolerance { eps 1e-6; null 1e-7; }";
        let m = load(text, &Overrides::default()).unwrap();
        assert_eq!((m.tolerance.eps, m.tolerance.null_threshold), (1e-6, 1e-7));
        let over = Overrides {
            eps: Some(1e-10),
            ..Overrides::default()
        };
        let m = load(text, &over).unwrap();
        assert_eq!((m.tolerance.eps, m.tolerance.null_threshold), (1e-10, 1e-7));
    }

    #[test]
    fn values_are_inferred_from_spectra() {
        let m = load("operator Z { matrix [[1,0],[0,-1]]; }", &Overrides::default()).unwrap();
        let q = m.quantum(MAIN_SYSTEM).unwrap();
        assert!(q.values_inferred);
        assert_eq!(q.system.values().values(), &[-1.0, 1.0]);
    }
}
