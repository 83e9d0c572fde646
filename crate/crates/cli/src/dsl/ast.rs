use mtopos_core::linalg::Complex64;

use super::Span;

/// An identifier together with where it was written.
#[derive(Clone, Debug, PartialEq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl Name {
    pub fn new(text: impl Into<String>) -> Self {
        Name {
            text: text.into(),
            span: Span::default(),
        }
    }
}

pub type Matrix = Vec<Vec<Complex64>>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Spec {
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Tolerance(ToleranceDecl),
    Monoid(MonoidDecl),
    MSet(MSetDecl),
    Classical(ClassicalDecl),
    Quantum(QuantumDecl),
    /// A quantum item written outside any `quantum` block; it belongs to the
    /// implicit system `main`.
    Item(QuantumItem),
    Query(QueryDecl),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceDecl {
    pub eps: Option<f64>,
    pub null: Option<f64>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonoidDecl {
    pub name: Name,
    pub elements: usize,
    pub names: Option<Vec<Name>>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MSetBody {
    Regular,
    Explicit {
        points: usize,
        names: Option<Vec<Name>>,
        /// `action[m][x]` is the image of point `x` under element `m`.
        action: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MSetDecl {
    pub name: Name,
    pub monoid: Name,
    pub body: MSetBody,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quantity {
    pub name: Name,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalDecl {
    pub name: Name,
    pub values: Vec<f64>,
    pub states: Vec<Name>,
    pub quantities: Vec<Quantity>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumDecl {
    pub name: Name,
    pub items: Vec<QuantumItem>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumItem {
    Dim(usize, Span),
    Values(Vec<f64>, Span),
    Operator { name: Name, matrix: Matrix },
    Projector { name: Name, matrix: Matrix },
    State { name: Name, vector: Vec<Complex64> },
    Density { name: Name, matrix: Matrix },
    RaySet { name: Name, rays: Vec<Name> },
    Universe { name: Name, alphabet: Vec<Name>, depth: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryDecl {
    pub name: Name,
    pub command: String,
}
