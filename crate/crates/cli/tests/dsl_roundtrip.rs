use mtopos_cli::dsl::{
    parse_spec, pretty, ClassicalDecl, Decl, MSetBody, MSetDecl, Matrix, MonoidDecl, Name, Quantity, QuantumDecl,
    QuantumItem, QueryDecl, Span, Spec, ToleranceDecl,
};
use mtopos_core::linalg::Complex64;
use proptest::prelude::*;

fn name() -> impl Strategy<Value = Name> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,6}".prop_map(Name::new)
}

fn names() -> impl Strategy<Value = Vec<Name>> {
    prop::collection::vec(name(), 0..4)
}

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![
        prop::num::f64::NORMAL,
        prop::num::f64::ZERO,
        prop::num::f64::SUBNORMAL,
        (-8i32..8).prop_map(|k| k as f64 * 0.5),
    ]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (real(), real()).prop_map(|(re, im)| Complex64::new(re, im))
}

fn vector() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex(), 0..4)
}

fn matrix() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(vector(), 0..4)
}

fn table() -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0usize..1000, 0..4), 0..4)
}

fn item() -> impl Strategy<Value = QuantumItem> {
    prop_oneof![
        (0usize..20).prop_map(|d| QuantumItem::Dim(d, Span::default())),
        prop::collection::vec(real(), 0..4).prop_map(|v| QuantumItem::Values(v, Span::default())),
        (name(), matrix()).prop_map(|(name, matrix)| QuantumItem::Operator { name, matrix }),
        (name(), matrix()).prop_map(|(name, matrix)| QuantumItem::Projector { name, matrix }),
        (name(), matrix()).prop_map(|(name, matrix)| QuantumItem::Density { name, matrix }),
        (name(), vector()).prop_map(|(name, vector)| QuantumItem::State { name, vector }),
        (name(), names()).prop_map(|(name, rays)| QuantumItem::RaySet { name, rays }),
        (name(), names(), 0usize..9).prop_map(|(name, alphabet, depth)| QuantumItem::Universe {
            name,
            alphabet,
            depth
        }),
    ]
}

fn decl() -> impl Strategy<Value = Decl> {
    prop_oneof![
        (prop::option::of(real()), prop::option::of(real())).prop_map(|(eps, null)| Decl::Tolerance(ToleranceDecl {
            eps,
            null,
            span: Span::default()
        })),
        (name(), 0usize..10, prop::option::of(names()), table()).prop_map(|(name, elements, names, table)| {
            Decl::Monoid(MonoidDecl {
                name,
                elements,
                names,
                table,
            })
        }),
        (name(), name()).prop_map(|(name, monoid)| Decl::MSet(MSetDecl {
            name,
            monoid,
            body: MSetBody::Regular
        })),
        (name(), name(), 0usize..6, prop::option::of(names()), table()).prop_map(
            |(name, monoid, points, names, action)| Decl::MSet(MSetDecl {
                name,
                monoid,
                body: MSetBody::Explicit { points, names, action },
            })
        ),
        (
            name(),
            prop::collection::vec(real(), 0..4),
            names(),
            prop::collection::vec((name(), prop::collection::vec(real(), 0..4)), 0..3)
        )
            .prop_map(|(name, values, states, qs)| Decl::Classical(ClassicalDecl {
                name,
                values,
                states,
                quantities: qs.into_iter().map(|(name, values)| Quantity { name, values }).collect(),
            })),
        (name(), prop::collection::vec(item(), 0..5)).prop_map(|(name, items)| Decl::Quantum(QuantumDecl {
            name,
            items
        })),
        item().prop_map(Decl::Item),
        (name(), any::<String>()).prop_map(|(name, command)| Decl::Query(QueryDecl { name, command })),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pretty_then_parse_is_identity(decls in prop::collection::vec(decl(), 0..8)) {
        let spec = Spec { decls };
        let text = pretty(&spec);
        let back = parse_spec(&text).map_err(|d| TestCaseError::fail(format!("{d}\n{text}")))?;
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(pretty(&back), text);
    }

    #[test]
    fn parsing_arbitrary_text_never_panics(text in any::<String>()) {
        let _ = parse_spec(&text);
    }

    #[test]
    fn parsing_mutated_definitions_never_panics(cut in 0usize..400, insert in "[{}\\[\\]();,+\\-i0-9a-z\" ]{0,3}") {
        let base = include_str!("fixtures/qubit.mtopos");
        let mut at = cut.min(base.len());
        while !base.is_char_boundary(at) {
            at -= 1;
        }
        let text = format!("{}{}{}", &base[..at], insert, &base[at..]);
        let _ = parse_spec(&text);
    }
}
