use std::fmt::Write;

use mtopos_core::linalg::Complex64;

use super::ast::*;

fn real(x: f64) -> String {
    format!("{x:?}")
}

fn complex(c: Complex64) -> String {
    if c.im == 0.0 {
        real(c.re)
    } else if c.re == 0.0 {
        format!("{}i", real(c.im))
    } else if c.im < 0.0 {
        format!("{}-{}i", real(c.re), real(-c.im))
    } else {
        format!("{}+{}i", real(c.re), real(c.im))
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

fn names(ns: &[Name]) -> String {
    format!("({})", join(ns, |n| n.text.clone()))
}

fn set(vs: &[f64]) -> String {
    format!("{{{}}}", join(vs, |v| real(*v)))
}

fn table(t: &[Vec<usize>]) -> String {
    format!("[{}]", join(t, |row| format!("[{}]", join(row, usize::to_string))))
}

fn vector(v: &[Complex64]) -> String {
    format!("[{}]", join(v, |c| complex(*c)))
}

fn matrix(m: &Matrix) -> String {
    format!("[{}]", join(m, |row| vector(row)))
}

fn quoted(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn item(out: &mut String, indent: &str, it: &QuantumItem) {
    let _ = match it {
        QuantumItem::Dim(d, _) => writeln!(out, "{indent}dim {d};"),
        QuantumItem::Values(v, _) => writeln!(out, "{indent}values {};", set(v)),
        QuantumItem::Operator { name, matrix: m } => {
            writeln!(out, "{indent}operator {} {{ matrix {}; }}", name.text, matrix(m))
        }
        QuantumItem::Projector { name, matrix: m } => {
            writeln!(out, "{indent}projector {} {{ matrix {}; }}", name.text, matrix(m))
        }
        QuantumItem::Density { name, matrix: m } => {
            writeln!(out, "{indent}density {} {{ matrix {}; }}", name.text, matrix(m))
        }
        QuantumItem::State { name, vector: v } => {
            writeln!(out, "{indent}state {} {{ vector {}; }}", name.text, vector(v))
        }
        QuantumItem::RaySet { name, rays } => {
            writeln!(out, "{indent}rayset {} {{ rays {}; }}", name.text, names(rays))
        }
        QuantumItem::Universe { name, alphabet, depth } => writeln!(
            out,
            "{indent}universe {} {{ alphabet {}; depth {depth}; }}",
            name.text,
            names(alphabet)
        ),
    };
}

/// Renders a parsed definition back to source text. Parsing the output
/// yields a tree equal to the input.
pub fn pretty(spec: &Spec) -> String {
    let mut out = String::new();
    for (i, decl) in spec.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = match decl {
            Decl::Tolerance(t) => {
                out.push_str("tolerance {\n");
                if let Some(e) = t.eps {
                    let _ = writeln!(out, "    eps {};", real(e));
                }
                if let Some(n) = t.null {
                    let _ = writeln!(out, "    null {};", real(n));
                }
                writeln!(out, "}}")
            }
            Decl::Monoid(m) => {
                let _ = writeln!(out, "monoid {} {{", m.name.text);
                let _ = writeln!(out, "    elements {};", m.elements);
                if let Some(ns) = &m.names {
                    let _ = writeln!(out, "    names {};", names(ns));
                }
                let _ = writeln!(out, "    table {};", table(&m.table));
                writeln!(out, "}}")
            }
            Decl::MSet(s) => {
                let _ = writeln!(out, "mset {} {{", s.name.text);
                let _ = writeln!(out, "    monoid {};", s.monoid.text);
                match &s.body {
                    MSetBody::Regular => {
                        let _ = writeln!(out, "    regular;");
                    }
                    MSetBody::Explicit { points, names: ns, action } => {
                        let _ = writeln!(out, "    points {points};");
                        if let Some(ns) = ns {
                            let _ = writeln!(out, "    names {};", names(ns));
                        }
                        let _ = writeln!(out, "    action {};", table(action));
                    }
                }
                writeln!(out, "}}")
            }
            Decl::Classical(c) => {
                let _ = writeln!(out, "classical {} {{", c.name.text);
                let _ = writeln!(out, "    values {};", set(&c.values));
                let _ = writeln!(out, "    states {};", names(&c.states));
                for q in &c.quantities {
                    let _ = writeln!(out, "    quantity {} [{}];", q.name.text, join(&q.values, |v| real(*v)));
                }
                writeln!(out, "}}")
            }
            Decl::Quantum(q) => {
                let _ = writeln!(out, "quantum {} {{", q.name.text);
                for it in &q.items {
                    item(&mut out, "    ", it);
                }
                writeln!(out, "}}")
            }
            Decl::Item(it) => {
                item(&mut out, "", it);
                Ok(())
            }
            Decl::Query(q) => writeln!(out, "query {} {};", q.name.text, quoted(&q.command)),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_spec;
    use super::*;

    #[test]
    fn complex_rendering() {
        assert_eq!(complex(Complex64::new(1.0, 0.0)), "1.0");
        assert_eq!(complex(Complex64::new(0.0, -2.0)), "-2.0i");
        assert_eq!(complex(Complex64::new(0.5, -1e-12)), "0.5-1e-12i");
        assert_eq!(complex(Complex64::new(-3.0, 4.0)), "-3.0+4.0i");
    }

    #[test]
    fn round_trip_of_a_mixed_definition() {
        let text = r#"
            tolerance { eps 1e-10; }
            monoid M2 { names (one, e); table [[0,1],[1,1]]; }
            mset R { monoid M2; regular; }
            mset X { monoid M2; action [[0,1],[1,1]]; }
            classical C { values {0, 1}; states (h, t); quantity A [0, 1]; }
            dim 2;
            state up { vector [1, 0]; }
            quantum Q { dim 2; projector P { matrix [[0.5, -0.5i], [0.5i, 0.5]]; } }
            query q "valuate --mode ray \"x\"";
        "#;
        let spec = parse_spec(text).unwrap();
        let printed = pretty(&spec);
        assert_eq!(parse_spec(&printed).unwrap(), spec);
        assert_eq!(pretty(&parse_spec(&printed).unwrap()), printed);
    }
}
