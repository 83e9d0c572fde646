//! JSON report construction and the human-readable renderer.

use fixedbitset::FixedBitSet;
use mtopos_core::algebra::{BoundedIdeal, LeftIdeal, ProjStringMonoid};
use mtopos_core::classical::{FunctionMonoid, ValueSet};
use mtopos_core::context::Sieve;
use serde_json::{json, Map, Value};

use crate::dsl::Diagnostic;

pub const SCHEMA: u64 = 1;

/// A finished command: what was asked, under which configuration, and the
/// answer.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: Value,
    pub config: Value,
    pub result: Value,
    pub universe: Option<Value>,
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), self.command.clone());
        m.insert("config".into(), self.config.clone());
        m.insert("result".into(), self.result.clone());
        if let Some(u) = &self.universe {
            m.insert("universe".into(), u.clone());
        }
        if let Some(t) = self.timing_ms {
            m.insert("timing".into(), json!({ "elapsed_ms": t }));
        }
        Value::Object(m)
    }

    pub fn render(&self, pretty: bool) -> String {
        render_value(&self.to_json(), pretty)
    }
}

pub fn render_value(v: &Value, pretty: bool) -> String {
    if pretty {
        let mut out = String::new();
        text(&mut out, v, 0);
        out
    } else {
        let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
        s.push('\n');
        s
    }
}

/// Report body for a failed load or command.
pub fn diagnostics_json(command: &Value, diags: &[Diagnostic]) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "diagnostics": diags.iter().map(|d| json!({
            "kind": d.kind.as_str(),
            "line": d.span.line,
            "col": d.span.col,
            "message": d.message,
        })).collect::<Vec<_>>(),
    })
}

pub fn error_json(command: &Value, kind: &str, message: &str) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "error": { "kind": kind, "message": message },
    })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("(none)".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", "))
        }
        Value::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) => {
            Some(
                a.iter()
                    .map(|x| format!("[{}]", scalar(x).unwrap_or_default()))
                    .collect::<Vec<_>>()
                    .join(" "),
            )
        }
        _ => None,
    }
}

fn text(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            let width = m.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        text(out, x, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn ideal(i: &LeftIdeal) -> Value {
    let m = i.monoid();
    json!(i.elements().into_iter().map(|e| m.label(e)).collect::<Vec<_>>())
}

/// An ideal of `Map(X, X)`, each map written as its list of values.
pub fn map_ideal(fm: &FunctionMonoid, values: &ValueSet, i: &LeftIdeal) -> Value {
    json!(i
        .elements()
        .into_iter()
        .map(|f| fm.map(f).iter().map(|&x| values.value(x)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn names_in(bits: &FixedBitSet, names: &[String]) -> Value {
    json!(bits.ones().map(|i| names[i].clone()).collect::<Vec<_>>())
}

pub fn bounded_ideal(b: &BoundedIdeal, strings: &ProjStringMonoid) -> Value {
    let cert = b.certificate();
    json!({
        "depth": b.max_verified_length(),
        "members": b.witnesses().iter().map(|q| strings.format(q)).collect::<Vec<_>>(),
        "non_members": b.non_members().iter().map(|q| strings.format(q)).collect::<Vec<_>>(),
        "is_everything": b.is_everything(),
        "certificate": {
            "depth": cert.depth,
            "strings_checked": cert.strings_checked,
            "clean": cert.is_clean(),
            "violations": cert.violations.iter().map(|v| json!({
                "member": strings.format(&v.member),
                "letter": strings.alphabet()[v.letter],
            })).collect::<Vec<_>>(),
        },
    })
}

pub fn sieve(s: &Sieve, strings: &ProjStringMonoid) -> Value {
    json!({
        "context": strings.format(s.context()),
        "tail_lengths": s.included_tail_lengths(),
        "tails": s.tails().iter().map(|q| strings.format(q)).collect::<Vec<_>>(),
        "min_tail": s.min_tail(),
        "is_full": s.is_full(),
        "is_empty": s.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretty_text_is_readable() {
        let v = json!({"a": 1, "list": [1, 2], "nested": {"ok": true}, "rows": [[1, 2], [3]]});
        let s = render_value(&v, true);
        assert_eq!(s, "a       1\nlist    1, 2\nnested:\n  ok  yes\nrows    [1, 2] [3]\n");
    }

    #[test]
    fn json_keys_are_sorted() {
        let r = Report {
            command: json!({"name": "x", "b": 1, "a": 2}),
            config: json!({}),
            result: json!(null),
            universe: None,
            timing_ms: None,
        };
        let s = r.render(false);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(!s.contains("timing"));
    }
}
