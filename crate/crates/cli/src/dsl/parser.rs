use mtopos_core::linalg::Complex64;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{Diagnostic, DiagnosticKind, Span};

type PResult<T> = Result<T, Diagnostic>;

/// Parses a system definition. Never panics: malformed input yields the first
/// lexical or syntax diagnostic, with its position.
pub fn parse_spec(text: &str) -> Result<Spec, Diagnostic> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(Spec { decls })
}

fn parse_fragment<T>(text: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> Result<T, Diagnostic> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let out = f(&mut p)?;
    if p.peek() != &Tok::Eof {
        return p.error("end of input");
    }
    Ok(out)
}

/// A value set such as `{-1, 1}`.
pub fn parse_value_set(text: &str) -> Result<Vec<f64>, Diagnostic> {
    parse_fragment(text, Parser::value_set)
}

/// A parenthesised name list such as `(Pz, Pplus)`; `()` is the empty list.
pub fn parse_name_list(text: &str) -> Result<Vec<String>, Diagnostic> {
    parse_fragment(text, |p| Ok(p.names()?.into_iter().map(|n| n.text).collect()))
}

/// A set of points written by name or index, such as `{a, 2}`.
pub fn parse_point_set(text: &str) -> Result<Vec<String>, Diagnostic> {
    parse_fragment(text, |p| {
        p.list(Tok::LBrace, Tok::RBrace, |p| match p.peek().clone() {
            Tok::Ident(s) => {
                p.bump();
                Ok(s)
            }
            _ => p.natural().map(|n| n.to_string()),
        })
    })
}

/// Zero or more name lists, optionally comma separated: `(Pz), (Pz, Pplus)`.
pub fn parse_string_list(text: &str) -> Result<Vec<Vec<String>>, Diagnostic> {
    parse_fragment(text, |p| {
        let mut out = Vec::new();
        while p.peek() == &Tok::LParen {
            out.push(p.names()?.into_iter().map(|n| n.text).collect());
            p.eat(&Tok::Comma);
        }
        Ok(out)
    })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

/// Tracks which fields a block has seen so duplicates and omissions are
/// reported against the right place.
struct Fields {
    block: String,
    seen: Vec<&'static str>,
}

impl Fields {
    fn new(block: String) -> Self {
        Fields {
            block,
            seen: Vec::new(),
        }
    }

    fn mark(&mut self, field: &'static str, span: Span) -> PResult<()> {
        if self.seen.contains(&field) {
            return Err(Diagnostic::new(
                DiagnosticKind::Syntax,
                span,
                format!("duplicate `{field}` in {}", self.block),
            ));
        }
        self.seen.push(field);
        Ok(())
    }

    fn require<T>(&self, value: Option<T>, field: &str, span: Span) -> PResult<T> {
        value.ok_or_else(|| {
            Diagnostic::new(
                DiagnosticKind::Syntax,
                span,
                format!("{} is missing `{field}`", self.block),
            )
        })
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::new(
            DiagnosticKind::Syntax,
            self.span(),
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            self.error(&tok.describe())
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            _ => self.error("a name"),
        }
    }

    fn keyword(&mut self) -> PResult<(String, Span)> {
        let n = self.name()?;
        Ok((n.text, n.span))
    }

    fn natural(&mut self) -> PResult<usize> {
        match *self.peek() {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                self.bump();
                Ok(v as usize)
            }
            _ => self.error("a non-negative integer"),
        }
    }

    fn real(&mut self) -> PResult<f64> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        match *self.peek() {
            Tok::Number(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => self.error("a number"),
        }
    }

    fn imag_part(&mut self) -> Option<f64> {
        match self.peek() {
            Tok::Imag(v) => {
                let v = *v;
                self.bump();
                Some(v)
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Some(1.0)
            }
            _ => None,
        }
    }

    /// `a`, `bi`, `a+bi` or `a-bi`, each with an optional leading sign.
    fn complex(&mut self) -> PResult<Complex64> {
        let sign = if self.eat(&Tok::Minus) {
            -1.0
        } else {
            self.eat(&Tok::Plus);
            1.0
        };
        if let Some(im) = self.imag_part() {
            return Ok(Complex64::new(0.0, sign * im));
        }
        let re = match *self.peek() {
            Tok::Number(v) => {
                self.bump();
                sign * v
            }
            _ => return self.error("a complex number"),
        };
        let im_sign = match self.peek() {
            Tok::Plus => 1.0,
            Tok::Minus => -1.0,
            _ => return Ok(Complex64::new(re, 0.0)),
        };
        self.bump();
        match self.imag_part() {
            Some(im) => Ok(Complex64::new(re, im_sign * im)),
            None => self.error("an imaginary part such as `2i`"),
        }
    }

    fn list<T>(&mut self, open: Tok, close: Tok, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            if self.peek() == &close {
                self.bump();
                return Ok(out);
            }
            return self.error(&format!("`,` or {}", close.describe()));
        }
    }

    fn names(&mut self) -> PResult<Vec<Name>> {
        self.list(Tok::LParen, Tok::RParen, Self::name)
    }

    fn value_set(&mut self) -> PResult<Vec<f64>> {
        self.list(Tok::LBrace, Tok::RBrace, Self::real)
    }

    fn real_vector(&mut self) -> PResult<Vec<f64>> {
        self.list(Tok::LBracket, Tok::RBracket, Self::real)
    }

    fn index_table(&mut self) -> PResult<Vec<Vec<usize>>> {
        self.list(Tok::LBracket, Tok::RBracket, |p| {
            p.list(Tok::LBracket, Tok::RBracket, Self::natural)
        })
    }

    fn complex_vector(&mut self) -> PResult<Vec<Complex64>> {
        self.list(Tok::LBracket, Tok::RBracket, Self::complex)
    }

    fn matrix(&mut self) -> PResult<Matrix> {
        self.list(Tok::LBracket, Tok::RBracket, Self::complex_vector)
    }

    fn end_field(&mut self) -> PResult<()> {
        self.expect(Tok::Semi).map(|_| ())
    }

    fn decl(&mut self) -> PResult<Decl> {
        let (kw, span) = match self.peek() {
            Tok::Ident(_) => self.keyword()?,
            _ => return self.error("a declaration"),
        };
        match kw.as_str() {
            "tolerance" => self.tolerance(span).map(Decl::Tolerance),
            "monoid" => self.monoid().map(Decl::Monoid),
            "mset" => self.mset().map(Decl::MSet),
            "classical" => self.classical().map(Decl::Classical),
            "quantum" => self.quantum().map(Decl::Quantum),
            "query" => {
                let name = self.name()?;
                let command = match self.peek().clone() {
                    Tok::Str(s) => {
                        self.bump();
                        s
                    }
                    _ => return self.error("a quoted command"),
                };
                self.end_field()?;
                Ok(Decl::Query(QueryDecl { name, command }))
            }
            other => match self.quantum_item(other, span)? {
                Some(item) => Ok(Decl::Item(item)),
                None => Err(Diagnostic::new(
                    DiagnosticKind::Syntax,
                    span,
                    format!("unknown declaration `{other}`"),
                )),
            },
        }
    }

    fn tolerance(&mut self, span: Span) -> PResult<ToleranceDecl> {
        let mut fields = Fields::new("tolerance block".into());
        let (mut eps, mut null) = (None, None);
        self.expect(Tok::LBrace)?;
        while !self.eat(&Tok::RBrace) {
            let (kw, at) = self.keyword()?;
            match kw.as_str() {
                "eps" => {
                    fields.mark("eps", at)?;
                    eps = Some(self.real()?);
                }
                "null" | "null_threshold" => {
                    fields.mark("null", at)?;
                    null = Some(self.real()?);
                }
                other => return Err(unknown_field(other, "tolerance block", at)),
            }
            self.end_field()?;
        }
        Ok(ToleranceDecl { eps, null, span })
    }

    fn monoid(&mut self) -> PResult<MonoidDecl> {
        let name = self.name()?;
        let mut fields = Fields::new(format!("monoid `{}`", name.text));
        let (mut elements, mut names, mut table) = (None, None, None);
        self.expect(Tok::LBrace)?;
        let close = loop {
            if self.peek() == &Tok::RBrace {
                break self.bump().span;
            }
            let (kw, at) = self.keyword()?;
            match kw.as_str() {
                "elements" => {
                    fields.mark("elements", at)?;
                    elements = Some(self.natural()?);
                }
                "names" => {
                    fields.mark("names", at)?;
                    names = Some(self.names()?);
                }
                "table" => {
                    fields.mark("table", at)?;
                    table = Some(self.index_table()?);
                }
                other => return Err(unknown_field(other, "monoid", at)),
            }
            self.end_field()?;
        };
        let table: Vec<Vec<usize>> = fields.require(table, "table", close)?;
        Ok(MonoidDecl {
            name,
            elements: elements.unwrap_or(table.len()),
            names,
            table,
        })
    }

    fn mset(&mut self) -> PResult<MSetDecl> {
        let name = self.name()?;
        let mut fields = Fields::new(format!("mset `{}`", name.text));
        let (mut monoid, mut regular, mut points, mut names, mut action) = (None, false, None, None, None);
        self.expect(Tok::LBrace)?;
        let close = loop {
            if self.peek() == &Tok::RBrace {
                break self.bump().span;
            }
            let (kw, at) = self.keyword()?;
            match kw.as_str() {
                "monoid" => {
                    fields.mark("monoid", at)?;
                    monoid = Some(self.name()?);
                }
                "regular" => {
                    fields.mark("regular", at)?;
                    regular = true;
                }
                "points" => {
                    fields.mark("points", at)?;
                    points = Some(self.natural()?);
                }
                "names" => {
                    fields.mark("names", at)?;
                    names = Some(self.names()?);
                }
                "action" => {
                    fields.mark("action", at)?;
                    action = Some(self.index_table()?);
                }
                other => return Err(unknown_field(other, "mset", at)),
            }
            self.end_field()?;
        };
        let monoid = fields.require(monoid, "monoid", close)?;
        let body = if regular {
            if action.is_some() || points.is_some() || names.is_some() {
                return Err(Diagnostic::new(
                    DiagnosticKind::Syntax,
                    close,
                    format!("{} is `regular` and cannot also list points or an action", fields.block),
                ));
            }
            MSetBody::Regular
        } else {
            let action: Vec<Vec<usize>> = fields.require(action, "action", close)?;
            let points = points.unwrap_or_else(|| action.first().map_or(0, Vec::len));
            MSetBody::Explicit { points, names, action }
        };
        Ok(MSetDecl { name, monoid, body })
    }

    fn classical(&mut self) -> PResult<ClassicalDecl> {
        let name = self.name()?;
        let mut fields = Fields::new(format!("classical system `{}`", name.text));
        let (mut values, mut states, mut quantities) = (None, None, Vec::new());
        self.expect(Tok::LBrace)?;
        let close = loop {
            if self.peek() == &Tok::RBrace {
                break self.bump().span;
            }
            let (kw, at) = self.keyword()?;
            match kw.as_str() {
                "values" => {
                    fields.mark("values", at)?;
                    values = Some(self.value_set()?);
                }
                "states" => {
                    fields.mark("states", at)?;
                    states = Some(self.names()?);
                }
                "quantity" => {
                    let name = self.name()?;
                    let values = self.real_vector()?;
                    quantities.push(Quantity { name, values });
                }
                other => return Err(unknown_field(other, "classical system", at)),
            }
            self.end_field()?;
        };
        Ok(ClassicalDecl {
            values: fields.require(values, "values", close)?,
            states: fields.require(states, "states", close)?,
            name,
            quantities,
        })
    }

    fn quantum(&mut self) -> PResult<QuantumDecl> {
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let (kw, at) = self.keyword()?;
            match self.quantum_item(&kw, at)? {
                Some(item) => items.push(item),
                None => return Err(unknown_field(&kw, "quantum system", at)),
            }
        }
        Ok(QuantumDecl { name, items })
    }

    /// Parses the body of a quantum item whose keyword has been consumed.
    /// Returns `None` when `kw` is not a quantum item keyword.
    fn quantum_item(&mut self, kw: &str, span: Span) -> PResult<Option<QuantumItem>> {
        let item = match kw {
            "dim" => {
                let d = self.natural()?;
                self.end_field()?;
                QuantumItem::Dim(d, span)
            }
            "values" => {
                let v = self.value_set()?;
                self.end_field()?;
                QuantumItem::Values(v, span)
            }
            "operator" | "projector" | "density" => {
                let name = self.name()?;
                let matrix = self.single_field_block(kw, &name, "matrix", Self::matrix)?;
                match kw {
                    "operator" => QuantumItem::Operator { name, matrix },
                    "projector" => QuantumItem::Projector { name, matrix },
                    _ => QuantumItem::Density { name, matrix },
                }
            }
            "state" => {
                let name = self.name()?;
                let vector = self.single_field_block(kw, &name, "vector", Self::complex_vector)?;
                QuantumItem::State { name, vector }
            }
            "rayset" => {
                let name = self.name()?;
                let rays = self.single_field_block(kw, &name, "rays", Self::names)?;
                QuantumItem::RaySet { name, rays }
            }
            "universe" => {
                let name = self.name()?;
                let mut fields = Fields::new(format!("universe `{}`", name.text));
                let (mut alphabet, mut depth) = (None, None);
                self.expect(Tok::LBrace)?;
                let close = loop {
                    if self.peek() == &Tok::RBrace {
                        break self.bump().span;
                    }
                    let (f, at) = self.keyword()?;
                    match f.as_str() {
                        "alphabet" => {
                            fields.mark("alphabet", at)?;
                            alphabet = Some(self.names()?);
                        }
                        "depth" => {
                            fields.mark("depth", at)?;
                            depth = Some(self.natural()?);
                        }
                        other => return Err(unknown_field(other, "universe", at)),
                    }
                    self.end_field()?;
                };
                QuantumItem::Universe {
                    alphabet: fields.require(alphabet, "alphabet", close)?,
                    depth: fields.require(depth, "depth", close)?,
                    name,
                }
            }
            _ => return Ok(None),
        };
        Ok(Some(item))
    }

    fn single_field_block<T>(
        &mut self,
        kind: &str,
        name: &Name,
        field: &'static str,
        mut body: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<T> {
        let mut fields = Fields::new(format!("{kind} `{}`", name.text));
        let mut value = None;
        self.expect(Tok::LBrace)?;
        let close = loop {
            if self.peek() == &Tok::RBrace {
                break self.bump().span;
            }
            let (f, at) = self.keyword()?;
            if f != field {
                return Err(unknown_field(&f, kind, at));
            }
            fields.mark(field, at)?;
            value = Some(body(self)?);
            self.end_field()?;
        };
        fields.require(value, field, close)
    }
}

fn unknown_field(field: &str, block: &str, span: Span) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Syntax, span, format!("unknown field `{field}` in {block}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monoid_example() {
        let spec = parse_spec("monoid M2 { elements 2; table [[0,1],[1,1]]; }").unwrap();
        match &spec.decls[0] {
            Decl::Monoid(m) => {
                assert_eq!(m.name.text, "M2");
                assert_eq!(m.elements, 2);
                assert_eq!(m.table, vec![vec![0, 1], vec![1, 1]]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complex_literals() {
        let spec = parse_spec("state s { vector [1, -2i, 0.5+0.5i, 3-i, -1e-3-4i, i]; }").unwrap();
        let Decl::Item(QuantumItem::State { vector, .. }) = &spec.decls[0] else {
            panic!("expected a state");
        };
        let want = [(1.0, 0.0), (0.0, -2.0), (0.5, 0.5), (3.0, -1.0), (-1e-3, -4.0), (0.0, 1.0)];
        let got: Vec<(f64, f64)> = vector.iter().map(|c| (c.re, c.im)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn quantum_block_and_query() {
        let text = r#"
            quantum Q {
                dim 2;
                values {-1, 1};
                operator Z { matrix [[1,0],[0,-1]]; }
                universe U { alphabet (Z); depth 2; }
            }
            query q1 "verify-heyting M2";
        "#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.decls.len(), 2);
        let Decl::Quantum(q) = &spec.decls[0] else { panic!() };
        assert_eq!(q.items.len(), 4);
        let Decl::Query(query) = &spec.decls[1] else { panic!() };
        assert_eq!(query.command, "verify-heyting M2");
    }

    #[test]
    fn diagnostics_carry_positions() {
        let d = parse_spec("monoid M {\n  table [[0]]\n}").unwrap_err();
        assert_eq!(d.kind, DiagnosticKind::Syntax);
        assert_eq!((d.span.line, d.span.col), (3, 1));
        assert!(d.message.contains("`;`"), "{}", d.message);

        let d = parse_spec("monoid M { elements 1; }").unwrap_err();
        assert!(d.message.contains("missing `table`"), "{}", d.message);

        let d = parse_spec("widget W { }").unwrap_err();
        assert!(d.message.contains("unknown declaration"), "{}", d.message);

        let d = parse_spec("monoid M { table [[0]]; table [[0]]; }").unwrap_err();
        assert!(d.message.contains("duplicate"), "{}", d.message);
    }

    #[test]
    fn argument_fragments() {
        assert_eq!(parse_value_set("{-1, 0.5}").unwrap(), vec![-1.0, 0.5]);
        assert_eq!(parse_value_set("{}").unwrap(), Vec::<f64>::new());
        assert_eq!(parse_name_list("(Pz,Pplus)").unwrap(), vec!["Pz", "Pplus"]);
        assert_eq!(parse_point_set("{a, 2}").unwrap(), vec!["a", "2"]);
        assert_eq!(
            parse_string_list("(A), (A,B) ()").unwrap(),
            vec![vec!["A".to_string()], vec!["A".into(), "B".into()], vec![]]
        );
        assert!(parse_value_set("{1} trailing").is_err());
        assert!(parse_name_list("(a,").is_err());
    }

    #[test]
    fn truncated_inputs_never_panic() {
        let text = "quantum Q { dim 2; operator A { matrix [[1, 0.5-2i], [0.5+2i, 3]]; } } query x \"a\";";
        for end in 0..text.len() {
            if text.is_char_boundary(end) {
                let _ = parse_spec(&text[..end]);
            }
        }
    }
}
