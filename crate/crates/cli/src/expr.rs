//! S-expression surface syntax for multivectors and forms:
//! `(vec X)`, `(cov x)`, `(unit vec|cov)`, `(wedge A ...)`, `(scale S A)`,
//! `(add A ...)`.

use std::fmt;

use hktlab_core::exterior::{Exterior, Kind};
use hktlab_core::{FormField, FrameContext, Multivector, Scalar};

use crate::lex::{ParseError, ParseResult, Pos};
use crate::scalar::parse_scalar_at;

const MAX_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Vector(Multivector),
    Form(FormField),
}

impl Element {
    fn kind_name(&self) -> &'static str {
        match self {
            Element::Vector(_) => "multivector",
            Element::Form(_) => "form",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(x) => write!(f, "{x}"),
            Element::Form(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(String, Pos),
    Str(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::Str(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

struct Reader {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    col: usize,
}

impl Reader {
    fn pos(&self) -> Pos {
        Pos::new(self.line, self.col)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn advance(&mut self) {
        if let Some(c) = self.peek() {
            self.idx += 1;
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
    }

    fn skip_space(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.advance();
                }
            } else if c.is_whitespace() {
                self.advance();
            } else {
                break;
            }
        }
    }

    fn found(&self) -> String {
        self.peek().map(|c| format!("'{c}'")).unwrap_or_else(|| "end of input".into())
    }

    fn read(&mut self, depth: usize) -> ParseResult<Sexp> {
        self.skip_space();
        let pos = self.pos();
        if depth > MAX_DEPTH {
            return Err(ParseError::semantic(pos, "expression nested too deeply"));
        }
        match self.peek() {
            None => Err(ParseError::syntax(pos, &["'('", "atom", "string"], "end of input")),
            Some('(') => {
                self.advance();
                let mut items = Vec::new();
                loop {
                    self.skip_space();
                    match self.peek() {
                        Some(')') => {
                            self.advance();
                            return Ok(Sexp::List(items, pos));
                        }
                        None => return Err(ParseError::syntax(self.pos(), &["')'", "'('", "atom", "string"], "end of input")),
                        _ => items.push(self.read(depth + 1)?),
                    }
                }
            }
            Some(')') => Err(ParseError::syntax(pos, &["'('", "atom", "string"], "')'")),
            Some('"') => {
                self.advance();
                let start = self.idx;
                while self.peek().is_some_and(|c| c != '"') {
                    self.advance();
                }
                if self.peek().is_none() {
                    return Err(ParseError::syntax(self.pos(), &["closing '\"'"], "end of input"));
                }
                let s: String = self.chars[start..self.idx].iter().collect();
                self.advance();
                Ok(Sexp::Str(s, pos))
            }
            Some(_) => {
                let start = self.idx;
                while self.peek().is_some_and(|c| !c.is_whitespace() && !"()\";".contains(c)) {
                    self.advance();
                }
                Ok(Sexp::Atom(self.chars[start..self.idx].iter().collect(), pos))
            }
        }
    }
}

const HEADS: &[&str] = &["'vec'", "'cov'", "'unit'", "'wedge'", "'scale'", "'add'"];

/// Parses one expression over the frame of `ctx`.
pub fn parse_expr(text: &str, ctx: &FrameContext) -> ParseResult<Element> {
    let mut r = Reader { chars: text.chars().collect(), idx: 0, line: 1, col: 1 };
    let sexp = r.read(0)?;
    r.skip_space();
    if r.peek().is_some() {
        return Err(ParseError::syntax(r.pos(), &["end of input"], r.found()));
    }
    build(&sexp, ctx)
}

fn name_arg<'a>(args: &'a [Sexp], head: &str, pos: Pos) -> ParseResult<(&'a str, Pos)> {
    match args {
        [Sexp::Atom(n, p)] => Ok((n, *p)),
        [other] => Err(ParseError::syntax(other.pos(), &["name"], "a list or string")),
        _ => Err(ParseError::semantic(pos, format!("'{head}' takes exactly one name"))),
    }
}

fn wedge_same(a: Element, b: Element, pos: Pos) -> ParseResult<Element> {
    match (a, b) {
        (Element::Vector(x), Element::Vector(y)) => Ok(Element::Vector(x.wedge(&y).expect("same basis"))),
        (Element::Form(x), Element::Form(y)) => Ok(Element::Form(x.wedge(&y).expect("same basis"))),
        (a, b) => Err(ParseError::semantic(pos, format!("cannot combine a {} with a {}", a.kind_name(), b.kind_name()))),
    }
}

fn add_same(a: Element, b: Element, pos: Pos) -> ParseResult<Element> {
    match (a, b) {
        (Element::Vector(x), Element::Vector(y)) => Ok(Element::Vector(x.add(&y))),
        (Element::Form(x), Element::Form(y)) => Ok(Element::Form(x.add(&y))),
        (a, b) => Err(ParseError::semantic(pos, format!("cannot combine a {} with a {}", a.kind_name(), b.kind_name()))),
    }
}

fn build(s: &Sexp, ctx: &FrameContext) -> ParseResult<Element> {
    let basis = ctx.basis();
    let (items, pos) = match s {
        Sexp::List(items, pos) => (items, *pos),
        other => return Err(ParseError::syntax(other.pos(), &["'('"], "an atom")),
    };
    let (head, args) = match items.split_first() {
        Some((Sexp::Atom(h, _), args)) => (h.as_str(), args),
        Some((other, _)) => return Err(ParseError::syntax(other.pos(), HEADS, "a list or string")),
        None => return Err(ParseError::syntax(pos, HEADS, "')'")),
    };
    match head {
        "vec" => {
            let (n, p) = name_arg(args, head, pos)?;
            basis
                .vector_index(n)
                .map(|i| Element::Vector(Multivector::basis_element(basis, i)))
                .ok_or_else(|| ParseError::semantic(p, format!("unknown frame vector {n}")))
        }
        "cov" => {
            let (n, p) = name_arg(args, head, pos)?;
            basis
                .covector_index(n)
                .map(|i| Element::Form(FormField::basis_element(basis, i)))
                .ok_or_else(|| ParseError::semantic(p, format!("unknown coframe element {n}")))
        }
        "unit" => {
            let (n, p) = name_arg(args, head, pos)?;
            match n {
                "vec" => Ok(Element::Vector(Multivector::scalar(basis, Scalar::one()))),
                "cov" => Ok(Element::Form(FormField::scalar(basis, Scalar::one()))),
                _ => Err(ParseError::syntax(p, &["'vec'", "'cov'"], format!("'{n}'"))),
            }
        }
        "wedge" | "add" => {
            let mut parts = args.iter().map(|a| build(a, ctx));
            let Some(first) = parts.next() else {
                return if head == "add" {
                    Ok(Element::Vector(Multivector::zero(basis)))
                } else {
                    Err(ParseError::semantic(pos, "'wedge' needs at least one argument"))
                };
            };
            let mut acc = first?;
            for (p, arg) in parts.zip(args.iter().skip(1)) {
                let x = p?;
                acc = if head == "add" { add_same(acc, x, arg.pos())? } else { wedge_same(acc, x, arg.pos())? };
            }
            Ok(acc)
        }
        "scale" => {
            let [c, x] = args else {
                return Err(ParseError::semantic(pos, "'scale' takes a scalar and an element"));
            };
            let s = match c {
                Sexp::Str(t, p) => parse_scalar_at(t, ctx.vars(), Pos::new(p.line, p.col + 1))?,
                Sexp::Atom(t, p) => parse_scalar_at(t, ctx.vars(), *p)?,
                Sexp::List(_, p) => return Err(ParseError::syntax(*p, &["string", "atom"], "a list")),
            };
            Ok(match build(x, ctx)? {
                Element::Vector(v) => Element::Vector(v.scale(&s)),
                Element::Form(w) => Element::Form(w.scale(&s)),
            })
        }
        other => Err(ParseError::syntax(items[0].pos(), HEADS, format!("'{other}'"))),
    }
}

fn print_terms<K: Kind>(x: &Exterior<K>, leaf: &str, unit: &str) -> String {
    let names = if leaf == "vec" { x.basis().vector_names() } else { x.basis().covector_names() };
    let terms: Vec<String> = x
        .terms()
        .map(|(blade, c)| {
            let body = match blade.len() {
                0 => format!("(unit {unit})"),
                1 => format!("({leaf} {})", names[blade[0] as usize]),
                _ => format!(
                    "(wedge {})",
                    blade.iter().map(|&i| format!("({leaf} {})", names[i as usize])).collect::<Vec<_>>().join(" ")
                ),
            };
            if c.is_one() {
                body
            } else {
                format!("(scale \"{c}\" {body})")
            }
        })
        .collect();
    match terms.len() {
        0 if leaf == "vec" => "(add)".to_string(),
        0 => format!("(scale \"0\" (unit {unit}))"),
        1 => terms.into_iter().next().expect("one term"),
        _ => format!("(add {})", terms.join(" ")),
    }
}

/// Canonical S-expression; `parse_expr` inverts it.
pub fn print_expr(e: &Element) -> String {
    match e {
        Element::Vector(x) => print_terms(x, "vec", "vec"),
        Element::Form(w) => print_terms(w, "cov", "cov"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hktlab_core::liealg::{gl_algebra, param_a};
    use hktlab_core::Var;

    fn gl3() -> FrameContext {
        gl_algebra(3).unwrap().builder("gl3").unwrap().var(&param_a()).build().unwrap()
    }

    #[test]
    fn wedge_of_vectors() {
        let ctx = gl3();
        let e = parse_expr("(wedge (vec E12) (vec E23))", &ctx).unwrap();
        let v = |s: &str| ctx.vector(s).unwrap();
        assert_eq!(e, Element::Vector(v("E12").wedge(&v("E23")).unwrap()));
    }

    #[test]
    fn scaled_vector() {
        let ctx = gl3();
        let e = parse_expr("(scale \"1+i*a\" (vec E11))", &ctx).unwrap();
        let b = Scalar::one() + Scalar::i() * Scalar::var(&Var::real("a"));
        assert_eq!(e, Element::Vector(ctx.vector("E11").unwrap().scale(&b)));
        assert_eq!(parse_expr(&print_expr(&e), &ctx).unwrap(), e);
    }

    #[test]
    fn errors() {
        let ctx = gl3();
        assert!(matches!(parse_expr("(vec E44)", &ctx), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse_expr("(add (vec E12) (cov dE12))", &ctx), Err(ParseError::Semantic { .. })));
        match parse_expr("(frob (vec E12))", &ctx).unwrap_err() {
            ParseError::Syntax { pos, expected, .. } => {
                assert_eq!(pos, Pos::new(1, 2));
                assert!(expected.contains(&"'wedge'".to_string()));
            }
            e => panic!("{e}"),
        }
        match parse_expr("(scale \"1 + * a\" (vec E11))", &ctx).unwrap_err() {
            ParseError::Syntax { pos, .. } => assert_eq!(pos, Pos::new(1, 13)),
            e => panic!("{e}"),
        }
        assert!(parse_expr("(wedge (vec E12)", &ctx).is_err());
        assert!(parse_expr("", &ctx).is_err());
    }

    #[test]
    fn zero_elements_round_trip() {
        let ctx = gl3();
        for e in [Element::Vector(Multivector::zero(ctx.basis())), Element::Form(FormField::zero(ctx.basis()))] {
            assert_eq!(parse_expr(&print_expr(&e), &ctx).unwrap(), e);
        }
    }
}
