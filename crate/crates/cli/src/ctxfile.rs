//! Line-oriented context files.
//!
//! ```text
//! context sl2
//! [indeterminates]
//! a               # real
//! lam lamb        # conjugate pair
//! [roots]
//! s^2 = 1 + lam*lamb
//! [basis]
//! H eH            # vector and dual covector (default d<name>)
//! [conjugation]
//! H -> H
//! [brackets]
//! [H, E] = 2*E
//! [derivations]
//! H(a) = 1
//! [I]
//! H -> i*H
//! [metric]
//! g(H, H) = 2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use hktlab_core::exterior::BasisSpec;
use hktlab_core::liealg::{param_a, sl2_algebra, su3_structure};
use hktlab_core::{ContextBuilder, Error, FrameContext, LinearOperator, Matrix, Multivector, RootRelation, Scalar, Var, VarTable};

use crate::lex::{tokenize, Cursor, ParseError, ParseResult, Pos, Tok};
use crate::scalar::{coefficient_text, parse_tokens};

const SECTIONS: &[&str] = &["indeterminates", "roots", "basis", "conjugation", "brackets", "derivations", "I", "J", "K", "metric"];

fn placeholder(name: &str) -> Var {
    Var::real(&format!("#{name}"))
}

#[derive(Default)]
struct State {
    name: Option<String>,
    vars: VarTable,
    root: Option<Arc<RootRelation>>,
    vectors: Vec<(String, String, Pos)>,
    basis: Option<Arc<BasisSpec>>,
    conjugation: BTreeMap<usize, Multivector>,
    brackets: BTreeMap<(usize, usize), (Multivector, Pos)>,
    derivations: Vec<(usize, Var, Scalar)>,
    structures: [BTreeMap<usize, Multivector>; 3],
    metric: Option<BTreeMap<(usize, usize), Scalar>>,
    seen: BTreeSet<String>,
    section_pos: BTreeMap<String, Pos>,
}

impl State {
    fn names_in_use(&self, name: &str) -> bool {
        name == "i"
            || self.vars.get(name).is_some()
            || self.root.as_ref().is_some_and(|r| r.symbol() == name)
            || self.vectors.iter().any(|(v, c, _)| v == name || c == name)
    }

    fn basis(&mut self, pos: Pos) -> ParseResult<Arc<BasisSpec>> {
        if let Some(b) = &self.basis {
            return Ok(b.clone());
        }
        if self.vectors.is_empty() {
            return Err(ParseError::semantic(pos, "the basis section must come first and be nonempty"));
        }
        let b = BasisSpec::new(
            self.vectors.iter().map(|v| v.0.clone()).collect(),
            self.vectors.iter().map(|v| v.1.clone()).collect(),
        )
        .map_err(|e| ParseError::semantic(pos, e.to_string()))?;
        self.basis = Some(b.clone());
        Ok(b)
    }

    fn vector_index(&mut self, name: &str, pos: Pos) -> ParseResult<usize> {
        let b = self.basis(pos)?;
        b.vector_index(name).ok_or_else(|| ParseError::semantic(pos, format!("unknown frame vector {name}")))
    }

    /// Linear combination of frame vectors with scalar coefficients.
    fn lincomb(&mut self, toks: &[(Tok, Pos)], end: Pos) -> ParseResult<Multivector> {
        let b = self.basis(end)?;
        let names = b.vector_names().to_vec();
        let resolve = |n: &str| names.iter().any(|v| v == n).then(|| Scalar::var(&placeholder(n)));
        let start = toks.first().map(|t| t.1).unwrap_or(end);
        if toks.is_empty() {
            return Err(ParseError::syntax(end, &["linear combination"], "end of line"));
        }
        let s = parse_tokens(toks, end, &self.vars, &resolve)?;
        let mut out = Multivector::zero(&b);
        let mut rest = s.clone();
        for (k, n) in names.iter().enumerate() {
            let v = placeholder(n);
            if !s.depends_on(&v) {
                continue;
            }
            let c = s.partial(&v);
            if names.iter().any(|m| c.depends_on(&placeholder(m))) {
                return Err(ParseError::semantic(start, "not linear in the frame vectors"));
            }
            rest = rest - &c * Scalar::var(&v);
            out = out.add(&Multivector::basis_element(&b, k).scale(&c));
        }
        if !rest.is_zero() {
            return Err(ParseError::semantic(start, "linear combination has a term without a frame vector"));
        }
        Ok(out)
    }

    fn scalar(&self, toks: &[(Tok, Pos)], end: Pos) -> ParseResult<Scalar> {
        if toks.is_empty() {
            return Err(ParseError::syntax(end, &["scalar"], "end of line"));
        }
        parse_tokens(toks, end, &self.vars, &|_| None)
    }
}

/// Parses a context file and runs the constructor checks.
pub fn parse_context(text: &str) -> ParseResult<FrameContext> {
    let mut st = State::default();
    let mut section: Option<String> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let toks = tokenize(raw, Pos::new(line_no, 1))?;
        if toks.is_empty() {
            continue;
        }
        let end = Pos::new(line_no, raw.chars().count() + 1);
        let mut cur = Cursor::new(&toks, end);
        // section header: a lone `[name]`
        if toks.len() == 3 && toks[0].0 == Tok::Op('[') && toks[2].0 == Tok::Op(']') {
            if let Tok::Ident(name) = &toks[1].0 {
                if !SECTIONS.contains(&name.as_str()) {
                    let expected: Vec<String> = SECTIONS.iter().map(|s| format!("'{s}'")).collect();
                    let exp: Vec<&str> = expected.iter().map(|s| s.as_str()).collect();
                    return Err(ParseError::syntax(toks[1].1, &exp, format!("'{name}'")));
                }
                if !st.seen.insert(name.clone()) {
                    return Err(ParseError::semantic(toks[0].1, format!("section [{name}] appears twice")));
                }
                if name == "metric" {
                    st.metric = Some(BTreeMap::new());
                }
                st.section_pos.insert(name.clone(), toks[0].1);
                section = Some(name.clone());
                continue;
            }
        }
        let Some(sec) = section.clone() else {
            match cur.peek() {
                Some(Tok::Ident(k)) if k == "context" => {
                    cur.bump();
                    let (name, _) = cur.expect_ident("context name")?;
                    cur.expect_end()?;
                    st.name = Some(name);
                    continue;
                }
                _ => return Err(cur.error(&["'context'", "'['"])),
            }
        };
        match sec.as_str() {
            "indeterminates" => {
                let (a, pa) = cur.expect_ident("indeterminate name")?;
                let partner = if cur.at_end() { None } else { Some(cur.expect_ident("conjugate name")?) };
                cur.expect_end()?;
                let check = |st: &State, n: &str, p: Pos| {
                    if st.names_in_use(n) {
                        Err(ParseError::semantic(p, format!("name {n} is already in use")))
                    } else {
                        Ok(())
                    }
                };
                check(&st, &a, pa)?;
                match partner {
                    None => st.vars.insert(Var::real(&a)),
                    Some((b, pb)) => {
                        check(&st, &b, pb)?;
                        if a == b {
                            return Err(ParseError::semantic(pb, "a conjugate pair needs two names"));
                        }
                        let (x, y) = Var::pair(&a, &b);
                        st.vars.insert(x);
                        st.vars.insert(y);
                    }
                }
            }
            "roots" => {
                let (sym, ps) = cur.expect_ident("root symbol")?;
                cur.expect_op('^')?;
                match cur.bump() {
                    Some(Tok::Num(n)) if n == "2" => {}
                    _ => return Err(ParseError::syntax(cur.pos(), &["'2'"], "another exponent")),
                }
                cur.expect_op('=')?;
                if st.root.is_some() {
                    return Err(ParseError::semantic(ps, "at most one root relation is supported"));
                }
                if st.names_in_use(&sym) {
                    return Err(ParseError::semantic(ps, format!("name {sym} is already in use")));
                }
                let rad = st.scalar(cur.rest(), end)?;
                let r = RootRelation::new(&sym, &rad).map_err(|e| ParseError::semantic(ps, e.to_string()))?;
                st.vars.set_root(r.clone());
                st.root = Some(r);
            }
            "basis" => {
                if st.basis.is_some() {
                    return Err(ParseError::semantic(toks[0].1, "the basis is already in use by an earlier section"));
                }
                let (v, pv) = cur.expect_ident("frame vector name")?;
                let c = if cur.at_end() { format!("d{v}") } else { cur.expect_ident("covector name")?.0 };
                cur.expect_end()?;
                if st.names_in_use(&v) || st.names_in_use(&c) || v == c {
                    return Err(ParseError::semantic(pv, format!("basis names {v}, {c} clash with earlier names")));
                }
                st.vectors.push((v, c, pv));
            }
            "conjugation" | "I" | "J" | "K" => {
                let (x, px) = cur.expect_ident("frame vector name")?;
                let i = st.vector_index(&x, px)?;
                if cur.bump() != Some(&Tok::Arrow) {
                    return Err(ParseError::syntax(toks.get(1).map(|t| t.1).unwrap_or(end), &["'->'"], "something else"));
                }
                let img = st.lincomb(cur.rest(), end)?;
                let table = match sec.as_str() {
                    "conjugation" => &mut st.conjugation,
                    "I" => &mut st.structures[0],
                    "J" => &mut st.structures[1],
                    _ => &mut st.structures[2],
                };
                if table.insert(i, img).is_some() {
                    return Err(ParseError::semantic(px, format!("image of {x} given twice in [{sec}]")));
                }
            }
            "brackets" => {
                cur.expect_op('[')?;
                let (x, px) = cur.expect_ident("frame vector name")?;
                cur.expect_op(',')?;
                let (y, py) = cur.expect_ident("frame vector name")?;
                cur.expect_op(']')?;
                cur.expect_op('=')?;
                let i = st.vector_index(&x, px)?;
                let j = st.vector_index(&y, py)?;
                let v = st.lincomb(cur.rest(), end)?;
                if i == j && !v.is_zero() {
                    return Err(ParseError::semantic(px, format!("[{x}, {x}] must vanish")));
                }
                if let Some((w, _)) = st.brackets.get(&(j, i)) {
                    if w.neg() != v {
                        return Err(ParseError::semantic(
                            px,
                            format!("bracket table not antisymmetric for pair ({x}, {y}): [{y}, {x}] = {w} but [{x}, {y}] = {v}"),
                        ));
                    }
                }
                if st.brackets.insert((i, j), (v, px)).is_some() {
                    return Err(ParseError::semantic(px, format!("[{x}, {y}] given twice")));
                }
            }
            "derivations" => {
                let (x, px) = cur.expect_ident("frame vector name")?;
                cur.expect_op('(')?;
                let (v, pv) = cur.expect_ident("indeterminate")?;
                cur.expect_op(')')?;
                cur.expect_op('=')?;
                let i = st.vector_index(&x, px)?;
                let var = st.vars.get(&v).cloned().ok_or_else(|| ParseError::semantic(pv, format!("unknown indeterminate {v}")))?;
                if st.derivations.iter().any(|(k, w, _)| *k == i && *w == var) {
                    return Err(ParseError::semantic(px, format!("{x}({v}) given twice")));
                }
                let value = st.scalar(cur.rest(), end)?;
                st.derivations.push((i, var, value));
            }
            "metric" => {
                match cur.bump() {
                    Some(Tok::Ident(g)) if g == "g" => {}
                    _ => return Err(ParseError::syntax(toks[0].1, &["'g'"], "something else")),
                }
                cur.expect_op('(')?;
                let (x, px) = cur.expect_ident("frame vector name")?;
                cur.expect_op(',')?;
                let (y, py) = cur.expect_ident("frame vector name")?;
                cur.expect_op(')')?;
                cur.expect_op('=')?;
                let i = st.vector_index(&x, px)?;
                let j = st.vector_index(&y, py)?;
                let value = st.scalar(cur.rest(), end)?;
                let key = (i.min(j), i.max(j));
                let metric = st.metric.get_or_insert_with(BTreeMap::new);
                if metric.insert(key, value).is_some() {
                    return Err(ParseError::semantic(px, format!("g({x}, {y}) given twice")));
                }
            }
            _ => unreachable!("section names are validated"),
        }
    }
    finish(st, text.lines().count().max(1))
}

fn finish(mut st: State, last_line: usize) -> ParseResult<FrameContext> {
    let eof = Pos::new(last_line, 1);
    let basis = st.basis(eof)?;
    let n = basis.dim();
    let at = |st: &State, sec: &str| st.section_pos.get(sec).copied().unwrap_or(eof);
    let mut b = ContextBuilder::new(st.name.as_deref().unwrap_or("context"), basis.clone());
    for v in st.vars.vars() {
        b = b.var(v);
    }
    if let Some(r) = &st.root {
        b = b.root(r);
    }
    for (&(i, j), (v, _)) in &st.brackets {
        b = b.bracket_entry(i, j, v.clone());
    }
    for (i, v, s) in &st.derivations {
        b = b.derivation(*i, v, s.clone());
    }
    if !st.conjugation.is_empty() || st.seen.contains("conjugation") {
        let mut c = Matrix::zeros(n, n);
        for j in 0..n {
            let img = st.conjugation.get(&j).ok_or_else(|| {
                ParseError::semantic(at(&st, "conjugation"), format!("conjugate of {} not given", basis.vector_names()[j]))
            })?;
            for (k, x) in img.components().into_iter().enumerate() {
                c.set(k, j, x);
            }
        }
        b = b.conjugation(c);
    }
    for (k, sec) in ["I", "J", "K"].iter().enumerate() {
        if !st.seen.contains(*sec) {
            continue;
        }
        let mut images = Vec::with_capacity(n);
        for j in 0..n {
            let img = st.structures[k].get(&j).ok_or_else(|| {
                ParseError::semantic(at(&st, sec), format!("{sec}({}) not given", basis.vector_names()[j]))
            })?;
            images.push(img.clone());
        }
        b = b.structure(k, LinearOperator::from_images(&basis, &images));
    }
    if let Some(m) = &st.metric {
        let mut g = Matrix::zeros(n, n);
        for (&(i, j), v) in m {
            g.set(i, j, v.clone());
            g.set(j, i, v.clone());
        }
        b = b.metric(g);
    }
    b.build().map_err(|e| {
        let sec = match &e {
            Error::InvalidContext(m) if m.contains("Jacobi") || m.contains("bracket") => "brackets",
            Error::InvalidContext(m) if m.contains("conjugation") => "conjugation",
            Error::InvalidContext(m) if m.contains("metric") => "metric",
            _ => "I",
        };
        ParseError::semantic(at(&st, sec), e.to_string())
    })
}

fn lincomb_text(x: &Multivector) -> String {
    let names = x.basis().vector_names();
    let parts: Vec<String> = x
        .terms()
        .map(|(blade, c)| {
            let n = &names[blade[0] as usize];
            if c.is_one() {
                n.clone()
            } else if (-c).is_one() {
                format!("-{n}")
            } else {
                format!("{}*{n}", coefficient_text(c))
            }
        })
        .collect();
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        match (k, p.strip_prefix('-')) {
            (0, _) => out.push_str(p),
            (_, Some(rest)) => out.push_str(&format!(" - {rest}")),
            (_, None) => out.push_str(&format!(" + {p}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Writes a context in the file format; `parse_context` reads it back.
pub fn write_context(ctx: &FrameContext) -> String {
    let mut out = format!("context {}\n", ctx.name());
    let basis = ctx.basis();
    let names = basis.vector_names();
    let vars: Vec<&Var> = ctx.vars().vars().collect();
    if !vars.is_empty() {
        out.push_str("[indeterminates]\n");
        let mut done = BTreeSet::new();
        for v in vars {
            if done.contains(v.name()) {
                continue;
            }
            match v.partner() {
                Some(p) if ctx.vars().get(p).is_some() => {
                    out.push_str(&format!("{} {p}\n", v.name()));
                    done.insert(p.to_string());
                }
                _ => out.push_str(&format!("{}\n", v.name())),
            }
            done.insert(v.name().to_string());
        }
    }
    if let Some(r) = ctx.root() {
        out.push_str(&format!("[roots]\n{}^2 = {}\n", r.symbol(), r.radicand()));
    }
    out.push_str("[basis]\n");
    for (v, c) in names.iter().zip(basis.covector_names()) {
        out.push_str(&format!("{v} {c}\n"));
    }
    if let Some(c) = ctx.conjugation() {
        out.push_str("[conjugation]\n");
        for (j, n) in names.iter().enumerate() {
            out.push_str(&format!("{n} -> {}\n", lincomb_text(&Multivector::from_components(basis, &c.col(j)))));
        }
    }
    let brackets: Vec<_> = ctx.bracket_table().collect();
    if !brackets.is_empty() {
        out.push_str("[brackets]\n");
        for (i, j, v) in brackets {
            out.push_str(&format!("[{}, {}] = {}\n", names[i], names[j], lincomb_text(v)));
        }
    }
    let derivations: Vec<_> = ctx.derivation_table().collect();
    if !derivations.is_empty() {
        out.push_str("[derivations]\n");
        for (i, v, s) in derivations {
            out.push_str(&format!("{}({v}) = {s}\n", names[i]));
        }
    }
    for (k, sec) in ["I", "J", "K"].iter().enumerate() {
        if let Some(op) = ctx.structure(k) {
            out.push_str(&format!("[{sec}]\n"));
            for (j, n) in names.iter().enumerate() {
                out.push_str(&format!("{n} -> {}\n", lincomb_text(&op.image(j))));
            }
        }
    }
    if let Some(g) = ctx.metric() {
        out.push_str("[metric]\n");
        for i in 0..g.rows() {
            for j in i..g.cols() {
                if !g.get(i, j).is_zero() {
                    out.push_str(&format!("g({}, {}) = {}\n", names[i], names[j], g.get(i, j)));
                }
            }
        }
    }
    out
}

/// Names of the contexts built into the tool.
pub const SHIPPED: &[&str] = &["su3", "sl2", "abelian2"];

/// A shipped context, built by the engine rather than read from a file.
pub fn shipped_context(name: &str) -> Option<hktlab_core::Result<FrameContext>> {
    Some(match name {
        "su3" => su3_structure(&Scalar::var(&param_a()), true),
        "sl2" => sl2_algebra().builder("sl2").and_then(|b| b.build()),
        "abelian2" => BasisSpec::new(vec!["X".into(), "Y".into()], vec!["dX".into(), "dY".into()])
            .and_then(|b| ContextBuilder::new("abelian2", b).build()),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ABELIAN: &str = "context abelian\n[basis]\nX\nY\n";

    #[test]
    fn abelian_context() {
        let ctx = parse_context(ABELIAN).unwrap();
        assert_eq!(ctx.dim(), 2);
        assert_eq!(ctx.bracket_table().count(), 0);
        assert_eq!(ctx.basis().covector_names(), ["dX", "dY"]);
    }

    #[test]
    fn brackets_and_round_trip() {
        let text = "context sl2 # comment\n[indeterminates]\nlam lamb\n[roots]\ns^2 = 1 + lam*lamb\n[basis]\nH eH\nE eE\nF eF\n[brackets]\n[H, E] = 2*E\n[H, F] = -2*F\n[E, F] = H\n[derivations]\nH(lam) = -2*lam\nE(lam) = 1\nF(lam) = -lam^2\n";
        let ctx = parse_context(text).unwrap();
        assert_eq!(ctx.lie_bracket(&ctx.vector("E").unwrap(), &ctx.vector("F").unwrap()).unwrap(), ctx.vector("H").unwrap());
        let again = parse_context(&write_context(&ctx)).unwrap();
        assert_eq!(again, ctx);
    }

    #[test]
    fn antisymmetry_failure_names_the_pair() {
        let text = "[basis]\nX\nY\n[brackets]\n[X, Y] = X\n[Y, X] = X\n";
        match parse_context(text).unwrap_err() {
            ParseError::Semantic { pos, message } => {
                assert_eq!(pos.line, 6);
                assert!(message.contains("(Y, X)"), "{message}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn jacobi_failure_is_semantic() {
        let text = "[basis]\nX\nY\nZ\n[brackets]\n[X, Y] = Y\n[Y, Z] = X\n";
        match parse_context(text).unwrap_err() {
            ParseError::Semantic { message, .. } => assert!(message.contains("Jacobi"), "{message}"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn syntax_errors_have_expectations() {
        match parse_context("[basis]\nX\n[brakets]\n").unwrap_err() {
            ParseError::Syntax { pos, expected, .. } => {
                assert_eq!(pos, Pos::new(3, 2));
                assert!(expected.contains(&"'brackets'".to_string()));
            }
            e => panic!("{e}"),
        }
        assert!(matches!(parse_context("[basis]\nX\n[brackets]\n[X, Q] = X\n"), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse_context("[basis]\nX\nY\n[brackets]\n[X, Y] = X*Y\n"), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse_context("[basis]\nX\n[I]\nX -> X\n"), Err(ParseError::Semantic { .. })));
    }
}
