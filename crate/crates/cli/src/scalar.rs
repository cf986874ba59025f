//! Scalar literals: Gaussian rationals, `i`, indeterminates, the root
//! symbol, `+ - * / ^` and parentheses.

use hktlab_core::{Scalar, VarTable};

use crate::lex::{tokenize, Cursor, ParseError, ParseResult, Pos, Tok};

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 64;

/// Resolves names that are not indeterminates (for example frame names
/// inside a linear combination).
pub type Resolver<'a> = &'a dyn Fn(&str) -> Option<Scalar>;

pub fn parse_scalar(text: &str, vars: &VarTable) -> ParseResult<Scalar> {
    parse_scalar_at(text, vars, Pos::new(1, 1))
}

pub fn parse_scalar_at(text: &str, vars: &VarTable, origin: Pos) -> ParseResult<Scalar> {
    let toks = tokenize(text, origin)?;
    let end = Pos::new(origin.line, origin.col + text.chars().count());
    let mut cur = Cursor::new(&toks, end);
    let s = ScalarParser { vars, extra: &|_| None, depth: 0 }.expr(&mut cur)?;
    cur.expect_end()?;
    Ok(s)
}

/// Parses the whole token slice as one scalar expression.
pub fn parse_tokens(toks: &[(Tok, Pos)], end: Pos, vars: &VarTable, extra: Resolver<'_>) -> ParseResult<Scalar> {
    let mut cur = Cursor::new(toks, end);
    let s = ScalarParser { vars, extra, depth: 0 }.expr(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error(&["'+'", "'-'", "'*'", "'/'", "end of expression"]));
    }
    Ok(s)
}

fn integer(digits: &str) -> Scalar {
    let ten = Scalar::from_int(10);
    digits.chars().fold(Scalar::zero(), |acc, d| acc * &ten + Scalar::from_int(i64::from(d as u8 - b'0')))
}

struct ScalarParser<'a> {
    vars: &'a VarTable,
    extra: Resolver<'a>,
    depth: usize,
}

impl ScalarParser<'_> {
    fn expr(&mut self, cur: &mut Cursor<'_>) -> ParseResult<Scalar> {
        let mut acc = self.term(cur)?;
        loop {
            if cur.eat_op('+') {
                acc = acc + self.term(cur)?;
            } else if cur.eat_op('-') {
                acc = acc - self.term(cur)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, cur: &mut Cursor<'_>) -> ParseResult<Scalar> {
        let mut acc = self.unary(cur)?;
        loop {
            if cur.eat_op('*') {
                acc = acc * self.unary(cur)?;
            } else if cur.peek() == Some(&Tok::Op('/')) {
                let pos = cur.pos();
                cur.bump();
                let d = self.unary(cur)?;
                acc = acc.checked_div(&d).map_err(|_| ParseError::semantic(pos, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self, cur: &mut Cursor<'_>) -> ParseResult<Scalar> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::semantic(cur.pos(), "expression nested too deeply"));
        }
        let r = if cur.eat_op('-') {
            self.unary(cur).map(|x| -x)
        } else if cur.eat_op('+') {
            self.unary(cur)
        } else {
            self.power(cur)
        };
        self.depth -= 1;
        r
    }

    fn power(&mut self, cur: &mut Cursor<'_>) -> ParseResult<Scalar> {
        let base = self.atom(cur)?;
        if !cur.eat_op('^') {
            return Ok(base);
        }
        let neg = cur.eat_op('-');
        let pos = cur.pos();
        let e = match cur.peek() {
            Some(Tok::Num(d)) => {
                cur.bump();
                d.parse::<u32>().ok().filter(|&e| e <= MAX_EXPONENT).ok_or_else(|| {
                    ParseError::semantic(pos, format!("exponent must be at most {MAX_EXPONENT}"))
                })?
            }
            _ => return Err(cur.error(&["integer exponent"])),
        };
        let e = if neg { -(e as i32) } else { e as i32 };
        base.pow(e).map_err(|_| ParseError::semantic(pos, "zero raised to a negative power"))
    }

    fn atom(&mut self, cur: &mut Cursor<'_>) -> ParseResult<Scalar> {
        let pos = cur.pos();
        match cur.peek() {
            Some(Tok::Num(d)) => {
                cur.bump();
                Ok(integer(d))
            }
            Some(Tok::Ident(name)) => {
                cur.bump();
                if name == "i" {
                    return Ok(Scalar::i());
                }
                self.vars
                    .lookup(name)
                    .or_else(|| (self.extra)(name))
                    .ok_or_else(|| ParseError::semantic(pos, format!("unknown symbol {name}")))
            }
            Some(Tok::Op('(')) => {
                cur.bump();
                let inner = self.expr(cur)?;
                cur.expect_op(')')?;
                Ok(inner)
            }
            _ => Err(cur.error(&["number", "name", "'('", "'-'"])),
        }
    }
}

/// Text of a coefficient that can be followed by `*NAME`.
pub fn coefficient_text(c: &Scalar) -> String {
    let t = c.to_string();
    if t.contains([' ', '/']) {
        format!("({t})")
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hktlab_core::Var;

    fn table() -> VarTable {
        let mut t = VarTable::new();
        let (l, lb) = Var::pair("lam", "lamb");
        t.insert(l);
        t.insert(lb);
        t.insert(Var::real("a"));
        t
    }

    #[test]
    fn precedence_and_powers() {
        let t = table();
        let a = Scalar::var(&Var::real("a"));
        assert_eq!(parse_scalar("1+i*a", &t).unwrap(), Scalar::one() + Scalar::i() * &a);
        assert_eq!(parse_scalar("-a^2/2", &t).unwrap(), -(&a * &a) * Scalar::ratio(1, 2));
        assert_eq!(parse_scalar("2^-1", &t).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(parse_scalar("x/2*a", &t).unwrap_err().pos(), Pos::new(1, 1));
    }

    #[test]
    fn printed_scalars_parse_back() {
        let t = table();
        for text in ["(1/2 + 3*i)*lam^2 - lam*lamb/(1 + lam*lamb)", "((-3/2 + 3/2*i)*a - 1/2*i)/a", "-i*a + 7/3", "(2*lam)/(a^2*lamb)"] {
            let s = parse_scalar(text, &t).unwrap();
            assert_eq!(parse_scalar(&s.to_string(), &t).unwrap(), s, "{text} printed as {s}");
        }
    }

    #[test]
    fn errors_carry_positions_and_expectations() {
        let t = table();
        match parse_scalar("1 + * a", &t).unwrap_err() {
            ParseError::Syntax { pos, expected, found } => {
                assert_eq!(pos, Pos::new(1, 5));
                assert!(expected.contains(&"number".to_string()));
                assert_eq!(found, "'*'");
            }
            e => panic!("{e}"),
        }
        assert!(matches!(parse_scalar("a/(lam - lam)", &t), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse_scalar("(a", &t), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_scalar("a^999", &t), Err(ParseError::Semantic { .. })));
    }
}
