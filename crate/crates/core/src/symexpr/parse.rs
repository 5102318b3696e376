//! Recursive-descent parser for the expression DSL.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | ident | ident '[' names ']' | '(' expr ')'
//! ```
//!
//! `q_tt` is sugar for `q[t,t]` when every base coordinate name is a single
//! character.

use num_bigint::BigInt;

use super::{BundleSpec, Expr, Rational, Var};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

fn err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().unwrap()), start));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => return Err(err(start, format!("unexpected character {other:?}"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    spec: &'a BundleSpec,
}

/// Parses `src` into canonical form against the coordinates of `spec`.
pub fn parse(src: &str, spec: &BundleSpec) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        spec,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(err(p.offset(), "unexpected trailing input")),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(err(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let at = self.offset();
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| err(at, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let at = self.offset();
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let exp_at = self.offset();
        let n = match self.bump().0 {
            Tok::Int(n) => n,
            _ => return Err(err(exp_at, "expected integer exponent")),
        };
        let n: i32 = n.try_into().map_err(|_| err(exp_at, "exponent too large"))?;
        let n = if negative { -n } else { n };
        base.pow(n).map_err(|_| err(at, "zero raised to a negative power"))
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::constant(Rational::from_integer(n))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LBracket {
                    self.bump();
                    self.bracket_jet(&name, at)
                } else {
                    self.resolve(&name, at)
                }
            }
            Tok::End => Err(err(at, "unexpected end of input")),
            other => Err(err(at, format!("unexpected token {other:?}"))),
        }
    }

    fn bracket_jet(&mut self, name: &str, at: usize) -> Result<Expr> {
        let field = self
            .spec
            .field_index(name)
            .ok_or_else(|| err(at, format!("{name} is not a fibre field; only fields take jet indices")))?;
        let mut index = self.spec.empty_index();
        if *self.peek() == Tok::RBracket {
            return Err(err(self.offset(), "malformed jet index: empty brackets"));
        }
        loop {
            let (tok, p) = self.bump();
            let dir = match tok {
                Tok::Ident(d) => self
                    .spec
                    .base()
                    .index_of(&d)
                    .ok_or_else(|| err(p, format!("unknown base coordinate {d}")))?,
                _ => return Err(err(p, "malformed jet index: expected base coordinate")),
            };
            index = index.plus(dir);
            match self.bump() {
                (Tok::Comma, _) => continue,
                (Tok::RBracket, _) => break,
                (_, p) => return Err(err(p, "malformed jet index: expected ',' or ']'")),
            }
        }
        Ok(Expr::jet(field, index))
    }

    fn resolve(&self, name: &str, at: usize) -> Result<Expr> {
        let spec = self.spec;
        if let Some(d) = spec.base().index_of(name) {
            return Ok(Expr::base(d));
        }
        if let Some(f) = spec.field_index(name) {
            return Ok(spec.field_expr(f));
        }
        if let Some(a) = spec.atom_index(name) {
            return Ok(Expr::var(Var::Atom(a as u16)));
        }
        if let Some(split) = name.rfind('_') {
            let (head, suffix) = (&name[..split], &name[split + 1..]);
            if let Some(f) = spec.field_index(head) {
                return self.subscript_jet(f, suffix, at + split + 1);
            }
        }
        Err(err(at, format!("unknown identifier {name}")))
    }

    fn subscript_jet(&self, field: usize, suffix: &str, at: usize) -> Result<Expr> {
        let base = self.spec.base();
        if base.names().iter().any(|n| n.chars().count() != 1) {
            return Err(err(
                at,
                "subscript jet notation needs single-character base names; use field[a,b]",
            ));
        }
        if suffix.is_empty() {
            return Err(err(at, "malformed jet index: empty subscript"));
        }
        let mut index = MultiIndex::empty(base.dim());
        for (k, c) in suffix.chars().enumerate() {
            let d = base
                .index_of(&c.to_string())
                .ok_or_else(|| err(at + k, format!("unknown base coordinate {c}")))?;
            index = index.plus(d);
        }
        Ok(Expr::jet(field, index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mech() -> BundleSpec {
        BundleSpec::simple(&["t"], &["q"]).unwrap()
    }

    #[test]
    fn subscript_sugar() {
        let spec = mech();
        let e = parse("q_t^2 / 2", &spec).unwrap();
        let qt = Expr::jet(0, MultiIndex::unit(1, 0));
        assert_eq!(e, qt.mul(&qt).scale(&Rational::new(1.into(), 2.into())));
        assert_eq!(parse("q_tt", &spec).unwrap(), parse("q[t,t]", &spec).unwrap());
    }

    #[test]
    fn symmetric_brackets_cancel() {
        let spec = BundleSpec::simple(&["t", "x"], &["u"]).unwrap();
        assert!(parse("u[t,x] - u[x,t]", &spec).unwrap().is_zero());
    }

    #[test]
    fn unknown_base_coordinate() {
        let e = parse("q_z", &mech()).unwrap_err();
        match e {
            Error::Parse { pos, message } => {
                assert_eq!(pos, 2);
                assert!(message.contains("unknown base coordinate z"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let spec = mech();
        assert!(matches!(parse("q +", &spec), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse("w", &spec), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse("q[]", &spec), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse("t[t]", &spec), Err(Error::Parse { .. })));
        assert!(matches!(parse("1/(q-q)", &spec), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse("q $", &spec), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn precedence() {
        let spec = mech();
        assert_eq!(parse("-q^2", &spec).unwrap(), parse("-(q*q)", &spec).unwrap());
        assert_eq!(parse("1/2*q", &spec).unwrap(), parse("q/2", &spec).unwrap());
        assert_eq!(parse("q^-1*q", &spec).unwrap(), Expr::one());
        assert_eq!(parse("2^3", &spec).unwrap(), Expr::int(8));
    }

    #[test]
    fn long_base_names_disable_sugar() {
        let spec = BundleSpec::simple(&["time"], &["q"]).unwrap();
        assert!(parse("q_time", &spec).is_err());
        assert!(parse("q[time]", &spec).is_ok());
    }

    #[test]
    fn underscored_names_resolve_before_sugar() {
        let mut spec = BundleSpec::simple(&["t"], &["q1"]).unwrap();
        spec.declare_atom("r_inv", "").unwrap();
        assert_eq!(parse("r_inv", &spec).unwrap(), Expr::atom(0));
        assert_eq!(parse("q1_t", &spec).unwrap(), Expr::jet(0, MultiIndex::unit(1, 0)));
    }
}
