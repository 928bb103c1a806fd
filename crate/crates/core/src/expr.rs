//! A small expression language for classes in an ambient space.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' '-'? int)?
//! atom   := int | int '/' int | ident | '(' expr ')'
//!         | 'exp(' expr ')' | 'integrate(' expr ')' | 'degree(' expr ',' int ')'
//! ```
//!
//! A rational literal `p/q` must be written without spaces; `p / q` parses as
//! a division. Both evaluate identically.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{GradedElement, Rational};
use crate::space::AmbientSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Literal(Rational),
    Generator(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Produced only by [`Expr::lower`].
    Inverse(Box<Expr>),
    Pow(Box<Expr>, i64),
    Exp(Box<Expr>),
    Integrate(Box<Expr>),
    DegreePart(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Rat(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Rat(q) => format!("rational {q}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_end = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                let end = digits_end(i);
                let numer: BigInt = src[i..end].parse().expect("ascii digits");
                // `p/q` with no whitespace is a single rational literal,
                // except in exponent position: `x^2/3` is `(x^2)/3`
                let exponent = matches!(
                    (out.iter().rev().nth(1), out.last()),
                    (_, Some((Tok::Caret, _))) | (Some((Tok::Caret, _)), Some((Tok::Minus, _)))
                );
                if !exponent
                    && end + 1 < bytes.len()
                    && bytes[end] == b'/'
                    && bytes[end + 1].is_ascii_digit()
                {
                    let dend = digits_end(end + 1);
                    let denom: BigInt = src[end + 1..dend].parse().expect("ascii digits");
                    if denom.is_zero() {
                        return Err(Error::Parse {
                            offset: end + 1,
                            expected: vec!["non-zero denominator".into()],
                            found: "0".into(),
                        });
                    }
                    i = dend;
                    out.push((Tok::Rat(Rational::new(numer, denom)), start));
                } else {
                    i = end;
                    out.push((Tok::Int(numer), start));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'.')
                {
                    j += 1;
                }
                i = j;
                out.push((Tok::Ident(src[start..j].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(Error::Parse {
                    offset: i,
                    expected: vec!["a token".into()],
                    found: format!("`{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const ATOM_START: &[&str] = &["integer", "rational", "identifier", "`(`", "`-`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let (tok, offset) = &self.toks[self.pos];
        Error::Parse {
            offset: *offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = self.int_literal()?;
        let n = i64::try_from(&n).map_err(|_| Error::Domain(format!("exponent {n} is too large")))?;
        Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
    }

    fn int_literal(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Literal(Rational::from_integer(n)))
            }
            Tok::Rat(q) => {
                self.bump();
                Ok(Expr::Literal(q))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if *self.peek2() == Tok::LParen && is_function(&name) => {
                self.bump();
                self.bump();
                let arg = self.expr()?;
                let node = match name.as_str() {
                    "exp" => Expr::Exp(Box::new(arg)),
                    "integrate" => Expr::Integrate(Box::new(arg)),
                    _ => {
                        self.expect(Tok::Comma, "`,`")?;
                        let k = self.int_literal()?;
                        let k = u32::try_from(&k)
                            .map_err(|_| Error::Domain(format!("degree {k} is out of range")))?;
                        Expr::DegreePart(Box::new(arg), k)
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(node)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Generator(name))
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

fn is_function(name: &str) -> bool {
    matches!(name, "exp" | "integrate" | "degree")
}

/// Parses a complete expression.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

impl Expr {
    /// Rewrites every `a / b` as `a * inverse(b)`.
    pub fn lower(&self) -> Expr {
        use Expr::*;
        let l = |e: &Expr| Box::new(e.lower());
        match self {
            Literal(_) | Generator(_) => self.clone(),
            Neg(a) => Neg(l(a)),
            Add(a, b) => Add(l(a), l(b)),
            Sub(a, b) => Sub(l(a), l(b)),
            Mul(a, b) => Mul(l(a), l(b)),
            Div(a, b) => Mul(l(a), Box::new(Inverse(l(b)))),
            Inverse(a) => Inverse(l(a)),
            Pow(a, n) => Pow(l(a), *n),
            Exp(a) => Exp(l(a)),
            Integrate(a) => Integrate(l(a)),
            DegreePart(a, k) => DegreePart(l(a), *k),
        }
    }
}

/// Fully parenthesized form; reparses to the same tree for any parser output.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(q) if q.is_negative() => write!(f, "(-{})", -q),
            Expr::Literal(q) => write!(f, "{q}"),
            Expr::Generator(name) => f.write_str(name),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Inverse(a) => write!(f, "(1 / {a})"),
            Expr::Pow(a, n) => match **a {
                Expr::Pow(..) => write!(f, "({a})^{n}"),
                _ => write!(f, "{a}^{n}"),
            },
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Integrate(a) => write!(f, "integrate({a})"),
            Expr::DegreePart(a, k) => write!(f, "degree({a}, {k})"),
        }
    }
}

/// Result of evaluating an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Element(GradedElement),
    Scalar(Rational),
}

impl Value {
    fn into_element(self, space: &AmbientSpace) -> GradedElement {
        match self {
            Value::Element(e) => e,
            Value::Scalar(q) => space.constant(q),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Element(e) => write!(f, "{e}"),
            Value::Scalar(q) => write!(f, "{q}"),
        }
    }
}

/// Evaluates `ast` in `space`. `integrate(...)` yields a scalar; scalars are
/// promoted to constants when combined with classes.
pub fn evaluate(ast: &Expr, space: &AmbientSpace) -> Result<Value> {
    eval_lowered(&ast.lower(), space)
}

fn eval_lowered(ast: &Expr, space: &AmbientSpace) -> Result<Value> {
    let elem = |e: &Expr| eval_lowered(e, space).map(|v| v.into_element(space));
    let binary = |a: &Expr, b: &Expr, op: fn(&GradedElement, &GradedElement) -> Result<GradedElement>| {
        let (va, vb) = (eval_lowered(a, space)?, eval_lowered(b, space)?);
        match (va, vb) {
            (Value::Scalar(x), Value::Scalar(y)) => {
                let r = op(&space.constant(x), &space.constant(y))?;
                Ok(Value::Scalar(r.constant_term()))
            }
            (x, y) => Ok(Value::Element(op(&x.into_element(space), &y.into_element(space))?)),
        }
    };
    match ast {
        Expr::Literal(q) => Ok(Value::Element(space.constant(q.clone()))),
        Expr::Generator(name) => space.generator(name).map(Value::Element),
        Expr::Neg(a) => Ok(match eval_lowered(a, space)? {
            Value::Scalar(q) => Value::Scalar(-q),
            Value::Element(e) => Value::Element(-e),
        }),
        Expr::Add(a, b) => binary(a, b, GradedElement::checked_add),
        Expr::Sub(a, b) => binary(a, b, GradedElement::checked_sub),
        Expr::Mul(a, b) => binary(a, b, GradedElement::checked_mul),
        Expr::Div(..) => eval_lowered(&ast.lower(), space),
        Expr::Inverse(a) => {
            let v = elem(a)?;
            v.inverse()
                .map(Value::Element)
                .map_err(|_| Error::NonInvertible(format!("division by non-unit `{v}`")))
        }
        Expr::Pow(a, n) => elem(a)?.pow_int(*n).map(Value::Element),
        Expr::Exp(a) => elem(a)?.exp().map(Value::Element),
        Expr::Integrate(a) => space.integrate(&elem(a)?).map(Value::Scalar),
        Expr::DegreePart(a, k) => elem(a)?.degree_part(*k).map(Value::Element),
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str, space: &AmbientSpace) -> Result<Value> {
    evaluate(&parse(src)?, space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    fn lit(n: i64) -> Expr {
        Expr::Literal(rat(n))
    }

    fn gen(s: &str) -> Expr {
        Expr::Generator(s.into())
    }

    #[test]
    fn parse_examples() {
        let e = parse("(1+x)^-2 * exp(-theta/(1+x))").unwrap();
        let one_x = Expr::Add(b(lit(1)), b(gen("x")));
        let expect = Expr::Mul(
            b(Expr::Pow(b(one_x.clone()), -2)),
            b(Expr::Exp(b(Expr::Div(b(Expr::Neg(b(gen("theta")))), b(one_x.clone()))))),
        );
        assert_eq!(e, expect);
        let lowered = Expr::Mul(
            b(Expr::Pow(b(one_x.clone()), -2)),
            b(Expr::Exp(b(Expr::Mul(
                b(Expr::Neg(b(gen("theta")))),
                b(Expr::Inverse(b(one_x))),
            )))),
        );
        assert_eq!(e.lower(), lowered);

        assert_eq!(
            parse("integrate(theta^2 * x)").unwrap(),
            Expr::Integrate(b(Expr::Mul(b(Expr::Pow(b(gen("theta")), 2)), b(gen("x")))))
        );
    }

    #[test]
    fn parse_errors_are_located() {
        match parse("1+").unwrap_err() {
            Error::Parse { offset, expected, .. } => {
                assert_eq!(offset, 2);
                assert!(expected.contains(&"identifier".to_string()));
            }
            e => panic!("unexpected {e:?}"),
        }
        for (src, at) in [("(x", 2), ("x^y", 2), ("degree(x)", 8), ("x $ y", 2), ("x y", 2), ("1/0", 2)] {
            match parse(src) {
                Err(Error::Parse { offset, .. }) => assert_eq!(offset, at, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(b(Expr::Pow(b(gen("x")), 2)))
        );
        assert_eq!(
            parse("1 - x - theta").unwrap(),
            Expr::Sub(b(Expr::Sub(b(lit(1)), b(gen("x")))), b(gen("theta")))
        );
        assert_eq!(
            parse("x / 2 * y").unwrap(),
            Expr::Mul(b(Expr::Div(b(gen("x")), b(lit(2)))), b(gen("y")))
        );
        assert_eq!(
            parse("1/2*x").unwrap(),
            Expr::Mul(b(Expr::Literal(Rational::new(1.into(), 2.into()))), b(gen("x")))
        );
        assert_eq!(parse("p1.h").unwrap(), gen("p1.h"));
        assert_eq!(
            parse("x^2/3").unwrap(),
            Expr::Div(b(Expr::Pow(b(gen("x")), 2)), b(lit(3)))
        );
        assert_eq!(
            parse("x^-2/3").unwrap(),
            Expr::Div(b(Expr::Pow(b(gen("x")), -2)), b(lit(3)))
        );
        // function names without parentheses are plain identifiers
        assert_eq!(parse("exp").unwrap(), gen("exp"));
    }

    #[test]
    fn evaluate_examples() {
        let cd = AmbientSpace::symmetric_product(4, 3);
        assert_eq!(eval_str("integrate(theta^2*x)", &cd).unwrap(), Value::Scalar(rat(12)));

        let jac = AmbientSpace::jacobian(3);
        assert_eq!(eval_str("integrate(exp(2*theta))", &jac).unwrap(), Value::Scalar(rat(8)));

        assert!(matches!(eval_str("x/ x", &cd), Err(Error::NonInvertible(_))));
        assert!(matches!(eval_str("y + 1", &cd), Err(Error::UnknownGenerator { .. })));
        assert!(matches!(eval_str("exp(1 + x)", &cd), Err(Error::Domain(_))));
        assert!(eval_str("degree(x, 4)", &cd).is_err());

        let v = eval_str("degree((1+x)^3, 2)", &cd).unwrap();
        assert_eq!(v.to_string(), "3 * x^2");
        // literals are classes, so the sum is the constant class 3/2
        let v = eval_str("integrate(x^3) + 1/2", &cd).unwrap();
        assert_eq!(v, Value::Element(cd.constant(Rational::new(3.into(), 2.into()))));
        assert_eq!(eval_str("integrate(x^3) * integrate(theta*x^2)", &cd).unwrap(), Value::Scalar(rat(4)));
    }

    #[test]
    fn evaluates_on_products() {
        let sp = AmbientSpace::parse("P(1)xCd(3,1)").unwrap();
        let v = eval_str("integrate((p1.h + p2.x)^2)", &sp).unwrap();
        assert_eq!(v, Value::Scalar(rat(2)));
    }

    #[test]
    fn print_reparses() {
        for src in [
            "(1+x)^-2 * exp(-theta/(1+x))",
            "integrate(theta^2 * x)",
            "degree(exp(2*theta), 3) - 1/2 * x^2",
            "-(-x)^3 / (1 - 2/3*theta)",
            "(x^2)^3",
            "1 / 2",
        ] {
            let ast = parse(src).unwrap();
            assert_eq!(parse(&ast.to_string()).unwrap(), ast, "{src}");
        }
    }
}
