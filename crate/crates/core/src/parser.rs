//! Text syntax for polynomials over ℚ(i).
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := "-" unary | "+" unary | power
//! power  := atom ("^" INT)?
//! atom   := INT ("/" INT)? | "i" | "~"? IDENT | "(" expr ")"
//! ```
//!
//! `~zk` and `wk` both denote the k-th conjugate coordinate. Implicit
//! multiplication is rejected, exponents are integers up to 64.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::context::VarContext;
use crate::gaussian::GaussianRational;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

pub const MAX_EXPONENT: u32 = 64;
/// Bound on any exponent produced while lowering (guards `(z1^64)^64`-style input).
const MAX_RESULT_DEGREE: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownVariable,
    ExponentOverflow,
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Syntax tree of a polynomial expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(GaussianRational),
    Var { name: String, conj: bool, pos: Pos },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32, Pos),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Tilde,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Tilde => "`~`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn err(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '~' => Some(Tok::Tilde),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            col += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(s), pos));
        } else {
            return Err(err(
                ParseErrorKind::Syntax,
                pos,
                format!("unexpected character `{c}`"),
            ));
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expected(&self, what: &str) -> ParseError {
        err(
            ParseErrorKind::Syntax,
            self.pos(),
            format!("expected {what}, found {}", describe(self.peek())),
        )
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
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

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::Tilde | Tok::LParen => {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        self.pos(),
                        "implicit multiplication is not supported; use `*`",
                    ))
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, caret_pos) = self.bump();
        match self.bump() {
            (Tok::Int(n), pos) => {
                let e: u32 = match u32::try_from(&n) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => {
                        return Err(err(
                            ParseErrorKind::ExponentOverflow,
                            pos,
                            format!("exponent {n} exceeds the maximum of {MAX_EXPONENT}"),
                        ))
                    }
                };
                if *self.peek() == Tok::Caret {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        self.pos(),
                        "chained `^` is ambiguous; use parentheses",
                    ));
                }
                Ok(Expr::Pow(Box::new(base), e, caret_pos))
            }
            (t, pos) => Err(err(
                ParseErrorKind::Syntax,
                pos,
                format!("expected integer exponent, found {}", describe(&t)),
            )),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            (Tok::Int(n), _) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        (Tok::Int(d), pos) => {
                            if d.is_zero() {
                                return Err(err(
                                    ParseErrorKind::DivisionByZero,
                                    pos,
                                    "zero denominator",
                                ));
                            }
                            Ok(Expr::Num(GaussianRational::real(BigRational::new(n, d))))
                        }
                        (t, pos) => Err(err(
                            ParseErrorKind::Syntax,
                            pos,
                            format!(
                                "`/` is only allowed between integer literals, found {}",
                                describe(&t)
                            ),
                        )),
                    }
                } else {
                    Ok(Expr::Num(GaussianRational::real(BigRational::from_integer(n))))
                }
            }
            (Tok::Ident(s), pos) => {
                if s == "i" {
                    Ok(Expr::Num(GaussianRational::i()))
                } else {
                    Ok(Expr::Var {
                        name: s,
                        conj: false,
                        pos,
                    })
                }
            }
            (Tok::Tilde, _) => match self.bump() {
                (Tok::Ident(s), pos) if s != "i" => Ok(Expr::Var {
                    name: s,
                    conj: true,
                    pos,
                }),
                (t, pos) => Err(err(
                    ParseErrorKind::Syntax,
                    pos,
                    format!("expected variable after `~`, found {}", describe(&t)),
                )),
            },
            (Tok::LParen, _) => {
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.expected("`)`"));
                }
                self.bump();
                Ok(e)
            }
            (t, pos) => Err(err(
                ParseErrorKind::Syntax,
                pos,
                format!("expected a number, variable or `(`, found {}", describe(&t)),
            )),
        }
    }
}

/// Parses text into an expression tree without resolving variables.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    if *p.peek() == Tok::Eof {
        return Err(p.expected("an expression"));
    }
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.expected("an operator or end of input"));
    }
    Ok(e)
}

/// Resolves variables against `ctx` and expands to a polynomial.
pub fn lower(e: &Expr, ctx: &Arc<VarContext>) -> Result<Polynomial, ParseError> {
    Ok(match e {
        Expr::Num(c) => Polynomial::constant(ctx, c.clone()),
        Expr::Var { name, conj, pos } => {
            let idx = ctx.lookup(name, *conj).ok_or_else(|| {
                let shown = if *conj { format!("~{name}") } else { name.clone() };
                err(
                    ParseErrorKind::UnknownVariable,
                    *pos,
                    format!("unknown variable `{shown}`"),
                )
            })?;
            Polynomial::var(ctx, idx).expect("lookup returns valid index")
        }
        Expr::Neg(a) => -&lower(a, ctx)?,
        Expr::Add(a, b) => &lower(a, ctx)? + &lower(b, ctx)?,
        Expr::Sub(a, b) => &lower(a, ctx)? - &lower(b, ctx)?,
        Expr::Mul(a, b) => {
            let p = &lower(a, ctx)? * &lower(b, ctx)?;
            check_degree(&p, None)?;
            p
        }
        Expr::Pow(a, k, pos) => {
            let base = lower(a, ctx)?;
            let bound = base
                .terms()
                .iter()
                .flat_map(|(m, _)| m.exponents().iter().copied())
                .max()
                .unwrap_or(0) as u64
                * *k as u64;
            if bound > MAX_RESULT_DEGREE as u64 {
                return Err(err(
                    ParseErrorKind::ExponentOverflow,
                    *pos,
                    "resulting exponent too large",
                ));
            }
            base.pow(*k)
        }
    })
}

fn check_degree(p: &Polynomial, pos: Option<Pos>) -> Result<(), ParseError> {
    let too_big = p
        .terms()
        .iter()
        .any(|(m, _)| m.exponents().iter().any(|&e| e > MAX_RESULT_DEGREE));
    if too_big {
        let pos = pos.unwrap_or(Pos { line: 1, column: 1 });
        return Err(err(
            ParseErrorKind::ExponentOverflow,
            pos,
            "resulting exponent too large",
        ));
    }
    Ok(())
}

/// Parses and lowers a polynomial in the given context.
pub fn parse_poly(src: &str, ctx: &Arc<VarContext>) -> Result<Polynomial, ParseError> {
    lower(&parse_expr(src)?, ctx)
}

pub fn print_poly_with(p: &Polynomial, name: impl Fn(usize) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let ctx = p.context();
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let mono = print_monomial(ctx, m, &name);
        let text = if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            mono
        } else if *c == -GaussianRational::one() {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        };
        if idx > 0 && !text.starts_with('-') {
            out.push('+');
        }
        out.push_str(&text);
    }
    out
}

fn print_monomial(ctx: &VarContext, m: &Monomial, name: &impl Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for &v in ctx.canonical_priority() {
        match m.get(v) {
            0 => {}
            1 => parts.push(name(v)),
            e => parts.push(format!("{}^{e}", name(v))),
        }
    }
    parts.join("*")
}

/// Canonical text with internal variable names (`z3`, `w3`, auxiliaries).
/// Round-trips through [`parse_poly`].
pub fn print_poly(p: &Polynomial) -> String {
    let ctx = p.context().clone();
    print_poly_with(p, |v| ctx.name(v))
}

/// Text using the context's display names (`~u` for a conjugate).
pub fn print_poly_display(p: &Polynomial) -> String {
    let ctx = p.context().clone();
    print_poly_with(p, |v| ctx.display_name(v))
}

/// Canonical names unless the context carries custom display names.
pub fn print_poly_auto(p: &Polynomial) -> String {
    if p.context().has_custom_names() {
        print_poly_display(p)
    } else {
        print_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_poly;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example_generator() {
        let ctx = VarContext::zw(4);
        let p = parse_poly("~z3*z2 - ~z2*z3", &ctx).unwrap();
        let expect = &(&Polynomial::w(&ctx, 2) * &Polynomial::z(&ctx, 1))
            - &(&Polynomial::w(&ctx, 1) * &Polynomial::z(&ctx, 2));
        assert_eq!(p, expect);
        assert_eq!(print_poly(&p), "w3*z2-w2*z3");
    }

    #[test]
    fn zero_and_variable() {
        let ctx = VarContext::z_only(2);
        let zero = parse_poly("0", &ctx).unwrap();
        assert!(zero.is_zero());
        assert_eq!(print_poly(&zero), "0");
        assert_eq!(print_poly(&Polynomial::z(&ctx, 0)), "z1");
    }

    #[test]
    fn square_with_i_matches_arith() {
        let ctx = VarContext::z_only(1);
        let p = parse_poly("(z1+i)^2", &ctx).unwrap();
        let base = &Polynomial::z(&ctx, 0) + &Polynomial::constant(&ctx, GaussianRational::i());
        assert_eq!(p, &base * &base);
        assert_eq!(print_poly(&p), "z1^2+2*i*z1-1");
    }

    #[test]
    fn precedence() {
        let ctx = VarContext::z_only(2);
        // ^ binds tighter than unary minus
        let p = parse_poly("-z1^2", &ctx).unwrap();
        assert_eq!(p, -&(&Polynomial::z(&ctx, 0) * &Polynomial::z(&ctx, 0)));
        let q = parse_poly("1 - 2*z1*z2 + 3", &ctx).unwrap();
        assert_eq!(print_poly(&q), "-2*z1*z2+4");
        let r = parse_poly("-1/2*z1", &ctx).unwrap();
        assert_eq!(print_poly(&r), "-1/2*z1");
    }

    #[test]
    fn errors_carry_positions() {
        let ctx = VarContext::z_only(2);
        let e = parse_poly("z1 z2", &ctx).unwrap_err();
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::Syntax, 1, 4));
        let e = parse_poly("z1 +\n  z9", &ctx).unwrap_err();
        assert_eq!(
            (e.kind, e.line, e.column),
            (ParseErrorKind::UnknownVariable, 2, 3)
        );
        let e = parse_poly("z1^65", &ctx).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ExponentOverflow);
        let e = parse_poly("~z1", &ctx).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable);
        let e = parse_poly("1/0", &ctx).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByZero);
        assert!(parse_poly("z1/z2", &ctx).is_err());
        assert!(parse_poly("(z1", &ctx).is_err());
        assert!(parse_poly("", &ctx).is_err());
        assert!(parse_poly("z1^2^2", &ctx).is_err());
        assert!(parse_poly("z1 # 2", &ctx).is_err());
    }

    #[test]
    fn exponent_blowup_is_rejected() {
        let ctx = VarContext::z_only(1);
        let e = parse_poly("((z1^64)^64)^64", &ctx).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ExponentOverflow);
    }

    #[test]
    fn display_names_and_conjugates() {
        let ctx = VarContext::new(1, true, vec!["u".into()], vec![]).unwrap();
        let p = parse_poly("u - ~u", &ctx).unwrap();
        assert_eq!(print_poly(&p), "-w1+z1");
        assert_eq!(print_poly_display(&p), "-~u+u");
        assert_eq!(parse_poly(&print_poly_display(&p), &ctx).unwrap(), p);
    }

    #[test]
    fn round_trip_200_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..200 {
            let n = 1 + k % 5;
            let ctx = if k % 2 == 0 {
                VarContext::zw((n + 1) / 2)
            } else {
                VarContext::z_only(n)
            };
            let p = random_poly(&mut rng, &ctx, 6, 8);
            let text = print_poly(&p);
            assert_eq!(parse_poly(&text, &ctx).unwrap(), p, "{text}");
        }
    }

    proptest! {
        #[test]
        fn never_panics(s in "[ z0-9wi~+*^()/\\-\n]{0,40}") {
            let ctx = VarContext::zw(3);
            let _ = parse_poly(&s, &ctx);
        }
    }
}
