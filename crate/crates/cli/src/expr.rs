//! Expression language for polynomial and rational inputs.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)*
//! atom    := NUMBER ['i'] | 'i' | 'z' | '(' expr ')'
//!          | 'fall' '(' expr ',' ['-'] INT ')'
//!          | 'shift' '(' expr ',' expr ')'
//!          | 'delta' '(' expr [',' INT] ')'
//! ```

use std::collections::BTreeSet;
use std::fmt;

use diffnev_core::scalar::parse_rational;
use diffnev_core::{ExactPoly, ExactRational, GaussianRational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(GaussianRational),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `n < 0` is the reciprocal rising form `1/(f(z) f(z+1) ⋯ f(z-n-1))`.
    Fall(Box<Expr>, i32),
    Shift(Box<Expr>, Box<Expr>),
    Delta(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.iter().cloned().collect::<Vec<_>>().join(" or "))]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: BTreeSet<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shift amount must be a constant, got {0}")]
    NonConstantShift(String),
    #[error("expected a polynomial, got {0}")]
    NotPolynomial(String),
    #[error("expected a constant, got {0}")]
    NotConstant(String),
    #[error("fall needs a nonzero n")]
    ZeroFall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number `{s}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            // an `i` directly after the digits is the imaginary suffix
            if i < bytes.len() && bytes[i] == b'i' && !bytes.get(i + 1).is_some_and(u8::is_ascii_alphanumeric) {
                i += 1;
            }
            out.push((start, Tok::Num(src[start..i].to_string())));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if b"+-*/^(),".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("in bounds");
            return Err(SyntaxError {
                offset: i,
                expected: ["expression".to_string()].into(),
                found: format!("`{ch}`"),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[&format!("`{c}`")])
        }
    }

    fn int(&mut self) -> Result<u32, SyntaxError> {
        if let Tok::Num(s) = self.peek() {
            if let Ok(n) = s.parse::<u32>() {
                self.pos += 1;
                return Ok(n);
            }
        }
        self.fail(&["nonnegative integer"])
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let mut base = self.atom()?;
        while self.eat('^') {
            base = Expr::Pow(Box::new(base), self.int()?);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        const ATOM: &[&str] = &["number", "`z`", "`i`", "`(`", "`fall`", "`shift`", "`delta`", "`-`"];
        match self.peek().clone() {
            Tok::Num(s) => {
                let (digits, imag) = match s.strip_suffix('i') {
                    Some(d) => (d, true),
                    None => (s.as_str(), false),
                };
                let Some(q) = parse_rational(digits) else { return self.fail(&["number"]) };
                self.pos += 1;
                let zero = BigRational::zero();
                Ok(Expr::Num(if imag { GaussianRational::new(zero, q) } else { GaussianRational::new(q, zero) }))
            }
            Tok::Ident(id) => {
                self.pos += 1;
                match id.as_str() {
                    "z" => Ok(Expr::Var),
                    "i" => Ok(Expr::Num(GaussianRational::i())),
                    "fall" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(',')?;
                        let neg = self.eat('-');
                        let n = self.int()?;
                        let Ok(n) = i32::try_from(n) else {
                            return self.fail(&["smaller integer"]);
                        };
                        self.expect(')')?;
                        Ok(Expr::Fall(Box::new(e), if neg { -n } else { n }))
                    }
                    "shift" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(',')?;
                        let c = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Shift(Box::new(e), Box::new(c)))
                    }
                    "delta" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        let n = if self.eat(',') { self.int()? } else { 1 };
                        self.expect(')')?;
                        Ok(Expr::Delta(Box::new(e), n))
                    }
                    _ => {
                        self.pos -= 1;
                        self.fail(ATOM)
                    }
                }
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.fail(ATOM),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(e)
}

/// Finite decimal text of a rational whose denominator divides a power of
/// ten, or `None`.
fn decimal(q: &BigRational) -> Option<String> {
    let mut d = q.denom().clone();
    let mut places = 0usize;
    let (two, five, ten) = (BigInt::from(2), BigInt::from(5), BigInt::from(10));
    while !d.is_one() {
        if (&d % &two).is_zero() {
            d /= &two;
        } else if (&d % &five).is_zero() {
            d /= &five;
        } else {
            return None;
        }
        places += 1;
    }
    let scaled = q * BigRational::from_integer(num_traits::pow(ten, places));
    let digits = scaled.to_integer().abs().to_string();
    if places == 0 {
        return Some(digits);
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    Some(format!("{int}.{frac}"))
}

/// Source text for a nonnegative real or imaginary literal.
fn literal(c: &GaussianRational) -> Option<String> {
    match (c.re().is_zero(), c.im().is_zero()) {
        (_, true) if !c.re().is_negative() => decimal(c.re()),
        (true, false) if c.im().is_positive() => decimal(c.im()).map(|s| format!("{s}i")),
        _ => None,
    }
}

const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => P_ADD,
        Expr::Mul(..) | Expr::Div(..) => P_MUL,
        Expr::Neg(_) => P_NEG,
        Expr::Pow(..) => P_POW,
        Expr::Num(c) if literal(c).is_none() => 0,
        _ => 5,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    if prec(e) < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    /// Minimal parentheses; the output parses back to an equal tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => match literal(c) {
                Some(s) => write!(f, "{s}"),
                None => write!(f, "{}", num_tree(c)),
            },
            Expr::Var => write!(f, "z"),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, P_NEG)),
            Expr::Add(a, b) => write!(f, "{}+{}", wrap(a, P_ADD), wrap(b, P_MUL)),
            Expr::Sub(a, b) => write!(f, "{}-{}", wrap(a, P_ADD), wrap(b, P_MUL)),
            Expr::Mul(a, b) => write!(f, "{}*{}", wrap(a, P_MUL), wrap(b, P_NEG)),
            Expr::Div(a, b) => write!(f, "{}/{}", wrap(a, P_MUL), wrap(b, P_NEG)),
            Expr::Pow(a, n) => write!(f, "{}^{n}", wrap(a, P_POW)),
            Expr::Fall(e, n) => write!(f, "fall({e}, {n})"),
            Expr::Shift(e, c) => write!(f, "shift({e}, {c})"),
            Expr::Delta(e, n) => write!(f, "delta({e}, {n})"),
        }
    }
}

/// A constant without a single-literal form, spelled as arithmetic that
/// evaluates back to it. Only reached for trees built in code, never for
/// parsed ones.
fn num_tree(c: &GaussianRational) -> String {
    let part = |q: &BigRational| match decimal(q) {
        Some(d) => d,
        None => format!("{}/{}", q.numer().abs(), q.denom()),
    };
    let mut s = String::from("(");
    if !c.re().is_zero() {
        if c.re().is_negative() {
            s.push('-');
        }
        s.push_str(&part(c.re()));
    }
    if !c.im().is_zero() {
        s.push(if c.im().is_negative() { '-' } else if c.re().is_zero() { ' ' } else { '+' });
        s.push_str(&part(c.im()));
        s.push_str("*i");
    }
    s.retain(|ch| ch != ' ');
    s.push(')');
    s
}

impl Expr {
    pub fn eval(&self) -> Result<ExactRational, EvalError> {
        Ok(match self {
            Expr::Num(c) => ExactRational::constant(c.clone()),
            Expr::Var => ExactRational::from_poly(ExactPoly::z()),
            Expr::Neg(e) => -&e.eval()?,
            Expr::Add(a, b) => &a.eval()? + &b.eval()?,
            Expr::Sub(a, b) => &a.eval()? - &b.eval()?,
            Expr::Mul(a, b) => &a.eval()? * &b.eval()?,
            Expr::Div(a, b) => a.eval()?.checked_div(&b.eval()?).map_err(|_| EvalError::DivisionByZero)?,
            Expr::Pow(a, n) => {
                let base = a.eval()?;
                (0..*n).fold(ExactRational::constant(GaussianRational::one()), |acc, _| &acc * &base)
            }
            Expr::Fall(e, n) => {
                if *n == 0 {
                    return Err(EvalError::ZeroFall);
                }
                let f = e.eval()?;
                let step = if *n > 0 { -1 } else { 1 };
                let prod = (1..n.unsigned_abs() as i64)
                    .fold(f.clone(), |acc, k| &acc * &f.shift(&GaussianRational::from_ints(step * k, 0)));
                if *n > 0 {
                    prod
                } else {
                    prod.recip().map_err(|_| EvalError::DivisionByZero)?
                }
            }
            Expr::Shift(e, c) => {
                let c = c.eval()?;
                if !c.is_constant() {
                    return Err(EvalError::NonConstantShift(c.to_string()));
                }
                e.eval()?.shift(&c.num().coeff(0))
            }
            Expr::Delta(e, n) => e.eval()?.delta(*n as usize),
        })
    }
}

pub fn parse_rational_fn(src: &str) -> Result<ExactRational, EvalError> {
    parse(src)?.eval()
}

pub fn parse_poly(src: &str) -> Result<ExactPoly, EvalError> {
    let f = parse_rational_fn(src)?;
    if !f.den().is_constant() {
        return Err(EvalError::NotPolynomial(f.to_string()));
    }
    let d = f.den().coeff(0);
    Ok(f.num().scale(&(GaussianRational::one() / d)))
}

pub fn parse_constant(src: &str) -> Result<GaussianRational, EvalError> {
    let f = parse_rational_fn(src)?;
    if !f.is_constant() {
        return Err(EvalError::NotConstant(f.to_string()));
    }
    Ok(f.num().coeff(0) / f.den().coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_ints(c)
    }

    #[test]
    fn examples() {
        assert_eq!(parse_poly("fall(z, 3)").unwrap(), p(&[0, 2, -3, 1]));
        let rising = ExactRational::new(ExactPoly::one(), p(&[0, 2, 3, 1])).unwrap();
        assert_eq!(parse_rational_fn("fall(z, -3)").unwrap(), rising);
        let w = parse_poly("z^2*(z-1)^3*(z-2)^4").unwrap();
        assert_eq!(w.deg(), 9);
        assert_eq!(w.eval(&GaussianRational::from_ints(3, 0)), GaussianRational::from_ints(9 * 8, 0));
        let d = parse_rational_fn("delta(1/(z^2+2*z))").unwrap();
        let want = ExactRational::new(p(&[-3, -2]), ExactPoly::z().fall_expr(4).shift_int(3)).unwrap();
        assert_eq!(d, want);
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("-z^2").unwrap(), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), 2))));
        assert_eq!(parse_poly("2*z^2-3").unwrap(), p(&[-3, 0, 2]));
        assert_eq!(parse_poly("1-2-3").unwrap(), p(&[-4]));
        assert_eq!(parse_rational_fn("8/2/2").unwrap(), ExactRational::constant(GaussianRational::from_ints(2, 0)));
        assert_eq!(parse_poly("(z+1)^2^2").unwrap(), parse_poly("(z+1)^4").unwrap());
        assert_eq!(parse_poly("z*-1").unwrap(), p(&[0, -1]));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_constant("2.5i").unwrap(), GaussianRational::new(BigRational::zero(), BigRational::new(5.into(), 2.into())));
        assert_eq!(parse_constant("i*i").unwrap(), GaussianRational::from_ints(-1, 0));
        assert_eq!(parse_constant("0.1").unwrap(), GaussianRational::ratio(1, 10));
        assert_eq!(parse_constant("1/3+2i").unwrap(), GaussianRational::ratio(1, 3) + GaussianRational::from_ints(0, 2));
        assert_eq!(parse_poly("shift(z^2, 1)").unwrap(), p(&[1, 2, 1]));
        assert_eq!(parse_poly("delta(z^3, 3)").unwrap(), p(&[6]));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let e = parse("z + * 2").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.expected.contains("number"));
        let e = parse("fall(z 3)").unwrap_err();
        assert_eq!(e.offset, 7);
        assert_eq!(e.expected, ["`,`".to_string()].into());
        let e = parse("z^-1").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(parse("2z").is_err());
        assert!(parse("sin(z)").is_err());
        assert!(parse("z $").unwrap_err().offset == 2);
        assert!(parse("(z").unwrap_err().expected.contains("`)`"));
    }

    #[test]
    fn eval_errors() {
        assert_eq!(parse_rational_fn("1/(z-z)"), Err(EvalError::DivisionByZero));
        assert!(matches!(parse_rational_fn("shift(z, z)"), Err(EvalError::NonConstantShift(_))));
        assert!(matches!(parse_poly("1/z"), Err(EvalError::NotPolynomial(_))));
        assert!(matches!(parse_constant("z"), Err(EvalError::NotConstant(_))));
        assert_eq!(parse_rational_fn("fall(z, 0)"), Err(EvalError::ZeroFall));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "z^2*(z-1)^3*(z-2)^4",
            "-z^2",
            "(-z)^2",
            "1-(2-3)",
            "1-2-3",
            "8/(2/2)",
            "-(z+1)*2",
            "fall(z-0.25, 3)/shift(z, 1.5i)",
            "delta(1/(z^2+2*z), 2)",
            "fall(z+1, -2)*fall(z, -1)^2",
            "--z",
            "z*-1",
            "(z^2)^3",
            "0.001+10i",
        ] {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
