//! A small expression language for radial weights V(r), W(r).
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | func '(' expr ')' | 'besselj' '(' number ',' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and its exponent may not depend on `r`.

use std::fmt;

use thiserror::Error;

use crate::specfun;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent at offset {offset} depends on r")]
    NonConstantExponent { offset: usize },
    #[error("parameter '{0}' is not bound")]
    Unbound(&'static str),
    #[error("domain error in {subexpr}: {reason}")]
    Domain { subexpr: String, reason: String },
    #[error("cannot differentiate {0}")]
    Unsupported(String),
}

impl ExprError {
    /// Byte offset into the source for parse-time errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ExprError::Syntax { offset, .. }
            | ExprError::UnknownIdentifier { offset, .. }
            | ExprError::NonConstantExponent { offset } => Some(*offset),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    N,
    R,
    B,
    Lambda,
    Alpha,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::N => "N",
            Param::R => "R",
            Param::B => "b",
            Param::Lambda => "lambda",
            Param::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Exp,
    Ln,
    Abs,
    Sqrt,
    Sin,
    Cos,
    Sign,
}

impl Func {
    const ALL: [Func; 11] = [
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Coth,
        Func::Exp,
        Func::Ln,
        Func::Abs,
        Func::Sqrt,
        Func::Sin,
        Func::Cos,
        Func::Sign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sign => "sign",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var,
    Param(Param),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    BesselJ(f64, Box<Expr>),
}

/// Values for the named parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Bindings {
    pub n: Option<f64>,
    pub radius: Option<f64>,
    pub b: Option<f64>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
}

impl Bindings {
    pub fn get(&self, p: Param) -> Result<f64, ExprError> {
        let v = match p {
            Param::N => self.n,
            Param::R => self.radius,
            Param::B => self.b,
            Param::Lambda => self.lambda,
            Param::Alpha => self.alpha,
        };
        v.ok_or(ExprError::Unbound(p.name()))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| ExprError::Syntax {
                offset: start,
                expected: "a number".into(),
                found: format!("'{text}'"),
            })?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if b"+-*/^(),".contains(&c) {
            out.push((Tok::Sym(c as char), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(ExprError::Syntax {
                offset: i,
                expected: "an operator, number or identifier".into(),
                found: format!("'{ch}'"),
            });
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
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

    fn fail<T>(&self, expected: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.offset(),
            expected: expected.into(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("'{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exp = self.unary()?;
        if exp.depends_on_r() {
            return Err(ExprError::NonConstantExponent { offset: at });
        }
        Ok(Expr::Pow(Box::new(base), Box::new(exp)))
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.offset();
                self.bump();
                self.ident(name, at)
            }
            _ => self.fail("a number, identifier or '('"),
        }
    }

    fn ident(&mut self, name: String, at: usize) -> Result<Expr, ExprError> {
        let atom = match name.as_str() {
            "r" => Some(Expr::Var),
            "pi" => Some(Expr::Pi),
            "N" => Some(Expr::Param(Param::N)),
            "R" => Some(Expr::Param(Param::R)),
            "b" => Some(Expr::Param(Param::B)),
            "lambda" => Some(Expr::Param(Param::Lambda)),
            "alpha" => Some(Expr::Param(Param::Alpha)),
            _ => None,
        };
        if let Some(a) = atom {
            return Ok(a);
        }
        if name == "besselj" {
            self.expect('(')?;
            let order = match self.peek().clone() {
                Tok::Num(v) => {
                    self.bump();
                    v
                }
                _ => return self.fail("a numeric Bessel order"),
            };
            self.expect(',')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Expr::BesselJ(order, Box::new(arg)));
        }
        if let Some(func) = Func::ALL.iter().copied().find(|f| f.name() == name) {
            self.expect('(')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        Err(ExprError::UnknownIdentifier { offset: at, name })
    }
}

/// Parse an expression in the variable `r`.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}

fn domain(e: &Expr, reason: impl Into<String>) -> ExprError {
    ExprError::Domain {
        subexpr: e.to_string(),
        reason: reason.into(),
    }
}

impl Expr {
    pub fn depends_on_r(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Pi | Expr::Param(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) | Expr::BesselJ(_, a) => a.depends_on_r(),
            Expr::Bin(_, a, b) | Expr::Pow(a, b) => a.depends_on_r() || b.depends_on_r(),
        }
    }

    /// Evaluate at r with the given parameter values.
    pub fn eval(&self, r: f64, env: &Bindings) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Pi => std::f64::consts::PI,
            Expr::Var => r,
            Expr::Param(p) => env.get(*p)?,
            Expr::Neg(a) => -a.eval(r, env)?,
            Expr::Bin(op, a, b) => {
                let x = a.eval(r, env)?;
                let y = b.eval(r, env)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(domain(self, "division by zero"));
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(a, b) => {
                let x = a.eval(r, env)?;
                let y = b.eval(r, env)?;
                if x < 0.0 && y.fract() != 0.0 {
                    return Err(domain(self, "negative base with non-integer exponent"));
                }
                if x == 0.0 && y < 0.0 {
                    return Err(domain(self, "zero raised to a negative power"));
                }
                x.powf(y)
            }
            Expr::Call(func, a) => {
                let x = a.eval(r, env)?;
                match func {
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Coth => {
                        if x == 0.0 {
                            return Err(domain(self, "coth of zero"));
                        }
                        1.0 / x.tanh()
                    }
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(domain(self, format!("logarithm of {x}")));
                        }
                        x.ln()
                    }
                    Func::Abs => x.abs(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(domain(self, format!("square root of {x}")));
                        }
                        x.sqrt()
                    }
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sign => {
                        if x == 0.0 {
                            return Err(domain(self, "sign is not differentiable at 0"));
                        }
                        x.signum()
                    }
                }
            }
            Expr::BesselJ(order, a) => {
                let x = a.eval(r, env)?;
                specfun::bessel_j(*order, x).map_err(|e| domain(self, e.to_string()))?
            }
        };
        if !v.is_finite() {
            return Err(domain(self, "non-finite result"));
        }
        Ok(v)
    }

    /// Symbolic derivative with respect to r.
    pub fn deriv(&self) -> Result<Expr, ExprError> {
        use Expr::*;
        Ok(match self {
            Num(_) | Pi | Param(_) => Num(0.0),
            Var => Num(1.0),
            Neg(a) => neg(a.deriv()?),
            Bin(BinOp::Add, a, b) => add(a.deriv()?, b.deriv()?),
            Bin(BinOp::Sub, a, b) => sub(a.deriv()?, b.deriv()?),
            Bin(BinOp::Mul, a, b) => add(
                mul(a.deriv()?, (**b).clone()),
                mul((**a).clone(), b.deriv()?),
            ),
            Bin(BinOp::Div, a, b) => div(
                sub(
                    mul(a.deriv()?, (**b).clone()),
                    mul((**a).clone(), b.deriv()?),
                ),
                pow((**b).clone(), Num(2.0)),
            ),
            Pow(a, c) => {
                let c = (**c).clone();
                let cm1 = match c {
                    Num(v) => Num(v - 1.0),
                    ref other => sub(other.clone(), Num(1.0)),
                };
                mul(mul(c, pow((**a).clone(), cm1)), a.deriv()?)
            }
            Call(func, a) => {
                let u = (**a).clone();
                let du = a.deriv()?;
                let outer = match func {
                    Func::Sinh => call(Func::Cosh, u),
                    Func::Cosh => call(Func::Sinh, u),
                    Func::Tanh => sub(Num(1.0), pow(call(Func::Tanh, u), Num(2.0))),
                    Func::Coth => sub(Num(1.0), pow(call(Func::Coth, u), Num(2.0))),
                    Func::Exp => call(Func::Exp, u),
                    Func::Ln => div(Num(1.0), u),
                    Func::Abs => call(Func::Sign, u),
                    Func::Sqrt => div(Num(1.0), mul(Num(2.0), call(Func::Sqrt, u))),
                    Func::Sin => call(Func::Cos, u),
                    Func::Cos => neg(call(Func::Sin, u)),
                    Func::Sign => Num(0.0),
                };
                mul(outer, du)
            }
            BesselJ(..) => return Err(ExprError::Unsupported(self.to_string())),
        })
    }
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => Expr::Num(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) {
        return b;
    }
    if is_num(&b, 0.0) {
        return a;
    }
    Expr::Bin(BinOp::Add, Box::new(a), Box::new(b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_num(&b, 0.0) {
        return a;
    }
    if is_num(&a, 0.0) {
        return neg(b);
    }
    Expr::Bin(BinOp::Sub, Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        return Expr::Num(0.0);
    }
    if is_num(&a, 1.0) {
        return b;
    }
    if is_num(&b, 1.0) {
        return a;
    }
    Expr::Bin(BinOp::Mul, Box::new(a), Box::new(b))
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) {
        return Expr::Num(0.0);
    }
    if is_num(&b, 1.0) {
        return a;
    }
    Expr::Bin(BinOp::Div, Box::new(a), Box::new(b))
}

fn pow(a: Expr, c: Expr) -> Expr {
    if is_num(&c, 1.0) {
        return a;
    }
    if is_num(&c, 0.0) {
        return Expr::Num(1.0);
    }
    Expr::Pow(Box::new(a), Box::new(c))
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

// Binding strength used by the printer: 1 additive, 2 multiplicative,
// 3 unary minus, 4 power, 5 atoms.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Num(x) if *x < 0.0 => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) if *x < 0.0 => write!(f, "-{}", -x),
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Var => write!(f, "r"),
            Expr::Param(p) => write!(f, "{}", p.name()),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, 3)
            }
            Expr::Bin(op, a, b) => {
                let (sym, l, r) = match op {
                    BinOp::Add => ("+", 1, 2),
                    BinOp::Sub => ("-", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                };
                write_at(f, a, l)?;
                write!(f, " {sym} ")?;
                write_at(f, b, r)
            }
            Expr::Pow(a, b) => {
                write_at(f, a, 5)?;
                write!(f, "^")?;
                write_at(f, b, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::BesselJ(order, a) => write!(f, "besselj({order}, {a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Bindings {
        Bindings {
            n: Some(4.0),
            radius: Some(2.0),
            b: Some(1.0),
            lambda: Some(0.5),
            alpha: Some(0.25),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("2^3^2").unwrap();
        assert_eq!(e.eval(0.0, &env()).unwrap(), 512.0);
        let e = parse("-2^2").unwrap();
        assert_eq!(e.eval(0.0, &env()).unwrap(), -4.0);
        let e = parse("1 - 2 - 3").unwrap();
        assert_eq!(e.eval(0.0, &env()).unwrap(), -4.0);
        let e = parse("8 / 4 / 2").unwrap();
        assert_eq!(e.eval(0.0, &env()).unwrap(), 1.0);
        let e = parse("2 * -3 + 4").unwrap();
        assert_eq!(e.eval(0.0, &env()).unwrap(), -2.0);
    }

    #[test]
    fn hardy_weight_example() {
        let e = parse("((N-2)/2)^2 / r^2").unwrap();
        let env = Bindings {
            n: Some(4.0),
            ..Default::default()
        };
        assert_eq!(e.eval(1.0, &env).unwrap(), 1.0);
    }

    #[test]
    fn bessel_weight_evaluates() {
        let e = parse("r^( (2-N+lambda)/2 ) * besselj(0, 2.404825557695773*r/R)").unwrap();
        let v = e.eval(1.0, &env()).unwrap();
        let j = specfun::bessel_j(0.0, 2.404825557695773 / 2.0).unwrap();
        assert!((v - 1f64.powf(-0.75) * j).abs() < 1e-15);
    }

    #[test]
    fn syntax_error_offsets() {
        match parse("1 + * 2") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("sinh(r"),
            Err(ExprError::Syntax { offset: 6, .. })
        ));
        assert!(matches!(
            parse("bogus(r)"),
            Err(ExprError::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(
            parse("2 r"),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse("1 +"), Err(ExprError::Syntax { offset: 3, .. })));
        assert!(matches!(parse(""), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(
            parse("r^r"),
            Err(ExprError::NonConstantExponent { offset: 2 })
        ));
    }

    #[test]
    fn evaluation_errors() {
        let e = parse("ln(r - 1)").unwrap();
        assert!(matches!(e.eval(0.5, &env()), Err(ExprError::Domain { .. })));
        let e = parse("sqrt(-r)").unwrap();
        assert!(e.eval(1.0, &env()).is_err());
        let e = parse("1 / (r - 1)").unwrap();
        assert!(e.eval(1.0, &env()).is_err());
        let e = parse("r * alpha").unwrap();
        assert_eq!(
            e.eval(1.0, &Bindings::default()),
            Err(ExprError::Unbound("alpha"))
        );
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cases = [
            "sinh(r)^3 / r^2",
            "exp(-2*r) * cos(3*r)",
            "ln(1 + r^2) - sqrt(r)",
            "coth(r) - 1/r",
            "abs(r - 1) * tanh(r)",
            "sin(r)^(N/2)",
            "r^-(2)",
        ];
        for src in cases {
            let e = parse(src).unwrap();
            let d = e.deriv().unwrap();
            for r in [0.3, 0.7, 1.6, 2.5] {
                let h = 1e-6;
                let fd = (e.eval(r + h, &env()).unwrap() - e.eval(r - h, &env()).unwrap())
                    / (2.0 * h);
                let got = d.eval(r, &env()).unwrap();
                assert!((got - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{src} at {r}");
            }
        }
        let e = parse("abs(r - 1)").unwrap();
        assert!(e.deriv().unwrap().eval(1.0, &env()).is_err());
        assert!(parse("besselj(0, r)").unwrap().deriv().is_err());
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "1 + 2 * r - -r",
            "(1 + r)^(N - 2) / (r * (1 - r^2))",
            "-(r^2)^3",
            "2^-(3)^2",
            "besselj(0.5, r / R) * exp(-r)",
            "lambda * r^-lambda",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
