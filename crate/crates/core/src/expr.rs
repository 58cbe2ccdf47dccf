//! A small arithmetic expression language for user-defined charts, groups
//! and Hamiltonians.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' unary)?
//! atom  := number | name | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `exp`, `sinh`, `cosh`, `log`. Constants: `pi`, `e` and any
//! named parameter supplied by the caller. Names may carry trailing primes
//! (`x'`), which is how group laws refer to the second factor.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{PlgError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sinh,
    Cosh,
    Log,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        match s {
            "exp" => Some(Func::Exp),
            "sinh" => Some(Func::Sinh),
            "cosh" => Some(Func::Cosh),
            "log" => Some(Func::Log),
            _ => None,
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
            Func::Log => v.ln(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Log => "log",
        }
    }
}

/// Parsed expression over variables indexed `0..nvars`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Position (1-based character column) and message of a parse failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> std::result::Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| ExprError {
                column: col,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((Tok::Num(v), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ExprError {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    params: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> std::result::Result<T, ExprError> {
        Err(ExprError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, ExprError> {
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

    fn term(&mut self) -> std::result::Result<Expr, ExprError> {
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

    fn unary(&mut self) -> std::result::Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Expr, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of expression");
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    self.pos += 1;
                    if !self.eat('(') {
                        return self.err(format!("expected `(` after `{name}`"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return self.err("expected `)`");
                    }
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                let found = if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Expr::Var(i)
                } else if let Some(v) = self.params.get(&name) {
                    Expr::Num(*v)
                } else if name == "pi" {
                    Expr::Num(std::f64::consts::PI)
                } else if name == "e" {
                    Expr::Num(std::f64::consts::E)
                } else {
                    return self.err(format!("unknown name `{name}`"));
                };
                self.pos += 1;
                Ok(found)
            }
            Tok::Op(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

impl Expr {
    /// Parses `src` with variables `vars` and named constants `params`.
    /// Variables shadow parameters, which shadow `pi` and `e`.
    pub fn parse(src: &str, vars: &[String], params: &BTreeMap<String, f64>) -> std::result::Result<Expr, ExprError> {
        let toks = tokenize(src)?;
        let end = src.chars().count() + 1;
        let mut p = Parser {
            toks,
            pos: 0,
            end,
            vars,
            params,
        };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            return p.err("unexpected trailing input");
        }
        Ok(e)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => {
                let (base, p) = (a.eval(x), b.eval(x));
                if p.fract() == 0.0 && p.abs() < 1024.0 {
                    base.powi(p as i32)
                } else {
                    base.powf(p)
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(x)),
        }
    }

    /// Whether the expression mentions variable `i` (or any, for `None`).
    pub fn depends_on(&self, i: Option<usize>) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(j) => i.is_none_or(|i| i == *j),
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on(i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on(i) || b.depends_on(i)
            }
        }
    }

    /// Symbolic partial derivative with respect to variable `i`, with
    /// light constant folding.
    pub fn derivative(&self, i: usize) -> Expr {
        use Expr::*;
        match self {
            Num(_) => Num(0.0),
            Var(j) => Num(if *j == i { 1.0 } else { 0.0 }),
            Neg(a) => neg(a.derivative(i)),
            Add(a, b) => add(a.derivative(i), b.derivative(i)),
            Sub(a, b) => sub(a.derivative(i), b.derivative(i)),
            Mul(a, b) => add(
                mul(a.derivative(i), (**b).clone()),
                mul((**a).clone(), b.derivative(i)),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(i), (**b).clone()),
                    mul((**a).clone(), b.derivative(i)),
                ),
                pow((**b).clone(), Num(2.0)),
            ),
            Pow(a, b) => {
                if !b.depends_on(Some(i)) {
                    // d(a^b) = b a^(b-1) a'
                    mul(
                        mul((**b).clone(), pow((**a).clone(), sub((**b).clone(), Num(1.0)))),
                        a.derivative(i),
                    )
                } else {
                    mul(
                        self.clone(),
                        add(
                            mul(b.derivative(i), Call(Func::Log, a.clone())),
                            div(mul((**b).clone(), a.derivative(i)), (**a).clone()),
                        ),
                    )
                }
            }
            Call(f, a) => {
                let inner = a.derivative(i);
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Sinh => Call(Func::Cosh, a.clone()),
                    Func::Cosh => Call(Func::Sinh, a.clone()),
                    Func::Log => div(Num(1.0), (**a).clone()),
                };
                mul(outer, inner)
            }
        }
    }

    pub fn gradient(&self, n: usize) -> Vec<Expr> {
        (0..n).map(|i| self.derivative(i)).collect()
    }
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(w) if *w == v)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
        _ if is_num(&a, 0.0) => b,
        _ if is_num(&b, 0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
        _ if is_num(&b, 0.0) => a,
        _ if is_num(&a, 0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
        _ if is_num(&a, 0.0) || is_num(&b, 0.0) => Expr::Num(0.0),
        _ if is_num(&a, 1.0) => b,
        _ if is_num(&b, 1.0) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) {
        Expr::Num(0.0)
    } else if is_num(&b, 1.0) {
        a
    } else {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    if is_num(&b, 1.0) {
        a
    } else if is_num(&b, 0.0) {
        Expr::Num(1.0)
    } else {
        Expr::Pow(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(i) => write!(f, "${i}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a})^({b})"),
            Expr::Call(g, a) => write!(f, "{}({a})", g.name()),
        }
    }
}

/// Parses with an error that names `context`, at line 1.
pub fn parse_in(context: &str, src: &str, vars: &[String], params: &BTreeMap<String, f64>) -> Result<Expr> {
    Expr::parse(src, vars, params).map_err(|e| PlgError::Parse {
        context: context.to_string(),
        line: 1,
        column: e.column,
        message: e.message,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(src: &str) -> Expr {
        Expr::parse(src, &vars(&["x", "y", "x'"]), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn precedence() {
        let x = [2.0, 3.0, 5.0];
        assert_eq!(p("1 + 2 * 3").eval(&x), 7.0);
        assert_eq!(p("-x^2").eval(&x), -4.0);
        assert_eq!(p("2^3^2").eval(&x), 512.0);
        assert_eq!(p("2^-1").eval(&x), 0.5);
        assert_eq!(p("(x + y) / 2 - x'").eval(&x), -2.5);
        assert_eq!(p("1.5e-1 * 2E1").eval(&x), 3.0);
        assert!((p("log(exp(y)) + cosh(0) - sinh(0)").eval(&x) - 4.0).abs() < 1e-15);
        assert!((p("pi").eval(&x) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn params_and_primes() {
        let mut params = BTreeMap::new();
        params.insert("eta".to_string(), 0.25);
        let e = Expr::parse("exp(-eta * x') * y", &vars(&["y", "x'"]), &params).unwrap();
        assert!((e.eval(&[2.0, 4.0]) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_columns() {
        let v = vars(&["x"]);
        let none = BTreeMap::new();
        let e = Expr::parse("x + * 2", &v, &none).unwrap_err();
        assert_eq!(e.column, 5);
        let e = Expr::parse("x + z", &v, &none).unwrap_err();
        assert_eq!(e.column, 5);
        assert!(e.message.contains("`z`"));
        let e = Expr::parse("(x + 1", &v, &none).unwrap_err();
        assert_eq!(e.column, 7);
        let e = Expr::parse("x $ 1", &v, &none).unwrap_err();
        assert_eq!(e.column, 3);
        assert_eq!(Expr::parse("x 1", &v, &none).unwrap_err().column, 3);
        assert!(Expr::parse("", &v, &none).is_err());
        assert!(Expr::parse("exp x", &v, &none).is_err());
    }

    #[test]
    fn derivatives_match_fd() {
        let srcs = [
            "x^3 * y - 2 * x / y",
            "exp(-0.3 * (x + y)) * sinh(x) + cosh(x * y)",
            "log(x^2 + y^2) + x^y",
            "-(x - y)^2 / (1 + x')",
        ];
        let pt = [0.7, 1.3, 0.4];
        for s in srcs {
            let e = p(s);
            let g: Vec<f64> = e.gradient(3).iter().map(|d| d.eval(&pt)).collect();
            let num = fd::gradient5(&|x: &[f64]| e.eval(x), &pt);
            assert!(fd::max_abs_diff(&g, &num) < 1e-9, "{s}: {g:?} vs {num:?}");
        }
    }

    #[test]
    fn folding_keeps_trees_small() {
        assert_eq!(p("3 * x").derivative(1), Expr::Num(0.0));
        assert_eq!(p("x * y").derivative(0), Expr::Var(1));
        assert!(!p("2 + 3").depends_on(None));
    }
}
