//! Closed-form scalar expressions: parsing, printing, evaluation and exact
//! symbolic differentiation.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;           (* right associative *)
//! primary = number | "pi" | ident | func "(" expr ")" | "(" expr ")" ;
//! func    = "sin" | "cos" | "tan" | "sinh" | "cosh" | "tanh" | "sech"
//!         | "exp" | "log" | "sqrt" | "abs" | "sign" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! `abs` differentiates to `sign`, with `sign(0) = 0`; sampled domains must
//! avoid the kink.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

const MAX_DEPTH: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Sech,
    Exp,
    Log,
    Sqrt,
    Abs,
    Sign,
}

impl Func {
    pub const ALL: [Func; 12] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sech,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Sign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sech => "sech",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sign => "sign",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn apply(self, x: f64) -> Result<f64> {
        let dom = |ok: bool, v: f64| {
            if ok {
                Ok(v)
            } else {
                Err(Error::EvalDomain { func: self.name(), arg: x })
            }
        };
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => Ok(x.tan()),
            Func::Sinh => Ok(x.sinh()),
            Func::Cosh => Ok(x.cosh()),
            Func::Tanh => Ok(x.tanh()),
            Func::Sech => Ok(1.0 / x.cosh()),
            Func::Exp => Ok(x.exp()),
            Func::Log => dom(x > 0.0, x.ln()),
            Func::Sqrt => dom(x >= 0.0, x.sqrt()),
            Func::Abs => Ok(x.abs()),
            Func::Sign => Ok(if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            }),
        }
    }
}

pub(crate) fn apply_div(a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::EvalDomain { func: "/", arg: a });
    }
    Ok(a / b)
}

pub(crate) fn apply_pow(a: f64, b: f64) -> Result<f64> {
    if a < 0.0 && b.fract() != 0.0 {
        return Err(Error::EvalDomain { func: "^", arg: a });
    }
    if a == 0.0 && b < 0.0 {
        return Err(Error::EvalDomain { func: "^", arg: a });
    }
    if b.fract() == 0.0 && b.abs() <= 64.0 {
        return Ok(a.powi(b as i32));
    }
    Ok(a.powf(b))
}

#[derive(Debug)]
pub enum Node {
    Num(f64),
    Pi,
    Var(Arc<str>),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, Expr),
    Call(Func, Expr),
}

/// Immutable, cheaply clonable expression DAG.
#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

/// Variable name to value map.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    vals: Vec<(String, f64)>,
}

impl Bindings {
    pub fn new(names: &[&str], values: &[f64]) -> Self {
        Bindings {
            vals: names.iter().zip(values).map(|(n, v)| (n.to_string(), *v)).collect(),
        }
    }

    pub fn set(&mut self, name: &str, value: f64) {
        match self.vals.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = value,
            None => self.vals.push((name.to_string(), value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.vals.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

impl Expr {
    fn mk(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub(crate) fn shared(&self) -> bool {
        Arc::strong_count(&self.0) > 1
    }

    pub fn num(x: f64) -> Expr {
        Expr::mk(Node::Num(x))
    }

    pub fn zero() -> Expr {
        Expr::num(0.0)
    }

    pub fn one() -> Expr {
        Expr::num(1.0)
    }

    pub fn pi() -> Expr {
        Expr::mk(Node::Pi)
    }

    pub fn var(name: &str) -> Expr {
        Expr::mk(Node::Var(Arc::from(name)))
    }

    pub fn as_num(&self) -> Option<f64> {
        match *self.0 {
            Node::Num(x) => Some(x),
            _ => None,
        }
    }

    fn is(&self, v: f64) -> bool {
        self.as_num() == Some(v)
    }

    fn fold(x: f64) -> Option<Expr> {
        x.is_finite().then(|| Expr::num(x))
    }

    pub fn neg(&self) -> Expr {
        match &*self.0 {
            Node::Num(x) => Expr::num(-x),
            Node::Neg(a) => a.clone(),
            _ => Expr::mk(Node::Neg(self.clone())),
        }
    }

    pub fn add(&self, o: &Expr) -> Expr {
        if self.is(0.0) {
            return o.clone();
        }
        if o.is(0.0) {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_num(), o.as_num()) {
            if let Some(e) = Expr::fold(a + b) {
                return e;
            }
        }
        Expr::mk(Node::Add(self.clone(), o.clone()))
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        if o.is(0.0) {
            return self.clone();
        }
        if self.is(0.0) {
            return o.neg();
        }
        if let (Some(a), Some(b)) = (self.as_num(), o.as_num()) {
            if let Some(e) = Expr::fold(a - b) {
                return e;
            }
        }
        Expr::mk(Node::Sub(self.clone(), o.clone()))
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        if self.is(0.0) || o.is(0.0) {
            return Expr::zero();
        }
        if self.is(1.0) {
            return o.clone();
        }
        if o.is(1.0) {
            return self.clone();
        }
        if self.is(-1.0) {
            return o.neg();
        }
        if o.is(-1.0) {
            return self.neg();
        }
        if let (Some(a), Some(b)) = (self.as_num(), o.as_num()) {
            if let Some(e) = Expr::fold(a * b) {
                return e;
            }
        }
        Expr::mk(Node::Mul(self.clone(), o.clone()))
    }

    pub fn div(&self, o: &Expr) -> Expr {
        if o.is(1.0) {
            return self.clone();
        }
        if self.is(0.0) && !o.is(0.0) {
            return Expr::zero();
        }
        if let (Some(a), Some(b)) = (self.as_num(), o.as_num()) {
            if b != 0.0 {
                if let Some(e) = Expr::fold(a / b) {
                    return e;
                }
            }
        }
        Expr::mk(Node::Div(self.clone(), o.clone()))
    }

    pub fn pow(&self, o: &Expr) -> Expr {
        if o.is(0.0) {
            return Expr::one();
        }
        if o.is(1.0) {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_num(), o.as_num()) {
            if let Ok(v) = apply_pow(a, b) {
                if let Some(e) = Expr::fold(v) {
                    return e;
                }
            }
        }
        Expr::mk(Node::Pow(self.clone(), o.clone()))
    }

    pub fn powi(&self, n: i32) -> Expr {
        self.pow(&Expr::num(n as f64))
    }

    pub fn call(f: Func, a: &Expr) -> Expr {
        if let Some(x) = a.as_num() {
            if let Ok(v) = f.apply(x) {
                if let Some(e) = Expr::fold(v) {
                    return e;
                }
            }
        }
        Expr::mk(Node::Call(f, a.clone()))
    }

    pub fn sin(&self) -> Expr {
        Expr::call(Func::Sin, self)
    }

    pub fn cos(&self) -> Expr {
        Expr::call(Func::Cos, self)
    }

    pub fn sqrt(&self) -> Expr {
        Expr::call(Func::Sqrt, self)
    }

    /// Free variables, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>, seen: &mut BTreeSet<usize>) {
        if !seen.insert(self.id()) {
            return;
        }
        match &*self.0 {
            Node::Num(_) | Node::Pi => {}
            Node::Var(v) => {
                out.insert(v.to_string());
            }
            Node::Neg(a) | Node::Call(_, a) => a.collect_vars(out, seen),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.collect_vars(out, seen);
                b.collect_vars(out, seen);
            }
        }
    }

    pub fn eval(&self, b: &Bindings) -> Result<f64> {
        let mut memo = BTreeMap::new();
        self.eval_memo(b, &mut memo)
    }

    fn eval_memo(&self, b: &Bindings, memo: &mut BTreeMap<usize, f64>) -> Result<f64> {
        let shared = self.shared();
        if shared {
            if let Some(v) = memo.get(&self.id()) {
                return Ok(*v);
            }
        }
        let v = match &*self.0 {
            Node::Num(x) => *x,
            Node::Pi => core::f64::consts::PI,
            Node::Var(n) => b.get(n).ok_or_else(|| Error::Unbound(n.to_string()))?,
            Node::Neg(a) => -a.eval_memo(b, memo)?,
            Node::Add(x, y) => x.eval_memo(b, memo)? + y.eval_memo(b, memo)?,
            Node::Sub(x, y) => x.eval_memo(b, memo)? - y.eval_memo(b, memo)?,
            Node::Mul(x, y) => x.eval_memo(b, memo)? * y.eval_memo(b, memo)?,
            Node::Div(x, y) => apply_div(x.eval_memo(b, memo)?, y.eval_memo(b, memo)?)?,
            Node::Pow(x, y) => apply_pow(x.eval_memo(b, memo)?, y.eval_memo(b, memo)?)?,
            Node::Call(f, a) => f.apply(a.eval_memo(b, memo)?)?,
        };
        if shared {
            memo.insert(self.id(), v);
        }
        Ok(v)
    }

    /// Exact derivative with respect to `var`.
    pub fn diff(&self, var: &str) -> Expr {
        let mut memo = BTreeMap::new();
        self.diff_memo(var, &mut memo)
    }

    /// Differentiates several expressions sharing one memo table, so common
    /// subtrees are differentiated once.
    pub fn diff_all(exprs: &[Expr], var: &str) -> Vec<Expr> {
        let mut memo = BTreeMap::new();
        exprs.iter().map(|e| e.diff_memo(var, &mut memo)).collect()
    }

    /// Replaces each variable named in `map` by its expression, simultaneously.
    pub fn substitute(&self, map: &[(&str, Expr)]) -> Expr {
        let mut memo = BTreeMap::new();
        self.subst_memo(map, &mut memo)
    }

    fn subst_memo(&self, map: &[(&str, Expr)], memo: &mut BTreeMap<usize, (Expr, Expr)>) -> Expr {
        if let Some((_, d)) = memo.get(&self.id()) {
            return d.clone();
        }
        let r = match &*self.0 {
            Node::Num(_) | Node::Pi => self.clone(),
            Node::Var(n) => match map.iter().find(|(k, _)| *k == &**n) {
                Some((_, e)) => e.clone(),
                None => self.clone(),
            },
            Node::Neg(a) => a.subst_memo(map, memo).neg(),
            Node::Add(a, b) => a.subst_memo(map, memo).add(&b.subst_memo(map, memo)),
            Node::Sub(a, b) => a.subst_memo(map, memo).sub(&b.subst_memo(map, memo)),
            Node::Mul(a, b) => a.subst_memo(map, memo).mul(&b.subst_memo(map, memo)),
            Node::Div(a, b) => a.subst_memo(map, memo).div(&b.subst_memo(map, memo)),
            Node::Pow(a, b) => a.subst_memo(map, memo).pow(&b.subst_memo(map, memo)),
            Node::Call(f, a) => Expr::call(*f, &a.subst_memo(map, memo)),
        };
        memo.insert(self.id(), (self.clone(), r.clone()));
        r
    }

    fn diff_memo(&self, var: &str, memo: &mut BTreeMap<usize, (Expr, Expr)>) -> Expr {
        if let Some((_, d)) = memo.get(&self.id()) {
            return d.clone();
        }
        let d = match &*self.0 {
            Node::Num(_) | Node::Pi => Expr::zero(),
            Node::Var(n) => {
                if &**n == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Neg(a) => a.diff_memo(var, memo).neg(),
            Node::Add(a, b) => a.diff_memo(var, memo).add(&b.diff_memo(var, memo)),
            Node::Sub(a, b) => a.diff_memo(var, memo).sub(&b.diff_memo(var, memo)),
            Node::Mul(a, b) => {
                let (da, db) = (a.diff_memo(var, memo), b.diff_memo(var, memo));
                da.mul(b).add(&a.mul(&db))
            }
            Node::Div(a, b) => {
                let (da, db) = (a.diff_memo(var, memo), b.diff_memo(var, memo));
                da.div(b).sub(&a.mul(&db).div(&b.mul(b)))
            }
            Node::Pow(a, b) => {
                let (da, db) = (a.diff_memo(var, memo), b.diff_memo(var, memo));
                if db.is(0.0) {
                    b.mul(&a.pow(&b.sub(&Expr::one()))).mul(&da)
                } else {
                    let lg = Expr::call(Func::Log, a);
                    self.mul(&db.mul(&lg).add(&b.mul(&da).div(a)))
                }
            }
            Node::Call(f, a) => {
                let da = a.diff_memo(var, memo);
                if da.is(0.0) {
                    Expr::zero()
                } else {
                    let outer = match f {
                        Func::Sin => a.cos(),
                        Func::Cos => a.sin().neg(),
                        Func::Tan => Expr::one().div(&a.cos().powi(2)),
                        Func::Sinh => Expr::call(Func::Cosh, a),
                        Func::Cosh => Expr::call(Func::Sinh, a),
                        Func::Tanh => Expr::call(Func::Sech, a).powi(2),
                        Func::Sech => Expr::call(Func::Sech, a).mul(&Expr::call(Func::Tanh, a)).neg(),
                        Func::Exp => self.clone(),
                        Func::Log => Expr::one().div(a),
                        Func::Sqrt => Expr::num(0.5).div(self),
                        Func::Abs => Expr::call(Func::Sign, a),
                        Func::Sign => Expr::zero(),
                    };
                    outer.mul(&da)
                }
            }
        };
        // keep `self` alive so its address is not reused while memoized
        memo.insert(self.id(), (self.clone(), d.clone()));
        d
    }

    fn prec(&self) -> u8 {
        match &*self.0 {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
            Node::Num(x) if *x < 0.0 || (*x == 0.0 && x.is_sign_negative()) => 3,
            _ => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_prec(f, 0)?;
            return f.write_str(")");
        }
        match &*self.0 {
            Node::Num(x) => {
                if x.is_sign_negative() {
                    write!(f, "-{:?}", -x)
                } else {
                    write!(f, "{:?}", x)
                }
            }
            Node::Pi => f.write_str("pi"),
            Node::Var(v) => f.write_str(v),
            Node::Neg(a) => {
                f.write_str("-")?;
                a.write_prec(f, 3)
            }
            Node::Add(a, b) => {
                a.write_prec(f, 1)?;
                f.write_str(" + ")?;
                b.write_prec(f, 2)
            }
            Node::Sub(a, b) => {
                a.write_prec(f, 1)?;
                f.write_str(" - ")?;
                b.write_prec(f, 2)
            }
            Node::Mul(a, b) => {
                a.write_prec(f, 2)?;
                f.write_str("*")?;
                b.write_prec(f, 3)
            }
            Node::Div(a, b) => {
                a.write_prec(f, 2)?;
                f.write_str("/")?;
                b.write_prec(f, 3)
            }
            Node::Pow(a, b) => {
                a.write_prec(f, 5)?;
                f.write_str("^")?;
                b.write_prec(f, 3)
            }
            Node::Call(fun, a) => {
                write!(f, "{}(", fun.name())?;
                a.write_prec(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                Expr::$m(self, o)
            }
        }
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$m(&self, &o)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                Expr::$m(&self, o)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$m(self, &o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

/// Parses `text`; every identifier that is not a function or `pi` must be in
/// `allowed_vars`.
pub fn parse(text: &str, allowed_vars: &[&str]) -> Result<Expr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, vars: allowed_vars, depth: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.expected("operator or end of input"));
    }
    Ok(e)
}

/// 1-based (line, column) of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text.as_bytes()[..offset.min(text.len())];
    let line = before.iter().filter(|&&c| c == b'\n').count() + 1;
    let col = before.iter().rev().take_while(|&&c| c != b'\n').count() + 1;
    (line, col)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
    depth: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expected(&self, what: &str) -> Error {
        Error::Syntax { offset: self.pos, expected: what.to_string() }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.expected("shallower nesting"));
        }
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::mk(if c == b'+' { Node::Add(lhs, rhs) } else { Node::Sub(lhs, rhs) });
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::mk(if c == b'*' { Node::Mul(lhs, rhs) } else { Node::Div(lhs, rhs) });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(self.expected("shallower nesting"));
            }
            let a = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::mk(Node::Neg(a)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let ex = self.unary()?;
            return Ok(Expr::mk(Node::Pow(base, ex)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.expected("')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            _ => Err(self.expected("number, identifier, '(' or '-'")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.s.len() && p.s[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.expected("digit"));
        }
        if matches!(self.s.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.s.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(Error::Syntax { offset: save + 1, expected: "exponent digits".to_string() });
            }
        }
        let txt = core::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.expected("number"))?;
        let v: f64 = txt.parse().map_err(|_| self.expected("number"))?;
        if !v.is_finite() {
            return Err(Error::Syntax { offset: start, expected: "finite number".to_string() });
        }
        Ok(Expr::num(v))
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default();
        let called = self.peek() == Some(b'(');
        if let Some(f) = Func::from_name(name) {
            if !called {
                return Err(self.expected("'(' after function name"));
            }
            self.pos += 1;
            let a = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.expected("')'"));
            }
            self.pos += 1;
            return Ok(Expr::mk(Node::Call(f, a)));
        }
        if called {
            return Err(Error::UnknownFunction(name.to_string()));
        }
        if name == "pi" {
            return Ok(Expr::pi());
        }
        if self.vars.contains(&name) {
            return Ok(Expr::var(name));
        }
        Err(Error::UnknownVariable(name.to_string()))
    }
}

/// Formats a float so that [`parse`] reads it back bit-exactly.
pub fn lit(x: f64) -> String {
    if x.is_sign_negative() {
        format!("(-{:?})", -x)
    } else {
        format!("{:?}", x)
    }
}
