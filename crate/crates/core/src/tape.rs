//! Batch evaluation of expression sets: the DAG is flattened into a linear
//! op list with structurally equal subtrees merged.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{apply_div, apply_pow, Expr, Func, Node};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Op {
    Const(f64),
    Var(u32),
    Neg(u32),
    Add(u32, u32),
    Sub(u32, u32),
    Mul(u32, u32),
    Div(u32, u32),
    Pow(u32, u32),
    Call(Func, u32),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Const(u64),
    Var(u32),
    Un(u32),
    Bin(u8, u32, u32),
    Call(Func, u32),
}

#[derive(Clone, Debug)]
pub struct Tape {
    vars: Vec<String>,
    ops: Vec<Op>,
    outputs: Vec<u32>,
}

struct Builder<'a> {
    vars: &'a [&'a str],
    ops: Vec<Op>,
    by_key: BTreeMap<Key, u32>,
    by_ptr: BTreeMap<usize, (Expr, u32)>,
}

impl Builder<'_> {
    fn push(&mut self, key: Key, op: Op) -> u32 {
        if let Some(&i) = self.by_key.get(&key) {
            return i;
        }
        let i = self.ops.len() as u32;
        self.ops.push(op);
        self.by_key.insert(key, i);
        i
    }

    fn visit(&mut self, e: &Expr) -> Result<u32> {
        if let Some((_, i)) = self.by_ptr.get(&e.id()) {
            return Ok(*i);
        }
        let i = match e.node() {
            Node::Num(x) => self.push(Key::Const(x.to_bits()), Op::Const(*x)),
            Node::Pi => {
                let x = core::f64::consts::PI;
                self.push(Key::Const(x.to_bits()), Op::Const(x))
            }
            Node::Var(v) => {
                let k = self
                    .vars
                    .iter()
                    .position(|n| *n == &**v)
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))? as u32;
                self.push(Key::Var(k), Op::Var(k))
            }
            Node::Neg(a) => {
                let a = self.visit(a)?;
                self.push(Key::Un(a), Op::Neg(a))
            }
            Node::Call(f, a) => {
                let a = self.visit(a)?;
                self.push(Key::Call(*f, a), Op::Call(*f, a))
            }
            Node::Add(a, b) | Node::Mul(a, b) => {
                let (a, b) = (self.visit(a)?, self.visit(b)?);
                let (lo, hi) = (a.min(b), a.max(b));
                if matches!(e.node(), Node::Add(..)) {
                    self.push(Key::Bin(0, lo, hi), Op::Add(lo, hi))
                } else {
                    self.push(Key::Bin(2, lo, hi), Op::Mul(lo, hi))
                }
            }
            Node::Sub(a, b) => {
                let (a, b) = (self.visit(a)?, self.visit(b)?);
                self.push(Key::Bin(1, a, b), Op::Sub(a, b))
            }
            Node::Div(a, b) => {
                let (a, b) = (self.visit(a)?, self.visit(b)?);
                self.push(Key::Bin(3, a, b), Op::Div(a, b))
            }
            Node::Pow(a, b) => {
                let (a, b) = (self.visit(a)?, self.visit(b)?);
                self.push(Key::Bin(4, a, b), Op::Pow(a, b))
            }
        };
        self.by_ptr.insert(e.id(), (e.clone(), i));
        Ok(i)
    }
}

impl Tape {
    /// Compiles `exprs` over the ordered variable list `vars`.
    pub fn compile(exprs: &[Expr], vars: &[&str]) -> Result<Tape> {
        let mut b = Builder { vars, ops: Vec::new(), by_key: BTreeMap::new(), by_ptr: BTreeMap::new() };
        let outputs = exprs.iter().map(|e| b.visit(e)).collect::<Result<Vec<_>>>()?;
        Ok(Tape { vars: vars.iter().map(|s| s.to_string()).collect(), ops: b.ops, outputs })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.outputs.len()];
        let mut scratch = Vec::new();
        self.eval_into(x, &mut out, &mut scratch)?;
        Ok(out)
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64], s: &mut Vec<f64>) -> Result<()> {
        s.clear();
        s.reserve(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Const(c) => c,
                Op::Var(k) => x[k as usize],
                Op::Neg(a) => -s[a as usize],
                Op::Add(a, b) => s[a as usize] + s[b as usize],
                Op::Sub(a, b) => s[a as usize] - s[b as usize],
                Op::Mul(a, b) => s[a as usize] * s[b as usize],
                Op::Div(a, b) => apply_div(s[a as usize], s[b as usize])?,
                Op::Pow(a, b) => apply_pow(s[a as usize], s[b as usize])?,
                Op::Call(f, a) => f.apply(s[a as usize])?,
            };
            s.push(v);
        }
        for (o, &i) in out.iter_mut().zip(&self.outputs) {
            *o = s[i as usize];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Bindings};

    #[test]
    fn merges_common_subtrees() {
        let vars = ["x", "y"];
        let a = parse("sin(x*y) + sin(x*y)", &vars).unwrap();
        let b = parse("cos(y*x)", &vars).unwrap();
        let t = Tape::compile(&[a.clone(), b.clone()], &vars).unwrap();
        // x, y, x*y, sin, +, cos
        assert_eq!(t.len(), 6);
        let v = t.eval(&[0.3, 0.9]).unwrap();
        let bind = Bindings::new(&vars, &[0.3, 0.9]);
        assert_eq!(v[0], a.eval(&bind).unwrap());
        assert_eq!(v[1], b.eval(&bind).unwrap());
    }

    #[test]
    fn reports_unknown_variable_and_domain() {
        let e = parse("sqrt(x)", &["x"]).unwrap();
        assert!(matches!(Tape::compile(core::slice::from_ref(&e), &["y"]), Err(Error::UnknownVariable(_))));
        let t = Tape::compile(&[e], &["x"]).unwrap();
        assert!(matches!(t.eval(&[-1.0]), Err(Error::EvalDomain { .. })));
    }
}
