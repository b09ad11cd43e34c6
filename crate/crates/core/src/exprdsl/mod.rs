//! Lagrangian expressions: parsing, evaluation in real or complex mode, and
//! exact partial derivatives by forward-mode dual numbers.
//!
//! Grammar: numeric literals, identifiers, `+ - * / ^`, unary minus,
//! parentheses and the functions `sin cos exp log sqrt abs`. Identifiers
//! are free variables; a Lagrangian's slots are reserved per dimension
//! (`qdot q tau` in 1D, `qx qy q x y` in 2D, `qx1..qxN q x1..xN` in ND).

mod parser;
mod scalar;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

pub use scalar::{Dual, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Variables index into the owning expression's
/// `free_vars` list.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    fn remap(&mut self, map: &[usize]) {
        match self {
            Expr::Var(i) => *i = map[*i],
            Expr::Num(_) => {}
            Expr::Neg(e) | Expr::Call(_, e) => e.remap(map),
            Expr::Bin(_, l, r) => {
                l.remap(map);
                r.remap(map);
            }
        }
    }

    fn eval<T: Scalar>(&self, vars: &[Option<T>], names: &[String]) -> Result<T, EvalError> {
        Ok(match self {
            Expr::Num(v) => T::from_f64(*v),
            Expr::Var(i) => vars[*i].ok_or_else(|| EvalError::Unbound(names[*i].clone()))?,
            Expr::Neg(e) => -e.eval(vars, names)?,
            Expr::Call(f, e) => {
                let x = e.eval(vars, names)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log => x.ln()?,
                    Func::Sqrt => x.sqrt()?,
                    Func::Abs => x.abs(),
                }
            }
            Expr::Bin(op, l, r) => {
                // integer literal exponents: repeated multiplication
                if let (BinOp::Pow, Expr::Num(k)) = (op, r.as_ref()) {
                    if libm::trunc(*k) == *k && k.abs() <= 1024.0 {
                        return l.eval(vars, names)?.powi(*k as i64);
                    }
                }
                let a = l.eval(vars, names)?;
                let b = r.eval(vars, names)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.checked_div(b)?,
                    BinOp::Pow => a.pow(b)?,
                }
            }
        })
    }

    fn write(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(i) => f.write_str(&names[*i]),
            Expr::Neg(e) => {
                f.write_str("(-")?;
                e.write(names, f)?;
                f.write_str(")")
            }
            Expr::Call(func, e) => {
                write!(f, "{}(", func.name())?;
                e.write(names, f)?;
                f.write_str(")")
            }
            Expr::Bin(op, l, r) => {
                f.write_str("(")?;
                l.write(names, f)?;
                write!(f, " {} ", op.symbol())?;
                r.write(names, f)?;
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    UnknownFunction(String),
}

/// Parse failure at a 1-based byte position (end of input is `len + 1`).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error at byte {}: expected {expected}, found {found}", self.position)
            }
            ParseErrorKind::UnknownFunction(name) => {
                write!(f, "unknown function '{name}' at byte {}", self.position)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: &'static str },
}

/// Variable bindings for [`LagrangianExpr::eval`].
pub type EvalEnv = BTreeMap<String, Complex64>;

/// A parsed Lagrangian. `free_vars` is sorted and holds exactly the
/// identifiers that occur in the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianExpr {
    ast: Expr,
    free_vars: Vec<String>,
}

impl LagrangianExpr {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let mut p = parser::Parser::new(source)?;
        let mut ast = p.parse_all()?;
        let mut sorted = p.names.clone();
        sorted.sort();
        let map: Vec<usize> = p.names.iter().map(|n| sorted.iter().position(|s| s == n).unwrap_or(0)).collect();
        ast.remap(&map);
        Ok(Self { ast, free_vars: sorted })
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free_vars
    }

    pub fn uses(&self, name: &str) -> bool {
        self.free_vars.iter().any(|v| v == name)
    }

    /// Replaces the named variables by numeric constants.
    pub fn bind_constants(&self, constants: &[(&str, f64)]) -> Self {
        fn subst(e: &Expr, values: &[Option<f64>], map: &[usize]) -> Expr {
            match e {
                Expr::Var(i) => match values[*i] {
                    Some(v) => Expr::Num(v),
                    None => Expr::Var(map[*i]),
                },
                Expr::Num(v) => Expr::Num(*v),
                Expr::Neg(x) => Expr::Neg(Box::new(subst(x, values, map))),
                Expr::Call(f, x) => Expr::Call(*f, Box::new(subst(x, values, map))),
                Expr::Bin(op, l, r) => Expr::Bin(*op, Box::new(subst(l, values, map)), Box::new(subst(r, values, map))),
            }
        }
        let values: Vec<Option<f64>> =
            self.free_vars.iter().map(|n| constants.iter().find(|(c, _)| c == n).map(|(_, v)| *v)).collect();
        let mut kept = Vec::new();
        let mut map = alloc::vec![0; self.free_vars.len()];
        for (i, name) in self.free_vars.iter().enumerate() {
            if values[i].is_none() {
                map[i] = kept.len();
                kept.push(name.clone());
            }
        }
        Self { ast: subst(&self.ast, &values, &map), free_vars: kept }
    }

    fn lookup<T: Copy>(&self, env: &BTreeMap<String, T>) -> Vec<Option<T>> {
        self.free_vars.iter().map(|n| env.get(n).copied()).collect()
    }

    /// Complex-mode evaluation (principal branches).
    pub fn eval(&self, env: &EvalEnv) -> Result<Complex64, EvalError> {
        self.ast.eval(&self.lookup(env), &self.free_vars)
    }

    /// Real-mode evaluation: logarithms, roots and fractional powers of
    /// negative arguments are errors.
    pub fn eval_real(&self, env: &BTreeMap<String, f64>) -> Result<f64, EvalError> {
        self.ast.eval(&self.lookup(env), &self.free_vars)
    }

    /// Evaluation over any [`Scalar`] with variables given positionally in
    /// `free_vars` order.
    pub fn eval_with<T: Scalar>(&self, vars: &[Option<T>]) -> Result<T, EvalError> {
        self.ast.eval(vars, &self.free_vars)
    }

    /// Exact `dL/d var` in complex mode; zero when `var` does not occur.
    pub fn partial(&self, var: &str, env: &EvalEnv) -> Result<Complex64, EvalError> {
        let vars: Vec<Option<Dual<Complex64>>> = self
            .free_vars
            .iter()
            .map(|n| env.get(n).map(|&v| if n == var { Dual::variable(v) } else { Dual::constant(v) }))
            .collect();
        if !self.uses(var) {
            // still surface unbound variables and domain errors
            self.ast.eval(&vars, &self.free_vars)?;
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.ast.eval(&vars, &self.free_vars)?.eps)
    }

    /// Binds the expression to an ordered slot list, failing if it uses a
    /// name outside it.
    pub fn bind_slots<'a>(&'a self, slots: &[&str]) -> Result<SlotLagrangian<'a>, SlotError> {
        let mut map = Vec::with_capacity(self.free_vars.len());
        for name in &self.free_vars {
            match slots.iter().position(|s| s == name) {
                Some(k) => map.push(k),
                None => {
                    return Err(SlotError {
                        name: name.clone(),
                        allowed: slots.iter().map(|s| String::from(*s)).collect(),
                    })
                }
            }
        }
        Ok(SlotLagrangian { expr: self, map, n_slots: slots.len() })
    }
}

impl fmt::Display for LagrangianExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.write(&self.free_vars, f)
    }
}

impl core::str::FromStr for LagrangianExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("variable '{name}' is not a slot of this problem (allowed: {allowed:?})")]
pub struct SlotError {
    pub name: String,
    pub allowed: Vec<String>,
}

/// A Lagrangian whose variables are addressed by slot position.
#[derive(Debug, Clone)]
pub struct SlotLagrangian<'a> {
    expr: &'a LagrangianExpr,
    /// free-variable index -> slot index
    map: Vec<usize>,
    n_slots: usize,
}

impl SlotLagrangian<'_> {
    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn uses_slot(&self, slot: usize) -> bool {
        self.map.contains(&slot)
    }

    fn gather<T: Copy, U>(&self, point: &[T], seed: impl Fn(usize, T) -> U) -> Vec<Option<U>> {
        debug_assert_eq!(point.len(), self.n_slots);
        self.map.iter().map(|&k| Some(seed(k, point[k]))).collect()
    }

    pub fn value<T: Scalar>(&self, point: &[T]) -> Result<T, EvalError> {
        self.expr.eval_with(&self.gather(point, |_, v| v))
    }

    /// `dL/d slot` at `point`; exactly zero for unused slots.
    pub fn partial<T: Scalar>(&self, point: &[T], slot: usize) -> Result<T, EvalError> {
        let vars = self.gather(point, |k, v| if k == slot { Dual::variable(v) } else { Dual::constant(v) });
        let out = self.expr.eval_with(&vars)?;
        Ok(if self.uses_slot(slot) { out.eps } else { T::zero() })
    }

    /// Value and all first partials.
    pub fn gradient<T: Scalar>(&self, point: &[T]) -> Result<(T, Vec<T>), EvalError> {
        let mut grad = Vec::with_capacity(self.n_slots);
        let mut value = None;
        for slot in 0..self.n_slots {
            if !self.uses_slot(slot) {
                grad.push(T::zero());
                continue;
            }
            let vars = self.gather(point, |k, v| if k == slot { Dual::variable(v) } else { Dual::constant(v) });
            let out = self.expr.eval_with(&vars)?;
            value = Some(out.re);
            grad.push(out.eps);
        }
        let value = match value {
            Some(v) => v,
            None => self.value(point)?,
        };
        Ok((value, grad))
    }

    /// `d2L / (d slot_i d slot_j)` by nested dual evaluation.
    pub fn second_partial<T: Scalar>(&self, point: &[T], i: usize, j: usize) -> Result<T, EvalError> {
        if !self.uses_slot(i) || !self.uses_slot(j) {
            self.value(point)?;
            return Ok(T::zero());
        }
        let vars = self.gather(point, |k, v| {
            let inner = if k == j { Dual::variable(v) } else { Dual::constant(v) };
            let outer = if k == i { Dual::constant(T::one()) } else { Dual::constant(T::zero()) };
            Dual::new(inner, outer)
        });
        Ok(self.expr.eval_with(&vars)?.eps.eps)
    }
}

#[cfg(test)]
mod tests;
