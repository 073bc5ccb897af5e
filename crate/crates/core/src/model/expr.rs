//! The expression sub-language shared by guards, transformers, relations,
//! policies, and observations. A single AST covers boolean, integer, symbol,
//! and map expressions; the validator pins each occurrence to a type and
//! restricts primed variables to relational positions.

use super::Value;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Expr {
    Lit(Value),
    /// A name: state variable, event parameter, bound quantifier variable,
    /// context variable, or symbol literal. Resolution happens at validation.
    Var(String),
    /// Primed state variable; denotes the post-state in a relation.
    Prime(String),
    MapGet(Box<Expr>, Box<Expr>),
    MapSet(Box<Expr>, Box<Expr>, Box<Expr>),
    /// Map literal; keys must exactly cover one declared carrier.
    MapLit(Vec<(String, Expr)>),
    Ite(Box<Expr>, Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    /// Quantifier over a declared carrier: (var, carrier, body).
    Forall(String, String, Box<Expr>),
    Exists(String, String, Box<Expr>),
}

impl Expr {
    pub fn lit_bool(b: bool) -> Expr {
        Expr::Lit(Value::Bool(b))
    }

    pub fn lit_int(i: i64) -> Expr {
        Expr::Lit(Value::Int(i))
    }

    /// A symbol reference in the canonical form the parser produces: a name
    /// that resolves to itself at evaluation time.
    pub fn sym(s: impl Into<String>) -> Expr {
        Expr::Var(s.into())
    }

    pub fn var(s: impl Into<String>) -> Expr {
        Expr::Var(s.into())
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::Cmp(CmpOp::Eq, Box::new(a), Box::new(b))
    }

    pub fn ne(a: Expr, b: Expr) -> Expr {
        Expr::Cmp(CmpOp::Ne, Box::new(a), Box::new(b))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }

    pub fn implies(a: Expr, b: Expr) -> Expr {
        Expr::Implies(Box::new(a), Box::new(b))
    }

    pub fn get(m: Expr, k: Expr) -> Expr {
        Expr::MapGet(Box::new(m), Box::new(k))
    }

    pub fn set(m: Expr, k: Expr, v: Expr) -> Expr {
        Expr::MapSet(Box::new(m), Box::new(k), Box::new(v))
    }

    pub fn ite(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::Ite(Box::new(c), Box::new(t), Box::new(e))
    }

    /// Conjunction of a list, `true` when empty.
    pub fn conj(mut es: Vec<Expr>) -> Expr {
        match es.len() {
            0 => Expr::lit_bool(true),
            1 => es.pop().unwrap(),
            _ => {
                let mut it = es.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Expr::and)
            }
        }
    }

    /// Disjunction of a list, `false` when empty.
    pub fn disj(mut es: Vec<Expr>) -> Expr {
        match es.len() {
            0 => Expr::lit_bool(false),
            1 => es.pop().unwrap(),
            _ => {
                let mut it = es.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Expr::or)
            }
        }
    }
}

/// Substitute a binding `name -> value` in an expression, respecting
/// quantifier shadowing.
pub fn subst_expr(e: &Expr, name: &str, val: &Value) -> Expr {
    match e {
        Expr::Lit(v) => Expr::Lit(v.clone()),
        Expr::Var(n) => {
            if n == name {
                Expr::Lit(val.clone())
            } else {
                Expr::Var(n.clone())
            }
        }
        Expr::Prime(n) => Expr::Prime(n.clone()),
        Expr::MapGet(m, k) => Expr::get(subst_expr(m, name, val), subst_expr(k, name, val)),
        Expr::MapSet(m, k, v) => Expr::set(
            subst_expr(m, name, val),
            subst_expr(k, name, val),
            subst_expr(v, name, val),
        ),
        Expr::MapLit(entries) => Expr::MapLit(
            entries
                .iter()
                .map(|(k, v)| (k.clone(), subst_expr(v, name, val)))
                .collect(),
        ),
        Expr::Ite(c, t, f) => Expr::ite(
            subst_expr(c, name, val),
            subst_expr(t, name, val),
            subst_expr(f, name, val),
        ),
        Expr::Arith(op, a, b) => Expr::Arith(
            *op,
            Box::new(subst_expr(a, name, val)),
            Box::new(subst_expr(b, name, val)),
        ),
        Expr::Cmp(op, a, b) => Expr::Cmp(
            *op,
            Box::new(subst_expr(a, name, val)),
            Box::new(subst_expr(b, name, val)),
        ),
        Expr::Not(a) => Expr::not(subst_expr(a, name, val)),
        Expr::And(a, b) => Expr::and(subst_expr(a, name, val), subst_expr(b, name, val)),
        Expr::Or(a, b) => Expr::or(subst_expr(a, name, val), subst_expr(b, name, val)),
        Expr::Implies(a, b) => Expr::implies(subst_expr(a, name, val), subst_expr(b, name, val)),
        Expr::Forall(x, c, b) => {
            if x == name {
                e.clone()
            } else {
                Expr::Forall(x.clone(), c.clone(), Box::new(subst_expr(b, name, val)))
            }
        }
        Expr::Exists(x, c, b) => {
            if x == name {
                e.clone()
            } else {
                Expr::Exists(x.clone(), c.clone(), Box::new(subst_expr(b, name, val)))
            }
        }
    }
}

/// Substitute a binding in every expression of a program.
pub fn subst_program(p: &super::Program, name: &str, val: &Value) -> super::Program {
    use super::{Assign, Program};
    match p {
        Program::None => Program::None,
        Program::Basic(assigns) => Program::Basic(
            assigns
                .iter()
                .map(|a| Assign {
                    var: a.var.clone(),
                    key: a.key.as_ref().map(|k| subst_expr(k, name, val)),
                    rhs: subst_expr(&a.rhs, name, val),
                })
                .collect(),
        ),
        Program::Seq(a, b, m) => Program::Seq(
            Box::new(subst_program(a, name, val)),
            Box::new(subst_program(b, name, val)),
            m.as_ref().map(|e| subst_expr(e, name, val)),
        ),
        Program::Cond(b, p1, p2) => Program::Cond(
            subst_expr(b, name, val),
            Box::new(subst_program(p1, name, val)),
            Box::new(subst_program(p2, name, val)),
        ),
        Program::While(b, body, inv) => Program::While(
            subst_expr(b, name, val),
            Box::new(subst_program(body, name, val)),
            inv.as_ref().map(|e| subst_expr(e, name, val)),
        ),
        Program::Await(b, body) => Program::Await(
            subst_expr(b, name, val),
            Box::new(subst_program(body, name, val)),
        ),
        Program::Nondt(r) => Program::Nondt(subst_expr(r, name, val)),
    }
}
