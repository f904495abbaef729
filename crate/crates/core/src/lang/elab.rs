//! Elaboration of surface definitions into core Pauli expressions.
//!
//! Clause patterns are expanded against the input type into paths of
//! in1/in2 choices ending in X, Z or a variable, then assembled into nested
//! tensor and X/Z cases. Bodies are elaborated in checking mode against the
//! output type.

use std::collections::BTreeMap;

use super::parse::{Clause, IExpr, Index, Pattern, SCExpr, SDef, SExpr};
use super::syntax::{CExpr, PExpr};
use super::types::QType;
use super::typing::leaf_value;
use super::{fresh, Machine};
use crate::error::{bail, Result};

type Scope = BTreeMap<String, QType>;
type Env = BTreeMap<String, usize>;

#[derive(Clone, Debug)]
enum Term {
    X,
    Z,
    Var(String),
}

#[derive(Clone, Debug)]
struct Item<'a> {
    path: Vec<u8>,
    term: Term,
    env: Env,
    clause: &'a Clause,
}

pub(crate) struct Elaborator<'a> {
    m: &'a Machine,
    name: &'a str,
    params: BTreeMap<String, (QType, CExpr)>,
}

fn letter_bits(c: char) -> (u64, u64) {
    match c {
        'X' => (1, 0),
        'Z' => (0, 1),
        'Y' => (1, 1),
        _ => (0, 0),
    }
}

/// A leaf path, the pattern left at it, and an index variable bound along the way.
type Expansion = (Vec<u8>, Term, Option<(String, usize)>);

fn expand(pat: &Pattern, ty: &QType, clause: &Clause) -> Result<Vec<Expansion>> {
    let at = format!("{}:{}", clause.line, clause.col);
    match pat {
        Pattern::X | Pattern::Z => {
            if *ty != QType::Pauli {
                bail!(SyntaxError, "{at}: pattern {} matches one qudit, but the type here is {ty}", letter_of(pat));
            }
            let t = if *pat == Pattern::X { Term::X } else { Term::Z };
            Ok(vec![(vec![], t, None)])
        }
        Pattern::Var(v) => Ok(vec![(vec![], Term::Var(v.clone()), None)]),
        Pattern::In(i, p) => {
            let QType::Tensor(a, b) = ty else {
                bail!(SyntaxError, "{at}: in{i} pattern at single-qudit type");
            };
            let sub = if *i == 1 { a } else { b };
            let mut out = expand(p, sub, clause)?;
            for (path, _, _) in out.iter_mut() {
                path.insert(0, *i);
            }
            Ok(out)
        }
        Pattern::Leaf(c, idx) => {
            let t = if *c == 'X' { Term::X } else { Term::Z };
            let leaf = |n: usize| {
                ty.leaf_path(n - 1).ok_or_else(|| {
                    crate::error::err!(SyntaxError, "{at}: qudit index {n} is out of range for {ty}")
                })
            };
            match idx {
                Index::Lit(n) => Ok(vec![(leaf(*n)?, t, None)]),
                Index::Var(v) => (1..=ty.rank()).map(|n| Ok((leaf(n)?, t.clone(), Some((v.clone(), n))))).collect(),
            }
        }
    }
}

fn letter_of(p: &Pattern) -> &'static str {
    if *p == Pattern::X {
        "X"
    } else {
        "Z"
    }
}

fn pos(c: &Clause) -> String {
    format!("{}:{}", c.line, c.col)
}

impl<'a> Elaborator<'a> {
    pub(crate) fn new(m: &'a Machine, def: &'a SDef, args: &[CExpr]) -> Result<Self> {
        if args.len() != def.params.len() {
            bail!(TypeMismatch, "{} takes {} argument(s), got {}", def.name, def.params.len(), args.len());
        }
        let mut params = BTreeMap::new();
        for ((p, t), a) in def.params.iter().zip(args) {
            let got = m.typecheck_c(a)?;
            if got != t.bar() {
                bail!(TypeMismatch, "argument {p} of {} expects {t}, got a value of type {got}", def.name);
            }
            params.insert(p.clone(), (t.clone(), a.clone()));
        }
        Ok(Elaborator { m, name: &def.name, params })
    }

    /// The body of `def` as a Pauli expression in the returned variable.
    pub(crate) fn definition(&self, def: &'a SDef) -> Result<(String, PExpr)> {
        let mut items = Vec::new();
        for c in &def.clauses {
            for (path, term, bind) in expand(&c.pattern, &def.input, c)? {
                items.push(Item { path, term, env: bind.into_iter().collect(), clause: c });
            }
        }
        let x = fresh();
        let body = self.tree(&def.input, &def.output, &x, items, "")?;
        Ok((x, body))
    }

    fn tree(&self, ty: &QType, out: &QType, scrut: &str, items: Vec<Item<'a>>, at: &str) -> Result<PExpr> {
        let name = self.name;
        let here = if at.is_empty() { "the input".to_string() } else { format!("component {at}") };
        if let Some(i) = items.iter().position(|it| it.path.is_empty() && matches!(it.term, Term::Var(_))) {
            if items.len() > 1 {
                let other = items.iter().enumerate().find(|(k, _)| *k != i).map(|(_, it)| it.clause).unwrap();
                bail!(
                    SyntaxError,
                    "{name}: clauses at {} and {} overlap on {here}",
                    pos(items[i].clause),
                    pos(other)
                );
            }
            let it = &items[i];
            let Term::Var(v) = &it.term else { unreachable!() };
            let scope = Scope::from([(v.clone(), ty.clone())]);
            let body = self.expr(&it.clause.body, out, &scope, &it.env)?;
            return Ok(PExpr::Let(v.clone(), Box::new(PExpr::Var(scrut.to_string())), Box::new(body)));
        }
        match ty {
            QType::Pauli => {
                let mut xs = Vec::new();
                let mut zs = Vec::new();
                for it in items {
                    match it.term {
                        Term::X => xs.push(it),
                        Term::Z => zs.push(it),
                        Term::Var(_) => unreachable!(),
                    }
                }
                let branch = |group: Vec<Item<'a>>, letter: &str| -> Result<PExpr> {
                    match group.as_slice() {
                        [] => bail!(SyntaxError, "{name}: no clause for {letter} on {here}"),
                        [it] => self.expr(&it.clause.body, out, &Scope::new(), &it.env),
                        [a, b, ..] => bail!(
                            SyntaxError,
                            "{name}: clauses at {} and {} both define {letter} on {here}",
                            pos(a.clause),
                            pos(b.clause)
                        ),
                    }
                };
                let ex = branch(xs, "X")?;
                let ez = branch(zs, "Z")?;
                Ok(PExpr::CasePauli(Box::new(PExpr::Var(scrut.to_string())), Box::new(ex), Box::new(ez)))
            }
            QType::Tensor(a, b) => {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for mut it in items {
                    let side = it.path.remove(0);
                    if side == 1 {
                        left.push(it);
                    } else {
                        right.push(it);
                    }
                }
                let (x1, x2) = (fresh(), fresh());
                let sub = |k: u8| if at.is_empty() { format!("in{k}") } else { format!("{at}.in{k}") };
                if left.is_empty() {
                    bail!(SyntaxError, "{name}: no clause covers {}", sub(1));
                }
                if right.is_empty() {
                    bail!(SyntaxError, "{name}: no clause covers {}", sub(2));
                }
                let e1 = self.tree(a, out, &x1, left, &sub(1))?;
                let e2 = self.tree(b, out, &x2, right, &sub(2))?;
                Ok(PExpr::CaseTensor(Box::new(PExpr::Var(scrut.to_string())), x1, Box::new(e1), x2, Box::new(e2)))
            }
        }
    }

    fn index(&self, i: &IExpr, env: &Env) -> Result<i64> {
        Ok(match i {
            IExpr::Int(n) => *n as i64,
            IExpr::Var(v) => match env.get(v) {
                Some(&n) => n as i64,
                None => bail!(UnboundVariable, "{}: unbound index variable {v}", self.name),
            },
            IExpr::Add(a, b) => self.index(a, env)? + self.index(b, env)?,
            IExpr::Sub(a, b) => self.index(a, env)? - self.index(b, env)?,
        })
    }

    /// Elaborate a surface Pauli expression at the expected type.
    pub(crate) fn expr(&self, e: &SExpr, want: &QType, scope: &Scope, env: &Env) -> Result<PExpr> {
        let name = self.name;
        match e {
            SExpr::Letter(c) => {
                if *want != QType::Pauli {
                    bail!(TypeMismatch, "{name}: letter {c} used at type {want}; write {c}.j for qudit j");
                }
                let (x, z) = letter_bits(*c);
                Ok(PExpr::Const(CExpr::pair(CExpr::Const(x), CExpr::Const(z))))
            }
            SExpr::Leaf(c, i) => {
                let n = self.index(i, env)?;
                let rank = want.rank() as i64;
                if n < 1 || n > rank {
                    bail!(TypeMismatch, "{name}: qudit index {n} is out of range for {want}");
                }
                let mut leaves = vec![0; 2 * rank as usize];
                let (x, z) = letter_bits(*c);
                leaves[2 * (n as usize - 1)] = x;
                leaves[2 * (n as usize - 1) + 1] = z;
                Ok(PExpr::Const(leaf_value(want, &leaves).to_expr()))
            }
            SExpr::Var(x) => {
                if scope.contains_key(x) {
                    return Ok(PExpr::Var(x.clone()));
                }
                match self.params.get(x) {
                    Some((t, v)) if t == want => Ok(PExpr::Const(v.clone())),
                    Some((t, _)) => bail!(TypeMismatch, "{name}: parameter {x} has type {t}, expected {want}"),
                    None => bail!(UnboundVariable, "{name}: unbound variable {x}"),
                }
            }
            SExpr::Pair(a, b) => Ok(PExpr::Const(CExpr::pair(self.cexpr(a, scope, env)?, self.cexpr(b, scope, env)?))),
            SExpr::Tensor(a, b) => {
                let QType::Tensor(q1, q2) = want else {
                    bail!(TypeMismatch, "{name}: tensor ** used at single-qudit type");
                };
                let l = PExpr::inj(1, self.expr(a, q1, scope, env)?, want.clone());
                let r = PExpr::inj(2, self.expr(b, q2, scope, env)?, want.clone());
                Ok(PExpr::star(l, r))
            }
            SExpr::Star(a, b) => Ok(PExpr::star(self.expr(a, want, scope, env)?, self.expr(b, want, scope, env)?)),
            SExpr::Phase(c, e) => Ok(PExpr::phase(self.cexpr(c, scope, env)?, self.expr(e, want, scope, env)?)),
            SExpr::In(i, e) => {
                let QType::Tensor(q1, q2) = want else {
                    bail!(TypeMismatch, "{name}: in{i} used at single-qudit type");
                };
                let sub = if *i == 1 { q1 } else { q2 };
                Ok(PExpr::inj(*i, self.expr(e, sub, scope, env)?, want.clone()))
            }
            SExpr::Let(x, t, e1, e2) => {
                let bound = self.expr(e1, t, scope, env)?;
                let mut inner = scope.clone();
                inner.insert(x.clone(), t.clone());
                let body = self.expr(e2, want, &inner, env)?;
                Ok(PExpr::Let(x.clone(), Box::new(bound), Box::new(body)))
            }
            SExpr::Pow(e, r) => Ok(PExpr::Pow(Box::new(self.expr(e, want, scope, env)?), r % self.m.d())),
        }
    }

    fn cexpr(&self, c: &SCExpr, scope: &Scope, env: &Env) -> Result<CExpr> {
        let d = self.m.d();
        let minus_one = || CExpr::Const(d - 1);
        Ok(match c {
            SCExpr::Int(n) => CExpr::Const(n % d),
            SCExpr::Var(x) => {
                if scope.contains_key(x) {
                    CExpr::Var(x.clone())
                } else if let Some((_, v)) = self.params.get(x) {
                    v.clone()
                } else if let Some(&n) = env.get(x) {
                    CExpr::Const(n as u64 % d)
                } else {
                    bail!(UnboundVariable, "{}: unbound variable {x}", self.name)
                }
            }
            SCExpr::Add(a, b) => CExpr::add(self.cexpr(a, scope, env)?, self.cexpr(b, scope, env)?),
            SCExpr::Sub(a, b) => {
                CExpr::add(self.cexpr(a, scope, env)?, CExpr::scale(minus_one(), self.cexpr(b, scope, env)?))
            }
            SCExpr::Mul(a, b) => CExpr::scale(self.cexpr(a, scope, env)?, self.cexpr(b, scope, env)?),
            SCExpr::Neg(a) => CExpr::scale(minus_one(), self.cexpr(a, scope, env)?),
            SCExpr::Pair(a, b) => CExpr::pair(self.cexpr(a, scope, env)?, self.cexpr(b, scope, env)?),
            SCExpr::Omega(a, b) => {
                let Some(ty) = self.infer(a, scope).or_else(|| self.infer(b, scope)) else {
                    bail!(SyntaxError, "{}: cannot infer the type of omega's arguments", self.name);
                };
                self.m.omega_apply(&ty.bar(), self.cexpr(a, scope, env)?, self.cexpr(b, scope, env)?)?
            }
        })
    }

    /// The Pauli type of the first scoped or parameter variable in `c`.
    fn infer(&self, c: &SCExpr, scope: &Scope) -> Option<QType> {
        match c {
            SCExpr::Var(x) => scope.get(x).or_else(|| self.params.get(x).map(|(t, _)| t)).cloned(),
            SCExpr::Int(_) => None,
            SCExpr::Neg(a) => self.infer(a, scope),
            SCExpr::Add(a, b) | SCExpr::Sub(a, b) | SCExpr::Mul(a, b) | SCExpr::Pair(a, b) | SCExpr::Omega(a, b) => {
                self.infer(a, scope).or_else(|| self.infer(b, scope))
            }
        }
    }
}
