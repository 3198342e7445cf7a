//! Interval constraints from control-flow graphs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::cfg::{build_cfg, Action, Cfg};
use super::syntax::{Cond, Expr, Pos, Program, RelOp, Stmt};
use crate::csys::text::ParseError;
use crate::csys::{SystemBuilder, VarId};
use crate::extint::ExtInt;
use crate::interval::{Interval, IntervalSystem, IvForm};
use crate::scalar::Scalar;

/// An interval system generated from a program, with one interval variable
/// `x@P` per program variable `x` and program point `P`.
#[derive(Clone, Debug)]
pub struct Generated<S> {
    pub system: IntervalSystem<S>,
    pub cfg: Cfg,
    /// Program variables, in order of first assignment.
    pub vars: Vec<String>,
    at: BTreeMap<(u32, String), VarId>,
}

impl<S: Scalar> Generated<S> {
    /// The constraint variable of `var` at `point`.
    pub fn var_at(&self, point: u32, var: &str) -> Option<VarId> {
        self.at.get(&(point, var.to_string())).copied()
    }
}

fn assigned(stmts: &[Stmt], out: &mut Vec<String>) {
    for s in stmts {
        match s {
            Stmt::Assign { var, .. } => {
                if !out.contains(var) {
                    out.push(var.clone());
                }
            }
            Stmt::If { then, otherwise, .. } => {
                assigned(then, out);
                assigned(otherwise, out);
            }
            Stmt::While { body, .. } => assigned(body, out),
        }
    }
}

fn check_uses(stmts: &[Stmt], vars: &[String]) -> Result<(), ParseError> {
    let undeclared = |x: &str, pos: Pos| ParseError::new(pos.line, pos.column, format!("variable `{x}` is never assigned"));
    let check_cond = |c: &Cond| if vars.contains(&c.var) { Ok(()) } else { Err(undeclared(&c.var, c.pos)) };
    for s in stmts {
        match s {
            Stmt::Assign { expr, .. } => {
                let mut err = None;
                expr.for_each_var(&mut |x, pos| {
                    if err.is_none() && !vars.iter().any(|v| v == x) {
                        err = Some(undeclared(x, pos));
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
            Stmt::If { cond, then, otherwise } => {
                check_cond(cond)?;
                check_uses(then, vars)?;
                check_uses(otherwise, vars)?;
            }
            Stmt::While { cond, body } => {
                check_cond(cond)?;
                check_uses(body, vars)?;
            }
        }
    }
    Ok(())
}

/// The position of the first statement, for diagnostics about constants.
fn first_pos(stmts: &[Stmt]) -> Pos {
    match stmts.first() {
        Some(Stmt::Assign { pos, .. }) => *pos,
        Some(Stmt::If { cond, .. } | Stmt::While { cond, .. }) => cond.pos,
        None => Pos { line: 1, column: 1 },
    }
}

/// An operand inside one edge: a system variable, or the result of an
/// earlier definition on the same edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Operand {
    Var(VarId),
    Temp(usize),
}

struct Gen<'a, S> {
    b: SystemBuilder<IvForm<S>>,
    vars: &'a [String],
    constants: HashMap<BigInt, VarId>,
}

struct EdgeDefs<S> {
    defs: Vec<(String, IvForm<S>, Vec<Operand>)>,
}

impl<S: Scalar> EdgeDefs<S> {
    fn def(&mut self, hint: &str, form: IvForm<S>, inputs: Vec<Operand>) -> Operand {
        self.defs.push((hint.to_string(), form, inputs));
        Operand::Temp(self.defs.len() - 1)
    }

    fn is_read(&self, t: usize) -> bool {
        self.defs.iter().any(|(_, _, ins)| ins.contains(&Operand::Temp(t)))
    }
}

impl<S: Scalar> Gen<'_, S> {
    fn scalar(&self, k: &BigInt, pos: Pos) -> Result<S, ParseError> {
        S::from_big(k).ok_or_else(|| ParseError::new(pos.line, pos.column, format!("constant {k} is out of range")))
    }

    /// The variable `_k{c}` holding `{c}`, defined once.
    fn constant(&mut self, k: &BigInt, pos: Pos) -> Result<Operand, ParseError> {
        if let Some(&v) = self.constants.get(k) {
            return Ok(Operand::Var(v));
        }
        let s = self.scalar(k, pos)?;
        let name = if k.sign() == num_bigint::Sign::Minus { format!("_km{}", -k) } else { format!("_k{k}") };
        let v = self.b.fresh(&name);
        let value = ExtInt::Fin(s);
        self.b
            .push(v, IvForm::Const(Interval::from_bounds(value.clone(), value)), vec![])
            .expect("constants are nullary");
        self.constants.insert(k.clone(), v);
        Ok(Operand::Var(v))
    }

    /// The half-line or point a guard intersects with.
    fn guard_interval(&self, c: &Cond) -> Result<Option<Interval<S>>, ParseError> {
        let k = |d: i64| -> Result<ExtInt<S>, ParseError> { Ok(ExtInt::Fin(self.scalar(&(&c.value + d), c.pos)?)) };
        Ok(Some(match c.op {
            RelOp::Lt => Interval::from_bounds(ExtInt::NegInf, k(-1)?),
            RelOp::Le => Interval::from_bounds(ExtInt::NegInf, k(0)?),
            RelOp::Eq => Interval::from_bounds(k(0)?, k(0)?),
            RelOp::Ge => Interval::from_bounds(k(0)?, ExtInt::PosInf),
            RelOp::Gt => Interval::from_bounds(k(1)?, ExtInt::PosInf),
            RelOp::Ne => return Ok(None),
        }))
    }

    fn expr(
        &mut self,
        e: &Expr,
        state: &[Operand],
        defs: &mut EdgeDefs<S>,
        hint: &str,
        pos: Pos,
    ) -> Result<Operand, ParseError> {
        if let Some(k) = e.constant() {
            return self.constant(&k, pos);
        }
        Ok(match e {
            Expr::Int(_) => unreachable!("constants are folded"),
            Expr::Var(x, _) => state[self.index(x)],
            Expr::Add(a, b) => {
                let a = self.expr(a, state, defs, hint, pos)?;
                let b = self.expr(b, state, defs, hint, pos)?;
                defs.def(hint, IvForm::Add, vec![a, b])
            }
            Expr::Sub(a, b) => {
                let a = self.expr(a, state, defs, hint, pos)?;
                let b = match b.constant() {
                    Some(k) => self.constant(&-k, pos)?,
                    None => {
                        let b = self.expr(b, state, defs, hint, pos)?;
                        defs.def(hint, IvForm::Neg, vec![b])
                    }
                };
                defs.def(hint, IvForm::Add, vec![a, b])
            }
            Expr::Mul(a, b) => {
                let a = self.expr(a, state, defs, hint, pos)?;
                let b = self.expr(b, state, defs, hint, pos)?;
                defs.def(hint, IvForm::Mul, vec![a, b])
            }
            Expr::Neg(a) => {
                let a = self.expr(a, state, defs, hint, pos)?;
                defs.def(hint, IvForm::Neg, vec![a])
            }
        })
    }

    fn index(&self, x: &str) -> usize {
        self.vars.iter().position(|v| v == x).expect("uses are checked")
    }

    /// Applies the actions of one edge to the variables of `from`,
    /// writing the results into those of `to`.
    fn edge(&mut self, k: usize, actions: &[Action], from: &[VarId], to: &[VarId]) -> Result<(), ParseError> {
        let mut state: Vec<Operand> = from.iter().map(|&v| Operand::Var(v)).collect();
        let mut defs = EdgeDefs { defs: Vec::new() };
        for a in actions {
            match a {
                Action::Assign(x, e) => {
                    let hint = x.as_str();
                    let pos = Pos::default();
                    let value = match e.constant() {
                        // `({0}·W) + {c}` keeps the result empty where the
                        // source point is unreachable.
                        Some(c) => {
                            let zero = self.constant(&BigInt::from(0), pos)?;
                            let z = defs.def(hint, IvForm::Mul, vec![zero, state[0]]);
                            let c = self.constant(&c, pos)?;
                            defs.def(hint, IvForm::Add, vec![z, c])
                        }
                        None => self.expr(e, &state, &mut defs, hint, pos)?,
                    };
                    state[self.index(x)] = value;
                }
                Action::Guard(c) => {
                    let Some(k) = self.guard_interval(c)? else { continue };
                    let i = self.index(&c.var);
                    let t = defs.def(&c.var, IvForm::Meet(k), vec![state[i]]);
                    state[i] = t;
                    if self.vars.len() > 1 {
                        // The other variables become empty with the guarded one.
                        let zero = self.constant(&BigInt::from(0), c.pos)?;
                        let z = defs.def(&c.var, IvForm::Mul, vec![zero, t]);
                        for (j, y) in self.vars.iter().enumerate() {
                            if j != i {
                                state[j] = defs.def(y, IvForm::Add, vec![z, state[j]]);
                            }
                        }
                    }
                }
            }
        }
        // Temporaries that end up as a variable's value and feed nothing
        // else are written straight into the target point.
        let mut outputs: Vec<Option<VarId>> = vec![None; defs.defs.len()];
        let mut copies = Vec::new();
        for (j, op) in state.iter().enumerate() {
            match *op {
                Operand::Temp(t) if outputs[t].is_none() && !defs.is_read(t) => outputs[t] = Some(to[j]),
                other => copies.push((to[j], other)),
            }
        }
        for (t, (hint, _, _)) in defs.defs.iter().enumerate() {
            if outputs[t].is_none() {
                outputs[t] = Some(self.b.fresh(&format!("_e{k}.{hint}")));
            }
        }
        let resolve = |op: Operand| match op {
            Operand::Var(v) => v,
            Operand::Temp(t) => outputs[t].expect("every temporary has an output"),
        };
        for (t, (_, form, inputs)) in defs.defs.into_iter().enumerate() {
            let inputs = inputs.into_iter().map(resolve).collect();
            self.b.push(resolve(Operand::Temp(t)), form, inputs).expect("generated constraint");
        }
        for (target, op) in copies {
            self.b.push(target, IvForm::Meet(Interval::full()), vec![resolve(op)]).expect("copy");
        }
        Ok(())
    }
}

/// Generates the interval system of a program.
///
/// Entry variables are `⊤`. Along each edge, guards intersect with the
/// corresponding half-line (`!=` is not expressible and is skipped, which is
/// sound), assignments evaluate their expression with interval operations,
/// and every variable is copied into the target point.
pub fn gen_constraints<S: Scalar>(program: &Program) -> Result<Generated<S>, ParseError> {
    let mut vars = Vec::new();
    assigned(&program.stmts, &mut vars);
    check_uses(&program.stmts, &vars)?;
    let cfg = build_cfg(program);
    let mut b = SystemBuilder::new();
    let mut at = BTreeMap::new();
    for &p in &cfg.points {
        for x in &vars {
            let v = b.declare(&format!("{x}@{p}")).expect("point variables are unique");
            at.insert((p, x.clone()), v);
        }
    }
    let mut g = Gen { b, vars: &vars, constants: HashMap::new() };
    for x in &vars {
        g.b.push(at[&(cfg.entry, x.clone())], IvForm::Const(Interval::full()), vec![]).expect("entry");
    }
    let pos = first_pos(&program.stmts);
    for (k, e) in cfg.edges.iter().enumerate() {
        let from: Vec<VarId> = vars.iter().map(|x| at[&(e.from, x.clone())]).collect();
        let to: Vec<VarId> = vars.iter().map(|x| at[&(e.to, x.clone())]).collect();
        g.edge(k, &e.actions, &from, &to).map_err(|err| if err.line == 0 { ParseError::new(pos.line, pos.column, err.message) } else { err })?;
    }
    let system = g.b.build();
    Ok(Generated { system, cfg, vars, at })
}
