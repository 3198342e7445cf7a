//! Control-flow graphs with numbered program points.

use std::fmt;

use super::syntax::{Cond, Expr, Program, Stmt};

/// What an edge does, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Assign(String, Expr),
    Guard(Cond),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Assign(x, e) => write!(f, "{x} = {e}"),
            Action::Guard(c) => write!(f, "[{c}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub actions: Vec<Action>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    /// Program points in increasing order.
    pub points: Vec<u32>,
    pub entry: u32,
    pub exit: u32,
    pub edges: Vec<Edge>,
}

/// A pending path out of the code built so far: a point plus the actions
/// not yet attached to an edge.
#[derive(Clone, Debug)]
struct End {
    point: u32,
    actions: Vec<Action>,
}

struct Builder {
    next: u32,
    points: Vec<u32>,
    edges: Vec<Edge>,
}

/// The ends of a statement sequence, with the join number an `if` reserved
/// for them.
struct Frontier {
    ends: Vec<End>,
    reserved: Option<u32>,
}

impl Builder {
    fn number(&mut self) -> u32 {
        let n = self.next;
        self.next += 1;
        n
    }

    /// A single point all ends flow into; ends are only joined when they
    /// carry actions or there are several of them.
    fn materialize(&mut self, f: &mut Frontier) -> u32 {
        if let [only] = f.ends.as_slice() {
            if only.actions.is_empty() {
                return only.point;
            }
        }
        let p = f.reserved.take().unwrap_or_else(|| self.number());
        self.points.push(p);
        for end in f.ends.drain(..) {
            self.edges.push(Edge { from: end.point, to: p, actions: end.actions });
        }
        f.ends.push(End { point: p, actions: Vec::new() });
        p
    }

    fn seq(&mut self, stmts: &[Stmt], f: &mut Frontier) {
        for s in stmts {
            match s {
                Stmt::Assign { var, expr, .. } => {
                    for end in &mut f.ends {
                        end.actions.push(Action::Assign(var.clone(), expr.clone()));
                    }
                }
                Stmt::If { cond, then, otherwise } => {
                    let p = self.materialize(f);
                    let join = self.number();
                    let mut t = Frontier { ends: vec![End { point: p, actions: vec![Action::Guard(cond.clone())] }], reserved: None };
                    self.seq(then, &mut t);
                    let mut e =
                        Frontier { ends: vec![End { point: p, actions: vec![Action::Guard(cond.negate())] }], reserved: None };
                    self.seq(otherwise, &mut e);
                    f.ends = t.ends;
                    f.ends.extend(e.ends);
                    f.reserved = Some(join);
                }
                Stmt::While { cond, body } => {
                    let head = self.materialize(f);
                    let mut b =
                        Frontier { ends: vec![End { point: head, actions: vec![Action::Guard(cond.clone())] }], reserved: None };
                    self.seq(body, &mut b);
                    for end in b.ends {
                        if end.point != head || !end.actions.is_empty() {
                            self.edges.push(Edge { from: end.point, to: head, actions: end.actions });
                        }
                    }
                    f.ends = vec![End { point: head, actions: vec![Action::Guard(cond.negate())] }];
                    f.reserved = None;
                }
            }
        }
    }
}

/// Builds the control-flow graph; the entry is point 1.
///
/// Points are only created where paths meet or before a test, so
/// straight-line code and branch bodies become edges carrying several
/// actions. A branch reserves the number of its join point when it is
/// built; the number goes unused when the join is the head of an enclosing
/// loop.
pub fn build_cfg(program: &Program) -> Cfg {
    let mut b = Builder { next: 2, points: vec![1], edges: Vec::new() };
    let mut f = Frontier { ends: vec![End { point: 1, actions: Vec::new() }], reserved: None };
    b.seq(&program.stmts, &mut f);
    let exit = b.materialize(&mut f);
    b.points.sort_unstable();
    Cfg { points: b.points, entry: 1, exit, edges: b.edges }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            let actions: Vec<String> = e.actions.iter().map(ToString::to_string).collect();
            writeln!(f, "{} -> {}: {}", e.from, e.to, actions.join("; "))?;
        }
        Ok(())
    }
}
