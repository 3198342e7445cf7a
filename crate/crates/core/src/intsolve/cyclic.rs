//! Acceleration of a single elementary cycle.

use super::{IntConstraint, SolveError, Solver};
use crate::csys::{analyze_graph, ConstraintSystem, SccKind};
use crate::extint::ExtInt;
use crate::scalar::{Overflow, Scalar};

/// Constraint indices of a cyclic system in cycle order, starting from the
/// first constraint: each constraint reads the output of its predecessor.
pub(super) fn cycle_order<S: Scalar>(p: &ConstraintSystem<S>) -> Result<Vec<usize>, SolveError> {
    if p.constraint_count() == 0 {
        return Err(SolveError::NotCyclic("no constraints".into()));
    }
    if p.constraints().iter().any(|c| c.form.as_bi().is_none()) {
        return Err(SolveError::TestConstraint);
    }
    let g = analyze_graph(p);
    let scc = g.scc_of_constraint(0);
    if scc.kind != SccKind::Cyclic {
        return Err(SolveError::NotCyclic("constraints do not form a single elementary cycle".into()));
    }
    if scc.constraints.len() != p.constraint_count() {
        return Err(SolveError::NotCyclic("some constraints lie outside the cycle".into()));
    }
    let mut order = vec![0];
    while order.len() < p.constraint_count() {
        let out = p.constraint(*order.last().unwrap()).output;
        let next = (0..p.constraint_count())
            .find(|&j| p.constraint(j).inputs.contains(&out))
            .expect("a cyclic component has a successor for every constraint");
        order.push(next);
    }
    Ok(order)
}

impl Solver {
    /// Two ascending passes around the cycle; if that is not yet a solution,
    /// every cycle variable is raised to `+∞` and two descending passes bring
    /// the values back down to the least solution above the start.
    ///
    /// `cycle` lists the constraints in cycle order. An image above the
    /// scalar range during the ascent means the least solution is beyond it
    /// there, so the ascent is cut short; the result is then checked to be a
    /// solution above the start, which guarantees it is the least one.
    pub(super) fn cyclic_core<S: Scalar>(
        &mut self,
        cycle: &[IntConstraint<S>],
        mut rho: Vec<ExtInt<S>>,
    ) -> Result<Vec<ExtInt<S>>, SolveError> {
        let start: Vec<ExtInt<S>> = cycle.iter().map(|c| rho[c.output.index()].clone()).collect();
        let mut cut_short = false;
        'ascent: for _ in 0..2 {
            for c in cycle {
                let out = c.output.index();
                if rho[out] == ExtInt::PosInf {
                    continue;
                }
                self.stats.applications += 1;
                match c.eval(&rho) {
                    Ok(v) => {
                        if v > rho[out] {
                            rho[out] = v;
                        }
                    }
                    Err(Overflow::Above) => {
                        cut_short = true;
                        break 'ascent;
                    }
                    Err(o @ Overflow::Below) => {
                        if rho[out] == ExtInt::NegInf {
                            return Err(SolveError::limit("cycle ascent", o));
                        }
                    }
                }
            }
        }
        if !cut_short && self.solves(cycle, &rho) {
            return Ok(rho);
        }
        for c in cycle {
            rho[c.output.index()] = ExtInt::PosInf;
        }
        for _ in 0..2 {
            for c in cycle {
                let out = c.output.index();
                self.stats.applications += 1;
                match c.eval(&rho) {
                    Ok(v) => {
                        if v < rho[out] {
                            rho[out] = v;
                        }
                    }
                    Err(o @ Overflow::Above) => {
                        if rho[out] == ExtInt::PosInf {
                            return Err(SolveError::limit("cycle descent", o));
                        }
                    }
                    Err(o @ Overflow::Below) => {
                        if rho[out] != ExtInt::NegInf {
                            return Err(SolveError::limit("cycle descent", o));
                        }
                    }
                }
            }
        }
        if cut_short {
            let above_start = cycle.iter().zip(&start).all(|(c, s)| rho[c.output.index()] >= *s);
            if !above_start || !self.solves(cycle, &rho) {
                return Err(SolveError::ArithmeticLimit(
                    "accelerated cycle has a finite value beyond the scalar range".into(),
                ));
            }
        }
        Ok(rho)
    }
}
