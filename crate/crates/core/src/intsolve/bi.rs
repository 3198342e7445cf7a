//! Round-robin passes with last-writer tracking and cycle acceleration.

use super::{upper_saturated, AccelerationEvent, BiCallStats, IntConstraint, SolveError, Solver};
use crate::csys::{flatten_cycle, precompose, rename_back, Valuation, VarId};
use crate::extint::{fun_bounds, ExtInt};
use crate::scalar::{Overflow, Scalar};

/// `λ`: for each variable, the constraint that last strictly raised it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastWriter {
    writer: Vec<Option<usize>>,
}

impl LastWriter {
    pub fn new(n_vars: usize) -> Self {
        LastWriter { writer: vec![None; n_vars] }
    }

    pub fn record(&mut self, output: VarId, constraint: usize) {
        self.writer[output.index()] = Some(constraint);
    }

    pub fn get(&self, v: VarId) -> Option<usize> {
        self.writer[v.index()]
    }

    pub fn clear(&mut self) {
        self.writer.iter_mut().for_each(|w| *w = None);
    }

    pub fn forget(&mut self, v: VarId) {
        self.writer[v.index()] = None;
    }

    /// An elementary cycle `X0 → λ(X1) → X1 … λ(Xn) → Xn = X0`, as the
    /// constraint indices `λ(X1) … λ(Xn)`.
    ///
    /// Depth-first search from the lowest-index variable, successors in
    /// index order; the first back edge closes the reported cycle.
    pub fn find_cycle<F>(&self, constraints: &[crate::csys::Constraint<F>]) -> Option<Vec<usize>> {
        let n = self.writer.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (x, w) in self.writer.iter().enumerate() {
            if let Some(c) = w {
                for y in &constraints[*c].inputs {
                    succ[y.index()].push(x);
                }
            }
        }
        // 0 = unvisited, 1 = on the stack, 2 = done.
        let mut state = vec![0u8; n];
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut path = vec![root];
            let mut next_edge = vec![0usize];
            state[root] = 1;
            while let Some(&v) = path.last() {
                let k = next_edge.last_mut().unwrap();
                if let Some(&w) = succ[v].get(*k) {
                    *k += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            path.push(w);
                            next_edge.push(0);
                        }
                        1 => {
                            let at = path.iter().position(|&u| u == w).unwrap();
                            let mut vars: Vec<usize> = path[at + 1..].to_vec();
                            vars.push(w);
                            return Some(vars.into_iter().map(|x| self.writer[x].unwrap()).collect());
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    path.pop();
                    next_edge.pop();
                }
            }
        }
        None
    }
}

impl Solver {
    pub(super) fn bi_core<S: Scalar>(
        &mut self,
        cons: &[IntConstraint<S>],
        rho0: Vec<ExtInt<S>>,
    ) -> Result<Vec<ExtInt<S>>, SolveError> {
        let n = rho0.len();
        let m = cons.len();
        let saturated_at_start: Vec<bool> = cons.iter().map(|c| upper_saturated(c, &rho0)).collect();

        // ρ ← ρ0 ∨ ⟦C⟧(ρ0), every image read from ρ0.
        let mut rho = rho0.clone();
        for c in cons {
            let out = c.output.index();
            if rho0[out] == ExtInt::PosInf {
                continue;
            }
            self.stats.applications += 1;
            match c.eval(&rho0) {
                Ok(v) => {
                    if v > rho[out] {
                        rho[out] = v;
                    }
                }
                // Left for the passes, where it is handled with λ.
                Err(Overflow::Above) => {}
                Err(o @ Overflow::Below) => {
                    if rho0[out] == ExtInt::NegInf {
                        return Err(SolveError::limit("initial step", o));
                    }
                }
            }
        }

        let mut lambda = LastWriter::new(n);
        let mut pending = vec![false; n];
        let mut outer = 0;
        while !self.solves(cons, &rho) {
            outer += 1;
            if outer > m + 1 {
                // Unreachable with exact arithmetic: each iteration but the
                // last saturates a new constraint.
                return Err(SolveError::ArithmeticLimit("passes kept meeting out-of-range images".into()));
            }
            lambda.clear();
            let overflowed = self.passes(cons, &mut rho, &mut lambda, &mut pending)?;
            let mut progressed = false;
            while let Some(cycle) = lambda.find_cycle(cons) {
                if self.accelerate(cons, &cycle, &mut rho)? {
                    progressed = true;
                    break;
                }
                // Claimed raises of pending variables can close a cycle that
                // is already solved, and a cycle may settle beyond the scalar
                // range; look past it.
                for &ci in &cycle {
                    lambda.forget(cons[ci].output);
                }
            }
            if overflowed && !progressed {
                // An out-of-range image may since have been overtaken by a
                // raise to +∞; only one that is still pending matters.
                let sources = self.overflowing(cons, &rho);
                if !sources.is_empty() && !self.rescue(cons, &sources, &mut rho)? {
                    return Err(SolveError::ArithmeticLimit(
                        "a finite value beyond the scalar range with no cycle to accelerate".into(),
                    ));
                }
            }
        }

        let newly = cons
            .iter()
            .zip(&saturated_at_start)
            .filter(|(c, was)| !**was && upper_saturated(c, &rho))
            .count();
        self.stats.bi_calls.push(BiCallStats { constraints: m, outer_iterations: outer, newly_upper_saturated: newly });
        Ok(rho)
    }

    /// `|C|+1` round-robin passes of strict raises, recording `λ`.
    ///
    /// A constraint is re-evaluated only if one of its inputs changed since
    /// its last evaluation: otherwise its image is unchanged and cannot
    /// raise an output that never decreases. Passes stop early once one
    /// raises nothing, as further passes could not change `ρ` or `λ`.
    ///
    /// An image above the scalar range is a raise that cannot be stored:
    /// `X` keeps its value, `λ(X) = c`, and `X` is marked pending, i.e.
    /// known to lie below its exact counterpart. A bounded-increasing
    /// constraint reading a pending input has an exact image strictly above
    /// the stored one unless it is saturated, so when that stored image
    /// reaches an output that is itself exact, the exact passes would have
    /// raised it: it counts as a raise and the output becomes pending too. This keeps `λ` in step
    /// with the exact passes; `true` is returned if any image overflowed.
    fn passes<S: Scalar>(
        &mut self,
        cons: &[IntConstraint<S>],
        rho: &mut [ExtInt<S>],
        lambda: &mut LastWriter,
        pending: &mut [bool],
    ) -> Result<bool, SolveError> {
        let mut clock = 1u64;
        let mut written = vec![0u64; rho.len()];
        let mut evaluated: Vec<u64> = vec![0; cons.len()];
        let mut overflowed = false;
        for _ in 0..=cons.len() {
            let mut raised = false;
            for (ci, c) in cons.iter().enumerate() {
                let out = c.output.index();
                if rho[out] == ExtInt::PosInf {
                    continue;
                }
                let stale = evaluated[ci] == 0 || c.inputs.iter().any(|v| written[v.index()] > evaluated[ci]);
                if !stale {
                    continue;
                }
                evaluated[ci] = clock;
                self.stats.applications += 1;
                match c.eval(rho) {
                    Ok(v) => {
                        let grows = !pending[out]
                            && c.inputs.iter().any(|x| pending[x.index()])
                            && c.form.as_bi().is_some_and(|f| {
                                let (lo, hi) = fun_bounds(f);
                                lo < v && v < hi
                            });
                        if v > rho[out] || (grows && v == rho[out]) {
                            rho[out] = v;
                            pending[out] |= grows;
                            clock += 1;
                            written[out] = clock;
                            lambda.record(c.output, ci);
                            raised = true;
                        }
                    }
                    Err(Overflow::Above) => {
                        pending[out] = true;
                        clock += 1;
                        written[out] = clock;
                        lambda.record(c.output, ci);
                        raised = true;
                        overflowed = true;
                    }
                    Err(o @ Overflow::Below) => {
                        if rho[out] == ExtInt::NegInf {
                            return Err(SolveError::limit("round-robin pass", o));
                        }
                    }
                }
            }
            if !raised {
                break;
            }
        }
        Ok(overflowed)
    }

    /// Constraints whose image lies above the scalar range.
    fn overflowing<S: Scalar>(&mut self, cons: &[IntConstraint<S>], rho: &[ExtInt<S>]) -> Vec<usize> {
        (0..cons.len())
            .filter(|&ci| {
                let c = &cons[ci];
                if rho[c.output.index()] == ExtInt::PosInf {
                    return false;
                }
                self.stats.applications += 1;
                c.eval(rho) == Err(Overflow::Above)
            })
            .collect()
    }

    /// Accelerates elementary cycles through the overflowing constraints,
    /// shortest first, until one raises `ρ`; `false` if none does.
    ///
    /// Used only when the stored values no longer show which cycle grows.
    /// Accelerating any cycle is sound, as its flattening is an unfolding.
    fn rescue<S: Scalar>(
        &mut self,
        cons: &[IntConstraint<S>],
        sources: &[usize],
        rho: &mut Vec<ExtInt<S>>,
    ) -> Result<bool, SolveError> {
        const CYCLE_BUDGET: usize = 256;
        const STEP_BUDGET: usize = 100_000;
        let mut readers = vec![Vec::new(); rho.len()];
        for (ci, c) in cons.iter().enumerate() {
            if rho[c.output.index()] != ExtInt::PosInf {
                for v in &c.inputs {
                    readers[v.index()].push(ci);
                }
            }
        }
        let mut cycles = Vec::new();
        let mut steps = 0;
        for &s in sources {
            let mut path = vec![s];
            let mut next = vec![0usize];
            while let Some(&last) = path.last() {
                steps += 1;
                if cycles.len() >= CYCLE_BUDGET || steps > STEP_BUDGET {
                    break;
                }
                let k = next.last_mut().unwrap();
                let Some(&ci) = readers[cons[last].output.index()].get(*k) else {
                    path.pop();
                    next.pop();
                    continue;
                };
                *k += 1;
                if ci == s {
                    cycles.push(path.clone());
                } else if !path.iter().any(|&p| cons[p].output == cons[ci].output) {
                    path.push(ci);
                    next.push(0);
                }
            }
        }
        cycles.sort_by_key(Vec::len);
        for cycle in cycles {
            if self.accelerate(cons, &cycle, rho)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Solves the cyclic flattening of `cycle` from `ρ∘κ` and joins it back;
    /// `false` if that left `ρ` unchanged.
    fn accelerate<S: Scalar>(
        &mut self,
        cons: &[IntConstraint<S>],
        cycle: &[usize],
        rho: &mut Vec<ExtInt<S>>,
    ) -> Result<bool, SolveError> {
        self.stats.accelerations += 1;
        let n = rho.len();
        let (renamed, kappa) =
            flatten_cycle(cons, n, cycle).expect("λ-cycles are elementary cycles of the program graph");
        let before = Valuation::from_vec(rho.clone());
        let solved = match self.cyclic_core(&renamed, precompose(&before, &kappa).into_vec()) {
            Ok(solved) => solved,
            // This cycle alone settles beyond the scalar range; another one
            // may still drive the values to +∞.
            Err(SolveError::ArithmeticLimit(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        let back = rename_back(&kappa, &Valuation::from_vec(solved));
        *rho = before.join(&back).into_vec();
        if rho.as_slice() == before.values() {
            return Ok(false);
        }

        if self.tracing() {
            let values = cycle
                .iter()
                .map(|&ci| {
                    let x = cons[ci].output;
                    (self.var_name(x), before[x].to_string(), rho[x.index()].to_string())
                })
                .collect();
            let newly_saturated = cons
                .iter()
                .filter(|c| !upper_saturated(c, before.values()) && upper_saturated(c, rho))
                .map(|c| self.render(c))
                .collect();
            let event = AccelerationEvent {
                cycle: cycle.iter().map(|&ci| self.render(&cons[ci])).collect(),
                values,
                newly_saturated,
            };
            self.events.push(event);
        }
        Ok(true)
    }
}
