//! The flattening-based solving template, with pluggable flattenings.

use super::{
    analyze_graph, flatten_cycle, is_solution, is_unfolding, precompose, rename_back, ConstraintSystem, Renaming,
    SystemBuilder, Valuation, VarId,
};
use crate::extint::ExtInt;
use crate::intsolve::{LastWriter, SolveError, Solver};
use crate::scalar::{Overflow, Scalar};

/// Chooses the flattening `(P′, κ)` used by one round of [`generic_solve`].
pub trait FlatteningStrategy<S: Scalar> {
    fn flatten(
        &mut self,
        p: &ConstraintSystem<S>,
        rho: &Valuation<ExtInt<S>>,
    ) -> Result<(ConstraintSystem<S>, Renaming), SolveError>;
}

/// `P` itself with the identity renaming; only valid for flat systems.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityFlattening;

impl<S: Scalar> FlatteningStrategy<S> for IdentityFlattening {
    fn flatten(
        &mut self,
        p: &ConstraintSystem<S>,
        _rho: &Valuation<ExtInt<S>>,
    ) -> Result<(ConstraintSystem<S>, Renaming), SolveError> {
        Ok((p.clone(), Renaming::identity(p.var_count())))
    }
}

/// Flattenings read off last-writer cycles.
///
/// From `ρ`, `|C|+1` round-robin passes are simulated while recording the
/// last writer of every variable. The flattening is one unrolled pass
/// (every application writes a fresh copy, later constraints read the latest
/// copy) together with the cyclic flattening of the first last-writer cycle,
/// if there is one. Both parts are acyclic or a single cycle, so the result
/// is flat.
#[derive(Clone, Copy, Debug, Default)]
pub struct LambdaCycleFlattening;

impl<S: Scalar> FlatteningStrategy<S> for LambdaCycleFlattening {
    fn flatten(
        &mut self,
        p: &ConstraintSystem<S>,
        rho: &Valuation<ExtInt<S>>,
    ) -> Result<(ConstraintSystem<S>, Renaming), SolveError> {
        let n = p.var_count();
        let cons = p.constraints();
        let cycle = simulate_lambda(p, rho);

        let mut b = SystemBuilder::new();
        for name in p.names() {
            b.declare(name).expect("names are unique");
        }
        let mut map: Vec<VarId> = (0..n).map(VarId::from).collect();
        if let Some(cycle) = &cycle {
            let (renamed, _) =
                flatten_cycle(cons, n, cycle).map_err(|e| SolveError::InvalidFlattening(e.to_string()))?;
            for (i, &ci) in cycle.iter().enumerate() {
                let x = cons[ci].output;
                b.fresh(&format!("_cyc{}.{}", i + 1, p.name(x)));
                map.push(x);
            }
            for c in renamed {
                b.push(c.output, c.form, c.inputs).map_err(|e| SolveError::InvalidFlattening(e.to_string()))?;
            }
        }
        let mut latest: Vec<VarId> = (0..n).map(VarId::from).collect();
        for (k, c) in cons.iter().enumerate() {
            let copy = b.fresh(&format!("_gs{}.{}", k + 1, p.name(c.output)));
            map.push(c.output);
            let inputs = c.inputs.iter().map(|v| latest[v.index()]).collect();
            b.push(copy, c.form.clone(), inputs).map_err(|e| SolveError::InvalidFlattening(e.to_string()))?;
            latest[c.output.index()] = copy;
        }
        Ok((b.build(), Renaming::new(map, n)))
    }
}

/// The last-writer cycle after `|C|+1` passes from `ρ`, on a scratch copy.
/// Overflow ends the simulation early.
fn simulate_lambda<S: Scalar>(p: &ConstraintSystem<S>, rho: &Valuation<ExtInt<S>>) -> Option<Vec<usize>> {
    let mut values = rho.values().to_vec();
    let mut lambda = LastWriter::new(p.var_count());
    'passes: for _ in 0..=p.constraint_count() {
        let mut raised = false;
        for (i, c) in p.constraints().iter().enumerate() {
            match c.eval(&values) {
                Ok(v) if v > values[c.output.index()] => {
                    values[c.output.index()] = v;
                    lambda.record(c.output, i);
                    raised = true;
                }
                Ok(_) | Err(Overflow::Below) => {}
                Err(Overflow::Above) => {
                    lambda.record(c.output, i);
                    break 'passes;
                }
            }
        }
        if !raised {
            break;
        }
    }
    lambda.find_cycle(p.constraints())
}

/// Starting from `⊥`, repeatedly joins in the least solution of a flattening
/// chosen by `strategy` until `ρ` is a solution, for at most `round_cap`
/// rounds. Returns `(ρ, converged)`.
///
/// Each flattening is checked to be a flat unfolding of `p`, and is solved
/// exactly by the integer solver above `ρ∘κ`.
pub fn generic_solve<S: Scalar, St: FlatteningStrategy<S>>(
    p: &ConstraintSystem<S>,
    strategy: &mut St,
    round_cap: u64,
) -> Result<(Valuation<ExtInt<S>>, bool), SolveError> {
    let mut rho = Valuation::bottom(p.var_count());
    let mut solver = Solver::new();
    for _ in 0..round_cap {
        if is_solution(p, &rho).map_err(|o| SolveError::limit("solution check", o))? {
            return Ok((rho, true));
        }
        let (flat, kappa) = strategy.flatten(p, &rho)?;
        if !is_unfolding(&flat, &kappa, p) {
            return Err(SolveError::InvalidFlattening("not an unfolding of the system".into()));
        }
        if !analyze_graph(&flat).is_flat() {
            return Err(SolveError::InvalidFlattening("the unfolding is not flat".into()));
        }
        let rho2 = solver.solve_integer_from(&flat, precompose(&rho, &kappa))?;
        rho = rho.join(&rename_back(&kappa, &rho2));
    }
    let done = is_solution(p, &rho).map_err(|o| SolveError::limit("solution check", o))?;
    Ok((rho, done))
}
