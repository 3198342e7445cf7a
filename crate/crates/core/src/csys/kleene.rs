//! Round-robin Kleene iteration, the reference oracle for every solver.

use super::{Form, Lattice, System, Valuation};

/// Limits for an oracle run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleeneConfig {
    pub max_rounds: u64,
    /// Stop once any finite value needs more bits than this.
    pub max_bits: Option<u64>,
}

impl Default for KleeneConfig {
    fn default() -> Self {
        KleeneConfig { max_rounds: 100_000, max_bits: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KleeneStop {
    Converged,
    RoundCap,
    MagnitudeCap,
    Overflow,
}

/// Outcome of [`kleene_run`].
#[derive(Clone, Debug)]
pub struct KleeneRun<V> {
    pub valuation: Valuation<V>,
    pub converged: bool,
    pub stop: KleeneStop,
    /// Completed rounds (the final unchanged pass included).
    pub rounds: u64,
    pub applications: u64,
    /// Variables whose whole dependency cone was unchanged in the last round.
    /// Their values are already final: they equal the least solution.
    pub stable: Vec<bool>,
}

/// `(ρ, converged)` after at most `max_rounds` joined passes from `ρ0`.
pub fn kleene_iterate<F: Form>(
    sys: &System<F>,
    rho0: Valuation<F::Value>,
    max_rounds: u64,
) -> (Valuation<F::Value>, bool) {
    let run = kleene_run(sys, rho0, &KleeneConfig { max_rounds, max_bits: None });
    (run.valuation, run.converged)
}

/// Iterates `ρ ← ρ ∨ ⟦c⟧(ρ)` over the constraints in declaration order.
pub fn kleene_run<F: Form>(
    sys: &System<F>,
    rho0: Valuation<F::Value>,
    config: &KleeneConfig,
) -> KleeneRun<F::Value> {
    let n = sys.var_count();
    let mut rho = rho0;
    let mut applications = 0u64;
    let mut previous: Option<Vec<bool>> = None;
    let mut rounds = 0u64;
    while rounds < config.max_rounds {
        let mut changed = vec![false; n];
        let mut any = false;
        let mut interrupted = None;
        for c in sys.constraints() {
            let out = c.output;
            if rho[out].is_top() {
                continue;
            }
            applications += 1;
            match c.eval(rho.values()) {
                Ok(v) if !v.leq(&rho[out]) => {
                    rho[out] = rho[out].join(&v);
                    changed[out.index()] = true;
                    any = true;
                    if config.max_bits.is_some_and(|cap| rho[out].magnitude_bits() > cap) {
                        interrupted = Some(KleeneStop::MagnitudeCap);
                        break;
                    }
                }
                Ok(_) => {}
                Err(_) => {
                    changed[out.index()] = true;
                    interrupted = Some(KleeneStop::Overflow);
                    break;
                }
            }
        }
        if let Some(stop) = interrupted {
            let stable = match previous {
                Some(prev) => {
                    let dirty: Vec<bool> = prev.iter().zip(&changed).map(|(a, b)| *a || *b).collect();
                    stable_from_dirty(sys, &dirty)
                }
                None => vec![false; n],
            };
            return KleeneRun { valuation: rho, converged: false, stop, rounds, applications, stable };
        }
        rounds += 1;
        if !any {
            return KleeneRun {
                valuation: rho,
                converged: true,
                stop: KleeneStop::Converged,
                rounds,
                applications,
                stable: vec![true; n],
            };
        }
        previous = Some(changed);
    }
    let stable = match previous {
        Some(prev) => stable_from_dirty(sys, &prev),
        None => vec![true; n],
    };
    KleeneRun { valuation: rho, converged: false, stop: KleeneStop::RoundCap, rounds, applications, stable }
}

/// Complement of the forward closure of the dirty variables.
fn stable_from_dirty<F: Form>(sys: &System<F>, dirty: &[bool]) -> Vec<bool> {
    let n = sys.var_count();
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in sys.constraints() {
        for v in &c.inputs {
            users[v.index()].push(c.output.index());
        }
    }
    let mut unstable = dirty.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&v| dirty[v]).collect();
    while let Some(v) = stack.pop() {
        for &w in &users[v] {
            if !unstable[w] {
                unstable[w] = true;
                stack.push(w);
            }
        }
    }
    unstable.into_iter().map(|u| !u).collect()
}
