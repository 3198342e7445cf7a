//! Unfoldings, renamings and cyclic flattenings.

use std::collections::HashSet;

use super::{Constraint, Form, Lattice, System, SystemBuilder, Valuation, VarId};

/// A renaming `κ` from the variables of an unfolding to those of the
/// original system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    map: Vec<VarId>,
    target_vars: usize,
}

impl Renaming {
    pub fn new(map: Vec<VarId>, target_vars: usize) -> Self {
        assert!(map.iter().all(|v| v.index() < target_vars), "renaming leaves the target");
        Renaming { map, target_vars }
    }

    pub fn identity(n: usize) -> Self {
        Renaming { map: (0..n).map(VarId::from).collect(), target_vars: n }
    }

    pub fn apply(&self, v: VarId) -> VarId {
        self.map[v.index()]
    }

    pub fn source_vars(&self) -> usize {
        self.map.len()
    }

    pub fn target_vars(&self) -> usize {
        self.target_vars
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_vars];
        for v in &self.map {
            hit[v.index()] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// `ρ∘κ`: each unfolded variable reads its original.
pub fn precompose<V: Lattice>(rho: &Valuation<V>, kappa: &Renaming) -> Valuation<V> {
    Valuation::from_vec(kappa.map.iter().map(|&v| rho[v].clone()).collect())
}

/// `→κ(ρ′)(X) = ⊔ { ρ′(X′) | κ(X′) = X }`, with `⊥` for empty preimages.
pub fn rename_back<V: Lattice>(kappa: &Renaming, rho_prime: &Valuation<V>) -> Valuation<V> {
    let mut out = Valuation::bottom(kappa.target_vars);
    for (i, &target) in kappa.map.iter().enumerate() {
        let v = &rho_prime.values()[i];
        if !v.leq(&out[target]) {
            out[target] = out[target].join(v);
        }
    }
    out
}

/// Whether every constraint of `unfolded`, renamed by `κ`, occurs in `original`.
pub fn is_unfolding<F: Form>(unfolded: &System<F>, kappa: &Renaming, original: &System<F>) -> bool {
    if kappa.source_vars() != unfolded.var_count() || kappa.target_vars() != original.var_count() {
        return false;
    }
    let known: HashSet<&Constraint<F>> = original.constraints().iter().collect();
    unfolded.constraints().iter().all(|c| known.contains(&c.renamed(|v| kappa.apply(v))))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnfoldError {
    #[error("not an elementary cycle: {0}")]
    NotElementaryCycle(String),
}

/// Copies the cycle `X0 → c1 → X1 … → cn → Xn = X0`, given as the
/// constraint indices `c1 … cn`, onto fresh variables `n_vars .. n_vars+n`.
///
/// Copy `Zi` (variable `n_vars + i − 1`) is the output of the renamed `ci`,
/// whose input `X(i−1)` becomes `Z(i−1)`; other inputs keep their names.
pub(crate) fn flatten_cycle<F: Form>(
    constraints: &[Constraint<F>],
    n_vars: usize,
    cycle: &[usize],
) -> Result<(Vec<Constraint<F>>, Renaming), UnfoldError> {
    let n = cycle.len();
    if n == 0 {
        return Err(UnfoldError::NotElementaryCycle("empty path".into()));
    }
    if let Some(&bad) = cycle.iter().find(|&&c| c >= constraints.len()) {
        return Err(UnfoldError::NotElementaryCycle(format!("no constraint #{bad}")));
    }
    let outputs: Vec<VarId> = cycle.iter().map(|&c| constraints[c].output).collect();
    let mut seen = HashSet::new();
    if !outputs.iter().all(|v| seen.insert(*v)) {
        return Err(UnfoldError::NotElementaryCycle("a variable repeats".into()));
    }
    let copy = |i: usize| VarId::from(n_vars + i);
    let mut renamed = Vec::with_capacity(n);
    for (i, &ci) in cycle.iter().enumerate() {
        let prev_index = (i + n - 1) % n;
        let prev = outputs[prev_index];
        let c = &constraints[ci];
        if !c.inputs.contains(&prev) {
            return Err(UnfoldError::NotElementaryCycle(format!(
                "constraint #{ci} does not read the previous cycle variable"
            )));
        }
        let mut c2 = c.renamed(|v| if v == prev { copy(prev_index) } else { v });
        c2.output = copy(i);
        renamed.push(c2);
    }
    let mut map: Vec<VarId> = (0..n_vars).map(VarId::from).collect();
    map.extend(outputs);
    Ok((renamed, Renaming::new(map, n_vars)))
}

/// The cyclic flattening of `sys` along a cycle of constraint indices.
pub fn cyclic_flattening<F: Form>(
    sys: &System<F>,
    cycle: &[usize],
) -> Result<(System<F>, Renaming), UnfoldError> {
    let (renamed, kappa) = flatten_cycle(sys.constraints(), sys.var_count(), cycle)?;
    let mut b = SystemBuilder::new();
    for name in sys.names() {
        b.declare(name).expect("names are unique");
    }
    for (i, &ci) in cycle.iter().enumerate() {
        let original = sys.name(sys.constraint(ci).output).to_string();
        let z = b.fresh(&format!("_cyc{}.{original}", i + 1));
        debug_assert_eq!(z.index(), sys.var_count() + i);
    }
    for c in renamed {
        b.push(c.output, c.form, c.inputs).expect("renaming preserves validity");
    }
    Ok((b.build(), kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csys::{analyze_graph, IntForm, SccKind};
    use crate::extint::{BiFun, ExtInt};
    use num_bigint::BigInt;

    type E = ExtInt<BigInt>;

    fn build(vars: &[&str], cs: Vec<(u32, BiFun<BigInt>, Vec<u32>)>) -> System<IntForm<BigInt>> {
        let mut b = SystemBuilder::new();
        for v in vars {
            b.declare(v).unwrap();
        }
        for (o, f, ins) in cs {
            b.push(VarId(o), IntForm::Bi(f), ins.into_iter().map(VarId).collect()).unwrap();
        }
        b.build()
    }

    #[test]
    fn self_loop_flattening() {
        let sys = build(
            &["X", "One"],
            vec![(0, BiFun::Add, vec![0, 1]), (1, BiFun::Const(E::int(1)), vec![])],
        );
        let (p, kappa) = cyclic_flattening(&sys, &[0]).unwrap();
        assert_eq!(p.constraint_count(), 1);
        assert_eq!(p.render(p.constraint(0)), "_cyc1.X >= add(_cyc1.X, One)");
        assert_eq!(kappa.apply(VarId(2)), VarId(0));
        assert!(is_unfolding(&p, &kappa, &sys));
        let g = analyze_graph(&p);
        assert!(g.is_flat());
        assert_eq!(g.scc_of_constraint(0).kind, SccKind::Cyclic);
    }

    #[test]
    fn two_cycle_flattening() {
        // X1 ⊒ min(X0, 10); X0 ⊒ add(X1, Y): cycle X0 → c0 → X1 → c1 → X0.
        let sys = build(
            &["X0", "X1", "Y"],
            vec![(1, BiFun::GuardedMin(E::int(10)), vec![0]), (0, BiFun::Add, vec![1, 2])],
        );
        let (p, kappa) = cyclic_flattening(&sys, &[0, 1]).unwrap();
        let rendered: Vec<String> = p.constraints().iter().map(|c| p.render(c)).collect();
        assert_eq!(rendered, ["_cyc1.X1 >= min(_cyc2.X0, 10)", "_cyc2.X0 >= add(_cyc1.X1, Y)"]);
        assert!(is_unfolding(&p, &kappa, &sys));
        for v in 0..3 {
            assert_eq!(kappa.apply(VarId(v)), VarId(v));
        }
        assert_eq!(analyze_graph(&p).scc_of_constraint(0).kind, SccKind::Cyclic);
    }

    #[test]
    fn rejects_non_cycles() {
        let sys = build(
            &["X", "Y"],
            vec![(0, BiFun::Id, vec![1]), (1, BiFun::Const(E::int(0)), vec![])],
        );
        assert!(cyclic_flattening(&sys, &[0]).is_err());
        assert!(cyclic_flattening(&sys, &[]).is_err());
        assert!(cyclic_flattening(&sys, &[7]).is_err());
    }

    #[test]
    fn rename_back_joins_the_preimage() {
        let kappa = Renaming::new(vec![VarId(0), VarId(0)], 2);
        let rho = Valuation::from_vec(vec![E::int(3), E::int(10)]);
        let back = rename_back(&kappa, &rho);
        assert_eq!(back.values(), &[E::int(10), E::NegInf]);
        assert!(!kappa.is_surjective());
    }

    #[test]
    fn surjective_renaming_is_a_galois_surjection() {
        let kappa = Renaming::new(vec![VarId(0), VarId(1), VarId(0), VarId(1)], 2);
        let rho = Valuation::from_vec(vec![E::int(-4), E::PosInf]);
        assert_eq!(rename_back(&kappa, &precompose(&rho, &kappa)), rho);
    }
}
