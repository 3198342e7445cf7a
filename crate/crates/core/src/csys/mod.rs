//! Constraint systems `X ⊒ f(X1, …, Xn)` over a complete lattice.
//!
//! A [`System`] is generic over its constraint [`Form`]: integer systems use
//! [`IntForm`] (catalog functions and tests over [`ExtInt`]), interval systems
//! use the interval forms. Semantics, the Kleene oracle, the program graph and
//! unfoldings are shared.

mod generic;
mod graph;
pub mod ics;
mod kleene;
pub(crate) mod text;
mod unfold;

pub use generic::{generic_solve, FlatteningStrategy, IdentityFlattening, LambdaCycleFlattening};
pub use graph::{analyze_graph, ProgramGraph, Scc, SccKind};
pub use kleene::{kleene_iterate, kleene_run, KleeneConfig, KleeneRun, KleeneStop};
pub use unfold::{cyclic_flattening, is_unfolding, precompose, rename_back, Renaming, UnfoldError};
pub(crate) use unfold::flatten_cycle;

use std::collections::HashMap;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Index, IndexMut};

use crate::extint::{BiFun, ExtInt, TestFun};
use crate::scalar::{Overflow, Scalar};

/// Dense variable index within one system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VarId {
    fn from(i: usize) -> Self {
        VarId(u32::try_from(i).expect("variable index overflow"))
    }
}

/// A complete lattice of values, as needed by the generic algorithms.
pub trait Lattice: Clone + PartialEq + Eq + Hash + Debug + Display {
    fn bottom() -> Self;
    fn top() -> Self;
    fn join(&self, other: &Self) -> Self;
    fn leq(&self, other: &Self) -> bool;
    /// Size of the finite data carried, used to cap oracle runs.
    fn magnitude_bits(&self) -> u64;

    fn is_top(&self) -> bool {
        *self == Self::top()
    }
}

impl<S: Scalar> Lattice for ExtInt<S> {
    fn bottom() -> Self {
        ExtInt::NegInf
    }

    fn top() -> Self {
        ExtInt::PosInf
    }

    fn join(&self, other: &Self) -> Self {
        self.max(other).clone()
    }

    fn leq(&self, other: &Self) -> bool {
        self <= other
    }

    fn magnitude_bits(&self) -> u64 {
        ExtInt::magnitude_bits(self)
    }
}

/// The right-hand side of a constraint: a monotonic function of its inputs.
pub trait Form: Clone + Debug + PartialEq + Eq + Hash {
    type Value: Lattice;

    fn arity(&self) -> usize;

    fn eval(&self, args: &[&Self::Value]) -> Result<Self::Value, Overflow>;

    /// The form denoting the identity on its single input.
    fn identity() -> Self;

    /// Renders the right-hand side in the textual file format.
    fn render(&self, args: &[&str]) -> String;
}

/// Right-hand sides of integer constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntForm<S> {
    Bi(BiFun<S>),
    /// Inputs are `[guard, value]`.
    Test(TestFun<S>),
}

impl<S: Scalar> IntForm<S> {
    pub fn as_bi(&self) -> Option<&BiFun<S>> {
        match self {
            IntForm::Bi(f) => Some(f),
            IntForm::Test(_) => None,
        }
    }

    pub fn convert<T: Scalar>(&self) -> Option<IntForm<T>> {
        Some(match self {
            IntForm::Bi(f) => IntForm::Bi(f.convert()?),
            IntForm::Test(t) => IntForm::Test(t.convert()?),
        })
    }
}

impl<S: Scalar> Form for IntForm<S> {
    type Value = ExtInt<S>;

    fn arity(&self) -> usize {
        match self {
            IntForm::Bi(f) => f.arity(),
            IntForm::Test(_) => 2,
        }
    }

    fn eval(&self, args: &[&ExtInt<S>]) -> Result<ExtInt<S>, Overflow> {
        match self {
            IntForm::Bi(f) => f.apply(args),
            IntForm::Test(t) => Ok(t.apply(args[0], args[1])),
        }
    }

    fn identity() -> Self {
        IntForm::Bi(BiFun::Id)
    }

    fn render(&self, a: &[&str]) -> String {
        match self {
            IntForm::Bi(f) => match f {
                BiFun::Const(b) => format!("const({b})"),
                BiFun::Id => format!("id({})", a[0]),
                BiFun::GuardedMin(b) => format!("min({}, {b})", a[0]),
                BiFun::Add => format!("add({}, {})", a[0], a[1]),
                BiFun::MulPlus => format!("mulp({}, {})", a[0], a[1]),
                BiFun::MulMinus => format!("mulm({}, {})", a[0], a[1]),
                BiFun::Pow2 => format!("pow2({})", a[0]),
                BiFun::Factorial => format!("fact({})", a[0]),
            },
            IntForm::Test(TestFun::Geq(b)) => format!("test_geq({b}; {}, {})", a[0], a[1]),
            IntForm::Test(TestFun::Gt(b)) => format!("test_gt({b}; {}, {})", a[0], a[1]),
        }
    }
}

/// A constraint `output ⊒ form(inputs…)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint<F> {
    pub output: VarId,
    pub form: F,
    pub inputs: Vec<VarId>,
}

impl<F: Form> Constraint<F> {
    pub fn new(output: VarId, form: F, inputs: Vec<VarId>) -> Self {
        Constraint { output, form, inputs }
    }

    /// The image `f(ρ(X1), …, ρ(Xn))`.
    pub fn eval(&self, values: &[F::Value]) -> Result<F::Value, Overflow> {
        match self.inputs.as_slice() {
            [] => self.form.eval(&[]),
            [a] => self.form.eval(&[&values[a.index()]]),
            [a, b] => self.form.eval(&[&values[a.index()], &values[b.index()]]),
            many => {
                let args: Vec<&F::Value> = many.iter().map(|v| &values[v.index()]).collect();
                self.form.eval(&args)
            }
        }
    }

    /// Whether `ρ(output) ⊒ f(ρ)`; a top output is satisfied without evaluation.
    pub fn is_satisfied(&self, values: &[F::Value]) -> Result<bool, Overflow> {
        let current = &values[self.output.index()];
        if current.is_top() {
            return Ok(true);
        }
        Ok(self.eval(values)?.leq(current))
    }

    /// Applies a variable renaming to output and inputs.
    pub fn renamed(&self, mut rename: impl FnMut(VarId) -> VarId) -> Self {
        Constraint {
            output: rename(self.output),
            form: self.form.clone(),
            inputs: self.inputs.iter().map(|&v| rename(v)).collect(),
        }
    }
}

/// Errors raised while building a system.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable index {0} is not declared")]
    UnknownVariable(u32),
    #[error("`{form}` expects {expected} input(s), got {found}")]
    ArityMismatch { form: String, expected: usize, found: usize },
}

/// A finite set of named variables with an ordered list of constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System<F> {
    names: Vec<String>,
    index: HashMap<String, VarId>,
    constraints: Vec<Constraint<F>>,
}

/// Integer constraint systems.
pub type ConstraintSystem<S> = System<IntForm<S>>;

impl<F: Form> System<F> {
    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.names.len()).map(VarId::from)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint<F>] {
        &self.constraints
    }

    pub fn constraint(&self, i: usize) -> &Constraint<F> {
        &self.constraints[i]
    }

    /// Renders one constraint as `X >= rhs`.
    pub fn render(&self, c: &Constraint<F>) -> String {
        let args: Vec<&str> = c.inputs.iter().map(|&v| self.name(v)).collect();
        format!("{} >= {}", self.name(c.output), c.form.render(&args))
    }

    /// Continues building from this system (variables and constraints kept).
    pub fn into_builder(self) -> SystemBuilder<F> {
        SystemBuilder { sys: self }
    }

    /// Builds a system from raw parts, validating and normalizing constraints.
    pub fn from_parts(
        names: Vec<String>,
        constraints: impl IntoIterator<Item = Constraint<F>>,
    ) -> Result<Self, SystemError> {
        let mut b = SystemBuilder::new();
        for n in names {
            b.declare(&n)?;
        }
        for c in constraints {
            b.push(c.output, c.form, c.inputs)?;
        }
        Ok(b.build())
    }

    /// Maps every constraint form, keeping variables and order.
    pub fn map_forms<G: Form>(&self, mut f: impl FnMut(&F) -> Option<G>) -> Option<System<G>> {
        let constraints = self
            .constraints
            .iter()
            .map(|c| Some(Constraint::new(c.output, f(&c.form)?, c.inputs.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(System { names: self.names.clone(), index: self.index.clone(), constraints })
    }
}

impl<F: Form> fmt::Display for System<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.names.is_empty() {
            writeln!(f, "var {}", self.names.join(" "))?;
        }
        for c in &self.constraints {
            writeln!(f, "{}", self.render(c))?;
        }
        Ok(())
    }
}

impl<S: Scalar> ConstraintSystem<S> {
    /// The same system over another scalar type, if every constant fits.
    pub fn convert<T: Scalar>(&self) -> Option<ConstraintSystem<T>> {
        self.map_forms(IntForm::convert)
    }
}

/// Incremental, validating construction of a [`System`].
///
/// Constraints whose inputs repeat a variable are normalized on insertion:
/// each repeated occurrence is replaced by a fresh alias `A` defined by
/// `A ⊒ id(Y)` alone, which leaves least solutions unchanged.
#[derive(Clone, Debug)]
pub struct SystemBuilder<F> {
    sys: System<F>,
}

impl<F: Form> Default for SystemBuilder<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Form> SystemBuilder<F> {
    pub fn new() -> Self {
        SystemBuilder {
            sys: System { names: Vec::new(), index: HashMap::new(), constraints: Vec::new() },
        }
    }

    pub fn declare(&mut self, name: &str) -> Result<VarId, SystemError> {
        if self.sys.index.contains_key(name) {
            return Err(SystemError::DuplicateVariable(name.to_string()));
        }
        let id = VarId::from(self.sys.names.len());
        self.sys.names.push(name.to_string());
        self.sys.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Declares a variable named `base`, suffixed if the name is taken.
    pub fn fresh(&mut self, base: &str) -> VarId {
        if !self.sys.index.contains_key(base) {
            return self.declare(base).unwrap();
        }
        (1..)
            .map(|k| format!("{base}~{k}"))
            .find(|n| !self.sys.index.contains_key(n))
            .map(|n| self.declare(&n).unwrap())
            .unwrap()
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.sys.lookup(name)
    }

    pub fn name(&self, v: VarId) -> &str {
        self.sys.name(v)
    }

    pub fn var_count(&self) -> usize {
        self.sys.var_count()
    }

    pub fn constraint_count(&self) -> usize {
        self.sys.constraint_count()
    }

    /// Appends a constraint, returning its index.
    pub fn push(&mut self, output: VarId, form: F, inputs: Vec<VarId>) -> Result<usize, SystemError> {
        let n = self.sys.var_count();
        if let Some(bad) = std::iter::once(&output).chain(&inputs).find(|v| v.index() >= n) {
            return Err(SystemError::UnknownVariable(bad.0));
        }
        if inputs.len() != form.arity() {
            let args: Vec<&str> = vec!["_"; form.arity()];
            return Err(SystemError::ArityMismatch {
                form: form.render(&args),
                expected: form.arity(),
                found: inputs.len(),
            });
        }
        let mut inputs = inputs;
        for k in 1..inputs.len() {
            if inputs[..k].contains(&inputs[k]) {
                let original = inputs[k];
                let base = format!("_dup{}.{}", self.sys.constraints.len(), self.sys.name(original));
                let alias = self.fresh(&base);
                self.sys.constraints.push(Constraint::new(alias, F::identity(), vec![original]));
                inputs[k] = alias;
            }
        }
        self.sys.constraints.push(Constraint::new(output, form, inputs));
        Ok(self.sys.constraints.len() - 1)
    }

    pub fn build(self) -> System<F> {
        self.sys
    }
}

/// A total map from the variables of a system to lattice values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation<V>(Vec<V>);

impl<V: Lattice> Valuation<V> {
    pub fn bottom(n: usize) -> Self {
        Valuation(vec![V::bottom(); n])
    }

    pub fn from_vec(values: Vec<V>) -> Self {
        Valuation(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[V] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [V] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<V> {
        self.0
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.leq(b))
    }

    /// Pointwise join.
    pub fn join(&self, other: &Self) -> Self {
        Valuation(self.0.iter().zip(&other.0).map(|(a, b)| a.join(b)).collect())
    }
}

impl<V> Index<VarId> for Valuation<V> {
    type Output = V;

    fn index(&self, v: VarId) -> &V {
        &self.0[v.index()]
    }
}

impl<V> IndexMut<VarId> for Valuation<V> {
    fn index_mut(&mut self, v: VarId) -> &mut V {
        &mut self.0[v.index()]
    }
}

/// `⟦c⟧(ρ)`: replaces the output coordinate by the image (no join).
pub fn apply_constraint<F: Form>(
    c: &Constraint<F>,
    rho: &Valuation<F::Value>,
) -> Result<Valuation<F::Value>, Overflow> {
    let image = c.eval(rho.values())?;
    let mut out = rho.clone();
    out[c.output] = image;
    Ok(out)
}

/// Whether `ρ ⊒ ⟦C⟧(ρ)`, i.e. `ρ` is a solution (post-solution).
pub fn is_solution<F: Form>(sys: &System<F>, rho: &Valuation<F::Value>) -> Result<bool, Overflow> {
    for c in sys.constraints() {
        if !c.is_satisfied(rho.values())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `ρ ⊑ ⟦c⟧(ρ)(output)` for every constraint (a pre-solution).
pub fn is_presolution<F: Form>(sys: &System<F>, rho: &Valuation<F::Value>) -> Result<bool, Overflow> {
    for c in sys.constraints() {
        if !rho[c.output].leq(&c.eval(rho.values())?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether a variable name is an internal auxiliary, hidden from reports.
pub fn is_hidden(name: &str) -> bool {
    name.starts_with('_')
}


#[cfg(test)]
pub(crate) fn parse_ics_str(src: &str) -> ConstraintSystem<num_bigint::BigInt> {
    ics::parse_ics(src).expect("test system parses")
}
