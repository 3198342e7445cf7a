//! Exact least solutions of integer constraint systems.
//!
//! [`solve_bi`] handles bounded-increasing systems by round-robin passes
//! that remember the last writer of every variable; whenever the writers
//! form a cycle, that cycle is accelerated by [`cyclic_solve`] on its cyclic
//! flattening. [`solve_integer`] adds test constraints by switching each one
//! to its active form once its guard clears the threshold.

mod bi;
mod cyclic;
mod integer;

pub use bi::LastWriter;
pub use integer::activate;

use std::fmt;

use crate::csys::{ConstraintSystem, Constraint, IntForm, Valuation, VarId};
use crate::extint::{fun_bounds, ExtInt};
use crate::scalar::{Overflow, Scalar};

/// Integer constraints and valuations.
pub type IntConstraint<S> = Constraint<IntForm<S>>;
pub type IntValuation<S> = Valuation<ExtInt<S>>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("a value outgrew the scalar range ({0})")]
    ArithmeticLimit(String),
    #[error("test constraints are not bounded-increasing")]
    TestConstraint,
    #[error("not a cyclic system: {0}")]
    NotCyclic(String),
    #[error("valuation covers {found} variables, system has {expected}")]
    ValuationSize { expected: usize, found: usize },
    #[error("invalid flattening: {0}")]
    InvalidFlattening(String),
}

impl SolveError {
    pub(crate) fn limit(context: &str, o: Overflow) -> Self {
        SolveError::ArithmeticLimit(format!("{context}: {o}"))
    }
}

/// Saturation of a bounded-increasing constraint by a valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SaturationStatus {
    /// `ρ(output) ≥ f(⊤, …, ⊤)`.
    pub upper: bool,
    /// `ρ(output) ≤ f(⊥, …, ⊥)`.
    pub lower: bool,
}

pub fn saturation<S: Scalar>(
    c: &IntConstraint<S>,
    rho: &IntValuation<S>,
) -> Result<SaturationStatus, SolveError> {
    let f = c.form.as_bi().ok_or(SolveError::TestConstraint)?;
    let (lo, hi) = fun_bounds(f);
    let v = &rho[c.output];
    Ok(SaturationStatus { upper: *v >= hi, lower: *v <= lo })
}

fn upper_saturated<S: Scalar>(c: &IntConstraint<S>, values: &[ExtInt<S>]) -> bool {
    match &c.form {
        IntForm::Bi(f) => values[c.output.index()] >= fun_bounds(f).1,
        IntForm::Test(_) => false,
    }
}

/// Per-call instrumentation of [`solve_bi`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiCallStats {
    pub constraints: usize,
    pub outer_iterations: usize,
    /// Constraints upper-saturated by the result but not by the start value.
    pub newly_upper_saturated: usize,
}

/// Per-call instrumentation of [`solve_integer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegerCallStats {
    pub tests: usize,
    pub outer_iterations: usize,
}

/// Operation counts accumulated by a [`Solver`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Evaluations of constraint right-hand sides.
    pub applications: u64,
    pub accelerations: u64,
    pub bi_calls: Vec<BiCallStats>,
    pub integer_calls: Vec<IntegerCallStats>,
}

/// One cycle acceleration, as reported by `--trace`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccelerationEvent {
    /// The accelerated constraints, in cycle order.
    pub cycle: Vec<String>,
    /// `(variable, before, after)` for each cycle variable.
    pub values: Vec<(String, String, String)>,
    /// Constraints that became upper-saturated.
    pub newly_saturated: Vec<String>,
}

impl fmt::Display for AccelerationEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "accelerate [{}]", self.cycle.join(" ; "))?;
        let vals: Vec<String> =
            self.values.iter().map(|(v, a, b)| format!("{v}: {a} -> {b}")).collect();
        write!(f, " values {{{}}}", vals.join(", "))?;
        write!(f, " saturated [{}]", self.newly_saturated.join(" ; "))
    }
}

/// Solver entry points with instrumentation and optional tracing.
#[derive(Clone, Debug, Default)]
pub struct Solver {
    pub stats: SolveStats,
    names: Option<Vec<String>>,
    events: Vec<AccelerationEvent>,
}

impl Solver {
    pub fn new() -> Self {
        Solver::default()
    }

    /// Records an [`AccelerationEvent`] per acceleration, naming variables
    /// with `names` (indices beyond it print as `#i`).
    pub fn with_trace(names: &[String]) -> Self {
        Solver { names: Some(names.to_vec()), ..Solver::default() }
    }

    pub fn events(&self) -> &[AccelerationEvent] {
        &self.events
    }

    pub(crate) fn set_trace_names(&mut self, names: &[String]) {
        self.names = Some(names.to_vec());
    }

    pub(crate) fn tracing(&self) -> bool {
        self.names.is_some()
    }

    fn var_name(&self, v: VarId) -> String {
        match &self.names {
            Some(ns) if v.index() < ns.len() => ns[v.index()].clone(),
            _ => format!("#{}", v.0),
        }
    }

    fn render<S: Scalar>(&self, c: &IntConstraint<S>) -> String {
        use crate::csys::Form;
        let args: Vec<String> = c.inputs.iter().map(|&v| self.var_name(v)).collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        format!("{} >= {}", self.var_name(c.output), c.form.render(&refs))
    }

    /// The least solution of a cyclic system above `ρ0`.
    pub fn cyclic_solve<S: Scalar>(
        &mut self,
        p: &ConstraintSystem<S>,
        rho0: IntValuation<S>,
    ) -> Result<IntValuation<S>, SolveError> {
        check_size(p.var_count(), &rho0)?;
        let order = cyclic::cycle_order(p)?;
        let cycle: Vec<IntConstraint<S>> = order.iter().map(|&i| p.constraint(i).clone()).collect();
        let values = self.cyclic_core(&cycle, rho0.into_vec())?;
        Ok(Valuation::from_vec(values))
    }

    /// The least solution of a bounded-increasing system above `ρ0`.
    pub fn solve_bi<S: Scalar>(
        &mut self,
        p: &ConstraintSystem<S>,
        rho0: IntValuation<S>,
    ) -> Result<IntValuation<S>, SolveError> {
        check_size(p.var_count(), &rho0)?;
        if p.constraints().iter().any(|c| c.form.as_bi().is_none()) {
            return Err(SolveError::TestConstraint);
        }
        let values = self.bi_core(p.constraints(), rho0.into_vec())?;
        Ok(Valuation::from_vec(values))
    }

    /// The least solution of an integer system.
    pub fn solve_integer<S: Scalar>(&mut self, p: &ConstraintSystem<S>) -> Result<IntValuation<S>, SolveError> {
        self.solve_integer_from(p, Valuation::bottom(p.var_count()))
    }

    /// The least solution of an integer system above `ρ0`.
    pub fn solve_integer_from<S: Scalar>(
        &mut self,
        p: &ConstraintSystem<S>,
        rho0: IntValuation<S>,
    ) -> Result<IntValuation<S>, SolveError> {
        check_size(p.var_count(), &rho0)?;
        let values = self.integer_core(p.constraints(), rho0.into_vec())?;
        Ok(Valuation::from_vec(values))
    }

    /// `ρ(output) ⊒ f(ρ)` for one constraint, counting the evaluation.
    ///
    /// An image above the scalar range is unsatisfied; one below it is
    /// satisfied unless the output is still `−∞`.
    fn satisfied<S: Scalar>(&mut self, c: &IntConstraint<S>, values: &[ExtInt<S>]) -> bool {
        let out = &values[c.output.index()];
        if *out == ExtInt::PosInf {
            return true;
        }
        self.stats.applications += 1;
        match c.eval(values) {
            Ok(v) => v <= *out,
            Err(Overflow::Above) => false,
            Err(Overflow::Below) => *out != ExtInt::NegInf,
        }
    }

    fn solves<S: Scalar>(&mut self, cons: &[IntConstraint<S>], values: &[ExtInt<S>]) -> bool {
        cons.iter().all(|c| self.satisfied(c, values))
    }
}

fn check_size<S: Scalar>(expected: usize, rho: &IntValuation<S>) -> Result<(), SolveError> {
    if rho.len() == expected {
        Ok(())
    } else {
        Err(SolveError::ValuationSize { expected, found: rho.len() })
    }
}

/// [`Solver::cyclic_solve`] without instrumentation.
pub fn cyclic_solve<S: Scalar>(
    p: &ConstraintSystem<S>,
    rho0: IntValuation<S>,
) -> Result<IntValuation<S>, SolveError> {
    Solver::new().cyclic_solve(p, rho0)
}

/// [`Solver::solve_bi`] without instrumentation.
pub fn solve_bi<S: Scalar>(p: &ConstraintSystem<S>, rho0: IntValuation<S>) -> Result<IntValuation<S>, SolveError> {
    Solver::new().solve_bi(p, rho0)
}

/// [`Solver::solve_integer`] without instrumentation.
pub fn solve_integer<S: Scalar>(p: &ConstraintSystem<S>) -> Result<IntValuation<S>, SolveError> {
    Solver::new().solve_integer(p)
}

/// [`Solver::solve_integer_from`] without instrumentation.
pub fn solve_integer_from<S: Scalar>(
    p: &ConstraintSystem<S>,
    rho0: IntValuation<S>,
) -> Result<IntValuation<S>, SolveError> {
    Solver::new().solve_integer_from(p, rho0)
}
