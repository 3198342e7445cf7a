//! Random systems and oracle comparisons shared by the integration suites
//! and the acceptance harness.

#![allow(dead_code)]

use accelflow::csys::{
    is_solution, kleene_run, ConstraintSystem, IntForm, KleeneConfig, KleeneRun, SystemBuilder, Valuation, VarId,
};
use accelflow::extint::{BiFun, ExtInt, TestFun};
use accelflow::interval::{Interval, IntervalSystem, IvForm};
use accelflow::intsolve::{SolveError, Solver};
use accelflow::BigInt;
use rand::Rng;

pub type E = ExtInt<BigInt>;

pub const ORACLE_ROUNDS: u64 = 100_000;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}

fn small_ext(rng: &mut impl Rng) -> E {
    match rng.gen_range(0..20) {
        0 => E::NegInf,
        1 => E::PosInf,
        _ => E::int(rng.gen_range(-8..=8)),
    }
}

fn var(rng: &mut impl Rng, n: usize) -> VarId {
    VarId::from(rng.gen_range(0..n))
}

/// Up to 8 variables and 12 constraints over the whole catalog, constants
/// in `[−8, 8]` (plus the occasional infinity).
pub fn random_int_system(rng: &mut impl Rng) -> ConstraintSystem<BigInt> {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=12);
    let mut b = SystemBuilder::new();
    for name in names(n) {
        b.declare(&name).unwrap();
    }
    for _ in 0..m {
        let out = var(rng, n);
        let (form, arity) = match rng.gen_range(0..13) {
            0 | 1 => (IntForm::Bi(BiFun::Const(small_ext(rng))), 0),
            2 => (IntForm::Bi(BiFun::Id), 1),
            3 | 4 => (IntForm::Bi(BiFun::GuardedMin(small_ext(rng))), 1),
            5 | 6 => (IntForm::Bi(BiFun::Add), 2),
            7 => (IntForm::Bi(BiFun::MulPlus), 2),
            8 => (IntForm::Bi(BiFun::MulMinus), 2),
            9 => (IntForm::Bi(BiFun::Pow2), 1),
            10 => (IntForm::Bi(BiFun::Factorial), 1),
            11 => (IntForm::Test(TestFun::Geq(small_ext(rng))), 2),
            _ => (IntForm::Test(TestFun::Gt(small_ext(rng))), 2),
        };
        let inputs = (0..arity).map(|_| var(rng, n)).collect();
        b.push(out, form, inputs).unwrap();
    }
    b.build()
}

/// Only bounded-increasing constraints.
pub fn random_bi_system(rng: &mut impl Rng) -> ConstraintSystem<BigInt> {
    loop {
        let p = random_int_system(rng);
        if p.constraints().iter().all(|c| c.form.as_bi().is_some()) {
            return p;
        }
    }
}

fn small_interval(rng: &mut impl Rng) -> Interval<BigInt> {
    match rng.gen_range(0..24) {
        0 => Interval::empty(),
        1 => Interval::full(),
        _ => {
            let a = small_ext(rng);
            let b = small_ext(rng);
            Interval::from_bounds(a.clone().min(b.clone()), a.max(b))
        }
    }
}

/// Up to 6 variables and 10 constraints, multiplication included.
pub fn random_interval_system(rng: &mut impl Rng) -> IntervalSystem<BigInt> {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=10);
    let mut b = SystemBuilder::new();
    for name in names(n) {
        b.declare(&name).unwrap();
    }
    for _ in 0..m {
        let out = var(rng, n);
        let (form, arity) = match rng.gen_range(0..9) {
            0 | 1 => (IvForm::Const(small_interval(rng)), 0),
            2 => (IvForm::Neg, 1),
            3 | 4 => (IvForm::Add, 2),
            5 | 6 => (IvForm::Meet(small_interval(rng)), 1),
            _ => (IvForm::Mul, 2),
        };
        let inputs = (0..arity).map(|_| var(rng, n)).collect();
        b.push(out, form, inputs).unwrap();
    }
    b.build()
}

pub fn widen_ext(v: &ExtInt<i64>) -> E {
    v.convert().expect("i64 fits")
}

/// The oracle on machine integers: much faster, and an overflow simply
/// ends the run unconverged.
pub fn int_oracle(p: &ConstraintSystem<BigInt>) -> (KleeneRun<E>, bool) {
    let small = p.convert::<i64>().expect("small constants");
    let run = kleene_run(&small, Valuation::bottom(small.var_count()), &KleeneConfig { max_rounds: ORACLE_ROUNDS, max_bits: None });
    let converged = run.converged;
    let valuation = Valuation::from_vec(run.valuation.values().iter().map(widen_ext).collect());
    (
        KleeneRun {
            valuation,
            converged,
            stop: run.stop,
            rounds: run.rounds,
            applications: run.applications,
            stable: run.stable,
        },
        converged,
    )
}

pub fn interval_oracle(p: &IntervalSystem<BigInt>) -> KleeneRun<Interval<BigInt>> {
    let small = p.convert_scalar::<i64>().expect("small constants");
    let run = kleene_run(&small, Valuation::bottom(small.var_count()), &KleeneConfig { max_rounds: ORACLE_ROUNDS, max_bits: None });
    KleeneRun {
        valuation: Valuation::from_vec(run.valuation.values().iter().map(|i| i.convert().expect("fits")).collect()),
        converged: run.converged,
        stop: run.stop,
        rounds: run.rounds,
        applications: run.applications,
        stable: run.stable,
    }
}

/// Tallies of one suite.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub systems: usize,
    pub converged: usize,
    pub unconverged: usize,
    pub limit: usize,
    pub failures: Vec<String>,
    pub bound_violations: Vec<String>,
    pub work_violations: Vec<String>,
    pub max_work_ratio: f64,
}

pub fn cubic_budget(vars: usize, constraints: usize) -> u64 {
    64 * ((vars + constraints) as u64).pow(3)
}

/// Compares `solve_integer` with the oracle and checks the iteration and
/// work bounds of the instrumented run.
pub fn check_integer(p: &ConstraintSystem<BigInt>, t: &mut Tally) {
    t.systems += 1;
    let mut solver = Solver::new();
    let result = solver.solve_integer(p);
    let (run, converged) = int_oracle(p);
    let rho = match result {
        Ok(rho) => rho,
        Err(SolveError::ArithmeticLimit(_)) if !converged => {
            t.limit += 1;
            return;
        }
        Err(e) => {
            t.failures.push(format!("solver error {e} on\n{p}"));
            return;
        }
    };
    if converged {
        t.converged += 1;
        if rho != run.valuation {
            t.failures.push(format!("solver {:?} oracle {:?} on\n{p}", rho.values(), run.valuation.values()));
        }
    } else {
        t.unconverged += 1;
        if !is_solution(p, &rho).unwrap_or(false) {
            t.failures.push(format!("not a solution {:?} on\n{p}", rho.values()));
        }
        for (i, stable) in run.stable.iter().enumerate() {
            if *stable && rho.values()[i] != run.valuation.values()[i] {
                t.failures.push(format!("stable X{i} differs on\n{p}"));
            }
        }
    }
    for s in &solver.stats.bi_calls {
        if s.outer_iterations > 1 + s.newly_upper_saturated {
            t.bound_violations.push(format!("solve_bi {s:?} on\n{p}"));
        }
    }
    for s in &solver.stats.integer_calls {
        if s.outer_iterations > 1 + s.tests {
            t.bound_violations.push(format!("solve_integer {s:?} on\n{p}"));
        }
    }
    record_work(t, solver.stats.applications, p.var_count(), p.constraint_count(), &p.to_string());
}

fn record_work(t: &mut Tally, applications: u64, vars: usize, constraints: usize, text: &str) {
    let budget = cubic_budget(vars, constraints);
    t.max_work_ratio = t.max_work_ratio.max(applications as f64 / budget as f64);
    if applications > budget {
        t.work_violations.push(format!("{applications} applications > {budget} on\n{text}"));
    }
}

/// Compares `solve_interval` with the interval oracle.
pub fn check_interval(p: &IntervalSystem<BigInt>, t: &mut Tally) {
    t.systems += 1;
    let mut solver = Solver::new();
    let result = solver.solve_interval(p);
    let run = interval_oracle(p);
    let rho = match result {
        Ok(rho) => rho,
        Err(SolveError::ArithmeticLimit(_)) if !run.converged => {
            t.limit += 1;
            return;
        }
        Err(e) => {
            t.failures.push(format!("solver error {e} on\n{p}"));
            return;
        }
    };
    if run.converged {
        t.converged += 1;
        if rho != run.valuation {
            let show = |v: &Valuation<Interval<BigInt>>| v.values().iter().map(ToString::to_string).collect::<Vec<_>>();
            t.failures.push(format!("solver {:?} oracle {:?} on\n{p}", show(&rho), show(&run.valuation)));
        }
    } else {
        t.unconverged += 1;
        if !is_solution(p, &rho).unwrap_or(false) {
            t.failures.push(format!("not a solution on\n{p}"));
        }
        for (i, stable) in run.stable.iter().enumerate() {
            if *stable && rho.values()[i] != run.valuation.values()[i] {
                t.failures.push(format!("stable X{i} differs on\n{p}"));
            }
        }
    }
    record_work(t, solver.stats.applications, p.var_count(), p.constraint_count(), &p.to_string());
}
