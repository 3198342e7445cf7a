//! Test constraints: activation and the outer solving loop.

use super::{IntConstraint, IntegerCallStats, IntValuation, SolveError, Solver};
use crate::csys::{Constraint, IntForm};
use crate::extint::{BiFun, ExtInt};
use crate::scalar::Scalar;

/// The active form `X ⊒ id(V)` of a test constraint `X ⊒ θ(G, V)` whose
/// guard clears the threshold under `ρ`; `None` otherwise (or for a
/// bounded-increasing constraint).
pub fn activate<S: Scalar>(c: &IntConstraint<S>, rho: &IntValuation<S>) -> Option<IntConstraint<S>> {
    match &c.form {
        IntForm::Test(t) if t.holds(&rho[c.inputs[0]]) => {
            Some(Constraint::new(c.output, IntForm::Bi(BiFun::Id), vec![c.inputs[1]]))
        }
        _ => None,
    }
}

impl Solver {
    pub(super) fn integer_core<S: Scalar>(
        &mut self,
        cons: &[IntConstraint<S>],
        rho0: Vec<ExtInt<S>>,
    ) -> Result<Vec<ExtInt<S>>, SolveError> {
        let mut active: Vec<IntConstraint<S>> = cons.iter().filter(|c| c.form.as_bi().is_some()).cloned().collect();
        let mut pending: Vec<&IntConstraint<S>> = cons.iter().filter(|c| c.form.as_bi().is_none()).collect();
        let tests = pending.len();
        let mut rho = IntValuation::from_vec(rho0);
        let mut outer = 0;
        while !self.solves(cons, rho.values()) {
            outer += 1;
            if outer > tests + 1 {
                return Err(SolveError::ArithmeticLimit("test activation did not settle".into()));
            }
            rho = IntValuation::from_vec(self.bi_core(&active, rho.into_vec())?);
            pending.retain(|c| match activate(c, &rho) {
                Some(form) => {
                    active.push(form);
                    false
                }
                None => true,
            });
        }
        self.stats.integer_calls.push(IntegerCallStats { tests, outer_iterations: outer });
        Ok(rho.into_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csys::{kleene_iterate, parse_ics_str, VarId};
    use crate::intsolve::solve_integer;
    use crate::extint::TestFun;
    use num_bigint::BigInt;

    type E = ExtInt<BigInt>;

    #[test]
    fn activation_examples() {
        let c: IntConstraint<BigInt> =
            Constraint::new(VarId(0), IntForm::Test(TestFun::Geq(E::int(3))), vec![VarId(1), VarId(2)]);
        let rho = |g: E| IntValuation::from_vec(vec![E::NegInf, g, E::int(7)]);
        assert_eq!(
            activate(&c, &rho(E::int(5))),
            Some(Constraint::new(VarId(0), IntForm::Bi(BiFun::Id), vec![VarId(2)]))
        );
        assert_eq!(activate(&c, &rho(E::int(2))), None);
        let gt_bot: IntConstraint<BigInt> =
            Constraint::new(VarId(0), IntForm::Test(TestFun::Gt(E::NegInf)), vec![VarId(1), VarId(2)]);
        assert_eq!(activate(&gt_bot, &rho(E::NegInf)), None);
    }

    #[test]
    fn inactive_test_stays_bottom() {
        let p = parse_ics_str("var X Y\nX >= const(0)\nY >= test_geq(1; X, X)\n");
        let out = solve_integer(&p).unwrap();
        assert_eq!(&out.values()[..2], &[E::int(0), E::NegInf]);
        assert_eq!(kleene_iterate(&p, IntValuation::bottom(p.var_count()), 100).0, out);
    }

    #[test]
    fn active_test_propagates() {
        let p = parse_ics_str("var X Y\nX >= const(5)\nY >= test_geq(3; X, X)\n");
        let mut s = Solver::new();
        let out = s.solve_integer(&p).unwrap();
        assert_eq!(&out.values()[..2], &[E::int(5), E::int(5)]);
        assert_eq!(s.stats.integer_calls[0].outer_iterations, 2);
    }

    #[test]
    fn bottom_solution_needs_no_work() {
        let p = parse_ics_str("var X Y\nX >= const(-inf)\nY >= add(X, X)\n");
        let mut s = Solver::new();
        let out = s.solve_integer(&p).unwrap();
        assert!(out.values().iter().all(|v| *v == E::NegInf));
        assert_eq!(s.stats.integer_calls[0].outer_iterations, 0);
    }

    #[test]
    fn chained_activation() {
        // The second loop only starts once the first counter reaches 10.
        let p = parse_ics_str(
            "var One Zero A B Ay By\n\
             One >= const(1)\nZero >= const(0)\n\
             A >= const(0)\nAy >= add(A, One)\nA >= min(Ay, 10)\n\
             B >= test_geq(10; A, Zero)\nBy >= add(B, One)\nB >= min(By, 20)\n",
        );
        let out = solve_integer(&p).unwrap();
        let (oracle, ok) = kleene_iterate(&p, IntValuation::bottom(p.var_count()), 100_000);
        assert!(ok);
        assert_eq!(out, oracle);
        assert_eq!(out[p.lookup("B").unwrap()], E::int(20));
    }
}
