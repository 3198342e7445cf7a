//! The `(I⁻, I⁺)` encoding: interval systems as integer systems.

use super::{is_positive_mult, positive_mult_transform, Interval, IntervalSystem, IntervalValuation, IvForm};
use crate::csys::{ConstraintSystem, IntForm, SystemBuilder, Valuation, VarId};
use crate::extint::{BiFun, ExtInt, TestFun};
use crate::intsolve::{SolveError, Solver};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("constraint #{0} multiplies operands that are not natural by construction")]
    MixedProduct(usize),
}

/// An integer system encoding an interval system.
///
/// Interval variable `k` is encoded by the integer variables `2k` (`X.neg`,
/// for `X⁻`) and `2k+1` (`X.pos`, for `X⁺`); intermediates follow.
#[derive(Clone, Debug)]
pub struct Translation<S> {
    pub system: ConstraintSystem<S>,
    interval_vars: usize,
}

impl<S: Scalar> Translation<S> {
    pub fn neg(&self, v: VarId) -> VarId {
        VarId::from(2 * v.index())
    }

    pub fn pos(&self, v: VarId) -> VarId {
        VarId::from(2 * v.index() + 1)
    }

    pub fn interval_vars(&self) -> usize {
        self.interval_vars
    }
}

/// Encodes `p`, which must have the positive-multiplication property
/// syntactically (see [`positive_mult_transform`]).
///
/// Meets and products guard their results with test constraints, so that an
/// empty operand yields `(−∞, −∞)` instead of a spurious bound:
///
/// ```text
/// X ⊒ X1 ⊓ K:  X⁻ ≥ θ≥−K⁺(X1⁻, θ≥−K⁻(X1⁺, min(X1⁻, K⁻)))
///              X⁺ ≥ θ≥−K⁻(X1⁺, θ≥−K⁺(X1⁻, min(X1⁺, K⁺)))
/// X ⊒ X1·X2:   X⁻ ≥ θ>−∞(X1⁻, θ>−∞(X1⁺, θ>−∞(X2⁻, θ>−∞(X2⁺, mulm(X1⁻, X2⁻)))))
///              X⁺ ≥ θ>−∞(X1⁺, θ>−∞(X1⁻, θ>−∞(X2⁺, θ>−∞(X2⁻, mulp(X1⁺, X2⁺)))))
/// ```
///
/// Nested right-hand sides are unfolded innermost first into fresh
/// `_c{i}.*` variables, each with a single definition.
pub fn translate_to_integer<S: Scalar>(p: &IntervalSystem<S>) -> Result<Translation<S>, TranslateError> {
    let mut b: SystemBuilder<IntForm<S>> = SystemBuilder::new();
    for name in p.names() {
        b.declare(&format!("{name}.neg")).expect("interval names are unique");
        b.declare(&format!("{name}.pos")).expect("interval names are unique");
    }
    let neg = |v: VarId| VarId::from(2 * v.index());
    let pos = |v: VarId| VarId::from(2 * v.index() + 1);
    let bi = IntForm::Bi;
    let geq = |k: ExtInt<S>| IntForm::Test(TestFun::Geq(k));
    let nonempty = || IntForm::Test(TestFun::Gt(ExtInt::NegInf));
    for (i, c) in p.constraints().iter().enumerate() {
        let x = c.output;
        let push = |b: &mut SystemBuilder<IntForm<S>>, out: VarId, form: IntForm<S>, inputs: Vec<VarId>| {
            b.push(out, form, inputs).expect("translation is well-formed");
        };
        match &c.form {
            IvForm::Neg => {
                let x1 = c.inputs[0];
                push(&mut b, pos(x), bi(BiFun::Id), vec![neg(x1)]);
                push(&mut b, neg(x), bi(BiFun::Id), vec![pos(x1)]);
            }
            IvForm::Const(k) => {
                push(&mut b, neg(x), bi(BiFun::Const(k.neg_lo().clone())), vec![]);
                push(&mut b, pos(x), bi(BiFun::Const(k.hi().clone())), vec![]);
            }
            IvForm::Add => {
                let (x1, x2) = (c.inputs[0], c.inputs[1]);
                push(&mut b, neg(x), bi(BiFun::Add), vec![neg(x1), neg(x2)]);
                push(&mut b, pos(x), bi(BiFun::Add), vec![pos(x1), pos(x2)]);
            }
            IvForm::Meet(k) => {
                let x1 = c.inputs[0];
                let (kn, kp) = (k.neg_lo().clone(), k.hi().clone());
                for (target, own, other, own_k, other_k, side) in
                    [(neg(x), neg(x1), pos(x1), &kn, &kp, "neg"), (pos(x), pos(x1), neg(x1), &kp, &kn, "pos")]
                {
                    let t1 = b.fresh(&format!("_c{i}.{side}.min"));
                    let t2 = b.fresh(&format!("_c{i}.{side}.test"));
                    push(&mut b, t1, bi(BiFun::GuardedMin(own_k.clone())), vec![own]);
                    push(&mut b, t2, geq(-own_k), vec![other, t1]);
                    push(&mut b, target, geq(-other_k), vec![own, t2]);
                }
            }
            IvForm::Mul => {
                if !is_positive_mult(p, i) {
                    return Err(TranslateError::MixedProduct(i));
                }
                let (x1, x2) = (c.inputs[0], c.inputs[1]);
                let sides = [
                    (neg(x), BiFun::MulMinus, [neg(x1), neg(x2)], [pos(x2), neg(x2), pos(x1), neg(x1)], "neg"),
                    (pos(x), BiFun::MulPlus, [pos(x1), pos(x2)], [neg(x2), pos(x2), neg(x1), pos(x1)], "pos"),
                ];
                for (target, f, operands, guards, side) in sides {
                    let mut acc = b.fresh(&format!("_c{i}.{side}.mul"));
                    push(&mut b, acc, bi(f), operands.to_vec());
                    for (k, g) in guards.iter().enumerate() {
                        let out = if k + 1 == guards.len() { target } else { b.fresh(&format!("_c{i}.{side}.g{}", k + 1)) };
                        push(&mut b, out, nonempty(), vec![*g, acc]);
                        acc = out;
                    }
                }
            }
        }
    }
    Ok(Translation { system: b.build(), interval_vars: p.var_count() })
}

/// Reads the interval of every encoded variable off an integer valuation.
pub fn decode_valuation<S: Scalar>(t: &Translation<S>, rho: &Valuation<ExtInt<S>>) -> IntervalValuation<S> {
    Valuation::from_vec(
        (0..t.interval_vars)
            .map(VarId::from)
            .map(|v| Interval::from_encoding(rho[t.neg(v)].clone(), rho[t.pos(v)].clone()))
            .collect(),
    )
}

impl Solver {
    /// The least solution of an interval system.
    ///
    /// Trace events name the variables of the integer translation.
    pub fn solve_interval<S: Scalar>(&mut self, p: &IntervalSystem<S>) -> Result<IntervalValuation<S>, SolveError> {
        let q = positive_mult_transform(p);
        let t = translate_to_integer(&q).expect("the transform removes mixed products");
        if self.tracing() {
            self.set_trace_names(t.system.names());
        }
        let rho = self.solve_integer(&t.system)?;
        let mut out = decode_valuation(&t, &rho).into_vec();
        out.truncate(p.var_count());
        Ok(Valuation::from_vec(out))
    }
}

/// [`Solver::solve_interval`] without instrumentation.
pub fn solve_interval<S: Scalar>(p: &IntervalSystem<S>) -> Result<IntervalValuation<S>, SolveError> {
    Solver::new().solve_interval(p)
}
