//! Rewriting multiplications so that both operands are nonnegative.

use super::{Interval, IntervalSystem, IvForm};
use crate::csys::{SystemBuilder, VarId};
use crate::scalar::Scalar;

/// Whether every definer of `v` is a meet with a constant of naturals, so
/// that the least solution of `v` lies in `N` whatever the rest of the system.
fn natural_by_construction<S: Scalar>(p: &IntervalSystem<S>, v: VarId) -> bool {
    p.constraints()
        .iter()
        .filter(|c| c.output == v)
        .all(|c| matches!(&c.form, IvForm::Meet(k) if k.is_natural()))
}

/// Whether both operands of constraint `i`, a multiplication, are natural
/// by construction.
pub fn is_positive_mult<S: Scalar>(p: &IntervalSystem<S>, i: usize) -> bool {
    let c = p.constraint(i);
    c.form == IvForm::Mul && c.inputs.iter().all(|&v| natural_by_construction(p, v))
}

/// Replaces each multiplication `X ⊒ X1·X2` whose operands are not natural
/// by construction with products of positive and negative parts:
///
/// ```text
/// X1u ⊒ X1 ⊓ N        X ⊒ X1u·X2u
/// X2u ⊒ X2 ⊓ N        X ⊒ X1l·X2l
/// X1l ⊒ (−X1) ⊓ N     X ⊒ −(X1u·X2l)
/// X2l ⊒ (−X2) ⊓ N     X ⊒ −(X1l·X2u)
/// ```
///
/// Composite right-hand sides go through fresh `_pm{i}.*` variables. The
/// original variables keep their indices, and with them their least
/// solution.
pub fn positive_mult_transform<S: Scalar>(p: &IntervalSystem<S>) -> IntervalSystem<S> {
    let rewrite: Vec<usize> =
        (0..p.constraint_count()).filter(|&i| p.constraint(i).form == IvForm::Mul && !is_positive_mult(p, i)).collect();
    if rewrite.is_empty() {
        return p.clone();
    }
    let mut b = SystemBuilder::new();
    for name in p.names() {
        b.declare(name).expect("names are unique");
    }
    let nat = || IvForm::Meet(Interval::naturals());
    for (i, c) in p.constraints().iter().enumerate() {
        if rewrite.binary_search(&i).is_err() {
            b.push(c.output, c.form.clone(), c.inputs.clone()).expect("copied constraint");
            continue;
        }
        let (x, x1, x2) = (c.output, c.inputs[0], c.inputs[1]);
        let mut fresh = |suffix: &str, of: Option<VarId>| {
            let base = match of {
                Some(v) => format!("_pm{i}.{}.{suffix}", p.name(v)),
                None => format!("_pm{i}.{suffix}"),
            };
            b.fresh(&base)
        };
        let x1u = fresh("u", Some(x1));
        let x2u = fresh("u", Some(x2));
        let n1 = fresh("n", Some(x1));
        let n2 = fresh("n", Some(x2));
        let x1l = fresh("l", Some(x1));
        let x2l = fresh("l", Some(x2));
        let p3 = fresh("p3", None);
        let p4 = fresh("p4", None);
        let block = [
            (x1u, nat(), vec![x1]),
            (x2u, nat(), vec![x2]),
            (n1, IvForm::Neg, vec![x1]),
            (x1l, nat(), vec![n1]),
            (n2, IvForm::Neg, vec![x2]),
            (x2l, nat(), vec![n2]),
            (x, IvForm::Mul, vec![x1u, x2u]),
            (x, IvForm::Mul, vec![x1l, x2l]),
            (p3, IvForm::Mul, vec![x1u, x2l]),
            (x, IvForm::Neg, vec![p3]),
            (p4, IvForm::Mul, vec![x1l, x2u]),
            (x, IvForm::Neg, vec![p4]),
        ];
        for (out, form, inputs) in block {
            b.push(out, form, inputs).expect("fresh variables are declared");
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csys::{kleene_iterate, Valuation};
    use crate::interval::parse_ivs;
    use num_bigint::BigInt;

    type I = Interval<BigInt>;

    #[test]
    fn one_product_becomes_the_twelve_constraint_block() {
        let p = parse_ivs::<BigInt>("var X Y\nX >= [-2,3]\nY >= mul(X, X)\n").unwrap();
        // The repeated operand was aliased on load.
        assert_eq!(p.constraint_count(), 3);
        let q = positive_mult_transform(&p);
        assert_eq!(q.constraint_count(), 2 + 12);
        assert_eq!(q.var_count(), p.var_count() + 8);
        assert_eq!(&q.names()[..3], p.names());
        let mul_count = q.constraints().iter().filter(|c| c.form == IvForm::Mul).count();
        assert_eq!(mul_count, 4);
        for i in 0..q.constraint_count() {
            if q.constraint(i).form == IvForm::Mul {
                assert!(is_positive_mult(&q, i));
            }
        }
    }

    #[test]
    fn square_of_mixed_interval() {
        let p = parse_ivs::<BigInt>("var X Y\nX >= [-2,3]\nY >= mul(X, X)\n").unwrap();
        let q = positive_mult_transform(&p);
        let (rho, ok) = kleene_iterate(&q, Valuation::bottom(q.var_count()), 100);
        assert!(ok);
        assert_eq!(rho[p.lookup("Y").unwrap()], I::range(-6, 9));
        let (direct, _) = kleene_iterate(&p, Valuation::bottom(p.var_count()), 100);
        assert_eq!(direct[p.lookup("Y").unwrap()], I::range(-6, 9));
    }

    #[test]
    fn systems_without_mixed_products_are_unchanged() {
        let p = parse_ivs::<BigInt>("var X Y\nX >= [1,2]\nY >= add(X, X)\n").unwrap();
        assert_eq!(positive_mult_transform(&p), p);
        let p = parse_ivs::<BigInt>("var A B C\nA >= meet(C, [0,+inf])\nB >= meet(C, [2,5])\nC >= mul(A, B)\n")
            .unwrap();
        assert!(is_positive_mult(&p, 2));
        assert_eq!(positive_mult_transform(&p), p);
    }

    #[test]
    fn empty_operand_keeps_product_empty() {
        let p = parse_ivs::<BigInt>("var A B C\nA >= [-1,1]\nC >= mul(A, B)\n").unwrap();
        let q = positive_mult_transform(&p);
        let (rho, ok) = kleene_iterate(&q, Valuation::bottom(q.var_count()), 100);
        assert!(ok);
        assert_eq!(rho[p.lookup("C").unwrap()], I::empty());
    }
}
