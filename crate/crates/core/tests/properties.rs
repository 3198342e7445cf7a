//! Property tests over randomly generated systems and programs.

mod common;

use accelflow::csys::{
    analyze_graph, apply_constraint, cyclic_flattening, is_solution, is_unfolding, precompose, rename_back,
    ConstraintSystem, Lattice, Valuation,
};
use accelflow::frontend::{gen_constraints, parse_program};
use accelflow::interval::{
    decode_valuation, iv_meet, positive_mult_transform, translate_to_integer, Interval,
};
use accelflow::intsolve::{solve_integer, SolveError};
use accelflow::BigInt;
use common::{int_oracle, interval_oracle, random_int_system, random_interval_system, E};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ext() -> impl Strategy<Value = E> {
    prop_oneof![
        1 => Just(E::NegInf),
        1 => Just(E::PosInf),
        8 => (-8i64..=8).prop_map(E::int),
    ]
}

fn interval() -> impl Strategy<Value = Interval<BigInt>> {
    prop_oneof![
        1 => Just(Interval::empty()),
        6 => (ext(), ext()).prop_map(|(a, b)| Interval::from_bounds(a.clone().min(b.clone()), a.max(b))),
    ]
}

/// Bounds as plain data: `None` for the empty set.
fn bounds(i: &Interval<BigInt>) -> Option<(E, E)> {
    (!i.is_empty()).then(|| (i.lo(), i.hi().clone()))
}

fn subset(a: &Interval<BigInt>, b: &Interval<BigInt>) -> bool {
    match (bounds(a), bounds(b)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some((l1, h1)), Some((l2, h2))) => l2 <= l1 && h1 <= h2,
    }
}

fn random_valuation(r: &mut ChaCha8Rng, n: usize) -> Valuation<E> {
    Valuation::from_vec(
        (0..n)
            .map(|_| match r.gen_range(0..10) {
                0 => E::NegInf,
                1 => E::PosInf,
                _ => E::int(r.gen_range(-20..=20)),
            })
            .collect(),
    )
}

/// Some elementary cycle of constraints, found by depth-first search.
fn find_cycle(p: &ConstraintSystem<BigInt>) -> Option<Vec<usize>> {
    let cs = p.constraints();
    fn dfs(
        cs: &[accelflow::csys::Constraint<accelflow::csys::IntForm<BigInt>>],
        start: usize,
        path: &mut Vec<usize>,
    ) -> bool {
        let last = *path.last().unwrap();
        for next in 0..cs.len() {
            if !cs[next].inputs.contains(&cs[last].output) {
                continue;
            }
            if next == start {
                return true;
            }
            if path.iter().any(|&c| cs[c].output == cs[next].output) {
                continue;
            }
            path.push(next);
            if dfs(cs, start, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    (0..cs.len()).find_map(|start| {
        let mut path = vec![start];
        dfs(cs, start, &mut path).then_some(path)
    })
}

/// A small structured program over `x` and `y`.
fn random_program(r: &mut ChaCha8Rng) -> String {
    fn expr(r: &mut ChaCha8Rng) -> String {
        let v = if r.gen_bool(0.5) { "x" } else { "y" };
        let c: i32 = r.gen_range(-5..=5);
        match r.gen_range(0..6) {
            0 => c.to_string(),
            1 => v.to_string(),
            2 => format!("{v} + {c}"),
            3 => format!("{v} - {}", c.abs()),
            4 => format!("{v} * {c}"),
            _ => "x + y".to_string(),
        }
    }
    fn block(r: &mut ChaCha8Rng, depth: u32, out: &mut String) {
        for _ in 0..r.gen_range(1..=3) {
            let v = if r.gen_bool(0.5) { "x" } else { "y" };
            let op = ["<", "<=", ">", ">=", "==", "!="][r.gen_range(0..6)];
            let c = r.gen_range(-10..=10);
            match if depth == 0 { 0 } else { r.gen_range(0..4) } {
                0 | 1 => out.push_str(&format!("{v} = {};\n", expr(r))),
                2 => {
                    out.push_str(&format!("if ({v} {op} {c}) {{\n"));
                    block(r, depth - 1, out);
                    out.push_str("} else {\n");
                    block(r, depth - 1, out);
                    out.push_str("}\n");
                }
                _ => {
                    out.push_str(&format!("while ({v} {op} {c}) {{\n"));
                    block(r, depth - 1, out);
                    out.push_str("}\n");
                }
            }
        }
    }
    let mut out = format!("x = {};\ny = {};\n", r.gen_range(-5..=5), r.gen_range(-5..=5));
    block(r, 2, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn a_constraint_touches_only_its_output(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_int_system(&mut r);
        let rho = random_valuation(&mut r, p.var_count());
        for c in p.constraints() {
            let Ok(next) = apply_constraint(c, &rho) else { continue };
            for v in p.vars() {
                if v != c.output {
                    prop_assert_eq!(&next[v], &rho[v]);
                }
            }
        }
    }

    #[test]
    fn converged_kleene_is_a_fixpoint(seed in any::<u64>()) {
        let p = random_int_system(&mut rng(seed));
        let (run, converged) = int_oracle(&p);
        if converged {
            prop_assert!(is_solution(&p, &run.valuation).unwrap());
            for c in p.constraints() {
                let image = apply_constraint(c, &run.valuation).unwrap();
                prop_assert!(image.leq(&run.valuation));
            }
        }
    }

    #[test]
    fn solver_matches_kleene(seed in any::<u64>()) {
        let p = random_int_system(&mut rng(seed));
        let (run, converged) = int_oracle(&p);
        match solve_integer(&p) {
            Ok(rho) => {
                prop_assert!(is_solution(&p, &rho).unwrap());
                if converged {
                    prop_assert_eq!(rho, run.valuation, "on\n{}", p);
                }
            }
            Err(SolveError::ArithmeticLimit(_)) => prop_assert!(!converged),
            Err(e) => prop_assert!(false, "{} on\n{}", e, p),
        }
    }

    #[test]
    fn cyclic_flattening_is_a_flat_unfolding(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_int_system(&mut r);
        if let Some(cycle) = find_cycle(&p) {
            let (flat, kappa) = cyclic_flattening(&p, &cycle).unwrap();
            prop_assert!(analyze_graph(&flat).is_flat(), "{}", flat);
            prop_assert!(is_unfolding(&flat, &kappa, &p));
            prop_assert!(kappa.is_surjective());
            for (i, &c) in cycle.iter().enumerate() {
                prop_assert_eq!(kappa.apply((p.var_count() + i).into()), p.constraint(c).output);
            }
            // Renaming back undoes precomposition for a surjective renaming.
            let rho = random_valuation(&mut r, p.var_count());
            prop_assert_eq!(rename_back(&kappa, &precompose(&rho, &kappa)), rho);
        }
    }

    #[test]
    fn encoding_is_an_order_embedding(a in interval(), b in interval()) {
        prop_assert_eq!(a.leq(&b), subset(&a, &b));
        let back = Interval::from_encoding(a.neg_lo().clone(), a.hi().clone());
        prop_assert_eq!(&back, &a);
    }

    #[test]
    fn join_and_meet_follow_the_encoding(a in interval(), b in interval()) {
        let hull = match (bounds(&a), bounds(&b)) {
            (None, _) => b.clone(),
            (_, None) => a.clone(),
            (Some((l1, h1)), Some((l2, h2))) => Interval::from_bounds(l1.min(l2), h1.max(h2)),
        };
        prop_assert_eq!(a.join(&b), hull);
        let meet = match (bounds(&a), bounds(&b)) {
            (Some((l1, h1)), Some((l2, h2))) => {
                let (lo, hi) = (l1.max(l2), h1.min(h2));
                if lo <= hi { Interval::from_bounds(lo, hi) } else { Interval::empty() }
            }
            _ => Interval::empty(),
        };
        prop_assert_eq!(&iv_meet(&a, &b), &meet);
        let componentwise = Interval::from_encoding(
            a.neg_lo().clone().min(b.neg_lo().clone()),
            a.hi().clone().min(b.hi().clone()),
        );
        prop_assert_eq!(componentwise, meet);
    }

    #[test]
    fn the_product_transform_preserves_the_least_solution(seed in any::<u64>()) {
        let p = random_interval_system(&mut rng(seed));
        let q = positive_mult_transform(&p);
        let before = interval_oracle(&p);
        let after = interval_oracle(&q);
        if before.converged && after.converged {
            prop_assert_eq!(&after.valuation.values()[..p.var_count()], before.valuation.values(), "on\n{}", p);
        }
    }

    #[test]
    fn the_integer_translation_is_exact(seed in any::<u64>()) {
        let p = positive_mult_transform(&random_interval_system(&mut rng(seed)));
        let t = translate_to_integer(&p).unwrap();
        let iv = interval_oracle(&p);
        let (int, converged) = int_oracle(&t.system);
        if iv.converged && converged {
            prop_assert_eq!(decode_valuation(&t, &int.valuation), iv.valuation, "on\n{}", p);
        }
    }

    #[test]
    fn random_programs_analyse_consistently(seed in any::<u64>()) {
        let src = random_program(&mut rng(seed));
        let program = parse_program(&src).unwrap();
        let g = gen_constraints::<BigInt>(&program).unwrap();
        for &point in &g.cfg.points {
            for v in &g.vars {
                prop_assert!(g.var_at(point, v).is_some(), "{}@{} missing in\n{}", v, point, src);
            }
        }
        let entry = g.var_at(g.cfg.entry, "x").unwrap();
        let run = interval_oracle(&g.system);
        match accelflow::interval::solve_interval(&g.system) {
            Ok(rho) => {
                prop_assert_eq!(&rho[entry], &Interval::full());
                prop_assert!(is_solution(&g.system, &rho).unwrap());
                if run.converged {
                    prop_assert_eq!(rho, run.valuation, "program\n{}", src);
                }
            }
            Err(e) => prop_assert!(false, "{} on\n{}", e, src),
        }
    }
}

