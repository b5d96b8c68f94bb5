mod common;

use common::*;
use henkin::eval::{DomainSize, EvalError, Evaluator, Valuation};
use henkin::fixtures;
use henkin::oracle::{check_witness, tr_apply, FunctionTable, Oracle};
use henkin::reducer::{compile, plan_rows, Presentation, Word};
use henkin::syntax::{build_en, build_hn, mk_prefix, validate, var, Formula};
use henkin::text::{parse_formula, print_formula};
use proptest::prelude::*;

fn size(m: u32) -> DomainSize {
    DomainSize::new(m).unwrap()
}

fn fast(f: &Formula, m: u32) -> bool {
    Evaluator::new()
        .evaluate(f, size(m), &Valuation::new())
        .unwrap()
}

fn branch(shape: &PrefixShape, body: &Formula) -> Formula {
    Formula::Branch(shape.build(), Box::new(body.clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn engines_agree_on_branch_formulas((shape, body) in branch_formula(3, 3)) {
        let f = branch(&shape, &body);
        let naive = Evaluator::with_budget(2_000_000);
        for m in 1..=3 {
            match naive.evaluate_naive(&f, size(m), &Valuation::new()) {
                Ok(expected) => prop_assert_eq!(fast(&f, m), expected, "m = {}", m),
                // Small tables must always fit; large ones at m = 3 may not.
                Err(EvalError::BudgetExceeded { .. }) => prop_assert!(m == 3 || shape.table_entries(m) > 12),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn engines_agree_on_nested_sentences(f in any_formula()) {
        let closed = Formula::Exists(f.free_variables().into_iter().collect(), Box::new(f));
        let closed = match &closed {
            Formula::Exists(vs, body) if vs.is_empty() => (**body).clone(),
            _ => closed,
        };
        let naive = Evaluator::with_budget(2_000_000);
        for m in 1..=2 {
            if let Ok(expected) = naive.evaluate_naive(&closed, size(m), &Valuation::new()) {
                prop_assert_eq!(fast(&closed, m), expected, "m = {}", m);
            }
        }
    }

    #[test]
    fn row_order_does_not_matter(
        (shape, body) in branch_formula(3, 3),
        seed_u in any::<prop::sample::Index>(),
        seed_e in any::<prop::sample::Index>(),
    ) {
        let mut permuted = shape.clone();
        let n = shape.universals.len();
        let k = shape.existentials.len();
        permuted.universals.rotate_left(seed_u.index(n));
        let map: Vec<usize> = (0..n)
            .map(|i| permuted.universals.iter().position(|u| *u == shape.universals[i]).unwrap())
            .collect();
        permuted.deps = shape.deps.iter().map(|d| d.iter().map(|&i| map[i]).collect()).collect();
        let r = seed_e.index(k);
        permuted.existentials.rotate_left(r);
        permuted.deps.rotate_left(r);
        for m in 1..=3 {
            prop_assert_eq!(fast(&branch(&shape, &body), m), fast(&branch(&permuted, &body), m));
        }
    }

    #[test]
    fn renaming_bound_variables_does_not_matter((shape, body) in branch_formula(3, 3)) {
        let f = branch(&shape, &body);
        let g = alpha_rename(&f);
        prop_assert_ne!(&f, &g);
        for m in 1..=3 {
            prop_assert_eq!(fast(&f, m), fast(&g, m));
        }
    }

    #[test]
    fn more_dependencies_never_hurt(
        (shape, body) in branch_formula(3, 3),
        extra in prop::collection::vec(prop::collection::vec(any::<bool>(), 3), 3),
    ) {
        let mut wider = shape.clone();
        for (i, deps) in wider.deps.iter_mut().enumerate() {
            let n = shape.universals.len();
            let mut set: Vec<usize> = (0..n).filter(|&j| deps.contains(&j) || extra[i][j]).collect();
            set.sort();
            *deps = set;
        }
        for m in 1..=3 {
            if fast(&branch(&shape, &body), m) {
                prop_assert!(fast(&branch(&wider, &body), m), "m = {}", m);
            }
        }
    }

    #[test]
    fn full_dependency_is_first_order(n in 1usize..=3, k in 1usize..=3, seed in any::<u64>()) {
        use rand::SeedableRng;
        let shape = full_shape(n, k);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let body = random_matrix(&mut rng, &shape.bound(), 3);
        for m in 1..=3 {
            prop_assert_eq!(fast(&branch(&shape, &body), m), fast(&full_collapse(&shape, &body), m));
        }
    }

    #[test]
    fn triangular_dependency_is_alternation(n in 1usize..=3, seed in any::<u64>()) {
        use rand::SeedableRng;
        let shape = triangular_shape(n);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let body = random_matrix(&mut rng, &shape.bound(), 3);
        for m in 1..=3 {
            prop_assert_eq!(fast(&branch(&shape, &body), m), fast(&alternating(&shape, &body), m));
        }
    }

    #[test]
    fn printing_round_trips(f in any_formula()) {
        let text = print_formula(&f);
        let back = parse_formula(&text);
        prop_assert_eq!(back.as_ref(), Ok(&f), "{}", text);
        prop_assert_eq!(print_formula(&f), text);
    }

    #[test]
    fn parse_errors_point_inside_the_input(text in "[a-z ().=~&|<>!-]{0,24}") {
        if let Err(e) = parse_formula(&text) {
            let lines: Vec<&str> = text.split('\n').collect();
            prop_assert!(e.span.line >= 1 && e.span.line <= lines.len());
            prop_assert!(e.span.column >= 1 && e.span.column <= lines[e.span.line - 1].len() + 1);
        }
    }

    #[test]
    fn prefix_construction_is_total(
        univ in prop::collection::vec(prop::sample::select(vec!["p", "q", "r", "s"]), 0..4),
        exist in prop::collection::vec(prop::sample::select(vec!["r", "s", "t", "w"]), 0..4),
        deps in prop::collection::vec(
            (prop::sample::select(vec!["r", "s", "t", "w", "p"]),
             prop::collection::vec(prop::sample::select(vec!["p", "q", "r", "z"]), 0..3)),
            0..5),
    ) {
        let u: Vec<_> = univ.iter().map(|s| var(s)).collect();
        let e: Vec<_> = exist.iter().map(|s| var(s)).collect();
        let d: Vec<_> = deps.iter().map(|(k, v)| (var(k), v.iter().map(|s| var(s)).collect())).collect();
        match mk_prefix(u, e, d) {
            Ok(p) => prop_assert!(p.violations().is_empty()),
            Err(err) => prop_assert!(!err.0.is_empty()),
        }
    }

    #[test]
    fn translation_is_a_homomorphism(
        u in word(), v in word(),
        a in prop::collection::vec(0u32..3, 3),
        b in prop::collection::vec(0u32..3, 3),
        p in 0u32..3,
    ) {
        let t = FunctionTable::new(3).with(letter('a'), a).with(letter('b'), b);
        let uv = u.concat(&v);
        prop_assert_eq!(tr_apply(&uv, p, &t), tr_apply(&u, tr_apply(&v, p, &t), &t));
    }

    #[test]
    fn trivial_queries_compile_to_false(e in instance(), w in word()) {
        let (pres, _) = e;
        let q = henkin::reducer::Equation::new(w.clone(), w);
        let f = compile(&pres, &q);
        for m in 1..=2 {
            prop_assert!(!fast(&f, m));
        }
    }

    #[test]
    fn compiled_prefix_matches_the_plan((pres, q) in instance()) {
        let plan = plan_rows(&pres, &q);
        let f = compile(&pres, &q);
        let Formula::Exists(_, body) = &f else { panic!("expected leading exists") };
        let Formula::Branch(prefix, _) = &**body else { panic!("expected a branch") };
        prop_assert_eq!(prefix.row_count(), Some(plan.len()));
        for i in 0..prefix.existentials().len() {
            prop_assert_eq!(prefix.deps_of(i).len(), 1);
        }
        prop_assert!(validate(&f).iter().all(|d| !d.is_error()));
        prop_assert!(f.is_sentence());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_witnesses_check_out((pres, q) in instance()) {
        for m in 1..=3 {
            let first = Oracle::new().find_witness(&pres, &q, m).unwrap();
            if let Some(w) = &first {
                prop_assert!(check_witness(&pres, &q, w));
            }
            prop_assert_eq!(&first, &Oracle::new().find_witness(&pres, &q, m).unwrap());
        }
    }

    #[test]
    fn compiled_sentence_matches_the_oracle((pres, q) in instance()) {
        let f = compile(&pres, &q);
        for m in 1..=3 {
            let found = Oracle::new().find_witness(&pres, &q, m).unwrap().is_some();
            prop_assert_eq!(fast(&f, m), found, "m = {} for {} / {}", m, pres, q);
        }
    }

    #[test]
    fn equation_order_is_irrelevant((pres, q) in instance()) {
        let mut eqs = pres.equations().to_vec();
        eqs.reverse();
        let swapped = Presentation::new(eqs);
        let (f, g) = (compile(&pres, &q), compile(&swapped, &q));
        for m in 1..=3 {
            prop_assert_eq!(fast(&f, m), fast(&g, m));
            prop_assert_eq!(
                Oracle::new().find_witness(&pres, &q, m).unwrap().is_some(),
                Oracle::new().find_witness(&swapped, &q, m).unwrap().is_some()
            );
        }
    }
}

#[test]
fn prefix_families_validate() {
    for n in 1..=8 {
        let h = Formula::Branch(build_hn(n).unwrap(), Box::new(Formula::True));
        let e = Formula::Branch(build_en(n).unwrap(), Box::new(Formula::True));
        assert!(validate(&h).is_empty(), "H_{n}");
        assert!(validate(&e).is_empty(), "E_{n}");
    }
    assert!(build_hn(0).is_err() && build_en(0).is_err());
}

#[test]
fn fixtures_are_closed_and_round_trip() {
    for f in [
        fixtures::ceitin_h12(),
        fixtures::ceitin_e10(),
        fixtures::ehrenfeucht_finiteness(),
        fixtures::infinity_sentence(),
    ] {
        assert!(f.free_variables().is_empty());
        assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
    }
}

#[test]
fn ceitin_with_an_entailed_query_is_false() {
    let q = henkin::reducer::Equation::of("a", "a");
    let f = fixtures::ceitin_h12_with_query(&q).unwrap();
    for m in 1..=2 {
        assert!(!fast(&f, m), "m = {m}");
    }
}

#[test]
fn identity_tables_satisfy_every_presentation() {
    let e = fixtures::ceitin_presentation();
    let id = FunctionTable::identity(3, e.alphabet().iter().copied());
    for eq in e.equations() {
        for p in 0..3 {
            assert_eq!(tr_apply(&eq.lhs, p, &id), tr_apply(&eq.rhs, p, &id));
        }
    }
    let w = Word::parse("cca").unwrap();
    assert_eq!(tr_apply(&w, 2, &id), 2);
}

#[test]
fn ceitin_fixtures_hold_at_three() {
    assert!(fast(&fixtures::ceitin_h12(), 3));
    assert!(fast(&fixtures::ceitin_e10(), 3));
    for m in 1..=3 {
        let h = fixtures::identity_witness_report(
            &fixtures::ceitin_h12_prefix(),
            &fixtures::ceitin_h12_clauses(),
            m,
        );
        let e = fixtures::identity_witness_report(
            &fixtures::ceitin_e10_prefix(),
            &fixtures::ceitin_e10_clauses(),
            m,
        );
        assert!(h.iter().chain(&e).all(|(_, ok)| *ok), "m = {m}");
        assert_eq!((h.len(), e.len()), (14, 17));
    }
}
