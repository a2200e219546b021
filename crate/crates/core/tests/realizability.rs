mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tlsf::ast::{Model, Variant};
use tlsf::formula::Formula;
use tlsf::ltlf::{evaluate, FiniteWord};
use tlsf::realizability::{canonicalize, solve, solve_formula, Arena, Outcome, SolveError, DEFAULT_STATE_CAP};

use common::{game_search, random_formula, words_up_to};

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        prop::sample::select(vec!["a", "b"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (0..common::UNARY.len(), inner.clone()).prop_map(|(k, f)| common::UNARY[k](f)),
            (0..common::BINARY.len(), inner.clone(), inner).prop_map(|(k, a, b)| common::BINARY[k](a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn canonical_form_keeps_meaning(f in arb_formula()) {
        let c = canonicalize(&f);
        prop_assert_eq!(canonicalize(&c), c.clone());
        for w in words_up_to(3, &["a", "b"]).iter().filter(|w| !w.is_empty()) {
            prop_assert_eq!(evaluate(&f, w), evaluate(&c, w), "{} vs {} on {}", f, c, w);
        }
    }
}

#[test]
fn verdicts_match_game_tree_search() {
    let (ins, outs) = (["r"], ["g"]);
    let signals = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut rng = StdRng::seed_from_u64(17);
    let mut compared = 0;
    while compared < 150 {
        let size = rng.gen_range(1..=5);
        let f = random_formula(&mut rng, size, &["r", "g"]);
        let Some(arena) = Arena::build(&f, &signals(&ins), &signals(&outs), 6) else {
            continue;
        };
        let depth = arena.states.len() + 1;
        for model in [Model::Mealy, Model::Moore] {
            let verdict = solve_formula(&f, &signals(&ins), &signals(&outs), model, DEFAULT_STATE_CAP);
            let expected = game_search(&f, &ins, &outs, model, depth);
            assert_eq!(verdict.outcome == Outcome::Realizable, expected, "{f} as {model}");
            if let Some(strategy) = &verdict.strategy {
                assert_eq!(strategy.model, model);
                assert!(strategy.verify(&f, depth), "{f}: strategy fails");
            }
        }
        compared += 1;
    }
}

#[test]
fn fixture_verdicts() {
    for (name, want) in [
        ("copy_mealy", Outcome::Realizable),
        ("copy_moore", Outcome::Unrealizable),
        ("eventually_grant", Outcome::Realizable),
        ("eventually_request", Outcome::Unrealizable),
        ("finite_arbiter", Outcome::Unrealizable),
        ("lock_handoff", Outcome::Unrealizable),
        ("enum_position", Outcome::Unrealizable),
        ("enum_partial", Outcome::Realizable),
        ("sugar_finite", Outcome::Realizable),
        ("pattern_match", Outcome::Unrealizable),
        ("release_and_weak", Outcome::Realizable),
    ] {
        let spec = common::elab(name, &[]);
        let verdict = solve(&spec, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(verdict.outcome, want, "{name}");
        if let Some(strategy) = verdict.strategy {
            let f = tlsf::semantics::compose(&spec).unwrap().formula;
            assert!(strategy.verify(&f, verdict.states + 1), "{name}");
            assert!(strategy.to_table().starts_with(&format!("model {}", spec.semantics.model)));
        }
    }
}

#[test]
fn state_cap_gives_unknown() {
    let f = Formula::strong_next(Formula::strong_next(Formula::finally(Formula::atom("r"))));
    let r = vec!["r".to_string()];
    let g = vec!["g".to_string()];
    assert_eq!(solve_formula(&f, &r, &g, Model::Mealy, 1).outcome, Outcome::Unknown);
    assert_ne!(solve_formula(&f, &r, &g, Model::Mealy, DEFAULT_STATE_CAP).outcome, Outcome::Unknown);
}

#[test]
fn only_finite_specifications_are_solved() {
    let spec = common::elab("arbiter", &[]);
    assert!(matches!(solve(&spec, DEFAULT_STATE_CAP), Err(SolveError::NotFinite(Variant::Standard))));
}

#[test]
fn accepting_on_the_first_letter() {
    // `X[!] false` can never be satisfied, `X false` holds on any one-letter word.
    let r = vec!["r".to_string()];
    let g = vec!["g".to_string()];
    let never = Formula::strong_next(Formula::False);
    let once = Formula::next(Formula::False);
    assert_eq!(solve_formula(&never, &r, &g, Model::Moore, 100).outcome, Outcome::Unrealizable);
    assert_eq!(solve_formula(&once, &r, &g, Model::Moore, 100).outcome, Outcome::Realizable);
    assert!(evaluate(&once, &FiniteWord(vec![Default::default()])));
}
