//! Oracles and helpers shared by the integration tests.
//!
//! Nothing here calls into the evaluator or the progression code of the
//! library: the LTLf clauses, set-builder ranges and game search are
//! written out again from their definitions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::Rng;
use tlsf::ast::{Model, Specification};
use tlsf::elaborate::{elaborate, ElabOptions, ElaboratedSpec};
use tlsf::formula::Formula;
use tlsf::ltlf::{FiniteWord, Letter};
use tlsf::parser::{parse_spec, parse_spec_with, Mode, ParseOptions};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

fn tlsf_files(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "tlsf"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("readable fixture"))
        })
        .collect();
    out.sort();
    out
}

/// `(name, source)` of every full-format fixture, sorted by name.
pub fn full_fixtures() -> Vec<(String, String)> {
    tlsf_files(&fixtures_dir())
}

/// `(name, source)` of every basic-format fixture.
pub fn basic_fixtures() -> Vec<(String, String)> {
    tlsf_files(&fixtures_dir().join("basic"))
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixtures_dir().join(format!("{name}.tlsf"))
}

pub fn load(name: &str) -> Specification {
    let src = std::fs::read_to_string(fixture_path(name)).expect("fixture");
    parse_spec(&src).unwrap_or_else(|d| panic!("{name}: {d:?}"))
}

pub fn load_basic(name: &str) -> Specification {
    let src = std::fs::read_to_string(fixtures_dir().join("basic").join(format!("{name}.tlsf"))).unwrap();
    parse_spec_with(&src, ParseOptions { mode: Mode::Basic }).unwrap()
}

pub fn elab(name: &str, overrides: &[(&str, u32)]) -> ElaboratedSpec {
    let spec = load(name);
    let options = ElabOptions {
        overrides: overrides
            .iter()
            .map(|(k, v)| (k.to_string(), BigUint::from(*v)))
            .collect::<BTreeMap<_, _>>(),
        ..ElabOptions::default()
    };
    elaborate(&spec, &options).unwrap_or_else(|e| panic!("{name}: {e}"))
}

// ---------------------------------------------------------------------------
// LTLf clauses, position by position

/// `w, i ⊨ φ` with `1 <= i <= n`, straight from the inductive definition.
pub fn naive_holds(f: &Formula, w: &[Letter], i: usize) -> bool {
    let n = w.len();
    let h = |g: &Formula, j: usize| naive_holds(g, w, j);
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p) => w[i - 1].contains(p),
        Formula::Not(a) => !h(a, i),
        Formula::And(a, b) => h(a, i) && h(b, i),
        Formula::Or(a, b) => h(a, i) || h(b, i),
        Formula::Implies(a, b) => !h(a, i) || h(b, i),
        Formula::Equiv(a, b) => h(a, i) == h(b, i),
        Formula::Next(a) => i == n || h(a, i + 1),
        Formula::StrongNext(a) => i < n && h(a, i + 1),
        Formula::Finally(a) => (i..=n).any(|j| h(a, j)),
        Formula::Globally(a) => (i..=n).all(|j| h(a, j)),
        Formula::Until(a, b) => naive_until(a, b, w, i),
        Formula::WeakUntil(a, b) => naive_until(a, b, w, i) || (i..=n).all(|j| h(a, j)),
        Formula::Release(a, b) => {
            !naive_until(&Formula::not((**a).clone()), &Formula::not((**b).clone()), w, i)
        }
    }
}

/// `∃k. i <= k <= n, w,k ⊨ b and ∀j. i <= j < k, w,j ⊨ a`
fn naive_until(a: &Formula, b: &Formula, w: &[Letter], i: usize) -> bool {
    (i..=w.len()).any(|k| naive_holds(b, w, k) && (i..k).all(|j| naive_holds(a, w, j)))
}

pub fn naive_eval(f: &Formula, w: &[Letter]) -> bool {
    !w.is_empty() && naive_holds(f, w, 1)
}

// ---------------------------------------------------------------------------
// Enumeration and sampling

pub fn atoms(names: &[&str]) -> Vec<Formula> {
    names.iter().map(|n| Formula::atom(*n)).collect()
}

type Unary = fn(Formula) -> Formula;
type Binary = fn(Formula, Formula) -> Formula;

pub const UNARY: [Unary; 5] = [
    Formula::not,
    Formula::next,
    Formula::strong_next,
    Formula::finally,
    Formula::globally,
];

pub const BINARY: [Binary; 7] = [
    Formula::and,
    Formula::or,
    Formula::implies,
    Formula::equiv,
    Formula::until,
    Formula::release,
    Formula::weak_until,
];

/// Every formula with at most `max` nodes over the constants and `props`.
pub fn formulas_up_to(max: usize, props: &[&str]) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max + 1];
    if max == 0 {
        return Vec::new();
    }
    by_size[1] = [Formula::True, Formula::False]
        .into_iter()
        .chain(atoms(props))
        .collect();
    for size in 2..=max {
        let mut layer = Vec::new();
        for u in UNARY {
            layer.extend(by_size[size - 1].iter().cloned().map(u));
        }
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for b in BINARY {
                for x in &by_size[left] {
                    for y in &by_size[right] {
                        layer.push(b(x.clone(), y.clone()));
                    }
                }
            }
        }
        by_size[size] = layer;
    }
    by_size.into_iter().flatten().collect()
}

/// All subsets of `props`.
pub fn all_letters(props: &[&str]) -> Vec<Letter> {
    (0..1usize << props.len())
        .map(|mask| {
            props
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, p)| p.to_string())
                .collect()
        })
        .collect()
}

/// Every word of length `0..=max_len`.
pub fn words_up_to(max_len: usize, props: &[&str]) -> Vec<FiniteWord> {
    let letters = all_letters(props);
    let mut out = vec![FiniteWord::default()];
    let mut frontier = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(FiniteWord));
        frontier = next;
    }
    out
}

/// A uniformly shaped random formula with exactly `size` nodes.
pub fn random_formula(rng: &mut StdRng, size: usize, props: &[&str]) -> Formula {
    if size <= 1 {
        let k = rng.gen_range(0..props.len() + 2);
        return match k {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(props[k - 2]),
        };
    }
    if size == 2 || rng.gen_bool(0.4) {
        let u = UNARY[rng.gen_range(0..UNARY.len())];
        return u(random_formula(rng, size - 1, props));
    }
    let left = rng.gen_range(1..size - 1);
    let b = BINARY[rng.gen_range(0..BINARY.len())];
    b(
        random_formula(rng, left, props),
        random_formula(rng, size - 1 - left, props),
    )
}

pub fn random_word(rng: &mut StdRng, len: usize, props: &[&str]) -> FiniteWord {
    let letters = all_letters(props);
    FiniteWord((0..len).map(|_| letters[rng.gen_range(0..letters.len())].clone()).collect())
}

// ---------------------------------------------------------------------------
// Ranges and games

/// `{n | x <= n <= z, n = x + j(y - x)}`
pub fn set_builder(x: u64, y: u64, z: u64) -> BTreeSet<u64> {
    (x..=z).filter(|n| (n - x).is_multiple_of(y - x)).collect()
}

/// Whether the system can force a satisfying prefix within `depth` letters,
/// searched over the full game tree with the clause-level evaluator.
pub fn game_search(f: &Formula, inputs: &[&str], outputs: &[&str], model: Model, depth: usize) -> bool {
    let ins = all_letters(inputs);
    let outs = all_letters(outputs);
    let mut word = Vec::new();
    search(f, &ins, &outs, model, depth, &mut word)
}

fn search(f: &Formula, ins: &[Letter], outs: &[Letter], model: Model, depth: usize, word: &mut Vec<Letter>) -> bool {
    if depth == 0 {
        return false;
    }
    let step = |i: &Letter, o: &Letter, word: &mut Vec<Letter>| {
        word.push(i.union(o).cloned().collect());
        let ok = naive_eval(f, word) || search(f, ins, outs, model, depth - 1, word);
        word.pop();
        ok
    };
    match model {
        Model::Mealy => ins.iter().all(|i| outs.iter().any(|o| step(i, o, word))),
        Model::Moore => outs.iter().any(|o| ins.iter().all(|i| step(i, o, word))),
    }
}

/// Left-nested conjunction, `true` when empty.
pub fn conj(items: &[Formula]) -> Formula {
    let mut it = items.iter().cloned();
    match it.next() {
        None => Formula::True,
        Some(first) => it.fold(first, Formula::and),
    }
}

pub fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}
