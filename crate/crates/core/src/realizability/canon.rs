use crate::formula::Formula;

/// Canonical representative used as a game-state key.
///
/// Folds constants, removes double negation, flattens `&&`/`||` into
/// sorted, deduplicated operand lists and collapses complementary pairs.
pub fn canonicalize(f: &Formula) -> Formula {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || canon(f))
}

fn canon(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(a) => negate(canonicalize(a)),
        And(..) => junction(f, true),
        Or(..) => junction(f, false),
        Implies(a, b) => match (canonicalize(a), canonicalize(b)) {
            (True, b) => b,
            (False, _) | (_, True) => True,
            (a, False) => negate(a),
            (a, b) if a == b => True,
            (a, b) => Formula::implies(a, b),
        },
        Equiv(a, b) => match (canonicalize(a), canonicalize(b)) {
            (True, x) | (x, True) => x,
            (False, x) | (x, False) => negate(x),
            (a, b) if a == b => True,
            (a, b) if a < b => Formula::equiv(a, b),
            (a, b) => Formula::equiv(b, a),
        },
        Next(a) => match canonicalize(a) {
            True => True,
            a => Formula::next(a),
        },
        StrongNext(a) => match canonicalize(a) {
            False => False,
            a => Formula::strong_next(a),
        },
        Finally(a) => finally(canonicalize(a)),
        Globally(a) => globally(canonicalize(a)),
        Until(a, b) => match (canonicalize(a), canonicalize(b)) {
            (_, c @ (True | False)) => c,
            (False, b) => b,
            (True, b) => finally(b),
            (a, b) if a == b => a,
            (a, b) => Formula::until(a, b),
        },
        WeakUntil(a, b) => match (canonicalize(a), canonicalize(b)) {
            (_, True) | (True, _) => True,
            (False, b) => b,
            (a, False) => globally(a),
            (a, b) if a == b => a,
            (a, b) => Formula::weak_until(a, b),
        },
        Release(a, b) => match (canonicalize(a), canonicalize(b)) {
            (_, c @ (True | False)) => c,
            (True, b) => b,
            (False, b) => globally(b),
            (a, b) if a == b => a,
            (a, b) => Formula::release(a, b),
        },
    }
}

/// `F` of a canonical operand.
fn finally(a: Formula) -> Formula {
    match a {
        c @ (Formula::True | Formula::False | Formula::Finally(_)) => c,
        a => Formula::finally(a),
    }
}

/// `G` of a canonical operand.
fn globally(a: Formula) -> Formula {
    match a {
        c @ (Formula::True | Formula::False | Formula::Globally(_)) => c,
        a => Formula::globally(a),
    }
}

fn negate(f: Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(x) => *x,
        x => Formula::not(x),
    }
}

fn flatten(f: &Formula, conj: bool, out: &mut Vec<Formula>) {
    match (f, conj) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        _ => out.push(canonicalize(f)),
    }
}

fn junction(f: &Formula, conj: bool) -> Formula {
    let (unit, zero) = if conj {
        (Formula::True, Formula::False)
    } else {
        (Formula::False, Formula::True)
    };
    let mut raw = Vec::new();
    flatten(f, conj, &mut raw);
    // Canonical operands may themselves be junctions of the same kind.
    let mut items = Vec::new();
    for item in raw {
        match (&item, conj) {
            (Formula::And(..), true) | (Formula::Or(..), false) => {
                let mut inner = Vec::new();
                flatten_plain(&item, conj, &mut inner);
                items.extend(inner);
            }
            _ => items.push(item),
        }
    }
    if items.contains(&zero) {
        return zero;
    }
    items.retain(|x| *x != unit);
    items.sort();
    items.dedup();
    let complementary = items
        .iter()
        .any(|x| matches!(x, Formula::Not(inner) if items.binary_search(inner).is_ok()));
    if complementary {
        return zero;
    }
    let join = if conj { Formula::and } else { Formula::or };
    items.into_iter().reduce(join).unwrap_or(unit)
}

fn flatten_plain(f: &Formula, conj: bool, out: &mut Vec<Formula>) {
    match (f, conj) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            flatten_plain(a, conj, out);
            flatten_plain(b, conj, out);
        }
        _ => out.push(f.clone()),
    }
}
