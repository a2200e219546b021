use crate::formula::Formula;
use crate::ltlf::{evaluate, FiniteWord, Letter};

/// Residual obligation after reading `letter`.
///
/// For every nonempty `w`, `letter · w ⊨ φ` iff `w ⊨ progress(φ, letter)`.
/// The word ending right after `letter` is covered by [`accepts_one_letter`].
pub fn progress(f: &Formula, letter: &Letter) -> Formula {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || progress_inner(f, letter))
}

fn progress_inner(f: &Formula, letter: &Letter) -> Formula {
    let p = |g: &Formula| progress(g, letter);
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(a) => {
            if letter.contains(a) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(a) => Formula::not(p(a)),
        Formula::And(a, b) => Formula::and(p(a), p(b)),
        Formula::Or(a, b) => Formula::or(p(a), p(b)),
        Formula::Implies(a, b) => Formula::implies(p(a), p(b)),
        Formula::Equiv(a, b) => Formula::equiv(p(a), p(b)),
        Formula::Next(a) | Formula::StrongNext(a) => (**a).clone(),
        Formula::Finally(a) => Formula::or(p(a), f.clone()),
        Formula::Globally(a) => Formula::and(p(a), f.clone()),
        Formula::Until(a, b) | Formula::WeakUntil(a, b) => Formula::or(p(b), Formula::and(p(a), f.clone())),
        Formula::Release(a, b) => Formula::and(p(b), Formula::or(p(a), f.clone())),
    }
}

/// Whether the one-letter word `letter` satisfies `φ`.
pub fn accepts_one_letter(f: &Formula, letter: &Letter) -> bool {
    evaluate(f, &FiniteWord(vec![letter.clone()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::letter;

    fn a() -> Formula {
        Formula::atom("a")
    }

    fn b() -> Formula {
        Formula::atom("b")
    }

    #[test]
    fn literals_resolve() {
        let f = Formula::and(a(), Formula::next(b()));
        assert_eq!(progress(&f, &letter(["a"])), Formula::and(Formula::True, b()));
    }

    #[test]
    fn one_letter_acceptance() {
        assert!(accepts_one_letter(&Formula::next(Formula::False), &letter::<&str>([])));
        assert!(!accepts_one_letter(&Formula::strong_next(Formula::True), &letter::<&str>([])));
        assert!(accepts_one_letter(&a(), &letter(["a"])));
    }
}
