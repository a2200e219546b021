//! LTLf evaluation over finite words.
//!
//! Positions are 1-based. Every subformula gets a truth vector over all
//! positions, filled backwards, so a query costs `O(|φ| · n)`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

pub type Letter = BTreeSet<String>;

/// A finite sequence of letters, each the set of propositions that hold.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FiniteWord(pub Vec<Letter>);

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FiniteWord(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, letter) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str("{")?;
            for (j, p) in letter.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(p)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// Builds a letter from proposition names.
pub fn letter<S: AsRef<str>>(props: impl IntoIterator<Item = S>) -> Letter {
    props.into_iter().map(|p| p.as_ref().to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtlfError {
    #[error("position {position} is outside 1..={length}")]
    PositionOutOfRange { position: usize, length: usize },
    #[error("line {line}: {message}")]
    MalformedTrace { line: usize, message: String },
    #[error("line {line}: unknown signal `{name}`")]
    UnknownSignal { line: usize, name: String },
    #[error("formula mentions `{0}`, which is not a declared signal")]
    FreeAtom(String),
}

/// Truth of `φ` at every position of `w`, index `k` standing for position `k + 1`.
pub fn truth_vector(f: &Formula, w: &FiniteWord) -> Vec<bool> {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || truth_vector_inner(f, w))
}

fn truth_vector_inner(f: &Formula, w: &FiniteWord) -> Vec<bool> {
    let n = w.len();
    // Backward recurrence `out[i] = step(i, out[i+1])` with `out[n] = last`.
    let backward = |last: bool, step: &dyn Fn(usize, bool) -> bool| {
        let mut out = vec![false; n];
        let mut next = last;
        for i in (0..n).rev() {
            next = step(i, next);
            out[i] = next;
        }
        out
    };
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => w.0.iter().map(|l| l.contains(p)).collect(),
        Formula::Not(a) => truth_vector(a, w).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Equiv(a, b) => {
            let (va, vb) = (truth_vector(a, w), truth_vector(b, w));
            va.into_iter()
                .zip(vb)
                .map(|(x, y)| match f {
                    Formula::And(..) => x && y,
                    Formula::Or(..) => x || y,
                    Formula::Implies(..) => !x || y,
                    _ => x == y,
                })
                .collect()
        }
        Formula::Next(a) => {
            let va = truth_vector(a, w);
            (0..n).map(|i| i + 1 == n || va[i + 1]).collect()
        }
        Formula::StrongNext(a) => {
            let va = truth_vector(a, w);
            (0..n).map(|i| i + 1 < n && va[i + 1]).collect()
        }
        Formula::Finally(a) => {
            let va = truth_vector(a, w);
            backward(false, &|i, later| va[i] || later)
        }
        Formula::Globally(a) => {
            let va = truth_vector(a, w);
            backward(true, &|i, later| va[i] && later)
        }
        Formula::Until(a, b) | Formula::WeakUntil(a, b) => {
            let (va, vb) = (truth_vector(a, w), truth_vector(b, w));
            // W = U || G a: the only difference is the value past the end.
            let last = matches!(f, Formula::WeakUntil(..));
            backward(last, &|i, later| vb[i] || (va[i] && later))
        }
        Formula::Release(a, b) => {
            // a R b = !(!a U !b)
            let (va, vb) = (truth_vector(a, w), truth_vector(b, w));
            backward(true, &|i, later| vb[i] && (va[i] || later))
        }
    }
}

/// `w, i ⊨ φ` for `1 <= i <= |w|`.
pub fn evaluate_at(f: &Formula, w: &FiniteWord, i: usize) -> Result<bool, LtlfError> {
    if i == 0 || i > w.len() {
        return Err(LtlfError::PositionOutOfRange {
            position: i,
            length: w.len(),
        });
    }
    Ok(truth_vector(f, w)[i - 1])
}

/// `w ⊨ φ`. The empty word satisfies nothing, not even `true`.
pub fn evaluate(f: &Formula, w: &FiniteWord) -> bool {
    !w.is_empty() && truth_vector(f, w)[0]
}

/// Rejects atoms outside `universe` before evaluation.
pub fn check_closed<'a>(f: &Formula, universe: impl IntoIterator<Item = &'a str>) -> Result<(), LtlfError> {
    let known: BTreeSet<&str> = universe.into_iter().collect();
    match f.atoms().into_iter().find(|p| !known.contains(p)) {
        Some(p) => Err(LtlfError::FreeAtom(p.to_string())),
        None => Ok(()),
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '@' | '.' | '[' | ']')
}

/// Parses `{a b} {b} {}` into a word. `#` starts a comment.
///
/// With a universe, names outside it are rejected.
pub fn parse_trace(text: &str, universe: Option<&[String]>) -> Result<FiniteWord, LtlfError> {
    let mut letters = Vec::new();
    let mut current: Option<(Letter, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let malformed = |message: String| LtlfError::MalformedTrace { line, message };
        let mut chars = content.char_indices().peekable();
        while let Some((_, c)) = chars.next() {
            match c {
                c if c.is_whitespace() => {}
                '{' => {
                    if current.is_some() {
                        return Err(malformed("`{` inside a step".into()));
                    }
                    current = Some((Letter::new(), line));
                }
                '}' => match current.take() {
                    Some((l, _)) => letters.push(l),
                    None => return Err(malformed("`}` without a matching `{`".into())),
                },
                c if is_name_char(c) => {
                    let mut name = c.to_string();
                    while let Some(&(_, d)) = chars.peek() {
                        if !is_name_char(d) {
                            break;
                        }
                        name.push(d);
                        chars.next();
                    }
                    let Some((l, _)) = current.as_mut() else {
                        return Err(malformed(format!("signal `{name}` outside a step")));
                    };
                    if let Some(u) = universe {
                        if !u.contains(&name) {
                            return Err(LtlfError::UnknownSignal { line, name });
                        }
                    }
                    l.insert(name);
                }
                other => return Err(malformed(format!("unexpected character `{other}`"))),
            }
        }
    }
    if let Some((_, line)) = current {
        return Err(LtlfError::MalformedTrace {
            line,
            message: "step is not closed".into(),
        });
    }
    Ok(FiniteWord(letters))
}
