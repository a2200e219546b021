use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::{accepts_one_letter, canonicalize, progress};
use crate::ast::{Model, Variant};
use crate::elaborate::ElaboratedSpec;
use crate::formula::Formula;
use crate::ltlf::{evaluate, FiniteWord, Letter};
use crate::semantics::{compose, CompositionError};

pub const DEFAULT_STATE_CAP: usize = 20_000;

/// Signals beyond this count make the letter alphabet too large to enumerate.
const MAX_SIGNALS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("realizability is decided for Finite semantics only, found {0:?}")]
    NotFinite(Variant),
    #[error(transparent)]
    Composition(#[from] CompositionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Realizable,
    Unrealizable,
    /// The arena grew past the state cap.
    Unknown,
}

/// Where a move leads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Move {
    /// The letter just read completes a satisfying prefix.
    Accept,
    To(usize),
}

/// Reachability game built by progression.
#[derive(Debug, Clone)]
pub struct Arena {
    pub states: Vec<Formula>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// `moves[state][input][output]`, letters indexed by bit masks.
    pub moves: Vec<Vec<Vec<Move>>>,
}

impl Arena {
    /// Explores every state reachable from `canonicalize(φ)`.
    ///
    /// Returns `None` once more than `cap` states exist.
    pub fn build(f: &Formula, inputs: &[String], outputs: &[String], cap: usize) -> Option<Arena> {
        if inputs.len() + outputs.len() > MAX_SIGNALS {
            return None;
        }
        let in_letters: Vec<Letter> = letters(inputs);
        let out_letters: Vec<Letter> = letters(outputs);
        let mut states = vec![canonicalize(f)];
        let mut index: HashMap<Formula, usize> = HashMap::from([(states[0].clone(), 0)]);
        let mut moves = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let mut table = Vec::with_capacity(in_letters.len());
            for i in &in_letters {
                let mut row = Vec::with_capacity(out_letters.len());
                for o in &out_letters {
                    let letter: Letter = i.union(o).cloned().collect();
                    let state = &states[s];
                    if accepts_one_letter(state, &letter) {
                        row.push(Move::Accept);
                        continue;
                    }
                    let next = canonicalize(&progress(state, &letter));
                    let t = match index.get(&next) {
                        Some(&t) => t,
                        None => {
                            if states.len() >= cap {
                                return None;
                            }
                            let t = states.len();
                            index.insert(next.clone(), t);
                            states.push(next);
                            queue.push_back(t);
                            t
                        }
                    };
                    row.push(Move::To(t));
                }
                table.push(row);
            }
            // States are numbered in discovery order, which is also the queue order.
            debug_assert_eq!(moves.len(), s);
            moves.push(table);
        }
        Some(Arena {
            states,
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
            moves,
        })
    }

    pub fn input_letter(&self, mask: usize) -> Letter {
        mask_letter(&self.inputs, mask)
    }

    pub fn output_letter(&self, mask: usize) -> Letter {
        mask_letter(&self.outputs, mask)
    }

    /// Attractor rank of every state: `Some(r)` when the system wins in at most `r` more letters.
    pub fn attractor(&self, model: Model) -> Vec<Option<usize>> {
        let mut rank: Vec<Option<usize>> = vec![None; self.states.len()];
        let good = |rank: &[Option<usize>], m: Move| match m {
            Move::Accept => true,
            Move::To(t) => rank[t].is_some(),
        };
        let mut round = 1;
        loop {
            let mut added = Vec::new();
            for (s, table) in self.moves.iter().enumerate() {
                if rank[s].is_some() {
                    continue;
                }
                let wins = match model {
                    Model::Mealy => table.iter().all(|row| row.iter().any(|&m| good(&rank, m))),
                    Model::Moore => {
                        let n_out = table.first().map_or(0, Vec::len);
                        (0..n_out).any(|o| table.iter().all(|row| good(&rank, row[o])))
                    }
                };
                if wins {
                    added.push(s);
                }
            }
            if added.is_empty() {
                return rank;
            }
            for s in added {
                rank[s] = Some(round);
            }
            round += 1;
        }
    }

    /// Positional strategy that strictly decreases the attractor rank.
    fn strategy(&self, model: Model, rank: &[Option<usize>]) -> Strategy {
        let better = |r: usize, m: Move| match m {
            Move::Accept => true,
            Move::To(t) => rank[t].is_some_and(|rt| rt < r),
        };
        let mut states = Vec::new();
        for (s, table) in self.moves.iter().enumerate() {
            let Some(r) = rank[s] else { continue };
            let choice: Vec<usize> = match model {
                Model::Mealy => table
                    .iter()
                    .map(|row| row.iter().position(|&m| better(r, m)).expect("winning state"))
                    .collect(),
                Model::Moore => {
                    let n_out = table[0].len();
                    let o = (0..n_out)
                        .find(|&o| table.iter().all(|row| better(r, row[o])))
                        .expect("winning state");
                    vec![o; table.len()]
                }
            };
            let rows = choice
                .iter()
                .enumerate()
                .map(|(i, &o)| StrategyMove {
                    input: self.input_letter(i),
                    output: self.output_letter(o),
                    next: match table[i][o] {
                        Move::Accept => None,
                        Move::To(t) => Some(t),
                    },
                })
                .collect();
            states.push(StrategyState {
                id: s,
                rank: r,
                obligation: self.states[s].to_string(),
                moves: rows,
            });
        }
        Strategy {
            model,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            states,
        }
    }
}

fn letters(signals: &[String]) -> Vec<Letter> {
    (0..1usize << signals.len()).map(|m| mask_letter(signals, m)).collect()
}

fn mask_letter(signals: &[String], mask: usize) -> Letter {
    signals
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, s)| s.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyMove {
    pub input: Letter,
    pub output: Letter,
    /// `None` once the prefix read so far satisfies the formula.
    pub next: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyState {
    pub id: usize,
    pub rank: usize,
    pub obligation: String,
    /// One entry per input letter. A Moore strategy repeats one output.
    pub moves: Vec<StrategyMove>,
}

/// Finite-state controller extracted from the attractor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub model: Model,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// Winning states only; the initial state has id 0.
    pub states: Vec<StrategyState>,
}

impl Strategy {
    fn state(&self, id: usize) -> Option<&StrategyState> {
        self.states.iter().find(|s| s.id == id)
    }

    /// Plays every input sequence against the strategy and checks with the
    /// evaluator that some prefix of at most `depth` letters satisfies `φ`.
    pub fn verify(&self, f: &Formula, depth: usize) -> bool {
        let mut word = Vec::new();
        self.verify_from(f, 0, depth, &mut word)
    }

    fn verify_from(&self, f: &Formula, id: usize, depth: usize, word: &mut Vec<Letter>) -> bool {
        if depth == 0 {
            return false;
        }
        let Some(state) = self.state(id) else {
            return false;
        };
        if self.model == Model::Moore && state.moves.windows(2).any(|w| w[0].output != w[1].output) {
            return false;
        }
        state.moves.iter().all(|m| {
            word.push(m.input.union(&m.output).cloned().collect());
            let ok = evaluate(f, &FiniteWord(word.clone()))
                || m.next.is_some_and(|t| self.verify_from(f, t, depth - 1, word));
            word.pop();
            ok
        })
    }

    /// Plain-text state table.
    pub fn to_table(&self) -> String {
        let show = |l: &BTreeSet<String>| format!("{{{}}}", l.iter().cloned().collect::<Vec<_>>().join(" "));
        let mut out = String::new();
        let _ = writeln!(out, "model {}", self.model);
        let _ = writeln!(out, "inputs {}", self.inputs.join(" "));
        let _ = writeln!(out, "outputs {}", self.outputs.join(" "));
        for s in &self.states {
            let _ = writeln!(out, "state {} rank {}: {}", s.id, s.rank, s.obligation);
            for m in &s.moves {
                let next = m.next.map_or("accept".to_string(), |t| format!("state {t}"));
                let _ = writeln!(out, "  {} / {} -> {}", show(&m.input), show(&m.output), next);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub strategy: Option<Strategy>,
    /// Arena size, or the cap when exceeded.
    pub states: usize,
}

/// Decides realizability of `φ` with the given signal partition.
pub fn solve_formula(f: &Formula, inputs: &[String], outputs: &[String], model: Model, cap: usize) -> Verdict {
    let Some(arena) = Arena::build(f, inputs, outputs, cap) else {
        return Verdict {
            outcome: Outcome::Unknown,
            strategy: None,
            states: cap,
        };
    };
    let rank = arena.attractor(model);
    let states = arena.states.len();
    if rank[0].is_some() {
        Verdict {
            outcome: Outcome::Realizable,
            strategy: Some(arena.strategy(model, &rank)),
            states,
        }
    } else {
        Verdict {
            outcome: Outcome::Unrealizable,
            strategy: None,
            states,
        }
    }
}

/// Composes a Finite specification and decides its realizability.
pub fn solve(spec: &ElaboratedSpec, cap: usize) -> Result<Verdict, SolveError> {
    if spec.semantics.variant != Variant::Finite {
        return Err(SolveError::NotFinite(spec.semantics.variant));
    }
    let composed = compose(spec)?;
    Ok(solve_formula(&composed.formula, &spec.inputs, &spec.outputs, composed.model, cap))
}
