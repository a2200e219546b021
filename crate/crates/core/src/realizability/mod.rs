//! LTLf realizability by progression and attractor computation.
//!
//! Game states are canonicalized residual formulas. A move is winning when
//! the letter it reads completes a satisfying prefix; the system wins from
//! the states in the attractor of such moves.

mod canon;
mod game;
mod progress;

pub use canon::canonicalize;
pub use game::{
    solve, solve_formula, Arena, Move, Outcome, SolveError, Strategy, StrategyMove, StrategyState, Verdict,
    DEFAULT_STATE_CAP,
};
pub use progress::{accepts_one_letter, progress};
