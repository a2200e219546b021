use crate::ast::Strength;
use crate::formula::Formula;

/// Temporal sugar with evaluated bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalSugar {
    /// `X[n]`
    Next(usize),
    /// `F[n:m]`
    Finally(usize, usize),
    /// `G[n:m]`
    Globally(usize, usize),
}

fn next(strength: Strength, f: Formula) -> Formula {
    match strength {
        Strength::Weak => Formula::next(f),
        Strength::Strong => Formula::strong_next(f),
    }
}

fn stack(n: usize, strength: Strength, mut f: Formula) -> Formula {
    for _ in 0..n {
        f = next(strength, f);
    }
    f
}

/// `body join X(body join X(... body))` with `k` nexts, right-nested.
fn chain(k: usize, strength: Strength, body: &Formula, join: fn(Formula, Formula) -> Formula) -> Formula {
    let mut f = body.clone();
    for _ in 0..k {
        f = join(body.clone(), next(strength, f));
    }
    f
}

/// Expands sugar into plain next operators.
///
/// `X[3] a` gives `X X X a`, `F[2:3] a` gives `X X (a || X a)` and
/// `G[1:3] a` gives `X (a && X (a && X a))`. The strong form uses `X[!]`
/// for every generated next.
pub fn desugar_temporal(sugar: TemporalSugar, strength: Strength, body: Formula) -> Result<Formula, String> {
    Ok(match sugar {
        TemporalSugar::Next(n) => stack(n, strength, body),
        TemporalSugar::Finally(n, m) | TemporalSugar::Globally(n, m) => {
            if n > m {
                return Err(format!("empty step range [{n}:{m}]"));
            }
            let join = if matches!(sugar, TemporalSugar::Finally(..)) {
                Formula::or
            } else {
                Formula::and
            };
            stack(n, strength, chain(m - n, strength, &body, join))
        }
    })
}
