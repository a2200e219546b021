use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `{x, y .. z}`: every `n` with `x <= n <= z` and `n = x + j*(y - x)`.
pub fn eval_set_range(x: &BigUint, y: &BigUint, z: &BigUint) -> Result<BTreeSet<BigUint>, String> {
    if x >= y {
        return Err(format!("range `{{{x}, {y} .. {z}}}` needs its first element below the second"));
    }
    let step = y - x;
    let mut out = BTreeSet::new();
    let mut n = x.clone();
    while &n <= z {
        out.insert(n.clone());
        n += &step;
    }
    Ok(out)
}

/// Naturals from `lower` to `upper`, each end included or not.
pub fn bounded_range(
    lower: &BigUint,
    lower_inclusive: bool,
    upper: &BigUint,
    upper_inclusive: bool,
) -> BTreeSet<BigUint> {
    let mut n = if lower_inclusive { lower.clone() } else { lower + 1u32 };
    let mut out = BTreeSet::new();
    loop {
        let inside = if upper_inclusive { &n <= upper } else { &n < upper };
        if !inside {
            return out;
        }
        out.insert(n.clone());
        n += BigUint::one();
    }
}

pub fn checked_sub(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    (a >= b).then(|| a - b)
}

pub fn checked_div(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    (!b.is_zero()).then(|| a / b)
}

pub fn checked_rem(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    (!b.is_zero()).then(|| a % b)
}
