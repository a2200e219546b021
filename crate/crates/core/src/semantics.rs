//! Composition of the six property buckets into one formula.

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Model, Section, Variant};
use crate::elaborate::ElaboratedSpec;
use crate::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Interpretation {
    /// Infinite-word LTL.
    Infinite,
    /// Finite-word LTLf.
    Finite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionResult {
    pub formula: Formula,
    pub interpretation: Interpretation,
    pub model: Model,
}

impl CompositionResult {
    pub fn is_finite(&self) -> bool {
        self.interpretation == Interpretation::Finite
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("TARGET {target} does not match the {model} semantics model")]
    TargetMismatch { target: Model, model: Model },
    #[error("conversion to standard semantics needs a Strict specification, found {0:?}")]
    NotStrict(Variant),
}

/// Builds the single formula a specification stands for.
///
/// Standard and Finite:
/// `θe -> (θs && ((G ψe && φe) -> (G ψs && φs)))`.
/// Strict:
/// `θe -> (θs && (ψs W !ψe) && ((G ψe && φe) -> φs))`.
pub fn compose(spec: &ElaboratedSpec) -> Result<CompositionResult, CompositionError> {
    let model = spec.semantics.model;
    if spec.target != model {
        return Err(CompositionError::TargetMismatch {
            target: spec.target,
            model,
        });
    }
    let (theta_e, theta_s) = (spec.theta_e(), spec.theta_s());
    let (psi_e, psi_s) = (spec.psi_e(), spec.psi_s());
    let (phi_e, phi_s) = (spec.phi_e(), spec.phi_s());
    let assumptions = Formula::and(Formula::globally(psi_e.clone()), phi_e);
    let body = match spec.semantics.variant {
        Variant::Standard | Variant::Finite => Formula::and(
            theta_s,
            Formula::implies(assumptions, Formula::and(Formula::globally(psi_s), phi_s)),
        ),
        Variant::Strict => Formula::and(
            Formula::and(theta_s, strict_invariant(psi_s, psi_e)),
            Formula::implies(assumptions, phi_s),
        ),
    };
    let interpretation = if spec.semantics.variant == Variant::Finite {
        Interpretation::Finite
    } else {
        Interpretation::Infinite
    };
    Ok(CompositionResult {
        formula: Formula::implies(theta_e, body),
        interpretation,
        model,
    })
}

/// `ψs W !ψe`
fn strict_invariant(psi_s: Formula, psi_e: Formula) -> Formula {
    Formula::weak_until(psi_s, Formula::not(psi_e))
}

/// Rewrites a Strict specification into an equivalent Standard one.
///
/// The conjunct `ψs W !ψe` becomes an extra PRESET entry and ASSERT is
/// emptied. PRESET sits in the same position of both compositions, so the
/// Standard formula differs from the Strict one only by the units
/// `G true && φs` in place of `φs`.
pub fn strict_to_standard(spec: &ElaboratedSpec) -> Result<ElaboratedSpec, CompositionError> {
    if spec.semantics.variant != Variant::Strict {
        return Err(CompositionError::NotStrict(spec.semantics.variant));
    }
    let mut out = spec.clone();
    let invariant = strict_invariant(spec.psi_s(), spec.psi_e());
    out.buckets.get_mut(Section::Assert).clear();
    out.buckets.get_mut(Section::Preset).push(invariant);
    out.semantics.variant = Variant::Standard;
    Ok(out)
}
