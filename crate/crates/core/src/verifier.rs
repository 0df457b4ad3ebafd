//! Trace replay with a full invariant audit after every step.

use serde::Serialize;
use thiserror::Error;

use crate::data::ImmersionData;
use crate::planner::ConstructionTrace;
use crate::state::{StateError, SymbolicState, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReplayReason {
    UnknownRegion,
    UncertifiedPair,
    ColorRuleViolated,
    Lemma1Violated,
    EquationViolated,
    BaseInvalid,
}

/// First failure encountered while replaying. `step` is `-1` for the base.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("step {step}: {reason:?}: {detail}")]
pub struct ReplayError {
    pub step: i64,
    pub reason: ReplayReason,
    pub detail: String,
    /// State the failing step was applied to (or produced, for audit
    /// failures).
    pub snapshot: SymbolicState,
}

fn reason_for(v: &Violation) -> ReplayReason {
    match v {
        Violation::EulerBound { .. } => ReplayReason::Lemma1Violated,
        Violation::MissingColor { .. } | Violation::SameColorPair { .. } => {
            ReplayReason::ColorRuleViolated
        }
        Violation::DanglingPair { .. } => ReplayReason::UnknownRegion,
        Violation::Equation { .. } => ReplayReason::EquationViolated,
    }
}

fn audit(step: i64, st: &SymbolicState, base: bool) -> Result<(), ReplayError> {
    let violations = st.check();
    let Some(first) = violations.first() else {
        return Ok(());
    };
    let detail = violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ");
    Err(ReplayError {
        step,
        reason: if base { ReplayReason::BaseInvalid } else { reason_for(first) },
        detail,
        snapshot: st.clone(),
    })
}

/// Replays `t`, calling `observe` with the step index (`-1` for the base)
/// and the audited state after each step.
pub fn replay_with(
    t: &ConstructionTrace,
    mut observe: impl FnMut(i64, &SymbolicState),
) -> Result<SymbolicState, ReplayError> {
    let mut st = t.base.build();
    audit(-1, &st, true)?;
    observe(-1, &st);
    for (i, step) in t.steps.iter().enumerate() {
        let idx = i as i64;
        st = step.apply(&st).map_err(|e| ReplayError {
            step: idx,
            reason: match e {
                StateError::UnknownRegion(_) => ReplayReason::UnknownRegion,
                StateError::UncertifiedPair(_) => ReplayReason::UncertifiedPair,
            },
            detail: format!("{step}: {e}"),
            snapshot: st.clone(),
        })?;
        audit(idx, &st, false)?;
        observe(idx, &st);
    }
    Ok(st)
}

/// Builds the base state and applies every step, auditing as it goes.
pub fn replay(t: &ConstructionTrace) -> Result<SymbolicState, ReplayError> {
    replay_with(t, |_, _| {})
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum VerifyError {
    #[error("replay failed at {0}")]
    Replay(ReplayError),
    #[error("trace realizes {realized}, expected {expected}")]
    Mismatch {
        realized: ImmersionData,
        expected: ImmersionData,
    },
}

/// [`verify`] with the reason for a `false`.
pub fn verify_detailed(t: &ConstructionTrace, d: &ImmersionData) -> Result<SymbolicState, VerifyError> {
    let st = replay(t).map_err(VerifyError::Replay)?;
    let realized = st.derive_data();
    if realized == *d {
        Ok(st)
    } else {
        Err(VerifyError::Mismatch {
            realized,
            expected: d.clone(),
        })
    }
}

/// Whether `t` replays cleanly and its final state realizes exactly `d`.
pub fn verify(t: &ConstructionTrace, d: &ImmersionData) -> bool {
    verify_detailed(t, d).is_ok()
}
