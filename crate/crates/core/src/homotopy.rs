//! The four codimension-one events a generic regular homotopy passes
//! through, and the quantities they leave unchanged.
//!
//! For an immersion `i` with black union `A(i)` and white union `B(i)`,
//! `a(i) = χ(A(i)) - N/2` and `b(i) = χ(B(i)) - N/2`. Each event changes the
//! regions and `N` in a way that keeps both fixed. Since they may be half
//! integers, [`HalfInvariantPair`] stores them doubled.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::{Color, RegionId, StateError, SymbolicState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// Sphere-like tangency: a new 3-cell and a 2-handle removed from a
    /// same-colored neighbor.
    E,
    /// Saddle tangency: a 1-handle moves between two same-colored regions.
    H,
    /// Triple point birth: a new 3-cell, a 1-handle removed from an
    /// opposite-colored region, and two new triple points.
    T,
    /// Quadruple point: a simplex region is replaced by another of the
    /// same color.
    Q,
}

impl MoveKind {
    pub const ALL: [MoveKind; 4] = [MoveKind::E, MoveKind::H, MoveKind::T, MoveKind::Q];

    pub fn arity(self) -> usize {
        match self {
            MoveKind::H => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One event with its region arguments. JSON: `{"kind": "H", "args": [3, 5]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveEvent {
    pub kind: MoveKind,
    pub args: Vec<RegionId>,
}

impl MoveEvent {
    pub fn e(target: RegionId) -> Self {
        Self { kind: MoveKind::E, args: vec![target] }
    }

    pub fn h(x: RegionId, y: RegionId) -> Self {
        Self { kind: MoveKind::H, args: vec![x, y] }
    }

    pub fn t(target: RegionId) -> Self {
        Self { kind: MoveKind::T, args: vec![target] }
    }

    pub fn q(target: RegionId) -> Self {
        Self { kind: MoveKind::Q, args: vec![target] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("{kind} takes {expected} argument(s), got {got}")]
    Arity {
        kind: MoveKind,
        expected: usize,
        got: usize,
    },
    #[error("regions {0} and {1} have different colors")]
    ColorMismatch(RegionId, RegionId),
    #[error("region {0} is a 3-cell and has no 1-handle to remove")]
    NoHandle(RegionId),
    #[error("region {0} is not a 3-cell")]
    NotACell(RegionId),
}

/// `(2·a(i), 2·b(i))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfInvariantPair {
    pub two_a: i64,
    pub two_b: i64,
}

pub fn half_invariants(st: &SymbolicState) -> HalfInvariantPair {
    let n = st.triple_points() as i64;
    HalfInvariantPair {
        two_a: 2 * st.color_euler(Color::Black) - n,
        two_b: 2 * st.color_euler(Color::White) - n,
    }
}

/// E event; the same transformation as [`SymbolicState::bubble`].
pub fn move_e(st: &SymbolicState, target: RegionId) -> Result<SymbolicState, MoveError> {
    Ok(st.bubble(target)?)
}

/// H event: `x` loses a 1-handle and `y` gains one. `x == y` is the
/// identity.
pub fn move_h(st: &SymbolicState, x: RegionId, y: RegionId) -> Result<SymbolicState, MoveError> {
    let rx = *st.region(x)?;
    let ry = *st.region(y)?;
    if rx.color != ry.color {
        return Err(MoveError::ColorMismatch(x, y));
    }
    if rx.euler >= 1 {
        return Err(MoveError::NoHandle(x));
    }
    let mut out = st.clone();
    *out.region_euler_mut(x)? += 1;
    *out.region_euler_mut(y)? -= 1;
    Ok(out)
}

/// T event: `target` loses a 1-handle, a 3-cell of the opposite color
/// appears, and `N` grows by two.
pub fn move_t(st: &SymbolicState, target: RegionId) -> Result<SymbolicState, MoveError> {
    let r = *st.region(target)?;
    if r.euler >= 1 {
        return Err(MoveError::NoHandle(target));
    }
    let mut out = st.clone();
    *out.region_euler_mut(target)? += 1;
    out.add_region(r.color.opposite(), 1);
    out.add_triple_points(2);
    Ok(out)
}

/// Q event: the 3-cell `target` vanishes and a fresh 3-cell of the same
/// color takes its place. Certificates on `target` are dropped.
pub fn move_q(st: &SymbolicState, target: RegionId) -> Result<SymbolicState, MoveError> {
    let r = *st.region(target)?;
    if r.euler != 1 {
        return Err(MoveError::NotACell(target));
    }
    let mut out = st.clone();
    out.remove_region(target)?;
    out.add_region(r.color, 1);
    Ok(out)
}

pub fn apply_move(st: &SymbolicState, ev: &MoveEvent) -> Result<SymbolicState, MoveError> {
    let expected = ev.kind.arity();
    if ev.args.len() != expected {
        return Err(MoveError::Arity {
            kind: ev.kind,
            expected,
            got: ev.args.len(),
        });
    }
    match ev.kind {
        MoveKind::E => move_e(st, ev.args[0]),
        MoveKind::H => move_h(st, ev.args[0], ev.args[1]),
        MoveKind::T => move_t(st, ev.args[0]),
        MoveKind::Q => move_q(st, ev.args[0]),
    }
}

/// Every legal instance of `kind` on `st`, in increasing id order.
pub fn legal_moves(st: &SymbolicState, kind: MoveKind) -> Vec<MoveEvent> {
    let regions: Vec<_> = st.regions().copied().collect();
    match kind {
        MoveKind::E => regions.iter().map(|r| MoveEvent::e(r.id)).collect(),
        MoveKind::H => regions
            .iter()
            .filter(|x| x.euler <= 0)
            .flat_map(|x| {
                regions
                    .iter()
                    .filter(move |y| y.color == x.color)
                    .map(move |y| MoveEvent::h(x.id, y.id))
            })
            .collect(),
        MoveKind::T => regions
            .iter()
            .filter(|r| r.euler <= 0)
            .map(|r| MoveEvent::t(r.id))
            .collect(),
        MoveKind::Q => regions
            .iter()
            .filter(|r| r.euler == 1)
            .map(|r| MoveEvent::q(r.id))
            .collect(),
    }
}
