//! Checkerboard-colored regions cut out of `S^3` by generic surface immersions.
//!
//! Given a closed surface `F` and a generic immersion `i: F -> S^3`, the
//! complement `S^3 - i(F)` splits into regions that are checkerboard colored
//! black and white. Counting regions of each color by Euler characteristic
//! gives two sequences `{aₖ}`, `{bₖ}` (regions with `χ = 1 - k`). Together
//! with `χ(F)` and the number `N` of triple points, such data is realizable
//! exactly when both sequences are nonzero, `χ ≤ 2`, `N ≥ 0`, and
//!
//! ```text
//! Σ (1-k) aₖ = Σ (1-k) bₖ = (χ + N) / 2
//! ```
//!
//! This crate decides that predicate ([`ImmersionData::is_realizable`]),
//! synthesizes a [`ConstructionTrace`] for any realizable data ([`plan`]),
//! and replays traces on a symbolic state machine that audits the invariants
//! after every step ([`replay`], [`verify`]). The [`homotopy`] module
//! simulates the four codimension-one events of a regular homotopy and the
//! [`oracle`] module supplies brute-force and randomized cross-checks.
//!
//! ```
//! use imm_regions::{plan, verify, ImmersionData};
//!
//! // two regions with χ = -1 of each color
//! let d = ImmersionData::new([(2, 2)].into(), [(2, 2)].into(), -4, 0);
//! assert!(d.is_realizable());
//! let trace = plan(&d).unwrap();
//! assert!(verify(&trace, &d));
//! ```
//!
//! The guide in `book/` walks through the concepts; its code listings are
//! compiled and run as doctests of this crate.

pub mod cli;
pub mod data;
pub mod homotopy;
pub mod oracle;
pub mod planner;
pub mod state;
pub mod verifier;

pub use data::{ImmersionData, RegionSpectrum, Unrealizable};
pub use homotopy::{half_invariants, HalfInvariantPair, MoveEvent, MoveKind};
pub use oracle::Bounds;
pub use planner::{
    plan, plan_or_explain, ConstructionBase, ConstructionStep, ConstructionTrace, PlanError,
    RejectionReport,
};
pub use state::{check_state, Color, Region, RegionId, RegionPair, SymbolicState, Violation};
pub use verifier::{replay, verify, ReplayError, ReplayReason};

// Each guide chapter becomes a doc-only module so `cargo test --doc` runs its
// listings.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/region-data.md")]
    mod region_data {}
    #[doc = include_str!("../../../book/src/symbolic-states.md")]
    mod symbolic_states {}
    #[doc = include_str!("../../../book/src/homotopy.md")]
    mod homotopy {}
    #[doc = include_str!("../../../book/src/planning.md")]
    mod planning {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
