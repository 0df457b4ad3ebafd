//! Synthesis of construction traces for realizable data.
//!
//! The construction descends on `N + Σaₖ + Σbₖ`. Each reduction removes one
//! unit of that measure, records the operation that undoes it, and the
//! recorded operations are replayed forward from a base immersion once a
//! base case is reached. The descent is an explicit loop rather than
//! recursion so that large `N` does not grow the call stack.
//!
//! Reductions, tried in order:
//!
//! 1. **Bubble normalization.** If `a₀ ≥ 1` and `a_r ≥ 1` for some `r ≥ 1`
//!    (largest such `r`), trade one 3-cell and one `r`-region for an
//!    `(r-1)`-region; undone by a bubble. Black first, then white.
//! 2. Afterwards both spectra have `a₀ = b₀ = 0` (case i) or both are
//!    supported on `{0}` (case ii).
//! 3. Case i, `N ≥ 1`: drop one triple point and raise `χ`; undone by a
//!    connect sum with Boy's surface.
//! 4. Case i, `N = 0`, both spectra supported on one `p`: torus plus rings
//!    (`p = 1`), a genus-`p` embedding (`a_p = b_p = 1`), or peel one region
//!    of each color and restore them with two nested rings and a
//!    `(p-1)`-operation.
//! 5. Case i, `N = 0`, otherwise: take `r < s` with `a_r, b_s ≥ 1` and
//!    restore them with a ring and an `(r-1)`-operation inside a white
//!    region with `χ = r - s`. If only `r > s` pairs exist the colors are
//!    exchanged for the sub-construction and swapped back afterwards.
//! 6. Case ii: connect sums with Boy's surface down to `χ = 2`, then the
//!    sphere (`N = 0`) or a chain of two-triple-point spheres.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{ImmersionData, RegionSpectrum, Unrealizable};
use crate::state::{Color, RegionId, RegionPair, StateError, SymbolicState};

/// The immersion a trace starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructionBase {
    /// Standard embedding of the genus-`g` orientable surface.
    Embedding { genus: u32 },
    /// Boy's surface.
    Boy,
    /// The sphere with two triple points and four 3-cells.
    N2,
}

impl ConstructionBase {
    pub fn build(self) -> SymbolicState {
        match self {
            ConstructionBase::Embedding { genus } => SymbolicState::base_embedding(genus),
            ConstructionBase::Boy => SymbolicState::base_boy(),
            ConstructionBase::N2 => SymbolicState::base_n2(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", deny_unknown_fields)]
pub enum ConstructionStep {
    #[serde(rename = "bubble")]
    Bubble { target: RegionId },
    #[serde(rename = "ring")]
    Ring { host: RegionId },
    #[serde(rename = "gop")]
    GOp { pair: RegionPair, g: u32 },
    #[serde(rename = "connect_boy")]
    ConnectBoy { pair: RegionPair },
    #[serde(rename = "connect_n2")]
    ConnectN2 { pair: RegionPair },
    #[serde(rename = "swap_colors")]
    SwapColors,
}

impl ConstructionStep {
    pub fn apply(&self, st: &SymbolicState) -> Result<SymbolicState, StateError> {
        match *self {
            ConstructionStep::Bubble { target } => st.bubble(target),
            ConstructionStep::Ring { host } => st.ring(host),
            ConstructionStep::GOp { pair, g } => st.g_operation(pair, g),
            ConstructionStep::ConnectBoy { pair } => st.connect_boy(pair),
            ConstructionStep::ConnectN2 { pair } => st.connect_n2(pair),
            ConstructionStep::SwapColors => Ok(st.swap_colors()),
        }
    }
}

impl fmt::Display for ConstructionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionStep::Bubble { target } => write!(f, "bubble {target}"),
            ConstructionStep::Ring { host } => write!(f, "ring in {host}"),
            ConstructionStep::GOp { pair, g } => write!(f, "{g}-operation on {pair}"),
            ConstructionStep::ConnectBoy { pair } => write!(f, "# Boy at {pair}"),
            ConstructionStep::ConnectN2 { pair } => write!(f, "# N2 sphere at {pair}"),
            ConstructionStep::SwapColors => f.write_str("swap colors"),
        }
    }
}

/// A base immersion, the steps applied to it, and the data it claims to
/// realize. Region ids in steps are those allocated by replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionTrace {
    pub base: ConstructionBase,
    pub steps: Vec<ConstructionStep>,
    pub claimed: ImmersionData,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("data is not realizable: {0}")]
    NotRealizable(#[from] Unrealizable),
    #[error("planner invariant broken: {0}")]
    Internal(String),
}

/// Why [`plan_or_explain`] declined, along with the offending data.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{data} is not realizable: {reason}")]
pub struct RejectionReport {
    pub data: ImmersionData,
    pub reason: Unrealizable,
}

/// An operation recorded during descent, to be resolved against the live
/// state on the way back up.
#[derive(Debug, Clone, Copy)]
enum Pending {
    /// Bubble the lowest-id region with this color and `χ`.
    Bubble { color: Color, euler: i64 },
    /// Connect sum with Boy's surface at the lowest certified pair.
    ConnectBoy,
    /// Ring in the lowest-id region, ring inside the new region, then a
    /// `g`-operation on the two new regions.
    NestedRings { g: u32 },
    /// Ring in the lowest-id white region with this `χ`, then a
    /// `g`-operation on it and the new region; optionally swap colors.
    RingAndHandles { host_euler: i64, g: u32, swap: bool },
}

enum Reduction {
    Descend(ImmersionData, Pending),
    Base(ConstructionBase, Vec<ConstructionStep>),
}

fn internal(msg: impl Into<String>) -> PlanError {
    PlanError::Internal(msg.into())
}

fn single(k: u32, count: u32) -> RegionSpectrum {
    [(k, count)].into()
}

/// The largest `r ≥ 1` with a region at index `r`, if the spectrum also has
/// a 3-cell.
fn normalizable(s: &RegionSpectrum) -> Option<u32> {
    if s.get(0) == 0 {
        return None;
    }
    s.support().next_back().filter(|&r| r >= 1)
}

fn bubble_reduction(s: &RegionSpectrum, r: u32) -> RegionSpectrum {
    let mut out = s.clone();
    out.remove_one(0);
    out.remove_one(r);
    out.add(r - 1, 1);
    out
}

fn reduce(d: &ImmersionData) -> Result<Reduction, PlanError> {
    let (a, b) = (&d.black, &d.white);
    let (chi, n) = (d.surface_euler, d.triple_points);

    if let Some(r) = normalizable(a) {
        let next = ImmersionData::new(bubble_reduction(a, r), b.clone(), chi, n);
        let euler = 2 - i64::from(r);
        return Ok(Reduction::Descend(next, Pending::Bubble { color: Color::Black, euler }));
    }
    if let Some(r) = normalizable(b) {
        let next = ImmersionData::new(a.clone(), bubble_reduction(b, r), chi, n);
        let euler = 2 - i64::from(r);
        return Ok(Reduction::Descend(next, Pending::Bubble { color: Color::White, euler }));
    }

    let only_cells = |s: &RegionSpectrum| s.support().all(|k| k == 0);
    match (a.get(0) == 0, b.get(0) == 0) {
        (true, true) => reduce_no_cells(d),
        (false, false) if only_cells(a) && only_cells(b) => reduce_only_cells(d),
        _ => Err(internal(format!("mixed normal form reached for {d}"))),
    }
}

fn reduce_no_cells(d: &ImmersionData) -> Result<Reduction, PlanError> {
    let (a, b) = (&d.black, &d.white);
    let (chi, n) = (d.surface_euler, d.triple_points);

    if n >= 1 {
        let next = ImmersionData::new(a.clone(), b.clone(), chi + 1, n - 1);
        return Ok(Reduction::Descend(next, Pending::ConnectBoy));
    }

    let sa: Vec<u32> = a.support().collect();
    let sb: Vec<u32> = b.support().collect();
    if sa.len() == 1 && sa == sb {
        let p = sa[0];
        let (ap, bp) = (a.get(p), b.get(p));
        if p == 1 {
            // torus: rings in the white side add black solid tori and
            // vice versa
            let (black, white) = (RegionId(0), RegionId(1));
            let steps = std::iter::repeat_n(ConstructionStep::Ring { host: white }, ap as usize - 1)
                .chain(std::iter::repeat_n(ConstructionStep::Ring { host: black }, bp as usize - 1))
                .collect();
            return Ok(Reduction::Base(ConstructionBase::Embedding { genus: 1 }, steps));
        }
        if ap != bp {
            return Err(internal(format!("unbalanced single support in {d}")));
        }
        if ap == 1 {
            return Ok(Reduction::Base(ConstructionBase::Embedding { genus: p }, Vec::new()));
        }
        let next = ImmersionData::new(
            single(p, ap - 1),
            single(p, bp - 1),
            chi + 2 * (i64::from(p) - 1),
            0,
        );
        return Ok(Reduction::Descend(next, Pending::NestedRings { g: p - 1 }));
    }

    let cross = |x: &[u32], y: &[u32]| {
        x.iter()
            .find_map(|&r| y.iter().find(|&&s| s > r).map(|&s| (r, s)))
    };
    if let Some((r, s)) = cross(&sa, &sb) {
        return Ok(ring_reduction(d, r, s, false));
    }
    if let Some((r, s)) = cross(&sb, &sa) {
        return Ok(ring_reduction(&d.swapped(), r, s, true));
    }
    Err(internal(format!("no cross pair r != s in {d}")))
}

/// Removes a black `r`-region and a white `s`-region (`r < s`) and adds a
/// white `(s-r+1)`-region, raising `χ` by `2(r-1)`.
fn ring_reduction(d: &ImmersionData, r: u32, s: u32, swap: bool) -> Reduction {
    let mut a = d.black.clone();
    let mut b = d.white.clone();
    a.remove_one(r);
    b.remove_one(s);
    b.add(s - r + 1, 1);
    let next = ImmersionData::new(
        a,
        b,
        d.surface_euler + 2 * (i64::from(r) - 1),
        d.triple_points,
    );
    let host_euler = i64::from(r) - i64::from(s);
    Reduction::Descend(next, Pending::RingAndHandles { host_euler, g: r - 1, swap })
}

fn reduce_only_cells(d: &ImmersionData) -> Result<Reduction, PlanError> {
    let (chi, n) = (d.surface_euler, d.triple_points);
    if chi < 2 {
        if n < 1 {
            return Err(internal(format!("no triple point to remove in {d}")));
        }
        let next = ImmersionData::new(d.black.clone(), d.white.clone(), chi + 1, n - 1);
        return Ok(Reduction::Descend(next, Pending::ConnectBoy));
    }
    if n % 2 != 0 {
        return Err(internal(format!("odd N on the sphere in {d}")));
    }
    if n == 0 {
        return Ok(Reduction::Base(ConstructionBase::Embedding { genus: 0 }, Vec::new()));
    }
    let pair = RegionPair::new(RegionId(0), RegionId(1));
    let chain = usize::try_from(n / 2 - 1).map_err(|_| internal("chain too long"))?;
    let steps = vec![ConstructionStep::ConnectN2 { pair }; chain];
    Ok(Reduction::Base(ConstructionBase::N2, steps))
}

fn lowest_pair(st: &SymbolicState) -> Result<RegionPair, PlanError> {
    st.certified_pairs()
        .next()
        .ok_or_else(|| internal("no certified pair"))
}

fn resolve(p: Pending, st: &SymbolicState) -> Result<Vec<ConstructionStep>, PlanError> {
    use ConstructionStep::*;
    Ok(match p {
        Pending::Bubble { color, euler } => {
            let target = st
                .find_region(color, euler)
                .ok_or_else(|| internal(format!("no {color:?} region with χ={euler}")))?;
            vec![Bubble { target }]
        }
        Pending::ConnectBoy => vec![ConnectBoy { pair: lowest_pair(st)? }],
        Pending::NestedRings { g } => {
            let host = st
                .regions()
                .next()
                .ok_or_else(|| internal("state has no regions"))?
                .id;
            let u = st.next_id();
            let v = RegionId(u.0 + 1);
            vec![Ring { host }, Ring { host: u }, GOp { pair: RegionPair::new(u, v), g }]
        }
        Pending::RingAndHandles { host_euler, g, swap } => {
            let host = st
                .find_region(Color::White, host_euler)
                .ok_or_else(|| internal(format!("no white region with χ={host_euler}")))?;
            let v = st.next_id();
            let mut steps = vec![Ring { host }];
            if g > 0 {
                steps.push(GOp { pair: RegionPair::new(host, v), g });
            }
            if swap {
                steps.push(SwapColors);
            }
            steps
        }
    })
}

/// Builds a trace whose replay realizes `d` exactly.
///
/// ```
/// use imm_regions::{plan, verify, ConstructionBase, ImmersionData};
///
/// let d = ImmersionData::new([(0, 3)].into(), [(0, 3)].into(), 2, 4);
/// let trace = plan(&d).unwrap();
/// assert_eq!(trace.base, ConstructionBase::N2);
/// assert_eq!(trace.steps.len(), 1);
/// assert!(verify(&trace, &d));
/// ```
pub fn plan(d: &ImmersionData) -> Result<ConstructionTrace, PlanError> {
    d.check()?;
    let mut current = d.clone();
    let mut pending = Vec::new();
    let (base, base_steps) = loop {
        match reduce(&current)? {
            Reduction::Descend(next, p) => {
                assert!(
                    next.measure() < current.measure(),
                    "measure did not decrease: {current} -> {next}"
                );
                if let Err(e) = next.check() {
                    return Err(internal(format!("{current} reduced to unrealizable {next}: {e}")));
                }
                pending.push(p);
                current = next;
            }
            Reduction::Base(base, steps) => break (base, steps),
        }
    };

    let mut st = base.build();
    let mut steps = Vec::with_capacity(base_steps.len() + 3 * pending.len());
    for step in base_steps {
        st = step.apply(&st).map_err(|e| internal(e.to_string()))?;
        steps.push(step);
    }
    for p in pending.into_iter().rev() {
        for step in resolve(p, &st)? {
            st = step.apply(&st).map_err(|e| internal(e.to_string()))?;
            steps.push(step);
        }
    }
    let realized = st.derive_data();
    if realized != *d {
        return Err(internal(format!("construction realized {realized}, wanted {d}")));
    }
    Ok(ConstructionTrace { base, steps, claimed: d.clone() })
}

/// [`plan`] for realizable data, otherwise the first failed condition.
///
/// # Panics
///
/// If the planner's own invariants break, which indicates a bug.
pub fn plan_or_explain(d: &ImmersionData) -> Result<ConstructionTrace, RejectionReport> {
    match plan(d) {
        Ok(t) => Ok(t),
        Err(PlanError::NotRealizable(reason)) => Err(RejectionReport { data: d.clone(), reason }),
        Err(e @ PlanError::Internal(_)) => panic!("{e}"),
    }
}
