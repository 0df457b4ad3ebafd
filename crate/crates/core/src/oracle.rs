//! Independent evidence for both directions of the realizability theorem at
//! small scale, and a fuzzer for the regular-homotopy invariants.
//!
//! Randomness comes from ChaCha8 keyed with the seed as eight little-endian
//! bytes followed by 24 zero bytes (nonce and stream 0). A uniform choice
//! among `n` options takes the next 64-bit output modulo `n`. Nothing else
//! draws from the stream, so a seed reproduces the same traces in any
//! implementation of ChaCha8.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::ImmersionData;
use crate::homotopy::{apply_move, half_invariants, HalfInvariantPair, MoveEvent, MoveKind};
use crate::planner::{ConstructionBase, ConstructionStep, ConstructionTrace};
use crate::state::{Color, RegionPair, SymbolicState, Violation};

/// Size limits for sampling and enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest spectrum index; also the largest base genus and handle count.
    pub max_k: u32,
    pub max_count: u32,
    pub max_n: u32,
    pub min_chi: i64,
    pub max_trace_len: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_k: 3,
            max_count: 3,
            max_n: 4,
            min_chi: -8,
            max_trace_len: 25,
        }
    }
}

impl Bounds {
    /// Whether `d` lies in the data box these bounds describe.
    pub fn contains(&self, d: &ImmersionData) -> bool {
        let spectrum_ok = |s: &crate::data::RegionSpectrum| {
            s.iter().all(|(k, c)| k <= self.max_k && c <= self.max_count)
        };
        spectrum_ok(&d.black)
            && spectrum_ok(&d.white)
            && (0..=i64::from(self.max_n)).contains(&d.triple_points)
            && (self.min_chi..=2).contains(&d.surface_euler)
    }
}

/// Seeded ChaCha8 stream; see the module docs for the exact layout.
#[derive(Clone, Debug)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        Self(ChaCha8Rng::from_seed(key))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish value in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        self.next_u64() % n
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len() as u64) as usize]
    }
}

fn random_base(rng: &mut SeededRng, bounds: &Bounds) -> ConstructionBase {
    match rng.below(3) {
        0 => ConstructionBase::Embedding {
            genus: rng.below(u64::from(bounds.max_k) + 1) as u32,
        },
        1 => ConstructionBase::Boy,
        _ => ConstructionBase::N2,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum StepKind {
    Bubble,
    Ring,
    GOp,
    ConnectBoy,
    ConnectN2,
    SwapColors,
}

const STEP_KINDS: [StepKind; 6] = [
    StepKind::Bubble,
    StepKind::Ring,
    StepKind::GOp,
    StepKind::ConnectBoy,
    StepKind::ConnectN2,
    StepKind::SwapColors,
];

fn random_step(rng: &mut SeededRng, st: &SymbolicState, bounds: &Bounds) -> ConstructionStep {
    let ids: Vec<_> = st.regions().map(|r| r.id).collect();
    let pairs: Vec<_> = st.certified_pairs().collect();
    let kinds: Vec<_> = STEP_KINDS
        .into_iter()
        .filter(|k| match k {
            StepKind::GOp | StepKind::ConnectBoy | StepKind::ConnectN2 => !pairs.is_empty(),
            _ => true,
        })
        .collect();
    match rng.pick(&kinds) {
        StepKind::Bubble => ConstructionStep::Bubble { target: *rng.pick(&ids) },
        StepKind::Ring => ConstructionStep::Ring { host: *rng.pick(&ids) },
        StepKind::GOp => {
            let pair = *rng.pick(&pairs);
            let g = rng.below(u64::from(bounds.max_k) + 1) as u32;
            ConstructionStep::GOp { pair, g }
        }
        StepKind::ConnectBoy => ConstructionStep::ConnectBoy { pair: *rng.pick(&pairs) },
        StepKind::ConnectN2 => ConstructionStep::ConnectN2 { pair: *rng.pick(&pairs) },
        StepKind::SwapColors => ConstructionStep::SwapColors,
    }
}

/// A random legal construction trace of at most `bounds.max_trace_len`
/// steps, claiming whatever its replay realizes.
pub fn random_trace(seed: u64, bounds: &Bounds) -> ConstructionTrace {
    let mut rng = SeededRng::new(seed);
    let base = random_base(&mut rng, bounds);
    let len = rng.below(u64::from(bounds.max_trace_len) + 1);
    let mut st = base.build();
    let mut steps = Vec::with_capacity(len as usize);
    for _ in 0..len {
        let step = random_step(&mut rng, &st, bounds);
        st = step
            .apply(&st)
            .expect("sampled steps only reference live regions and certified pairs");
        steps.push(step);
    }
    ConstructionTrace {
        base,
        steps,
        claimed: st.derive_data(),
    }
}

/// Id-free summary used to deduplicate the search frontier: the multiset of
/// (color, χ) over regions, the multiset of (black χ, white χ) over
/// certified pairs, `χ(F)` and `N`.
type StateKey = (Vec<(Color, i64)>, Vec<(i64, i64)>, i64, u64);

fn state_key(st: &SymbolicState) -> StateKey {
    let mut regions: Vec<_> = st.regions().map(|r| (r.color, r.euler)).collect();
    regions.sort_unstable();
    let mut pairs: Vec<_> = st
        .certified_pairs()
        .filter_map(|p| {
            let a = st.region(p.first()).ok()?;
            let b = st.region(p.second()).ok()?;
            Some(if a.color == Color::Black {
                (a.euler, b.euler)
            } else {
                (b.euler, a.euler)
            })
        })
        .collect();
    pairs.sort_unstable();
    (regions, pairs, st.surface_euler(), st.triple_points())
}

/// Every construction step applicable to `st`, with handle counts up to
/// `max_g`. The identity `g = 0` is left out, and connect sums are only
/// offered at the lowest certified pair: their result does not depend on
/// the pair.
pub fn legal_steps(st: &SymbolicState, max_g: u32) -> Vec<ConstructionStep> {
    let mut out = Vec::new();
    for r in st.regions() {
        out.push(ConstructionStep::Bubble { target: r.id });
        out.push(ConstructionStep::Ring { host: r.id });
    }
    let pairs: Vec<RegionPair> = st.certified_pairs().collect();
    for &pair in &pairs {
        out.extend((1..=max_g).map(|g| ConstructionStep::GOp { pair, g }));
    }
    if let Some(&pair) = pairs.first() {
        out.push(ConstructionStep::ConnectBoy { pair });
        out.push(ConstructionStep::ConnectN2 { pair });
    }
    out.push(ConstructionStep::SwapColors);
    out
}

/// States that can still reach the data box.
///
/// Along color-preserving construction steps no region disappears, `N`
/// never decreases, and neither `χ(F)` nor any region's `χ` ever increases.
/// So for each color the number of regions with index at least `j` never
/// decreases, and in the box it is at most `max_count · (max_k - j + 1)`.
fn can_reach_box(st: &SymbolicState, bounds: &Bounds) -> bool {
    if st.triple_points() > u64::from(bounds.max_n) || st.surface_euler() < bounds.min_chi {
        return false;
    }
    let max_k = i64::from(bounds.max_k);
    let mut tails = [vec![0u64; bounds.max_k as usize + 1], vec![0u64; bounds.max_k as usize + 1]];
    for r in st.regions() {
        let k = 1 - r.euler;
        if k > max_k {
            return false;
        }
        let side = usize::from(r.color == Color::White);
        tails[side][k as usize] += 1;
    }
    tails.iter().all(|counts| {
        let mut tail = 0;
        (0..=bounds.max_k).rev().all(|j| {
            tail += counts[j as usize];
            tail <= u64::from(bounds.max_count) * u64::from(bounds.max_k - j + 1)
        })
    })
}

/// Data realized by some legal trace of at most `bounds.max_trace_len` steps,
/// restricted to the data box of `bounds`.
///
/// Breadth-first over traces from every base in the box (embeddings of genus
/// `0..=max_k`, Boy's surface, the two-triple-point sphere), deduplicating
/// states by an id-free key. Color swaps commute with every other step up to
/// relabeling ids, so the search runs without them and closes the result
/// under swapping colors at the end.
pub fn enumerate_realized(bounds: &Bounds) -> BTreeSet<ImmersionData> {
    let mut bases: Vec<ConstructionBase> = (0..=bounds.max_k)
        .map(|genus| ConstructionBase::Embedding { genus })
        .collect();
    bases.push(ConstructionBase::Boy);
    bases.push(ConstructionBase::N2);

    let mut seen = HashSet::new();
    let mut frontier = Vec::new();
    let mut realized = BTreeSet::new();
    let mut visit = |st: SymbolicState, frontier: &mut Vec<SymbolicState>| {
        if can_reach_box(&st, bounds) && seen.insert(state_key(&st)) {
            let d = st.derive_data();
            if bounds.contains(&d) {
                realized.insert(d.swapped());
                realized.insert(d);
            }
            frontier.push(st);
        }
    };
    for base in bases {
        visit(base.build(), &mut frontier);
    }
    for _ in 0..bounds.max_trace_len {
        let mut next = Vec::new();
        for st in &frontier {
            for step in legal_steps(st, bounds.max_k) {
                if step == ConstructionStep::SwapColors {
                    continue;
                }
                let out = step.apply(st).expect("legal step");
                visit(out, &mut next);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    realized
}

/// Every realizable datum in the data box of `bounds`, by direct enumeration
/// of the predicate.
pub fn realizable_in_box(bounds: &Bounds) -> BTreeSet<ImmersionData> {
    let spectra = all_spectra(bounds.max_k, bounds.max_count);
    let mut out = BTreeSet::new();
    for black in &spectra {
        for white in &spectra {
            for n in 0..=i64::from(bounds.max_n) {
                for chi in bounds.min_chi..=2 {
                    let d = ImmersionData::new(black.clone(), white.clone(), chi, n);
                    if d.is_realizable() {
                        out.insert(d);
                    }
                }
            }
        }
    }
    out
}

/// All spectra with support in `0..=max_k` and counts in `0..=max_count`,
/// including the empty one.
pub fn all_spectra(max_k: u32, max_count: u32) -> Vec<crate::data::RegionSpectrum> {
    let mut out = vec![crate::data::RegionSpectrum::new()];
    for k in 0..=max_k {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..=max_count).map(move |c| {
                    let mut t = s.clone();
                    t.add(k, c);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzFailure {
    pub seed: u64,
    pub step: u64,
    pub event: MoveEvent,
    pub before: HalfInvariantPair,
    pub after: Option<HalfInvariantPair>,
    pub error: Option<String>,
    pub violations: Vec<Violation>,
    pub state_before: SymbolicState,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub base: ConstructionBase,
    pub trials: u64,
    pub failures: Vec<FuzzFailure>,
    pub per_move_counts: BTreeMap<MoveKind, u64>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_move(rng: &mut SeededRng, st: &SymbolicState) -> MoveEvent {
    let all: Vec<_> = st.regions().copied().collect();
    let handled: Vec<_> = all.iter().filter(|r| r.euler <= 0).copied().collect();
    let cells: Vec<_> = all.iter().filter(|r| r.euler == 1).copied().collect();
    let kinds: Vec<_> = MoveKind::ALL
        .into_iter()
        .filter(|k| match k {
            MoveKind::E => !all.is_empty(),
            MoveKind::H | MoveKind::T => !handled.is_empty(),
            MoveKind::Q => !cells.is_empty(),
        })
        .collect();
    match rng.pick(&kinds) {
        MoveKind::E => MoveEvent::e(rng.pick(&all).id),
        MoveKind::H => {
            let x = *rng.pick(&handled);
            let same: Vec<_> = all.iter().filter(|r| r.color == x.color).collect();
            MoveEvent::h(x.id, rng.pick(&same).id)
        }
        MoveKind::T => MoveEvent::t(rng.pick(&handled).id),
        MoveKind::Q => MoveEvent::q(rng.pick(&cells).id),
    }
}

/// [`fuzz_homotopy`], also handing every intermediate state to `observe`.
pub fn fuzz_homotopy_with(
    seed: u64,
    steps: u64,
    bounds: &Bounds,
    mut observe: impl FnMut(&SymbolicState),
) -> FuzzReport {
    let mut rng = SeededRng::new(seed);
    let base = random_base(&mut rng, bounds);
    let mut st = base.build();
    observe(&st);
    let mut report = FuzzReport {
        seed,
        base,
        trials: 0,
        failures: Vec::new(),
        per_move_counts: MoveKind::ALL.into_iter().map(|k| (k, 0)).collect(),
    };
    for step in 0..steps {
        let event = random_move(&mut rng, &st);
        let before = half_invariants(&st);
        report.trials += 1;
        *report.per_move_counts.entry(event.kind).or_default() += 1;
        let failure = |after, error, violations| FuzzFailure {
            seed,
            step,
            event: event.clone(),
            before,
            after,
            error,
            violations,
            state_before: st.clone(),
        };
        match apply_move(&st, &event) {
            Ok(next) => {
                let after = half_invariants(&next);
                let violations = next.check();
                let n_ok = event.kind != MoveKind::T || next.triple_points() == st.triple_points() + 2;
                if after != before || !violations.is_empty() || !n_ok {
                    let err = (!n_ok).then(|| "T move did not add two triple points".to_string());
                    report.failures.push(failure(Some(after), err, violations));
                }
                observe(&next);
                st = next;
            }
            Err(e) => report.failures.push(failure(None, Some(e.to_string()), Vec::new())),
        }
    }
    report
}

/// Runs `steps` random legal E/H/T/Q moves from a random base, checking
/// after each that `(2a, 2b)` is unchanged and the state audit is clean.
pub fn fuzz_homotopy(seed: u64, steps: u64, bounds: &Bounds) -> FuzzReport {
    fuzz_homotopy_with(seed, steps, bounds, |_| {})
}
