//! Symbolic stand-in for a generic immersion.
//!
//! A [`SymbolicState`] keeps only what the region data depends on: each
//! complementary region with its color and Euler characteristic, `χ(F)`,
//! the triple point count, and a set of *certified pairs*. A certified pair
//! records that two regions of opposite color meet along a disc of the
//! surface that avoids the intersection set, which is what licenses handle
//! attachment and connect sums at that spot.
//!
//! Every transformer is pure: it borrows the input state and returns a new
//! one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::data::{ImmersionData, RegionSpectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegionId(pub u64);

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: RegionId,
    pub color: Color,
    pub euler: i64,
}

/// Unordered pair of region ids, stored with the smaller id first.
///
/// Serialized as a two-element array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionPair(RegionId, RegionId);

impl RegionPair {
    pub fn new(a: RegionId, b: RegionId) -> Self {
        if a <= b {
            Self(a, b)
        } else {
            Self(b, a)
        }
    }

    pub fn first(self) -> RegionId {
        self.0
    }

    pub fn second(self) -> RegionId {
        self.1
    }

    pub fn contains(self, id: RegionId) -> bool {
        self.0 == id || self.1 == id
    }
}

impl From<(u64, u64)> for RegionPair {
    fn from((a, b): (u64, u64)) -> Self {
        Self::new(RegionId(a), RegionId(b))
    }
}

impl fmt::Display for RegionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

impl Serialize for RegionPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RegionPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [a, b] = <[RegionId; 2]>::deserialize(deserializer)?;
        Ok(Self::new(a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("unknown region {0}")]
    UnknownRegion(RegionId),
    #[error("pair {0} is not certified")]
    UncertifiedPair(RegionPair),
}

/// A broken state invariant, naming the offending ids.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Violation {
    #[error("region {region} has Euler characteristic {euler} > 1")]
    EulerBound { region: RegionId, euler: i64 },
    #[error("no {color:?} region")]
    MissingColor { color: Color },
    #[error("certified pair {pair} references dead region {region}")]
    DanglingPair { pair: RegionPair, region: RegionId },
    #[error("certified pair {pair} joins two regions of the same color")]
    SameColorPair { pair: RegionPair },
    #[error("realizability equation fails: 2χ(black) = {two_black}, 2χ(white) = {two_white}, χ(F)+N = {chi_plus_n}")]
    Equation {
        two_black: i64,
        two_white: i64,
        chi_plus_n: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicState {
    regions: BTreeMap<RegionId, Region>,
    surface_euler: i64,
    triple_points: u64,
    certified_pairs: BTreeSet<RegionPair>,
    orientable: bool,
    next_id: u64,
}

impl SymbolicState {
    /// Assembles a state without checking any invariant. Region ids are
    /// taken from the given regions; the allocator resumes after the largest.
    pub fn from_parts(
        regions: impl IntoIterator<Item = Region>,
        surface_euler: i64,
        triple_points: u64,
        certified_pairs: impl IntoIterator<Item = RegionPair>,
        orientable: bool,
    ) -> Self {
        let regions: BTreeMap<_, _> = regions.into_iter().map(|r| (r.id, r)).collect();
        let next_id = regions.keys().next_back().map_or(0, |id| id.0 + 1);
        Self {
            regions,
            surface_euler,
            triple_points,
            certified_pairs: certified_pairs.into_iter().collect(),
            orientable,
            next_id,
        }
    }

    fn empty(surface_euler: i64, triple_points: u64, orientable: bool) -> Self {
        Self {
            regions: BTreeMap::new(),
            surface_euler,
            triple_points,
            certified_pairs: BTreeSet::new(),
            orientable,
            next_id: 0,
        }
    }

    /// Standard embedding of the orientable surface of the given genus. The
    /// two sides are handlebodies with `χ = 1 - genus`.
    pub fn base_embedding(genus: u32) -> Self {
        let g = i64::from(genus);
        let mut st = Self::empty(2 - 2 * g, 0, true);
        let b = st.push_region(Color::Black, 1 - g);
        let w = st.push_region(Color::White, 1 - g);
        st.certified_pairs.insert(RegionPair::new(b, w));
        st
    }

    /// Boy's surface: two 3-cells, one triple point, `χ(F) = 1`.
    pub fn base_boy() -> Self {
        let mut st = Self::empty(1, 0, false);
        st.triple_points = 1;
        let b = st.push_region(Color::Black, 1);
        let w = st.push_region(Color::White, 1);
        st.certified_pairs.insert(RegionPair::new(b, w));
        st
    }

    /// The sphere with two triple points and four complementary 3-cells,
    /// obtained by tubing together three spheres. Regions are allocated
    /// Black, White, Black, White; the first two form the certified pair.
    pub fn base_n2() -> Self {
        let mut st = Self::empty(2, 2, true);
        let b = st.push_region(Color::Black, 1);
        let w = st.push_region(Color::White, 1);
        st.push_region(Color::Black, 1);
        st.push_region(Color::White, 1);
        st.certified_pairs.insert(RegionPair::new(b, w));
        st
    }

    fn push_region(&mut self, color: Color, euler: i64) -> RegionId {
        let id = RegionId(self.next_id);
        self.next_id += 1;
        self.regions.insert(id, Region { id, color, euler });
        id
    }

    pub fn regions(&self) -> impl Iterator<Item = &Region> {
        self.regions.values()
    }

    pub fn region(&self, id: RegionId) -> Result<&Region, StateError> {
        self.regions.get(&id).ok_or(StateError::UnknownRegion(id))
    }

    fn region_mut(&mut self, id: RegionId) -> Result<&mut Region, StateError> {
        self.regions
            .get_mut(&id)
            .ok_or(StateError::UnknownRegion(id))
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn surface_euler(&self) -> i64 {
        self.surface_euler
    }

    pub fn triple_points(&self) -> u64 {
        self.triple_points
    }

    pub fn certified_pairs(&self) -> impl Iterator<Item = RegionPair> + '_ {
        self.certified_pairs.iter().copied()
    }

    pub fn is_certified(&self, pair: RegionPair) -> bool {
        self.certified_pairs.contains(&pair)
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    /// Id the next new region will receive.
    pub fn next_id(&self) -> RegionId {
        RegionId(self.next_id)
    }

    /// Σ euler over regions of one color, i.e. `χ(A(i))` or `χ(B(i))`.
    pub fn color_euler(&self, color: Color) -> i64 {
        self.regions()
            .filter(|r| r.color == color)
            .map(|r| r.euler)
            .sum()
    }

    /// Lowest-id region with the given color and Euler characteristic.
    pub fn find_region(&self, color: Color, euler: i64) -> Option<RegionId> {
        self.regions()
            .find(|r| r.color == color && r.euler == euler)
            .map(|r| r.id)
    }

    fn certified(&self, pair: RegionPair) -> Result<(), StateError> {
        self.region(pair.first())?;
        self.region(pair.second())?;
        if self.is_certified(pair) {
            Ok(())
        } else {
            Err(StateError::UncertifiedPair(pair))
        }
    }

    /// Local sheet tangency creating a new 3-cell of the target's color and
    /// removing a 2-handle from the target (so its `χ` drops by one).
    pub fn bubble(&self, target: RegionId) -> Result<Self, StateError> {
        let mut st = self.clone();
        let region = st.region_mut(target)?;
        region.euler -= 1;
        let color = region.color;
        st.push_region(color, 1);
        Ok(st)
    }

    /// Adds a small ring inside `host`: a new solid torus region of the
    /// opposite color, certified as adjacent to `host`.
    pub fn ring(&self, host: RegionId) -> Result<Self, StateError> {
        let mut st = self.clone();
        let color = st.region(host)?.color.opposite();
        let new = st.push_region(color, 0);
        st.certified_pairs.insert(RegionPair::new(host, new));
        Ok(st)
    }

    /// Attaches `g` handles across the disc shared by a certified pair:
    /// each region's `χ` drops by `g` and `χ(F)` by `2g`.
    pub fn g_operation(&self, pair: RegionPair, g: u32) -> Result<Self, StateError> {
        self.certified(pair)?;
        let g = i64::from(g);
        let mut st = self.clone();
        st.region_mut(pair.first())?.euler -= g;
        st.region_mut(pair.second())?.euler -= g;
        st.surface_euler -= 2 * g;
        Ok(st)
    }

    /// Connect sum with Boy's surface at the disc of a certified pair. Each
    /// 3-cell of Boy's surface merges along a disc into one member of the
    /// pair, which leaves every region's `χ` as it was.
    pub fn connect_boy(&self, pair: RegionPair) -> Result<Self, StateError> {
        self.certified(pair)?;
        let mut st = self.clone();
        st.surface_euler -= 1;
        st.triple_points += 1;
        st.orientable = false;
        Ok(st)
    }

    /// Connect sum with the two-triple-point sphere at a certified pair. Two
    /// of its four 3-cells are absorbed; the other two survive as new
    /// regions, one of each color.
    pub fn connect_n2(&self, pair: RegionPair) -> Result<Self, StateError> {
        self.certified(pair)?;
        let mut st = self.clone();
        // χ(F # S²) = χ(F) + 2 - 2
        st.triple_points += 2;
        st.push_region(Color::Black, 1);
        st.push_region(Color::White, 1);
        Ok(st)
    }

    /// Relabels every region with the opposite color.
    pub fn swap_colors(&self) -> Self {
        let mut st = self.clone();
        for r in st.regions.values_mut() {
            r.color = r.color.opposite();
        }
        st
    }

    /// Removes a region and every certificate that mentions it.
    pub(crate) fn remove_region(&mut self, id: RegionId) -> Result<Region, StateError> {
        let region = self
            .regions
            .remove(&id)
            .ok_or(StateError::UnknownRegion(id))?;
        self.certified_pairs.retain(|p| !p.contains(id));
        Ok(region)
    }

    pub(crate) fn add_region(&mut self, color: Color, euler: i64) -> RegionId {
        self.push_region(color, euler)
    }

    pub(crate) fn region_euler_mut(&mut self, id: RegionId) -> Result<&mut i64, StateError> {
        Ok(&mut self.region_mut(id)?.euler)
    }

    pub(crate) fn add_triple_points(&mut self, n: u64) {
        self.triple_points += n;
    }

    /// Reads off `({aₖ}, {bₖ}, χ, N)`.
    ///
    /// A region with `χ > 1` has no index `k` and is left out; such a state
    /// already fails [`SymbolicState::check`].
    pub fn derive_data(&self) -> ImmersionData {
        let mut black = RegionSpectrum::new();
        let mut white = RegionSpectrum::new();
        for r in self.regions() {
            let Ok(k) = u32::try_from(1 - r.euler) else {
                continue;
            };
            match r.color {
                Color::Black => black.add(k, 1),
                Color::White => white.add(k, 1),
            }
        }
        ImmersionData::new(
            black,
            white,
            self.surface_euler,
            i64::try_from(self.triple_points).expect("triple point count fits in i64"),
        )
    }

    /// Audits every state invariant. Empty iff the state is sound.
    pub fn check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for r in self.regions() {
            if r.euler > 1 {
                out.push(Violation::EulerBound {
                    region: r.id,
                    euler: r.euler,
                });
            }
        }
        for color in [Color::Black, Color::White] {
            if !self.regions().any(|r| r.color == color) {
                out.push(Violation::MissingColor { color });
            }
        }
        for &pair in &self.certified_pairs {
            let mut live = true;
            for id in [pair.first(), pair.second()] {
                if !self.regions.contains_key(&id) {
                    out.push(Violation::DanglingPair { pair, region: id });
                    live = false;
                }
            }
            if live && self.regions[&pair.first()].color == self.regions[&pair.second()].color {
                out.push(Violation::SameColorPair { pair });
            }
        }
        let two_black = 2 * self.color_euler(Color::Black);
        let two_white = 2 * self.color_euler(Color::White);
        let chi_plus_n = self.surface_euler + self.triple_points as i64;
        if two_black != chi_plus_n || two_white != chi_plus_n {
            out.push(Violation::Equation {
                two_black,
                two_white,
                chi_plus_n,
            });
        }
        out
    }
}

/// Free-function form of [`SymbolicState::check`].
pub fn check_state(st: &SymbolicState) -> Vec<Violation> {
    st.check()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(b: &[(u32, u32)], w: &[(u32, u32)], chi: i64, n: i64) -> ImmersionData {
        ImmersionData::new(
            b.iter().copied().collect(),
            w.iter().copied().collect(),
            chi,
            n,
        )
    }

    fn pair(a: u64, b: u64) -> RegionPair {
        (a, b).into()
    }

    #[test]
    fn embeddings() {
        let s0 = SymbolicState::base_embedding(0);
        assert_eq!(s0.derive_data(), d(&[(0, 1)], &[(0, 1)], 2, 0));
        assert!(s0.orientable());
        assert_eq!(s0.certified_pairs().collect::<Vec<_>>(), vec![pair(0, 1)]);

        let s1 = SymbolicState::base_embedding(1);
        assert!(s1.regions().all(|r| r.euler == 0));
        assert_eq!(s1.surface_euler(), 0);

        let s2 = SymbolicState::base_embedding(2);
        assert!(s2.regions().all(|r| r.euler == -1));
        assert_eq!(s2.surface_euler(), -2);
        assert!(s2.check().is_empty());
    }

    #[test]
    fn boy() {
        let s = SymbolicState::base_boy();
        assert_eq!(s.derive_data(), d(&[(0, 1)], &[(0, 1)], 1, 1));
        assert!(s.check().is_empty());
        assert_eq!(s.derive_data().euler_of_image(), Ok(2));
        assert!(!s.orientable());
    }

    #[test]
    fn n2() {
        let s = SymbolicState::base_n2();
        assert_eq!(s.derive_data(), d(&[(0, 2)], &[(0, 2)], 2, 2));
        assert_eq!(s.certified_pairs().count(), 1);
        assert_eq!(s.color_euler(Color::Black), s.color_euler(Color::White));
        assert!(s.check().is_empty());
    }

    #[test]
    fn bubble_on_solid_torus() {
        let s = SymbolicState::base_embedding(1);
        let t = s.bubble(RegionId(0)).unwrap();
        assert_eq!(t.region(RegionId(0)).unwrap().euler, -1);
        let new = t.region(RegionId(2)).unwrap();
        assert_eq!((new.color, new.euler), (Color::Black, 1));
        assert_eq!(t.certified_pairs().count(), 1);
        assert_eq!(t.derive_data(), d(&[(0, 1), (2, 1)], &[(1, 1)], 0, 0));
        assert!(t.check().is_empty());
    }

    #[test]
    fn bubble_on_three_cell_keeps_the_equation() {
        // Black sum: (1 - 1) + 1 = 1, white sum 1, χ+N = 2.
        let t = SymbolicState::base_embedding(0).bubble(RegionId(0)).unwrap();
        assert_eq!(t.derive_data(), d(&[(0, 1), (1, 1)], &[(0, 1)], 2, 0));
        assert!(t.derive_data().is_realizable());
        assert!(t.check().is_empty());
        assert_eq!(t.derive_data().black.total_count(), 2);
    }

    #[test]
    fn ring_examples() {
        let s = SymbolicState::base_embedding(1);
        let t = s.ring(RegionId(1)).unwrap();
        assert_eq!(t.derive_data(), d(&[(1, 2)], &[(1, 1)], 0, 0));
        assert!(t.is_certified(pair(1, 2)));

        let u = t.ring(RegionId(2)).unwrap();
        assert!(u.is_certified(pair(2, 3)));
        assert_eq!(u.region(RegionId(3)).unwrap().color, Color::White);
        assert_eq!(u.surface_euler(), s.surface_euler());
        assert_eq!(u.triple_points(), s.triple_points());

        let both = s.ring(RegionId(0)).unwrap().ring(RegionId(1)).unwrap();
        assert_eq!(both.derive_data(), d(&[(1, 2)], &[(1, 2)], 0, 0));
    }

    #[test]
    fn g_operation_examples() {
        let s = SymbolicState::base_embedding(1);
        let t = s.g_operation(pair(0, 1), 1).unwrap();
        assert!(t.regions().all(|r| r.euler == -1));
        assert_eq!(t.surface_euler(), -2);
        assert!(t.is_certified(pair(0, 1)));

        assert_eq!(s.g_operation(pair(0, 1), 0).unwrap(), s);

        // χ = 0 and χ = -1 pair: ring inside a bubbled torus side.
        let u = s
            .bubble(RegionId(0))
            .unwrap()
            .ring(RegionId(0))
            .unwrap();
        let p = pair(0, 3);
        assert_eq!(u.region(RegionId(0)).unwrap().euler, -1);
        assert_eq!(u.region(RegionId(3)).unwrap().euler, 0);
        let v = u.g_operation(p, 3).unwrap();
        assert_eq!(v.region(RegionId(0)).unwrap().euler, -4);
        assert_eq!(v.region(RegionId(3)).unwrap().euler, -3);
        assert_eq!(v.surface_euler(), u.surface_euler() - 6);
        assert!(v.check().is_empty());

        assert_eq!(
            s.g_operation(pair(0, 2), 1),
            Err(StateError::UnknownRegion(RegionId(2)))
        );
        let w = s.ring(RegionId(0)).unwrap();
        assert_eq!(
            w.g_operation(pair(1, 2), 1),
            Err(StateError::UncertifiedPair(pair(1, 2)))
        );
    }

    #[test]
    fn connect_boy_chain() {
        let mut s = SymbolicState::base_embedding(0);
        for n in 1..=6 {
            let before: Vec<_> = s.regions().copied().collect();
            s = s.connect_boy(pair(0, 1)).unwrap();
            assert_eq!(s.derive_data(), d(&[(0, 1)], &[(0, 1)], 2 - n, n));
            assert_eq!(s.regions().copied().collect::<Vec<_>>(), before);
            assert!(!s.orientable());
            assert!(s.check().is_empty());
        }
    }

    #[test]
    fn connect_n2_chain() {
        let mut s = SymbolicState::base_n2();
        s = s.connect_n2(pair(0, 1)).unwrap();
        assert_eq!(s.derive_data(), d(&[(0, 3)], &[(0, 3)], 2, 4));
        for _ in 0..3 {
            let n = s.triple_points();
            s = s.connect_n2(pair(0, 1)).unwrap();
            assert_eq!(s.triple_points(), n + 2);
        }
        assert_eq!(s.derive_data(), d(&[(0, 6)], &[(0, 6)], 2, 10));
        assert!(s.check().is_empty());
        // off a sphere χ(F) is still preserved
        let t = SymbolicState::base_embedding(3).connect_n2(pair(0, 1)).unwrap();
        assert_eq!(t.surface_euler(), -4);
        assert!(t.check().is_empty());
    }

    #[test]
    fn check_reports_violations() {
        assert!(SymbolicState::base_n2().check().is_empty());

        let bad = SymbolicState::from_parts(
            [
                Region { id: RegionId(0), color: Color::Black, euler: 2 },
                Region { id: RegionId(1), color: Color::White, euler: 2 },
            ],
            2,
            2,
            [pair(0, 1)],
            true,
        );
        let v = bad.check();
        assert!(v.contains(&Violation::EulerBound { region: RegionId(0), euler: 2 }));
        assert!(v.contains(&Violation::EulerBound { region: RegionId(1), euler: 2 }));

        let unbalanced = SymbolicState::from_parts(
            [
                Region { id: RegionId(0), color: Color::Black, euler: 1 },
                Region { id: RegionId(1), color: Color::White, euler: 0 },
            ],
            2,
            0,
            [],
            true,
        );
        assert_eq!(
            unbalanced.check(),
            vec![Violation::Equation { two_black: 2, two_white: 0, chi_plus_n: 2 }]
        );

        let dangling = SymbolicState::from_parts(
            [
                Region { id: RegionId(0), color: Color::Black, euler: 1 },
                Region { id: RegionId(1), color: Color::Black, euler: 1 },
            ],
            2,
            2,
            [pair(0, 1), pair(0, 7)],
            true,
        );
        let v = dangling.check();
        assert!(v.contains(&Violation::MissingColor { color: Color::White }));
        assert!(v.contains(&Violation::DanglingPair { pair: pair(0, 7), region: RegionId(7) }));
        assert!(v.contains(&Violation::SameColorPair { pair: pair(0, 1) }));
    }

    #[test]
    fn swap_relabels_colors() {
        let s = SymbolicState::base_embedding(1).ring(RegionId(1)).unwrap();
        let t = s.swap_colors();
        assert_eq!(t.derive_data(), s.derive_data().swapped());
        assert_eq!(t.swap_colors(), s);
    }
}
