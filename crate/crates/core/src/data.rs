//! Region data of an immersion and the realizability predicate.
//!
//! The complement of a generic immersion `i: F -> S^3` is checkerboard
//! colored. For each color we count the regions by Euler characteristic:
//! index `k` counts regions with `χ = 1 - k`. Together with `χ(F)` and the
//! number of triple points `N` this is the data [`ImmersionData`] carries.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sparse count of same-colored regions, keyed by `k` where the region has
/// Euler characteristic `1 - k`.
///
/// No key ever maps to zero; an empty spectrum is the identically-zero
/// sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u32, u32>", into = "BTreeMap<u32, u32>")]
pub struct RegionSpectrum {
    counts: BTreeMap<u32, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("spectrum entry k={0} has zero count; zero entries must be omitted")]
pub struct ZeroCount(pub u32);

impl TryFrom<BTreeMap<u32, u32>> for RegionSpectrum {
    type Error = ZeroCount;

    fn try_from(counts: BTreeMap<u32, u32>) -> Result<Self, Self::Error> {
        if let Some((&k, _)) = counts.iter().find(|(_, &c)| c == 0) {
            return Err(ZeroCount(k));
        }
        Ok(Self { counts })
    }
}

impl From<RegionSpectrum> for BTreeMap<u32, u32> {
    fn from(s: RegionSpectrum) -> Self {
        s.counts
    }
}

impl<const N: usize> From<[(u32, u32); N]> for RegionSpectrum {
    /// Builds a spectrum from `(k, count)` pairs; zero counts are dropped and
    /// repeated keys accumulate.
    fn from(entries: [(u32, u32); N]) -> Self {
        entries.into_iter().collect()
    }
}

impl FromIterator<(u32, u32)> for RegionSpectrum {
    fn from_iter<I: IntoIterator<Item = (u32, u32)>>(iter: I) -> Self {
        let mut s = Self::new();
        for (k, c) in iter {
            s.add(k, c);
        }
        s
    }
}

impl RegionSpectrum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Count of regions at index `k` (zero when absent).
    pub fn get(&self, k: u32) -> u32 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `(k, count)` pairs in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    /// Indices with non-zero count, increasing.
    pub fn support(&self) -> impl DoubleEndedIterator<Item = u32> + '_ {
        self.counts.keys().copied()
    }

    pub fn add(&mut self, k: u32, count: u32) {
        if count > 0 {
            *self.counts.entry(k).or_insert(0) += count;
        }
    }

    /// Removes one region at index `k`. Returns `false` if there was none.
    pub fn remove_one(&mut self, k: u32) -> bool {
        match self.counts.get_mut(&k) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(&k);
                true
            }
            None => false,
        }
    }

    /// Σₖ (1 − k)·count(k), the Euler characteristic of the union of these
    /// regions.
    pub fn weighted_sum(&self) -> i128 {
        self.iter()
            .map(|(k, c)| (1 - i128::from(k)) * i128::from(c))
            .sum()
    }

    /// Σₖ count(k), the number of regions.
    pub fn total_count(&self) -> u64 {
        self.iter().map(|(_, c)| u64::from(c)).sum()
    }

    /// Pointwise sum of two spectra.
    pub fn merged(&self, other: &Self) -> Self {
        self.iter().chain(other.iter()).collect()
    }
}

impl fmt::Display for RegionSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{c}")?;
        }
        f.write_str("}")
    }
}

/// The tuple `({aₖ}, {bₖ}, χ, N)`.
///
/// The fields are not constrained on construction, so that data read from
/// files can be rejected with a reason; [`ImmersionData::is_realizable`]
/// checks the hypotheses `χ ≤ 2`, `N ≥ 0` along with the equation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImmersionData {
    pub black: RegionSpectrum,
    pub white: RegionSpectrum,
    #[serde(rename = "chi")]
    pub surface_euler: i64,
    #[serde(rename = "n")]
    pub triple_points: i64,
}

/// Why a piece of data cannot be realized. Variants are ordered by the
/// sequence in which they are checked.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Unrealizable {
    #[error("black spectrum is identically 0")]
    EmptyBlack,
    #[error("white spectrum is identically 0")]
    EmptyWhite,
    #[error("surface Euler characteristic {chi} exceeds 2")]
    EulerTooLarge { chi: i64 },
    #[error("negative triple point count {n}")]
    NegativeTriplePoints { n: i64 },
    #[error("equation fails: 2·Σ(1-k)aₖ = {two_black}, 2·Σ(1-k)bₖ = {two_white}, χ+N = {chi_plus_n}")]
    EquationMismatch {
        two_black: i128,
        two_white: i128,
        chi_plus_n: i128,
    },
}

impl ImmersionData {
    pub fn new(
        black: RegionSpectrum,
        white: RegionSpectrum,
        surface_euler: i64,
        triple_points: i64,
    ) -> Self {
        Self {
            black,
            white,
            surface_euler,
            triple_points,
        }
    }

    /// `χ + N` widened so the comparison against doubled sums cannot overflow.
    pub fn chi_plus_n(&self) -> i128 {
        i128::from(self.surface_euler) + i128::from(self.triple_points)
    }

    /// Checks the realizability conditions in order and reports the first
    /// one that fails.
    pub fn check(&self) -> Result<(), Unrealizable> {
        if self.black.is_empty() {
            return Err(Unrealizable::EmptyBlack);
        }
        if self.white.is_empty() {
            return Err(Unrealizable::EmptyWhite);
        }
        if self.surface_euler > 2 {
            return Err(Unrealizable::EulerTooLarge {
                chi: self.surface_euler,
            });
        }
        if self.triple_points < 0 {
            return Err(Unrealizable::NegativeTriplePoints {
                n: self.triple_points,
            });
        }
        let two_black = 2 * self.black.weighted_sum();
        let two_white = 2 * self.white.weighted_sum();
        let chi_plus_n = self.chi_plus_n();
        if two_black != chi_plus_n || two_white != chi_plus_n {
            return Err(Unrealizable::EquationMismatch {
                two_black,
                two_white,
                chi_plus_n,
            });
        }
        Ok(())
    }

    /// Whether some closed surface with Euler characteristic `χ` admits an
    /// immersion into `S^3` with `N` triple points realizing both spectra.
    ///
    /// ```
    /// use imm_regions::{ImmersionData, RegionSpectrum};
    ///
    /// let boy = ImmersionData::new([(0, 1)].into(), [(0, 1)].into(), 1, 1);
    /// assert!(boy.is_realizable());
    /// let bad = ImmersionData::new([(0, 1)].into(), [(0, 1)].into(), 2, 1);
    /// assert!(!bad.is_realizable());
    /// ```
    pub fn is_realizable(&self) -> bool {
        self.check().is_ok()
    }

    /// Euler characteristic of the image `i(F)`, computed as the Euler
    /// characteristic of the union of all regions. On realizable data it
    /// equals `χ(F) + N`.
    pub fn euler_of_image(&self) -> Result<i128, Unrealizable> {
        self.check()?;
        Ok(self.black.weighted_sum() + self.white.weighted_sum())
    }

    /// The same data under the opposite choice of base color.
    pub fn swapped(&self) -> Self {
        Self {
            black: self.white.clone(),
            white: self.black.clone(),
            ..*self
        }
    }

    /// `N + Σaₖ + Σbₖ`, the quantity the inductive construction descends on.
    pub fn measure(&self) -> i128 {
        i128::from(self.triple_points)
            + i128::from(self.black.total_count())
            + i128::from(self.white.total_count())
    }
}

impl fmt::Display for ImmersionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, χ={}, N={})",
            self.black, self.white, self.surface_euler, self.triple_points
        )
    }
}
