use std::collections::BTreeSet;

use imm_regions::{
    Color, ConstructionBase, ConstructionStep, ImmersionData, RegionPair, RegionSpectrum,
    SymbolicState,
};
use proptest::prelude::*;

/// A step picked by indices into whatever the current state offers.
#[derive(Clone, Debug)]
struct Choice {
    kind: u8,
    index: usize,
    g: u32,
}

fn choice() -> impl Strategy<Value = Choice> {
    (0u8..6, any::<usize>(), 0u32..4).prop_map(|(kind, index, g)| Choice { kind, index, g })
}

fn base() -> impl Strategy<Value = ConstructionBase> {
    prop_oneof![
        (0u32..4).prop_map(|genus| ConstructionBase::Embedding { genus }),
        Just(ConstructionBase::Boy),
        Just(ConstructionBase::N2),
    ]
}

fn resolve(st: &SymbolicState, c: &Choice) -> ConstructionStep {
    let ids: Vec<_> = st.regions().map(|r| r.id).collect();
    let pairs: Vec<_> = st.certified_pairs().collect();
    let id = ids[c.index % ids.len()];
    let pair = pairs[c.index % pairs.len()];
    match c.kind {
        0 => ConstructionStep::Bubble { target: id },
        1 => ConstructionStep::Ring { host: id },
        2 => ConstructionStep::GOp { pair, g: c.g },
        3 => ConstructionStep::ConnectBoy { pair },
        4 => ConstructionStep::ConnectN2 { pair },
        _ => ConstructionStep::SwapColors,
    }
}

fn side(d: &mut ImmersionData, color: Color) -> &mut RegionSpectrum {
    match color {
        Color::Black => &mut d.black,
        Color::White => &mut d.white,
    }
}

fn k_of(euler: i64) -> u32 {
    u32::try_from(1 - euler).unwrap()
}

/// The documented effect of each step on the data, computed from the data
/// and the touched regions only.
fn expected_after(st: &SymbolicState, step: &ConstructionStep) -> ImmersionData {
    let mut d = st.derive_data();
    match *step {
        ConstructionStep::Bubble { target } => {
            let r = st.region(target).unwrap();
            let s = side(&mut d, r.color);
            s.remove_one(k_of(r.euler));
            s.add(k_of(r.euler) + 1, 1);
            s.add(0, 1);
        }
        ConstructionStep::Ring { host } => {
            let r = st.region(host).unwrap();
            side(&mut d, r.color.opposite()).add(1, 1);
        }
        ConstructionStep::GOp { pair, g } => {
            for id in [pair.first(), pair.second()] {
                let r = st.region(id).unwrap();
                let s = side(&mut d, r.color);
                s.remove_one(k_of(r.euler));
                s.add(k_of(r.euler) + g, 1);
            }
            d.surface_euler -= 2 * i64::from(g);
        }
        ConstructionStep::ConnectBoy { .. } => {
            d.surface_euler -= 1;
            d.triple_points += 1;
        }
        ConstructionStep::ConnectN2 { .. } => {
            d.black.add(0, 1);
            d.white.add(0, 1);
            d.triple_points += 2;
        }
        ConstructionStep::SwapColors => d = d.swapped(),
    }
    d
}

proptest! {
    #[test]
    fn steps_match_their_documented_data_delta(
        base in base(),
        choices in prop::collection::vec(choice(), 0..30),
    ) {
        let mut st = base.build();
        let mut ever: BTreeSet<_> = st.regions().map(|r| r.id).collect();
        for c in &choices {
            let step = resolve(&st, c);
            let expected = expected_after(&st, &step);
            let black_before = st.color_euler(Color::Black);
            let white_before = st.color_euler(Color::White);
            let next = step.apply(&st).unwrap();

            prop_assert_eq!(next.derive_data(), expected.clone());
            prop_assert!(next.check().is_empty(), "{:?}", next.check());
            prop_assert!(expected.is_realizable());

            if let ConstructionStep::Bubble { .. } = step {
                prop_assert_eq!(next.color_euler(Color::Black), black_before);
                prop_assert_eq!(next.color_euler(Color::White), white_before);
            }

            // ids are never reused and pairs stay live
            for r in next.regions() {
                if st.region(r.id).is_err() {
                    prop_assert!(!ever.contains(&r.id));
                    prop_assert!(ever.iter().all(|old| *old < r.id));
                }
            }
            ever.extend(next.regions().map(|r| r.id));
            for p in next.certified_pairs() {
                prop_assert!(next.region(p.first()).is_ok() && next.region(p.second()).is_ok());
            }
            // pairs are never consumed
            for p in st.certified_pairs() {
                prop_assert!(next.is_certified(p));
            }
            st = next;
        }
    }

    #[test]
    fn boy_connect_sums_accumulate(base in base(), k in 0u64..12) {
        let start = base.build();
        let pair = start.certified_pairs().next().unwrap();
        let mut st = start.clone();
        for _ in 0..k {
            st = st.connect_boy(pair).unwrap();
        }
        prop_assert_eq!(st.triple_points(), start.triple_points() + k);
        prop_assert_eq!(st.surface_euler(), start.surface_euler() - k as i64);
        prop_assert!(st.check().is_empty());
        if k > 0 {
            prop_assert!(!st.orientable());
        }
    }

    #[test]
    fn transformers_are_pure(base in base(), c in choice()) {
        let st = base.build();
        let copy = st.clone();
        let _ = resolve(&st, &c).apply(&st);
        prop_assert_eq!(st, copy);
    }
}

#[test]
fn uncertified_pair_is_refused_by_every_pair_step() {
    let st = SymbolicState::base_n2();
    let pair = RegionPair::from((2, 3));
    assert!(st.g_operation(pair, 1).is_err());
    assert!(st.connect_boy(pair).is_err());
    assert!(st.connect_n2(pair).is_err());
}
