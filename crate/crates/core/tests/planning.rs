use imm_regions::oracle::{all_spectra, enumerate_realized, realizable_in_box, Bounds};
use imm_regions::verifier::verify_detailed;
use imm_regions::{plan, plan_or_explain, ConstructionBase, ConstructionStep, ImmersionData};

fn d(b: &[(u32, u32)], w: &[(u32, u32)], chi: i64, n: i64) -> ImmersionData {
    ImmersionData::new(b.iter().copied().collect(), w.iter().copied().collect(), chi, n)
}

fn universe(max_k: u32, max_count: u32, max_n: i64, min_chi: i64) -> Vec<ImmersionData> {
    let spectra = all_spectra(max_k, max_count);
    let mut out = Vec::new();
    for b in &spectra {
        for w in &spectra {
            for n in 0..=max_n {
                for chi in min_chi..=2 {
                    out.push(ImmersionData::new(b.clone(), w.clone(), chi, n));
                }
            }
        }
    }
    out
}

#[test]
fn plans_verify_and_stay_short() {
    let mut planned = 0;
    for data in universe(2, 3, 5, -10) {
        match plan(&data) {
            Ok(t) => {
                planned += 1;
                assert!(data.is_realizable());
                if let Err(e) = verify_detailed(&t, &data) {
                    panic!("{data}: {e}");
                }
                assert_eq!(t.claimed, data);
                let bound = 4 * data.measure() + 4;
                assert!((t.steps.len() as i128) <= bound, "{data}: {} steps", t.steps.len());
            }
            Err(_) => assert!(!data.is_realizable(), "{data}"),
        }
    }
    assert!(planned > 100);
}

#[test]
fn documented_plans() {
    let t = plan(&d(&[(0, 1)], &[(0, 1)], 0, 2)).unwrap();
    assert_eq!(t.base, ConstructionBase::Embedding { genus: 0 });
    assert_eq!(t.steps.len(), 2);
    assert!(t.steps.iter().all(|s| matches!(s, ConstructionStep::ConnectBoy { .. })));

    let t = plan(&d(&[(1, 2)], &[(1, 3)], 0, 0)).unwrap();
    assert_eq!(t.base, ConstructionBase::Embedding { genus: 1 });
    assert_eq!(t.steps.len(), 3);

    assert!(plan_or_explain(&d(&[(0, 2)], &[(0, 2)], 2, 2)).is_ok());
}

#[test]
fn large_triple_point_counts_do_not_recurse() {
    let n = 20_000;
    let cells = 1 + n / 2;
    let data = d(&[(0, cells as u32)], &[(0, cells as u32)], 2, n);
    let t = plan(&data).unwrap();
    assert_eq!(t.base, ConstructionBase::N2);
    assert_eq!(t.steps.len(), (n / 2 - 1) as usize);

    let data = d(&[(0, 1)], &[(0, 1)], 2 - n, n);
    assert_eq!(plan(&data).unwrap().steps.len(), n as usize);
}

fn small_box(max_trace_len: u32) -> Bounds {
    Bounds { max_k: 2, max_count: 2, max_n: 2, min_chi: -4, max_trace_len }
}

#[test]
fn enumeration_matches_predicate_in_small_box() {
    let expected = realizable_in_box(&small_box(0));
    // Every realizable datum has a planned trace of at most this length, so
    // traces this long must reach all of them.
    let longest = expected.iter().map(|x| plan(x).unwrap().steps.len()).max().unwrap();
    assert_eq!(longest, 12);
    let realized = enumerate_realized(&small_box(longest as u32));
    let missing: Vec<_> = expected.difference(&realized).collect();
    let extra: Vec<_> = realized.difference(&expected).collect();
    assert!(missing.is_empty(), "missing {missing:?}");
    assert!(extra.is_empty(), "extra {extra:?}");
    assert_eq!(realized.len(), 426);
}

#[test]
fn three_steps_do_not_reach_everything() {
    let realized = enumerate_realized(&small_box(3));
    let expected = realizable_in_box(&small_box(3));
    assert!(realized.is_subset(&expected));
    assert_eq!(realized.len(), 127);
    // needs two connect sums, a torus, a ring and two bubbles
    let witness = d(&[(0, 2), (2, 2)], &[(1, 1)], -2, 2);
    assert!(witness.is_realizable());
    assert!(!realized.contains(&witness));
    assert_eq!(plan(&witness).unwrap().steps.len(), 5);
}

#[test]
fn enumeration_is_color_symmetric_and_deterministic() {
    let bounds = small_box(5);
    let a = enumerate_realized(&bounds);
    assert!(a.iter().all(|x| a.contains(&x.swapped())));
    let b = enumerate_realized(&bounds);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
