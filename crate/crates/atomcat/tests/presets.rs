use std::collections::BTreeSet;

use atomcat::atomspec::AtomOptions;
use atomcat::gf::Field;
use atomcat::harness::posets_up_to;
use atomcat::predictor::{
    crosscheck, predict_chain, predict_preset, predict_realization, preset_window, AtomKind, RealizationMode, SymbolicSpectrum,
};
use atomcat::quiver::{gen_realization_acc, preset, TruncationSpec, PRESETS};

#[test]
fn presets_are_clean_at_depths_one_to_four() {
    for name in PRESETS {
        for depth in 1..=4 {
            let sym = predict_preset(name, preset_window(name, depth)).unwrap();
            let d = crosscheck(&sym, &preset(name, depth).unwrap(), Field::GF2, AtomOptions::default()).unwrap();
            assert!(d.is_clean(), "{name} at depth {depth}: {d:?}");
        }
    }
}

#[test]
fn matched_atoms_grow_with_depth() {
    for p in posets_up_to(3) {
        let sym = predict_realization(&p, RealizationMode::Acc).unwrap().spectrum;
        let mut prev: BTreeSet<String> = BTreeSet::new();
        for depth in 1..=4 {
            let d = crosscheck(&sym, &gen_realization_acc(&p, TruncationSpec::depth(depth)).unwrap(), Field::GF2, AtomOptions::default()).unwrap();
            let now = d.matched_symbolic();
            assert!(prev.is_subset(&now), "{:?}: {prev:?} then {now:?}", p.strict_pairs());
            prev = now;
        }
    }
}

#[test]
fn chain_limits_are_minimal() {
    let pts: Vec<SymbolicSpectrum> = (0..4).map(|i| SymbolicSpectrum::point(&format!("x{i}"), AtomKind::Simple, "point")).collect();
    for k in 1..=4 {
        let c = predict_chain(&pts[..k], true).unwrap();
        let limits: Vec<String> = c.atoms().iter().filter(|a| a.kind == AtomKind::ChainLimit).map(|a| a.label.clone()).collect();
        assert_eq!(limits.len(), 1);
        assert!(c.minimal().contains(&limits[0]));
    }
}
