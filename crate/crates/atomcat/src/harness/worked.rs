//! The worked examples as a comparison table: each row states an expected
//! outcome and the outcome recomputed from scratch.

use std::collections::BTreeSet;

use serde::Serialize;

use super::config::RunConfig;
use super::random::posets_up_to;
use crate::atomspec::{aass, asupp, spectrum, AtomOptions};
use crate::gf::Field;
use crate::linmod::{complete_lattice, module_of_quiver, structure_report};
use crate::ordertop::Poset;
use crate::predictor::{
    absorption, crosscheck, predict_noatom, predict_preset, predict_realization, preset_properties, preset_window, RealizationMode,
};
use crate::quiver::{
    chain, gen_noatom, gen_realization_acc, gen_realization_general, make_quiver, preset, Arrow, ColoredQuiver, TruncationSpec, PRESETS,
};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleRow {
    pub name: String,
    pub expected: String,
    pub observed: String,
}

impl ExampleRow {
    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

fn row(name: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>) -> ExampleRow {
    ExampleRow { name: name.into(), expected: expected.into(), observed: observed.into() }
}

/// `v1 → v2 → v3` with two colors.
pub fn chain_of_three() -> ColoredQuiver {
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    make_quiver(s(&["v1", "v2", "v3"]), s(&["c12", "c23"]), vec![Arrow::new("v1", "v2", "c12"), Arrow::new("v2", "v3", "c23")]).expect("well formed")
}

/// Three loop points with distinct colors, chained by bold arrows.
pub fn three_loops() -> ColoredQuiver {
    let blocks: Vec<ColoredQuiver> = (0..3).map(|i| ColoredQuiver::loop_point("v", &format!("c{i}"))).collect();
    chain(&blocks).quiver
}

pub fn diamond() -> Poset {
    Poset::new(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).expect("diamond")
}

fn list<S: AsRef<str>>(xs: impl IntoIterator<Item = S>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.as_ref().to_string()).collect();
    format!("[{}]", v.join(","))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn spectrum_rows(field: Field, opts: AtomOptions, rows: &mut Vec<ExampleRow>) -> Result<(), Error> {
    let r = spectrum(&chain_of_three(), field, opts)?;
    let mut simple = 0;
    for a in r.atoms.atoms() {
        if let Some(rep) = &a.representative {
            simple += structure_report(rep, opts.budget)?.is_simple as usize;
        }
    }
    rows.push(row("chain-of-3 spectrum", "atoms=1 simple=1", format!("atoms={} simple={simple}", r.len())));

    let r = spectrum(&three_loops(), field, opts)?;
    let pairs = r.order.strict_pairs().len();
    rows.push(row(
        "three loops spectrum",
        "atoms=3 discrete=yes order-pairs=0",
        format!("atoms={} discrete={} order-pairs={pairs}", r.len(), yes(r.is_discrete())),
    ));
    Ok(())
}

fn infinite_chain_rows(field: Field, opts: AtomOptions, rows: &mut Vec<ExampleRow>) -> Result<(), Error> {
    for d in 2..=6 {
        let g = preset("infinite-chain", d)?;
        let m = module_of_quiver(&g.quiver, field);
        let lattice = complete_lattice(&m, opts.budget)?;
        let mut expected: BTreeSet<Vec<String>> = (0..d).map(|j| (j..d).map(|i| format!("v{i}")).collect()).collect();
        expected.insert(Vec::new());
        let observed: BTreeSet<Vec<String>> = lattice
            .members
            .iter()
            .map(|u| {
                let mut vs: Vec<String> = (0..m.dim()).filter(|&i| u.contains(&m.basis_vector(i))).map(|i| m.labels()[i].clone()).collect();
                // A submodule not spanned by vertices can never equal a tail.
                if vs.len() != u.dim() {
                    vs.push("?".into());
                }
                vs
            })
            .collect();
        rows.push(row(
            format!("infinite chain lattice d={d}"),
            format!("{} submodules, tails plus zero", d + 1),
            format!("{} submodules, {}", observed.len(), if observed == expected { "tails plus zero" } else { "other" }),
        ));
    }
    Ok(())
}

fn aass_rows(field: Field, opts: AtomOptions, rows: &mut Vec<ExampleRow>) -> Result<(), Error> {
    let sym = predict_preset("aass-vs-asupp", 1)?;
    let sym_labels = sym.labels();
    for d in 2..=4 {
        let g = preset("aass-vs-asupp", d)?;
        let m = module_of_quiver(&g.quiver, field);
        let ass = aass(&m, opts)?;
        let supp = asupp(&m, opts)?;
        let beta = module_of_quiver(&g.quiver.full_subquiver(&["t/v"])?, field);
        let mut is_beta = ass.len() == 1;
        for a in ass.atoms() {
            is_beta &= a.is_class_of(&beta, opts)?;
        }
        let report = structure_report(&m, opts.budget)?;
        let essential = crate::linmod::is_essential(&report.socle, &m, opts.budget)?;
        rows.push(row(
            format!("aass-vs-asupp d={d}"),
            "aass=beta socle-essential=yes finite-asupp=1 symbolic-asupp=[alpha,beta]",
            format!(
                "aass={} socle-essential={} finite-asupp={} symbolic-asupp={}",
                if is_beta { "beta" } else { "other" },
                yes(essential),
                supp.len(),
                list(&sym_labels)
            ),
        ));
    }
    Ok(())
}

fn realization_rows(field: Field, opts: AtomOptions, rows: &mut Vec<ExampleRow>) -> Result<(), Error> {
    let p = Poset::chain(&["p0", "p1"]);
    let sym = predict_realization(&p, RealizationMode::Acc)?.spectrum;
    let d = crosscheck(&sym, &gen_realization_acc(&p, TruncationSpec::depth(3))?, field, opts)?;
    rows.push(row(
        "acc chain p0<p1 depth 3",
        "matched=[simple(p1)] missing=[chain(p0)] clean=yes",
        format!("matched={} missing={} clean={}", list(d.matched_symbolic()), list(&d.missing_in_brute), yes(d.is_clean())),
    ));

    let mut iso = 0;
    let posets = posets_up_to(4);
    for p in &posets {
        iso += predict_realization(p, RealizationMode::Acc)?.spectrum.order().isomorphism(p, 8)?.is_some() as usize;
    }
    rows.push(row("acc realizes posets up to 4", format!("isomorphic={0}/{0}", posets.len()), format!("isomorphic={iso}/{}", posets.len())));

    let r = predict_realization(&diamond(), RealizationMode::General)?;
    let d = crosscheck(&r.pre_quotient, &gen_realization_general(&diamond(), TruncationSpec::new(1, 0, 0))?, field, opts)?;
    rows.push(row(
        "general diamond",
        "atoms=4 isomorphic=yes matched=4 clean=yes",
        format!(
            "atoms={} isomorphic={} matched={} clean={}",
            r.spectrum.len(),
            yes(r.spectrum.order().isomorphism(&diamond(), 8)?.is_some()),
            d.matched.len(),
            yes(d.is_clean())
        ),
    ));
    Ok(())
}

fn noatom_rows(field: Field, opts: AtomOptions, rows: &mut Vec<ExampleRow>) -> Result<(), Error> {
    for d in 1..=3 {
        let trunc = TruncationSpec::new(d, 0, d as i64);
        let g = gen_noatom(trunc)?;
        let a = absorption(&g, field, opts)?;
        let p = predict_noatom(trunc)?;
        let nonzero = !module_of_quiver(&g.quiver, field).is_zero();
        rows.push(row(
            format!("no-atom d={d}"),
            "unabsorbed=0 post-quotient=0 pre-quotient-nonzero=yes",
            format!("unabsorbed={} post-quotient={} pre-quotient-nonzero={}", a.unabsorbed.len(), p.post_quotient.len(), yes(nonzero)),
        ));
    }
    Ok(())
}

fn preset_rows(field: Field, opts: AtomOptions, rows: &mut Vec<ExampleRow>) -> Result<(), Error> {
    for name in PRESETS {
        for c in preset_properties(name, preset_window(name, 2))? {
            rows.push(row(format!("{name}: {}", c.name), "holds", if c.holds { "holds".to_string() } else { format!("fails ({})", c.detail) }));
        }
        let sym = predict_preset(name, preset_window(name, 2))?;
        let d = crosscheck(&sym, &preset(name, 2)?, field, opts)?;
        rows.push(row(
            format!("{name}: crosscheck depth 2"),
            "unexpected=0 order-violations=0",
            format!("unexpected={} order-violations={}", d.unexpected.len(), d.order_violations.len()),
        ));
    }
    Ok(())
}

/// Every worked example, in a fixed order.
pub fn worked_examples(cfg: &RunConfig) -> Result<Vec<ExampleRow>, Error> {
    let (field, opts) = (cfg.field(), cfg.atom_options());
    let mut rows = Vec::new();
    spectrum_rows(field, opts, &mut rows)?;
    infinite_chain_rows(field, opts, &mut rows)?;
    aass_rows(field, opts, &mut rows)?;
    realization_rows(field, opts, &mut rows)?;
    noatom_rows(field, opts, &mut rows)?;
    preset_rows(field, opts, &mut rows)?;
    Ok(rows)
}

/// Fixed-width text table, one row per example plus a verdict column.
pub fn render_table(rows: &[ExampleRow]) -> String {
    let w0 = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0).max("example".len());
    let w1 = rows.iter().map(|r| r.expected.chars().count()).max().unwrap_or(0).max("expected".len());
    let w2 = rows.iter().map(|r| r.observed.chars().count()).max().unwrap_or(0).max("observed".len());
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
    let mut out = format!("{}  {}  {}  ok\n", pad("example", w0), pad("expected", w1), pad("observed", w2));
    for r in rows {
        let verdict = if r.passed() { "ok" } else { "MISMATCH" };
        out += &format!("{}  {}  {}  {verdict}\n", pad(&r.name, w0), pad(&r.expected, w1), pad(&r.observed, w2));
    }
    out
}
