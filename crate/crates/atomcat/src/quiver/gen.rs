//! Finite truncations of the infinite quivers used for poset realization and
//! the counterexample constructions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{chain_labeled, make_quiver, substitute, tag, Arrow, AtomDescriptor, ColoredQuiver, FamilyMember, GeneratedQuiver, QuiverError};
use crate::ordertop::Poset;

/// How much of an infinite construction to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    /// Chain blocks for chain generators, maximal word length `l` for word generators.
    pub depth: usize,
    /// Inclusive integer window for ladder indices.
    pub window: (i64, i64),
}

impl TruncationSpec {
    pub fn depth(depth: usize) -> TruncationSpec {
        TruncationSpec { depth, window: (0, 0) }
    }

    pub fn new(depth: usize, lo: i64, hi: i64) -> TruncationSpec {
        TruncationSpec { depth, window: (lo, hi) }
    }
}

fn simple_entry(v: &str) -> AtomDescriptor {
    AtomDescriptor { kind: "simple".into(), vertices: vec![v.to_string()], representative: Some(vec![v.to_string()]) }
}

fn limit_entry(vertices: Vec<String>) -> AtomDescriptor {
    AtomDescriptor { kind: "chain_limit".into(), vertices, representative: None }
}

/// Label of the atom realizing `p` in the ACC construction.
pub fn acc_label(poset: &Poset, p: &str) -> String {
    let i = poset.index_of(p).expect("element of the poset");
    if poset.is_maximal_idx(i) {
        format!("simple({p})")
    } else {
        format!("chain({p})")
    }
}

/// Block sequence of `Γ^p` for `J(p) = js`: an initial `p₀`, then rounds
/// `p₀..p_min(i,k-1)` for `i = 1, 2, ...`, keeping whole rounds while the
/// total stays within `depth`. Entries are `(round, position, element)`.
pub fn acc_block_sequence(js: &[String], depth: usize) -> Vec<(usize, usize, String)> {
    let mut out = vec![(0, 0, js[0].clone())];
    let k = js.len();
    for round in 1.. {
        let size = round.min(k - 1) + 1;
        if out.len() + size > depth {
            break;
        }
        out.extend((0..size).map(|j| (round, j, js[j].clone())));
    }
    out
}

fn acc_block(poset: &Poset, p: &str, depth: usize, memo: &mut HashMap<String, ColoredQuiver>) -> ColoredQuiver {
    if let Some(q) = memo.get(p) {
        return q.clone();
    }
    let js = poset.j(p).expect("element of the poset");
    let q = if js.is_empty() {
        ColoredQuiver::loop_point("v", &tag(&["c", p]))
    } else {
        let seq = acc_block_sequence(&js, depth);
        let blocks: Vec<ColoredQuiver> = seq.iter().map(|(_, _, e)| acc_block(poset, e, depth, memo)).collect();
        let labels: Vec<String> = seq.iter().skip(1).map(|(r, j, _)| tag(&["acc", p, &r.to_string(), &j.to_string()])).collect();
        chain_labeled(&blocks, &labels).quiver
    };
    memo.insert(p.to_string(), q.clone());
    q
}

/// The ACC realization `∐_p Γ^p`, with `Γ^p` a loop point for maximal `p` and
/// otherwise a chain over the diagonal enumeration of `J(p)`.
pub fn gen_realization_acc(poset: &Poset, trunc: TruncationSpec) -> Result<GeneratedQuiver, QuiverError> {
    if trunc.depth < 1 {
        return Err(QuiverError::DepthTooSmall(trunc.depth));
    }
    let mut memo = HashMap::new();
    let mut named = Vec::new();
    let mut atom_table = BTreeMap::new();
    for p in poset.elements() {
        let block = acc_block(poset, p, trunc.depth, &mut memo);
        let vs: Vec<String> = block.vertices().iter().map(|v| format!("{p}/{v}")).collect();
        let label = acc_label(poset, p);
        let entry = if label.starts_with("simple") { simple_entry(&vs[0]) } else { limit_entry(vs) };
        atom_table.insert(label, entry);
        named.push((p.clone(), block));
    }
    let quiver = super::disjoint_union_named(&named);
    let quiver = make_quiver(quiver.vertices().to_vec(), quiver.colors().to_vec(), quiver.arrows().to_vec())?;
    Ok(GeneratedQuiver { quiver, atom_table, noetherian_family: None, notes: Vec::new() })
}

/// One letter of an index word: an element index or a ladder position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Letter {
    Theta(usize),
    Pos(i64),
}

type Word = Vec<Letter>;

/// Order of index words with the implicit `∞` tail: at the first difference the
/// smaller letter wins, and a word ending first is larger.
fn word_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp(y);
        }
    }
    b.len().cmp(&a.len())
}

fn word_id(poset: &Poset, w: &[Letter]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|l| match l {
            Letter::Theta(t) => poset.elements()[*t].clone(),
            Letter::Pos(i) => i.to_string(),
        })
        .collect();
    tag(&parts)
}

/// Words `(θ₀,i₁,θ₁,…,i_l,θ_l)` starting at `theta` with at most `budget`
/// positions, `p` strictly increasing and every `i` in the window.
fn words_from(poset: &Poset, theta: usize, budget: usize, window: (i64, i64)) -> Vec<Word> {
    let mut out = vec![vec![Letter::Theta(theta)]];
    if budget == 0 {
        return out;
    }
    for t2 in 0..poset.len() {
        if !poset.lt_idx(theta, t2) {
            continue;
        }
        for tail in words_from(poset, t2, budget - 1, window) {
            for i in window.0..=window.1 {
                let mut w = vec![Letter::Theta(theta), Letter::Pos(i)];
                w.extend(tail.iter().copied());
                out.push(w);
            }
        }
    }
    out
}

/// Label of the limit atom `Γ^θ` in the general construction.
pub fn general_g_label(p: &str) -> String {
    format!("G({p})")
}

/// Label of the simple atom `Δ^θ` in the general construction.
pub fn general_d_label(p: &str) -> String {
    format!("D({p})")
}

/// The E-word quiver realizing an arbitrary poset, restricted to words with at
/// most `trunc.depth` ladder positions drawn from `trunc.window`.
///
/// Colors ignore the prefix `f`, so every copy of `Γ^θ` inside a larger word
/// carries the same colors as the top-level `Γ^θ`.
pub fn gen_realization_general(poset: &Poset, trunc: TruncationSpec) -> Result<GeneratedQuiver, QuiverError> {
    if trunc.depth < 1 {
        return Err(QuiverError::DepthTooSmall(trunc.depth));
    }
    if trunc.window.0 > trunc.window.1 {
        return Err(QuiverError::WindowTooSmall);
    }
    let n = poset.len();
    let mut words: Vec<Word> = Vec::new();
    for t in 0..n {
        words.extend(words_from(poset, t, trunc.depth, trunc.window));
    }
    words.sort_by(|a, b| word_cmp(b, a));
    let id = |w: &[Letter]| word_id(poset, w);
    let present: BTreeSet<String> = words.iter().map(|w| id(w)).collect();
    let mut colors: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut arrows = Vec::new();
    let mut push = |src: String, dst: String, color: String, arrows: &mut Vec<Arrow>| {
        if seen.insert(color.clone()) {
            colors.push(color.clone());
        }
        arrows.push(Arrow::new(src, dst, color));
    };
    // Each word ending in θ is the Δ^θ vertex of the copy of Γ^θ at prefix f.
    for w in &words {
        let (f, theta) = (
            &w[..w.len() - 1],
            match w[w.len() - 1] {
                Letter::Theta(t) => t,
                Letter::Pos(_) => unreachable!("words end with an element"),
            },
        );
        let used = f.iter().filter(|l| matches!(l, Letter::Pos(_))).count();
        let remaining = trunc.depth - used;
        let th = poset.elements()[theta].as_str();
        let base: Word = w.clone();
        push(id(&base), id(&base), tag(&["inf", th, "inf"]), &mut arrows);
        if remaining == 0 {
            continue;
        }
        let mut tails: Vec<(usize, Word)> = Vec::new();
        for t2 in 0..n {
            if poset.lt_idx(theta, t2) {
                for e in words_from(poset, t2, remaining - 1, trunc.window) {
                    tails.push((t2, e));
                }
            }
        }
        let at = |i: i64, e: &[Letter]| {
            let mut v = base.clone();
            v.push(Letter::Pos(i));
            v.extend(e.iter().copied());
            v
        };
        for i in trunc.window.0..=trunc.window.1 {
            for (t1, e) in &tails {
                let src = id(&at(i, e));
                let eid = id(e);
                push(id(&base), src.clone(), tag(&["inf", th, &i.to_string(), &eid]), &mut arrows);
                for (t2, e2) in &tails {
                    let e2id = id(e2);
                    if t2 < t1 {
                        push(src.clone(), id(&at(i, e2)), tag(&["0", th, &eid, &e2id]), &mut arrows);
                    }
                    if i > trunc.window.0 {
                        push(src.clone(), id(&at(i - 1, e2)), tag(&["1", th, &eid, &e2id]), &mut arrows);
                    }
                    if i - 2 >= trunc.window.0 {
                        push(src.clone(), id(&at(i - 2, e2)), tag(&["2", th, &i.to_string(), &eid, &e2id]), &mut arrows);
                    }
                }
            }
        }
    }
    debug_assert!(arrows.iter().all(|a| present.contains(&a.src) && present.contains(&a.dst)));
    let vertices: Vec<String> = words.iter().map(|w| id(w)).collect();
    let quiver = make_quiver(vertices, colors, arrows)?;
    let mut atom_table = BTreeMap::new();
    for (t, p) in poset.elements().iter().enumerate() {
        let top = id(&[Letter::Theta(t)]);
        atom_table.insert(general_d_label(p), simple_entry(&top));
        if !poset.is_maximal_idx(t) {
            let vs = words.iter().filter(|w| w[0] == Letter::Theta(t)).map(|w| id(w)).collect();
            atom_table.insert(general_g_label(p), limit_entry(vs));
        }
    }
    let notes = vec![format!(
        "words with at most {} ladder positions in [{}, {}]; colors are shared across prefixes, so a skip color recurs once per prefix",
        trunc.depth, trunc.window.0, trunc.window.1
    )];
    Ok(GeneratedQuiver { quiver, atom_table, noetherian_family: None, notes })
}

/// Increasing words over `{lo..=hi}` starting at `i` with at most `extra` more entries.
fn noatom_words(i: u64, extra: usize, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![i]];
    if extra == 0 {
        return out;
    }
    for j in i + 1..=hi {
        for tail in noatom_words(j, extra - 1, hi) {
            let mut w = vec![i];
            w.extend(tail);
            out.push(w);
        }
    }
    out
}

fn noatom_id(w: &[u64]) -> String {
    let parts: Vec<String> = w.iter().map(|i| i.to_string()).collect();
    tag(&parts)
}

/// Label of the loop simple at words ending in `i`.
pub fn noatom_label(i: u64) -> String {
    format!("loop({i})")
}

/// Truncation of the quiver whose category has no atom: increasing words over
/// the window `{lo..=hi} ∩ ℤ≥0` with at most `depth + 1` entries.
pub fn gen_noatom(trunc: TruncationSpec) -> Result<GeneratedQuiver, QuiverError> {
    let lo = trunc.window.0.max(0);
    if lo > trunc.window.1 {
        return Err(QuiverError::DepthTooSmall(trunc.depth));
    }
    let (lo, hi) = (lo as u64, trunc.window.1 as u64);
    let mut words: Vec<Vec<u64>> = Vec::new();
    for i in lo..=hi {
        words.extend(noatom_words(i, trunc.depth, hi));
    }
    words.sort();
    let mut colors = Vec::new();
    let mut seen = BTreeSet::new();
    let mut arrows = Vec::new();
    let mut push = |src: &[u64], dst: &[u64], color: String, arrows: &mut Vec<Arrow>| {
        if seen.insert(color.clone()) {
            colors.push(color.clone());
        }
        arrows.push(Arrow::new(noatom_id(src), noatom_id(dst), color));
    };
    let fits = |w: &[u64]| w.len() <= trunc.depth + 1;
    for w in &words {
        let i = *w.last().expect("words are nonempty");
        push(w, w, tag(&["inf", &i.to_string(), "-inf"]), &mut arrows);
        // (f,i) -> (f,i,e) for e starting above i.
        for i2 in i + 1..=hi {
            for e in noatom_words(i2, trunc.depth, hi) {
                let mut dst = w.clone();
                dst.extend(&e);
                if fits(&dst) {
                    push(w, &dst, tag(&["inf", &i.to_string(), &noatom_id(&e)]), &mut arrows);
                }
            }
        }
        // (f,e) -> (f,e') for e in E^j, e' in E^{j+1}, every split point of w.
        for cut in 0..w.len() {
            let (prefix, e) = w.split_at(cut);
            let j = e[0];
            if j + 1 > hi {
                continue;
            }
            for e2 in noatom_words(j + 1, trunc.depth, hi) {
                let mut dst = prefix.to_vec();
                dst.extend(&e2);
                if fits(&dst) {
                    push(w, &dst, tag(&["1", &noatom_id(e), &noatom_id(&e2)]), &mut arrows);
                }
            }
        }
    }
    let vertices: Vec<String> = words.iter().map(|w| noatom_id(w)).collect();
    let quiver = make_quiver(vertices, colors, arrows)?;
    let mut family = Vec::new();
    for w in &words {
        family.push(FamilyMember { label: format!("loop{}", noatom_id(w)), vertices: vec![noatom_id(w)] });
    }
    for w in &words {
        let mut path = vec![noatom_id(w)];
        let mut cur = w.clone();
        while let Some(&last) = cur.last() {
            if last + 1 > hi || !fits(&[&cur[..], &[last + 1]].concat()) {
                break;
            }
            cur.push(last + 1);
            path.push(noatom_id(&cur));
        }
        if path.len() > 1 {
            family.push(FamilyMember { label: format!("chain{}", noatom_id(w)), vertices: path });
        }
    }
    let atom_table = (lo..=hi).map(|i| (noatom_label(i), simple_entry(&noatom_id(&[i])))).collect();
    let notes = vec![format!("words with at most {} entries over [{lo}, {hi}]", trunc.depth + 1)];
    Ok(GeneratedQuiver { quiver, atom_table, noetherian_family: Some(family), notes })
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 6] = ["infinite-chain", "aass-vs-asupp", "no-minimal-atom", "no-dcc", "max-not-open", "min-not-closed"];

/// Number of poset elements materialized by the poset-based presets.
pub const PRESET_WINDOW: usize = 4;

/// The window poset `p0 > p1 > … > p(n-1)`, optionally with `pinf` below all.
pub fn descending_poset(n: usize, bottom: bool) -> Poset {
    let mut els: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut pairs: Vec<(String, String)> = (1..n).map(|i| (format!("p{i}"), format!("p{}", i - 1))).collect();
    if bottom && n > 0 {
        els.push("pinf".into());
        pairs.push(("pinf".into(), format!("p{}", n - 1)));
    }
    Poset::new(&els, &pairs).expect("a chain")
}

fn path_of_points(d: usize) -> ColoredQuiver {
    let vs: Vec<String> = (0..d).map(|i| format!("v{i}")).collect();
    let cs: Vec<String> = (1..d).map(|i| tag(&["c", &(i - 1).to_string(), &i.to_string()])).collect();
    let arrows = (1..d).map(|i| Arrow::new(vs[i - 1].clone(), vs[i].clone(), cs[i - 1].clone())).collect();
    make_quiver(vs, cs, arrows).expect("path")
}

fn delta_i(i: usize) -> ColoredQuiver {
    ColoredQuiver::loop_point("v", &tag(&["c", &i.to_string()]))
}

/// Truncated quivers of the named constructions.
pub fn preset(name: &str, depth: usize) -> Result<GeneratedQuiver, QuiverError> {
    if depth < 1 {
        return Err(QuiverError::DepthTooSmall(depth));
    }
    match name {
        "infinite-chain" => {
            let q = path_of_points(depth);
            let last = format!("v{}", depth - 1);
            let mut atom_table = BTreeMap::new();
            atom_table.insert("chain∞".into(), limit_entry(q.vertices().to_vec()));
            atom_table.insert("delta".into(), simple_entry(&last));
            Ok(GeneratedQuiver { quiver: q, atom_table, noetherian_family: None, notes: Vec::new() })
        }
        "aass-vs-asupp" => {
            let omega = make_quiver(vec!["g".into(), "t".into()], vec!["mu".into()], vec![Arrow::new("g", "t", "mu")])?;
            let blocks: BTreeMap<String, ColoredQuiver> =
                [("g".to_string(), path_of_points(depth)), ("t".to_string(), ColoredQuiver::point("v"))].into();
            let q = substitute(&omega, &blocks)?;
            let mut atom_table = BTreeMap::new();
            let gv: Vec<String> = (0..depth).map(|i| format!("g/v{i}")).collect();
            atom_table.insert("alpha".into(), limit_entry(gv));
            atom_table.insert("beta".into(), simple_entry("t/v"));
            Ok(GeneratedQuiver { quiver: q, atom_table, noetherian_family: None, notes: Vec::new() })
        }
        "no-minimal-atom" | "no-dcc" => {
            let poset = descending_poset(PRESET_WINDOW, name == "no-dcc");
            let mut g = gen_realization_acc(&poset, TruncationSpec::depth(depth))?;
            g.notes.push(format!("window of {} chain elements", PRESET_WINDOW));
            Ok(g)
        }
        "max-not-open" => {
            let inner: Vec<ColoredQuiver> = (0..depth)
                .map(|i| {
                    let labels: Vec<String> = (1..depth).map(|k| tag(&["mno", &i.to_string(), &k.to_string()])).collect();
                    chain_labeled(&vec![delta_i(i); depth], &labels).quiver
                })
                .collect();
            let labels: Vec<String> = (1..depth).map(|k| tag(&["mno", "outer", &k.to_string()])).collect();
            let g = chain_labeled(&inner, &labels);
            let mut atom_table = BTreeMap::new();
            atom_table.insert("Gamma".into(), limit_entry(g.quiver.vertices().to_vec()));
            for i in 0..depth {
                let vs: Vec<String> = (0..depth).map(|k| format!("{i}/{k}/v")).collect();
                atom_table.insert(format!("Delta[{i}]"), simple_entry(&vs[0]));
                atom_table.insert(format!("Gamma[{i}]"), limit_entry(vs));
            }
            Ok(GeneratedQuiver { quiver: g.quiver, atom_table, noetherian_family: None, notes: Vec::new() })
        }
        "min-not-closed" => {
            // Block k is the tail Δ^k ⇛ Δ^(k+1) ⇛ … of Γ', so every block is atom-equivalent
            // to Γ' while each Δ^i occurs in finitely many blocks.
            let inner: Vec<ColoredQuiver> = (0..depth)
                .map(|k| {
                    let blocks: Vec<ColoredQuiver> = (k..k + depth).map(delta_i).collect();
                    let labels: Vec<String> = (k + 1..k + depth).map(|j| tag(&["mnc", &j.to_string()])).collect();
                    chain_labeled(&blocks, &labels).quiver
                })
                .collect();
            let labels: Vec<String> = (1..depth).map(|k| tag(&["mnc", "outer", &k.to_string()])).collect();
            let g = chain_labeled(&inner, &labels);
            let mut atom_table = BTreeMap::new();
            atom_table.insert("Gamma".into(), limit_entry(g.quiver.vertices().to_vec()));
            let first: Vec<String> = (0..depth).map(|j| format!("0/{j}/v")).collect();
            atom_table.insert("GammaP".into(), limit_entry(first));
            // Δ^i sits in block k at position i - k; pick the earliest block containing it.
            for i in 0..2 * depth - 1 {
                let k = i.saturating_sub(depth - 1).min(depth - 1);
                atom_table.insert(format!("Delta[{i}]"), simple_entry(&format!("{k}/{}/v", i - k)));
            }
            Ok(GeneratedQuiver { quiver: g.quiver, atom_table, noetherian_family: None, notes: Vec::new() })
        }
        other => Err(QuiverError::UnknownPreset(other.to_string())),
    }
}
