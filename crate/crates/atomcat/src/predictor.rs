//! Symbolic atom spectra of the infinite constructions, and comparison with
//! brute-force spectra of their truncations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::atomspec::{has_common_nonzero_subobject, is_monoform, order_dot, spectrum, AtomError, AtomOptions, SpectrumReport};
use crate::gf::Field;
use crate::linmod::{module_of_quiver, FdModule};
use crate::ordertop::{OrderError, Poset};
use crate::quiver::{
    acc_block_sequence, acc_label, descending_poset, general_d_label, general_g_label, noatom_label, GeneratedQuiver, QuiverError, TruncationSpec,
    PRESETS, PRESET_WINDOW,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PredictError {
    #[error("unknown preset {0}")]
    UnknownPreset(String),
    #[error("chain needs at least one block")]
    EmptyChain,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Atom(#[from] AtomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomKind {
    Simple,
    ChainLimit,
    Block,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicAtom {
    pub label: String,
    pub kind: AtomKind,
    /// Construction path naming the atom.
    pub provenance: String,
}

/// How much of the topology the basis describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum BasisKind {
    /// The basis is the full open basis.
    Exact,
    /// Basic opens intersected with the first `n` members of an infinite family.
    Window(usize),
    /// Only the order is predicted; the basis is the Alexandroff one of the order.
    OrderOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSpectrum {
    atoms: Vec<SymbolicAtom>,
    order: Poset,
    basis: Vec<BTreeSet<String>>,
    basis_kind: BasisKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicJson {
    pub atoms: Vec<SymbolicAtom>,
    pub order: Vec<(String, String)>,
    pub basis: Vec<Vec<String>>,
    pub basis_kind: BasisKind,
}

fn set<S: AsRef<str>>(xs: &[S]) -> BTreeSet<String> {
    xs.iter().map(|x| x.as_ref().to_string()).collect()
}

impl SymbolicSpectrum {
    /// Atoms are merged by label; `pairs` are `(a, b)` with `a ≤ b`.
    pub fn new(
        atoms: Vec<SymbolicAtom>,
        pairs: &[(String, String)],
        basis: Vec<BTreeSet<String>>,
        basis_kind: BasisKind,
    ) -> Result<SymbolicSpectrum, PredictError> {
        let mut merged: BTreeMap<String, SymbolicAtom> = BTreeMap::new();
        for a in atoms {
            merged.entry(a.label.clone()).or_insert(a);
        }
        let labels: Vec<String> = merged.keys().cloned().collect();
        let order = Poset::new(&labels, pairs)?;
        let basis: BTreeSet<BTreeSet<String>> = basis.into_iter().filter(|b| !b.is_empty()).collect();
        for b in &basis {
            if let Some(x) = b.iter().find(|x| !merged.contains_key(*x)) {
                return Err(OrderError::UnknownElement(x.clone()).into());
            }
        }
        Ok(SymbolicSpectrum { atoms: merged.into_values().collect(), order, basis: basis.into_iter().collect(), basis_kind })
    }

    /// Spectrum whose opens are the up-sets of `order`.
    pub fn alexandroff(atoms: Vec<SymbolicAtom>, pairs: &[(String, String)], kind: BasisKind) -> Result<SymbolicSpectrum, PredictError> {
        let tmp = SymbolicSpectrum::new(atoms, pairs, Vec::new(), kind)?;
        let basis = tmp.labels().iter().map(|x| tmp.up_set(x)).collect();
        SymbolicSpectrum::new(tmp.atoms, pairs, basis, kind)
    }

    pub fn empty() -> SymbolicSpectrum {
        SymbolicSpectrum { atoms: Vec::new(), order: Poset::antichain::<&str>(&[]), basis: Vec::new(), basis_kind: BasisKind::Exact }
    }

    /// One isolated atom.
    pub fn point(label: &str, kind: AtomKind, provenance: &str) -> SymbolicSpectrum {
        let a = SymbolicAtom { label: label.into(), kind, provenance: provenance.into() };
        SymbolicSpectrum::new(vec![a], &[], vec![set(&[label])], BasisKind::Exact).expect("a single atom")
    }

    pub fn atoms(&self) -> &[SymbolicAtom] {
        &self.atoms
    }

    pub fn atom(&self, label: &str) -> Option<&SymbolicAtom> {
        self.atoms.iter().find(|a| a.label == label)
    }

    pub fn labels(&self) -> Vec<String> {
        self.atoms.iter().map(|a| a.label.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn basis(&self) -> &[BTreeSet<String>] {
        &self.basis
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    fn pairs(&self) -> Vec<(String, String)> {
        self.order.strict_pairs()
    }

    pub fn up_set(&self, x: &str) -> BTreeSet<String> {
        self.labels().into_iter().filter(|y| self.order.le(x, y)).collect()
    }

    pub fn down_set(&self, x: &str) -> BTreeSet<String> {
        self.labels().into_iter().filter(|y| self.order.le(y, x)).collect()
    }

    pub fn is_open(&self, s: &BTreeSet<String>) -> bool {
        let mut covered = BTreeSet::new();
        for b in self.basis.iter().filter(|b| b.is_subset(s)) {
            covered.extend(b.iter().cloned());
        }
        covered == *s
    }

    pub fn is_closed(&self, s: &BTreeSet<String>) -> bool {
        let rest: BTreeSet<String> = self.labels().into_iter().filter(|x| !s.contains(x)).collect();
        self.is_open(&rest)
    }

    pub fn minimal(&self) -> BTreeSet<String> {
        self.order.minimal().into_iter().collect()
    }

    pub fn maximal(&self) -> BTreeSet<String> {
        self.order.maximal().into_iter().collect()
    }

    /// Restriction with the induced basis.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> Result<SymbolicSpectrum, PredictError> {
        let atoms = self.atoms.iter().filter(|a| keep.contains(&a.label)).cloned().collect();
        let pairs: Vec<(String, String)> = self.pairs().into_iter().filter(|(a, b)| keep.contains(a) && keep.contains(b)).collect();
        let basis = self.basis.iter().map(|b| b.intersection(keep).cloned().collect()).collect();
        SymbolicSpectrum::new(atoms, &pairs, basis, self.basis_kind)
    }

    /// The closed subset `{β ≤ α}`.
    pub fn localize(&self, alpha: &str) -> Result<SymbolicSpectrum, PredictError> {
        if self.atom(alpha).is_none() {
            return Err(AtomError::UnknownAtom(alpha.to_string()).into());
        }
        self.restrict(&self.down_set(alpha))
    }

    /// Longest strictly descending chain, largest first.
    pub fn longest_descending_chain(&self) -> Vec<String> {
        let labels = self.labels();
        let mut best: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut sorted = labels.clone();
        // Strictly larger elements have smaller up-sets, so they come first.
        sorted.sort_by_key(|x| self.up_set(x).len());
        for x in &sorted {
            let mut chain = Vec::new();
            for y in &labels {
                if y != x && self.order.le(x, y) {
                    if let Some(c) = best.get(y) {
                        if c.len() > chain.len() {
                            chain = c.clone();
                        }
                    }
                }
            }
            chain.push(x.clone());
            best.insert(x.clone(), chain);
        }
        best.into_values().max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a))).unwrap_or_default()
    }

    pub fn to_json(&self) -> SymbolicJson {
        SymbolicJson {
            atoms: self.atoms.clone(),
            order: self.pairs(),
            basis: self.basis.iter().map(|b| b.iter().cloned().collect()).collect(),
            basis_kind: self.basis_kind,
        }
    }

    pub fn from_json(j: &SymbolicJson) -> Result<SymbolicSpectrum, PredictError> {
        let basis = j.basis.iter().map(|b| b.iter().cloned().collect()).collect();
        SymbolicSpectrum::new(j.atoms.clone(), &j.order, basis, j.basis_kind)
    }

    pub fn to_dot(&self) -> String {
        order_dot(&self.order, |l| self.atom(l).is_some_and(|a| a.kind == AtomKind::ChainLimit))
    }
}

fn weakest(a: BasisKind, b: BasisKind) -> BasisKind {
    use BasisKind::*;
    match (a, b) {
        (OrderOnly, _) | (_, OrderOnly) => OrderOnly,
        (Window(x), Window(y)) => Window(x.min(y)),
        (Window(x), _) | (_, Window(x)) => Window(x),
        _ => Exact,
    }
}

/// Union of spectra; atoms with equal labels are the same atom.
pub fn predict_disjoint_union(specs: &[SymbolicSpectrum]) -> Result<SymbolicSpectrum, PredictError> {
    let mut atoms = Vec::new();
    let mut pairs = Vec::new();
    let mut basis = Vec::new();
    let mut kind = BasisKind::Exact;
    for s in specs {
        atoms.extend(s.atoms.iter().cloned());
        pairs.extend(s.pairs());
        basis.extend(s.basis.iter().cloned());
        kind = weakest(kind, s.basis_kind);
    }
    SymbolicSpectrum::new(atoms, &pairs, basis, kind)
}

fn atom_labels(specs: &[SymbolicSpectrum]) -> BTreeSet<String> {
    specs.iter().flat_map(|s| s.labels()).collect()
}

fn limit_atom(label: &str, provenance: &str) -> SymbolicAtom {
    SymbolicAtom { label: label.into(), kind: AtomKind::ChainLimit, provenance: provenance.into() }
}

/// Chain `B₀ ⇛ B₁ ⇛ …` running through `prefix` once and then `cycle` forever.
///
/// The limit atom lies below exactly the atoms occurring in infinitely many
/// blocks, which for an eventually periodic chain are those of the cycle. Its
/// basic neighborhoods are `{limit} ∪ ⋃_{j ≥ N} ASpec(B_j)`.
pub fn predict_chain_pattern(
    prefix: &[SymbolicSpectrum],
    cycle: &[SymbolicSpectrum],
    limit: &str,
    provenance: &str,
) -> Result<SymbolicSpectrum, PredictError> {
    if prefix.is_empty() && cycle.is_empty() {
        return Err(PredictError::EmptyChain);
    }
    let all: Vec<SymbolicSpectrum> = prefix.iter().chain(cycle).cloned().collect();
    let union = predict_disjoint_union(&all)?;
    if cycle.is_empty() {
        return Ok(union);
    }
    let recurring = atom_labels(cycle);
    let mut atoms = union.atoms.clone();
    atoms.push(limit_atom(limit, provenance));
    let mut pairs = union.pairs();
    pairs.extend(recurring.iter().map(|b| (limit.to_string(), b.clone())));
    let mut basis = union.basis.clone();
    for n in 0..=prefix.len() {
        let mut tail = atom_labels(&prefix[n..]);
        tail.extend(recurring.iter().cloned());
        tail.insert(limit.to_string());
        basis.push(tail);
    }
    SymbolicSpectrum::new(atoms, &pairs, basis, union.basis_kind)
}

/// Finite chain of `blocks`, or with `infinite` the blocks repeated forever.
pub fn predict_chain(blocks: &[SymbolicSpectrum], infinite: bool) -> Result<SymbolicSpectrum, PredictError> {
    if blocks.is_empty() {
        return Err(PredictError::EmptyChain);
    }
    if infinite {
        predict_chain_pattern(&[], blocks, "chain∞", "chain")
    } else {
        predict_chain_pattern(blocks, &[], "chain∞", "chain")
    }
}

/// The first blocks of a chain that is not eventually periodic.
///
/// `recurring` names the atoms that occur in infinitely many blocks of the
/// whole chain. Tail neighborhoods of the limit are cut at the window, so each
/// still contains the last block.
pub fn predict_chain_window(
    blocks: &[SymbolicSpectrum],
    recurring: &BTreeSet<String>,
    limit: &str,
    provenance: &str,
) -> Result<SymbolicSpectrum, PredictError> {
    if blocks.is_empty() {
        return Err(PredictError::EmptyChain);
    }
    let union = predict_disjoint_union(blocks)?;
    let mut atoms = union.atoms.clone();
    atoms.push(limit_atom(limit, provenance));
    let mut pairs = union.pairs();
    pairs.extend(recurring.iter().map(|b| (limit.to_string(), b.clone())));
    let mut basis = union.basis.clone();
    for n in 0..blocks.len() {
        let mut tail = atom_labels(&blocks[n..]);
        tail.insert(limit.to_string());
        basis.push(tail);
    }
    SymbolicSpectrum::new(atoms, &pairs, basis, weakest(union.basis_kind, BasisKind::Window(blocks.len())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealizationMode {
    Acc,
    General,
}

impl std::str::FromStr for RealizationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "acc" => Ok(RealizationMode::Acc),
            "general" => Ok(RealizationMode::General),
            other => Err(format!("unknown mode {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationPrediction {
    /// Spectrum of the constructed category before any quotient.
    pub pre_quotient: SymbolicSpectrum,
    /// The spectrum claimed to be isomorphic to the poset.
    pub spectrum: SymbolicSpectrum,
    /// Poset element to atom label.
    pub witness: BTreeMap<String, String>,
}

fn acc_spectrum(poset: &Poset, p: &str, memo: &mut BTreeMap<String, SymbolicSpectrum>) -> Result<SymbolicSpectrum, PredictError> {
    if let Some(s) = memo.get(p) {
        return Ok(s.clone());
    }
    let js = poset.j(p).expect("element of the poset");
    let label = acc_label(poset, p);
    let s = if js.is_empty() {
        SymbolicSpectrum::point(&label, AtomKind::Simple, &format!("acc:{p}"))
    } else {
        // Rounds have size min(i, k - 1) + 1, so from round k - 1 on each round is all of J(p).
        let k = js.len();
        let seq = acc_block_sequence(&js, 1 + (1..k.saturating_sub(1)).map(|i| i + 1).sum::<usize>());
        let mut prefix = Vec::new();
        for (_, _, e) in &seq {
            prefix.push(acc_spectrum(poset, e, memo)?);
        }
        let mut cycle = Vec::new();
        for e in &js {
            cycle.push(acc_spectrum(poset, e, memo)?);
        }
        predict_chain_pattern(&prefix, &cycle, &label, &format!("acc:{p}"))?
    };
    memo.insert(p.to_string(), s.clone());
    Ok(s)
}

/// Symbolic spectrum of the realization of `poset`.
pub fn predict_realization(poset: &Poset, mode: RealizationMode) -> Result<RealizationPrediction, PredictError> {
    match mode {
        RealizationMode::Acc => {
            let mut memo = BTreeMap::new();
            let mut parts = Vec::new();
            let mut witness = BTreeMap::new();
            for p in poset.elements() {
                parts.push(acc_spectrum(poset, p, &mut memo)?);
                witness.insert(p.clone(), acc_label(poset, p));
            }
            let s = predict_disjoint_union(&parts)?;
            Ok(RealizationPrediction { pre_quotient: s.clone(), spectrum: s, witness })
        }
        RealizationMode::General => predict_general(poset),
    }
}

/// Atom of `Γ^θ`: equal to the simple `Δ^θ` exactly when `θ` is maximal.
fn general_node(poset: &Poset, t: usize) -> String {
    let p = &poset.elements()[t];
    if poset.is_maximal_idx(t) {
        general_d_label(p)
    } else {
        general_g_label(p)
    }
}

fn predict_general(poset: &Poset) -> Result<RealizationPrediction, PredictError> {
    let n = poset.len();
    let mut atoms = Vec::new();
    let mut pairs = Vec::new();
    for (t, p) in poset.elements().iter().enumerate() {
        atoms.push(SymbolicAtom { label: general_d_label(p), kind: AtomKind::Simple, provenance: format!("general:delta:{p}") });
        if !poset.is_maximal_idx(t) {
            atoms.push(SymbolicAtom { label: general_g_label(p), kind: AtomKind::ChainLimit, provenance: format!("general:gamma:{p}") });
        }
    }
    for t in 0..n {
        for t2 in 0..n {
            if t != t2 && poset.le_idx(t, t2) {
                pairs.push((general_node(poset, t), general_node(poset, t2)));
                if !poset.is_maximal_idx(t2) {
                    pairs.push((general_node(poset, t), general_d_label(&poset.elements()[t2])));
                }
            }
        }
    }
    let pre = SymbolicSpectrum::alexandroff(atoms, &pairs, BasisKind::OrderOnly)?;
    let phi: BTreeSet<String> = (0..n).filter(|&t| !poset.is_maximal_idx(t)).map(|t| general_d_label(&poset.elements()[t])).collect();
    let keep = pre.labels().into_iter().filter(|x| !phi.contains(x)).collect();
    let post = pre.restrict(&keep)?;
    let witness = (0..n).map(|t| (poset.elements()[t].clone(), general_node(poset, t))).collect();
    Ok(RealizationPrediction { pre_quotient: pre, spectrum: post, witness })
}

/// One family member designated to absorb an atom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionClaim {
    pub atom: String,
    pub member: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoAtomPrediction {
    pub pre_quotient: SymbolicSpectrum,
    pub post_quotient: SymbolicSpectrum,
    pub claims: Vec<AbsorptionClaim>,
}

/// Every atom of the no-atom construction is represented by a noetherian
/// module, so the quotient by the noetherian-generated subcategory has empty
/// spectrum. Within the window the atoms are the loop simples, one per index.
pub fn predict_noatom(trunc: TruncationSpec) -> Result<NoAtomPrediction, PredictError> {
    let lo = trunc.window.0.max(0);
    if lo > trunc.window.1 {
        return Err(QuiverError::DepthTooSmall(trunc.depth).into());
    }
    let idx: Vec<u64> = (lo as u64..=trunc.window.1 as u64).collect();
    let atoms: Vec<SymbolicAtom> =
        idx.iter().map(|&i| SymbolicAtom { label: noatom_label(i), kind: AtomKind::Simple, provenance: format!("noatom:loop:{i}") }).collect();
    let basis = atoms.iter().map(|a| set(&[a.label.as_str()])).collect();
    let pre = SymbolicSpectrum::new(atoms, &[], basis, BasisKind::Window(idx.len()))?;
    let claims =
        idx.iter().map(|&i| AbsorptionClaim { atom: noatom_label(i), member: format!("loop{}", crate::quiver::tag(&[i.to_string()])) }).collect();
    Ok(NoAtomPrediction { pre_quotient: pre, post_quotient: SymbolicSpectrum::empty(), claims })
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiffReport {
    /// `(symbolic label, brute label)`.
    pub matched: Vec<(String, String)>,
    /// Symbolic atoms without a brute counterpart; chain limits always land here.
    pub missing_in_brute: Vec<String>,
    pub unexpected: Vec<String>,
    pub order_violations: Vec<String>,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.unexpected.is_empty() && self.order_violations.is_empty()
    }

    pub fn matched_symbolic(&self) -> BTreeSet<String> {
        self.matched.iter().map(|(s, _)| s.clone()).collect()
    }
}

fn descriptor_module(g: &GeneratedQuiver, vertices: &[String], field: Field) -> Result<FdModule, PredictError> {
    Ok(module_of_quiver(&g.quiver.full_subquiver(vertices)?, field))
}

/// Matches brute atoms of a truncation against the symbolic atoms through the
/// generator's atom table.
pub fn crosscheck(sym: &SymbolicSpectrum, g: &GeneratedQuiver, field: Field, opts: AtomOptions) -> Result<DiffReport, PredictError> {
    let brute = spectrum(&g.quiver, field, opts)?;
    crosscheck_report(sym, g, &brute, field, opts)
}

pub fn crosscheck_report(
    sym: &SymbolicSpectrum,
    g: &GeneratedQuiver,
    brute: &SpectrumReport,
    field: Field,
    opts: AtomOptions,
) -> Result<DiffReport, PredictError> {
    let mut reps: Vec<(String, FdModule)> = Vec::new();
    for (label, d) in &g.atom_table {
        if let (Some(r), Some(_)) = (&d.representative, sym.atom(label)) {
            reps.push((label.clone(), descriptor_module(g, r, field)?));
        }
    }
    let mut report = DiffReport::default();
    for a in brute.atoms.atoms() {
        let s = a.representative.as_ref().expect("brute atoms have representatives");
        let mut hit = None;
        for (label, h) in &reps {
            if !h.is_zero() && is_monoform(h, opts)? && has_common_nonzero_subobject(s, h, opts)? {
                hit = Some(label.clone());
                break;
            }
        }
        match hit {
            Some(l) => report.matched.push((l, a.label.clone())),
            None => report.unexpected.push(a.label.clone()),
        }
    }
    let seen = report.matched_symbolic();
    report.missing_in_brute = sym.labels().into_iter().filter(|l| !seen.contains(l)).collect();
    for (s1, b1) in &report.matched {
        for (s2, b2) in &report.matched {
            if s1 != s2 && sym.order.le(s1, s2) != brute.order.le(b1, b2) {
                report.order_violations.push(format!("{s1} <= {s2}: symbolic {}, brute {}", sym.order.le(s1, s2), brute.order.le(b1, b2)));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AbsorptionReport {
    /// `(brute atom, absorbing family member)`.
    pub absorbed: Vec<(String, String)>,
    pub unabsorbed: Vec<String>,
}

/// Checks that every brute atom of a truncation is the class of a monoform
/// member of the generator's noetherian family.
pub fn absorption(g: &GeneratedQuiver, field: Field, opts: AtomOptions) -> Result<AbsorptionReport, PredictError> {
    let brute = spectrum(&g.quiver, field, opts)?;
    let family = g.noetherian_family.clone().unwrap_or_default();
    let mut members = Vec::new();
    for m in &family {
        let h = descriptor_module(g, &m.vertices, field)?;
        if !h.is_zero() && is_monoform(&h, opts)? {
            members.push((m.label.clone(), h));
        }
    }
    let mut out = AbsorptionReport::default();
    for a in brute.atoms.atoms() {
        let s = a.representative.as_ref().expect("brute atoms have representatives");
        let mut hit = None;
        for (label, h) in &members {
            if has_common_nonzero_subobject(s, h, opts)? {
                hit = Some(label.clone());
                break;
            }
        }
        match hit {
            Some(l) => out.absorbed.push((a.label.clone(), l)),
            None => out.unabsorbed.push(a.label.clone()),
        }
    }
    Ok(out)
}

fn delta_label(i: usize) -> String {
    format!("Delta[{i}]")
}

fn delta_point(i: usize) -> SymbolicSpectrum {
    SymbolicSpectrum::point(&delta_label(i), AtomKind::Simple, &format!("loop point {i}"))
}

/// Symbolic spectrum of a named preset, materializing `n` members of each infinite family.
pub fn predict_preset(name: &str, n: usize) -> Result<SymbolicSpectrum, PredictError> {
    let n = n.max(1);
    match name {
        "infinite-chain" => {
            let point = SymbolicSpectrum::point("delta", AtomKind::Simple, "point");
            predict_chain(&[point], true)
        }
        "aass-vs-asupp" => {
            let beta = SymbolicSpectrum::point("beta", AtomKind::Simple, "point");
            let g = predict_chain_pattern(&[], std::slice::from_ref(&beta), "alpha", "chain of points")?;
            predict_chain(&[g, beta], false)
        }
        "no-minimal-atom" | "no-dcc" => {
            let p = descending_poset(n, name == "no-dcc");
            Ok(predict_realization(&p, RealizationMode::Acc)?.spectrum)
        }
        "max-not-open" => {
            let mut blocks = Vec::new();
            for i in 0..n {
                blocks.push(predict_chain_pattern(&[], &[delta_point(i)], &format!("Gamma[{i}]"), &format!("repeated loop point {i}"))?);
            }
            predict_chain_window(&blocks, &BTreeSet::new(), "Gamma", "chain of distinct blocks")
        }
        "min-not-closed" => {
            // Block k is the tail Δ^k ⇛ Δ^(k+1) ⇛ …; all blocks share the limit atom.
            let mut blocks = Vec::new();
            for k in 0..n {
                let ds: Vec<SymbolicSpectrum> = (k..k + n).map(delta_point).collect();
                blocks.push(predict_chain_window(&ds, &BTreeSet::new(), "GammaP", "chain of distinct loop points")?);
            }
            predict_chain_window(&blocks, &set(&["GammaP"]), "Gamma", "chain of shifted tails")
        }
        other => Err(PredictError::UnknownPreset(other.to_string())),
    }
}

/// Symbolic window used to crosscheck a preset truncated at `depth`.
pub fn preset_window(name: &str, depth: usize) -> usize {
    match name {
        "no-minimal-atom" | "no-dcc" => PRESET_WINDOW,
        _ => depth.max(1),
    }
}

/// Named property of a preset's symbolic spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Every atom of window `n` has a strictly smaller atom in window `n + 1`.
pub fn check_no_minimal(small: &SymbolicSpectrum, big: &SymbolicSpectrum) -> PropertyCheck {
    let bad: Vec<String> = small.labels().into_iter().filter(|x| !big.labels().iter().any(|y| y != x && big.order.le(y, x))).collect();
    PropertyCheck { name: "no minimal atom".into(), holds: bad.is_empty() && !small.is_empty(), detail: format!("without smaller atom: {bad:?}") }
}

/// A strictly descending chain of length at least 4 that keeps growing with the window.
pub fn check_no_dcc(small: &SymbolicSpectrum, big: &SymbolicSpectrum) -> PropertyCheck {
    let c = small.longest_descending_chain();
    let c2 = big.longest_descending_chain();
    let preserved = c.windows(2).all(|w| big.atom(&w[0]).is_some() && big.atom(&w[1]).is_some() && big.order.le(&w[1], &w[0]));
    PropertyCheck {
        name: "no descending chain condition".into(),
        holds: c.len() >= 4 && c2.len() > c.len() && preserved,
        detail: format!("chain {c:?}, next window length {}", c2.len()),
    }
}

pub fn check_maximal_not_open(s: &SymbolicSpectrum) -> PropertyCheck {
    let m = s.maximal();
    PropertyCheck { name: "maximal atoms not open".into(), holds: !s.is_open(&m), detail: format!("maximal: {m:?}") }
}

pub fn check_minimal_not_closed(s: &SymbolicSpectrum) -> PropertyCheck {
    let m = s.minimal();
    PropertyCheck { name: "minimal atoms not closed".into(), holds: !s.is_closed(&m), detail: format!("minimal: {m:?}") }
}

/// The properties a preset is built to exhibit, checked at window `n`.
pub fn preset_properties(name: &str, n: usize) -> Result<Vec<PropertyCheck>, PredictError> {
    let s = predict_preset(name, n)?;
    Ok(match name {
        "no-minimal-atom" => vec![check_no_minimal(&s, &predict_preset(name, n + 1)?)],
        "no-dcc" => vec![check_no_dcc(&s, &predict_preset(name, n + 1)?)],
        "max-not-open" => vec![check_maximal_not_open(&s)],
        "min-not-closed" => vec![check_minimal_not_closed(&s)],
        "infinite-chain" => {
            let ok = s.order.le("chain∞", "delta") && s.len() == 2;
            vec![PropertyCheck { name: "limit below the point".into(), holds: ok, detail: format!("{:?}", s.order.strict_pairs()) }]
        }
        "aass-vs-asupp" => {
            let ok = s.labels() == ["alpha", "beta"] && s.order.le("alpha", "beta");
            vec![PropertyCheck { name: "two atoms alpha < beta".into(), holds: ok, detail: format!("{:?}", s.labels()) }]
        }
        _ => Vec::new(),
    })
}

/// Every preset name with its symbolic properties at the default window.
pub fn all_preset_properties() -> Result<Vec<(String, Vec<PropertyCheck>)>, PredictError> {
    PRESETS.iter().map(|p| Ok((p.to_string(), preset_properties(p, PRESET_WINDOW)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{gen_realization_acc, gen_realization_general, preset};

    fn pt(l: &str) -> SymbolicSpectrum {
        SymbolicSpectrum::point(l, AtomKind::Simple, l)
    }

    fn diamond() -> Poset {
        Poset::new(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap()
    }

    #[test]
    fn union_examples() {
        let u = predict_disjoint_union(&[pt("x"), pt("y")]).unwrap();
        assert_eq!(u.len(), 2);
        assert!(u.order().strict_pairs().is_empty());
        assert_eq!(predict_disjoint_union(&[pt("x"), pt("x")]).unwrap().len(), 1);
        assert!(predict_disjoint_union(&[]).unwrap().is_empty());
    }

    #[test]
    fn chain_examples() {
        let c = predict_chain(&[pt("x")], true).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.order().le("chain∞", "x") && !c.order().le("x", "chain∞"));
        assert!(c.minimal().contains("chain∞"));
        let f = predict_chain(&[pt("x"), pt("x"), pt("x")], false).unwrap();
        assert_eq!(f.labels(), vec!["x"]);
        let ab = predict_chain(&[pt("a"), pt("b")], true).unwrap();
        assert!(ab.order().le("chain∞", "a") && ab.order().le("chain∞", "b"));
        let pre = predict_chain_pattern(&[pt("a")], &[pt("b")], "L", "").unwrap();
        assert!(!pre.order().le("L", "a") && pre.order().le("L", "b"));
        assert_eq!(predict_chain(&[], true), Err(PredictError::EmptyChain));
    }

    #[test]
    fn acc_realization_is_isomorphic() {
        for p in [Poset::antichain(&["p"]), Poset::chain(&["p0", "p1"]), diamond()] {
            let r = predict_realization(&p, RealizationMode::Acc).unwrap();
            assert!(r.spectrum.order().isomorphism(&p, 8).unwrap().is_some());
            for (e, l) in &r.witness {
                let i = p.index_of(e).unwrap();
                assert_eq!(r.spectrum.atom(l).unwrap().kind == AtomKind::Simple, p.is_maximal_idx(i));
            }
        }
        let two = predict_realization(&Poset::chain(&["p0", "p1"]), RealizationMode::Acc).unwrap();
        assert!(two.spectrum.order().le("chain(p0)", "simple(p1)"));
    }

    #[test]
    fn general_realization_is_isomorphic() {
        for p in [Poset::antichain(&["p"]), Poset::chain(&["p0", "p1"]), diamond()] {
            let r = predict_realization(&p, RealizationMode::General).unwrap();
            assert_eq!(r.spectrum.len(), p.len());
            let w = r.spectrum.order().isomorphism(&p, 8).unwrap();
            assert!(w.is_some());
            let removed = r.pre_quotient.len() - r.spectrum.len();
            assert_eq!(removed, p.len() - p.maximal().len());
            for x in r.pre_quotient.labels() {
                if !r.spectrum.labels().contains(&x) {
                    assert!(r.pre_quotient.maximal().contains(&x));
                }
            }
        }
    }

    #[test]
    fn crosscheck_examples() {
        let f = Field::GF2;
        let o = AtomOptions::default();
        let p = Poset::chain(&["p0", "p1"]);
        let sym = predict_realization(&p, RealizationMode::Acc).unwrap().spectrum;
        let g = gen_realization_acc(&p, TruncationSpec::depth(3)).unwrap();
        let d = crosscheck(&sym, &g, f, o).unwrap();
        assert_eq!(d.matched_symbolic(), set(&["simple(p1)"]));
        assert_eq!(d.missing_in_brute, vec!["chain(p0)".to_string()]);
        assert!(d.is_clean());

        let mut bad = g.clone();
        bad.atom_table.get_mut("simple(p1)").unwrap().representative = Some(vec!["p0/0/v".into(), "p0/1/v".into()]);
        let d = crosscheck(&sym, &bad, f, o).unwrap();
        assert!(!d.unexpected.is_empty());

        let r = predict_realization(&diamond(), RealizationMode::General).unwrap();
        let g = gen_realization_general(&diamond(), TruncationSpec::new(1, 0, 0)).unwrap();
        let d = crosscheck(&r.pre_quotient, &g, f, o).unwrap();
        assert!(d.is_clean(), "{d:?}");
        assert_eq!(d.matched.len(), 4);
    }

    #[test]
    fn loops_chain_matches_its_union() {
        let blocks: Vec<crate::quiver::ColoredQuiver> = (0..3).map(|i| crate::quiver::ColoredQuiver::loop_point("v", &format!("c{i}"))).collect();
        let mut g = crate::quiver::chain(&blocks);
        for i in 0..3 {
            g.atom_table.insert(
                format!("L{i}"),
                crate::quiver::AtomDescriptor {
                    kind: "simple".into(),
                    vertices: vec![format!("{i}/v")],
                    representative: Some(vec![format!("{i}/v")]),
                },
            );
        }
        let sym = predict_chain(&[pt("L0"), pt("L1"), pt("L2")], false).unwrap();
        let d = crosscheck(&sym, &g, Field::GF2, AtomOptions::default()).unwrap();
        assert_eq!(d.matched.len(), 3);
        assert!(d.missing_in_brute.is_empty() && d.is_clean());
    }

    #[test]
    fn noatom_prediction() {
        for d in 1..=3 {
            let t = TruncationSpec::new(d, 0, d as i64);
            let p = predict_noatom(t).unwrap();
            assert!(p.post_quotient.is_empty());
            assert!(!p.pre_quotient.is_empty());
            let g = crate::quiver::gen_noatom(t).unwrap();
            let a = absorption(&g, Field::GF2, AtomOptions::default()).unwrap();
            assert!(a.unabsorbed.is_empty());
            let members: BTreeSet<&str> = g.noetherian_family.as_ref().unwrap().iter().map(|m| m.label.as_str()).collect();
            assert!(p.claims.iter().all(|c| members.contains(c.member.as_str())));
            assert!(crosscheck(&p.pre_quotient, &g, Field::GF2, AtomOptions::default()).unwrap().is_clean());
        }
    }

    #[test]
    fn preset_properties_hold() {
        for (name, checks) in all_preset_properties().unwrap() {
            for c in checks {
                assert!(c.holds, "{name}: {} ({})", c.name, c.detail);
            }
        }
    }

    #[test]
    fn presets_crosscheck_clean() {
        for name in PRESETS {
            for depth in 1..=3 {
                let sym = predict_preset(name, preset_window(name, depth)).unwrap();
                let g = preset(name, depth).unwrap();
                let d = crosscheck(&sym, &g, Field::GF2, AtomOptions::default()).unwrap();
                assert!(d.is_clean(), "{name} at {depth}: {d:?}");
            }
        }
    }

    #[test]
    fn literal_min_not_closed_fails() {
        // With identical blocks Γ' the limit sits below every Δ^i and is the only minimal atom.
        let n = 4;
        let ds: Vec<SymbolicSpectrum> = (0..n).map(delta_point).collect();
        let gp = predict_chain_window(&ds, &BTreeSet::new(), "GammaP", "").unwrap();
        let all: BTreeSet<String> = gp.labels().into_iter().collect();
        let literal = predict_chain_pattern(&[], &[gp], "Gamma", "").unwrap();
        assert!(literal.labels().iter().all(|x| literal.order().le("Gamma", x)));
        assert_eq!(literal.minimal(), set(&["Gamma"]));
        assert!(literal.is_closed(&literal.minimal()));
        assert!(all.len() == n + 1);
    }

    #[test]
    fn localize_symbolic() {
        let c = predict_chain(&[pt("x")], true).unwrap();
        assert_eq!(c.localize("x").unwrap().len(), 2);
        assert_eq!(c.localize("chain∞").unwrap().labels(), vec!["chain∞"]);
    }

    #[test]
    fn json_round_trip() {
        let s = predict_preset("min-not-closed", 3).unwrap();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(SymbolicSpectrum::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), s);
    }
}
