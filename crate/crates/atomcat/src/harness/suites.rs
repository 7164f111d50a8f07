//! Randomized invariant suites. Every case is independent; cases run on the
//! rayon pool and results are collected in case order.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::random::{random_poset, random_quiver_with, rng};
use crate::atomspec::{
    aass, aass_by_definition, asupp, asupp_by_definition, is_monoform, is_uniform, spectrum, spectrum_by_definition, AtomOptions, AtomSet,
    SpectrumReport,
};
use crate::gf::{Field, Subspace};
use crate::linmod::{complete_lattice, is_essential, module_of_quiver, quotient, structure_report, submodule_as_module, subquotient, FdModule};
use crate::ordertop::{alexandroff_of_poset, is_kolmogorov, poset_of_topology};
use crate::quiver::ColoredQuiver;
use crate::Error;

pub const CORE_SUITES: [&str; 12] = [
    "monoform-heredity",
    "monoform-uniform",
    "aass-in-asupp",
    "aass-nonempty",
    "uniform-aass-singleton",
    "asupp-ses-additivity",
    "aass-sandwich",
    "essential-aass",
    "monoform-exclusion",
    "kolmogorov",
    "singleton-open-iff-simple",
    "fast-vs-definition",
];

pub const ORDER_SUITES: [&str; 3] = ["alexandroff-roundtrip", "alexandroff-kolmogorov", "alexandroff-flags"];

/// Names accepted by [`run_suite`].
pub const SUITE_NAMES: [&str; 3] = ["core", "order", "all"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub violations: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.cases > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteParams {
    pub quivers: usize,
    pub max_vertices: usize,
    pub max_colors: usize,
    pub density: f64,
    /// Lattice pairs and submodules sampled per quiver, on top of `0 ⊂ M`.
    pub samples: usize,
    pub posets: usize,
    pub max_poset: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { quivers: 200, max_vertices: 5, max_colors: 3, density: 0.2, samples: 12, posets: 100, max_poset: 5 }
    }
}

#[derive(Debug, Default)]
struct Tally(BTreeMap<&'static str, (usize, Vec<String>)>);

impl Tally {
    fn record(&mut self, suite: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let e = self.0.entry(suite).or_default();
        e.0 += 1;
        if !ok {
            e.1.push(detail());
        }
    }

    fn merge(&mut self, other: Tally) {
        for (k, (n, v)) in other.0 {
            let e = self.0.entry(k).or_default();
            e.0 += n;
            e.1.extend(v);
        }
    }

    fn outcomes(mut self, names: &[&'static str]) -> Vec<SuiteOutcome> {
        names
            .iter()
            .map(|&n| {
                let (cases, violations) = self.0.remove(n).unwrap_or_default();
                SuiteOutcome { name: n.to_string(), cases, violations }
            })
            .collect()
    }
}

pub fn run_suite(name: &str, cfg: &RunConfig, params: SuiteParams) -> Result<Vec<SuiteOutcome>, Error> {
    match name {
        "core" => core_suites(cfg, params),
        "order" => Ok(order_suites(cfg.seed, params)),
        "all" => {
            let mut v = core_suites(cfg, params)?;
            v.extend(order_suites(cfg.seed, params));
            Ok(v)
        }
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

/// The module invariants over `params.quivers` random quivers.
pub fn core_suites(cfg: &RunConfig, params: SuiteParams) -> Result<Vec<SuiteOutcome>, Error> {
    let mut master = rng(cfg.seed);
    let cases: Vec<(ColoredQuiver, u64)> = (0..params.quivers)
        .map(|_| (random_quiver_with(&mut master, params.max_vertices, params.max_colors, params.density), master.gen()))
        .collect();
    let (field, opts) = (cfg.field(), cfg.atom_options());
    let tallies: Vec<Tally> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (q, sub))| {
            check_quiver(q, field, opts, &mut rng(*sub), params.samples).map_err(|e| (i, e)).map(|mut t| {
                for (_, v) in t.0.values_mut() {
                    for d in v.iter_mut() {
                        *d = format!("case {i}: {d}; quiver {}", serde_json::to_string(q).unwrap_or_default());
                    }
                }
                t
            })
        })
        .collect::<Result<_, _>>()
        .map_err(|(_, e)| e)?;
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t);
    }
    Ok(total.outcomes(&CORE_SUITES))
}

fn sample<T: Clone>(items: &[T], k: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v.truncate(k);
    v
}

fn nonzero_submodules(h: &FdModule, opts: AtomOptions) -> Result<Vec<Subspace>, Error> {
    Ok(complete_lattice(h, opts.budget)?.members.into_iter().filter(|x| !x.is_zero()).collect())
}

/// Same points, flags and generated topology; the bases themselves may differ.
fn same_spectrum(a: &SpectrumReport, b: &SpectrumReport) -> Result<bool, Error> {
    Ok(a.labels() == b.labels() && a.flags == b.flags && a.topology()? == b.topology()?)
}

/// Checks every core invariant on `M_Γ` and on sampled subquotients of it.
fn check_quiver(q: &ColoredQuiver, field: Field, opts: AtomOptions, rng: &mut ChaCha8Rng, samples: usize) -> Result<Tally, Error> {
    let cap = opts.iso_cap;
    let mut t = Tally::default();
    let m = module_of_quiver(q, field);
    let lattice = complete_lattice(&m, opts.budget)?.members;
    let asupp_m = asupp_by_definition(&m, opts)?;
    let aass_m = aass_by_definition(&m, opts)?;

    t.record("aass-in-asupp", aass_m.is_subset_of(&asupp_m, cap)?, || format!("aass {:?} vs asupp {:?}", aass_m.labels(), asupp_m.labels()));
    t.record("aass-nonempty", m.is_zero() || !aass_m.is_empty(), || "empty aass of a nonzero module".into());

    let fast_supp = asupp(&m, opts)?;
    let fast_ass = aass(&m, opts)?;
    t.record("fast-vs-definition", fast_supp.same_atoms(&asupp_m, cap)? && fast_ass.same_atoms(&aass_m, cap)?, || {
        format!("asupp {:?}/{:?}, aass {:?}/{:?}", fast_supp.labels(), asupp_m.labels(), fast_ass.labels(), aass_m.labels())
    });
    let fast = spectrum(q, field, opts)?;
    let slow = spectrum_by_definition(q, field, opts)?;
    t.record("fast-vs-definition", same_spectrum(&fast, &slow)?, || "spectra differ".into());
    for r in [&fast, &slow] {
        t.record("kolmogorov", r.is_kolmogorov(), || "basis does not separate points".into());
        for a in r.atoms.atoms() {
            let single: BTreeSet<String> = [a.label.clone()].into();
            let simple = match &a.representative {
                Some(rep) => structure_report(rep, opts.budget)?.is_simple,
                None => false,
            };
            let f = r.flags[&a.label];
            t.record("singleton-open-iff-simple", r.is_open(&single) == simple && f.open_point == f.represented_by_simple, || {
                format!("{}: open {} simple {}", a.label, r.is_open(&single), simple)
            });
        }
    }

    // Subquotients H = U/L for sampled pairs L ⊊ U.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, l) in lattice.iter().enumerate() {
        for (j, u) in lattice.iter().enumerate() {
            if l.dim() < u.dim() && l.is_subspace_of(u) {
                pairs.push((i, j));
            }
        }
    }
    let mut chosen = sample(&pairs, samples, rng);
    if !m.is_zero() {
        chosen.push((0, lattice.len() - 1));
    }
    for (i, j) in chosen {
        let h = subquotient(&m, &lattice[i], &lattice[j])?;
        let mono = is_monoform(&h, opts)?;
        let uniform = is_uniform(&h, opts)?;
        let subs = nonzero_submodules(&h, opts)?;
        let where_ = || format!("subquotient of dims {}/{}", lattice[j].dim(), lattice[i].dim());
        if mono {
            t.record("monoform-uniform", uniform, where_);
            for x in &subs {
                let sub = submodule_as_module(&h, x);
                t.record("monoform-heredity", is_monoform(&sub, opts)?, || format!("{}: submodule of dim {} not monoform", where_(), x.dim()));
            }
            for x in &subs {
                let qs = asupp_by_definition(&quotient(&h, x)?, opts)?;
                let mut hit = false;
                for a in qs.atoms() {
                    hit |= a.is_class_of(&h, opts)?;
                }
                t.record("monoform-exclusion", !hit, || format!("{}: own atom in asupp of quotient by dim {}", where_(), x.dim()));
            }
        }
        if uniform {
            let n = aass_by_definition(&h, opts)?.len();
            t.record("uniform-aass-singleton", n <= 1, || format!("{}: uniform with {n} associated atoms", where_()));
        }
    }

    // Short exact sequences 0 → L → M → M/L → 0.
    let mut subs = sample(&lattice, samples, rng);
    subs.push(m.zero_sub());
    subs.push(m.full_sub());
    for l in &subs {
        let lm = submodule_as_module(&m, l);
        let nm = quotient(&m, l)?;
        let (sl, sn) = (asupp_by_definition(&lm, opts)?, asupp_by_definition(&nm, opts)?);
        t.record("asupp-ses-additivity", asupp_m.same_atoms(&sl.union(&sn, cap)?, cap)?, || format!("submodule of dim {}", l.dim()));
        let (al, an) = (aass_by_definition(&lm, opts)?, aass_by_definition(&nm, opts)?);
        let upper = al.union(&an, cap)?;
        t.record("aass-sandwich", al.is_subset_of(&aass_m, cap)? && aass_m.is_subset_of(&upper, cap)?, || format!("submodule of dim {}", l.dim()));
        if !l.is_zero() && is_essential(l, &m, opts.budget)? {
            t.record("essential-aass", al.same_atoms(&aass_m, cap)?, || format!("essential submodule of dim {}", l.dim()));
        }
    }
    // The same along target-closed vertex sets, where both ends are quiver modules.
    for v in q.vertices() {
        let closed: Vec<String> = q.reachable(v).into_iter().collect();
        let (sub, rest) = q.split_by_closed(&closed)?;
        let union: AtomSet = asupp(&module_of_quiver(&sub, field), opts)?.union(&asupp(&module_of_quiver(&rest, field), opts)?, cap)?;
        t.record("asupp-ses-additivity", fast_supp.same_atoms(&union, cap)?, || format!("closed set reachable from {v}"));
    }
    Ok(t)
}

/// Alexandroff round trip and flag characterizations on random posets.
pub fn order_suites(seed: u64, params: SuiteParams) -> Vec<SuiteOutcome> {
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..params.posets {
        let p = random_poset(&mut r, params.max_poset);
        let desc = || format!("case {i}: {:?}", p.strict_pairs());
        let top = alexandroff_of_poset(&p).expect("at most 64 points");
        let back = poset_of_topology(&top);
        let again = back.as_ref().ok().and_then(|b| alexandroff_of_poset(b).ok());
        t.record("alexandroff-roundtrip", back.as_ref() == Ok(&p) && again.as_ref() == Some(&top), desc);
        t.record("alexandroff-kolmogorov", is_kolmogorov(&top), desc);
        for k in 0..p.len() {
            let ok = p.is_maximal_idx(k) == top.is_open(1 << k) && p.is_minimal_idx(k) == top.is_closed(1 << k);
            t.record("alexandroff-flags", ok, || format!("{}: element {}", desc(), p.elements()[k]));
        }
    }
    t.outcomes(&ORDER_SUITES)
}

/// One `PASS`/`FAIL` line per suite, then the violations.
pub fn render_log(outcomes: &[SuiteOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let verdict = if o.passed() { "PASS" } else { "FAIL" };
        s += &format!("{verdict} {} cases={} violations={}\n", o.name, o.cases, o.violations.len());
    }
    for o in outcomes {
        for v in &o.violations {
            s += &format!("  {}: {v}\n", o.name);
        }
    }
    s
}
