//! Monoform modules, atom supports and the atom spectrum of `A_Γ`.
//!
//! Atoms of finite-dimensional modules are classes of simple modules, so the
//! production paths work with composition factors. The `*_by_definition`
//! functions quantify over whole submodule lattices instead and exist to
//! cross-check the fast paths on small inputs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::gf::{Field, Matrix, Row, Subspace};
use crate::linmod::{
    complete_lattice, composition_series, find_proper_submodule, hom_basis, is_isomorphic, module_of_quiver, submodule_as_module, subquotient,
    FdModule, LinmodError, ModuleJson, SubmoduleSet, Tristate, DEFAULT_BUDGET, DEFAULT_ISO_CAP,
};
use crate::ordertop::{FiniteTopology, OrderError, Poset, OPEN_SET_LIMIT};
use crate::quiver::ColoredQuiver;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtomError {
    #[error("the zero module has no atoms")]
    ZeroModule,
    #[error("isomorphism undecided for modules of dimension {0}")]
    IsoUndecided(usize),
    #[error("module is not monoform")]
    NotMonoform,
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("label set is not open")]
    NotOpen,
    #[error("too many open sets to list ({0} points)")]
    TooManyOpens(usize),
    #[error(transparent)]
    Linmod(#[from] LinmodError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtomOptions {
    pub budget: usize,
    pub iso_cap: u64,
}

impl Default for AtomOptions {
    fn default() -> Self {
        AtomOptions { budget: DEFAULT_BUDGET, iso_cap: DEFAULT_ISO_CAP }
    }
}

fn relabeled(m: &FdModule) -> FdModule {
    FdModule::new(m.field(), m.dim(), (0..m.dim()).map(|i| format!("g{i}")).collect(), m.actions().clone()).expect("same shape")
}

/// Action matrices as `(color, entries)` pairs, compared lexicographically.
type SerializedActions = Vec<(String, Vec<Vec<u32>>)>;

/// Canonical form of a cyclic module.
///
/// Each generator `v` fixes a basis: `v`, then the images of basis vectors
/// in shortlex order of colors, skipping dependent ones. The form is the
/// generator whose matrices serialize least. Returns `None` for non-cyclic
/// modules or when more than `cap` generators would be scanned.
pub fn canonical_form(m: &FdModule, cap: u64) -> Option<FdModule> {
    let f = m.field();
    let d = m.dim();
    if d <= 1 {
        return Some(relabeled(m));
    }
    let total = (f.p() as u64).checked_pow(d as u32)?;
    if total - 1 > cap {
        return None;
    }
    let key = |mm: &BTreeMap<String, Matrix>| mm.iter().map(|(c, a)| (c.clone(), a.entries())).collect::<Vec<_>>();
    let mut best: Option<(SerializedActions, BTreeMap<String, Matrix>)> = None;
    let p = f.p() as u64;
    for code in 1..total {
        let mut e = vec![0u32; d];
        let mut c = code;
        for x in e.iter_mut() {
            *x = (c % p) as u32;
            c /= p;
        }
        let v = Row::from_entries(f, &e);
        let mut sub = Subspace::zero(f, d);
        sub.insert(v.clone());
        let mut basis = vec![v];
        let mut i = 0;
        while i < basis.len() && basis.len() < d {
            for a in m.actions().values() {
                let w = a.vec_mul(f, &basis[i]);
                if sub.insert(w.clone()) {
                    basis.push(w);
                }
            }
            i += 1;
        }
        if basis.len() < d {
            continue;
        }
        let aug = Subspace::span(f, 2 * d, basis.iter().enumerate().map(|(k, b)| b.concat(f, &Row::unit(f, d, k))));
        let inv = Matrix { cols: d, rows: aug.rows().iter().map(|r| r.slice(f, d, 2 * d)).collect() };
        let acts: BTreeMap<String, Matrix> = m
            .actions()
            .iter()
            .map(|(c, a)| (c.clone(), Matrix { cols: d, rows: basis.iter().map(|b| inv.vec_mul(f, &a.vec_mul(f, b))).collect() }))
            .collect();
        let k = key(&acts);
        if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
            best = Some((k, acts));
        }
    }
    let (_, acts) = best?;
    Some(FdModule::new(f, d, (0..d).map(|i| format!("g{i}")).collect(), acts).expect("same shape"))
}

fn digest(text: &str) -> String {
    use sha2::Digest;
    sha2::Sha256::digest(text.as_bytes())[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Label of a simple module from its (canonical when `canonical`) form.
fn simple_label(m: &FdModule, canonical: bool) -> String {
    if m.dim() == 1 {
        let parts: Vec<String> = m.actions().iter().map(|(c, a)| format!("{c}={}", a.get(0, 0))).collect();
        return format!("S1[{}]", parts.join(","));
    }
    let ser = serde_json::to_string(&m.to_json().actions).expect("serializable");
    let mark = if canonical { '#' } else { '?' };
    format!("S{}{mark}{}", m.dim(), digest(&format!("{}|{ser}", m.field().p())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomSource {
    /// `upper / lower` inside the module spanned by `block`, in that block's coordinates.
    Subquotient {
        block: Vec<String>,
        lower: Vec<Vec<u32>>,
        upper: Vec<Vec<u32>>,
    },
    Symbolic {
        path: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub label: String,
    /// A simple representative; `None` for atoms known only symbolically.
    pub representative: Option<FdModule>,
    /// Whether `representative` is in canonical form.
    pub canonical: bool,
    pub source: AtomSource,
}

fn rows_of(u: &Subspace) -> Vec<Vec<u32>> {
    u.rows().iter().map(Row::entries).collect()
}

/// A simple module up to isomorphism, keyed by its canonical form when available.
#[derive(Debug, Clone)]
struct SimpleKey {
    module: FdModule,
    canonical: bool,
}

impl SimpleKey {
    fn new(m: &FdModule, cap: u64) -> SimpleKey {
        match canonical_form(m, cap) {
            Some(c) => SimpleKey { module: c, canonical: true },
            None => SimpleKey { module: relabeled(m), canonical: false },
        }
    }

    fn same(&self, other: &SimpleKey, cap: u64) -> Result<bool, AtomError> {
        if self.module.dim() != other.module.dim() {
            return Ok(false);
        }
        if self.canonical && other.canonical {
            return Ok(self.module.actions() == other.module.actions());
        }
        iso(&self.module, &other.module, cap)
    }
}

fn iso(a: &FdModule, b: &FdModule, cap: u64) -> Result<bool, AtomError> {
    match is_isomorphic(a, b, cap)? {
        Tristate::Yes => Ok(true),
        Tristate::No => Ok(false),
        Tristate::Undecided => Err(AtomError::IsoUndecided(a.dim())),
    }
}

impl Atom {
    fn from_key(key: SimpleKey, source: AtomSource) -> Atom {
        Atom { label: simple_label(&key.module, key.canonical), representative: Some(key.module), canonical: key.canonical, source }
    }

    pub fn symbolic(label: impl Into<String>, path: impl Into<String>) -> Atom {
        Atom { label: label.into(), representative: None, canonical: false, source: AtomSource::Symbolic { path: path.into() } }
    }

    fn key(&self) -> Option<SimpleKey> {
        self.representative.as_ref().map(|m| SimpleKey { module: m.clone(), canonical: self.canonical })
    }

    /// Equivalence of atoms with simple representatives; symbolic atoms compare by label.
    pub fn equivalent(&self, other: &Atom, cap: u64) -> Result<bool, AtomError> {
        match (self.key(), other.key()) {
            (Some(a), Some(b)) => a.same(&b, cap),
            (None, None) => Ok(self.label == other.label),
            _ => Ok(false),
        }
    }

    /// Whether this atom is the class of the monoform module `h`.
    pub fn is_class_of(&self, h: &FdModule, opts: AtomOptions) -> Result<bool, AtomError> {
        let Some(rep) = &self.representative else { return Ok(false) };
        atom_equivalent(rep, h, opts)
    }
}

/// Atoms deduplicated under atom-equivalence, sorted by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomSet {
    atoms: Vec<Atom>,
}

impl AtomSet {
    pub fn new() -> AtomSet {
        AtomSet::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.atoms.iter().map(|a| a.label.clone()).collect()
    }

    pub fn get(&self, label: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.label == label)
    }

    pub fn find_equivalent(&self, atom: &Atom, cap: u64) -> Result<Option<&Atom>, AtomError> {
        for a in &self.atoms {
            if a.equivalent(atom, cap)? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    /// Inserts unless an equivalent atom is present; returns the stored label.
    pub fn insert(&mut self, mut atom: Atom, cap: u64) -> Result<String, AtomError> {
        if let Some(a) = self.find_equivalent(&atom, cap)? {
            return Ok(a.label.clone());
        }
        let base = atom.label.clone();
        let mut k = 2;
        while self.get(&atom.label).is_some() {
            atom.label = format!("{base}~{k}");
            k += 1;
        }
        let label = atom.label.clone();
        let pos = self.atoms.partition_point(|a| a.label < label);
        self.atoms.insert(pos, atom);
        Ok(label)
    }

    pub fn is_subset_of(&self, other: &AtomSet, cap: u64) -> Result<bool, AtomError> {
        for a in &self.atoms {
            if other.find_equivalent(a, cap)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as sets of atoms.
    pub fn same_atoms(&self, other: &AtomSet, cap: u64) -> Result<bool, AtomError> {
        Ok(self.len() == other.len() && self.is_subset_of(other, cap)?)
    }

    pub fn union(&self, other: &AtomSet, cap: u64) -> Result<AtomSet, AtomError> {
        let mut out = self.clone();
        for a in &other.atoms {
            out.insert(a.clone(), cap)?;
        }
        Ok(out)
    }
}

/// Submodule lattice of one module with cached simple layers.
struct Intervals<'a> {
    m: &'a FdModule,
    lat: SubmoduleSet,
    keys: HashMap<(usize, usize), SimpleKey>,
    cap: u64,
}

impl<'a> Intervals<'a> {
    fn new(m: &'a FdModule, opts: AtomOptions) -> Result<Intervals<'a>, AtomError> {
        Ok(Intervals { m, lat: complete_lattice(m, opts.budget)?, keys: HashMap::new(), cap: opts.cap() })
    }

    fn len(&self) -> usize {
        self.lat.len()
    }

    fn le(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.lat.members[i], &self.lat.members[j]);
        a.dim() <= b.dim() && a.is_subspace_of(b)
    }

    /// Members covering `lo` inside `[lo, hi]`.
    fn covers_above(&self, lo: usize, hi: usize) -> Vec<usize> {
        let inside: Vec<usize> = (0..self.len()).filter(|&x| x != lo && self.le(lo, x) && self.le(x, hi)).collect();
        inside.iter().copied().filter(|&x| !inside.iter().any(|&y| y != x && self.le(y, x))).collect()
    }

    fn key(&mut self, lo: usize, hi: usize) -> SimpleKey {
        if let Some(k) = self.keys.get(&(lo, hi)) {
            return k.clone();
        }
        let sq = subquotient(self.m, &self.lat.members[lo], &self.lat.members[hi]).expect("lattice members are nested");
        let k = SimpleKey::new(&sq, self.cap);
        self.keys.insert((lo, hi), k.clone());
        k
    }

    /// The unique simple layer above `lo` inside `[lo, hi]`, if `hi / lo` is uniform.
    fn socle_of(&self, lo: usize, hi: usize) -> Option<usize> {
        match self.covers_above(lo, hi).as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    /// Monoformness of `hi / lo` by the definition. A common nonzero
    /// subobject contains a simple one, and a uniform module has exactly one
    /// simple subobject, so it suffices to compare that simple with the simple
    /// subobjects of each quotient.
    fn monoform(&mut self, lo: usize, hi: usize) -> Result<bool, AtomError> {
        if lo == hi {
            return Ok(false);
        }
        let Some(s0) = self.socle_of(lo, hi) else { return Ok(false) };
        let k0 = self.key(lo, s0);
        let above: Vec<usize> = (0..self.len()).filter(|&x| x != lo && x != hi && self.le(lo, x) && self.le(x, hi)).collect();
        for x in above {
            for y in self.covers_above(x, hi) {
                let k = self.key(x, y);
                if k.same(&k0, self.cap)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Classes of the simple layers of `hi / lo`.
    fn support(&mut self, lo: usize, hi: usize, into: &mut Vec<(SimpleKey, (usize, usize))>) -> Result<(), AtomError> {
        let inside: Vec<usize> = (0..self.len()).filter(|&x| self.le(lo, x) && self.le(x, hi)).collect();
        for &x in &inside {
            for y in self.covers_above(x, hi) {
                let k = self.key(x, y);
                push_key(into, k, (x, y), self.cap)?;
            }
        }
        Ok(())
    }

    fn source(&self, lo: usize, hi: usize) -> AtomSource {
        AtomSource::Subquotient { block: self.m.labels().to_vec(), lower: rows_of(&self.lat.members[lo]), upper: rows_of(&self.lat.members[hi]) }
    }

    fn zero(&self) -> usize {
        0
    }

    fn full(&self) -> usize {
        self.len() - 1
    }
}

fn push_key<T>(keys: &mut Vec<(SimpleKey, T)>, k: SimpleKey, tag: T, cap: u64) -> Result<bool, AtomError> {
    for (e, _) in keys.iter() {
        if e.same(&k, cap)? {
            return Ok(false);
        }
    }
    keys.push((k, tag));
    Ok(true)
}

impl AtomOptions {
    fn cap(&self) -> u64 {
        self.iso_cap
    }
}

/// Whether some nonzero submodule of `m` is isomorphic to a submodule of `n`.
///
/// Such a pair restricts to a pair of isomorphic simple submodules, so only
/// minimal nonzero lattice members are compared.
pub fn has_common_nonzero_subobject(m: &FdModule, n: &FdModule, opts: AtomOptions) -> Result<bool, AtomError> {
    if m.is_zero() || n.is_zero() {
        return Ok(false);
    }
    let simples = |x: &FdModule| -> Result<Vec<SimpleKey>, AtomError> {
        let lat = complete_lattice(x, opts.budget)?;
        let mut keys: Vec<(SimpleKey, ())> = Vec::new();
        for s in lat.minimal_nonzero() {
            push_key(&mut keys, SimpleKey::new(&submodule_as_module(x, s), opts.cap()), (), opts.cap())?;
        }
        Ok(keys.into_iter().map(|(k, _)| k).collect())
    };
    let (sm, sn) = (simples(m)?, simples(n)?);
    for a in &sm {
        for b in &sn {
            if a.same(b, opts.cap())? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn is_monoform(h: &FdModule, opts: AtomOptions) -> Result<bool, AtomError> {
    if h.is_zero() {
        return Err(AtomError::ZeroModule);
    }
    let mut iv = Intervals::new(h, opts)?;
    let (lo, hi) = (iv.zero(), iv.full());
    iv.monoform(lo, hi)
}

/// Nonzero submodules pairwise intersect nontrivially, i.e. there is a single minimal one.
pub fn is_uniform(u: &FdModule, opts: AtomOptions) -> Result<bool, AtomError> {
    if u.is_zero() {
        return Err(AtomError::ZeroModule);
    }
    Ok(complete_lattice(u, opts.budget)?.minimal_nonzero().len() == 1)
}

pub fn atom_equivalent(h1: &FdModule, h2: &FdModule, opts: AtomOptions) -> Result<bool, AtomError> {
    if h1.is_zero() || h2.is_zero() || !is_monoform(h1, opts)? || !is_monoform(h2, opts)? {
        return Err(AtomError::NotMonoform);
    }
    has_common_nonzero_subobject(h1, h2, opts)
}

fn atoms_from_keys(keys: Vec<(SimpleKey, AtomSource)>, cap: u64) -> Result<AtomSet, AtomError> {
    let mut out = AtomSet::new();
    for (k, src) in keys {
        out.insert(Atom::from_key(k, src), cap)?;
    }
    Ok(out)
}

/// Simple layers of a composition series of `m`, one per isomorphism class.
fn factor_keys(m: &FdModule, block: &[String], opts: AtomOptions) -> Result<Vec<(SimpleKey, AtomSource)>, AtomError> {
    let series = composition_series(m)?;
    let mut keys = Vec::new();
    for w in series.windows(2) {
        let s = subquotient(m, &w[0], &w[1])?;
        let src = AtomSource::Subquotient { block: block.to_vec(), lower: rows_of(&w[0]), upper: rows_of(&w[1]) };
        push_key(&mut keys, SimpleKey::new(&s, opts.cap()), src, opts.cap())?;
    }
    Ok(keys)
}

/// `ASupp M`. A monoform subquotient has a simple subobject in its class,
/// and every simple subquotient is isomorphic to a composition factor, so the
/// atoms are the classes of composition factors.
pub fn asupp(m: &FdModule, opts: AtomOptions) -> Result<AtomSet, AtomError> {
    atoms_from_keys(factor_keys(m, m.labels(), opts)?, opts.cap())
}

/// `AAss M`: composition factor classes admitting a nonzero map into `m`.
/// A nonzero map out of a simple module is injective, and a monoform
/// submodule shares its class with its simple socle.
pub fn aass(m: &FdModule, opts: AtomOptions) -> Result<AtomSet, AtomError> {
    let mut keys = Vec::new();
    for (k, _) in factor_keys(m, m.labels(), opts)? {
        let homs = hom_basis(&k.module, m)?;
        if let Some(phi) = homs.first() {
            let image = m.span(phi.rows.iter().cloned());
            let src = AtomSource::Subquotient { block: m.labels().to_vec(), lower: Vec::new(), upper: rows_of(&image) };
            keys.push((k, src));
        }
    }
    atoms_from_keys(keys, opts.cap())
}

fn by_definition(m: &FdModule, opts: AtomOptions, only_subobjects: bool) -> Result<AtomSet, AtomError> {
    if m.is_zero() {
        return Ok(AtomSet::new());
    }
    let mut iv = Intervals::new(m, opts)?;
    let mut found: Vec<(SimpleKey, AtomSource)> = Vec::new();
    let n = iv.len();
    let lows: Vec<usize> = if only_subobjects { vec![iv.zero()] } else { (0..n).collect() };
    for lo in lows {
        for hi in 0..n {
            if hi == lo || !iv.le(lo, hi) {
                continue;
            }
            let Some(s0) = iv.socle_of(lo, hi) else { continue };
            let k = iv.key(lo, s0);
            let mut known = false;
            for (e, _) in &found {
                if e.same(&k, opts.cap())? {
                    known = true;
                    break;
                }
            }
            if !known && iv.monoform(lo, hi)? {
                let src = iv.source(lo, s0);
                found.push((k, src));
            }
        }
    }
    atoms_from_keys(found, opts.cap())
}

/// `ASupp M` by enumerating monoform subquotients of the lattice.
pub fn asupp_by_definition(m: &FdModule, opts: AtomOptions) -> Result<AtomSet, AtomError> {
    by_definition(m, opts, false)
}

/// `AAss M` by enumerating monoform submodules.
pub fn aass_by_definition(m: &FdModule, opts: AtomOptions) -> Result<AtomSet, AtomError> {
    by_definition(m, opts, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AtomFlags {
    pub maximal: bool,
    pub minimal: bool,
    pub represented_by_simple: bool,
    pub open_point: bool,
    pub closed_point: bool,
}

/// An atom spectrum given by an open basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub field: Field,
    pub atoms: AtomSet,
    /// Basic open sets; every open set is a union of these.
    pub basis: Vec<BTreeSet<String>>,
    /// Specialization order read off the open sets.
    pub order: Poset,
    pub flags: BTreeMap<String, AtomFlags>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomJson {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub actions: Option<BTreeMap<String, Vec<Vec<u32>>>>,
    #[serde(default)]
    pub canonical: bool,
    pub source: AtomSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub p: u32,
    pub atoms: Vec<AtomJson>,
    /// All open sets, omitted when there are too many to list.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub opens: Option<Vec<Vec<String>>>,
    pub basis: Vec<Vec<String>>,
    pub order: Vec<(String, String)>,
    pub flags: BTreeMap<String, AtomFlags>,
}

impl SpectrumReport {
    /// Builds the report; the order is `x ≤ y` iff every basic open set containing `x` contains `y`.
    pub fn from_basis(field: Field, atoms: AtomSet, basis: Vec<BTreeSet<String>>) -> Result<SpectrumReport, AtomError> {
        let labels = atoms.labels();
        let known: BTreeSet<&String> = labels.iter().collect();
        for b in &basis {
            if let Some(x) = b.iter().find(|x| !known.contains(x)) {
                return Err(AtomError::UnknownAtom(x.clone()));
            }
        }
        let basis: Vec<BTreeSet<String>> = basis.into_iter().filter(|b| !b.is_empty()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut pairs = Vec::new();
        for x in &labels {
            for y in &labels {
                if x != y && basis.iter().all(|b| !b.contains(x) || b.contains(y)) {
                    if basis.iter().all(|b| !b.contains(y) || b.contains(x)) {
                        return Err(OrderError::NotKolmogorov(x.clone(), y.clone()).into());
                    }
                    pairs.push((x.clone(), y.clone()));
                }
            }
        }
        let order = Poset::new(&labels, &pairs)?;
        let mut report = SpectrumReport { field, atoms, basis, order, flags: BTreeMap::new() };
        report.flags = report.compute_flags();
        Ok(report)
    }

    fn compute_flags(&self) -> BTreeMap<String, AtomFlags> {
        let mut out = BTreeMap::new();
        for a in self.atoms.atoms() {
            let i = self.order.index_of(&a.label).expect("order covers atoms");
            let single = BTreeSet::from([a.label.clone()]);
            let rest: BTreeSet<String> = self.atoms.labels().into_iter().filter(|x| *x != a.label).collect();
            let simple = a.representative.as_ref().is_some_and(|r| matches!(find_proper_submodule(r), Ok(None)) && !r.is_zero());
            out.insert(
                a.label.clone(),
                AtomFlags {
                    maximal: self.order.is_maximal_idx(i),
                    minimal: self.order.is_minimal_idx(i),
                    represented_by_simple: simple,
                    open_point: self.is_open(&single),
                    closed_point: self.is_open(&rest),
                },
            );
        }
        out
    }

    pub fn labels(&self) -> Vec<String> {
        self.atoms.labels()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// A set is open iff it is the union of the basic sets it contains.
    pub fn is_open(&self, set: &BTreeSet<String>) -> bool {
        let mut covered = BTreeSet::new();
        for b in &self.basis {
            if b.is_subset(set) {
                covered.extend(b.iter().cloned());
            }
        }
        covered == *set
    }

    pub fn is_closed(&self, set: &BTreeSet<String>) -> bool {
        let rest: BTreeSet<String> = self.labels().into_iter().filter(|x| !set.contains(x)).collect();
        self.is_open(&rest)
    }

    pub fn is_kolmogorov(&self) -> bool {
        let labels = self.labels();
        labels.iter().enumerate().all(|(i, x)| labels[i + 1..].iter().all(|y| self.basis.iter().any(|b| b.contains(x) != b.contains(y))))
    }

    pub fn is_discrete(&self) -> bool {
        self.flags.values().all(|f| f.open_point)
    }

    /// The open sets as a finite topology; needs at most 64 atoms and few opens.
    pub fn topology(&self) -> Result<FiniteTopology, AtomError> {
        let points = self.labels();
        if points.len() > 64 {
            return Err(AtomError::TooManyOpens(points.len()));
        }
        let pos: HashMap<&String, usize> = points.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let family: Vec<u64> = self.basis.iter().map(|b| b.iter().fold(0u64, |m, x| m | 1 << pos[x])).collect();
        FiniteTopology::generated_by_unions(points.clone(), &family, OPEN_SET_LIMIT).map_err(|e| match e {
            OrderError::SizeBudgetExceeded { .. } => AtomError::TooManyOpens(points.len()),
            e => e.into(),
        })
    }

    /// Restriction to a subset of atoms with the induced topology.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> Result<SpectrumReport, AtomError> {
        let mut atoms = AtomSet::new();
        for a in self.atoms.atoms().iter().filter(|a| keep.contains(&a.label)) {
            atoms.atoms.push(a.clone());
        }
        let basis = self.basis.iter().map(|b| b.intersection(keep).cloned().collect()).collect();
        SpectrumReport::from_basis(self.field, atoms, basis)
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            p: self.field.p(),
            atoms: self
                .atoms
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    label: a.label.clone(),
                    dim: a.representative.as_ref().map(FdModule::dim),
                    actions: a.representative.as_ref().map(|r| r.to_json().actions),
                    canonical: a.canonical,
                    source: a.source.clone(),
                })
                .collect(),
            opens: self.topology().ok().map(|t| t.opens().iter().map(|&m| t.names(m)).collect()),
            basis: self.basis.iter().map(|b| b.iter().cloned().collect()).collect(),
            order: self.order.strict_pairs(),
            flags: self.flags.clone(),
        }
    }

    pub fn from_json(j: &SpectrumJson) -> Result<SpectrumReport, AtomError> {
        let field = Field::new(j.p).map_err(|e| LinmodError::Malformed(e.to_string()))?;
        let mut atoms = AtomSet::new();
        for a in &j.atoms {
            let representative = match (a.dim, &a.actions) {
                (Some(dim), Some(actions)) => Some(FdModule::from_json(&ModuleJson {
                    p: j.p,
                    dim,
                    labels: (0..dim).map(|i| format!("g{i}")).collect(),
                    actions: actions.clone(),
                })?),
                _ => None,
            };
            atoms.atoms.push(Atom { label: a.label.clone(), representative, canonical: a.canonical, source: a.source.clone() });
        }
        atoms.atoms.sort_by(|a, b| a.label.cmp(&b.label));
        let basis = j.basis.iter().map(|b| b.iter().cloned().collect()).collect();
        SpectrumReport::from_basis(field, atoms, basis)
    }

    /// Hasse diagram of the specialization order, larger atoms on top.
    pub fn to_dot(&self) -> String {
        order_dot(&self.order, |l| self.flags.get(l).is_some_and(|f| f.minimal))
    }
}

/// DOT for a Hasse diagram; edges point from the larger element down.
pub fn order_dot(order: &Poset, boxed: impl Fn(&str) -> bool) -> String {
    let mut s = String::from("digraph spectrum {\n  rankdir=BT;\n");
    for e in order.elements() {
        let shape = if boxed(e) { "box" } else { "ellipse" };
        s.push_str(&format!("  {} [shape={shape}];\n", dot_id(e)));
    }
    for (a, b) in order.covers() {
        s.push_str(&format!("  {} -> {};\n", dot_id(&a), dot_id(&b)));
    }
    s.push_str("}\n");
    s
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Strongly connected components of the arrow relation.
fn strong_components(q: &ColoredQuiver) -> Vec<Vec<String>> {
    let idx = q.vertex_index();
    let n = q.vertices().len();
    let mut adj = vec![Vec::new(); n];
    let mut radj = vec![Vec::new(); n];
    for a in q.arrows() {
        adj[idx[a.src.as_str()]].push(idx[a.dst.as_str()]);
        radj[idx[a.dst.as_str()]].push(idx[a.src.as_str()]);
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((v, k)) = stack.pop() {
            if k < adj[v].len() {
                stack.push((v, k + 1));
                let w = adj[v][k];
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<String>> = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = out.len();
        let mut members = vec![];
        let mut stack = vec![s];
        comp[s] = c;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in &radj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = c;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members.into_iter().map(|i| q.vertices()[i].clone()).collect());
    }
    out
}

/// `ASpec A_Γ` for a finite quiver.
///
/// Atoms: every object of `A_Γ` is a subquotient of a direct sum of copies of
/// `M_Γ`, and `ASupp` of a direct sum or subquotient lies in the union of the
/// supports, so `ASpec A_Γ = ASupp M_Γ`.
///
/// Topology: the open sets of `ASpec` are unions of `ASupp H` over monoform
/// `H` in `A_Γ`. Such an `H` contains a simple `S` with the same class
/// (finite length), and `S` is a composition factor of some `M_Γ^n`, hence of
/// `M_Γ` by Jordan–Hölder. Subobjects shrink support, so `ASupp S = {H̄}` is a
/// basic open inside `ASupp H`, and the singletons given by composition
/// factors of `M_Γ` generate the whole topology. In particular it is discrete.
///
/// Closed vertex sets give submodules, so `M_Γ` is filtered with layers the
/// modules of the strongly connected components; each layer is split further.
pub fn spectrum(q: &ColoredQuiver, field: Field, opts: AtomOptions) -> Result<SpectrumReport, AtomError> {
    let mut keys: Vec<(SimpleKey, AtomSource)> = Vec::new();
    for comp in strong_components(q) {
        let sub = q.full_subquiver(&comp).expect("component vertices exist");
        let m = module_of_quiver(&sub, field);
        for (k, src) in factor_keys(&m, &comp, opts)? {
            push_key(&mut keys, k, src, opts.cap())?;
        }
    }
    let atoms = atoms_from_keys(keys, opts.cap())?;
    let basis = atoms.labels().into_iter().map(|l| BTreeSet::from([l])).collect();
    SpectrumReport::from_basis(field, atoms, basis)
}

/// As [`spectrum`], with atoms and basic opens taken from every monoform
/// subquotient of the lattice of `M_Γ`. Only feasible for small modules.
pub fn spectrum_by_definition(q: &ColoredQuiver, field: Field, opts: AtomOptions) -> Result<SpectrumReport, AtomError> {
    let m = module_of_quiver(q, field);
    let atoms = asupp_by_definition(&m, opts)?;
    if m.is_zero() {
        return SpectrumReport::from_basis(field, atoms, Vec::new());
    }
    let mut iv = Intervals::new(&m, opts)?;
    let mut basis = Vec::new();
    let n = iv.len();
    for lo in 0..n {
        for hi in 0..n {
            if lo != hi && iv.le(lo, hi) && iv.monoform(lo, hi)? {
                let mut keys = Vec::new();
                iv.support(lo, hi, &mut keys)?;
                let mut set = BTreeSet::new();
                for (k, _) in keys {
                    let a = Atom::from_key(k, AtomSource::Symbolic { path: String::new() });
                    let found = atoms.find_equivalent(&a, opts.cap())?.expect("support lies in ASupp M");
                    set.insert(found.label.clone());
                }
                basis.push(set);
            }
        }
    }
    SpectrumReport::from_basis(field, atoms, basis)
}

/// The closed subset `{β ≤ α}`, which is the spectrum of the localization at `α`.
pub fn localize(r: &SpectrumReport, alpha: &str) -> Result<SpectrumReport, AtomError> {
    if r.atoms.get(alpha).is_none() {
        return Err(AtomError::UnknownAtom(alpha.to_string()));
    }
    let keep = r.labels().into_iter().filter(|b| r.order.le(b, alpha)).collect();
    r.restrict(&keep)
}

/// Open subsets, one per localizing subcategory.
pub fn localizing_subcategories(r: &SpectrumReport) -> Result<Vec<BTreeSet<String>>, AtomError> {
    let t = r.topology()?;
    let mut out: Vec<BTreeSet<String>> = t.opens().iter().map(|&m| t.names(m).into_iter().collect()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Whether `m` lies in the localizing subcategory of the open set `phi`.
pub fn membership(m: &FdModule, r: &SpectrumReport, phi: &BTreeSet<String>, opts: AtomOptions) -> Result<bool, AtomError> {
    if !r.is_open(phi) {
        return Err(AtomError::NotOpen);
    }
    for a in asupp(m, opts)?.atoms() {
        match r.atoms.find_equivalent(a, opts.cap())? {
            Some(b) if phi.contains(&b.label) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Spectrum of the quotient by the localizing subcategory of `phi`: its closed complement.
pub fn quotient_spectrum(r: &SpectrumReport, phi: &BTreeSet<String>) -> Result<SpectrumReport, AtomError> {
    if !r.is_open(phi) {
        return Err(AtomError::NotOpen);
    }
    let keep = r.labels().into_iter().filter(|x| !phi.contains(x)).collect();
    r.restrict(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linmod::submodule_lattice;
    use crate::quiver::{chain, make_quiver, preset, Arrow};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn o() -> AtomOptions {
        AtomOptions::default()
    }

    fn chain3() -> ColoredQuiver {
        make_quiver(s(&["v1", "v2", "v3"]), s(&["c12", "c23"]), vec![Arrow::new("v1", "v2", "c12"), Arrow::new("v2", "v3", "c23")]).unwrap()
    }

    fn loops3() -> ColoredQuiver {
        let blocks: Vec<ColoredQuiver> = (0..3).map(|i| ColoredQuiver::loop_point("v", &format!("c{i}"))).collect();
        chain(&blocks).quiver
    }

    fn vw() -> FdModule {
        module_of_quiver(&make_quiver(s(&["v", "w"]), s(&["c"]), vec![Arrow::new("v", "w", "c")]).unwrap(), Field::GF2)
    }

    fn loop_simple(c: &str) -> FdModule {
        module_of_quiver(&ColoredQuiver::loop_point("v", c), Field::GF2)
    }

    /// Common subobject by comparing every pair of nonzero submodules.
    fn common_oracle(m: &FdModule, n: &FdModule) -> bool {
        let lm = submodule_lattice(m, DEFAULT_BUDGET);
        let ln = submodule_lattice(n, DEFAULT_BUDGET);
        lm.members.iter().filter(|x| !x.is_zero()).any(|x| {
            ln.members
                .iter()
                .any(|y| is_isomorphic(&submodule_as_module(m, x), &submodule_as_module(n, y), DEFAULT_ISO_CAP).unwrap() == Tristate::Yes)
        })
    }

    #[test]
    fn common_subobject_examples() {
        let c = loop_simple("c");
        let d = loop_simple("d");
        assert!(has_common_nonzero_subobject(&c, &c, o()).unwrap());
        assert!(!has_common_nonzero_subobject(&c, &d, o()).unwrap());
        let m = vw();
        let soc = submodule_lattice(&m, DEFAULT_BUDGET).minimal_nonzero()[0].clone();
        let top = crate::linmod::quotient(&m, &soc).unwrap();
        assert!(has_common_nonzero_subobject(&m, &top, o()).unwrap());
        for (a, b) in [(&c, &d), (&m, &top), (&m, &c), (&c, &c)] {
            assert_eq!(has_common_nonzero_subobject(a, b, o()).unwrap(), common_oracle(a, b));
        }
    }

    #[test]
    fn monoform_examples() {
        assert!(is_monoform(&loop_simple("c"), o()).unwrap());
        assert!(!is_monoform(&vw(), o()).unwrap());
        let two = module_of_quiver(&chain(&[ColoredQuiver::loop_point("v", "c"), ColoredQuiver::loop_point("v", "c")]).quiver, Field::GF2);
        assert!(!is_monoform(&two, o()).unwrap());
        let distinct = module_of_quiver(&chain(&[ColoredQuiver::loop_point("v", "c"), ColoredQuiver::loop_point("v", "d")]).quiver, Field::GF2);
        assert!(is_monoform(&distinct, o()).unwrap());
        assert_eq!(is_monoform(&FdModule::zero(Field::GF2), o()), Err(AtomError::ZeroModule));
    }

    #[test]
    fn uniform_examples() {
        let c = loop_simple("c");
        assert!(is_uniform(&c, o()).unwrap());
        assert!(!is_uniform(&c.direct_sum(&loop_simple("d")).unwrap(), o()).unwrap());
        assert!(is_uniform(&vw(), o()).unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let c = loop_simple("c");
        assert!(atom_equivalent(&c, &c, o()).unwrap());
        assert!(!atom_equivalent(&c, &loop_simple("d"), o()).unwrap());
        let m = module_of_quiver(&chain(&[ColoredQuiver::loop_point("v", "d"), ColoredQuiver::loop_point("v", "c")]).quiver, Field::GF2);
        assert!(atom_equivalent(&c, &m, o()).unwrap());
        assert_eq!(atom_equivalent(&c, &vw(), o()), Err(AtomError::NotMonoform));
    }

    #[test]
    fn support_examples() {
        let f = Field::GF2;
        let m3 = module_of_quiver(&chain3(), f);
        assert_eq!(asupp(&m3, o()).unwrap().len(), 1);
        assert_eq!(asupp_by_definition(&m3, o()).unwrap().len(), 1);
        let l3 = module_of_quiver(&loops3(), f);
        assert_eq!(asupp(&l3, o()).unwrap().len(), 3);
        assert_eq!(asupp_by_definition(&l3, o()).unwrap().labels(), asupp(&l3, o()).unwrap().labels());
        assert!(asupp(&FdModule::zero(f), o()).unwrap().is_empty());
        assert_eq!(aass(&l3, o()).unwrap().labels(), aass_by_definition(&l3, o()).unwrap().labels());
        assert_eq!(aass(&l3, o()).unwrap().len(), 1);
    }

    #[test]
    fn aass_vs_asupp_shadow() {
        for d in 2..=4 {
            let g = preset("aass-vs-asupp", d).unwrap();
            let m = module_of_quiver(&g.quiver, Field::GF2);
            let a = aass(&m, o()).unwrap();
            let s = asupp(&m, o()).unwrap();
            assert_eq!(a.len(), 1);
            // The second atom is a chain limit and has no finite shadow.
            assert!(a.same_atoms(&s, DEFAULT_ISO_CAP).unwrap());
            assert_eq!(a.labels(), vec!["S1[]".to_string()]);
        }
    }

    #[test]
    fn canonical_forms_are_invariant() {
        let f = Field::GF2;
        let gf4 = crate::quiver::quiver_of_algebra(&s(&["1", "t"]), &vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]], f).unwrap();
        let m = module_of_quiver(&gf4, f);
        let swapped =
            module_of_quiver(&make_quiver(gf4.vertices().iter().rev().cloned().collect(), gf4.colors().to_vec(), gf4.arrows().to_vec()).unwrap(), f);
        assert_eq!(canonical_form(&m, DEFAULT_ISO_CAP), canonical_form(&swapped, DEFAULT_ISO_CAP));
        let a = asupp(&m, o()).unwrap();
        assert_eq!(a.len(), 1);
        assert!(a.labels()[0].starts_with("S2#"));
        assert!(canonical_form(&vw(), DEFAULT_ISO_CAP).is_some());
        let z2 = FdModule::new(f, 2, s(&["a", "b"]), BTreeMap::new()).unwrap();
        assert!(canonical_form(&z2, DEFAULT_ISO_CAP).is_none());
    }

    #[test]
    fn spectrum_examples() {
        let f = Field::GF2;
        let r = spectrum(&chain3(), f, o()).unwrap();
        assert_eq!(r.len(), 1);
        let flags = r.flags.values().next().unwrap();
        assert!(flags.represented_by_simple && flags.open_point && flags.closed_point);
        assert_eq!(r.topology().unwrap().opens().len(), 2);
        let r3 = spectrum(&loops3(), f, o()).unwrap();
        assert_eq!(r3.len(), 3);
        assert!(r3.is_discrete());
        assert!(r3.order.strict_pairs().is_empty());
        assert!(spectrum(&ColoredQuiver::empty(), f, o()).unwrap().is_empty());
        for q in [chain3(), loops3()] {
            let d = spectrum_by_definition(&q, f, o()).unwrap();
            let fast = spectrum(&q, f, o()).unwrap();
            assert_eq!(d.labels(), fast.labels());
            assert_eq!(d.topology().unwrap(), fast.topology().unwrap());
        }
    }

    #[test]
    fn localize_and_subcategories() {
        let f = Field::GF2;
        let r3 = spectrum(&loops3(), f, o()).unwrap();
        let l = localize(&r3, &r3.labels()[1]).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(localizing_subcategories(&r3).unwrap().len(), 8);
        assert!(matches!(localize(&r3, "nope"), Err(AtomError::UnknownAtom(_))));
        let mut atoms = AtomSet::new();
        atoms.insert(Atom::symbolic("a", "a"), 1).unwrap();
        atoms.insert(Atom::symbolic("b", "b"), 1).unwrap();
        let chain2 =
            SpectrumReport::from_basis(f, atoms, vec![BTreeSet::from(["b".to_string()]), BTreeSet::from(["a".to_string(), "b".to_string()])])
                .unwrap();
        assert!(chain2.order.le("a", "b"));
        assert_eq!(localize(&chain2, "b").unwrap().len(), 2);
        assert_eq!(localize(&chain2, "a").unwrap().labels(), vec!["a".to_string()]);
        let m = module_of_quiver(&loops3(), f);
        let all: BTreeSet<String> = r3.labels().into_iter().collect();
        assert!(membership(&m, &r3, &all, o()).unwrap());
        let a0 = &r3.atoms.atoms()[0];
        let s0 = a0.representative.clone().unwrap();
        for phi in localizing_subcategories(&r3).unwrap() {
            assert_eq!(membership(&s0, &r3, &phi, o()).unwrap(), phi.contains(&a0.label));
            let q = quotient_spectrum(&r3, &phi).unwrap();
            assert_eq!(q.len(), 3 - phi.len());
        }
    }

    #[test]
    fn report_json_round_trip() {
        let r = spectrum(&loops3(), Field::GF2, o()).unwrap();
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let back = SpectrumReport::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_dot().starts_with("digraph"));
    }

    #[test]
    fn components_are_strong() {
        let q = make_quiver(
            s(&["a", "b", "c", "d"]),
            s(&["x"]),
            vec![Arrow::new("a", "b", "x"), Arrow::new("b", "a", "x"), Arrow::new("b", "c", "x"), Arrow::new("c", "d", "x")],
        )
        .unwrap();
        let mut comps = strong_components(&q);
        comps.sort();
        assert_eq!(comps, vec![s(&["a", "b"]), s(&["c"]), s(&["d"])]);
    }
}
