//! Finite-dimensional modules over the free algebra on a set of colors.
//!
//! Vectors are rows and colors act on the right: the row of `actions[c]` at
//! basis vector `i` is the image `e_i · s_c`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gf::{Field, LinearSystem, Matrix, Row, Subspace};
use crate::quiver::ColoredQuiver;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinmodError {
    #[error("submodule lattice exceeds the budget of {0} members")]
    BudgetExceeded(usize),
    #[error("the subspaces are not nested")]
    NotNested,
    #[error("subspace is not closed under the action")]
    NotInvariant,
    #[error("modules live over different fields")]
    FieldMismatch,
    #[error("malformed module: {0}")]
    Malformed(String),
    #[error("could not decide simplicity of a {0}-dimensional module")]
    SimplicityUndecided(usize),
}

/// Default lattice budget.
pub const DEFAULT_BUDGET: usize = 50_000;
/// Default number of hom-space elements scanned by [`is_isomorphic`].
pub const DEFAULT_ISO_CAP: u64 = 1 << 16;
/// Random hom combinations tried once the hom space is too large to scan.
const RANDOM_ISO_TRIES: usize = 256;
/// Modules with at most this many vectors are swept vector by vector.
pub const SWEEP_LIMIT: u64 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdModule {
    field: Field,
    dim: usize,
    labels: Vec<String>,
    actions: BTreeMap<String, Matrix>,
}

/// Wire form: matrices as nested integer arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub p: u32,
    pub dim: usize,
    pub labels: Vec<String>,
    pub actions: BTreeMap<String, Vec<Vec<u32>>>,
}

impl FdModule {
    /// Validates shapes and drops colors acting as zero.
    pub fn new(field: Field, dim: usize, labels: Vec<String>, actions: BTreeMap<String, Matrix>) -> Result<FdModule, LinmodError> {
        if labels.len() != dim {
            return Err(LinmodError::Malformed(format!("{} labels for dimension {dim}", labels.len())));
        }
        for (c, m) in &actions {
            if m.nrows() != dim || m.cols != dim || m.rows.iter().any(|r| r.len() != dim) {
                return Err(LinmodError::Malformed(format!("action {c} is not {dim}x{dim}")));
            }
        }
        let actions = actions.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(FdModule { field, dim, labels, actions })
    }

    pub fn zero(field: Field) -> FdModule {
        FdModule { field, dim: 0, labels: Vec::new(), actions: BTreeMap::new() }
    }

    #[cfg(test)]
    fn synthetic(field: Field, dim: usize, actions: BTreeMap<String, Matrix>) -> FdModule {
        let labels = (0..dim).map(|i| format!("b{i}")).collect();
        FdModule::new(field, dim, labels, actions).expect("shapes are consistent by construction")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Colors whose action is nonzero.
    pub fn actions(&self) -> &BTreeMap<String, Matrix> {
        &self.actions
    }

    pub fn action(&self, c: &str) -> Option<&Matrix> {
        self.actions.get(c)
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            p: self.field.p(),
            dim: self.dim,
            labels: self.labels.clone(),
            actions: self.actions.iter().map(|(c, m)| (c.clone(), m.entries())).collect(),
        }
    }

    pub fn from_json(j: &ModuleJson) -> Result<FdModule, LinmodError> {
        let field = Field::new(j.p).map_err(|e| LinmodError::Malformed(e.to_string()))?;
        let mut actions = BTreeMap::new();
        for (c, rows) in &j.actions {
            if rows.len() != j.dim || rows.iter().any(|r| r.len() != j.dim) {
                return Err(LinmodError::Malformed(format!("action {c} is not {0}x{0}", j.dim)));
            }
            let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| field.reduce(x as i64)).collect()).collect();
            actions.insert(c.clone(), Matrix::from_entries(field, j.dim, &rows));
        }
        FdModule::new(field, j.dim, j.labels.clone(), actions)
    }

    pub fn vector(&self, entries: &[u32]) -> Row {
        Row::from_entries(self.field, entries)
    }

    pub fn basis_vector(&self, i: usize) -> Row {
        Row::unit(self.field, self.dim, i)
    }

    pub fn basis_vector_of(&self, label: &str) -> Option<Row> {
        self.labels.iter().position(|l| l == label).map(|i| self.basis_vector(i))
    }

    pub fn zero_sub(&self) -> Subspace {
        Subspace::zero(self.field, self.dim)
    }

    pub fn full_sub(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    pub fn span(&self, vecs: impl IntoIterator<Item = Row>) -> Subspace {
        Subspace::span(self.field, self.dim, vecs)
    }

    pub fn is_invariant(&self, u: &Subspace) -> bool {
        u.rows().iter().all(|r| self.actions.values().all(|m| u.contains(&m.vec_mul(self.field, r))))
    }

    /// Direct sum with basis labels prefixed `0:` and `1:`.
    pub fn direct_sum(&self, other: &FdModule) -> Result<FdModule, LinmodError> {
        if self.field != other.field {
            return Err(LinmodError::FieldMismatch);
        }
        let f = self.field;
        let n = self.dim + other.dim;
        let colors: BTreeSet<&String> = self.actions.keys().chain(other.actions.keys()).collect();
        let mut actions = BTreeMap::new();
        for c in colors {
            let mut rows = Vec::with_capacity(n);
            for i in 0..self.dim {
                let r = self.actions.get(c).map(|m| m.rows[i].clone()).unwrap_or_else(|| Row::zero(f, self.dim));
                rows.push(r.concat(f, &Row::zero(f, other.dim)));
            }
            for i in 0..other.dim {
                let r = other.actions.get(c).map(|m| m.rows[i].clone()).unwrap_or_else(|| Row::zero(f, other.dim));
                rows.push(Row::zero(f, self.dim).concat(f, &r));
            }
            actions.insert(c.clone(), Matrix { cols: n, rows });
        }
        let labels = self.labels.iter().map(|l| format!("0:{l}")).chain(other.labels.iter().map(|l| format!("1:{l}"))).collect();
        FdModule::new(f, n, labels, actions)
    }
}

/// `M_Γ`: basis `x_v` and `x_v · s_c = Σ_{r: v→w, color c} m(r) x_w`.
pub fn module_of_quiver(q: &ColoredQuiver, field: Field) -> FdModule {
    let idx = q.vertex_index();
    let n = q.vertices().len();
    let mut actions: BTreeMap<String, Matrix> = BTreeMap::new();
    for a in q.arrows() {
        let m = actions.entry(a.color.clone()).or_insert_with(|| Matrix::zero(field, n, n));
        let (i, j) = (idx[a.src.as_str()], idx[a.dst.as_str()]);
        let v = field.add(m.rows[i].get(j), field.reduce(a.value));
        m.rows[i].set(j, v);
    }
    FdModule::new(field, n, q.vertices().to_vec(), actions).expect("square by construction")
}

/// Smallest invariant subspace containing `x`.
pub fn cyclic_submodule(m: &FdModule, x: &Row) -> Subspace {
    generated_submodule(m, std::iter::once(x.clone()))
}

/// Smallest invariant subspace containing the given vectors.
pub fn generated_submodule(m: &FdModule, gens: impl IntoIterator<Item = Row>) -> Subspace {
    let mut u = m.zero_sub();
    let mut queue = VecDeque::new();
    for g in gens {
        if u.insert(g.clone()) {
            queue.push_back(g);
        }
    }
    while let Some(v) = queue.pop_front() {
        for a in m.actions.values() {
            let w = a.vec_mul(m.field, &v);
            if u.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    u
}

/// A family of submodules of one module, sorted by dimension then basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleSet {
    pub members: Vec<Subspace>,
    pub complete: bool,
}

fn sub_cmp(a: &Subspace, b: &Subspace) -> std::cmp::Ordering {
    a.dim().cmp(&b.dim()).then_with(|| a.rows().cmp(b.rows()))
}

impl SubmoduleSet {
    fn from_set(set: HashSet<Subspace>, complete: bool) -> SubmoduleSet {
        let mut members: Vec<Subspace> = set.into_iter().collect();
        members.sort_by(sub_cmp);
        SubmoduleSet { members, complete }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, u: &Subspace) -> Option<usize> {
        self.members.binary_search_by(|m| sub_cmp(m, u)).ok()
    }

    /// Minimal nonzero members.
    pub fn minimal_nonzero(&self) -> Vec<&Subspace> {
        let nz: Vec<&Subspace> = self.members.iter().filter(|m| !m.is_zero()).collect();
        nz.iter().copied().filter(|m| !nz.iter().any(|k| k.dim() < m.dim() && k.is_subspace_of(m))).collect()
    }

    /// Maximal proper members.
    pub fn maximal_proper(&self, ambient: usize) -> Vec<&Subspace> {
        let pr: Vec<&Subspace> = self.members.iter().filter(|m| m.dim() < ambient).collect();
        pr.iter().copied().filter(|m| !pr.iter().any(|k| k.dim() > m.dim() && m.is_subspace_of(k))).collect()
    }

    /// Hasse diagram as index pairs `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.members.len();
        let below: Vec<Vec<usize>> = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| i != j && self.members[i].dim() < self.members[j].dim() && self.members[i].is_subspace_of(&self.members[j]))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for j in 0..n {
            for &i in &below[j] {
                if !below[j].iter().any(|&k| k != i && below[k].contains(&i)) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Tuning knobs for [`submodule_lattice_with`].
#[derive(Debug, Clone, Copy)]
pub struct LatticeOptions {
    pub budget: usize,
    /// Modules with at most this many vectors are enumerated vector by vector.
    pub sweep_limit: u64,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { budget: DEFAULT_BUDGET, sweep_limit: SWEEP_LIMIT }
    }
}

/// Every submodule of `m`. An incomplete set is returned when the budget runs out.
pub fn submodule_lattice(m: &FdModule, budget: usize) -> SubmoduleSet {
    submodule_lattice_with(m, LatticeOptions { budget, ..Default::default() })
}

pub fn submodule_lattice_with(m: &FdModule, opts: LatticeOptions) -> SubmoduleSet {
    match lattice_rec(m, opts) {
        Ok(set) => SubmoduleSet::from_set(set, true),
        Err(partial) => SubmoduleSet::from_set(partial, false),
    }
}

/// As [`submodule_lattice`], failing instead of returning a partial set.
pub fn complete_lattice(m: &FdModule, budget: usize) -> Result<SubmoduleSet, LinmodError> {
    let s = submodule_lattice(m, budget);
    if s.complete {
        Ok(s)
    } else {
        Err(LinmodError::BudgetExceeded(budget))
    }
}

fn vector_count(m: &FdModule) -> u64 {
    (m.field.p() as u64).checked_pow(m.dim as u32).unwrap_or(u64::MAX)
}

/// Nonzero vectors with leading coefficient 1.
fn normalized_vectors(m: &FdModule) -> impl Iterator<Item = Row> + '_ {
    let p = m.field.p() as u64;
    let n = m.dim;
    (1..vector_count(m)).filter_map(move |mut code| {
        let mut e = vec![0u32; n];
        for x in e.iter_mut().rev() {
            *x = (code % p) as u32;
            code /= p;
        }
        (e.iter().find(|&&x| x != 0) == Some(&1)).then(|| Row::from_entries(m.field, &e))
    })
}

fn sweep(m: &FdModule, budget: usize) -> Result<HashSet<Subspace>, HashSet<Subspace>> {
    let mut cyclic: Vec<Subspace> = Vec::new();
    let mut seen = HashSet::new();
    for v in normalized_vectors(m) {
        let c = cyclic_submodule(m, &v);
        if seen.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    let mut all: HashSet<Subspace> = HashSet::from([m.zero_sub()]);
    let mut queue = VecDeque::from([m.zero_sub()]);
    while let Some(x) = queue.pop_front() {
        for c in &cyclic {
            if c.is_subspace_of(&x) {
                continue;
            }
            let s = x.sum(c);
            if all.insert(s.clone()) {
                if all.len() > budget {
                    return Err(all);
                }
                queue.push_back(s);
            }
        }
    }
    Ok(all)
}

/// Restriction of `m` to the invariant subspace `u`, in the coordinates of `u`'s basis.
pub fn submodule_as_module(m: &FdModule, u: &Subspace) -> FdModule {
    let actions = m
        .actions
        .iter()
        .map(|(c, a)| {
            let rows = u.rows().iter().map(|r| Row::from_entries(m.field, &u.coords(&a.vec_mul(m.field, r)))).collect();
            (c.clone(), Matrix { cols: u.dim(), rows })
        })
        .collect();
    let labels = u.pivots().iter().map(|&p| format!("<{}>", m.labels[p])).collect();
    FdModule::new(m.field, u.dim(), labels, actions).expect("invariant subspace")
}

/// `m / u` with basis the images of the unit vectors at `u`'s free columns.
pub fn quotient(m: &FdModule, u: &Subspace) -> Result<FdModule, LinmodError> {
    if !m.is_invariant(u) {
        return Err(LinmodError::NotInvariant);
    }
    let free = u.free_columns();
    let f = m.field;
    let actions = m
        .actions
        .iter()
        .map(|(c, a)| {
            let rows = free
                .iter()
                .map(|&j| {
                    let mut img = a.rows[j].clone();
                    u.reduce(&mut img);
                    Row::from_entries(f, &free.iter().map(|&k| img.get(k)).collect::<Vec<_>>())
                })
                .collect();
            (c.clone(), Matrix { cols: free.len(), rows })
        })
        .collect();
    let labels = free.iter().map(|&j| format!("[{}]", m.labels[j])).collect();
    FdModule::new(f, free.len(), labels, actions)
}

/// `upper / lower` for invariant subspaces `lower ⊆ upper`.
pub fn subquotient(m: &FdModule, lower: &Subspace, upper: &Subspace) -> Result<FdModule, LinmodError> {
    if !lower.is_subspace_of(upper) {
        return Err(LinmodError::NotNested);
    }
    if !m.is_invariant(lower) || !m.is_invariant(upper) {
        return Err(LinmodError::NotInvariant);
    }
    let top = submodule_as_module(m, upper);
    let low = top.span(lower.rows().iter().map(|r| Row::from_entries(m.field, &upper.coords(r))));
    let mut q = quotient(&top, &low)?;
    q.labels = (0..q.dim).map(|i| format!("q{i}")).collect();
    Ok(q)
}

/// Candidate proper nonzero submodules for the split step.
fn split_candidates(m: &FdModule) -> Vec<Subspace> {
    let f = m.field;
    let mut out = Vec::new();
    for i in 0..m.dim {
        out.push(cyclic_submodule(m, &m.basis_vector(i)));
    }
    for a in m.actions.values() {
        for r in &a.rows {
            if !r.is_zero() {
                out.push(cyclic_submodule(m, r));
            }
        }
    }
    // Common kernel: each of its lines is a submodule.
    let mut sys = LinearSystem::new(f, m.dim);
    for a in m.actions.values() {
        for j in 0..m.dim {
            let col: Vec<u32> = (0..m.dim).map(|i| a.rows[i].get(j)).chain([0]).collect();
            sys.push(Row::from_entries(f, &col));
        }
    }
    if let Some(sol) = sys.solve() {
        for k in sol.kernel.into_iter().take(1) {
            out.push(m.span([k]));
        }
    }
    out
}

/// Some proper nonzero submodule, `None` if `m` is simple.
pub fn find_proper_submodule(m: &FdModule) -> Result<Option<Subspace>, LinmodError> {
    if m.dim <= 1 {
        return Ok(None);
    }
    let proper = |u: &Subspace| !u.is_zero() && u.dim() < m.dim;
    let mut best: Option<Subspace> = None;
    for u in split_candidates(m) {
        if proper(&u) {
            let better = match &best {
                None => true,
                Some(b) => u.dim().abs_diff(m.dim / 2) < b.dim().abs_diff(m.dim / 2),
            };
            if better {
                best = Some(u);
            }
        }
    }
    if best.is_some() {
        return Ok(best);
    }
    if vector_count(m) <= SWEEP_LIMIT << 6 {
        return Ok(normalized_vectors(m).map(|v| cyclic_submodule(m, &v)).find(proper));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(m.dim as u64);
    for _ in 0..4096 {
        let e: Vec<u32> = (0..m.dim).map(|_| rng.gen_range(0..m.field.p())).collect();
        let u = cyclic_submodule(m, &m.vector(&e));
        if proper(&u) {
            return Ok(Some(u));
        }
    }
    Err(LinmodError::SimplicityUndecided(m.dim))
}

fn lattice_rec(m: &FdModule, opts: LatticeOptions) -> Result<HashSet<Subspace>, HashSet<Subspace>> {
    if vector_count(m) <= opts.sweep_limit {
        return sweep(m, opts.budget);
    }
    let u = match find_proper_submodule(m) {
        Ok(Some(u)) => u,
        Ok(None) => return Ok(HashSet::from([m.zero_sub(), m.full_sub()])),
        Err(_) => return sweep(m, opts.budget),
    };
    let um = submodule_as_module(m, &u);
    let qm = quotient(m, &u).expect("u is invariant");
    let lu = lattice_rec(&um, opts)?;
    let lq = lattice_rec(&qm, opts)?;
    let mut lu: Vec<Subspace> = lu.into_iter().collect();
    lu.sort_by(sub_cmp);
    let mut lq: Vec<Subspace> = lq.into_iter().collect();
    lq.sort_by(sub_cmp);
    let lifter = Lifter::new(m, &u, &um, &qm);
    let mut out = HashSet::new();
    for b in &lq {
        for a in &lu {
            if !lifter.lifts(a, b, opts.budget, &mut out) {
                return Err(out);
            }
        }
    }
    Ok(out)
}

/// Enumerates the submodules `L` with `L ∩ U = A` and `(L + U)/U = B`.
///
/// In the basis `U` followed by the unit vectors at `U`'s free columns the
/// action is block lower triangular, and `L = A + span{b̃_i + y_i}` with `y_i`
/// supported on the free columns of `A`. Invariance is the affine condition
/// `u_ic + y_i·A_c − Σ_j β^c_ij y_j ∈ A`, where `b̃_i·A_c = u_ic + Σ_j β^c_ij b̃_j`.
struct Lifter<'a> {
    m: &'a FdModule,
    u: &'a Subspace,
    um: &'a FdModule,
    qm: &'a FdModule,
    free: Vec<usize>,
}

impl<'a> Lifter<'a> {
    fn new(m: &'a FdModule, u: &'a Subspace, um: &'a FdModule, qm: &'a FdModule) -> Lifter<'a> {
        Lifter { m, u, um, qm, free: u.free_columns() }
    }

    fn lift(&self, w: &Row) -> Row {
        let mut x = Row::zero(self.m.field, self.m.dim);
        for (k, a) in w.support() {
            x.set(self.free[k], a);
        }
        x
    }

    fn to_ambient(&self, ucoords: &Row) -> Row {
        self.u.combine(&ucoords.entries())
    }

    /// Adds every lift of `(a, b)` to `out`; false once `out` outgrows the budget.
    fn lifts(&self, a: &Subspace, b: &Subspace, budget: usize, out: &mut HashSet<Subspace>) -> bool {
        let f = self.m.field;
        let a_amb: Vec<Row> = a.rows().iter().map(|r| self.to_ambient(r)).collect();
        if b.is_zero() {
            out.insert(self.m.span(a_amb));
            return out.len() <= budget;
        }
        let afree = a.free_columns();
        let (r, s) = (b.dim(), afree.len());
        let unknowns = r * s;
        let var = |i: usize, k: usize| i * s + k;
        let mut sys = LinearSystem::new(f, unknowns);
        let btil: Vec<Row> = b.rows().iter().map(|bi| self.lift(bi)).collect();
        // y_k · A_c reduced modulo A, read at A's free columns.
        let mut images: HashMap<&str, Vec<Row>> = HashMap::new();
        for (c, ac) in self.um.actions() {
            let rows = afree
                .iter()
                .map(|&col| {
                    let mut v = ac.rows[col].clone();
                    a.reduce(&mut v);
                    Row::from_entries(f, &afree.iter().map(|&t| v.get(t)).collect::<Vec<_>>())
                })
                .collect();
            images.insert(c.as_str(), rows);
        }
        for (c, ac) in self.m.actions() {
            let zero_q = Matrix::zero(f, self.qm.dim(), self.qm.dim());
            let aq = self.qm.action(c).unwrap_or(&zero_q);
            for i in 0..r {
                let img = ac.vec_mul(f, &btil[i]);
                let qimg = aq.vec_mul(f, &b.rows()[i]);
                let beta = b.coords(&qimg);
                let mut uic = img;
                uic.axpy(f, f.neg(1), &self.lift(&qimg));
                let mut uc = Row::from_entries(f, &self.u.coords(&uic));
                a.reduce(&mut uc);
                let yimg = images.get(c.as_str());
                for (t, &col) in afree.iter().enumerate() {
                    let mut eq = vec![0u32; unknowns + 1];
                    if let Some(rows) = yimg {
                        for k in 0..s {
                            eq[var(i, k)] = f.add(eq[var(i, k)], rows[k].get(t));
                        }
                    }
                    for (j, &bij) in beta.iter().enumerate() {
                        if bij != 0 {
                            eq[var(j, t)] = f.sub(eq[var(j, t)], bij);
                        }
                    }
                    eq[unknowns] = f.neg(uc.get(col));
                    if eq.iter().any(|&x| x != 0) {
                        sys.push(Row::from_entries(f, &eq));
                    }
                }
            }
        }
        let Some(sol) = sys.solve() else { return true };
        let count = (f.p() as u64).checked_pow(sol.kernel.len() as u32);
        if count.is_none_or(|c| c > budget as u64) {
            return false;
        }
        let span = Subspace::span(f, unknowns, sol.kernel.iter().cloned());
        for delta in span.elements() {
            let mut y = sol.particular.clone();
            y.axpy(f, 1, &delta);
            let mut gens = a_amb.clone();
            for (i, bt) in btil.iter().enumerate() {
                let mut ucoef = Row::zero(f, self.u.dim());
                for (k, &col) in afree.iter().enumerate() {
                    ucoef.set(col, y.get(var(i, k)));
                }
                let mut g = bt.clone();
                g.axpy(f, 1, &self.to_ambient(&ucoef));
                gens.push(g);
            }
            out.insert(self.m.span(gens));
            if out.len() > budget {
                return false;
            }
        }
        true
    }
}

/// Basis of `Hom(M, N)`: matrices `F` with `A_c F = F B_c` for every color.
pub fn hom_basis(m: &FdModule, n: &FdModule) -> Result<Vec<Matrix>, LinmodError> {
    if m.field != n.field {
        return Err(LinmodError::FieldMismatch);
    }
    let f = m.field;
    let (a, b) = (m.dim, n.dim);
    if a == 0 || b == 0 {
        return Ok(Vec::new());
    }
    let unknowns = a * b;
    let var = |k: usize, j: usize| k * b + j;
    let mut sys = LinearSystem::new(f, unknowns);
    let colors: BTreeSet<&String> = m.actions.keys().chain(n.actions.keys()).collect();
    for c in colors {
        let am = m.actions.get(c);
        let bn = n.actions.get(c);
        for i in 0..a {
            for j in 0..b {
                let mut eq = vec![0u32; unknowns + 1];
                if let Some(am) = am {
                    for (k, v) in am.rows[i].support() {
                        eq[var(k, j)] = f.add(eq[var(k, j)], v);
                    }
                }
                if let Some(bn) = bn {
                    for k in 0..b {
                        let v = bn.rows[k].get(j);
                        if v != 0 {
                            eq[var(i, k)] = f.sub(eq[var(i, k)], v);
                        }
                    }
                }
                if eq.iter().any(|&x| x != 0) {
                    sys.push(Row::from_entries(f, &eq));
                }
            }
        }
    }
    let sol = sys.solve().expect("homogeneous systems are solvable");
    Ok(sol.kernel.iter().map(|k| Matrix { cols: b, rows: (0..a).map(|i| k.slice(f, i * b, (i + 1) * b)).collect() }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tristate {
    Yes,
    No,
    Undecided,
}

fn rank_profile(m: &FdModule) -> BTreeMap<&String, usize> {
    m.actions.iter().map(|(c, a)| (c, a.rank(m.field))).collect()
}

fn combine_matrices(f: Field, basis: &[Matrix], coeffs: &[u32]) -> Matrix {
    let mut out = Matrix::zero(f, basis[0].nrows(), basis[0].cols);
    for (m, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            for (o, r) in out.rows.iter_mut().zip(&m.rows) {
                o.axpy(f, c, r);
            }
        }
    }
    out
}

/// Isomorphism test by scanning the hom space up to `cap` elements.
pub fn is_isomorphic(m: &FdModule, n: &FdModule, cap: u64) -> Result<Tristate, LinmodError> {
    if m.field != n.field {
        return Err(LinmodError::FieldMismatch);
    }
    if m.dim != n.dim || rank_profile(m) != rank_profile(n) {
        return Ok(Tristate::No);
    }
    if m.dim == 0 {
        return Ok(Tristate::Yes);
    }
    let f = m.field;
    let basis = hom_basis(m, n)?;
    if basis.is_empty() {
        return Ok(Tristate::No);
    }
    let invertible = |x: &Matrix| x.rank(f) == m.dim;
    if basis.iter().any(invertible) {
        return Ok(Tristate::Yes);
    }
    let p = f.p() as u64;
    let total = p.checked_pow(basis.len() as u32);
    match total {
        Some(t) if t <= cap => {
            let mut coeffs = vec![0u32; basis.len()];
            for mut code in 1..t {
                for c in coeffs.iter_mut() {
                    *c = (code % p) as u32;
                    code /= p;
                }
                if invertible(&combine_matrices(f, &basis, &coeffs)) {
                    return Ok(Tristate::Yes);
                }
            }
            Ok(Tristate::No)
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(basis.len() as u64);
            for _ in 0..RANDOM_ISO_TRIES {
                let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..f.p())).collect();
                if invertible(&combine_matrices(f, &basis, &coeffs)) {
                    return Ok(Tristate::Yes);
                }
            }
            Ok(Tristate::Undecided)
        }
    }
}

/// A composition series `0 = U_0 ⊂ U_1 ⊂ … ⊂ U_n = M` with simple layers.
pub fn composition_series(m: &FdModule) -> Result<Vec<Subspace>, LinmodError> {
    if m.dim == 0 {
        return Ok(vec![m.zero_sub()]);
    }
    let Some(u) = find_proper_submodule(m)? else {
        return Ok(vec![m.zero_sub(), m.full_sub()]);
    };
    let lower = composition_series(&submodule_as_module(m, &u))?;
    let upper = composition_series(&quotient(m, &u)?)?;
    let free = u.free_columns();
    let mut out: Vec<Subspace> = lower.iter().map(|w| m.span(w.rows().iter().map(|r| u.combine(&r.entries())))).collect();
    for w in &upper[1..] {
        let mut x = u.clone();
        for r in w.rows() {
            let mut v = Row::zero(m.field, m.dim);
            for (k, a) in r.support() {
                v.set(free[k], a);
            }
            x.insert(v);
        }
        out.push(x);
    }
    Ok(out)
}

/// Simple subquotients along one composition series, bottom first.
pub fn composition_factors(m: &FdModule) -> Result<Vec<FdModule>, LinmodError> {
    let series = composition_series(m)?;
    Ok(series.windows(2).map(|w| subquotient(m, &w[0], &w[1]).expect("series is nested and invariant")).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub is_simple: bool,
    pub composition_length: usize,
    pub socle: Subspace,
    /// Composition length of each layer `rad^k M / rad^{k+1} M`.
    pub radical_series_lengths: Vec<usize>,
}

/// Length of the interval `[lower, upper]` of a complete lattice.
fn interval_length(lat: &SubmoduleSet, lower: &Subspace, upper: &Subspace) -> usize {
    let mut cur = lower.clone();
    let mut len = 0;
    while cur != *upper {
        cur = lat
            .members
            .iter()
            .find(|x| x.dim() > cur.dim() && cur.is_subspace_of(x) && x.is_subspace_of(upper))
            .expect("upper lies above cur")
            .clone();
        len += 1;
    }
    len
}

pub fn structure_report(m: &FdModule, budget: usize) -> Result<StructureReport, LinmodError> {
    let lat = complete_lattice(m, budget)?;
    let full = m.full_sub();
    let zero = m.zero_sub();
    let length = interval_length(&lat, &zero, &full);
    let socle = lat.minimal_nonzero().into_iter().fold(zero.clone(), |acc, s| acc.sum(s));
    let mut layers = Vec::new();
    let mut cur = full;
    while !cur.is_zero() {
        let maximal: Vec<&Subspace> = lat
            .members
            .iter()
            .filter(|x| x.dim() < cur.dim() && x.is_subspace_of(&cur))
            .filter(|x| !lat.members.iter().any(|y| y.dim() > x.dim() && y.dim() < cur.dim() && x.is_subspace_of(y) && y.is_subspace_of(&cur)))
            .collect();
        let rad = maximal.iter().skip(1).fold(maximal[0].clone(), |acc, x| acc.intersect(x));
        layers.push(interval_length(&lat, &rad, &cur));
        cur = rad;
    }
    Ok(StructureReport { is_simple: length == 1, composition_length: length, socle, radical_series_lengths: layers })
}

/// Whether `l` meets every nonzero submodule of `m`.
pub fn is_essential(l: &Subspace, m: &FdModule, budget: usize) -> Result<bool, LinmodError> {
    if !m.is_invariant(l) {
        return Err(LinmodError::NotInvariant);
    }
    if m.dim == 0 {
        return Ok(true);
    }
    if l.is_zero() {
        return Ok(false);
    }
    let lat = complete_lattice(m, budget)?;
    Ok(lat.minimal_nonzero().into_iter().all(|s| s.meets(l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{make_quiver, preset, Arrow};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    pub(crate) fn chain3() -> ColoredQuiver {
        make_quiver(s(&["v1", "v2", "v3"]), s(&["c12", "c23"]), vec![Arrow::new("v1", "v2", "c12"), Arrow::new("v2", "v3", "c23")]).unwrap()
    }

    fn zero_module(dim: usize) -> FdModule {
        FdModule::synthetic(Field::GF2, dim, BTreeMap::new())
    }

    /// Every invariant subspace, by filtering all subspaces.
    fn lattice_oracle(m: &FdModule) -> BTreeSet<Vec<Vec<u32>>> {
        let mut all: HashSet<Subspace> = HashSet::from([m.zero_sub()]);
        let mut frontier = vec![m.zero_sub()];
        while let Some(x) = frontier.pop() {
            for v in normalized_vectors(m) {
                let mut y = x.clone();
                if y.insert(v) && all.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        all.into_iter().filter(|u| m.is_invariant(u)).map(|u| u.rows().iter().map(Row::entries).collect()).collect()
    }

    fn as_set(l: &SubmoduleSet) -> BTreeSet<Vec<Vec<u32>>> {
        l.members.iter().map(|u| u.rows().iter().map(Row::entries).collect()).collect()
    }

    #[test]
    fn module_examples() {
        let lp = module_of_quiver(&ColoredQuiver::loop_point("v", "c"), Field::GF2);
        assert_eq!(lp.action("c").unwrap().entries(), vec![vec![1]]);
        let vw = module_of_quiver(&make_quiver(s(&["v", "w"]), s(&["c"]), vec![Arrow::new("v", "w", "c")]).unwrap(), Field::GF2);
        let a = vw.action("c").unwrap();
        assert!(!a.is_zero() && a.mul(Field::GF2, a).is_zero());
        assert_eq!(module_of_quiver(&ColoredQuiver::empty(), Field::GF2).dim(), 0);
    }

    #[test]
    fn cyclic_examples() {
        let m = module_of_quiver(&chain3(), Field::GF2);
        assert!(cyclic_submodule(&m, &m.vector(&[0, 0, 0])).is_zero());
        assert_eq!(cyclic_submodule(&m, &m.vector(&[1, 0, 0])).dim(), 3);
        assert_eq!(cyclic_submodule(&m, &m.vector(&[1, 1, 0])), m.full_sub());
    }

    #[test]
    fn lattice_examples() {
        let z = submodule_lattice(&zero_module(2), DEFAULT_BUDGET);
        assert!(z.complete);
        assert_eq!(z.len(), 5);
        let vw = module_of_quiver(&make_quiver(s(&["v", "w"]), s(&["c"]), vec![Arrow::new("v", "w", "c")]).unwrap(), Field::GF2);
        let l = submodule_lattice(&vw, DEFAULT_BUDGET);
        assert_eq!(l.members, vec![vw.zero_sub(), vw.span([vw.vector(&[0, 1])]), vw.full_sub()]);
        for d in 2..7 {
            let g = preset("infinite-chain", d).unwrap();
            let m = module_of_quiver(&g.quiver, Field::GF2);
            let lat = submodule_lattice(&m, DEFAULT_BUDGET);
            let tails: Vec<Subspace> = (0..=d).rev().map(|j| m.span((j..d).map(|k| m.basis_vector(k)))).collect();
            assert_eq!(lat.members, tails);
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let l = submodule_lattice(&zero_module(4), 10);
        assert!(!l.complete);
        assert!(matches!(complete_lattice(&zero_module(4), 10), Err(LinmodError::BudgetExceeded(10))));
    }

    #[test]
    fn sweep_and_split_match_the_oracle() {
        let field = Field::GF2;
        let qs = [
            chain3(),
            make_quiver(s(&["a", "b", "c"]), s(&["x"]), vec![Arrow::new("a", "b", "x"), Arrow::new("a", "c", "x")]).unwrap(),
            make_quiver(
                s(&["a", "b", "c", "d"]),
                s(&["x", "y"]),
                vec![Arrow::new("a", "a", "x"), Arrow::new("b", "b", "x"), Arrow::new("c", "d", "y")],
            )
            .unwrap(),
        ];
        for q in qs {
            let m = module_of_quiver(&q, field);
            let oracle = lattice_oracle(&m);
            let sw = submodule_lattice_with(&m, LatticeOptions { budget: DEFAULT_BUDGET, sweep_limit: u64::MAX });
            let sp = submodule_lattice_with(&m, LatticeOptions { budget: DEFAULT_BUDGET, sweep_limit: 1 });
            assert_eq!(as_set(&sw), oracle);
            assert_eq!(as_set(&sp), oracle);
        }
        let z = zero_module(4);
        let sp = submodule_lattice_with(&z, LatticeOptions { budget: DEFAULT_BUDGET, sweep_limit: 1 });
        assert_eq!(sp.len(), 1 + 15 + 35 + 15 + 1);
    }

    #[test]
    fn split_over_gf3() {
        let f = Field::new(3).unwrap();
        let q = make_quiver(s(&["a", "b", "c"]), s(&["x"]), vec![Arrow::new("a", "b", "x"), Arrow::valued("c", "b", "x", 2)]).unwrap();
        let m = module_of_quiver(&q, f);
        let sw = submodule_lattice_with(&m, LatticeOptions { budget: DEFAULT_BUDGET, sweep_limit: u64::MAX });
        let sp = submodule_lattice_with(&m, LatticeOptions { budget: DEFAULT_BUDGET, sweep_limit: 1 });
        assert_eq!(as_set(&sw), as_set(&sp));
        assert_eq!(as_set(&sw), lattice_oracle(&m));
    }

    #[test]
    fn subquotient_examples() {
        let m = module_of_quiver(&chain3(), Field::GF2);
        let full = m.full_sub();
        let zero = m.zero_sub();
        let same = subquotient(&m, &zero, &full).unwrap();
        assert_eq!(same.dim(), 3);
        assert_eq!(is_isomorphic(&same, &m, DEFAULT_ISO_CAP).unwrap(), Tristate::Yes);
        let l = m.span([m.vector(&[0, 0, 1])]);
        let l2 = m.span([m.vector(&[0, 1, 0]), m.vector(&[0, 0, 1])]);
        let sq = subquotient(&m, &l, &l2).unwrap();
        assert_eq!(sq.dim(), 1);
        assert!(sq.actions().is_empty());
        assert_eq!(subquotient(&m, &l2, &l2).unwrap().dim(), 0);
        assert_eq!(subquotient(&m, &l2, &l), Err(LinmodError::NotNested));
    }

    #[test]
    fn hom_examples() {
        let f = Field::GF2;
        assert_eq!(hom_basis(&zero_module(1), &zero_module(1)).unwrap().len(), 1);
        let c = module_of_quiver(&ColoredQuiver::loop_point("v", "c"), f);
        let d = module_of_quiver(&ColoredQuiver::loop_point("v", "d"), f);
        assert!(hom_basis(&c, &d).unwrap().is_empty());
        let m = module_of_quiver(&chain3(), f);
        let h = hom_basis(&m, &m).unwrap();
        let span = Subspace::span(f, 9, h.iter().map(|x| x.rows.iter().skip(1).fold(x.rows[0].clone(), |a, r| a.concat(f, r))));
        let id = Matrix::identity(f, 3);
        let idrow = id.rows.iter().skip(1).fold(id.rows[0].clone(), |a, r| a.concat(f, r));
        assert!(span.contains(&idrow));
    }

    #[test]
    fn iso_examples() {
        let f = Field::GF2;
        let m = module_of_quiver(&chain3(), f);
        assert_eq!(is_isomorphic(&m, &m, DEFAULT_ISO_CAP).unwrap(), Tristate::Yes);
        assert_eq!(is_isomorphic(&zero_module(1), &zero_module(2), DEFAULT_ISO_CAP).unwrap(), Tristate::No);
        let c = module_of_quiver(&ColoredQuiver::loop_point("v", "c"), f);
        let d = module_of_quiver(&ColoredQuiver::loop_point("v", "d"), f);
        assert_eq!(is_isomorphic(&c, &d, DEFAULT_ISO_CAP).unwrap(), Tristate::No);
        // Relabeled basis: w1 -> w2 -> w3 listed in reverse.
        let r = make_quiver(s(&["w3", "w2", "w1"]), s(&["c12", "c23"]), vec![Arrow::new("w1", "w2", "c12"), Arrow::new("w2", "w3", "c23")]).unwrap();
        assert_eq!(is_isomorphic(&m, &module_of_quiver(&r, f), DEFAULT_ISO_CAP).unwrap(), Tristate::Yes);
        // A sum of two zero-action points needs a combination of hom basis elements.
        let z2 = zero_module(2);
        assert_eq!(is_isomorphic(&z2, &z2, 1).unwrap(), Tristate::Yes);
    }

    #[test]
    fn structure_examples() {
        let f = Field::GF2;
        let one = structure_report(&zero_module(1), DEFAULT_BUDGET).unwrap();
        assert!(one.is_simple);
        assert_eq!(one.composition_length, 1);
        let m = module_of_quiver(&chain3(), f);
        let r = structure_report(&m, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.composition_length, 3);
        assert_eq!(r.socle, m.span([m.vector(&[0, 0, 1])]));
        assert_eq!(r.radical_series_lengths, vec![1, 1, 1]);
        let z = structure_report(&FdModule::zero(f), DEFAULT_BUDGET).unwrap();
        assert_eq!(z.composition_length, 0);
        assert!(!z.is_simple);
        let semisimple = structure_report(&zero_module(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(semisimple.radical_series_lengths, vec![3]);
    }

    #[test]
    fn essential_examples() {
        let f = Field::GF2;
        let m = module_of_quiver(&chain3(), f);
        assert!(is_essential(&m.full_sub(), &m, DEFAULT_BUDGET).unwrap());
        assert!(!is_essential(&m.zero_sub(), &m, DEFAULT_BUDGET).unwrap());
        let vw = module_of_quiver(&make_quiver(s(&["v", "w"]), s(&["c"]), vec![Arrow::new("v", "w", "c")]).unwrap(), f);
        let soc = structure_report(&vw, DEFAULT_BUDGET).unwrap().socle;
        assert!(is_essential(&soc, &vw, DEFAULT_BUDGET).unwrap());
        let z2 = zero_module(2);
        assert!(!is_essential(&z2.span([z2.vector(&[1, 0])]), &z2, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn composition_factors_of_chains() {
        let f = Field::GF2;
        let m = module_of_quiver(&chain3(), f);
        let fs = composition_factors(&m).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|s| s.dim() == 1 && s.actions().is_empty()));
        let series = composition_series(&m).unwrap();
        assert_eq!(series.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert!(series.iter().all(|u| m.is_invariant(u)));
        let gf4 = crate::quiver::quiver_of_algebra(&s(&["1", "t"]), &vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]], f).unwrap();
        let fs = composition_factors(&module_of_quiver(&gf4, f)).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].dim(), 2);
    }

    #[test]
    fn json_round_trip() {
        let m = module_of_quiver(&chain3(), Field::GF2);
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back = FdModule::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn direct_sum_dims() {
        let f = Field::GF2;
        let c = module_of_quiver(&ColoredQuiver::loop_point("v", "c"), f);
        let s = c.direct_sum(&c).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(submodule_lattice(&s, DEFAULT_BUDGET).len(), 5);
    }
}
