//! Colored quivers and the combinators that build them.
//!
//! Every generated id is a structured tuple serialized as a JSON array (see
//! [`tag`]), so regenerating a construction at a larger truncation reproduces
//! the smaller one's ids exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::gf::Field;

pub mod gen;
pub use gen::{
    acc_block_sequence, acc_label, descending_poset, gen_noatom, gen_realization_acc, gen_realization_general, general_d_label, general_g_label,
    noatom_label, preset, TruncationSpec, PRESETS, PRESET_WINDOW,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("two arrows {0} -> {1} share the color {2}")]
    DuplicateArrow(String, String, String),
    #[error("vertex {0} is declared twice")]
    DuplicateVertex(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown color {0}")]
    UnknownColor(String),
    #[error("vertex set is not closed under arrow targets: {0} -> {1}")]
    NotTargetClosed(String, String),
    #[error("no block given for vertex {0}")]
    MissingBlock(String),
    #[error("empty integer range")]
    EmptyRange,
    #[error("structure constants are not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("algebra has no unit")]
    NotUnital,
    #[error("malformed structure table: {0}")]
    BadStructure(String),
    #[error("truncation depth {0} is too small")]
    DepthTooSmall(usize),
    #[error("integer window is too small")]
    WindowTooSmall,
    #[error("unknown preset {0}")]
    UnknownPreset(String),
}

/// Canonical serialization of a tuple of id parts.
pub fn tag<S: AsRef<str>>(parts: &[S]) -> String {
    let v: Vec<&str> = parts.iter().map(|p| p.as_ref()).collect();
    serde_json::to_string(&v).expect("strings serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub src: String,
    pub dst: String,
    pub color: String,
    #[serde(default = "one")]
    pub value: i64,
}

fn one() -> i64 {
    1
}

impl Arrow {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, color: impl Into<String>) -> Arrow {
        Arrow { src: src.into(), dst: dst.into(), color: color.into(), value: 1 }
    }

    pub fn valued(src: impl Into<String>, dst: impl Into<String>, color: impl Into<String>, value: i64) -> Arrow {
        Arrow { src: src.into(), dst: dst.into(), color: color.into(), value }
    }
}

/// A colored quiver with integer arrow values, reduced into GF(p) when a module
/// is built. Vertex order is significant: it is the basis order of `M_Γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuiverJson", into = "QuiverJson")]
pub struct ColoredQuiver {
    vertices: Vec<String>,
    colors: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<String>,
    pub colors: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl TryFrom<QuiverJson> for ColoredQuiver {
    type Error = QuiverError;
    fn try_from(j: QuiverJson) -> Result<Self, Self::Error> {
        make_quiver(j.vertices, j.colors, j.arrows)
    }
}

impl From<ColoredQuiver> for QuiverJson {
    fn from(q: ColoredQuiver) -> QuiverJson {
        QuiverJson { vertices: q.vertices, colors: q.colors, arrows: q.arrows }
    }
}

/// Validates and builds a quiver. Colors are deduplicated keeping first occurrence.
pub fn make_quiver(vertices: Vec<String>, colors: Vec<String>, arrows: Vec<Arrow>) -> Result<ColoredQuiver, QuiverError> {
    let mut vs = HashSet::new();
    for v in &vertices {
        if !vs.insert(v.as_str()) {
            return Err(QuiverError::DuplicateVertex(v.clone()));
        }
    }
    let mut seen_colors = HashSet::new();
    let colors: Vec<String> = colors.into_iter().filter(|c| seen_colors.insert(c.clone())).collect();
    let mut keys = HashSet::new();
    for a in &arrows {
        if !vs.contains(a.src.as_str()) {
            return Err(QuiverError::UnknownVertex(a.src.clone()));
        }
        if !vs.contains(a.dst.as_str()) {
            return Err(QuiverError::UnknownVertex(a.dst.clone()));
        }
        if !seen_colors.contains(&a.color) {
            return Err(QuiverError::UnknownColor(a.color.clone()));
        }
        if !keys.insert((a.src.as_str(), a.dst.as_str(), a.color.as_str())) {
            return Err(QuiverError::DuplicateArrow(a.src.clone(), a.dst.clone(), a.color.clone()));
        }
    }
    Ok(ColoredQuiver { vertices, colors, arrows })
}

/// Merges arrows sharing `(src, dst, color)` by summing values in GF(p) and
/// drops arrows whose value is zero.
pub fn normalize(vertices: Vec<String>, colors: Vec<String>, raw: Vec<Arrow>, field: Field) -> Result<ColoredQuiver, QuiverError> {
    let mut order: Vec<(String, String, String)> = Vec::new();
    let mut sums: HashMap<(String, String, String), u32> = HashMap::new();
    for a in raw {
        let key = (a.src, a.dst, a.color);
        let v = field.reduce(a.value);
        match sums.get_mut(&key) {
            Some(s) => *s = field.add(*s, v),
            None => {
                order.push(key.clone());
                sums.insert(key, v);
            }
        }
    }
    let arrows = order
        .into_iter()
        .filter_map(|k| {
            let v = sums[&k];
            (v != 0).then(|| Arrow::valued(k.0, k.1, k.2, v as i64))
        })
        .collect();
    make_quiver(vertices, colors, arrows)
}

impl ColoredQuiver {
    pub fn empty() -> ColoredQuiver {
        ColoredQuiver { vertices: Vec::new(), colors: Vec::new(), arrows: Vec::new() }
    }

    /// A single vertex with a loop of the given color.
    pub fn loop_point(vertex: &str, color: &str) -> ColoredQuiver {
        make_quiver(vec![vertex.into()], vec![color.into()], vec![Arrow::new(vertex, vertex, color)]).expect("loop point")
    }

    /// A single vertex with no arrows.
    pub fn point(vertex: &str) -> ColoredQuiver {
        make_quiver(vec![vertex.into()], vec![], vec![]).expect("point")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self) -> HashMap<&str, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect()
    }

    /// Colors that label at least one arrow.
    pub fn used_colors(&self) -> BTreeSet<String> {
        self.arrows.iter().map(|a| a.color.clone()).collect()
    }

    fn check_vertices<S: AsRef<str>>(&self, vs: &[S]) -> Result<HashSet<String>, QuiverError> {
        let idx = self.vertex_index();
        let mut out = HashSet::new();
        for v in vs {
            if !idx.contains_key(v.as_ref()) {
                return Err(QuiverError::UnknownVertex(v.as_ref().to_string()));
            }
            out.insert(v.as_ref().to_string());
        }
        Ok(out)
    }

    /// Keeps exactly the arrows with both ends in `vs`. All colors are retained.
    pub fn full_subquiver<S: AsRef<str>>(&self, vs: &[S]) -> Result<ColoredQuiver, QuiverError> {
        let keep = self.check_vertices(vs)?;
        Ok(self.full_subquiver_set(&keep))
    }

    fn full_subquiver_set(&self, keep: &HashSet<String>) -> ColoredQuiver {
        ColoredQuiver {
            vertices: self.vertices.iter().filter(|v| keep.contains(*v)).cloned().collect(),
            colors: self.colors.clone(),
            arrows: self.arrows.iter().filter(|a| keep.contains(&a.src) && keep.contains(&a.dst)).cloned().collect(),
        }
    }

    /// Whether `s(r) ∈ vs` implies `t(r) ∈ vs` for every arrow.
    pub fn is_target_closed<S: AsRef<str>>(&self, vs: &[S]) -> Result<bool, QuiverError> {
        let keep = self.check_vertices(vs)?;
        Ok(self.arrows.iter().all(|a| !keep.contains(&a.src) || keep.contains(&a.dst)))
    }

    /// Splits along a target-closed set `vs` into the sub quiver on `vs` and
    /// the quotient quiver on the complement.
    pub fn split_by_closed<S: AsRef<str>>(&self, vs: &[S]) -> Result<(ColoredQuiver, ColoredQuiver), QuiverError> {
        let keep = self.check_vertices(vs)?;
        if let Some(a) = self.arrows.iter().find(|a| keep.contains(&a.src) && !keep.contains(&a.dst)) {
            return Err(QuiverError::NotTargetClosed(a.src.clone(), a.dst.clone()));
        }
        let rest: HashSet<String> = self.vertices.iter().filter(|v| !keep.contains(*v)).cloned().collect();
        Ok((self.full_subquiver_set(&keep), self.full_subquiver_set(&rest)))
    }

    /// Weakly connected components, each listed in vertex order.
    pub fn components(&self) -> Vec<Vec<String>> {
        let idx = self.vertex_index();
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in &self.arrows {
            let (s, t) = (find(&mut parent, idx[a.src.as_str()]), find(&mut parent, idx[a.dst.as_str()]));
            if s != t {
                parent[s.max(t)] = s.min(t);
            }
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(self.vertices[i].clone());
        }
        groups.into_values().collect()
    }

    /// Vertices reachable from `v` along arrows, including `v`.
    pub fn reachable(&self, v: &str) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = BTreeSet::from([v.to_string()]);
        let mut stack = vec![v.to_string()];
        let mut succ: HashMap<&str, Vec<&str>> = HashMap::new();
        for a in &self.arrows {
            succ.entry(a.src.as_str()).or_default().push(a.dst.as_str());
        }
        while let Some(x) = stack.pop() {
            for &y in succ.get(x.as_str()).map(|v| v.as_slice()).unwrap_or(&[]) {
                if out.insert(y.to_string()) {
                    stack.push(y.to_string());
                }
            }
        }
        out
    }

    /// Prefixes every vertex id with `prefix/`.
    pub fn prefixed(&self, prefix: &str) -> ColoredQuiver {
        let p = |v: &str| format!("{prefix}/{v}");
        ColoredQuiver {
            vertices: self.vertices.iter().map(|v| p(v)).collect(),
            colors: self.colors.clone(),
            arrows: self.arrows.iter().map(|a| Arrow::valued(p(&a.src), p(&a.dst), a.color.clone(), a.value)).collect(),
        }
    }
}

/// Disjoint union with blocks prefixed `0/`, `1/`, ...
pub fn disjoint_union(blocks: &[ColoredQuiver]) -> ColoredQuiver {
    let named: Vec<(String, ColoredQuiver)> = blocks.iter().enumerate().map(|(i, q)| (i.to_string(), q.clone())).collect();
    disjoint_union_named(&named)
}

/// Disjoint union with explicit block prefixes, which must be distinct.
pub fn disjoint_union_named(blocks: &[(String, ColoredQuiver)]) -> ColoredQuiver {
    let mut out = ColoredQuiver::empty();
    let mut colors = HashSet::new();
    for (name, q) in blocks {
        let pq = q.prefixed(name);
        out.vertices.extend(pq.vertices);
        for c in pq.colors {
            if colors.insert(c.clone()) {
                out.colors.push(c);
            }
        }
        out.arrows.extend(pq.arrows);
    }
    out
}

/// The color of the bold-arrow component `v -> v'` under the Ω-color `mu`.
pub fn bold_color(mu: &str, v: &str, w: &str) -> String {
    tag(&["bold", mu, v, w])
}

/// Substitutes a block quiver for every vertex of `omega`. Block vertices become
/// `ω/v`; each Ω-arrow of color μ becomes the complete bipartite set of arrows
/// with colors `c^μ_{v,v'}` indexed by the block-local ids.
pub fn substitute(omega: &ColoredQuiver, blocks: &BTreeMap<String, ColoredQuiver>) -> Result<ColoredQuiver, QuiverError> {
    let mut named = Vec::new();
    for w in &omega.vertices {
        let b = blocks.get(w).ok_or_else(|| QuiverError::MissingBlock(w.clone()))?;
        named.push((w.clone(), b.clone()));
    }
    let mut out = disjoint_union_named(&named);
    let mut colors: HashSet<String> = out.colors.iter().cloned().collect();
    for rho in &omega.arrows {
        let (src, dst) = (&blocks[&rho.src], &blocks[&rho.dst]);
        for v in &src.vertices {
            for w in &dst.vertices {
                let c = bold_color(&rho.color, v, w);
                if colors.insert(c.clone()) {
                    out.colors.push(c.clone());
                }
                out.arrows.push(Arrow::new(format!("{}/{v}", rho.src), format!("{}/{w}", rho.dst), c));
            }
        }
    }
    make_quiver(out.vertices, out.colors, out.arrows)
}

/// What a symbolic atom label refers to inside a generated quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomDescriptor {
    /// `simple`, `chain_limit` or `block`.
    pub kind: String,
    /// Vertices spanned by the construction the label names.
    pub vertices: Vec<String>,
    /// A vertex set whose full subquiver yields a finite representative, when
    /// the atom is visible at finite truncation.
    pub representative: Option<Vec<String>>,
}

/// A designated finite module from a construction, given by a vertex set of the
/// generated quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub label: String,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedQuiver {
    pub quiver: ColoredQuiver,
    pub atom_table: BTreeMap<String, AtomDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noetherian_family: Option<Vec<FamilyMember>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl GeneratedQuiver {
    pub fn plain(quiver: ColoredQuiver) -> GeneratedQuiver {
        GeneratedQuiver { quiver, atom_table: BTreeMap::new(), noetherian_family: None, notes: Vec::new() }
    }
}

/// Chain `Γ^0 ⇛ Γ^1 ⇛ ...` with unlabeled bold arrows, which get distinct colors.
pub fn chain(blocks: &[ColoredQuiver]) -> GeneratedQuiver {
    let labels: Vec<String> = (1..blocks.len()).map(|k| tag(&["chain", &k.to_string()])).collect();
    chain_labeled(blocks, &labels)
}

/// Chain whose `k`-th bold arrow (into block `k + 1`) has Ω-color `labels[k]`.
pub fn chain_labeled(blocks: &[ColoredQuiver], labels: &[String]) -> GeneratedQuiver {
    assert_eq!(labels.len() + 1, blocks.len().max(1), "one label per bold arrow");
    let ids: Vec<String> = (0..blocks.len()).map(|k| k.to_string()).collect();
    let arrows: Vec<Arrow> = labels.iter().enumerate().map(|(k, l)| Arrow::new(ids[k].clone(), ids[k + 1].clone(), l.clone())).collect();
    let omega = make_quiver(ids.clone(), labels.to_vec(), arrows).expect("path quiver");
    let map: BTreeMap<String, ColoredQuiver> = ids.iter().cloned().zip(blocks.iter().cloned()).collect();
    let quiver = substitute(&omega, &map).expect("every block present");
    let mut atom_table = BTreeMap::new();
    atom_table.insert("chain∞".to_string(), AtomDescriptor { kind: "chain_limit".into(), vertices: quiver.vertices.clone(), representative: None });
    if blocks.len() > 1 {
        for (k, b) in blocks.iter().enumerate() {
            let vs: Vec<String> = b.vertices.iter().map(|v| format!("{k}/{v}")).collect();
            atom_table.insert(format!("block{k}"), AtomDescriptor { kind: "block".into(), vertices: vs, representative: None });
        }
    } else {
        atom_table.remove("chain∞");
        atom_table.insert("block0".into(), AtomDescriptor { kind: "block".into(), vertices: quiver.vertices.clone(), representative: None });
    }
    GeneratedQuiver { quiver, atom_table, noetherian_family: None, notes: Vec::new() }
}

/// The ℤ-ladder over `lo..=hi`: block copies at each position, step arrows
/// `(i,v) -> (i-1,w)` with colors shared along the ladder, skip arrows
/// `(i,v) -> (i-2,w)` with colors fresh per position.
pub fn ladder(block: &ColoredQuiver, lo: i64, hi: i64) -> Result<GeneratedQuiver, QuiverError> {
    if lo > hi {
        return Err(QuiverError::EmptyRange);
    }
    let named: Vec<(String, ColoredQuiver)> = (lo..=hi).map(|i| (i.to_string(), block.clone())).collect();
    let mut q = disjoint_union_named(&named);
    for i in lo..=hi {
        for (d, fam) in [(1, "1"), (2, "2")] {
            if i - d < lo {
                continue;
            }
            for v in &block.vertices {
                for w in &block.vertices {
                    let c = if d == 1 { tag(&["ladder", fam, v, w]) } else { tag(&["ladder", fam, &i.to_string(), v, w]) };
                    if !q.colors.contains(&c) {
                        q.colors.push(c.clone());
                    }
                    q.arrows.push(Arrow::new(format!("{i}/{v}"), format!("{}/{w}", i - d), c));
                }
            }
        }
    }
    let quiver = make_quiver(q.vertices, q.colors, q.arrows)?;
    let atom_table = (lo..=hi)
        .map(|i| {
            let vs = block.vertices.iter().map(|v| format!("{i}/{v}")).collect();
            (format!("rung{i}"), AtomDescriptor { kind: "block".into(), vertices: vs, representative: None })
        })
        .collect();
    Ok(GeneratedQuiver { quiver, atom_table, noetherian_family: None, notes: Vec::new() })
}

/// Structure constants: `table[b][b2]` lists the coefficients of `b * b2` in the basis.
pub type StructureTable = Vec<Vec<Vec<i64>>>;

/// Largest basis for which associativity is checked exhaustively.
pub const ALGEBRA_CHECK_LIMIT: usize = 24;

/// The quiver with a vertex and a color per basis element and arrows
/// `v_b -> v_b'` of color `c_b''` valued by the coefficient of `b'` in `b b''`.
/// Its module is the right regular representation.
pub fn quiver_of_algebra(basis: &[String], table: &StructureTable, field: Field) -> Result<ColoredQuiver, QuiverError> {
    let n = basis.len();
    if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
        return Err(QuiverError::BadStructure(format!("expected a {n}x{n}x{n} table")));
    }
    let q = |a: usize, b: usize, k: usize| field.reduce(table[a][b][k]);
    let mul = |x: &[u32], y: &[u32]| {
        let mut out = vec![0u32; n];
        for a in 0..n {
            if x[a] == 0 {
                continue;
            }
            for b in 0..n {
                if y[b] == 0 {
                    continue;
                }
                let s = field.mul(x[a], y[b]);
                for (k, o) in out.iter_mut().enumerate() {
                    *o = field.add(*o, field.mul(s, q(a, b, k)));
                }
            }
        }
        out
    };
    let e = |i: usize| {
        let mut v = vec![0u32; n];
        v[i] = 1;
        v
    };
    if n <= ALGEBRA_CHECK_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = mul(&e(a), &e(b));
                for c in 0..n {
                    if mul(&ab, &e(c)) != mul(&e(a), &mul(&e(b), &e(c))) {
                        return Err(QuiverError::NotAssociative(basis[a].clone(), basis[b].clone(), basis[c].clone()));
                    }
                }
            }
        }
    }
    // A unit u satisfies u b = b u = b for every basis element: linear in u.
    let mut sys = crate::gf::LinearSystem::new(field, n);
    for b in 0..n {
        for k in 0..n {
            let target = if k == b { 1 } else { 0 };
            let left: Vec<u32> = (0..n).map(|a| q(a, b, k)).chain([target]).collect();
            let right: Vec<u32> = (0..n).map(|a| q(b, a, k)).chain([target]).collect();
            sys.push(crate::gf::Row::from_entries(field, &left));
            sys.push(crate::gf::Row::from_entries(field, &right));
        }
    }
    if sys.solve().is_none() {
        return Err(QuiverError::NotUnital);
    }
    let vertices: Vec<String> = basis.iter().map(|b| tag(&["v", b])).collect();
    let colors: Vec<String> = basis.iter().map(|b| tag(&["c", b])).collect();
    let mut arrows = Vec::new();
    for b in 0..n {
        for b2 in 0..n {
            for b1 in 0..n {
                let v = q(b, b2, b1);
                if v != 0 {
                    arrows.push(Arrow::valued(vertices[b].clone(), vertices[b1].clone(), colors[b2].clone(), v as i64));
                }
            }
        }
    }
    make_quiver(vertices, colors, arrows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    pub(crate) fn path3() -> ColoredQuiver {
        make_quiver(s(&["v1", "v2", "v3"]), s(&["c12", "c23"]), vec![Arrow::new("v1", "v2", "c12"), Arrow::new("v2", "v3", "c23")]).unwrap()
    }

    #[test]
    fn make_quiver_examples() {
        assert!(make_quiver(s(&["v", "w"]), s(&["c"]), vec![Arrow::new("v", "w", "c")]).is_ok());
        assert!(make_quiver(s(&["v"]), s(&["c"]), vec![Arrow::new("v", "v", "c")]).is_ok());
        assert_eq!(
            make_quiver(s(&["v", "w"]), s(&["c"]), vec![Arrow::new("v", "w", "c"), Arrow::new("v", "w", "c")]),
            Err(QuiverError::DuplicateArrow("v".into(), "w".into(), "c".into()))
        );
        assert_eq!(make_quiver(s(&["v"]), s(&["c"]), vec![Arrow::new("v", "x", "c")]), Err(QuiverError::UnknownVertex("x".into())));
        assert_eq!(make_quiver(s(&["v"]), s(&[]), vec![Arrow::new("v", "v", "c")]), Err(QuiverError::UnknownColor("c".into())));
    }

    #[test]
    fn normalize_examples() {
        let raw = vec![Arrow::new("v", "w", "c"), Arrow::new("v", "w", "c")];
        let q2 = normalize(s(&["v", "w"]), s(&["c"]), raw.clone(), Field::GF2).unwrap();
        assert!(q2.arrows().is_empty());
        let q3 = normalize(s(&["v", "w"]), s(&["c"]), raw, Field::new(3).unwrap()).unwrap();
        assert_eq!(q3.arrows(), &[Arrow::valued("v", "w", "c", 2)]);
        let p = path3();
        let again = normalize(p.vertices().to_vec(), p.colors().to_vec(), p.arrows().to_vec(), Field::GF2).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn subquiver_and_split() {
        let p = path3();
        let sub = p.full_subquiver(&["v1", "v2"]).unwrap();
        assert_eq!(sub.arrows(), &[Arrow::new("v1", "v2", "c12")]);
        assert_eq!(p.full_subquiver(p.vertices()).unwrap(), p);
        assert!(p.full_subquiver::<&str>(&[]).unwrap().vertices().is_empty());
        let (a, b) = p.split_by_closed(&["v3"]).unwrap();
        assert_eq!(a.vertices(), &s(&["v3"]));
        assert!(a.arrows().is_empty());
        assert_eq!(b.arrows(), &[Arrow::new("v1", "v2", "c12")]);
        let two = p.full_subquiver(&["v1", "v2"]).unwrap();
        assert!(matches!(two.split_by_closed(&["v1"]), Err(QuiverError::NotTargetClosed(..))));
        let (all, none) = p.split_by_closed(p.vertices()).unwrap();
        assert_eq!(all, p);
        assert!(none.vertices().is_empty());
    }

    #[test]
    fn disjoint_union_examples() {
        let u = disjoint_union(&[ColoredQuiver::loop_point("v", "a"), ColoredQuiver::loop_point("v", "b")]);
        assert_eq!(u.vertices().len(), 2);
        assert_eq!(u.arrows().len(), 2);
        let single = disjoint_union(&[path3()]);
        assert_eq!(single, path3().prefixed("0"));
        assert_eq!(disjoint_union(&[]), ColoredQuiver::empty());
        assert_eq!(u.components().len(), 2);
    }

    #[test]
    fn substitution_of_the_worked_example() {
        // Ω: ω1 -(a)-> ω2 -(a)-> ω3 -(b)-> ω4, every block the column v -> w.
        let column = make_quiver(s(&["v", "w"]), s(&["c"]), vec![Arrow::new("v", "w", "c")]).unwrap();
        let omega = make_quiver(
            s(&["w1", "w2", "w3", "w4"]),
            s(&["a", "b"]),
            vec![Arrow::new("w1", "w2", "a"), Arrow::new("w2", "w3", "a"), Arrow::new("w3", "w4", "b")],
        )
        .unwrap();
        let blocks: BTreeMap<String, ColoredQuiver> = omega.vertices().iter().map(|w| (w.clone(), column.clone())).collect();
        let q = substitute(&omega, &blocks).unwrap();
        assert_eq!(q.vertices().len(), 8);
        assert_eq!(q.arrows().len(), 4 + 12);
        let bold: BTreeSet<String> = q.arrows().iter().filter(|a| a.color != "c").map(|a| a.color.clone()).collect();
        assert_eq!(bold.len(), 8);
        // Both (a)-arrows use c^{(a)}_{v,w}.
        let vw_a = bold_color("a", "v", "w");
        let uses: Vec<&Arrow> = q.arrows().iter().filter(|a| a.color == vw_a).collect();
        assert_eq!(uses.len(), 2);
        assert_eq!((uses[0].src.as_str(), uses[0].dst.as_str()), ("w1/v", "w2/w"));

        let two = make_quiver(s(&["x", "y"]), s(&["m"]), vec![Arrow::new("x", "y", "m")]).unwrap();
        let blocks2: BTreeMap<String, ColoredQuiver> = [("x".to_string(), column.clone()), ("y".to_string(), column.clone())].into();
        let q2 = substitute(&two, &blocks2).unwrap();
        assert_eq!(q2.arrows().len(), 2 + 4);

        let lonely = make_quiver(s(&["o"]), s(&[]), vec![]).unwrap();
        let b: BTreeMap<String, ColoredQuiver> = [("o".to_string(), path3())].into();
        assert_eq!(substitute(&lonely, &b).unwrap(), path3().prefixed("o"));
        assert_eq!(substitute(&lonely, &BTreeMap::new()), Err(QuiverError::MissingBlock("o".into())));
    }

    #[test]
    fn bipartite_count_and_freshness() {
        let a = disjoint_union(&[ColoredQuiver::point("p"), ColoredQuiver::point("q"), ColoredQuiver::point("r")]);
        let b = disjoint_union(&[ColoredQuiver::point("p"), ColoredQuiver::point("q")]);
        let g = chain(&[a, b]);
        let bold: Vec<&Arrow> = g.quiver.arrows().iter().collect();
        assert_eq!(bold.len(), 6);
        let colors: BTreeSet<&str> = bold.iter().map(|a| a.color.as_str()).collect();
        assert_eq!(colors.len(), 6);
    }

    #[test]
    fn chain_examples() {
        let dot = ColoredQuiver::loop_point("v", "c");
        let g = chain(&[dot.clone(), dot.clone(), dot.clone()]);
        assert_eq!(g.quiver.vertices().len(), 3);
        assert_eq!(g.quiver.arrows().len(), 3 + 2);
        assert!(g.atom_table.contains_key("chain∞"));
        let one = chain(std::slice::from_ref(&dot));
        assert_eq!(one.atom_table.keys().collect::<Vec<_>>(), vec!["block0"]);
        let pts = chain(&[ColoredQuiver::point("a"), ColoredQuiver::point("b")]);
        assert_eq!(pts.quiver.arrows().len(), 1);
    }

    #[test]
    fn ladder_examples() {
        let g = ladder(&ColoredQuiver::point("v"), 0, 2).unwrap();
        let q = &g.quiver;
        assert_eq!(q.vertices().len(), 3);
        let step: Vec<&Arrow> = q.arrows().iter().filter(|a| a.color.contains("\"1\"")).collect();
        let skip: Vec<&Arrow> = q.arrows().iter().filter(|a| a.color.contains("\"2\"")).collect();
        assert_eq!(step.len(), 2);
        assert_eq!(step.iter().map(|a| &a.color).collect::<BTreeSet<_>>().len(), 1);
        assert_eq!(skip.len(), 1);
        let single = ladder(&path3(), 5, 5).unwrap();
        assert_eq!(single.quiver, path3().prefixed("5"));
        let two = ladder(&disjoint_union(&[ColoredQuiver::point("a"), ColoredQuiver::point("b")]), 0, 1).unwrap();
        let steps: Vec<&Arrow> = two.quiver.arrows().iter().collect();
        assert_eq!(steps.len(), 4);
        assert_eq!(steps.iter().map(|a| &a.color).collect::<BTreeSet<_>>().len(), 4);
        assert_eq!(ladder(&path3(), 1, 0), Err(QuiverError::EmptyRange));
    }

    fn table_dual_numbers() -> StructureTable {
        // basis 1, x with x^2 = 0
        vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]]
    }

    /// Upper triangular 2x2 matrices with basis e11, e12, e22.
    fn upper_triangular() -> StructureTable {
        let idx = |i: usize, j: usize| match (i, j) {
            (0, 0) => Some(0),
            (0, 1) => Some(1),
            (1, 1) => Some(2),
            _ => None,
        };
        let units = [(0, 0), (0, 1), (1, 1)];
        let mut t = vec![vec![vec![0; 3]; 3]; 3];
        for (a, &(i, j)) in units.iter().enumerate() {
            for (b, &(k, l)) in units.iter().enumerate() {
                if j == k {
                    t[a][b][idx(i, l).unwrap()] = 1;
                }
            }
        }
        t
    }

    #[test]
    fn upper_triangular_regular_module() {
        let basis = s(&["e11", "e12", "e22"]);
        let q = quiver_of_algebra(&basis, &upper_triangular(), Field::GF2).unwrap();
        assert_eq!(q.vertices().len(), 3);
        // Right multiplication table: nonzero products e11 e11, e11 e12, e12 e22, e22 e22.
        let mut got: Vec<(String, String, String)> = q.arrows().iter().map(|a| (a.src.clone(), a.dst.clone(), a.color.clone())).collect();
        got.sort();
        let v = |b: &str| tag(&["v", b]);
        let c = |b: &str| tag(&["c", b]);
        let mut want =
            vec![(v("e11"), v("e11"), c("e11")), (v("e11"), v("e12"), c("e12")), (v("e12"), v("e12"), c("e22")), (v("e22"), v("e22"), c("e22"))];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn algebra_quivers() {
        let q = quiver_of_algebra(&s(&["1", "x"]), &table_dual_numbers(), Field::GF2).unwrap();
        assert_eq!(q.vertices().len(), 2);
        // right multiplication: 1*1 = 1, 1*x = x, x*1 = x
        assert_eq!(q.arrows().len(), 3);
        let k = quiver_of_algebra(&s(&["1"]), &vec![vec![vec![1]]], Field::GF2).unwrap();
        assert_eq!(k.arrows().len(), 1);
        assert_eq!(k.arrows()[0].src, k.arrows()[0].dst);
        // GF(4) = GF(2)[x]/(x^2 + x + 1)
        let gf4: StructureTable = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]];
        assert!(quiver_of_algebra(&s(&["1", "x"]), &gf4, Field::GF2).is_ok());
        // x*x = 1 but x*1 = 0 breaks (x x) 1 = x (x 1).
        let skew: StructureTable = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 0], vec![1, 0]]];
        assert!(matches!(quiver_of_algebra(&s(&["1", "x"]), &skew, Field::GF2), Err(QuiverError::NotAssociative(..))));
        let zero: StructureTable = vec![vec![vec![0]]];
        assert_eq!(quiver_of_algebra(&s(&["z"]), &zero, Field::GF2), Err(QuiverError::NotUnital));
    }
}
