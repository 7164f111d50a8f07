//! Finite posets, finite topologies, and the correspondence between
//! Kolmogorov Alexandroff spaces and partial orders.
//!
//! Convention: an open set is an up-set, and `x <= y` holds iff `x` lies in the
//! closure of `{y}`. So `{p}` is open iff `p` is maximal.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("relation has a cycle through {0} and {1}")]
    CycleDetected(String, String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("points {0} and {1} are not separated by any open set")]
    NotKolmogorov(String, String),
    #[error("size {size} exceeds the bound {limit}")]
    SizeBudgetExceeded { size: usize, limit: usize },
    #[error("family is not a topology: {0}")]
    NotATopology(String),
}

/// A finite partial order on string ids. Elements are kept sorted and the
/// relation is stored reflexively and transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    le: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub le: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub maximal: Vec<String>,
    pub minimal: Vec<String>,
    pub has_3chain: bool,
    /// Minimal elements of `V(p) \ {p}` for each `p`.
    pub j: BTreeMap<String, Vec<String>>,
}

/// Default bound for [`Poset::isomorphism`].
pub const ISO_SIZE_LIMIT: usize = 8;

impl Poset {
    /// Builds the reflexive-transitive closure of `pairs` over `elements`.
    pub fn new<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Poset, OrderError> {
        let set: BTreeSet<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let elements: Vec<String> = set.into_iter().collect();
        let index: HashMap<String, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let ia = *index.get(a.as_ref()).ok_or_else(|| OrderError::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index.get(b.as_ref()).ok_or_else(|| OrderError::UnknownElement(b.as_ref().to_string()))?;
            le[ia][ib] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if le[i][j] && le[j][i] {
                    return Err(OrderError::CycleDetected(elements[i].clone(), elements[j].clone()));
                }
            }
        }
        Ok(Poset { elements, index, le })
    }

    pub fn antichain<S: AsRef<str>>(elements: &[S]) -> Poset {
        Poset::new::<&str>(&elements.iter().map(|e| e.as_ref()).collect::<Vec<_>>(), &[]).expect("antichain")
    }

    /// The chain `elements[0] < elements[1] < ...`.
    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Poset {
        let els: Vec<&str> = elements.iter().map(|e| e.as_ref()).collect();
        let pairs: Vec<(&str, &str)> = els.windows(2).map(|w| (w[0], w[1])).collect();
        Poset::new(&els, &pairs).expect("chain")
    }

    pub fn from_json(j: &PosetJson) -> Result<Poset, OrderError> {
        Poset::new(&j.elements, &j.le)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson { elements: self.elements.clone(), le: self.strict_pairs() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, e: &str) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn le_idx(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn lt_idx(&self, i: usize, j: usize) -> bool {
        i != j && self.le[i][j]
    }

    pub fn le(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.le[i][j],
            _ => false,
        }
    }

    /// All pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt_idx(i, j) {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    /// Hasse edges `(a, b)` with `a` covered by `b`.
    pub fn covers(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt_idx(i, j) && !(0..n).any(|k| self.lt_idx(i, k) && self.lt_idx(k, j)) {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    pub fn is_maximal_idx(&self, i: usize) -> bool {
        (0..self.len()).all(|j| !self.lt_idx(i, j))
    }

    pub fn is_minimal_idx(&self, i: usize) -> bool {
        (0..self.len()).all(|j| !self.lt_idx(j, i))
    }

    pub fn maximal(&self) -> Vec<String> {
        (0..self.len()).filter(|&i| self.is_maximal_idx(i)).map(|i| self.elements[i].clone()).collect()
    }

    pub fn minimal(&self) -> Vec<String> {
        (0..self.len()).filter(|&i| self.is_minimal_idx(i)).map(|i| self.elements[i].clone()).collect()
    }

    /// `V(p) = {q | p <= q}` as indices.
    pub fn up_set_idx(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.le[i][j]).collect()
    }

    /// Minimal elements of `V(p) \ {p}`, in element order.
    pub fn j_idx(&self, i: usize) -> Vec<usize> {
        let above: Vec<usize> = (0..self.len()).filter(|&j| self.lt_idx(i, j)).collect();
        above.iter().copied().filter(|&j| !above.iter().any(|&k| self.lt_idx(k, j))).collect()
    }

    pub fn j(&self, e: &str) -> Option<Vec<String>> {
        let i = self.index_of(e)?;
        Some(self.j_idx(i).into_iter().map(|k| self.elements[k].clone()).collect())
    }

    pub fn has_3chain(&self) -> bool {
        let n = self.len();
        (0..n).any(|y| (0..n).any(|x| self.lt_idx(x, y)) && (0..n).any(|z| self.lt_idx(y, z)))
    }

    pub fn invariants(&self) -> InvariantReport {
        let j = (0..self.len()).map(|i| (self.elements[i].clone(), self.j_idx(i).into_iter().map(|k| self.elements[k].clone()).collect())).collect();
        InvariantReport { maximal: self.maximal(), minimal: self.minimal(), has_3chain: self.has_3chain(), j }
    }

    /// The induced order on a subset of the elements.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<Poset, OrderError> {
        for k in keep {
            if self.index_of(k.as_ref()).is_none() {
                return Err(OrderError::UnknownElement(k.as_ref().to_string()));
            }
        }
        let els: Vec<&str> = keep.iter().map(|k| k.as_ref()).collect();
        let mut pairs = Vec::new();
        for &a in &els {
            for &b in &els {
                if a != b && self.le(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::new(&els, &pairs)
    }

    /// Relabels elements through `f`, which must be injective.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Poset {
        let els: Vec<String> = self.elements.iter().map(|e| f(e)).collect();
        let pairs: Vec<(String, String)> = self.strict_pairs().into_iter().map(|(a, b)| (f(&a), f(&b))).collect();
        Poset::new(&els, &pairs).expect("relabel must be injective")
    }

    /// An order isomorphism `self -> other`, found by backtracking.
    pub fn isomorphism(&self, other: &Poset, limit: usize) -> Result<Option<BTreeMap<String, String>>, OrderError> {
        let n = self.len();
        if n > limit || other.len() > limit {
            return Err(OrderError::SizeBudgetExceeded { size: n.max(other.len()), limit });
        }
        if n != other.len() {
            return Ok(None);
        }
        let profile = |p: &Poset, i: usize| {
            let up = (0..p.len()).filter(|&j| p.le[i][j]).count();
            let down = (0..p.len()).filter(|&j| p.le[j][i]).count();
            (up, down)
        };
        let mine: Vec<_> = (0..n).map(|i| profile(self, i)).collect();
        let theirs: Vec<_> = (0..n).map(|i| profile(other, i)).collect();
        let mut a = mine.clone();
        let mut b = theirs.clone();
        a.sort();
        b.sort();
        if a != b {
            return Ok(None);
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            i: usize,
            p: &Poset,
            q: &Poset,
            mine: &[(usize, usize)],
            theirs: &[(usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == p.len() {
                return true;
            }
            for j in 0..q.len() {
                if used[j] || mine[i] != theirs[j] {
                    continue;
                }
                let ok = (0..i).all(|k| p.le[k][i] == q.le[map[k]][j] && p.le[i][k] == q.le[j][map[k]]);
                if !ok {
                    continue;
                }
                map[i] = j;
                used[j] = true;
                if go(i + 1, p, q, mine, theirs, map, used) {
                    return true;
                }
                used[j] = false;
            }
            false
        }
        if go(0, self, other, &mine, &theirs, &mut map, &mut used) {
            Ok(Some((0..n).map(|i| (self.elements[i].clone(), other.elements[map[i]].clone())).collect()))
        } else {
            Ok(None)
        }
    }
}

/// A topology on at most 64 points. Opens are bitsets over the sorted point list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    points: Vec<String>,
    opens: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

/// Bound on the number of open sets a topology may materialize.
pub const OPEN_SET_LIMIT: usize = 1 << 16;

impl FiniteTopology {
    /// Validates a family of opens over the given points.
    pub fn new<S: AsRef<str>>(points: &[S], opens: &[Vec<S>]) -> Result<FiniteTopology, OrderError> {
        let pts = sorted_points(points)?;
        let masks = opens.iter().map(|o| mask_of(&pts, o.iter().map(|s| s.as_ref()))).collect::<Result<Vec<u64>, _>>()?;
        FiniteTopology::from_masks(pts, masks)
    }

    /// The topology whose opens are all unions of members of `family`.
    pub fn generated_by_unions(points: Vec<String>, family: &[u64], limit: usize) -> Result<FiniteTopology, OrderError> {
        let pts = sorted_points(&points)?;
        debug_assert_eq!(pts, points, "points must be sorted and distinct");
        let mut seen: BTreeSet<u64> = BTreeSet::from([0]);
        let distinct: BTreeSet<u64> = family.iter().copied().collect();
        for b in distinct {
            let new: Vec<u64> = seen.iter().map(|s| s | b).filter(|u| !seen.contains(u)).collect();
            seen.extend(new);
            if seen.len() > limit {
                return Err(OrderError::SizeBudgetExceeded { size: seen.len(), limit });
            }
        }
        FiniteTopology::from_masks(pts, seen.into_iter().collect())
    }

    fn from_masks(points: Vec<String>, masks: Vec<u64>) -> Result<FiniteTopology, OrderError> {
        let full = full_mask(points.len());
        let opens: Vec<u64> = masks.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let set: BTreeSet<u64> = opens.iter().copied().collect();
        if !set.contains(&0) {
            return Err(OrderError::NotATopology("missing the empty set".into()));
        }
        if !set.contains(&full) {
            return Err(OrderError::NotATopology("missing the whole space".into()));
        }
        for &a in &opens {
            for &b in &opens {
                if !set.contains(&(a | b)) || !set.contains(&(a & b)) {
                    return Err(OrderError::NotATopology("not closed under union and intersection".into()));
                }
            }
        }
        Ok(FiniteTopology { points, opens })
    }

    pub fn from_json(j: &TopologyJson) -> Result<FiniteTopology, OrderError> {
        FiniteTopology::new(&j.points, &j.opens)
    }

    pub fn to_json(&self) -> TopologyJson {
        TopologyJson { points: self.points.clone(), opens: self.opens.iter().map(|&m| self.names(m)).collect() }
    }

    pub fn discrete<S: AsRef<str>>(points: &[S]) -> FiniteTopology {
        let pts = sorted_points(points).expect("points");
        let n = pts.len();
        assert!(n <= 16, "discrete topology on more than 16 points");
        FiniteTopology { points: pts, opens: (0..(1u64 << n)).collect() }
    }

    pub fn indiscrete<S: AsRef<str>>(points: &[S]) -> FiniteTopology {
        let pts = sorted_points(points).expect("points");
        let full = full_mask(pts.len());
        let opens = if full == 0 { vec![0] } else { vec![0, full] };
        FiniteTopology { points: pts, opens }
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn names(&self, mask: u64) -> Vec<String> {
        (0..self.points.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.points[i].clone()).collect()
    }

    pub fn mask<S: AsRef<str>>(&self, names: &[S]) -> Result<u64, OrderError> {
        mask_of(&self.points, names.iter().map(|s| s.as_ref()))
    }

    pub fn is_open(&self, mask: u64) -> bool {
        self.opens.binary_search(&mask).is_ok()
    }

    pub fn is_closed(&self, mask: u64) -> bool {
        self.is_open(full_mask(self.points.len()) & !mask)
    }

    /// Smallest closed set containing `mask`.
    pub fn closure(&self, mask: u64) -> u64 {
        let full = full_mask(self.points.len());
        let mut closed = full;
        for &o in &self.opens {
            let c = full & !o;
            if c & mask == mask {
                closed &= c;
            }
        }
        closed
    }

    pub fn is_kolmogorov(&self) -> bool {
        self.inseparable_pair().is_none()
    }

    fn inseparable_pair(&self) -> Option<(usize, usize)> {
        let n = self.points.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.opens.iter().all(|&o| (o >> i & 1) == (o >> j & 1)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Restriction to a subset of points (the subspace topology).
    pub fn subspace(&self, keep: u64) -> FiniteTopology {
        let idx: Vec<usize> = (0..self.points.len()).filter(|&i| keep >> i & 1 == 1).collect();
        let points = idx.iter().map(|&i| self.points[i].clone()).collect();
        let opens: BTreeSet<u64> =
            self.opens.iter().map(|&o| idx.iter().enumerate().filter(|(_, &i)| o >> i & 1 == 1).fold(0u64, |m, (k, _)| m | 1 << k)).collect();
        FiniteTopology { points, opens: opens.into_iter().collect() }
    }
}

fn sorted_points<S: AsRef<str>>(points: &[S]) -> Result<Vec<String>, OrderError> {
    let set: BTreeSet<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
    if set.len() > 64 {
        return Err(OrderError::SizeBudgetExceeded { size: set.len(), limit: 64 });
    }
    Ok(set.into_iter().collect())
}

fn mask_of<'a>(points: &[String], names: impl Iterator<Item = &'a str>) -> Result<u64, OrderError> {
    let mut m = 0u64;
    for name in names {
        let i = points.binary_search_by(|p| p.as_str().cmp(name)).map_err(|_| OrderError::UnknownElement(name.to_string()))?;
        m |= 1 << i;
    }
    Ok(m)
}

pub fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Opens are exactly the up-closed subsets.
pub fn alexandroff_of_poset(p: &Poset) -> Result<FiniteTopology, OrderError> {
    let n = p.len();
    if n > 64 {
        return Err(OrderError::SizeBudgetExceeded { size: n, limit: 64 });
    }
    let up: Vec<u64> = (0..n).map(|i| p.up_set_idx(i).into_iter().fold(0u64, |m, j| m | 1 << j)).collect();
    FiniteTopology::generated_by_unions(p.elements().to_vec(), &up, OPEN_SET_LIMIT)
}

/// The specialization order: `x <= y` iff `x` is in the closure of `{y}`.
pub fn poset_of_topology(x: &FiniteTopology) -> Result<Poset, OrderError> {
    if let Some((i, j)) = x.inseparable_pair() {
        return Err(OrderError::NotKolmogorov(x.points[i].clone(), x.points[j].clone()));
    }
    let n = x.points.len();
    let mut pairs = Vec::new();
    for j in 0..n {
        let cl = x.closure(1 << j);
        for i in 0..n {
            if i != j && cl >> i & 1 == 1 {
                pairs.push((x.points[i].as_str(), x.points[j].as_str()));
            }
        }
    }
    let pts: Vec<&str> = x.points.iter().map(|s| s.as_str()).collect();
    Poset::new(&pts, &pairs)
}

pub fn is_kolmogorov(x: &FiniteTopology) -> bool {
    x.is_kolmogorov()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Poset {
        Poset::new(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap()
    }

    /// Up-sets by filtering all subsets, independent of the union closure.
    fn up_sets_oracle(p: &Poset) -> Vec<u64> {
        let n = p.len();
        (0..(1u64 << n)).filter(|&m| (0..n).all(|i| m >> i & 1 == 0 || (0..n).all(|j| !p.le_idx(i, j) || m >> j & 1 == 1))).collect()
    }

    #[test]
    fn normalize_examples() {
        let p = Poset::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.le("a", "c"));
        let one = Poset::new::<&str>(&["a"], &[]).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.le("a", "a"));
        assert!(matches!(Poset::new(&["a", "b"], &[("a", "b"), ("b", "a")]), Err(OrderError::CycleDetected(..))));
        assert_eq!(Poset::new(&["a"], &[("a", "z")]), Err(OrderError::UnknownElement("z".into())));
    }

    #[test]
    fn alexandroff_examples() {
        let anti = alexandroff_of_poset(&Poset::antichain(&["a", "b"])).unwrap();
        assert_eq!(anti.opens().len(), 4);
        let chain = alexandroff_of_poset(&Poset::chain(&["a", "b"])).unwrap();
        let expected: Vec<Vec<String>> = vec![vec![], vec!["b".into()], vec!["a".into(), "b".into()]];
        let mut got = chain.to_json().opens;
        got.sort();
        let mut want = expected;
        want.sort();
        assert_eq!(got, want);
        let single = alexandroff_of_poset(&Poset::antichain(&["a"])).unwrap();
        assert_eq!(single.opens(), &[0, 1]);
        let d = diamond();
        assert_eq!(alexandroff_of_poset(&d).unwrap().opens(), up_sets_oracle(&d).as_slice());
    }

    #[test]
    fn specialization_examples() {
        let disc = FiniteTopology::discrete(&["a", "b"]);
        assert!(poset_of_topology(&disc).unwrap().strict_pairs().is_empty());
        let x = FiniteTopology::new(&["a", "b"], &[vec![], vec!["b"], vec!["a", "b"]]).unwrap();
        assert_eq!(x.closure(x.mask(&["b"]).unwrap()), 0b11);
        assert_eq!(poset_of_topology(&x).unwrap().strict_pairs(), vec![("a".to_string(), "b".to_string())]);
        let ind = FiniteTopology::indiscrete(&["a", "b"]);
        assert!(matches!(poset_of_topology(&ind), Err(OrderError::NotKolmogorov(..))));
        assert!(disc.is_kolmogorov());
        assert!(!ind.is_kolmogorov());
        assert!(x.is_kolmogorov());
    }

    #[test]
    fn invalid_families_rejected() {
        assert!(FiniteTopology::new(&["a", "b"], &[vec!["a"], vec!["a", "b"]]).is_err());
        assert!(FiniteTopology::new(&["a", "b", "c"], &[vec![], vec!["a"], vec!["b"], vec!["a", "b", "c"]]).is_err());
    }

    #[test]
    fn invariants_examples() {
        assert!(Poset::chain(&["a", "b", "c"]).has_3chain());
        let anti = Poset::antichain(&["a", "b", "c"]);
        let inv = anti.invariants();
        assert_eq!(inv.maximal.len(), 3);
        assert_eq!(inv.minimal.len(), 3);
        assert!(inv.j.values().all(|v| v.is_empty()));
        let d = diamond();
        assert_eq!(d.j("a").unwrap(), vec!["b", "c"]);
        assert!(d.has_3chain());
        // V(a) \ {a} = V(b) u V(c)
        let a = d.index_of("a").unwrap();
        let mut rest: BTreeSet<usize> = d.up_set_idx(a).into_iter().collect();
        rest.remove(&a);
        let cover: BTreeSet<usize> = d.j_idx(a).into_iter().flat_map(|k| d.up_set_idx(k)).collect();
        assert_eq!(rest, cover);
    }

    #[test]
    fn isomorphism_examples() {
        let c2 = Poset::chain(&["x", "y"]);
        let w = c2.isomorphism(&Poset::chain(&["x", "y"]), ISO_SIZE_LIMIT).unwrap().unwrap();
        assert_eq!(w["x"], "x");
        assert!(c2.isomorphism(&Poset::antichain(&["x", "y"]), ISO_SIZE_LIMIT).unwrap().is_none());
        let d = diamond();
        let relabeled = d.relabel(|e| match e {
            "a" => "w".into(),
            "b" => "z".into(),
            "c" => "x".into(),
            _ => "y".into(),
        });
        let w = d.isomorphism(&relabeled, ISO_SIZE_LIMIT).unwrap().unwrap();
        for (a, b) in d.strict_pairs() {
            assert!(relabeled.le(&w[&a], &w[&b]));
        }
        let big = Poset::antichain(&(0..9).map(|i| i.to_string()).collect::<Vec<_>>());
        assert!(matches!(big.isomorphism(&big, ISO_SIZE_LIMIT), Err(OrderError::SizeBudgetExceeded { .. })));
    }

    #[test]
    fn open_points_are_maximal() {
        let d = diamond();
        let x = alexandroff_of_poset(&d).unwrap();
        for (i, e) in d.elements().iter().enumerate() {
            let m = x.mask(&[e.as_str()]).unwrap();
            assert_eq!(x.is_open(m), d.is_maximal_idx(i));
            assert_eq!(x.is_closed(m), d.is_minimal_idx(i));
        }
    }
}
