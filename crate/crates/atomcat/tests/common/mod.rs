//! Brute-force oracles that share no code with the library beyond its data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use atomcat::linmod::FdModule;
use atomcat::quiver::ColoredQuiver;

pub type Vector = Vec<u32>;
/// A subspace as the set of all its vectors.
pub type Span = BTreeSet<Vector>;

/// Action matrices of `M_Γ` read straight off the arrows, rows and columns in
/// vertex order: `x_v · c = Σ value · x_w` over arrows `v → w` of color `c`.
pub fn action_matrices(q: &ColoredQuiver, p: u32) -> BTreeMap<String, Vec<Vec<u32>>> {
    let n = q.vertices().len();
    let pos = |v: &str| q.vertices().iter().position(|x| x == v).unwrap();
    let mut out: BTreeMap<String, Vec<Vec<u32>>> = BTreeMap::new();
    for a in q.arrows() {
        let m = out.entry(a.color.clone()).or_insert_with(|| vec![vec![0; n]; n]);
        let (i, j) = (pos(&a.src), pos(&a.dst));
        m[i][j] = ((m[i][j] as i64 + a.value).rem_euclid(p as i64)) as u32;
    }
    out
}

fn act(x: &[u32], a: &[Vec<u32>], p: u32) -> Vector {
    (0..x.len()).map(|j| (0..x.len()).map(|i| x[i] * a[i][j]).sum::<u32>() % p).collect()
}

fn add_multiple(x: &[u32], y: &[u32], c: u32, p: u32) -> Vector {
    x.iter().zip(y).map(|(a, b)| (a + c * b) % p).collect()
}

fn extend(s: &Span, v: &[u32], p: u32) -> Span {
    let mut out = Span::new();
    for x in s {
        for c in 0..p {
            out.insert(add_multiple(x, v, c, p));
        }
    }
    out
}

/// Every subspace of `GF(p)^n`, by breadth-first extension from zero.
pub fn all_subspaces(n: usize, p: u32) -> BTreeSet<Span> {
    let vectors: Vec<Vector> = (0..(p as usize).pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = (k % p as usize) as u32;
                    k /= p as usize;
                    d
                })
                .collect()
        })
        .collect();
    let zero: Span = [vec![0; n]].into();
    let mut seen: BTreeSet<Span> = [zero.clone()].into();
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        for v in &vectors {
            if !s.contains(v) {
                let t = extend(&s, v, p);
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
    }
    seen
}

/// Invariant subspaces of `M_Γ`, in vertex coordinates.
pub fn brute_submodules(q: &ColoredQuiver, p: u32) -> BTreeSet<Span> {
    let mats = action_matrices(q, p);
    all_subspaces(q.vertices().len(), p).into_iter().filter(|s| s.iter().all(|x| mats.values().all(|a| s.contains(&act(x, a, p))))).collect()
}

/// A library subspace of `m` rewritten in the vertex order of `q`.
pub fn as_span(m: &FdModule, q: &ColoredQuiver, u: &atomcat::gf::Subspace) -> Span {
    let perm: Vec<usize> = q.vertices().iter().map(|v| m.labels().iter().position(|l| l == v).unwrap()).collect();
    u.elements().into_iter().map(|r| perm.iter().map(|&i| r.get(i)).collect()).collect()
}

/// Isomorphism by trying every invertible matrix; only for tiny modules.
pub fn brute_isomorphic(a: &BTreeMap<String, Vec<Vec<u32>>>, b: &BTreeMap<String, Vec<Vec<u32>>>, n: usize, p: u32) -> bool {
    let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let zero = vec![vec![0u32; n]; n];
    let get = |m: &BTreeMap<String, Vec<Vec<u32>>>, k: &String| m.get(k).cloned().unwrap_or_else(|| zero.clone());
    let total = (p as usize).pow((n * n) as u32);
    'outer: for mut code in 0..total {
        let f: Vec<Vec<u32>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let d = (code % p as usize) as u32;
                        code /= p as usize;
                        d
                    })
                    .collect()
            })
            .collect();
        // Invertible iff the rows span everything.
        let mut s: Span = [vec![0; n]].into();
        for r in &f {
            s = extend(&s, r, p);
        }
        if s.len() != (p as usize).pow(n as u32) {
            continue;
        }
        for k in &keys {
            let (x, y) = (get(a, k), get(b, k));
            // A F = F B on basis rows.
            for i in 0..n {
                let lhs = act(&x[i], &f, p);
                let rhs = act(&f[i], &y, p);
                if lhs != rhs {
                    continue 'outer;
                }
            }
        }
        return true;
    }
    false
}
