//! Seeded generators. All randomness is ChaCha8 seeded from one `u64`, so
//! runs reproduce across platforms.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ordertop::Poset;
use crate::quiver::{make_quiver, Arrow, ColoredQuiver};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Quiver on `1..=max_vertices` vertices `v{i}` and `1..=max_colors` colors
/// `c{i}`; each (source, target, color) triple carries an arrow of value 1
/// with probability `density`.
pub fn random_quiver(seed: u64, max_vertices: usize, max_colors: usize, density: f64) -> ColoredQuiver {
    random_quiver_with(&mut rng(seed), max_vertices, max_colors, density)
}

pub fn random_quiver_with(rng: &mut ChaCha8Rng, max_vertices: usize, max_colors: usize, density: f64) -> ColoredQuiver {
    assert!(max_vertices >= 1 && max_colors >= 1, "bounds must be positive");
    let n = rng.gen_range(1..=max_vertices);
    let k = rng.gen_range(1..=max_colors);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let colors: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let mut arrows = Vec::new();
    for (s, t, c) in itertools::iproduct!(&vertices, &vertices, &colors) {
        if rng.gen_bool(density.clamp(0.0, 1.0)) {
            arrows.push(Arrow::new(s.clone(), t.clone(), c.clone()));
        }
    }
    make_quiver(vertices, colors, arrows).expect("generated quiver is well formed")
}

fn element_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Strict order relation as a bitmask over ordered pairs `i * n + j`.
fn relation_poset(n: usize, rel: u64) -> Poset {
    let names = element_names(n);
    let pairs: Vec<(&str, &str)> =
        (0..n).cartesian_product(0..n).filter(|(i, j)| rel >> (i * n + j) & 1 == 1).map(|(i, j)| (names[i].as_str(), names[j].as_str())).collect();
    let elems: Vec<&str> = names.iter().map(String::as_str).collect();
    Poset::new(&elems, &pairs).expect("strict order")
}

fn is_strict_order(n: usize, rel: u64) -> bool {
    let r = |i: usize, j: usize| rel >> (i * n + j) & 1 == 1;
    (0..n).all(|i| !r(i, i))
        && (0..n).cartesian_product(0..n).all(|(i, j)| !(r(i, j) && r(j, i)))
        && (0..n).cartesian_product(0..n).cartesian_product(0..n).all(|((i, j), k)| !(r(i, j) && r(j, k)) || r(i, k))
}

fn canonical_relation(n: usize, rel: u64) -> u64 {
    (0..n)
        .permutations(n)
        .map(|pi| (0..n).cartesian_product(0..n).filter(|(i, j)| rel >> (i * n + j) & 1 == 1).fold(0u64, |m, (i, j)| m | 1 << (pi[i] * n + pi[j])))
        .min()
        .unwrap_or(0)
}

/// One representative per isomorphism class of posets on exactly `n`
/// elements, named `p0..`, in a fixed order. Brute force, so keep `n <= 5`.
pub fn enumerate_posets(n: usize) -> Vec<Poset> {
    assert!(n <= 5, "enumeration is brute force over relations");
    let pairs = n * n;
    let classes: BTreeSet<u64> = (0u64..1 << pairs)
        .filter(|&rel| (0..n).all(|i| rel >> (i * n + i) & 1 == 0))
        .filter(|&rel| is_strict_order(n, rel))
        .map(|rel| canonical_relation(n, rel))
        .collect();
    classes.into_iter().map(|rel| relation_poset(n, rel)).collect()
}

/// All unlabeled posets with `1..=n` elements.
pub fn posets_up_to(n: usize) -> Vec<Poset> {
    (1..=n).flat_map(enumerate_posets).collect()
}

/// Random poset on `1..=max_elements` elements: a random DAG on shuffled
/// labels, transitively closed.
pub fn random_poset(rng: &mut ChaCha8Rng, max_elements: usize) -> Poset {
    let n = rng.gen_range(1..=max_elements.max(1));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let names = element_names(n);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.4) {
                pairs.push((names[order[a]].as_str(), names[order[b]].as_str()));
            }
        }
    }
    let elems: Vec<&str> = names.iter().map(String::as_str).collect();
    Poset::new(&elems, &pairs).expect("acyclic by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quivers_are_deterministic() {
        assert_eq!(random_quiver(1, 3, 2, 0.5), random_quiver(1, 3, 2, 0.5));
        assert!(random_quiver(7, 5, 3, 0.0).arrows().is_empty());
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16]);
    }

    #[test]
    fn enumerated_posets_are_pairwise_non_isomorphic() {
        let ps = enumerate_posets(4);
        for (i, a) in ps.iter().enumerate() {
            for b in &ps[i + 1..] {
                assert!(a.isomorphism(b, 8).unwrap().is_none());
            }
        }
    }
}
