mod common;

use std::collections::BTreeSet;

use atomcat::gf::{Field, Matrix};
use atomcat::harness::random_quiver;
use atomcat::linmod::{complete_lattice, is_isomorphic, module_of_quiver, submodule_lattice_with, FdModule, LatticeOptions, Tristate};
use common::{action_matrices, as_span, brute_isomorphic, brute_submodules, Span};
use proptest::prelude::*;

fn lattice_spans(q: &atomcat::quiver::ColoredQuiver, m: &FdModule, opts: LatticeOptions) -> BTreeSet<Span> {
    let lat = submodule_lattice_with(m, opts);
    assert!(lat.complete);
    lat.members.iter().map(|u| as_span(m, q, u)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_matches_invariant_subspace_enumeration(seed in any::<u64>()) {
        let q = random_quiver(seed, 5, 3, 0.2);
        let m = module_of_quiver(&q, Field::GF2);
        let brute = brute_submodules(&q, 2);
        prop_assert_eq!(lattice_spans(&q, &m, LatticeOptions::default()), brute.clone());
        // Forcing the split-and-lift path instead of the vector sweep.
        prop_assert_eq!(lattice_spans(&q, &m, LatticeOptions { sweep_limit: 0, ..LatticeOptions::default() }), brute);
    }

    #[test]
    fn lattice_over_gf3(seed in any::<u64>()) {
        let q = random_quiver(seed, 3, 2, 0.3);
        let f = Field::new(3).unwrap();
        let m = module_of_quiver(&q, f);
        let brute = brute_submodules(&q, 3);
        prop_assert_eq!(lattice_spans(&q, &m, LatticeOptions::default()), brute.clone());
        prop_assert_eq!(lattice_spans(&q, &m, LatticeOptions { sweep_limit: 0, ..LatticeOptions::default() }), brute);
    }

    #[test]
    fn isomorphism_matches_brute_force(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (random_quiver(s1, 3, 2, 0.3), random_quiver(s2, 3, 2, 0.3));
        prop_assume!(a.vertices().len() == b.vertices().len());
        let matrices = |q: &atomcat::quiver::ColoredQuiver| {
            let mut m = action_matrices(q, 2);
            m.retain(|_, v| v.iter().any(|r| r.iter().any(|&x| x != 0)));
            m
        };
        let (ma, mb) = (matrices(&a), matrices(&b));
        let n = a.vertices().len();
        let module = |m: &std::collections::BTreeMap<String, Vec<Vec<u32>>>| {
            let acts = m.iter().map(|(k, v)| (k.clone(), Matrix::from_entries(Field::GF2, n, v))).collect();
            FdModule::new(Field::GF2, n, (0..n).map(|i| format!("b{i}")).collect(), acts).unwrap()
        };
        let expected = brute_isomorphic(&ma, &mb, n, 2);
        let got = is_isomorphic(&module(&ma), &module(&mb), atomcat::linmod::DEFAULT_ISO_CAP).unwrap();
        prop_assert_eq!(got, if expected { Tristate::Yes } else { Tristate::No });
    }
}

#[test]
fn complete_lattice_honours_the_budget() {
    let q = atomcat::quiver::make_quiver((0..6).map(|i| format!("v{i}")).collect(), vec![], vec![]).unwrap();
    let m = module_of_quiver(&q, Field::GF2);
    // Every subspace of GF(2)^6 is a submodule: 2825 of them.
    assert_eq!(complete_lattice(&m, 5000).unwrap().len(), 2825);
    assert!(complete_lattice(&m, 100).is_err());
}
