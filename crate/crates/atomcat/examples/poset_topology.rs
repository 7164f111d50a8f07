//! Finite posets and their Alexandroff topologies, both directions.

use atomcat::harness::posets_up_to;
use atomcat::ordertop::{alexandroff_of_poset, poset_of_topology};

fn main() -> Result<(), atomcat::Error> {
    let posets = posets_up_to(3);
    println!("{} posets with at most 3 elements", posets.len());
    for p in &posets {
        let t = alexandroff_of_poset(p)?;
        let back = poset_of_topology(&t)?;
        println!("{:?}: {} open sets, maximal {:?}, round trip {}", p.strict_pairs(), t.opens().len(), p.maximal(), back == *p);
    }
    Ok(())
}
