//! Atom spectra of two small quivers: a path of three vertices (one atom) and
//! three chained loops (three atoms, discrete).

use atomcat::atomspec::{spectrum, AtomOptions};
use atomcat::gf::Field;
use atomcat::harness::{chain_of_three, three_loops};

fn main() -> Result<(), atomcat::Error> {
    for (name, q) in [("chain of three", chain_of_three()), ("three loops", three_loops())] {
        let r = spectrum(&q, Field::GF2, AtomOptions::default())?;
        println!("{name}: {} atom(s) {:?}, discrete: {}", r.len(), r.labels(), r.is_discrete());
        print!("{}", r.to_dot());
    }
    Ok(())
}
