//! Submodule lattice of a truncated infinite chain: only the tails survive.

use atomcat::gf::Field;
use atomcat::linmod::{complete_lattice, module_of_quiver, structure_report, DEFAULT_BUDGET};
use atomcat::quiver::preset;

fn main() -> Result<(), atomcat::Error> {
    let g = preset("infinite-chain", 5)?;
    let m = module_of_quiver(&g.quiver, Field::GF2);
    let lat = complete_lattice(&m, DEFAULT_BUDGET)?;
    for u in &lat.members {
        let span: Vec<&str> = (0..m.dim()).filter(|&i| u.contains(&m.basis_vector(i))).map(|i| m.labels()[i].as_str()).collect();
        println!("dim {}: {:?}", u.dim(), span);
    }
    let s = structure_report(&m, DEFAULT_BUDGET)?;
    println!("length {}, loewy layers {:?}, socle dim {}", s.composition_length, s.radical_series_lengths, s.socle.dim());
    Ok(())
}
