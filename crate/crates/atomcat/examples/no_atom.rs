//! The construction without atoms: every atom of a truncation is absorbed by a
//! noetherian family member, and nothing survives the quotient.

use atomcat::atomspec::AtomOptions;
use atomcat::gf::Field;
use atomcat::predictor::{absorption, predict_noatom};
use atomcat::quiver::{gen_noatom, TruncationSpec};

fn main() -> Result<(), atomcat::Error> {
    for d in 1..=3 {
        let trunc = TruncationSpec::new(d, 0, d as i64);
        let g = gen_noatom(trunc)?;
        let report = absorption(&g, Field::GF2, AtomOptions::default())?;
        let pred = predict_noatom(trunc)?;
        println!("depth {d}: {} vertices", g.quiver.vertices().len());
        for (atom, member) in &report.absorbed {
            println!("  {atom} absorbed by {member}");
        }
        println!("  unabsorbed {:?}, atoms after quotient {}", report.unabsorbed, pred.post_quotient.len());
    }
    Ok(())
}
