//! Realize the diamond poset both ways and compare the predictions with the
//! brute-force spectra of finite truncations.

use atomcat::atomspec::AtomOptions;
use atomcat::gf::Field;
use atomcat::harness::diamond;
use atomcat::predictor::{crosscheck, predict_realization, RealizationMode};
use atomcat::quiver::{gen_realization_acc, gen_realization_general, TruncationSpec};

fn main() -> Result<(), atomcat::Error> {
    let p = diamond();
    let opts = AtomOptions::default();

    let acc = predict_realization(&p, RealizationMode::Acc)?;
    println!("acc atoms: {:?}", acc.spectrum.labels());
    println!("witness: {:?}", acc.witness);
    for depth in 1..=3 {
        let g = gen_realization_acc(&p, TruncationSpec::depth(depth))?;
        let d = crosscheck(&acc.spectrum, &g, Field::GF2, opts)?;
        println!(
            "depth {depth}: {} vertices, matched {:?}, missing {:?}, clean {}",
            g.quiver.vertices().len(),
            d.matched_symbolic(),
            d.missing_in_brute,
            d.is_clean()
        );
    }

    let gen = predict_realization(&p, RealizationMode::General)?;
    println!("general, before quotient: {:?}", gen.pre_quotient.labels());
    println!("general, after quotient: {:?}", gen.spectrum.labels());
    let g = gen_realization_general(&p, TruncationSpec::new(1, 0, 0))?;
    let d = crosscheck(&gen.pre_quotient, &g, Field::GF2, opts)?;
    println!("truncation matched {} atoms, clean {}", d.matched.len(), d.is_clean());
    print!("{}", gen.spectrum.to_dot());
    Ok(())
}
