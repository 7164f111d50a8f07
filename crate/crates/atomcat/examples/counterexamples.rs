//! The preset constructions with pathological spectra, checked symbolically
//! and against depth-2 truncations.

use atomcat::atomspec::AtomOptions;
use atomcat::gf::Field;
use atomcat::predictor::{crosscheck, predict_preset, preset_properties, preset_window};
use atomcat::quiver::{preset, PRESETS};

fn main() -> Result<(), atomcat::Error> {
    for name in PRESETS {
        let n = preset_window(name, 2);
        let s = predict_preset(name, n)?;
        println!("{name}: {} atoms in window {n}", s.len());
        for c in preset_properties(name, n)? {
            println!("  {}: {} ({})", c.name, c.holds, c.detail);
        }
        let d = crosscheck(&s, &preset(name, 2)?, Field::GF2, AtomOptions::default())?;
        println!("  depth 2: matched {}, clean {}", d.matched.len(), d.is_clean());
    }
    Ok(())
}
