//! A short run of the randomized invariant suites.

use atomcat::harness::{render_log, run_suite, RunConfig, SuiteParams};

fn main() -> Result<(), atomcat::Error> {
    let cfg = RunConfig::from_env()?;
    let params = SuiteParams { quivers: 40, posets: 40, ..SuiteParams::default() };
    print!("{}", render_log(&run_suite("all", &cfg, params)?));
    Ok(())
}
