//! Configuration, seeded generators, invariant suites, worked examples and
//! the command implementations behind the `atomcat` binary.

pub mod commands;
pub mod config;
pub mod io;
pub mod random;
pub mod suites;
pub mod worked;

pub use commands::{convert_cmd, examples_cmd, preset_cmd, realize_cmd, spectrum_cmd, verify_cmd, Output, RealizeJson};
pub use config::{RunConfig, ENV_PREFIX};
pub use io::{read_json, to_json_string, write_artifacts, Artifact};
pub use random::{enumerate_posets, posets_up_to, random_poset, random_quiver, random_quiver_with, rng};
pub use suites::{render_log, run_suite, SuiteOutcome, SuiteParams, CORE_SUITES, ORDER_SUITES, SUITE_NAMES};
pub use worked::{chain_of_three, diamond, render_table, three_loops, worked_examples, ExampleRow};
