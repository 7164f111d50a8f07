//! Atom spectra of Grothendieck categories built from colored quivers.
//!
//! The layers, bottom up: [`gf`] (prime fields, rows, subspaces), [`ordertop`]
//! (posets and finite topologies), [`quiver`] (colored quivers and the
//! generators of the infinite constructions), [`linmod`] (finite-dimensional
//! modules and their submodule lattices), [`atomspec`] (monoform modules,
//! atom supports, spectra), [`predictor`] (symbolic spectra of the infinite
//! constructions) and [`harness`] (configuration, suites, I/O).

pub mod atomspec;
pub mod gf;
pub mod harness;
pub mod linmod;
pub mod ordertop;
pub mod predictor;
pub mod quiver;

use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] gf::FieldError),
    #[error(transparent)]
    Order(#[from] ordertop::OrderError),
    #[error(transparent)]
    Quiver(#[from] quiver::QuiverError),
    #[error(transparent)]
    Linmod(#[from] linmod::LinmodError),
    #[error(transparent)]
    Atom(#[from] atomspec::AtomError),
    #[error(transparent)]
    Predict(#[from] predictor::PredictError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: invalid JSON: {message}")]
    Json { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
}

const WRAPPERS: [&str; 6] = ["Field", "Order", "Quiver", "Linmod", "Atom", "Predict"];

/// Innermost variant name of a debug rendering such as `Atom(Linmod(BudgetExceeded(10)))`.
fn innermost_variant(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let ident: String = rest.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
        let after = &rest[ident.len()..];
        if WRAPPERS.contains(&ident.as_str()) && after.starts_with('(') {
            rest = &after[1..];
        } else {
            return ident;
        }
    }
}

impl Error {
    /// Stable machine-readable code, the name of the innermost error variant.
    pub fn code(&self) -> String {
        innermost_variant(&format!("{self:?}"))
    }

    pub fn context(&self) -> Value {
        match self {
            Error::Io { path, .. } | Error::Json { path, .. } => json!({ "path": path, "message": self.to_string() }),
            _ => json!({ "message": self.to_string() }),
        }
    }

    /// `{"error": code, "context": {...}}`.
    pub fn to_json(&self) -> Value {
        json!({ "error": self.code(), "context": self.context() })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_name_the_inner_variant() {
        let e: Error = atomspec::AtomError::Linmod(linmod::LinmodError::BudgetExceeded(10)).into();
        assert_eq!(e.code(), "BudgetExceeded");
        let e: Error = quiver::QuiverError::UnknownPreset("x".into()).into();
        assert_eq!(e.code(), "UnknownPreset");
        assert_eq!(Error::Config("p".into()).code(), "Config");
        assert_eq!(e.to_json()["error"], "UnknownPreset");
    }
}
