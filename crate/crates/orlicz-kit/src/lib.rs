//! Desk-scale toolkit for generalized fractional integral and maximal
//! operators on Orlicz spaces.
//!
//! The crate evaluates the operators `I_ρ`, `M`, `M_ρ`, `M♯`, `M_d` and the
//! commutator `[b, I_ρ]` on compactly supported piecewise-constant functions,
//! computes Luxemburg and weak-Luxemburg norms for a family of Young-type
//! functions, estimates generalized Campanato seminorms, numerically
//! certifies the scale conditions that govern operator boundedness, and
//! property-tests the associated inequalities.
//!
//! Layout follows the subject matter:
//! * [`young`] — Young-function calculus (evaluation, generalized inverse,
//!   conjugates, Δ₂/∇₂ growth checks);
//! * [`kernels`] — kernels ρ, their integral means ρ*, structural conditions;
//! * [`gridfn`] — grid functions and Orlicz norms;
//! * [`operators`] — the integral/maximal operators and the commutator;
//! * [`campanato`] — Campanato/BMO estimates and truncation;
//! * [`conditions`] — scale-condition sweeps and target-space construction;
//! * [`harness`] — property-test suites tying the modules together;
//! * [`parse`] — the descriptor grammars and file formats.

pub mod campanato;
pub mod conditions;
pub mod ext;
pub mod gridfn;
pub mod harness;
pub mod kernels;
pub mod operators;
pub mod parse;
pub mod quad;
pub mod report;
pub mod util;
pub mod young;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("kernel not integrable at 0 (condition (1.2) fails)")]
    KernelNotIntegrable,
    #[error("descriptor is not a Young function (not convex)")]
    NotYoung,
    #[error("required certificate missing or failed: {0}")]
    NotCertified(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::Invalid(msg.into())
    }

    pub fn parse(token: impl Into<String>, reason: impl Into<String>) -> Error {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }

    pub fn domain(msg: impl Into<String>) -> Error {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
