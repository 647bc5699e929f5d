//! Error type shared by all modules.

use crate::Complex;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// Variants split into validation failures (bad arguments, evaluation at a
/// pole, exceeded static caps) and numerical failures (non-convergence,
/// exhausted quadrature budget, degenerate fits). The CLI maps the former to
/// exit code 2 and the latter to exit code 3.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Gamma evaluated at a nonpositive integer.
    #[error("gamma pole: z = {re}{im:+}i is a nonpositive integer", re = .0.re, im = .0.im)]
    GammaPole(Complex),

    /// Result magnitude exceeds the representable range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An argument violates a documented precondition.
    #[error("domain: {0}")]
    Domain(String),

    /// Evaluation requested exactly at a pole of the continuation.
    #[error("pole: q = {location} is a pole (j = {index}) with residue {re}{im:+}i",
            re = .residue.re, im = .residue.im)]
    AtPole {
        /// Pole location in q.
        location: f64,
        /// Pole index j (the pole sits at q = -p·j).
        index: u32,
        /// Residue of the continuation in q at the pole.
        residue: Complex,
    },

    /// Extrapolation differences failed to settle.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// Adaptive refinement exceeded its panel budget.
    #[error("quadrature budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Requested Taylor order beyond the supported cap.
    #[error("taylor cap exceeded: requested k = {k}, cap = {cap}")]
    TaylorCap { k: usize, cap: usize },

    /// Matrix numerically singular where non-singularity is required.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// A least-squares decay fit hit the quadrature noise floor.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    /// True for validation-type failures (CLI exit code 2).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::GammaPole(_)
                | Error::Domain(_)
                | Error::AtPole { .. }
                | Error::TaylorCap { .. }
                | Error::SingularMatrix(_)
                | Error::Overflow(_)
        )
    }
}
