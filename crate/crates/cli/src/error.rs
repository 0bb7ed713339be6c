use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid operator document: {0}")]
    Document(String),

    #[error("cannot parse expression {input:?}: {msg}")]
    Expr { input: String, msg: String },

    #[error(transparent)]
    Core(#[from] bcpair_core::Error),
}

impl CliError {
    /// 1 for a failed mathematical check, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        use bcpair_core::Error as E;
        match self {
            CliError::Core(
                E::EscalationCap { .. }
                | E::NoElementOfOrder(_)
                | E::AmbiguousCompanion { .. }
                | E::Normalization(_)
                | E::OrderMismatch { .. }
                | E::NotConstant { .. }
                | E::NonzeroRemainder(_)
                | E::NotSelfAdjointShape(_)
                | E::NoPolynomialSolution(_)
                | E::VerificationFailed(_)
                | E::ValidityExhausted { .. },
            ) => 1,
            _ => 2,
        }
    }
}
