//! Error type and exit-code mapping for the command-line tool.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O error.

use zenochain::{ModelError, NumericsError, ProtocolError, SubspaceError};

#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(err: ModelError) -> Self {
        CliError::Config(err.to_string())
    }
}

impl From<NumericsError> for CliError {
    fn from(err: NumericsError) -> Self {
        CliError::Numerical(err.to_string())
    }
}

impl From<ProtocolError> for CliError {
    fn from(err: ProtocolError) -> Self {
        match err {
            ProtocolError::Model(model) => model.into(),
            ProtocolError::NotNormalized { .. }
            | ProtocolError::InvalidTimeGrid
            | ProtocolError::InvalidMixture { .. } => CliError::Config(err.to_string()),
            ProtocolError::Numerics(_) | ProtocolError::ZeroNorm { .. } => {
                CliError::Numerical(err.to_string())
            }
        }
    }
}

impl From<SubspaceError> for CliError {
    fn from(err: SubspaceError) -> Self {
        match err {
            SubspaceError::Model(model) => model.into(),
            SubspaceError::TooFewSamples { .. } => CliError::Config(err.to_string()),
            SubspaceError::Numerics(_) | SubspaceError::NoSurvivingComponent { .. } => {
                CliError::Numerical(err.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_match_the_interface_contract() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 3);
        assert_eq!(CliError::Io("x".into()).exit_code(), 4);
    }

    #[test]
    fn numerical_failures_map_to_exit_three() {
        let zero_norm = CliError::from(ProtocolError::ZeroNorm {
            step: 7,
            survival: 0.0,
        });
        assert_eq!(zero_norm.exit_code(), 3);
        let defective = CliError::from(NumericsError::Defective { condition: 1e12 });
        assert_eq!(defective.exit_code(), 3);
        let no_component = CliError::from(SubspaceError::NoSurvivingComponent { norm: 1e-20 });
        assert_eq!(no_component.exit_code(), 3);
        let bad_config = CliError::from(ModelError::PeriodicTooSmall { n_spins: 2 });
        assert_eq!(bad_config.exit_code(), 2);
    }
}
