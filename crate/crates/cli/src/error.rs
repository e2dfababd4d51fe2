use ahpfill_core::synth::SynthError;
use ahpfill_core::{CompletionError, DematelError, IoError, MatrixError, PcmError};
use thiserror::Error;

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("comparison graph is disconnected: {}", describe(.components))]
    Disconnected { components: Vec<Vec<String>> },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Mask(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Disconnected { .. } => 3,
            CliError::Numerical(_) => 4,
            CliError::Mask(_) => 5,
        }
    }

    /// Maps a completion error, naming disconnected components by label.
    pub fn from_completion(err: CompletionError, labels: &[String]) -> Self {
        match err {
            CompletionError::Disconnected { components } => CliError::Disconnected {
                components: components
                    .into_iter()
                    .map(|c| c.into_iter().map(|k| labels[k].clone()).collect())
                    .collect(),
            },
            CompletionError::Pcm(e) => e.into(),
            CompletionError::Dematel(e) => e.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn describe(components: &[Vec<String>]) -> String {
    components
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join(" and ")
}

impl From<IoError> for CliError {
    fn from(err: IoError) -> Self {
        match err {
            IoError::Dematel(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<PcmError> for CliError {
    fn from(err: PcmError) -> Self {
        match err {
            PcmError::Matrix(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<DematelError> for CliError {
    fn from(err: DematelError) -> Self {
        match err {
            DematelError::NonConvergent { .. } | DematelError::Matrix(_) => {
                CliError::Numerical(err.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<MatrixError> for CliError {
    fn from(err: MatrixError) -> Self {
        CliError::Numerical(err.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(err: SynthError) -> Self {
        match err {
            SynthError::MaskUnavailable { .. } => CliError::Mask(err.to_string()),
            SynthError::InvalidParameter(_) => CliError::Input(err.to_string()),
        }
    }
}
