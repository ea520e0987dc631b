use thiserror::Error;

#[derive(Debug, Error)]
pub enum GepupError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("linear solver failed to converge: relative residual {residual:.3e} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },

    #[error("degenerate stage equation at step {step}, stage {stage}: |denominator| = {denom:.3e}")]
    DegenerateStage { step: usize, stage: usize, denom: f64 },

    #[error("step {step} failed at stage {stage}: {source}")]
    StepFailed {
        step: usize,
        stage: usize,
        #[source]
        source: Box<GepupError>,
    },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, GepupError>;
