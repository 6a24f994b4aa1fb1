use thiserror::Error;

/// Errors from field construction, model configuration, steering and file IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),

    #[error("degenerate depth pair: z_a = z_b = {0}")]
    DegenerateDepthPair(f64),

    #[error("degenerate edge: coincident horizontal positions")]
    DegenerateEdge,

    #[error("invalid pair: both positions at depth z = {0} (trim glides cannot hold depth)")]
    EqualDepthPair(f64),

    #[error("glide angle {gamma_deg} deg outside the valid set [{min_deg}, {max_deg}] deg (either sign)")]
    GlideAngleOutOfRange {
        gamma_deg: f64,
        min_deg: f64,
        max_deg: f64,
    },

    #[error("ballast state does not match glide direction: {0}")]
    BallastMismatch(&'static str),

    #[error("model configuration: {0}")]
    ModelConfig(String),

    #[error("field validation: {0}")]
    FieldValidation(String),

    #[error("schema error in {location}: {message}")]
    Schema { location: String, message: String },

    #[error("integration produced a non-finite state at t = {t} s")]
    IntegrationDiverged { t: f64 },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
