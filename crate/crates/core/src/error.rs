use thiserror::Error;

pub type Result<T> = std::result::Result<T, AfdError>;

#[derive(Debug, Error)]
pub enum AfdError {
    /// A length is not a power of two, or two lengths disagree.
    #[error("size error: {0}")]
    Size(String),
    /// A value lies outside the admissible domain (radius, finiteness, degree).
    #[error("domain error: {0}")]
    Domain(String),
    /// An index or count exceeds the available data.
    #[error("range error: {0}")]
    Range(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("format error: {0}")]
    Format(String),
}
