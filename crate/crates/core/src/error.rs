use thiserror::Error;

/// Errors raised by the tiling data model and its combinators.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// A region or pattern references a tile id the system does not declare.
    #[error("unknown tile id {0} (system has {1} tiles)")]
    UnknownTile(u32, usize),

    /// A coupling pattern references a tuple tile of the wrong arity, or a
    /// component index out of range.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// A region was requested with a zero extent.
    #[error("invalid dimensions: {0}x{1}")]
    InvalidDimensions(u32, u32),

    /// A cell assignment does not cover the full rectangle.
    #[error("region cells have length {got}, expected {expected}")]
    BadCellCount { got: usize, expected: usize },
}
