use core::fmt;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distorted model (KB / MEI) needs a lookup table for unprojection.
    MissingLut,
    /// The lookup table marks the pixel as having no ray.
    InvalidPixel { u: f64, v: f64 },
    /// Lookup tables are refused for models with a closed-form inverse.
    LutNotApplicable(&'static str),
    /// Two rasters (or a raster and a grid) disagree on size.
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    /// A parameter is outside its valid domain.
    Domain(&'static str),
    /// No pixel satisfies the evaluation mask.
    EmptyIntersection,
    /// Multi-resolution resampling needs at least one ratio.
    EmptyRatios,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MissingLut => write!(f, "distorted camera model requires a lookup table"),
            Error::InvalidPixel { u, v } => write!(f, "pixel ({u}, {v}) has no valid ray"),
            Error::LutNotApplicable(m) => {
                write!(f, "lookup table refused for {m} model (closed-form inverse exists)")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {}x{}, found {}x{}", expected.0, expected.1, found.0, found.1)
            }
            Error::Domain(msg) => write!(f, "parameter out of domain: {msg}"),
            Error::EmptyIntersection => write!(f, "no pixel is valid in both maps within the depth range"),
            Error::EmptyRatios => write!(f, "resolution ratio list is empty"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
