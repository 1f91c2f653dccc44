//! Geometric simplicial complexes over an ordered field, their face posets,
//! carriers, open stars and the algebras of definable polyhedra.

mod complex;
mod definable;
mod io;
pub(crate) mod linalg;
mod sample;
mod scalar;

pub use complex::{simplex_name, Complex, ComplexReport, PseudomanifoldReport};
pub use definable::{
    co_implication, definable_algebras, heyting_implication, implication_holds_near, member, nearby_carriers,
    open_star, DefinableSet, Polarity,
};
pub use io::ComplexFile;
pub use sample::{sample_points, SamplePoint};
pub use scalar::Scalar;

use crate::algebra::AlgebraError;
use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("vertices of `{0}` are affinely dependent")]
    AffinelyDependent(String),
    #[error("vertex `{vertex}` has {found} coordinates, expected {expected}")]
    DimensionMismatch { vertex: String, expected: usize, found: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{vertex}`: cannot read coordinate `{text}`")]
    BadCoordinate { vertex: String, text: String },
    #[error("too many simplices ({0}); at most 128 are supported")]
    TooManySimplices(usize),
    #[error("point lies outside the complex")]
    OutsideSupport,
    #[error("unknown simplex `{0}`")]
    UnknownSimplex(String),
    #[error("expected a {expected} set, got a {found} one")]
    PolarityMismatch { expected: Polarity, found: Polarity },
    #[error("simplices {simplices:?} do not form a {polarity} definable set")]
    NotDefinable { polarity: Polarity, simplices: Vec<String> },
    #[error("complex has dimension {found}, expected {expected}")]
    WrongDimension { expected: i64, found: i64 },
    #[error("OFF export needs ambient dimension at most 3, got {0}")]
    AmbientTooLarge(usize),
    #[error("complex file: {0}")]
    Json(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<PosetError> for ComplexError {
    fn from(e: PosetError) -> Self {
        ComplexError::Algebra(e.into())
    }
}

/// Builds a complex from a vertex table and its maximal simplices.
pub fn build_complex<S: Scalar>(
    ambient: usize,
    vertices: Vec<(String, Vec<S>)>,
    maximal: &[Vec<String>],
) -> Result<Complex<S>, ComplexError> {
    Complex::build(ambient, vertices, maximal)
}

pub fn verify_complex<S: Scalar>(k: &Complex<S>) -> ComplexReport {
    k.verify()
}

pub fn face_poset<S: Scalar>(k: &Complex<S>) -> Poset {
    k.face_poset().clone()
}

pub fn dim<S: Scalar>(k: &Complex<S>) -> i64 {
    k.dim()
}

pub fn carrier<S: Scalar>(k: &Complex<S>, x: &[S]) -> Result<usize, ComplexError> {
    k.carrier(x)
}

pub fn is_closed_pseudomanifold<S: Scalar>(
    k: &Complex<S>,
    d: usize,
) -> Result<PseudomanifoldReport, ComplexError> {
    k.is_closed_pseudomanifold(d)
}
