pub mod algebra;
pub mod corpus;
pub mod formula;
pub mod nerve;
pub mod pipeline;
pub mod poset;
pub mod simplicial;

/// Exact rational scalar used for all geometry.
pub type Rational = num_rational::BigRational;
pub type RationalComplex = simplicial::Complex<Rational>;
