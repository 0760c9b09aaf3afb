//! Exact computation of Newton–Okounkov bodies of graded linear series on
//! projective space, and of surface bodies from Zariski decompositions.
//!
//! Every algorithm is generic over an exact ordered field implementing
//! [`scalar::Scalar`]; the aliases below fix it to [`num_rational::BigRational`].

pub mod convbody;
pub mod exactnum;
pub mod flagval;
pub mod glseries;
pub mod monideal;
pub mod polyform;
pub mod scalar;
pub mod surfacezar;

pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type RatMatrix = exactnum::Matrix<Rational>;
pub type Form = polyform::HomogeneousForm<Rational>;
pub type Span = polyform::FormSpan<Rational>;
pub type Series = glseries::GradedSeries<Rational>;
pub type Flag = flagval::Flag<Rational>;
pub type Polytope = convbody::RationalPolytope<Rational>;
pub type SurfaceBody = surfacezar::SurfaceBody<Rational>;
pub type Zariski = surfacezar::ZariskiDecomposition<Rational>;
