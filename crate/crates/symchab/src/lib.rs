//! Exact tropical and Newton-polygon machinery for bounding rational points on
//! symmetric powers of curves.
//!
//! The crate is organised in four layers:
//!
//! * [`val`] and [`series`]: p-adic valuations, valued power series with finite
//!   stored support, tropical vertex sets (`vert_w`, `vert_domain`), tropical
//!   cells, local Newton polytopes and the pure-series truncation rules.
//! * [`polytope`]: exact convex hulls, Minkowski sums, Euclidean volumes and
//!   mixed volumes of rational polytopes in dimension <= 4, plus permanents and
//!   the axis-simplex mixed-volume comparison.
//! * [`intersect`]: Bernstein-type bounds for systems of valued series, local
//!   intersection multiplicities at tropical points, stable counts over
//!   coordinate strata, and the valuation-controlled deformation that makes a
//!   system's zero set finite without moving its tropical data.
//! * [`chabauty`]: the arithmetic pipeline, from the truncation-depth function
//!   `delta` and point counts over small finite fields to residue-disk
//!   profiles, disk matrices, the permanent-with-strata count `per_prime`, and
//!   the final bound report.
//!
//! All arithmetic is exact: coefficients and coordinates are arbitrary-precision
//! rationals, valuations are rationals extended by infinity, and no floating
//! point is used anywhere.

pub mod chabauty;
pub mod intersect;
pub mod polytope;
pub mod series;
pub mod val;

mod gf;
mod linear;

use std::fmt;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter that must be prime was not.
    NotPrime(u64),
    /// Two objects that must live in the same ambient dimension do not.
    DimensionMismatch { expected: usize, found: usize },
    /// The requested operation only supports ambient dimension up to the cap.
    UnsupportedDimension { dim: usize, cap: usize },
    /// The zero series cannot be represented (it has no stored terms).
    ZeroSeries,
    /// A series stored two terms with the same exponent.
    DuplicateExponent(Vec<u32>),
    /// A term claimed an exact coefficient of zero or an infinite valuation.
    ZeroCoefficient,
    /// A series flagged as pure contains a mixed monomial.
    NotPure(Vec<u32>),
    /// A box domain with a negative corner entry.
    NegativeDomain,
    /// The evaluation point lies outside the relevant box domain.
    OutsideDomain,
    /// The operation needs a tail certificate the series does not carry.
    MissingCertificate,
    /// The domain's corner violates the truncation precondition (0 < eps < 1/l).
    InvalidTruncationDomain,
    /// The exponent set handed to the auxiliary-polynomial restriction misses a
    /// vertex exponent.
    RestrictionMissesVertex(Vec<u32>),
    /// Antiderivative input had a coefficient of negative valuation.
    NonIntegralCoefficient,
    /// Antiderivative input reduces to zero (no unit coefficient), so the pure
    /// certificate's k is undefined.
    NoUnitCoefficient,
    /// Mismatched primes between objects that must share one.
    PrimeMismatch { expected: u64, found: u64 },
    /// A matrix that must be square (or must match the ambient dimension) is not.
    BadMatrixShape,
    /// Permanent computation is capped at this order.
    PermanentTooLarge(usize),
    /// Axis-simplex rows must be strictly positive.
    NonPositiveEntry,
    /// The series is degenerate: some variable has no pure-power monomial.
    DegenerateSeries { variable: usize },
    /// The origin cannot be used as a nonvanishing witness.
    OriginWitness,
    /// The point is not on the tropical variety of every member.
    NotOnTropicalIntersection,
    /// The tropical intersection is not isolated at the given point.
    NotIsolated,
    /// Deformation ran out of valuation budget without passing its checks.
    DeformationExhausted { cap: u32 },
    /// The system has a different number of members than ambient variables.
    SystemShapeMismatch { members: usize, dim: usize },
    /// Parameter out of the documented range (k >= 1, e >= 1, and so on).
    ParameterRange(&'static str),
    /// The curve model is malformed (degree or monicity constraints).
    BadCurveModel(&'static str),
    /// The curve has bad reduction at its prime, so counting is refused.
    BadReduction,
    /// Brute-force point counting refuses field degrees beyond the cap.
    FieldDegreeTooLarge { e: u32, cap: u32 },
    /// Vanishing orders over the stored residue field need an odd prime.
    EvenPrimeOrders,
    /// The given point does not lie on the reduced curve.
    PointNotOnCurve,
    /// A supplied order matrix has the wrong shape or an entry < 1.
    BadOrderMatrix,
    /// The requested profile key is missing from the supplied order matrices.
    MissingOrders(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnsupportedDimension { dim, cap } => {
                write!(f, "dimension {dim} unsupported (cap {cap})")
            }
            Error::ZeroSeries => write!(f, "the zero series has no stored terms"),
            Error::DuplicateExponent(u) => write!(f, "duplicate exponent {u:?}"),
            Error::ZeroCoefficient => write!(f, "zero coefficient or infinite valuation in a stored term"),
            Error::NotPure(u) => write!(f, "mixed monomial {u:?} in a series flagged pure"),
            Error::NegativeDomain => write!(f, "box domain corner has a negative entry"),
            Error::OutsideDomain => write!(f, "point lies outside the box domain"),
            Error::MissingCertificate => write!(f, "operation requires a pure-with-integral-derivative tail certificate"),
            Error::InvalidTruncationDomain => {
                write!(f, "truncation domain corner must satisfy 0 < eps < 1/l")
            }
            Error::RestrictionMissesVertex(u) => {
                write!(f, "restriction support misses vertex exponent {u:?}")
            }
            Error::NonIntegralCoefficient => {
                write!(f, "antiderivative input has a coefficient of negative valuation")
            }
            Error::NoUnitCoefficient => {
                write!(f, "antiderivative input has no unit coefficient, so its reduction order is undefined")
            }
            Error::PrimeMismatch { expected, found } => {
                write!(f, "prime mismatch: expected {expected}, found {found}")
            }
            Error::BadMatrixShape => write!(f, "matrix shape is invalid for this operation"),
            Error::PermanentTooLarge(n) => write!(f, "permanent order {n} exceeds the cap 12"),
            Error::NonPositiveEntry => write!(f, "axis-simplex matrix entries must be positive"),
            Error::DegenerateSeries { variable } => {
                write!(f, "series is degenerate: no pure power of variable {variable}")
            }
            Error::OriginWitness => write!(f, "the origin cannot serve as a nonvanishing witness"),
            Error::NotOnTropicalIntersection => {
                write!(f, "point is not on every member's tropical variety")
            }
            Error::NotIsolated => write!(f, "tropical intersection is not isolated at the point"),
            Error::DeformationExhausted { cap } => {
                write!(f, "deformation checks still failing at valuation cap {cap}")
            }
            Error::SystemShapeMismatch { members, dim } => {
                write!(f, "system has {members} members in dimension {dim}")
            }
            Error::ParameterRange(what) => write!(f, "parameter out of range: {what}"),
            Error::BadCurveModel(what) => write!(f, "bad curve model: {what}"),
            Error::BadReduction => write!(f, "curve has bad reduction at its prime"),
            Error::FieldDegreeTooLarge { e, cap } => {
                write!(f, "field degree {e} exceeds the brute-force cap {cap}")
            }
            Error::EvenPrimeOrders => {
                write!(f, "vanishing orders are computed only for odd primes; supply orders explicitly at p = 2")
            }
            Error::PointNotOnCurve => write!(f, "point does not satisfy the reduced curve equation"),
            Error::BadOrderMatrix => write!(f, "order matrix must be d x d with entries >= 1"),
            Error::MissingOrders(key) => write!(f, "no order matrix supplied for profile {key}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Trial-division primality check for the small primes used throughout.
pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= p) {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
