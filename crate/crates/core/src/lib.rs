//! Exact q-series arithmetic, generalized continued fractions and a
//! verification harness for a catalog of q-continued-fraction identities.
//!
//! Series and fractions are generic over their scalar; the aliases below fix
//! the common instantiations.

pub mod cfrac;
pub mod corpus;
pub mod expand;
pub mod hpreal;
pub mod qseries;
pub mod scalar;
pub mod special;
pub mod verify;

pub use cfrac::{CFrac, CfError};
pub use hpreal::HpReal;
pub use qseries::{QSeries, SeriesError, Valuation};
pub use scalar::Rational;

/// Truncated power series with exact rational coefficients.
pub type Series = QSeries<Rational>;
/// Truncated power series with `f64` coefficients, for quick experiments.
pub type SeriesF64 = QSeries<f64>;
/// Continued fraction over exact rationals.
pub type RationalCFrac = CFrac<Rational>;
/// Continued fraction whose terms are truncated series.
pub type SeriesCFrac = CFrac<Series>;
/// Continued fraction over high-precision reals.
pub type RealCFrac = CFrac<HpReal>;
