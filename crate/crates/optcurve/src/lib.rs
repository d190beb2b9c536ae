//! Exact point counting and optimal-curve constructions over the prime
//! fields of discriminant -19.
//!
//! A prime q belongs to this family when m = floor(2 sqrt(q)) satisfies
//! m^2 - 4q = -19. Over such fields the Serre bound q + 1 + g m is met by
//! explicit curves in every genus g <= 3, and the deficient value
//! q + 1 - g m is met by their minimal counterparts. This crate provides
//! the arithmetic to enumerate the fields, construct and verify the curves,
//! search candidate spaces exhaustively, compute zeta functions from counts
//! over extensions, and audit tabulated reference data.
//!
//! Everything is exact: integer and modular arithmetic only, no floating
//! point anywhere in the counting or classification paths.
//!
//! ```
//! use optcurve::{Disc19Field, EllipticCurve, FieldCtx, Kind};
//!
//! let field = Disc19Field::new(47)?;
//! assert_eq!(field.m(), 13);
//! assert_eq!(field.optimal_count(3, Kind::Maximal), 87);
//!
//! let ctx = FieldCtx::new(47)?;
//! let e = EllipticCurve::new(&ctx, 1, 38)?;
//! assert_eq!(e.count(&ctx), 61); // q + 1 + m, maximal
//! # Ok::<(), optcurve::Error>(())
//! ```

pub mod disc19;
pub mod elliptic;
pub mod error;
pub mod ext;
pub mod genus2;
pub mod genus3;
pub mod field;
pub mod poly;
pub mod zeta;

pub use disc19::{Classification, Disc19Field, Kind};
pub use elliptic::{EllipticCurve, TraceReport, Twist};
pub use error::{Error, Result};
pub use ext::ExtField;
pub use genus2::{Genus2Curve, Genus2Recipe};
pub use genus3::hermitian::{HalfInt, HermitianGram};
pub use genus3::search::{SearchHit, SearchOutcome, SearchParams};
pub use genus3::{BranchReport, Genus3Cover, Genus3Report, InfinityFiber};
pub use field::FieldCtx;
pub use poly::Poly;
pub use zeta::{lpoly_from_counts, optimal_lpoly, LPolynomial};
