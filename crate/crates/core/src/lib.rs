//! Frolov lattice cubature for functions with bounded mixed derivatives.
//!
//! The crate builds the Frolov lattice from the real roots of an integer
//! polynomial, enumerates its points in the unit cube and integrates with
//! equal weights. A periodizing change of variables extends the rule to
//! integrands that do not vanish at the boundary, and the [`analysis`]
//! module carries the instruments used to check the construction: the
//! Fourier multiplier, a lattice Poisson summation check, the cell-count
//! diagnostic and a convergence-order harness.
//!
//! ```
//! use frolov::{CubatureRule, FrolovBasis, PolyKind, testfunctions};
//!
//! let basis = FrolovBasis::new(2, PolyKind::Standard)?;
//! let rule = CubatureRule::vanishing(&basis, 16.0)?;
//! let f = testfunctions::bump(2, 2)?;
//! let estimate = rule.integrate(|x| f.evaluate(x))?;
//! assert!((estimate - 1.0).abs() < 1e-3);
//! # Ok::<(), frolov::FrolovError>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod cubature;
pub mod ddouble;
pub mod error;
pub mod format;
pub mod lattice;
pub mod poly;
pub mod polylog;
pub mod sum;
pub mod testfunctions;
pub mod verify;

pub use cubature::{theoretical_bound, CubatureRule, Domain, Mode, PeriodizationMap};
pub use error::{FrolovError, Result};
pub use lattice::{AxisBox, FrolovBasis, NodeSet};
pub use poly::{FrolovPolynomial, PolyKind, RootSet};
pub use polylog::polylog_negative_order;
