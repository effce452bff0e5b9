//! Continued fractions, approximation coefficients and the recovery of a
//! whole coefficient sequence from one consecutive pair.
//!
//! For an irrational `x₀ ∈ (0,1)` with digits `a₁, a₂, …` and convergents
//! `p_n/q_n`, the approximation coefficients are
//! `θ_n = q_n²·|x₀ − p_n/q_n|`. The crate computes them rigorously, maps the
//! dynamic pair `(x_n, y_n)` of the natural extension to the Jager pair
//! `(θ_{n−1}, θ_n)` and back, and reconstructs digits and coefficients in
//! both directions from a single Jager pair.
//!
//! Modules, bottom up:
//!
//! - [`exactreal`]: quadratic surds, dyadic intervals, checked floors.
//! - [`cfengine`]: Gauss map, digits, convergents, pasts, natural extension.
//! - [`jager`]: θ by definition and by Perron's formula, `Ψ`, `Ψ⁻¹`, the triangle.
//! - [`symmetry`]: digit recovery from θ pairs and bidirectional reconstruction.
//! - [`oracle`]: brute-force cross-validation used by the test suites.

pub mod cfengine;
pub mod error;
pub mod exactreal;
pub mod fixtures;
pub mod jager;
pub mod oracle;
pub mod symmetry;

pub use error::{Error, Result};
pub use exactreal::{PrecisionContext, QuadraticSurd, Real, RigorousReal};
