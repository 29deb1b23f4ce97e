//! Coherent-state path integrals evaluated exactly through dual variables.
//!
//! The crate builds the `h`-, `H`- and Laguerre symbols of bosonic
//! Hamiltonians, sums the resulting dual (occupation-number) representations
//! of `Tr e^{-βH}`, and checks them against independent operator-method
//! references. Modules, bottom-up:
//!
//! * [`ordering`]: Stirling numbers and normal / number / anti-normal reordering.
//! * [`symbols`]: symbol polynomials, the Laguerre transform and the `γ` factor.
//! * [`dual_eval`]: discrete and continuum dual sums, the three textbook
//!   actions and the harmonic-oscillator determinants.
//! * [`oracle`]: number-basis sums and dense diagonalisation.
//! * [`worldline`]: continuous-time jump (Dyson) expansion over occupation paths.
//! * [`spin`]: Schwinger-boson spin partition functions.

pub mod dual_eval;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod ordering;
pub mod spin;
pub mod symbols;
pub mod worldline;

pub use dual_eval::{DiscreteScheme, PartitionResult, Slices, SymbolKind};
pub use error::{Error, Result};
pub use numeric::TailPolicy;
pub use spin::HalfInt;
