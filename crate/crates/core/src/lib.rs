//! Evolution group `exp(-itH0)` of the discrete Laguerre operator.
//!
//! `H0` is the Jacobi matrix with diagonal `2n + 1` and off-diagonal `n + 1`
//! acting on sequences indexed by `n = 0, 1, 2, ...`. Its generalized
//! eigenfunctions are the Laguerre polynomials and the kernel of its
//! evolution group has a closed form in terms of Jacobi polynomials.
//!
//! * [`polynomials`]: Laguerre / Jacobi / Legendre evaluation, exact and floating.
//! * [`operator`]: truncations of `H0`, Weyl function, second-kind polynomials, resolvent.
//! * [`kernel`]: the closed-form kernel, matrices, application to states.
//! * [`oracles`]: independent routes to the same kernel.
//! * [`estimates`]: norm identities and dispersive inequalities as grid scans.
//! * [`dynamics`]: linear propagation and Strang splitting for the NLS.

pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod exact;
pub mod kernel;
pub mod operator;
pub mod oracles;
pub mod output;
pub mod polynomials;

pub use num_complex::Complex64;

pub use dynamics::{EvolutionState, NlsConfig};
pub use error::{Error, Result};
pub use exact::ExactComplexRational;
pub use kernel::{KernelEntry, KernelMatrix, KernelMethod, KernelQuery};
pub use operator::TruncatedOperator;
pub use polynomials::{ExactPoly, GValue, PolyIndex};
