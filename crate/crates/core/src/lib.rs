//! Exact symbolic toolkit for the Haantjes-operator separation machinery
//! of the generalized Zernike family of superintegrable Hamiltonians
//! `H_(N) = p1^2 + p2^2 + sum_n gamma_n (q.p)^n`.
//!
//! Everything symbolic is exact: sparse multivariate polynomials over Q,
//! rational functions with factored denominators (no gcd anywhere — all
//! equality is cross-multiplied residual testing), and one quadratic
//! extension `a + b sqrt(D)` for the radical-valued charts. Floating point
//! appears only in [`numeric`], as a seeded independent cross-check.
//!
//! Layers, bottom up:
//!
//! * [`exact`] — scalars, the expression grammar, the `k2^2 -> 1 - k1^2`
//!   rewrite machinery.
//! * [`linalg`] — exact linear solving: rational RREF for coefficient
//!   systems, fraction-free (Bareiss) elimination over the polynomial ring
//!   for kernels.
//! * [`phase`] — Darboux phase space: Poisson brackets, differentials,
//!   pairings.
//! * [`tensor`] — (1,1)-tensor fields, Nijenhuis/Haantjes torsions,
//!   spectra, eigen-codistributions, the symplectic block test.
//! * [`models`] — the Hamiltonians, integrals, cubic algebra and the
//!   operator catalog (`K_J2`, `K_I2`, `K_I1`, `K_e` and their Nijenhuis
//!   generators).
//! * [`solver`] — the linear chain/compatibility solver under polynomial
//!   ansätze plus the nonlinear Haantjes filter.
//! * [`separation`] — canonical maps to separation coordinates, separated
//!   and Stäckel forms in mixed coordinates, conjugate-momentum search,
//!   confocal geometry, ODE singularity classification.
//! * [`obstruction`] — the cross-derivative residual showing that extended
//!   point transformations stop working beyond the quadratic family.
//! * [`numeric`] — curvature trigonometry, the geodesic polar frame and
//!   float cross-checks of exact identities.
//! * [`suites`] — the named verification suites behind the CLI.

pub mod error;
pub mod exact;
pub mod fixtures;
pub mod linalg;
pub mod models;
pub mod numeric;
pub mod obstruction;
pub mod phase;
pub mod report;
pub mod separation;
pub mod solver;
pub mod suites;
pub mod tensor;

pub use error::{Error, Result};
pub use exact::{Context, Monomial, Polynomial, QuadExtScalar, RationalFunction, Scalar};
pub use report::{Check, CheckStatus, ResidualSummary, SuiteReport};
