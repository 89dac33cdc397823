//! Matrix elements of SL(2,C) representations in the helicity basis.
//!
//! The library computes hyperspherical functions and their relatives -
//! generalized spherical functions, Jacobi and conical functions, full
//! representation matrices for the finite-dimensional (spinor), principal
//! and supplementary series - together with the machinery needed to verify
//! their identities: quadrature oracles for the integral representations,
//! infinitesimal-operator matrices and finite-difference checks of the
//! differential realizations, Clebsch-Gordan coefficients with recurrence
//! relations, and the continuous (Mehler-Fock type) transform with its
//! Plancherel identity.

pub mod cg;
pub mod funcs;
pub mod group;
pub mod halfint;
pub mod harmonic;
pub mod lie;
pub mod oracle;
pub mod special;

pub use group::{ComplexEulerAngles, GroupElement};
pub use halfint::HalfInt;
pub use special::{SeriesResult, C64};
