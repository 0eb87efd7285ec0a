//! Exact shift-invariance analysis for probability laws on finite abelian groups.
//!
//! For independent `X`, `Y` with laws `mu_X`, `mu_Y`, the equation `X + Y ~ X` holds
//! exactly when `mu_Y` is carried by a subgroup `A` of shifts that leave `mu_X`
//! invariant. This crate computes that structure with exact rational arithmetic:
//!
//! * [`group`]: finite abelian groups as products of cyclic groups, their
//!   characters, kernels, generated subgroups and cosets.
//! * [`circle`]: rational points of the circle `Q/Z`.
//! * [`measure`]: exact distributions, convolution, shifts, characteristic
//!   tables and Fourier inversion.
//! * [`analysis`]: the character set `Λ`, the invariance subgroup `A`,
//!   stabilizers, the fixed-point space and the theorem checks built on them.
//! * [`oracle`]: a brute-force exact linear-algebra solver for the fixed points of
//!   `ν ∗ μ_Y = ν`, independent of the character route.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod circle;
mod error;
pub mod group;
mod linalg;
pub mod measure;
pub mod oracle;

pub use analysis::{CircleClassification, CircleKind, FixedPointSpace, InvarianceAnalysis, LambdaSet};
pub use circle::{CircleRational, RationalPhase};
pub use error::{Error, Result};
pub use group::{Character, GroupElement, GroupSpec, Subgroup, DEFAULT_ORDER_CAP};
pub use measure::{CharTable, Distribution, FloatTable, ProbTable};
pub use oracle::AffineSet;

/// Exact probabilities.
pub type Rational = num_rational::BigRational;
