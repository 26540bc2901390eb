//! Weight-one Eisenstein series `ϑ` for the split lattice `N·Z²`, its harmonic
//! Maass preimage `θ̃`, the theta kernels behind both, and numerical checks of
//! every transformation law they satisfy.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod eisenstein;
pub mod error;
pub mod kernel;
pub mod lattice;
pub mod phase;
pub mod quadrature;
pub mod schwartz;
pub mod special;
pub mod verify;
pub mod weil;

pub use eisenstein::{HarmonicExpansion, LogSkeleton, QExpansion};
pub use error::{Error, Result};
pub use kernel::{Certified, FramePoint, KernelSign, KernelValue, ShiftPair};
pub use verify::{Suite, VerificationReport};

pub use lattice::{CosetIndex, LatticeContext, LatticeVector, NormIndex};
pub use schwartz::{ModularPoint, SplitPoint};
pub use special::Accuracy;
pub use weil::{VectorValuedData, WeilMatrix};
