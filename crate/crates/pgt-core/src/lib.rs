//! Exact single-excitation spectra of staggered Heisenberg chains, high-precision
//! transfer probabilities and Diophantine searches for pretty-good state transfer.
// Matrix kernels read more plainly with explicit row and column indices.
#![allow(clippy::needless_range_loop)]

pub mod chain;
pub mod diophantine;
pub mod dynamics;
pub mod oracle;
pub mod pgtlab;
pub mod radicals;
pub mod spectral;

pub use radicals::HighReal;
