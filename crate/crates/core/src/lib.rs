//! Numerics for slice spaces, Herz-slice spaces and the Hardy–Littlewood
//! maximal operator on uniform cell-centered grids.
//!
//! Functions live on a [`GridSpec`] (dimension 1 or 2) as [`GridFunction`]s,
//! usually produced by sampling a symbolic [`FunctionSpec`]. On top of that
//! substrate the crate provides
//!
//! * Lebesgue, weak-Lebesgue and power-weighted norms ([`lebesgue`]),
//! * local `r`-averages over radius-`t` balls and the slice norm
//!   `(E_r^q)_t` with its weak variant ([`slice`]),
//! * dyadic annuli, classical Herz norms, homogeneous and non-homogeneous
//!   Herz-slice norms and their weak variants ([`herz`]),
//! * central block decompositions with exact synthesis ([`blocks`]),
//! * the centered Hardy–Littlewood maximal operator and empirical
//!   operator-norm estimation ([`maximal`]),
//! * pairings, Hölder checks and duality lower bounds ([`duality`]).
//!
//! Every integral is midpoint quadrature over the cells, so several classical
//! identities (for instance the collapse of the slice norm to the `L^q` norm
//! when `r = q`) hold exactly on the grid, not just asymptotically.

mod compensated;
pub mod blocks;
pub mod corpus;
pub mod duality;
pub mod error;
pub mod exponent;
pub mod format;
pub mod grid;
pub mod herz;
pub mod lebesgue;
pub mod maximal;
pub mod slice;

pub use blocks::{BlockDecomposition, BlockEntry, CentralBlock};
pub use corpus::{CorpusConfig, KindMix};
pub use duality::ConjugateTriple;
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use grid::{FunctionSpec, GridFunction, GridSpec, Primitive, SpecDocument, Term};
pub use herz::{AnnulusIndex, HerzParams, Variant};
pub use maximal::{RadiusLadder, SweepConfig, SweepReport, SweepRow};
pub use slice::{BallStencil, SliceParams};
