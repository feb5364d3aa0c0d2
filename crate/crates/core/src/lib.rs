//! Colored permutation groups `S_{n,r} = Z_r ≀ S_n`.
//!
//! The crate provides the group kernel ([`perm`]), the descent, major index,
//! color and flag major index statistics ([`stats`]), conjugacy classes indexed
//! by `r`-partitions ([`conjugacy`]), Young-subgroup blocks and the
//! colored-descents canonicalization ([`blocks`]), exact moments and generating
//! functions ([`moments`], [`poly`]), the degree framework of partial colored
//! permutations ([`degree`]) and Monte-Carlo normality diagnostics
//! ([`asymptotics`]).
//!
//! All probabilities and moments are exact rationals; floating point only
//! appears in [`asymptotics`].

pub mod asymptotics;
pub mod blocks;
pub mod conjugacy;
pub mod degree;
pub mod enumerate;
pub mod error;
pub mod moments;
pub mod perm;
pub mod poly;
mod serde_num;
pub mod stats;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
pub use perm::{ColoredLetter, ColoredPermutation, CustomOrder, CycleDecomposition, TotalOrder};
