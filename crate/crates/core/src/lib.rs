//! Finite left-distributive algebras on one generator.
//!
//! * [`forward`]: the Laver tables `A'_n` / `A_n` and the composition of `P_n`.
//! * [`table`]: period-compressed tables, with an accelerated block fill.
//! * [`backward`]: the reversed algebras `B_n`, subalgebras and bit templates.
//! * [`crit`]: critical points and their images, defined through residues.
//! * [`terms`]: one-generator terms, their evaluation, and bounded searches.
//! * [`struct_iso`]: the block-structure theorem for rows of `B_inf`.
//! * [`cache`], [`bitmap`], [`verify`]: row-cache files, bit-pattern images,
//!   and the exhaustive property suites.

pub mod backward;
pub mod bitmap;
pub mod cache;
pub mod crit;
pub mod error;
pub mod forward;
pub mod level;
pub mod naive;
pub mod registry;
pub mod struct_iso;
pub mod table;
pub mod terms;
pub mod verify;

pub use crit::{GammaIndex, ResidueVector};
pub use error::{Error, HypothesisError, Result};
pub use level::{Level, MAX_LEVEL};
pub use table::{BuildOptions, BuildStats, CompressedTable};
pub use terms::LdTerm;
