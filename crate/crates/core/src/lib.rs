//! Permutation tableaux of length `n` and the distributions of their
//! statistics.
//!
//! * [`tableau`]: the tableau type, validation, statistics and a text format.
//! * [`growth`]: the growth process, exhaustive enumeration, an exact uniform
//!   sampler and a dynamic program for joint count tables.
//! * [`dist`]: exact generating functions and moments.
//! * [`perm`]: permutation statistics that share these distributions.
//! * [`clt`]: Monte Carlo experiments on the normal limits.
//! * [`verify`]: exact invariant suites.
//!
//! ```
//! use permtab::tableau::example_tableau;
//!
//! let s = example_tableau().stats();
//! assert_eq!((s.rows, s.columns, s.unrestricted), (6, 7, 5));
//! assert_eq!((s.first_row_ones, s.superfluous), (3, 3));
//! ```

pub mod clt;
pub mod dist;
pub mod growth;
pub mod perm;
pub mod poly;
pub mod rng;
pub mod table;
pub mod tableau;
pub mod verify;

pub use growth::{enumerate, sample_uniform, SamplerConfig};
pub use perm::Permutation;
pub use table::DistributionTable;
pub use tableau::{StatVector, Tableau, TableauStat};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/tableaux.md")]
    mod tableaux {}
    #[doc = include_str!("../../../book/src/growth.md")]
    mod growth {}
    #[doc = include_str!("../../../book/src/distributions.md")]
    mod distributions {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
}
