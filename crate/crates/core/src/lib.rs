//! Bipartitional relations on a finite ground set, the lattice they form under
//! containment, and the combinatorics of its maximal chains.

pub mod bipartition;
pub mod codes;
pub mod elemset;
pub mod error;
pub mod format;
pub mod intervals;
pub mod jt;
pub mod lattice;
pub mod morse;
pub mod verify;

pub use bipartition::{
    count_bipartitions, enumerate_all, from_ordered_bipartition, is_bipartitional, ordered_partitions,
    to_ordered_bipartition, Block, OrderedBipartition, OrderedPartition, Permutation, Relation, DEFAULT_MAX_N,
};
pub use elemset::{ElemSet, MAX_ELEMENTS};
pub use error::{Error, Result};
