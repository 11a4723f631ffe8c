//! Arc-transitive circulant digraphs: tensor-lexicographic decomposition,
//! multiplier isomorphism testing and census enumeration.
//!
//! A circulant `Cay(Z_n, S)` is stored as its order and sorted connection
//! set. Every connected arc-transitive circulant factors uniquely as
//! `(G0 x K_n1 x ... x K_nr)[bK1]` with `G0` a normal circulant; [`decompose`]
//! computes that triple and [`permgroup`] provides the brute-force
//! automorphism machinery used to cross-check it.

pub mod census;
pub mod circulant;
pub mod decompose;
pub mod digraph;
mod error;
pub mod isotest;
pub mod permgroup;
pub mod suite;
pub mod zmod;

pub use census::{census_constructive, census_exhaustive, CensusEntry};
pub use circulant::{Circulant, MultiplierClass};
pub use decompose::{aut_order, decompose, decompose_with, reconstruct, verify_decomposition, Decomposition};
pub use digraph::{DenseDigraph, VertexPartition};
pub use error::{Error, Result};
pub use isotest::{brute_force_isomorphic, ci_isomorphic, multiplier_equivalent, CiReport};
pub use permgroup::{automorphism_group, is_arc_transitive, is_normal_circulant, PermGroup, Permutation};
pub use zmod::Modulus;

/// Search and enumeration budgets shared by the brute-force routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest digraph order the automorphism / isomorphism search accepts.
    pub aut_bound: usize,
    /// Largest group order whose elements may be enumerated.
    pub group_budget: u64,
    /// Largest order accepted by the exhaustive census.
    pub census_bound: usize,
}

impl Limits {
    pub const DEFAULT_AUT_BOUND: usize = 64;
    pub const DEFAULT_GROUP_BUDGET: u64 = 10_000_000;
    pub const DEFAULT_CENSUS_BOUND: usize = 16;
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            aut_bound: Self::DEFAULT_AUT_BOUND,
            group_budget: Self::DEFAULT_GROUP_BUDGET,
            census_bound: Self::DEFAULT_CENSUS_BOUND,
        }
    }
}
