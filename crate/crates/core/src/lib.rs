//! Exact secret-key agreement analysis for hypergraphical sources.
//!
//! The crate computes, in exact rational arithmetic:
//!
//! * entropies, multivariate mutual information and fundamental partitions
//!   ([`entropy`], [`mmi`]);
//! * communication for omniscience and secrecy capacity ([`capacity`]);
//! * converse bounds on the public discussion rates and the resulting outer
//!   bound on the rate-constrained capacity ([`bounds`]);
//! * fractional spanning tree packings for pairwise independent networks
//!   ([`tree_packing`]) and the XOR protocols they induce, verified bit-exactly
//!   ([`protocol`]);
//! * Edmonds' greedy solution of the covering LP over submodular functions and
//!   the lamination procedure ([`greedy`]).
//!
//! Everything runs on a small dense exact simplex solver ([`lp`]).

pub mod bounds;
pub mod capacity;
pub mod catalog;
pub mod entropy;
pub mod error;
pub mod gf2;
pub mod greedy;
pub mod lp;
pub mod mmi;
pub mod protocol;
pub mod rational;
pub mod source;
pub mod tree_packing;

pub use error::{Error, Result};
pub use rational::Rational;
pub use source::{load_source, HypergraphSource, Partition, RatePoint, VertexSet};

/// Environment variable overriding [`Caps::max_vertices`].
pub const MAX_VERTICES_ENV: &str = "SKRATES_MAX_VERTICES";

/// Limits on the exhaustive enumerations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest vertex set over which partitions or subsets are enumerated.
    pub max_vertices: usize,
    /// Largest number of spanning trees enumerated for a packing.
    pub max_trees: usize,
    /// Largest total number of edge bits enumerated by the exhaustive protocol check.
    pub max_exhaustive_bits: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vertices: 10, max_trees: 100_000, max_exhaustive_bits: 24 }
    }
}

impl Caps {
    /// Defaults, with `max_vertices` taken from `SKRATES_MAX_VERTICES` when set.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var(MAX_VERTICES_ENV) {
            caps.max_vertices = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{MAX_VERTICES_ENV}={v:?} is not a count")))?;
        }
        Ok(caps)
    }
}
