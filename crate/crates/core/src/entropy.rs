//! Joint and conditional entropies of sub-vectors of a hypergraphical source.
//!
//! Edge variables are mutually independent, so `H(Z_B)` is the total entropy
//! of the edges meeting `B`, and `H(Z_B | Z_{V\B})` is the total entropy of
//! the edges contained in `B`.

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::source::{HypergraphSource, VertexSet};

/// Memoization is only enabled up to this many vertices.
pub const MEMO_MAX_VERTICES: usize = 24;

/// `H(Z_B)`.
pub fn entropy(source: &HypergraphSource, set: VertexSet) -> Result<Rational> {
    check_subset(source, set)?;
    Ok(raw_entropy(source, set))
}

/// `H(Z_B | Z_{V\B})`.
pub fn cond_entropy(source: &HypergraphSource, set: VertexSet) -> Result<Rational> {
    check_subset(source, set)?;
    Ok(source
        .edges()
        .iter()
        .filter(|e| e.members.is_subset(set))
        .map(|e| e.entropy.clone())
        .sum())
}

fn raw_entropy(source: &HypergraphSource, set: VertexSet) -> Rational {
    source
        .edges()
        .iter()
        .filter(|e| e.members.intersects(set))
        .map(|e| e.entropy.clone())
        .sum()
}

fn check_subset(source: &HypergraphSource, set: VertexSet) -> Result<()> {
    if set.is_subset(source.all_vertices()) {
        Ok(())
    } else {
        let stray = set.difference(source.all_vertices()).min_element().unwrap_or(0);
        Err(Error::UnknownVertex(format!("#{stray}")))
    }
}

/// Entropy evaluator with a shared, thread-safe memo keyed by bitmask.
pub struct EntropyOracle<'a> {
    source: &'a HypergraphSource,
    memo: Option<RwLock<HashMap<u32, Rational>>>,
}

impl<'a> EntropyOracle<'a> {
    pub fn new(source: &'a HypergraphSource) -> Self {
        let memo = (source.num_vertices() <= MEMO_MAX_VERTICES).then(|| RwLock::new(HashMap::new()));
        EntropyOracle { source, memo }
    }

    pub fn source(&self) -> &'a HypergraphSource {
        self.source
    }

    pub fn entropy(&self, set: VertexSet) -> Result<Rational> {
        check_subset(self.source, set)?;
        if set.is_empty() {
            return Ok(Rational::zero());
        }
        let Some(memo) = &self.memo else {
            return Ok(raw_entropy(self.source, set));
        };
        if let Some(h) = memo.read().expect("memo lock").get(&set.0) {
            return Ok(h.clone());
        }
        let h = raw_entropy(self.source, set);
        memo.write().expect("memo lock").insert(set.0, h.clone());
        Ok(h)
    }

    pub fn cond_entropy(&self, set: VertexSet) -> Result<Rational> {
        cond_entropy(self.source, set)
    }
}
