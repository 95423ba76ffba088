//! Multivariate mutual information by exhaustive partition search.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::entropy::EntropyOracle;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::source::{enumerate_partitions, HypergraphSource, Partition, VertexSet};
use crate::Caps;

/// Above this many optimal partitions only the meet chain is verified, not all pairs.
const PAIRWISE_MEET_CHECK_LIMIT: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmiResult {
    pub value: Rational,
    /// All minimizers, in enumeration order.
    pub optimal_partitions: Vec<Partition>,
    /// The finest minimizer.
    pub fundamental: Partition,
}

/// `I_P(Z_B) = [Σ_C H(Z_C) − H(Z_B)] / (|P| − 1)` where `B` is the ground set of `P`.
pub fn partition_info(source: &HypergraphSource, ground: VertexSet, partition: &Partition) -> Result<Rational> {
    partition_info_with(&EntropyOracle::new(source), ground, partition)
}

pub fn partition_info_with(oracle: &EntropyOracle<'_>, ground: VertexSet, partition: &Partition) -> Result<Rational> {
    if partition.ground() != ground {
        return Err(Error::InvalidPartition(format!(
            "partition covers {:?}, expected {:?}",
            partition.ground(),
            ground
        )));
    }
    let mut sum = -oracle.entropy(ground)?;
    for block in partition.blocks() {
        sum += oracle.entropy(*block)?;
    }
    Ok(sum / int(partition.num_blocks() as i64 - 1))
}

/// `I_P(Z_B | Z_W)`: the same quantity on the source with every edge meeting `W` removed.
pub fn conditional_partition_info(
    source: &HypergraphSource,
    ground: VertexSet,
    partition: &Partition,
    given: VertexSet,
) -> Result<Rational> {
    if !given.is_subset(source.all_vertices()) {
        return Err(Error::UnknownVertex(format!("{given:?}")));
    }
    if given.intersects(ground) {
        return Err(Error::InvalidArgument(
            "conditioning set must be disjoint from the ground set".into(),
        ));
    }
    partition_info(&source.without_edges_touching(given), ground, partition)
}

/// `I(Z_B)` with its optimal partitions and fundamental partition.
pub fn mmi(source: &HypergraphSource, ground: VertexSet, caps: &Caps) -> Result<MmiResult> {
    if !ground.is_subset(source.all_vertices()) {
        return Err(Error::UnknownVertex(format!("{ground:?}")));
    }
    if ground.len() > caps.max_vertices {
        return Err(Error::CapExceeded(format!(
            "MMI over {} vertices exceeds the cap of {}",
            ground.len(),
            caps.max_vertices
        )));
    }
    let partitions: Vec<Partition> = enumerate_partitions(ground)?.collect();
    let oracle = EntropyOracle::new(source);
    let values = partitions
        .par_iter()
        .map(|p| partition_info_with(&oracle, ground, p))
        .collect::<Result<Vec<_>>>()?;

    let value = values.iter().min().expect("at least one partition").clone();
    let optimal_partitions: Vec<Partition> = partitions
        .into_iter()
        .zip(values)
        .filter(|(_, v)| *v == value)
        .map(|(p, _)| p)
        .collect();
    let fundamental = fundamental_partition(&optimal_partitions)?;
    Ok(MmiResult { value, optimal_partitions, fundamental })
}

/// Meet of all optimal partitions, checking that the optimal set is closed under meets.
fn fundamental_partition(optimal: &[Partition]) -> Result<Partition> {
    let members: HashSet<&Partition> = optimal.iter().collect();
    let not_closed = |a: &Partition, b: &Partition| {
        Error::Inconsistent(format!("meet of optimal partitions {a:?} and {b:?} is not optimal"))
    };
    if optimal.len() <= PAIRWISE_MEET_CHECK_LIMIT {
        for (i, a) in optimal.iter().enumerate() {
            for b in &optimal[i + 1..] {
                if !members.contains(&a.meet(b)?) {
                    return Err(not_closed(a, b));
                }
            }
        }
    }
    let mut acc = optimal[0].clone();
    for p in &optimal[1..] {
        let next = acc.meet(p)?;
        if !members.contains(&next) {
            return Err(not_closed(&acc, p));
        }
        acc = next;
    }
    Ok(acc)
}
