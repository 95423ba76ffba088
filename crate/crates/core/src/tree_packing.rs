//! Fractional spanning tree packing for pairwise independent networks.
//!
//! Trees are taken over vertex pairs (parallel edges with the same endpoints
//! are one pair whose capacity is their total entropy). A packing assigns a
//! weight to each tree so that the total weight through every pair stays
//! within its capacity; the best packing value is the secrecy capacity and
//! each packing yields an achievable rate point.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::rational::{int, one, zero, Rational};
use crate::source::{HypergraphSource, RatePoint, VertexSet};
use crate::Caps;

/// A spanning tree given by its vertex pairs, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTree {
    pairs: Vec<VertexSet>,
}

impl SpanningTree {
    /// Validates that `pairs` form a spanning tree on `m` vertices.
    pub fn new(m: usize, mut pairs: Vec<VertexSet>) -> Result<Self> {
        pairs.sort();
        let all = VertexSet::full(m);
        if pairs.iter().any(|p| p.len() != 2 || !p.is_subset(all)) {
            return Err(Error::InvalidArgument("tree edges must be vertex pairs".into()));
        }
        if pairs.len() + 1 != m || !is_acyclic(m, &pairs) {
            return Err(Error::InvalidArgument(format!("{pairs:?} is not a spanning tree")));
        }
        Ok(SpanningTree { pairs })
    }

    pub fn pairs(&self) -> &[VertexSet] {
        &self.pairs
    }

    pub fn degrees(&self, m: usize) -> Vec<usize> {
        let mut d = vec![0; m];
        for p in &self.pairs {
            for i in p.iter() {
                d[i] += 1;
            }
        }
        d
    }

    /// Tree neighbours of `v`, ascending.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .pairs
            .iter()
            .filter(|p| p.contains(v))
            .map(|p| p.difference(VertexSet::singleton(v)).min_element().expect("pair"))
            .collect();
        out.sort();
        out
    }

    /// Number of distinct edge-id trees realizing this pair tree.
    pub fn edge_id_realizations(&self, source: &HypergraphSource) -> u64 {
        self.pairs
            .iter()
            .map(|p| source.edges().iter().filter(|e| e.members == *p).count() as u64)
            .product()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn is_acyclic(m: usize, pairs: &[VertexSet]) -> bool {
    let mut parent: Vec<usize> = (0..m).collect();
    for p in pairs {
        let mut it = p.iter();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

fn require_pin(source: &HypergraphSource) -> Result<()> {
    if source.is_pin() {
        Ok(())
    } else {
        Err(Error::Unsupported("tree packing requires a PIN source".into()))
    }
}

/// All spanning trees of the support graph of a PIN, in lexicographic order of
/// their sorted pair lists. A disconnected graph has none.
pub fn enumerate_spanning_trees(source: &HypergraphSource, caps: &Caps) -> Result<Vec<SpanningTree>> {
    require_pin(source)?;
    let m = source.num_vertices();
    if m > caps.max_vertices {
        return Err(Error::CapExceeded(format!(
            "spanning tree enumeration over {m} vertices exceeds the cap of {}",
            caps.max_vertices
        )));
    }
    let pairs: Vec<VertexSet> = source.weights().support().collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(m - 1);
    let parent: Vec<usize> = (0..m).collect();
    grow(&pairs, 0, m - 1, &mut chosen, parent, &mut out, caps.max_trees)?;
    Ok(out)
}

fn grow(
    pairs: &[VertexSet],
    next: usize,
    needed: usize,
    chosen: &mut Vec<VertexSet>,
    parent: Vec<usize>,
    out: &mut Vec<SpanningTree>,
    limit: usize,
) -> Result<()> {
    if chosen.len() == needed {
        if out.len() == limit {
            return Err(Error::CapExceeded(format!("more than {limit} spanning trees")));
        }
        out.push(SpanningTree { pairs: chosen.clone() });
        return Ok(());
    }
    if pairs.len() - next < needed - chosen.len() {
        return Ok(());
    }
    let pair = pairs[next];
    let mut it = pair.iter();
    let (a, b) = (it.next().unwrap(), it.next().unwrap());
    let mut with = parent.clone();
    let (ra, rb) = (find(&mut with, a), find(&mut with, b));
    if ra != rb {
        with[ra] = rb;
        chosen.push(pair);
        grow(pairs, next + 1, needed, chosen, with, out, limit)?;
        chosen.pop();
    }
    grow(pairs, next + 1, needed, chosen, parent, out, limit)
}

/// Weighted spanning trees on a fixed vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePacking {
    pub num_vertices: usize,
    pub trees: Vec<(SpanningTree, Rational)>,
}

impl TreePacking {
    pub fn empty(num_vertices: usize) -> Self {
        TreePacking { num_vertices, trees: Vec::new() }
    }

    pub fn value(&self) -> Rational {
        self.trees.iter().map(|(_, w)| w.clone()).sum()
    }

    /// Total weight routed through each pair.
    pub fn load(&self) -> BTreeMap<VertexSet, Rational> {
        let mut load: BTreeMap<VertexSet, Rational> = BTreeMap::new();
        for (t, w) in &self.trees {
            for p in t.pairs() {
                *load.entry(*p).or_insert_with(zero) += w;
            }
        }
        load
    }
}

/// Maximum fractional packing of a PIN; the packing keeps only trees with positive weight.
pub fn max_packing(source: &HypergraphSource, caps: &Caps) -> Result<(Rational, TreePacking)> {
    let trees = enumerate_spanning_trees(source, caps)?;
    let m = source.num_vertices();
    if trees.is_empty() {
        return Ok((zero(), TreePacking::empty(m)));
    }
    let weights = source.weights();
    let mut lp = LinearProgram::new(Sense::Maximize, vec![one(); trees.len()]);
    for pair in weights.support() {
        let row = trees
            .iter()
            .map(|t| if t.pairs().contains(&pair) { one() } else { zero() })
            .collect();
        lp.add_constraint(row, Relation::Le, weights.get(pair));
    }
    let sol = lp
        .solve()?
        .optimal()
        .ok_or_else(|| Error::Inconsistent("packing LP has no optimum".into()))?;
    let packing = TreePacking {
        num_vertices: m,
        trees: trees
            .into_iter()
            .zip(sol.point)
            .filter(|(_, w)| w.is_positive())
            .collect(),
    };
    Ok((sol.value, packing))
}

/// `r_K = Σ_j η_j`, `r_i = Σ_j (d_{T_j}(i) − 1) η_j`.
pub fn packing_to_rates(packing: &TreePacking) -> RatePoint {
    let m = packing.num_vertices;
    let mut rates = vec![zero(); m];
    for (tree, w) in &packing.trees {
        for (i, d) in tree.degrees(m).into_iter().enumerate() {
            rates[i] += int(d as i64 - 1) * w;
        }
    }
    RatePoint { key_rate: packing.value(), rates }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCheck {
    /// `c(B) − load(B)` for every pair that has weight or carries load.
    pub residuals: Vec<(VertexSet, Rational)>,
}

impl PackingCheck {
    pub fn is_ok(&self) -> bool {
        self.residuals.iter().all(|(_, r)| !r.is_negative())
    }

    pub fn violated(&self) -> impl Iterator<Item = &(VertexSet, Rational)> {
        self.residuals.iter().filter(|(_, r)| r.is_negative())
    }
}

/// Checks the packing constraint pair by pair.
pub fn verify_packing(source: &HypergraphSource, packing: &TreePacking) -> Result<PackingCheck> {
    let m = source.num_vertices();
    if packing.num_vertices != m {
        return Err(Error::Dimension(format!(
            "packing on {} vertices for a source with {m}",
            packing.num_vertices
        )));
    }
    for (t, w) in &packing.trees {
        SpanningTree::new(m, t.pairs().to_vec())?;
        if w.is_negative() {
            return Err(Error::InvalidArgument("tree weights must be nonnegative".into()));
        }
    }
    let weights = source.weights();
    let mut residuals: BTreeMap<VertexSet, Rational> = weights
        .iter()
        .filter(|(b, w)| b.len() == 2 && w.is_positive())
        .map(|(b, w)| (b, w.clone()))
        .collect();
    for (pair, load) in packing.load() {
        let r = residuals.entry(pair).or_insert_with(Rational::zero);
        *r -= load;
    }
    Ok(PackingCheck { residuals: residuals.into_iter().collect() })
}
