//! Hypergraphical sources, vertex subsets, partitions and rate points.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest vertex count representable by [`VertexSet`].
pub const MAX_VERTICES: usize = 32;

/// A subset of the canonical vertex indices `0..m`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_VERTICES);
        if m == 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << m) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        VertexSet(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        VertexSet(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self` with at least `min_size` elements, ordered by size
    /// and then lexicographically on the ascending element lists.
    pub fn subsets_by_size(self, min_size: usize) -> Vec<VertexSet> {
        let elems: Vec<usize> = self.iter().collect();
        (min_size..=elems.len())
            .flat_map(|k| {
                elems
                    .iter()
                    .copied()
                    .combinations(k)
                    .map(VertexSet::from_indices)
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Orders ids numerically when both are decimal integers, otherwise as strings.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub members: VertexSet,
    /// Entropy of the edge variable in bits, always positive.
    pub entropy: Rational,
}

/// A multiterminal source in which every terminal observes the independent
/// variables of the hyperedges incident on it.
///
/// Vertices are kept in canonical (natural) order and addressed internally by
/// index; edges are sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergraphSource {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    id: String,
    on: Vec<String>,
    #[serde(with = "rational::serde_str")]
    h: Rational,
}

/// Parses and validates a source description in the JSON input format.
pub fn load_source(text: &str) -> Result<HypergraphSource> {
    let raw: SourceJson = serde_json::from_str(text)?;
    let edges = raw
        .edges
        .into_iter()
        .map(|e| (e.id, e.on, e.h))
        .collect::<Vec<_>>();
    HypergraphSource::new(raw.vertices, edges)
}

impl HypergraphSource {
    /// Builds a source from vertex ids and `(edge id, incident vertex ids, entropy)` triples.
    pub fn new<V, E>(vertices: impl IntoIterator<Item = V>, edges: impl IntoIterator<Item = (E, Vec<V>, Rational)>) -> Result<Self>
    where
        V: Into<String>,
        E: Into<String>,
    {
        let mut ids: Vec<String> = vertices.into_iter().map(Into::into).collect();
        ids.sort_by(|a, b| natural_cmp(a, b));
        if let Some((a, _)) = ids.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::InvalidSource(format!("duplicate vertex {a:?}")));
        }
        if ids.len() < 2 {
            return Err(Error::InvalidSource(format!(
                "need at least 2 vertices, got {}",
                ids.len()
            )));
        }
        if ids.len() > MAX_VERTICES {
            return Err(Error::InvalidSource(format!(
                "at most {MAX_VERTICES} vertices supported, got {}",
                ids.len()
            )));
        }
        let index_of = |v: &str| ids.iter().position(|x| x == v);

        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (id, on, h) in edges {
            let id: String = id.into();
            if !seen.insert(id.clone()) {
                return Err(Error::InvalidSource(format!("duplicate edge id {id:?}")));
            }
            if on.is_empty() {
                return Err(Error::InvalidSource(format!("edge {id:?} has no vertices")));
            }
            let mut members = VertexSet::EMPTY;
            for v in on {
                let v: String = v.into();
                let i = index_of(&v).ok_or_else(|| {
                    Error::InvalidSource(format!("edge {id:?} refers to unknown vertex {v:?}"))
                })?;
                members = members.union(VertexSet::singleton(i));
            }
            if !h.is_positive() {
                return Err(Error::InvalidSource(format!(
                    "edge {id:?} must have positive entropy, got {}",
                    rational::format(&h)
                )));
            }
            out.push(Edge { id, members, entropy: h });
        }
        out.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        Ok(HypergraphSource { vertices: ids, edges: out })
    }

    /// Canonical JSON form: sorted vertices, sorted edges, rationals as strings.
    pub fn to_json(&self) -> String {
        let raw = SourceJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    on: self.render_set(e.members),
                    h: e.entropy.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("source serializes")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertices.len())
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<VertexSet> {
        ids.into_iter().try_fold(VertexSet::EMPTY, |acc, id| {
            Ok(acc.union(VertexSet::singleton(self.vertex_index(id.as_ref())?)))
        })
    }

    pub fn render_set(&self, set: VertexSet) -> Vec<String> {
        set.iter().map(|i| self.vertices[i].clone()).collect()
    }

    pub fn render_partition(&self, p: &Partition) -> Vec<Vec<String>> {
        p.blocks().iter().map(|b| self.render_set(*b)).collect()
    }

    /// Builds a partition from blocks of vertex ids. The ground set is the union.
    pub fn partition_from_ids<S: AsRef<str>>(&self, blocks: &[Vec<S>]) -> Result<Partition> {
        let blocks = blocks
            .iter()
            .map(|b| self.vertex_set(b.iter()))
            .collect::<Result<Vec<_>>>()?;
        let ground = blocks.iter().fold(VertexSet::EMPTY, |a, b| a.union(*b));
        Partition::new(ground, blocks)
    }

    /// The source with every edge meeting `removed` deleted; vertices are kept.
    pub fn without_edges_touching(&self, removed: VertexSet) -> HypergraphSource {
        HypergraphSource {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .filter(|e| !e.members.intersects(removed))
                .cloned()
                .collect(),
        }
    }

    /// Pairwise independent network: every edge joins exactly two distinct vertices.
    pub fn is_pin(&self) -> bool {
        self.edges.iter().all(|e| e.members.len() == 2)
    }

    fn require_pin(&self, what: &str) -> Result<()> {
        if self.is_pin() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} requires a PIN source")))
        }
    }

    /// Degrees in the multigraph, counting parallel edges separately.
    pub fn vertex_degrees(&self) -> Result<Vec<usize>> {
        self.require_pin("vertex degrees")?;
        let mut deg = vec![0; self.num_vertices()];
        for e in &self.edges {
            for i in e.members.iter() {
                deg[i] += 1;
            }
        }
        Ok(deg)
    }

    /// Degrees in the simple graph formed by `supp(c)`.
    pub fn support_degrees(&self) -> Result<Vec<usize>> {
        self.require_pin("vertex degrees")?;
        let mut deg = vec![0; self.num_vertices()];
        for pair in self.weights().support() {
            for i in pair.iter() {
                deg[i] += 1;
            }
        }
        Ok(deg)
    }

    pub fn weights(&self) -> WeightFunction {
        let mut w: BTreeMap<VertexSet, Rational> = BTreeMap::new();
        for e in &self.edges {
            *w.entry(e.members).or_insert_with(Rational::zero) += &e.entropy;
        }
        WeightFunction { weights: w }
    }

    pub fn total_entropy(&self) -> Rational {
        self.edges.iter().map(|e| e.entropy.clone()).sum()
    }

    /// True when the hypergraph restricted to `within` is connected (edges are
    /// clipped to `within`).
    pub fn is_connected_on(&self, within: VertexSet) -> bool {
        let Some(start) = within.min_element() else {
            return true;
        };
        let mut reached = VertexSet::singleton(start);
        loop {
            let grown = self
                .edges
                .iter()
                .map(|e| e.members.intersection(within))
                .filter(|m| m.intersects(reached))
                .fold(reached, |acc, m| acc.union(m));
            if grown == reached {
                return reached == within;
            }
            reached = grown;
        }
    }
}

/// The weight function `c`: total edge entropy per incidence set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    weights: BTreeMap<VertexSet, Rational>,
}

impl WeightFunction {
    pub fn get(&self, set: VertexSet) -> Rational {
        self.weights.get(&set).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets with positive weight, in bitmask order.
    pub fn support(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.weights
            .iter()
            .filter(|(_, w)| w.is_positive())
            .map(|(s, _)| *s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexSet, &Rational)> {
        self.weights.iter().map(|(s, w)| (*s, w))
    }

    pub fn total(&self) -> Rational {
        self.weights.values().cloned().sum()
    }
}

/// A partition of a ground set into at least two nonempty blocks, with blocks
/// sorted by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    ground: VertexSet,
    blocks: Vec<VertexSet>,
}

impl Partition {
    pub fn new(ground: VertexSet, mut blocks: Vec<VertexSet>) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 blocks, got {}",
                blocks.len()
            )));
        }
        let mut covered = VertexSet::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if b.intersects(covered) {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            covered = covered.union(*b);
        }
        if covered != ground {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {covered:?}, expected {ground:?}"
            )));
        }
        blocks.sort_by_key(|b| b.min_element());
        Ok(Partition { ground, blocks })
    }

    /// The partition of `ground` into singletons.
    pub fn singletons(ground: VertexSet) -> Result<Self> {
        Partition::new(ground, ground.iter().map(VertexSet::singleton).collect())
    }

    pub fn ground(&self) -> VertexSet {
        self.ground
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `self ⪯ other`: every block of `self` lies inside some block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.ground == other.ground
            && self
                .blocks
                .iter()
                .all(|b| other.blocks.iter().any(|c| b.is_subset(*c)))
    }

    /// Coarsest common refinement (pairwise nonempty block intersections).
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.ground != other.ground {
            return Err(Error::InvalidPartition("meet of partitions on different ground sets".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .cartesian_product(&other.blocks)
            .map(|(a, b)| a.intersection(*b))
            .filter(|x| !x.is_empty())
            .collect();
        Partition::new(self.ground, blocks)
    }

    /// Number of blocks meeting `set`.
    pub fn blocks_meeting(&self, set: VertexSet) -> usize {
        self.blocks.iter().filter(|b| b.intersects(set)).count()
    }
}

/// Iterator over every partition of a ground set into at least two blocks, in
/// restricted-growth-string order.
pub struct Partitions {
    elems: Vec<usize>,
    rgs: Vec<usize>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        // Advance to the next restricted growth string; the all-zero string
        // (one block) is the starting state and is never emitted.
        let k = self.rgs.len();
        let mut j = k;
        loop {
            if j <= 1 {
                self.done = true;
                return None;
            }
            j -= 1;
            let prefix_max = self.rgs[..j].iter().copied().max().unwrap_or(0);
            if self.rgs[j] <= prefix_max {
                self.rgs[j] += 1;
                for x in &mut self.rgs[j + 1..] {
                    *x = 0;
                }
                break;
            }
        }
        let nblocks = self.rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks = vec![VertexSet::EMPTY; nblocks];
        for (e, &b) in self.elems.iter().zip(&self.rgs) {
            blocks[b] = blocks[b].union(VertexSet::singleton(*e));
        }
        let ground = VertexSet::from_indices(self.elems.iter().copied());
        Some(Partition { ground, blocks })
    }
}

/// Enumerates every partition of `ground` into at least two nonempty blocks.
pub fn enumerate_partitions(ground: VertexSet) -> Result<Partitions> {
    if ground.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "partitions need a ground set of size >= 2, got {}",
            ground.len()
        )));
    }
    let elems: Vec<usize> = ground.iter().collect();
    let rgs = vec![0; elems.len()];
    Ok(Partitions { elems, rgs, done: false })
}

/// A candidate secret-key rate together with per-vertex discussion rates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatePoint {
    pub key_rate: Rational,
    /// Indexed by canonical vertex index.
    pub rates: Vec<Rational>,
}

impl RatePoint {
    pub fn new(key_rate: Rational, rates: Vec<Rational>) -> Result<Self> {
        if key_rate.is_negative() || rates.iter().any(Signed::is_negative) {
            return Err(Error::InvalidArgument("rates must be nonnegative".into()));
        }
        Ok(RatePoint { key_rate, rates })
    }

    pub fn zero(m: usize) -> Self {
        RatePoint { key_rate: Rational::zero(), rates: vec![Rational::zero(); m] }
    }

    /// `r(B)`.
    pub fn sum_over(&self, set: VertexSet) -> Rational {
        set.iter().map(|i| self.rates[i].clone()).sum()
    }

    /// `r(V)`.
    pub fn total(&self) -> Rational {
        self.rates.iter().cloned().sum()
    }

    /// Parses `{"r_K": "1", "r": {"1": "0", ...}}`; every vertex must be present.
    pub fn from_json(source: &HypergraphSource, text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(rename = "r_K", with = "rational::serde_str")]
            key_rate: Rational,
            r: BTreeMap<String, RawRate>,
        }
        #[derive(Deserialize)]
        struct RawRate(#[serde(with = "rational::serde_str")] Rational);

        let raw: Raw = serde_json::from_str(text)?;
        let mut rates = vec![None; source.num_vertices()];
        for (id, RawRate(q)) in raw.r {
            rates[source.vertex_index(&id)?] = Some(q);
        }
        let rates = rates
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    Error::InvalidArgument(format!("missing rate for vertex {:?}", source.vertex_ids()[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RatePoint::new(raw.key_rate, rates)
    }

    pub fn to_json_value(&self, source: &HypergraphSource) -> serde_json::Value {
        let r: serde_json::Map<String, serde_json::Value> = source
            .vertex_ids()
            .iter()
            .zip(&self.rates)
            .map(|(id, q)| (id.clone(), rational::format(q).into()))
            .collect();
        serde_json::json!({ "r_K": rational::format(&self.key_rate), "r": r })
    }
}
