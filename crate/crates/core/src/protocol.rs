//! Non-interactive binary linear protocols over a PIN, the XOR protocol built
//! from a tree packing, and bit-exact verification of recoverability and
//! perfect secrecy.
//!
//! Each edge `e` carries `n·h(e)` independent uniform bits. A message is one
//! public bit, a GF(2) linear form in the bits its speaker observes; the key is
//! a vector of linear forms. Secrecy and recoverability are decided by ranks,
//! and optionally re-decided by brute force over all bit assignments.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{rank, BitVec, Basis};
use crate::rational::{format, Rational};
use crate::source::{HypergraphSource, RatePoint, VertexSet};
use crate::tree_packing::TreePacking;
use crate::Caps;

/// Bit range carried by one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBits {
    pub id: String,
    pub members: VertexSet,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub speaker: usize,
    pub form: BitVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProtocol {
    blocklength: u64,
    num_vertices: usize,
    edges: Vec<EdgeBits>,
    total_bits: usize,
    messages: Vec<Message>,
    key: Vec<BitVec>,
}

fn scaled_integer(q: &Rational, n: u64, what: &str) -> Result<u64> {
    let s = q * Rational::from_integer(BigInt::from(n));
    if !s.is_integer() || s.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "{what}: n·{} = {} is not a nonnegative integer",
            format(q),
            format(&s)
        )));
    }
    s.to_integer()
        .to_u64()
        .ok_or_else(|| Error::CapExceeded(format!("{what}: {} bits", format(&s))))
}

impl LinearProtocol {
    /// A protocol with no messages and no key, fixing the bit layout for blocklength `n`.
    pub fn silent(source: &HypergraphSource, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("blocklength must be positive".into()));
        }
        let mut start = 0;
        let mut edges = Vec::with_capacity(source.edges().len());
        for e in source.edges() {
            let len = scaled_integer(&e.entropy, n, &format!("edge {}", e.id))? as usize;
            edges.push(EdgeBits { id: e.id.clone(), members: e.members, start, len });
            start += len;
        }
        Ok(LinearProtocol {
            blocklength: n,
            num_vertices: source.num_vertices(),
            edges,
            total_bits: start,
            messages: Vec::new(),
            key: Vec::new(),
        })
    }

    /// Builds and validates a protocol: every message may only involve bits
    /// of edges incident to its speaker.
    pub fn new(source: &HypergraphSource, n: u64, messages: Vec<Message>, key: Vec<BitVec>) -> Result<Self> {
        let mut p = LinearProtocol::silent(source, n)?;
        for k in &key {
            p.check_len(k)?;
        }
        p.key = key;
        for msg in messages {
            p.push_message(msg)?;
        }
        Ok(p)
    }

    fn check_len(&self, form: &BitVec) -> Result<()> {
        if form.len() != self.total_bits {
            return Err(Error::Dimension(format!(
                "linear form over {} bits, layout has {}",
                form.len(),
                self.total_bits
            )));
        }
        Ok(())
    }

    fn push_message(&mut self, msg: Message) -> Result<()> {
        self.check_len(&msg.form)?;
        if msg.speaker >= self.num_vertices {
            return Err(Error::InvalidProtocol(format!("speaker {} out of range", msg.speaker)));
        }
        if !msg.form.is_within(&self.observed_bits(msg.speaker)) {
            return Err(Error::InvalidProtocol(format!(
                "message of vertex {} uses bits it does not observe",
                msg.speaker
            )));
        }
        self.messages.push(msg);
        Ok(())
    }

    pub fn blocklength(&self) -> u64 {
        self.blocklength
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn total_bits(&self) -> usize {
        self.total_bits
    }

    pub fn edges(&self) -> &[EdgeBits] {
        &self.edges
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn key(&self) -> &[BitVec] {
        &self.key
    }

    /// Index of bit `k` of edge `id`.
    pub fn bit(&self, id: &str, k: usize) -> Result<usize> {
        let e = self
            .edges
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown edge {id:?}")))?;
        if k >= e.len {
            return Err(Error::InvalidArgument(format!("edge {id:?} has {} bits", e.len)));
        }
        Ok(e.start + k)
    }

    /// XOR of the named bits.
    pub fn form(&self, bits: &[(&str, usize)]) -> Result<BitVec> {
        let idx = bits.iter().map(|(id, k)| self.bit(id, *k)).collect::<Result<Vec<_>>>()?;
        Ok(BitVec::from_indices(self.total_bits, idx))
    }

    /// All bits of the given edge.
    pub fn edge_bits(&self, id: &str) -> Result<BitVec> {
        let e = self
            .edges
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown edge {id:?}")))?;
        Ok(BitVec::from_indices(self.total_bits, e.start..e.start + e.len))
    }

    /// Bits observed by vertex `i`.
    pub fn observed_bits(&self, i: usize) -> BitVec {
        BitVec::from_indices(
            self.total_bits,
            self.edges
                .iter()
                .filter(|e| e.members.contains(i))
                .flat_map(|e| e.start..e.start + e.len),
        )
    }

    pub fn message_bits(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_vertices];
        for m in &self.messages {
            counts[m.speaker] += 1;
        }
        counts
    }

    fn matches_layout(&self, source: &HypergraphSource) -> Result<()> {
        let expected = LinearProtocol::silent(source, self.blocklength)?;
        if expected.edges != self.edges || expected.num_vertices != self.num_vertices {
            return Err(Error::InvalidProtocol("protocol layout does not match the source".into()));
        }
        Ok(())
    }
}

/// The XOR protocol of a tree packing at blocklength `n`.
///
/// Tree `j` is used `n·η_j` times. Each use draws one fresh bit from every
/// pair of the tree (bits of parallel edges are consumed in edge-id order).
/// The key bit is the bit on the edge from the smallest vertex to its smallest
/// tree neighbour; a vertex with tree degree `d` announces the XORs of its `d`
/// incident bits taken consecutively in neighbour order, `d − 1` messages.
pub fn build_tree_protocol(source: &HypergraphSource, packing: &TreePacking, n: u64) -> Result<LinearProtocol> {
    if !source.is_pin() {
        return Err(Error::Unsupported("tree protocols require a PIN source".into()));
    }
    let m = source.num_vertices();
    if packing.num_vertices != m {
        return Err(Error::Dimension(format!(
            "packing on {} vertices for a source with {m}",
            packing.num_vertices
        )));
    }
    let mut protocol = LinearProtocol::silent(source, n)?;
    let mut pools: HashMap<VertexSet, std::vec::IntoIter<usize>> = HashMap::new();
    for e in &protocol.edges {
        pools.entry(e.members).or_default();
    }
    for pair in pools.keys().copied().collect::<Vec<_>>() {
        let bits: Vec<usize> = protocol
            .edges
            .iter()
            .filter(|e| e.members == pair)
            .flat_map(|e| e.start..e.start + e.len)
            .collect();
        pools.insert(pair, bits.into_iter());
    }

    let total = protocol.total_bits;
    let mut messages = Vec::new();
    for (j, (tree, eta)) in packing.trees.iter().enumerate() {
        let copies = scaled_integer(eta, n, &format!("tree {j}"))?;
        for _ in 0..copies {
            let mut bit_of: HashMap<VertexSet, usize> = HashMap::new();
            for pair in tree.pairs() {
                let bit = pools.get_mut(pair).and_then(|it| it.next()).ok_or_else(|| {
                    Error::InvalidArgument(format!("scaled packing exceeds the capacity of pair {pair:?}"))
                })?;
                bit_of.insert(*pair, bit);
            }
            let incident = |v: usize| -> Vec<usize> {
                tree.neighbours(v)
                    .into_iter()
                    .map(|u| bit_of[&VertexSet::from_indices([u, v])])
                    .collect()
            };
            protocol.key.push(BitVec::unit(total, incident(0)[0]));
            for v in 0..m {
                for w in incident(v).windows(2) {
                    messages.push(Message { speaker: v, form: BitVec::from_indices(total, [w[0], w[1]]) });
                }
            }
        }
    }
    for msg in messages {
        protocol.push_message(msg)?;
    }
    Ok(protocol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecrecyVerdict {
    /// Recoverable everywhere and the key is uniform and independent of the discussion.
    Perfect,
    /// Recoverable everywhere but the discussion reveals something about the key.
    Leaky,
    /// Some vertex cannot compute the key.
    Unrecoverable,
}

impl SecrecyVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SecrecyVerdict::Perfect => "perfect",
            SecrecyVerdict::Leaky => "leaky",
            SecrecyVerdict::Unrecoverable => "unrecoverable",
        }
    }

    fn decide(recoverable: &[bool], equivocation_bits: usize, key_bits: usize) -> Self {
        if recoverable.iter().any(|r| !r) {
            SecrecyVerdict::Unrecoverable
        } else if equivocation_bits == key_bits {
            SecrecyVerdict::Perfect
        } else {
            SecrecyVerdict::Leaky
        }
    }
}

/// Distribution-level facts established by enumerating every edge-bit assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub assignments: u64,
    pub distinct_transcripts: u64,
    /// Every key value occurs equally often.
    pub key_uniform: bool,
    /// The conditional key distribution is the same for every transcript.
    pub key_independent: bool,
    /// `H(K|F)` in bits.
    pub equivocation_bits: usize,
    pub recoverable: Vec<bool>,
    pub verdict: SecrecyVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExhaustiveOutcome {
    NotRequested,
    /// Requested but over the enumeration cap; the rank checks still ran.
    Skipped(String),
    Done(ExhaustiveReport),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecrecyReport {
    pub key_bits: usize,
    pub message_bits: Vec<usize>,
    pub message_rank: usize,
    pub joint_rank: usize,
    pub key_rank: usize,
    /// `H(K|F) = rank(messages ∪ key) − rank(messages)`, in bits.
    pub equivocation_bits: usize,
    pub recoverable: Vec<bool>,
    pub verdict: SecrecyVerdict,
    pub exhaustive: ExhaustiveOutcome,
}

/// Rank-based verification, plus the exhaustive check when `exhaustive` is set.
pub fn verify_protocol(
    source: &HypergraphSource,
    protocol: &LinearProtocol,
    exhaustive: bool,
    caps: &Caps,
) -> Result<SecrecyReport> {
    protocol.matches_layout(source)?;
    let msgs: Vec<&BitVec> = protocol.messages.iter().map(|m| &m.form).collect();
    let message_basis = Basis::from_rows(msgs.iter().copied());
    let mut joint = message_basis.clone();
    for k in &protocol.key {
        joint.insert(k);
    }
    let recoverable: Vec<bool> = (0..protocol.num_vertices)
        .map(|i| {
            let mut b = message_basis.clone();
            for bit in protocol.observed_bits(i).ones() {
                b.insert(&BitVec::unit(protocol.total_bits, bit));
            }
            protocol.key.iter().all(|k| b.contains(k))
        })
        .collect();
    let key_bits = protocol.key.len();
    let equivocation_bits = joint.rank() - message_basis.rank();
    let verdict = SecrecyVerdict::decide(&recoverable, equivocation_bits, key_bits);

    let exhaustive = if !exhaustive {
        ExhaustiveOutcome::NotRequested
    } else if protocol.total_bits > caps.max_exhaustive_bits.min(63) {
        ExhaustiveOutcome::Skipped(format!(
            "{} edge bits exceed the exhaustive cap of {}",
            protocol.total_bits, caps.max_exhaustive_bits
        ))
    } else if protocol.messages.len() > 64 || key_bits > 64 {
        ExhaustiveOutcome::Skipped("more than 64 message or key bits".into())
    } else {
        ExhaustiveOutcome::Done(enumerate(protocol)?)
    };

    Ok(SecrecyReport {
        key_bits,
        message_bits: protocol.message_bits(),
        message_rank: message_basis.rank(),
        joint_rank: joint.rank(),
        key_rank: rank(&protocol.key),
        equivocation_bits,
        recoverable,
        verdict,
        exhaustive,
    })
}

fn pack(forms: &[&BitVec], x: u64) -> u64 {
    forms
        .iter()
        .enumerate()
        .fold(0, |acc, (k, f)| acc | (f.dot_word(x) as u64) << k)
}

fn enumerate(protocol: &LinearProtocol) -> Result<ExhaustiveReport> {
    let n = protocol.total_bits;
    let assignments = 1u64 << n;
    let msgs: Vec<&BitVec> = protocol.messages.iter().map(|m| &m.form).collect();
    let keys: Vec<&BitVec> = protocol.key.iter().collect();
    let key_bits = keys.len();

    // joint histogram of (F, K), sharded and merged order-independently
    let joint: HashMap<(u64, u64), u64> = (0..assignments)
        .into_par_iter()
        .fold(HashMap::new, |mut h, x| {
            *h.entry((pack(&msgs, x), pack(&keys, x))).or_insert(0u64) += 1;
            h
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let mut by_transcript: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut key_marginal: HashMap<u64, u64> = HashMap::new();
    for (&(f, k), &c) in &joint {
        by_transcript.entry(f).or_default().push(c);
        *key_marginal.entry(k).or_insert(0) += c;
    }
    let key_values = 1u64 << key_bits;
    let key_uniform =
        key_marginal.len() as u64 == key_values && key_marginal.values().all(|&c| c * key_values == assignments);

    // each conditional key distribution must be uniform on a power-of-two support
    let mut supports = Vec::with_capacity(by_transcript.len());
    for counts in by_transcript.values() {
        let first = counts[0];
        if counts.iter().any(|&c| c != first) || !counts.len().is_power_of_two() {
            return Err(Error::Inconsistent(
                "conditional key distribution of a linear protocol is not uniform on a subspace".into(),
            ));
        }
        supports.push(counts.len());
    }
    if supports.iter().any(|&s| s != supports[0]) {
        return Err(Error::Inconsistent("conditional key support varies with the transcript".into()));
    }
    let equivocation_bits = supports[0].trailing_zeros() as usize;
    let key_independent = by_transcript.values().all(|c| c.len() == key_marginal.len());

    // K is a function of (F, X_i) iff no assignment difference d that X_i and F
    // cannot see changes K; linearity reduces pairs of assignments to differences
    let recoverable: Vec<bool> = (0..protocol.num_vertices)
        .map(|i| {
            let seen = protocol.observed_bits(i).ones().fold(0u64, |a, b| a | 1 << b);
            !(0..assignments)
                .into_par_iter()
                .any(|d| d & seen == 0 && pack(&msgs, d) == 0 && pack(&keys, d) != 0)
        })
        .collect();

    Ok(ExhaustiveReport {
        assignments,
        distinct_transcripts: by_transcript.len() as u64,
        key_uniform,
        key_independent,
        equivocation_bits,
        verdict: SecrecyVerdict::decide(&recoverable, equivocation_bits, key_bits),
        recoverable,
    })
}

/// `r_K = key bits / n`, `r_i = message bits of i / n`.
pub fn measured_rates(protocol: &LinearProtocol) -> RatePoint {
    let n = Rational::from_integer(BigInt::from(protocol.blocklength));
    let q = |bits: usize| Rational::from_integer(BigInt::from(bits)) / &n;
    RatePoint {
        key_rate: q(protocol.key.len()),
        rates: protocol.message_bits().into_iter().map(q).collect(),
    }
}

/// Smallest blocklength making every tree weight and edge entropy an integer number of bits.
pub fn minimal_blocklength(source: &HypergraphSource, packing: &TreePacking) -> Result<u64> {
    let l = crate::rational::denominator_lcm(
        source.edges().iter().map(|e| &e.entropy).chain(packing.trees.iter().map(|(_, w)| w)),
    );
    l.to_u64()
        .ok_or_else(|| Error::CapExceeded("blocklength does not fit in 64 bits".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, ratio};
    use crate::tree_packing::{enumerate_spanning_trees, max_packing, packing_to_rates, SpanningTree};

    fn caps() -> Caps {
        Caps::default()
    }

    fn motivating_protocol() -> (HypergraphSource, LinearProtocol) {
        let s = catalog::motivating();
        let trees = enumerate_spanning_trees(&s, &caps()).unwrap();
        let packing = TreePacking { num_vertices: 3, trees: vec![(trees[0].clone(), int(1))] };
        let p = build_tree_protocol(&s, &packing, 1).unwrap();
        (s, p)
    }

    #[test]
    fn motivating_construction() {
        let (_, p) = motivating_protocol();
        assert_eq!(p.messages().len(), 1);
        assert_eq!(p.messages()[0].speaker, 1);
        assert_eq!(p.messages()[0].form, p.form(&[("a", 0), ("b", 0)]).unwrap());
        assert_eq!(p.key(), &[p.form(&[("a", 0)]).unwrap()]);
        assert_eq!(p.message_bits(), vec![0, 1, 0]);
    }

    #[test]
    fn motivating_is_perfect() {
        let (s, p) = motivating_protocol();
        let r = verify_protocol(&s, &p, true, &caps()).unwrap();
        assert_eq!(r.verdict, SecrecyVerdict::Perfect);
        assert_eq!(r.equivocation_bits, 1);
        assert_eq!(r.recoverable, vec![true; 3]);
        let ExhaustiveOutcome::Done(x) = r.exhaustive else { panic!() };
        assert_eq!(x.assignments, 8);
        assert_eq!(x.distinct_transcripts, 2);
        assert!(x.key_uniform && x.key_independent);
        assert_eq!(x.verdict, SecrecyVerdict::Perfect);
        assert_eq!(measured_rates(&p), RatePoint { key_rate: int(1), rates: vec![int(0), int(1), int(0)] });
    }

    #[test]
    fn broadcast_key_leaks() {
        let s = catalog::motivating();
        let silent = LinearProtocol::silent(&s, 1).unwrap();
        let xa = silent.form(&[("a", 0)]).unwrap();
        let p = LinearProtocol::new(&s, 1, vec![Message { speaker: 0, form: xa.clone() }], vec![xa]).unwrap();
        let r = verify_protocol(&s, &p, true, &caps()).unwrap();
        assert_eq!(r.verdict, SecrecyVerdict::Leaky);
        assert_eq!(r.equivocation_bits, 0);
        let ExhaustiveOutcome::Done(x) = r.exhaustive else { panic!() };
        assert_eq!(x.verdict, SecrecyVerdict::Leaky);
        assert!(!x.key_independent);
    }

    #[test]
    fn vertex_without_key_edge() {
        let s = catalog::motivating();
        let silent = LinearProtocol::silent(&s, 1).unwrap();
        let xc = silent.form(&[("c", 0)]).unwrap();
        let p = LinearProtocol::new(&s, 1, vec![], vec![xc]).unwrap();
        let r = verify_protocol(&s, &p, true, &caps()).unwrap();
        assert_eq!(r.verdict, SecrecyVerdict::Unrecoverable);
        assert_eq!(r.recoverable, vec![false, true, true]);
        let ExhaustiveOutcome::Done(x) = r.exhaustive else { panic!() };
        assert_eq!(x.recoverable, r.recoverable);
    }

    #[test]
    fn speaker_must_observe_its_bits() {
        let s = catalog::motivating();
        let silent = LinearProtocol::silent(&s, 1).unwrap();
        let xc = silent.form(&[("c", 0)]).unwrap();
        let err = LinearProtocol::new(&s, 1, vec![Message { speaker: 0, form: xc }], vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidProtocol(_)));
    }

    #[test]
    fn triangle_at_blocklength_two() {
        let s = catalog::triangle();
        let (_, packing) = max_packing(&s, &caps()).unwrap();
        assert_eq!(minimal_blocklength(&s, &packing).unwrap(), 2);
        let p = build_tree_protocol(&s, &packing, 2).unwrap();
        assert_eq!(p.total_bits(), 6);
        assert_eq!(p.key().len(), 3);
        assert_eq!(p.message_bits(), vec![1, 1, 1]);
        let r = verify_protocol(&s, &p, true, &caps()).unwrap();
        assert_eq!(r.verdict, SecrecyVerdict::Perfect);
        let ExhaustiveOutcome::Done(x) = &r.exhaustive else { panic!() };
        assert_eq!(x.assignments, 64);
        assert_eq!(x.verdict, SecrecyVerdict::Perfect);
        let rates = measured_rates(&p);
        assert_eq!(rates, RatePoint { key_rate: ratio(3, 2), rates: vec![ratio(1, 2); 3] });
        assert_eq!(rates, packing_to_rates(&packing));
        assert!(build_tree_protocol(&s, &packing, 1).is_err());
    }

    #[test]
    fn path_with_heavier_edge() {
        let s = HypergraphSource::new(
            ["1", "2", "3"],
            [("a", vec!["1", "2"], int(1)), ("b", vec!["2", "3"], int(2))],
        )
        .unwrap();
        let tree = SpanningTree::new(3, vec![VertexSet(0b011), VertexSet(0b110)]).unwrap();
        let packing = TreePacking { num_vertices: 3, trees: vec![(tree, int(1))] };
        let p = build_tree_protocol(&s, &packing, 1).unwrap();
        assert_eq!(p.key().len(), 1);
        assert_eq!(p.message_bits(), vec![0, 1, 0]);
        assert_eq!(verify_protocol(&s, &p, false, &caps()).unwrap().verdict, SecrecyVerdict::Perfect);
    }

    #[test]
    fn over_capacity_rejected() {
        let s = catalog::triangle();
        let trees = enumerate_spanning_trees(&s, &caps()).unwrap();
        let packing = TreePacking { num_vertices: 3, trees: trees.into_iter().map(|t| (t, int(1))).collect() };
        assert!(build_tree_protocol(&s, &packing, 1).is_err());
    }

    #[test]
    fn empty_protocol() {
        let s = catalog::triangle();
        let p = LinearProtocol::silent(&s, 1).unwrap();
        assert_eq!(measured_rates(&p), RatePoint::zero(3));
        let r = verify_protocol(&s, &p, true, &caps()).unwrap();
        assert_eq!(r.verdict, SecrecyVerdict::Perfect);
    }

    #[test]
    fn exhaustive_cap() {
        let s = catalog::triangle();
        let p = LinearProtocol::silent(&s, 9).unwrap();
        let r = verify_protocol(&s, &p, true, &caps()).unwrap();
        assert!(matches!(r.exhaustive, ExhaustiveOutcome::Skipped(_)));
    }
}
