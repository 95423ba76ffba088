//! Edmonds' greedy algorithm for covering a weight vector by sets at minimum
//! cost under a submodular set function, and the lamination (uncrossing)
//! procedure that moves any feasible cover towards the greedy chain.
//!
//! The problem is
//!
//! ```text
//!     minimize   Σ_B μ(B) f(B)
//!     subject to Σ_{B ∋ s} μ(B) = w_s   for every s ∈ S,   μ ≥ 0,
//! ```
//!
//! with `f` normalized and submodular. Subsets of the ground set are bit masks.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Basis};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::protocol::LinearProtocol;
use crate::rational::{format, int, one, zero, Rational};
use crate::source::{HypergraphSource, Partition};

/// Largest ground set checked exhaustively for submodularity or modularity.
pub const MAX_CHECKED_GROUND: usize = 12;
/// Largest ground set for the brute-force covering LP (one variable per nonempty subset).
pub const MAX_LP_GROUND: usize = 8;
const MAX_LAMINATION_STEPS: usize = 1_000_000;

pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;
    fn value(&self, set: u64) -> Rational;
}

/// `f(B) = |B|`.
pub struct Cardinality(pub usize);

impl SetFunction for Cardinality {
    fn ground_size(&self) -> usize {
        self.0
    }
    fn value(&self, set: u64) -> Rational {
        int(set.count_ones() as i64)
    }
}

/// `f(B) = Σ_{s ∈ B} h_s`, the entropy of independent parts with entropies `h_s`.
pub struct Modular(pub Vec<Rational>);

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.0.len()
    }
    fn value(&self, set: u64) -> Rational {
        elements(set).map(|s| self.0[s].clone()).sum()
    }
}

/// An explicit table of `2^n` values indexed by mask.
pub struct TableFunction {
    n: usize,
    values: Vec<Rational>,
}

impl TableFunction {
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n > 20 || values.len() != 1 << n {
            return Err(Error::Dimension(format!("a table over {n} elements needs 2^{n} values")));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidArgument("set function must vanish on the empty set".into()));
        }
        Ok(TableFunction { n, values })
    }
}

impl SetFunction for TableFunction {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value(&self, set: u64) -> Rational {
        self.values[set as usize].clone()
    }
}

/// `f(B)` = rank of the union of the binary forms attached to the elements of `B`,
/// i.e. the entropy in bits of jointly linear functions of uniform bits.
pub struct RankFunction {
    blocks: Vec<Vec<BitVec>>,
}

impl RankFunction {
    pub fn new(blocks: Vec<Vec<BitVec>>) -> Self {
        RankFunction { blocks }
    }
}

impl SetFunction for RankFunction {
    fn ground_size(&self) -> usize {
        self.blocks.len()
    }
    fn value(&self, set: u64) -> Rational {
        let basis = Basis::from_rows(elements(set).flat_map(|s| self.blocks[s].iter()));
        int(basis.rank() as i64)
    }
}

fn elements(set: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set >> i & 1 == 1)
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_ground(f: &dyn SetFunction) -> Result<usize> {
    let n = f.ground_size();
    if n > MAX_CHECKED_GROUND {
        return Err(Error::CapExceeded(format!(
            "exhaustive check over {n} elements exceeds the cap of {MAX_CHECKED_GROUND}"
        )));
    }
    if !f.value(0).is_zero() {
        return Err(Error::InvalidArgument("set function must vanish on the empty set".into()));
    }
    Ok(n)
}

/// Exhaustive submodularity check through the local form
/// `f(A+i) + f(A+j) ≥ f(A) + f(A+i+j)`, which is equivalent to the pairwise one.
pub fn check_submodular(f: &dyn SetFunction) -> Result<()> {
    let n = check_ground(f)?;
    for a in 0..=full_mask(n) {
        for i in (0..n).filter(|i| a >> i & 1 == 0) {
            for j in (i + 1..n).filter(|j| a >> j & 1 == 0) {
                let (ai, aj) = (a | 1 << i, a | 1 << j);
                if f.value(ai) + f.value(aj) < f.value(a) + f.value(ai | aj) {
                    return Err(Error::NotSubmodular(format!(
                        "f({ai:#b}) + f({aj:#b}) < f({a:#b}) + f({:#b})",
                        ai | aj
                    )));
                }
            }
        }
    }
    Ok(())
}

/// True iff every marginal gain `f(A+i) − f(A)` equals `f({i})`.
pub fn is_modular(f: &dyn SetFunction) -> Result<bool> {
    let n = check_ground(f)?;
    let singles: Vec<Rational> = (0..n).map(|i| f.value(1 << i)).collect();
    Ok((0..=full_mask(n)).all(|a| {
        let fa = f.value(a);
        (0..n)
            .filter(|i| a >> i & 1 == 0)
            .all(|i| f.value(a | 1 << i) - &fa == singles[i])
    }))
}

/// Whether [`greedy_value`] verifies submodularity before trusting the greedy optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubmodularCheck {
    Verify,
    /// The caller vouches for submodularity (required above [`MAX_CHECKED_GROUND`]).
    Waive,
}

/// A sparse nonnegative measure on subsets of a ground set of `n` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMeasure {
    n: usize,
    values: BTreeMap<u64, Rational>,
}

impl CoverMeasure {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "ground sets are limited to 64 elements");
        CoverMeasure { n, values: BTreeMap::new() }
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        let mut mu = CoverMeasure::new(n);
        for (set, q) in entries {
            if q.is_negative() {
                return Err(Error::InvalidArgument(format!("negative measure {}", format(&q))));
            }
            if set & !full_mask(n) != 0 {
                return Err(Error::InvalidArgument(format!("set {set:#b} outside the ground set")));
            }
            mu.add(set, &q);
        }
        Ok(mu)
    }

    fn add(&mut self, set: u64, q: &Rational) {
        if set == 0 || q.is_zero() {
            return; // the empty set carries no weight and costs nothing
        }
        let v = self.values.entry(set).or_insert_with(zero);
        *v += q;
        if v.is_zero() {
            self.values.remove(&set);
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn get(&self, set: u64) -> Rational {
        self.values.get(&set).cloned().unwrap_or_else(zero)
    }

    /// Support in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.values.iter().map(|(s, q)| (*s, q))
    }

    pub fn support(&self) -> Vec<u64> {
        self.values.keys().copied().collect()
    }

    /// `w_s = Σ_{B ∋ s} μ(B)`.
    pub fn marginals(&self) -> Vec<Rational> {
        let mut w = vec![zero(); self.n];
        for (set, q) in &self.values {
            for s in elements(*set) {
                w[s] += q;
            }
        }
        w
    }

    pub fn objective(&self, f: &dyn SetFunction) -> Rational {
        self.values.iter().map(|(s, q)| q * f.value(*s)).sum()
    }

    /// Any two support sets are nested or disjoint.
    pub fn is_laminar(&self) -> bool {
        let s = self.support();
        s.iter().enumerate().all(|(k, &a)| {
            s[k + 1..].iter().all(|&b| a & b == 0 || a & b == a || a & b == b)
        })
    }

    /// Any two support sets are nested.
    pub fn is_chain(&self) -> bool {
        let s = self.support();
        s.iter()
            .enumerate()
            .all(|(k, &a)| s[k + 1..].iter().all(|&b| a & b == a || a & b == b))
    }
}

/// Element order used by the greedy algorithm: descending weight, ties by index.
pub fn greedy_order(w: &[Rational]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].cmp(&w[a]));
    order
}

/// The greedy optimum: with `s_1, …, s_k` in [`greedy_order`] and `S_j = {s_1, …, s_j}`,
/// `μ*(S_j) = w_{s_j} − w_{s_{j+1}}` and `μ*(S_k) = w_{s_k}`.
pub fn greedy_mu(w: &[Rational]) -> Result<CoverMeasure> {
    if w.len() > 64 {
        return Err(Error::CapExceeded("ground sets are limited to 64 elements".into()));
    }
    if let Some(q) = w.iter().find(|q| q.is_negative()) {
        return Err(Error::InvalidArgument(format!("negative weight {}", format(q))));
    }
    let order = greedy_order(w);
    let mut mu = CoverMeasure::new(w.len());
    let mut prefix = 0u64;
    for (j, &s) in order.iter().enumerate() {
        prefix |= 1 << s;
        let next = order.get(j + 1).map(|&t| w[t].clone()).unwrap_or_else(zero);
        mu.add(prefix, &(&w[s] - next));
    }
    Ok(mu)
}

/// `Σ μ*(B) f(B)`, the minimum of the covering problem when `f` is submodular.
pub fn greedy_value(f: &dyn SetFunction, w: &[Rational], check: SubmodularCheck) -> Result<Rational> {
    if w.len() != f.ground_size() {
        return Err(Error::Dimension(format!(
            "{} weights for a ground set of {}",
            w.len(),
            f.ground_size()
        )));
    }
    if check == SubmodularCheck::Verify {
        check_submodular(f)?;
    }
    Ok(greedy_mu(w)?.objective(f))
}

/// The covering problem solved directly as an LP over all nonempty subsets.
pub fn covering_lp_value(f: &dyn SetFunction, w: &[Rational]) -> Result<Rational> {
    let n = f.ground_size();
    if w.len() != n {
        return Err(Error::Dimension(format!("{} weights for a ground set of {n}", w.len())));
    }
    if n > MAX_LP_GROUND {
        return Err(Error::CapExceeded(format!(
            "covering LP over {n} elements exceeds the cap of {MAX_LP_GROUND}"
        )));
    }
    let sets: Vec<u64> = (1..=full_mask(n)).collect();
    let mut lp = LinearProgram::new(Sense::Minimize, sets.iter().map(|&b| f.value(b)).collect());
    for s in 0..n {
        let row = sets.iter().map(|&b| if b >> s & 1 == 1 { one() } else { zero() }).collect();
        lp.add_constraint(row, Relation::Eq, w[s].clone());
    }
    match lp.solve()?.optimal() {
        Some(sol) => Ok(sol.value),
        None => Err(Error::Inconsistent("covering LP has no optimum".into())),
    }
}

/// Which pairs of support sets the lamination step uncrosses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaminationMode {
    /// Intersecting, non-nested pairs; ends in a laminar family.
    Laminar,
    /// Every non-nested pair, disjoint ones included (mass moved to the empty
    /// set is dropped); ends in a chain.
    Chain,
}

fn crosses(a: u64, b: u64, mode: LaminationMode) -> bool {
    let i = a & b;
    let nested = i == a || i == b;
    match mode {
        LaminationMode::Laminar => i != 0 && !nested,
        LaminationMode::Chain => !nested,
    }
}

/// Repeatedly takes the first crossing pair `B1 < B2` of the support (ascending
/// masks) and moves `δ = min(μ(B1), μ(B2))` from both onto `B1 ∩ B2` and `B1 ∪ B2`.
/// Marginals are unchanged; every step must not increase the objective, which
/// holds exactly when `f` is submodular on the pair.
pub fn laminate(f: &dyn SetFunction, mu: &CoverMeasure, mode: LaminationMode) -> Result<CoverMeasure> {
    if mu.n != f.ground_size() {
        return Err(Error::Dimension(format!(
            "measure over {} elements, function over {}",
            mu.n,
            f.ground_size()
        )));
    }
    let mut mu = CoverMeasure::from_entries(mu.n, mu.values.clone())?;
    for _ in 0..MAX_LAMINATION_STEPS {
        let support = mu.support();
        let pair = support.iter().enumerate().find_map(|(k, &a)| {
            support[k + 1..].iter().find(|&&b| crosses(a, b, mode)).map(|&b| (a, b))
        });
        let Some((b1, b2)) = pair else {
            return Ok(mu);
        };
        let (lo, hi) = (b1 & b2, b1 | b2);
        let gain = f.value(b1) + f.value(b2) - f.value(lo) - f.value(hi);
        if gain.is_negative() {
            return Err(Error::NotSubmodular(format!(
                "uncrossing {b1:#b} and {b2:#b} would increase the objective"
            )));
        }
        let delta = crate::rational::min(&mu.get(b1), &mu.get(b2));
        let minus = -&delta;
        mu.add(b1, &minus);
        mu.add(b2, &minus);
        mu.add(lo, &delta);
        mu.add(hi, &delta);
    }
    Err(Error::Inconsistent(format!("lamination did not finish in {MAX_LAMINATION_STEPS} steps")))
}

/// For modular `f`, checks on random feasible covers that the objective does not
/// depend on the cover. Covers are drawn by undoing lamination from `μ*`: for nested
/// support sets `A ⊊ B`, split `B \ A` into `R1, R2` and move mass from `A, B` onto
/// `A ∪ R1, A ∪ R2`.
pub fn modular_constancy_check(f: &dyn SetFunction, w: &[Rational], trials: usize, seed: u64) -> Result<bool> {
    if !is_modular(f)? {
        return Err(Error::InvalidArgument("set function is not modular".into()));
    }
    if w.len() != f.ground_size() {
        return Err(Error::Dimension(format!("{} weights for a ground set of {}", w.len(), f.ground_size())));
    }
    let start = greedy_mu(w)?;
    let target = start.objective(f);
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut mu = start.clone();
        for _ in 0..rng.gen_range(1..=4) {
            let support = mu.support();
            let moves: Vec<(u64, u64)> = support
                .iter()
                .flat_map(|&a| support.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| a != b && a & b == a && (b & !a).count_ones() >= 2)
                .collect();
            if moves.is_empty() {
                break;
            }
            let (a, b) = moves[rng.gen_range(0..moves.len())];
            let rest: Vec<usize> = elements(b & !a).collect();
            let r1 = loop {
                let pick = rng.gen_range(1..(1u64 << rest.len()) - 1);
                break rest.iter().enumerate().filter(|(k, _)| pick >> k & 1 == 1).fold(0u64, |m, (_, s)| m | 1 << s);
            };
            let r2 = (b & !a) & !r1;
            let delta = crate::rational::min(&mu.get(a), &mu.get(b)) * Rational::new(rng.gen_range(1..=4).into(), 4.into());
            let minus = -&delta;
            mu.add(a, &minus);
            mu.add(b, &minus);
            mu.add(a | r1, &delta);
            mu.add(a | r2, &delta);
        }
        if mu.marginals() != w {
            return Err(Error::Inconsistent("reverse lamination changed the marginals".into()));
        }
        if mu.objective(f) != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The ground set `{0} ∪ E ∪ V` and weights of the covering instance that
/// underlies the crossing-edge rate bound for a partition `P`:
/// `w_0 = |P|`, `w_e` = number of blocks meeting `e`, `w_i = 1`.
/// Elements are ordered 0, edges by id, vertices by id, so that the greedy
/// order is 0, edges by descending weight, then vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofInstance {
    pub labels: Vec<String>,
    pub weights: Vec<Rational>,
    pub num_edges: usize,
    pub num_vertices: usize,
}

impl ProofInstance {
    pub fn edge_element(&self, e: usize) -> usize {
        1 + e
    }

    pub fn vertex_element(&self, i: usize) -> usize {
        1 + self.num_edges + i
    }

    /// `max_e w_e` (1 when there are no edges).
    pub fn max_edge_weight(&self) -> Rational {
        self.weights[1..1 + self.num_edges].iter().max().cloned().unwrap_or_else(one)
    }
}

pub fn crossing_weights(source: &HypergraphSource, partition: &Partition) -> Result<ProofInstance> {
    if partition.ground() != source.all_vertices() {
        return Err(Error::InvalidPartition("partition must cover every vertex".into()));
    }
    let n = 1 + source.edges().len() + source.num_vertices();
    if n > 64 {
        return Err(Error::CapExceeded(format!("{n} ground elements exceed 64")));
    }
    let mut labels = vec!["0".to_string()];
    let mut weights = vec![int(partition.num_blocks() as i64)];
    for e in source.edges() {
        labels.push(e.id.clone());
        weights.push(int(partition.blocks_meeting(e.members) as i64));
    }
    for v in source.vertex_ids() {
        labels.push(v.clone());
        weights.push(one());
    }
    Ok(ProofInstance { labels, weights, num_edges: source.edges().len(), num_vertices: source.num_vertices() })
}

/// The cover `μ({0} ∪ C ∪ E_C) = 1` for each block `C`, with `E_C` the edges meeting `C`.
/// Its marginals are the weights of [`crossing_weights`].
pub fn partition_measure(source: &HypergraphSource, partition: &Partition) -> Result<CoverMeasure> {
    let inst = crossing_weights(source, partition)?;
    let mut mu = CoverMeasure::new(inst.labels.len());
    for block in partition.blocks() {
        let mut set = 1u64;
        for (k, e) in source.edges().iter().enumerate() {
            if e.members.intersects(*block) {
                set |= 1 << inst.edge_element(k);
            }
        }
        for i in block.iter() {
            set |= 1 << inst.vertex_element(i);
        }
        mu.add(set, &one());
    }
    Ok(mu)
}

/// Entropies in bits of `Y_0 = (F, K)`, `Y_e` = the bits of edge `e`, `Y_i` = nothing
/// (linear protocols use no private randomness), on the ground set of [`crossing_weights`].
pub fn protocol_entropy(protocol: &LinearProtocol) -> RankFunction {
    let mut blocks = vec![protocol
        .messages()
        .iter()
        .map(|m| m.form.clone())
        .chain(protocol.key().iter().cloned())
        .collect::<Vec<_>>()];
    for e in protocol.edges() {
        blocks.push((e.start..e.start + e.len).map(|b| BitVec::unit(protocol.total_bits(), b)).collect());
    }
    blocks.extend((0..protocol.num_vertices()).map(|_| Vec::new()));
    RankFunction::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::ratio;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn staircase() {
        let mu = greedy_mu(&q(&[3, 1])).unwrap();
        assert_eq!(mu.iter().map(|(s, v)| (s, v.clone())).collect::<Vec<_>>(), vec![(0b01, int(2)), (0b11, int(1))]);
        let flat = greedy_mu(&vec![ratio(2, 3); 4]).unwrap();
        assert_eq!(flat.support(), vec![0b1111]);
        assert_eq!(flat.get(0b1111), ratio(2, 3));
        assert!(greedy_mu(&q(&[1, -1])).is_err());
        assert!(greedy_mu(&q(&[0, 0])).unwrap().support().is_empty());
    }

    #[test]
    fn cardinality_value() {
        let f = Cardinality(5);
        assert_eq!(greedy_value(&f, &q(&[1; 5]), SubmodularCheck::Verify).unwrap(), int(5));
        assert!(is_modular(&f).unwrap());
    }

    #[test]
    fn triangle_chain() {
        let s = catalog::triangle();
        let p = Partition::singletons(s.all_vertices()).unwrap();
        let inst = crossing_weights(&s, &p).unwrap();
        assert_eq!(inst.labels, vec!["0", "a", "b", "c", "1", "2", "3"]);
        assert_eq!(inst.weights, q(&[3, 2, 2, 2, 1, 1, 1]));
        let mu = greedy_mu(&inst.weights).unwrap();
        assert_eq!(mu.support(), vec![0b0000001, 0b0001111, 0b1111111]);
        assert!(mu.iter().all(|(_, v)| *v == int(1)));
        assert_eq!(mu.marginals(), inst.weights);
    }

    #[test]
    fn lamination_reaches_greedy_chain() {
        let s = catalog::triangle();
        let p = Partition::singletons(s.all_vertices()).unwrap();
        let inst = crossing_weights(&s, &p).unwrap();
        let start = partition_measure(&s, &p).unwrap();
        assert_eq!(start.marginals(), inst.weights);
        let f = Modular(q(&[1, 1, 1, 1, 0, 0, 0]));
        let chain = laminate(&f, &start, LaminationMode::Chain).unwrap();
        assert_eq!(chain, greedy_mu(&inst.weights).unwrap());
        assert!(chain.is_chain());
    }

    #[test]
    fn single_uncrossing_step() {
        let f = Cardinality(3);
        let mu = CoverMeasure::from_entries(3, [(0b011, int(2)), (0b110, int(1))]).unwrap();
        let out = laminate(&f, &mu, LaminationMode::Laminar).unwrap();
        assert_eq!(out.support(), vec![0b010, 0b011, 0b111]);
        assert_eq!(out.get(0b010), int(1));
        assert_eq!(out.get(0b011), int(1));
        assert_eq!(out.get(0b111), int(1));
        assert_eq!(out.marginals(), mu.marginals());
        assert_eq!(laminate(&f, &out, LaminationMode::Laminar).unwrap(), out);
    }

    #[test]
    fn laminar_versus_chain() {
        let f = Cardinality(2);
        let mu = CoverMeasure::from_entries(2, [(0b01, int(1)), (0b10, int(1))]).unwrap();
        assert_eq!(laminate(&f, &mu, LaminationMode::Laminar).unwrap(), mu);
        let chain = laminate(&f, &mu, LaminationMode::Chain).unwrap();
        assert_eq!(chain.support(), vec![0b11]);
    }

    #[test]
    fn supermodular_step_refused() {
        // f({x}) = f({y}) = 0, f({x,y}) = 1 is supermodular
        let f = TableFunction::new(2, q(&[0, 0, 0, 1])).unwrap();
        assert!(matches!(check_submodular(&f), Err(Error::NotSubmodular(_))));
        let mu = CoverMeasure::from_entries(2, [(0b01, int(1)), (0b10, int(1))]).unwrap();
        assert!(matches!(laminate(&f, &mu, LaminationMode::Chain), Err(Error::NotSubmodular(_))));
        assert!(greedy_value(&f, &q(&[1, 1]), SubmodularCheck::Verify).is_err());
        assert_eq!(greedy_value(&f, &q(&[1, 1]), SubmodularCheck::Waive).unwrap(), int(1));
    }

    #[test]
    fn constancy() {
        let f = Modular(vec![int(2), ratio(1, 2), int(0), int(3)]);
        assert!(modular_constancy_check(&f, &q(&[3, 1, 2, 2]), 50, 7).unwrap());
        let coverage = TableFunction::new(2, q(&[0, 1, 1, 1])).unwrap();
        assert!(modular_constancy_check(&coverage, &q(&[1, 1]), 5, 0).is_err());
    }

    #[test]
    fn greedy_matches_lp_on_coverage_function() {
        // f(B) = number of colours covered, colours {0,1},{1,2},{2},{0}
        let cover = [0b011u8, 0b110, 0b100, 0b001];
        let values = (0..16u64)
            .map(|b| {
                let c = elements(b).fold(0u8, |m, s| m | cover[s]);
                int(c.count_ones() as i64)
            })
            .collect();
        let f = TableFunction::new(4, values).unwrap();
        check_submodular(&f).unwrap();
        let w = q(&[3, 0, 2, 1]);
        assert_eq!(greedy_value(&f, &w, SubmodularCheck::Verify).unwrap(), covering_lp_value(&f, &w).unwrap());
    }

    #[test]
    fn max_edge_weight_tracks_crossing_ratio() {
        let s = catalog::three_user_hyperedge();
        let p = Partition::singletons(s.all_vertices()).unwrap();
        let inst = crossing_weights(&s, &p).unwrap();
        assert_eq!(inst.weights[inst.edge_element(2)], int(3));
        let alpha = crate::bounds::crossing_ratio(&s, &p).unwrap();
        let k = int(p.num_blocks() as i64);
        assert_eq!(&k - inst.max_edge_weight(), (&k - int(1)) * (int(1) - alpha));
    }
}
