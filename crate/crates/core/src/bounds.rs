//! Converse bounds on the public discussion rates.
//!
//! Two families of linear inequalities on `(r_K, r_V)` are generated:
//!
//! * **subset** bounds, one per subset `B` (`|B| ≥ 2`) and partition `P` of `B`:
//!   `r(V\B) ≥ (|P| − 1)[r_K − I_P(Z_B)]`;
//! * **crossing** bounds, one per partition `P` of `V`:
//!   `α(P) r(V) ≥ [1 − α(P)] r_K`, where `α(P)` measures how many blocks a
//!   single hyperedge can cross.
//!
//! Every achievable rate pair satisfies all of them, so together they describe
//! an outer region. The region is tight for PINs in total rate and for PINs
//! whose support is a spanning tree; in general it is only an outer bound and
//! everything derived from it is reported as such.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::capacity::capacity;
use crate::entropy::EntropyOracle;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::mmi::{mmi, partition_info, partition_info_with};
use crate::rational::{int, one, zero, Rational};
use crate::source::{enumerate_partitions, HypergraphSource, Partition, RatePoint, VertexSet};
use crate::Caps;

/// `key_coeff · r_K + Σ_i rate_coeffs[i] · r_i ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub key_coeff: Rational,
    pub rate_coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Inequality {
    pub fn lhs(&self, point: &RatePoint) -> Rational {
        let rates: Rational = self.rate_coeffs.iter().zip(&point.rates).map(|(a, r)| a * r).sum();
        &self.key_coeff * &point.key_rate + rates
    }

    pub fn holds(&self, point: &RatePoint) -> bool {
        self.lhs(point) >= self.rhs
    }

    /// Implied by nonnegativity of all rates.
    pub fn is_vacuous(&self) -> bool {
        !self.rhs.is_positive()
            && !self.key_coeff.is_negative()
            && self.rate_coeffs.iter().all(|a| !a.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Discussion of `V\B` needed to push the key rate above `I_P(Z_B)`.
    Subset { subset: VertexSet, multiplier: usize, info: Rational },
    /// Total-rate bound from how many blocks a hyperedge crosses.
    Crossing { alpha: Rational },
}

/// A bound together with the data it was derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub kind: BoundKind,
    pub partition: Partition,
    pub inequality: Inequality,
}

impl BoundCertificate {
    pub fn subset(source: &HypergraphSource, subset: VertexSet, partition: &Partition) -> Result<Self> {
        let info = partition_info(source, subset, partition)?;
        Ok(Self::subset_from_info(source.num_vertices(), subset, partition, info))
    }

    fn subset_from_info(m: usize, subset: VertexSet, partition: &Partition, info: Rational) -> Self {
        let multiplier = partition.num_blocks() - 1;
        let k = int(multiplier as i64);
        let inequality = Inequality {
            key_coeff: -k.clone(),
            rate_coeffs: (0..m).map(|i| if subset.contains(i) { zero() } else { one() }).collect(),
            rhs: -(&k * &info),
        };
        BoundCertificate {
            kind: BoundKind::Subset { subset, multiplier, info },
            partition: partition.clone(),
            inequality,
        }
    }

    pub fn crossing(source: &HypergraphSource, partition: &Partition) -> Result<Self> {
        let alpha = crossing_ratio(source, partition)?;
        let inequality = Inequality {
            key_coeff: alpha.clone() - one(),
            rate_coeffs: vec![alpha.clone(); source.num_vertices()],
            rhs: zero(),
        };
        Ok(BoundCertificate {
            kind: BoundKind::Crossing { alpha },
            partition: partition.clone(),
            inequality,
        })
    }

    /// Rebuilds the certificate from its kind, subset and partition alone.
    pub fn reproduce(&self, source: &HypergraphSource) -> Result<Self> {
        match &self.kind {
            BoundKind::Subset { subset, .. } => Self::subset(source, *subset, &self.partition),
            BoundKind::Crossing { .. } => Self::crossing(source, &self.partition),
        }
    }
}

/// Lower bound on `r(V\B)`: `(|P| − 1)[r_K − I_P(Z_B)]`. May be negative (vacuous).
/// With `B = V` the bound reads `0 ≥ (|P| − 1)[r_K − I_P]`.
pub fn partition_rate_bound(
    source: &HypergraphSource,
    subset: VertexSet,
    partition: &Partition,
    key_rate: &Rational,
) -> Result<Rational> {
    let info = partition_info(source, subset, partition)?;
    Ok(int(partition.num_blocks() as i64 - 1) * (key_rate - info))
}

/// [`partition_rate_bound`] at the fundamental partition of `Z_B`.
pub fn fundamental_rate_bound(
    source: &HypergraphSource,
    subset: VertexSet,
    key_rate: &Rational,
    caps: &Caps,
) -> Result<Rational> {
    let r = mmi(source, subset, caps)?;
    partition_rate_bound(source, subset, &r.fundamental, key_rate)
}

/// `α(P) = (max_e |{C ∈ P : C ∩ ξ(e) ≠ ∅}| − 1) / (|P| − 1)`, in `[0, 1]`.
/// A source without edges has `α = 0`.
pub fn crossing_ratio(source: &HypergraphSource, partition: &Partition) -> Result<Rational> {
    if partition.ground() != source.all_vertices() {
        return Err(Error::InvalidPartition("partition must cover every vertex".into()));
    }
    let max_crossed = source
        .edges()
        .iter()
        .map(|e| partition.blocks_meeting(e.members))
        .max()
        .unwrap_or(1);
    Ok(Rational::new(
        (max_crossed as i64 - 1).into(),
        (partition.num_blocks() as i64 - 1).into(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated(Box<BoundCertificate>),
}

/// Checks `α(P) r(V) ≥ [1 − α(P)] r_K` at `point`.
pub fn crossing_check(source: &HypergraphSource, partition: &Partition, point: &RatePoint) -> Result<Verdict> {
    check_dims(source, point)?;
    let cert = BoundCertificate::crossing(source, partition)?;
    Ok(if cert.inequality.holds(point) {
        Verdict::Satisfied
    } else {
        Verdict::Violated(Box::new(cert))
    })
}

fn check_dims(source: &HypergraphSource, point: &RatePoint) -> Result<()> {
    if point.rates.len() != source.num_vertices() {
        return Err(Error::Dimension(format!(
            "rate point has {} entries for {} vertices",
            point.rates.len(),
            source.num_vertices()
        )));
    }
    Ok(())
}

/// Every subset bound (subsets by size then lexicographically, partitions in
/// restricted-growth order) followed by every crossing bound.
pub fn generate_certificates(source: &HypergraphSource, caps: &Caps) -> Result<Vec<BoundCertificate>> {
    let m = source.num_vertices();
    if m > caps.max_vertices {
        return Err(Error::CapExceeded(format!(
            "bound enumeration over {m} vertices exceeds the cap of {}",
            caps.max_vertices
        )));
    }
    let oracle = EntropyOracle::new(source);
    let subsets = source.all_vertices().subsets_by_size(2);
    let per_subset = subsets
        .par_iter()
        .map(|&b| {
            enumerate_partitions(b)?
                .map(|p| {
                    let info = partition_info_with(&oracle, b, &p)?;
                    Ok(BoundCertificate::subset_from_info(m, b, &p, info))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut certs: Vec<BoundCertificate> = per_subset.into_iter().flatten().collect();
    for p in enumerate_partitions(source.all_vertices())? {
        certs.push(BoundCertificate::crossing(source, &p)?);
    }
    Ok(certs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterRegionQuery {
    pub point: RatePoint,
    /// Violated certificates in generation order.
    pub violations: Vec<BoundCertificate>,
}

impl OuterRegionQuery {
    /// True when no certificate rules the point out.
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The outer region cut out by all generated certificates.
#[derive(Clone, Debug)]
pub struct OuterRegion {
    num_vertices: usize,
    certificates: Vec<BoundCertificate>,
    /// Non-vacuous inequalities, one per distinct left-hand side with the largest rhs.
    rows: Vec<Inequality>,
}

impl OuterRegion {
    pub fn new(source: &HypergraphSource, caps: &Caps) -> Result<Self> {
        let certificates = generate_certificates(source, caps)?;
        let mut strongest: BTreeMap<(Rational, Vec<Rational>), Rational> = BTreeMap::new();
        for c in certificates.iter().filter(|c| !c.inequality.is_vacuous()) {
            let ineq = &c.inequality;
            let key = (ineq.key_coeff.clone(), ineq.rate_coeffs.clone());
            strongest
                .entry(key)
                .and_modify(|rhs| {
                    if ineq.rhs > *rhs {
                        *rhs = ineq.rhs.clone();
                    }
                })
                .or_insert_with(|| ineq.rhs.clone());
        }
        let rows = strongest
            .into_iter()
            .map(|((key_coeff, rate_coeffs), rhs)| Inequality { key_coeff, rate_coeffs, rhs })
            .collect();
        Ok(OuterRegion { num_vertices: source.num_vertices(), certificates, rows })
    }

    pub fn certificates(&self) -> &[BoundCertificate] {
        &self.certificates
    }

    /// The reduced system of inequalities used in the LPs.
    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn check(&self, point: &RatePoint) -> Result<OuterRegionQuery> {
        if point.rates.len() != self.num_vertices {
            return Err(Error::Dimension(format!(
                "rate point has {} entries for {} vertices",
                point.rates.len(),
                self.num_vertices
            )));
        }
        let violations = self
            .certificates
            .iter()
            .filter(|c| !c.inequality.holds(point))
            .cloned()
            .collect();
        Ok(OuterRegionQuery { point: point.clone(), violations })
    }

    /// Upper bound on `C_S(R)`: the largest `r_K` in the region with `r(V) ≤ R`.
    pub fn max_key_rate(&self, total_rate: &Rational) -> Result<Rational> {
        if total_rate.is_negative() {
            return Err(Error::InvalidArgument("total rate must be nonnegative".into()));
        }
        let m = self.num_vertices;
        let mut objective = vec![zero(); m + 1];
        objective[0] = one();
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        for row in &self.rows {
            let mut coeffs = Vec::with_capacity(m + 1);
            coeffs.push(row.key_coeff.clone());
            coeffs.extend(row.rate_coeffs.iter().cloned());
            lp.add_constraint(coeffs, Relation::Ge, row.rhs.clone());
        }
        let mut budget = vec![one(); m + 1];
        budget[0] = zero();
        lp.add_constraint(budget, Relation::Le, total_rate.clone());
        lp.solve()?
            .optimal()
            .map(|s| s.value)
            .ok_or_else(|| Error::Inconsistent("outer capacity LP has no optimum".into()))
    }

    /// Smallest `r(V)` allowed by the region at key rate `key_rate`, or `None`
    /// when the key rate itself is excluded.
    pub fn min_total_rate(&self, key_rate: &Rational) -> Result<Option<Rational>> {
        if key_rate.is_negative() {
            return Err(Error::InvalidArgument("key rate must be nonnegative".into()));
        }
        let m = self.num_vertices;
        let mut lp = LinearProgram::new(Sense::Minimize, vec![one(); m]);
        for row in &self.rows {
            let rhs = &row.rhs - &row.key_coeff * key_rate;
            if row.rate_coeffs.iter().all(Zero::is_zero) {
                if rhs.is_positive() {
                    return Ok(None);
                }
                continue;
            }
            lp.add_constraint(row.rate_coeffs.clone(), Relation::Ge, rhs);
        }
        Ok(lp.solve()?.optimal().map(|s| s.value))
    }
}

/// Certificates violated at `point`, in generation order.
pub fn outer_check(source: &HypergraphSource, point: &RatePoint, caps: &Caps) -> Result<OuterRegionQuery> {
    check_dims(source, point)?;
    OuterRegion::new(source, caps)?.check(point)
}

/// Upper bound on `C_S(R)` from the outer region.
pub fn outer_capacity_curve(source: &HypergraphSource, total_rate: &Rational, caps: &Caps) -> Result<Rational> {
    OuterRegion::new(source, caps)?.max_key_rate(total_rate)
}

/// Exact rate region of a PIN whose weight support is a spanning tree:
/// `0 ≤ r_K ≤ C_S` and `r_i ≥ (d(i) − 1) r_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePinRegion {
    /// Minimum edge weight of the tree.
    pub capacity: Rational,
    /// Degrees in the support tree.
    pub degrees: Vec<usize>,
}

impl TreePinRegion {
    pub fn new(source: &HypergraphSource) -> Result<Self> {
        if !source.is_pin() {
            return Err(Error::Unsupported("tree region requires a PIN source".into()));
        }
        let weights = source.weights();
        let support: Vec<VertexSet> = weights.support().collect();
        let m = source.num_vertices();
        if support.len() != m - 1 || !source.is_connected_on(source.all_vertices()) {
            return Err(Error::Unsupported("weight support is not a spanning tree".into()));
        }
        let capacity = support
            .iter()
            .map(|b| weights.get(*b))
            .min()
            .expect("a spanning tree has edges");
        Ok(TreePinRegion { capacity, degrees: source.support_degrees()? })
    }

    /// Lower bound on `r_i` at key rate `key_rate`.
    pub fn min_rate(&self, vertex: usize, key_rate: &Rational) -> Rational {
        int(self.degrees[vertex] as i64 - 1) * key_rate
    }

    pub fn contains(&self, point: &RatePoint) -> bool {
        !point.key_rate.is_negative()
            && point.key_rate <= self.capacity
            && point
                .rates
                .iter()
                .enumerate()
                .all(|(i, r)| *r >= self.min_rate(i, &point.key_rate))
    }
}

/// Rate-constrained capacity of a PIN: `C_S(R) = min{R / (|V| − 2), C_S}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinCurve {
    pub capacity: Rational,
    pub num_vertices: usize,
}

impl PinCurve {
    pub fn new(source: &HypergraphSource, caps: &Caps) -> Result<Self> {
        if !source.is_pin() {
            return Err(Error::Unsupported("the PIN capacity curve requires a PIN source".into()));
        }
        if source.num_vertices() < 3 {
            return Err(Error::Unsupported("the PIN capacity curve needs at least 3 vertices".into()));
        }
        let capacity = capacity(source, caps)?.capacity;
        Ok(PinCurve { capacity, num_vertices: source.num_vertices() })
    }

    pub fn value(&self, total_rate: &Rational) -> Rational {
        let scaled = total_rate / int(self.num_vertices as i64 - 2);
        crate::rational::min(&scaled, &self.capacity)
    }

    /// `R_S = (|V| − 2) C_S`.
    pub fn communication_complexity(&self) -> Rational {
        int(self.num_vertices as i64 - 2) * &self.capacity
    }
}

pub fn pin_capacity_curve(source: &HypergraphSource, total_rate: &Rational, caps: &Caps) -> Result<Rational> {
    Ok(PinCurve::new(source, caps)?.value(total_rate))
}
