//! Communication for omniscience and unconstrained secrecy capacity.

use num_traits::Signed;

use crate::entropy::{cond_entropy, entropy};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::mmi::{mmi, MmiResult};
use crate::rational::{one, zero, Rational};
use crate::source::HypergraphSource;
use crate::Caps;

/// Hard limit on the number of vertices for the omniscience LP (2^m − 2 rows).
pub const RCO_MAX_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityReport {
    /// `H(Z_V)`.
    pub joint_entropy: Rational,
    /// `R_CO`.
    pub rco: Rational,
    /// Lexicographically smallest rate vector attaining `R_CO`.
    pub rco_point: Vec<Rational>,
    /// `C_S = H(Z_V) − R_CO`.
    pub capacity: Rational,
    /// The MMI computation used as an independent check of `capacity`.
    pub mmi: MmiResult,
}

/// Minimum total rate `r(V)` with `r(B) ≥ H(Z_B | Z_{V\B})` for every nonempty
/// proper subset `B`, over nonnegative rates.
pub fn rco(source: &HypergraphSource) -> Result<(Rational, Vec<Rational>)> {
    let m = source.num_vertices();
    if m > RCO_MAX_VERTICES {
        return Err(Error::CapExceeded(format!(
            "omniscience LP over {m} vertices exceeds the cap of {RCO_MAX_VERTICES}"
        )));
    }
    let mut lp = LinearProgram::new(Sense::Minimize, vec![one(); m]);
    let full = source.all_vertices().0;
    for mask in 1..full {
        let set = crate::VertexSet(mask);
        let rhs = cond_entropy(source, set)?;
        if !rhs.is_positive() {
            continue; // implied by nonnegativity
        }
        let row = (0..m).map(|i| if set.contains(i) { one() } else { zero() }).collect();
        lp.add_constraint(row, Relation::Ge, rhs);
    }
    let sol = lp
        .solve()?
        .optimal()
        .ok_or_else(|| Error::Inconsistent("omniscience LP has no optimum".into()))?;
    Ok((sol.value, sol.point))
}

/// `C_S` computed as `H(Z_V) − R_CO` and checked against the MMI of the whole source.
pub fn capacity(source: &HypergraphSource, caps: &Caps) -> Result<CapacityReport> {
    let joint_entropy = entropy(source, source.all_vertices())?;
    let (rco, rco_point) = rco(source)?;
    let capacity = &joint_entropy - &rco;
    let mmi = mmi(source, source.all_vertices(), caps)?;
    if mmi.value != capacity {
        return Err(Error::Inconsistent(format!(
            "H(Z_V) - R_CO = {} but MMI = {}",
            crate::rational::format(&capacity),
            crate::rational::format(&mmi.value)
        )));
    }
    Ok(CapacityReport { joint_entropy, rco, rco_point, capacity, mmi })
}

/// True iff the piecewise-linear interpolation of `(R, C_S(R))` samples is
/// non-decreasing and concave. Samples must be strictly increasing in `R`.
pub fn check_concavity(curve: &[(Rational, Rational)]) -> Result<bool> {
    if curve.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidArgument("samples must be strictly increasing in R".into()));
    }
    let slopes: Vec<Rational> = curve
        .windows(2)
        .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
        .collect();
    let non_decreasing = slopes.iter().all(|s| !s.is_negative());
    let concave = slopes.windows(2).all(|s| s[1] <= s[0]);
    Ok(non_decreasing && concave)
}
