//! Dense two-phase simplex over exact rationals.
//!
//! Pivoting follows Bland's rule, so the solver terminates on degenerate
//! problems and is fully deterministic. When the optimum is not unique the
//! solver returns the lexicographically smallest optimal point: after the main
//! phase it minimizes `x_0`, then `x_1`, and so on, each time restricted to
//! the current optimal face.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// `optimize c·x` subject to linear constraints and `lower ≤ x ≤ upper`.
/// Variables default to `0 ≤ x < ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![Rational::zero(); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Rational, upper: Option<Rational>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    /// True when `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().zip(&self.lower).all(|(v, l)| v >= l)
            && x.iter().zip(&self.upper).all(|(v, u)| u.as_ref().is_none_or(|u| v <= u))
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn check_dimensions(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension(format!(
                "{} variables but {} lower and {} upper bounds",
                n,
                self.lower.len(),
                self.upper.len()
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Dimension(format!(
                    "constraint {k} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.check_dimensions()?;
        let n = self.num_vars();

        // Shift to y = x - lower >= 0 and turn finite upper bounds into rows.
        let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
        for c in &self.constraints {
            let shift: Rational = c.coeffs.iter().zip(&self.lower).map(|(a, l)| a * l).sum();
            rows.push((c.coeffs.clone(), c.relation, &c.rhs - shift));
        }
        for (j, u) in self.upper.iter().enumerate() {
            if let Some(u) = u {
                let mut coeffs = vec![Rational::zero(); n];
                coeffs[j] = Rational::one();
                rows.push((coeffs, Relation::Le, u - &self.lower[j]));
            }
        }
        let cost: Vec<Rational> = match self.sense {
            Sense::Minimize => self.objective.clone(),
            Sense::Maximize => self.objective.iter().map(|c| -c).collect(),
        };

        let Some(mut tab) = Tableau::phase_one(n, rows) else {
            return Ok(LpOutcome::Infeasible);
        };
        let full_cost: Vec<Rational> = (0..tab.ncols)
            .map(|j| cost.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        tab.set_objective(&full_cost);
        if tab.run() == Pivoting::Unbounded {
            return Ok(LpOutcome::Unbounded);
        }
        for k in 0..n {
            tab.restrict_to_optimal_face();
            let mut unit = vec![Rational::zero(); tab.ncols];
            unit[k] = Rational::one();
            tab.set_objective(&unit);
            let status = tab.run();
            debug_assert_eq!(status, Pivoting::Optimal);
        }

        let y = tab.structural_values(n);
        let point: Vec<Rational> = y.iter().zip(&self.lower).map(|(v, l)| v + l).collect();
        if !self.is_feasible(&point) {
            return Err(Error::Inconsistent("simplex returned an infeasible point".into()));
        }
        let value = self.evaluate(&point);
        Ok(LpOutcome::Optimal(LpSolution { value, point }))
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Pivoting {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs followed by minus the current objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    allowed: Vec<bool>,
    ncols: usize,
}

impl Tableau {
    /// Builds the standard-form tableau and drives it to a feasible basis
    /// without artificial variables. `None` means infeasible.
    fn phase_one(n: usize, rows: Vec<(Vec<Rational>, Relation, Rational)>) -> Option<Tableau> {
        let mut rows: Vec<_> = rows
            .into_iter()
            .map(|(coeffs, rel, rhs)| {
                if rhs.is_negative() || (rhs.is_zero() && rel == Relation::Ge) {
                    let flipped = match rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (coeffs.into_iter().map(|a| -a).collect::<Vec<_>>(), flipped, -rhs)
                } else {
                    (coeffs, rel, rhs)
                }
            })
            .collect();

        let nslack = rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let nart = rows.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let ncols = n + nslack + nart;
        let mut tab_rows = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut next_slack, mut next_art) = (n, n + nslack);
        for (coeffs, rel, rhs) in rows.drain(..) {
            let mut row = coeffs;
            row.resize(ncols + 1, Rational::zero());
            match rel {
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            row[ncols] = rhs;
            tab_rows.push(row);
        }

        let mut tab = Tableau {
            rows: tab_rows,
            obj: Vec::new(),
            basis,
            allowed: vec![true; ncols],
            ncols,
        };
        let art_start = n + nslack;
        if nart > 0 {
            let cost: Vec<Rational> = (0..ncols)
                .map(|j| if j >= art_start { Rational::one() } else { Rational::zero() })
                .collect();
            tab.set_objective(&cost);
            let status = tab.run();
            debug_assert_eq!(status, Pivoting::Optimal);
            if !tab.obj[ncols].is_zero() {
                return None;
            }
            tab.drive_out_artificials(art_start);
        }
        for a in tab.allowed[art_start..].iter_mut() {
            *a = false;
        }
        Some(tab)
    }

    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= art_start {
                match (0..art_start).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        // Redundant row.
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if !cb.is_zero() {
                for (o, t) in obj.iter_mut().zip(row) {
                    if !t.is_zero() {
                        *o -= cb * t;
                    }
                }
            }
        }
        self.obj = obj;
    }

    /// Excludes every nonbasic column whose reduced cost is positive: such
    /// columns are zero in every optimal solution of the current objective.
    fn restrict_to_optimal_face(&mut self) {
        for j in 0..self.ncols {
            if self.obj[j].is_positive() {
                self.allowed[j] = false;
            }
        }
    }

    fn run(&mut self) -> Pivoting {
        loop {
            let entering = (0..self.ncols).find(|&j| self.allowed[j] && self.obj[j].is_negative());
            let Some(col) = entering else {
                return Pivoting::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[self.ncols] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = best else {
                return Pivoting::Unbounded;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[c].clone();
            if factor.is_zero() {
                return;
            }
            for (t, pv) in target.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *t -= &factor * pv;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        if !self.obj.is_empty() {
            eliminate(&mut self.obj);
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn structural_values(&self, n: usize) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < n {
                y[b] = row[self.ncols].clone();
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn one_variable() {
        let mut lp = LinearProgram::new(Sense::Minimize, q(&[1]));
        lp.add_constraint(q(&[1]), Relation::Ge, ratio(3, 2));
        let s = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(s.value, ratio(3, 2));
        assert_eq!(s.point, vec![ratio(3, 2)]);
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(Sense::Maximize, q(&[3, 5]));
        lp.add_constraint(q(&[1, 0]), Relation::Le, int(4))
            .add_constraint(q(&[0, 2]), Relation::Le, int(12))
            .add_constraint(q(&[3, 2]), Relation::Le, int(18));
        let s = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(s.value, int(36));
        assert_eq!(s.point, q(&[2, 6]));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Minimize, q(&[1]));
        lp.add_constraint(q(&[1]), Relation::Le, int(1))
            .add_constraint(q(&[1]), Relation::Ge, int(2));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(Sense::Maximize, q(&[1, 1]));
        lp.add_constraint(q(&[1, -1]), Relation::Le, int(1));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_redundant_rows() {
        let mut lp = LinearProgram::new(Sense::Minimize, q(&[1, 2, 0]));
        lp.add_constraint(q(&[1, 1, 1]), Relation::Eq, int(3))
            .add_constraint(q(&[2, 2, 2]), Relation::Eq, int(6))
            .add_constraint(q(&[1, 0, 0]), Relation::Ge, int(1));
        let s = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.point, q(&[1, 0, 2]));
    }

    #[test]
    fn lexicographically_smallest_optimum() {
        // max x + y on x + y <= 2: the optimal face is a segment; expect (0, 2).
        let mut lp = LinearProgram::new(Sense::Maximize, q(&[1, 1]));
        lp.add_constraint(q(&[1, 1]), Relation::Le, int(2));
        let s = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(s.point, q(&[0, 2]));
    }

    #[test]
    fn bounds_are_respected() {
        let mut lp = LinearProgram::new(Sense::Maximize, q(&[1, 1]));
        lp.set_bounds(0, int(-2), Some(int(3)));
        lp.set_bounds(1, ratio(1, 2), Some(ratio(1, 2)));
        let s = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(s.point, vec![int(3), ratio(1, 2)]);

        let mut lp = LinearProgram::new(Sense::Minimize, q(&[1]));
        lp.set_bounds(0, int(-2), None);
        assert_eq!(lp.solve().unwrap().optimal().unwrap().value, int(-2));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook rule; Bland's rule must not.
        let mut lp = LinearProgram::new(
            Sense::Minimize,
            vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)],
        );
        lp.add_constraint(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Relation::Le, int(0))
            .add_constraint(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Relation::Le, int(0))
            .add_constraint(q(&[0, 0, 1, 0]), Relation::Le, int(1));
        let s = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(s.value, ratio(-1, 20));
    }

    #[test]
    fn dimension_mismatch() {
        let mut lp = LinearProgram::new(Sense::Minimize, q(&[1, 1]));
        lp.add_constraint(q(&[1]), Relation::Ge, int(1));
        assert!(matches!(lp.solve(), Err(Error::Dimension(_))));
    }
}
