//! Dense two-phase simplex over exact rationals with Bland's pivot rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// minimize `objective · y` subject to the constraints, `y ≥ 0` and the
/// optional upper bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    /// Rows `a · y = b`.
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    /// Rows `a · y ≤ b`.
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub upper_bounds: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Pivot cap; Bland's rule cannot cycle, so hitting it means a bug.
const MAX_PIVOTS: usize = 200_000;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > MAX_PIVOTS {
            return Err(Error::defect("simplex exceeded its pivot cap"));
        }
        let p = self.rows[r][c].clone();
        let inv = Rational::one() / &p;
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Reduced costs of `cost` for the current basis.
    fn reduced_costs(&self, cost: &[Rational], active: usize) -> Vec<Rational> {
        let mut reduced: Vec<Rational> = cost[..active].to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (c, red) in reduced.iter_mut().enumerate() {
                let a = &self.rows[r][c];
                if !a.is_zero() {
                    *red -= cb * a;
                }
            }
        }
        reduced
    }

    /// Runs Bland's rule over columns `< active`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], active: usize) -> Result<bool> {
        loop {
            let reduced = self.reduced_costs(cost, active);
            let Some(enter) = (0..active).find(|&c| reduced[c].is_negative()) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter)?,
                None => return Ok(false),
            }
        }
    }
}

pub fn solve(problem: &LpProblem) -> Result<LpOutcome> {
    let nvars = problem.objective.len();
    let mut eq_rows: Vec<(Vec<Rational>, Rational)> = problem.equalities.clone();
    let mut le_rows: Vec<(Vec<Rational>, Rational)> = problem.inequalities.clone();
    for (j, bound) in problem.upper_bounds.iter().enumerate() {
        if let Some(b) = bound {
            let mut row = vec![Rational::zero(); nvars];
            row[j] = Rational::one();
            le_rows.push((row, b.clone()));
        }
    }
    for (row, _) in eq_rows.iter().chain(le_rows.iter()) {
        if row.len() != nvars {
            return Err(Error::input("constraint width does not match objective"));
        }
    }

    let nslack = le_rows.len();
    let nrows = eq_rows.len() + nslack;
    // Columns: originals, slacks, then one artificial per row that needs it.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(nrows);
    let mut rhs: Vec<Rational> = Vec::with_capacity(nrows);
    let mut natural_basis: Vec<Option<usize>> = Vec::with_capacity(nrows);
    for (row, b) in eq_rows.drain(..) {
        let mut full = row;
        full.resize(nvars + nslack, Rational::zero());
        rows.push(full);
        rhs.push(b);
        natural_basis.push(None);
    }
    for (s, (row, b)) in le_rows.drain(..).enumerate() {
        let mut full = row;
        full.resize(nvars + nslack, Rational::zero());
        full[nvars + s] = Rational::one();
        rows.push(full);
        rhs.push(b);
        natural_basis.push(Some(nvars + s));
    }
    for r in 0..nrows {
        if rhs[r].is_negative() {
            for v in rows[r].iter_mut() {
                *v = -v.clone();
            }
            rhs[r] = -rhs[r].clone();
            natural_basis[r] = None;
        }
    }
    let base_cols = nvars + nslack;
    let needs_art: Vec<usize> = (0..nrows).filter(|&r| natural_basis[r].is_none()).collect();
    let total_cols = base_cols + needs_art.len();
    let mut basis = vec![0; nrows];
    for row in rows.iter_mut() {
        row.resize(total_cols, Rational::zero());
    }
    for (a, &r) in needs_art.iter().enumerate() {
        rows[r][base_cols + a] = Rational::one();
        basis[r] = base_cols + a;
    }
    for r in 0..nrows {
        if let Some(c) = natural_basis[r] {
            basis[r] = c;
        }
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        pivots: 0,
    };

    if !needs_art.is_empty() {
        let mut phase1 = vec![Rational::zero(); total_cols];
        for cost in &mut phase1[base_cols..] {
            *cost = Rational::one();
        }
        tab.optimize(&phase1, total_cols)?;
        let infeas: Rational = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(b, _)| **b >= base_cols)
            .map(|(_, v)| v.clone())
            .sum();
        if infeas.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining zero-level artificials out of the basis.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= base_cols {
                match (0..base_cols).find(|&c| !tab.rows[r][c].is_zero()) {
                    Some(c) => tab.pivot(r, c)?,
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in tab.rows.iter_mut() {
            row.truncate(base_cols);
        }
    }

    let mut cost = problem.objective.clone();
    cost.resize(base_cols, Rational::zero());
    if !tab.optimize(&cost, base_cols)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut solution = vec![Rational::zero(); nvars];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < nvars {
            solution[b] = tab.rhs[r].clone();
        }
    }
    let value = solution
        .iter()
        .zip(&problem.objective)
        .map(|(x, c)| x * c)
        .sum();
    Ok(LpOutcome::Optimal { value, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_minimization() {
        // min -x - y s.t. x + 2y <= 4, 3x + y <= 6
        let lp = LpProblem {
            objective: v(&[-1, -1]),
            equalities: vec![],
            inequalities: vec![(v(&[1, 2]), int(4)), (v(&[3, 1]), int(6))],
            upper_bounds: vec![None, None],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, ratio(-14, 5));
                assert_eq!(solution, vec![ratio(8, 5), ratio(6, 5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equality_and_bounds() {
        // min x + 2y s.t. x + y = 3, x <= 1
        let lp = LpProblem {
            objective: v(&[1, 2]),
            equalities: vec![(v(&[1, 1]), int(3))],
            inequalities: vec![],
            upper_bounds: vec![Some(int(1)), None],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LpProblem {
            objective: v(&[1]),
            equalities: vec![(v(&[1]), int(2))],
            inequalities: vec![(v(&[1]), int(1))],
            upper_bounds: vec![None],
        };
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
        let lp = LpProblem {
            objective: v(&[-1]),
            equalities: vec![],
            inequalities: vec![(v(&[-1]), int(1))],
            upper_bounds: vec![None],
        };
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let lp = LpProblem {
            objective: v(&[1, 1]),
            equalities: vec![(v(&[1, 1]), int(2)), (v(&[2, 2]), int(4))],
            inequalities: vec![],
            upper_bounds: vec![None, None],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(2)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
