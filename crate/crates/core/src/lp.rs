//! Dense two-phase simplex with Bland's rule.
//!
//! Runs in whatever field the caller picks; with [`crate::scalar::Rational`]
//! every pivot is exact, so feasibility verdicts carry no tolerance.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { x: Vec<S>, value: S },
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn optimal(self) -> Option<(Vec<S>, S)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Row<S> {
    coeffs: Vec<S>,
    rel: Relation,
    rhs: S,
}

/// `maximize` / `minimize` an affine objective over linear constraints.
/// Variables are nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    num_vars: usize,
    free: Vec<bool>,
    rows: Vec<Row<S>>,
    objective: Vec<S>,
    maximize: bool,
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            rows: Vec::new(),
            objective: vec![S::zero(); num_vars],
            maximize: false,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn set_all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn constraint(&mut self, coeffs: Vec<S>, rel: Relation, rhs: S) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.rows.push(Row { coeffs, rel, rhs });
        self
    }

    /// Sparse form: `(variable, coefficient)` pairs.
    pub fn constraint_sparse(&mut self, terms: &[(usize, S)], rel: Relation, rhs: S) -> &mut Self {
        let mut coeffs = vec![S::zero(); self.num_vars];
        for (j, c) in terms {
            coeffs[*j] = coeffs[*j].clone() + c.clone();
        }
        self.constraint(coeffs, rel, rhs)
    }

    pub fn maximize(&mut self, objective: Vec<S>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self.maximize = true;
        self
    }

    pub fn minimize(&mut self, objective: Vec<S>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self.maximize = false;
        self
    }

    pub fn solve(&self, eps: f64) -> Result<LpOutcome<S>> {
        // Column layout: one column per nonneg variable, two per free variable,
        // then slacks, then artificials.
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &f in &self.free {
            if f {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                var_cols.push((ncols, None));
                ncols += 1;
            }
        }
        let structural = ncols;
        let m = self.rows.len();

        let mut normalized: Vec<(Vec<S>, Relation, S)> = Vec::with_capacity(m);
        for row in &self.rows {
            let mut coeffs = vec![S::zero(); structural];
            for (j, c) in row.coeffs.iter().enumerate() {
                let (p, n) = var_cols[j];
                coeffs[p] = c.clone();
                if let Some(n) = n {
                    coeffs[n] = -c.clone();
                }
            }
            let (mut rel, mut rhs) = (row.rel, row.rhs.clone());
            if rhs.sign(eps) == std::cmp::Ordering::Less {
                coeffs.iter_mut().for_each(|c| *c = -c.clone());
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            normalized.push((coeffs, rel, rhs));
        }

        let num_slack = normalized.iter().filter(|r| r.1 != Relation::Eq).count();
        let num_art = normalized.iter().filter(|r| r.1 != Relation::Le).count();
        let art_start = structural + num_slack;
        let total = art_start + num_art;

        let mut tab = Tableau {
            data: vec![vec![S::zero(); total + 1]; m],
            basis: vec![0; m],
            total,
            eps,
        };
        let (mut s_idx, mut a_idx) = (structural, art_start);
        for (i, (coeffs, rel, rhs)) in normalized.into_iter().enumerate() {
            for (j, c) in coeffs.into_iter().enumerate() {
                tab.data[i][j] = c;
            }
            tab.data[i][total] = rhs;
            match rel {
                Relation::Le => {
                    tab.data[i][s_idx] = S::one();
                    tab.basis[i] = s_idx;
                    s_idx += 1;
                }
                Relation::Ge => {
                    tab.data[i][s_idx] = -S::one();
                    s_idx += 1;
                    tab.data[i][a_idx] = S::one();
                    tab.basis[i] = a_idx;
                    a_idx += 1;
                }
                Relation::Eq => {
                    tab.data[i][a_idx] = S::one();
                    tab.basis[i] = a_idx;
                    a_idx += 1;
                }
            }
        }

        // Phase 1: minimize the sum of artificials.
        if num_art > 0 {
            let mut cost = vec![S::zero(); total];
            for c in cost.iter_mut().skip(art_start) {
                *c = S::one();
            }
            match tab.minimize(&cost, total)? {
                PhaseResult::Unbounded => return Err(Error::Solver("phase one unbounded".into())),
                PhaseResult::Optimal => {}
            }
            let infeas = tab.objective_value(&cost);
            if infeas.is_pos(eps) {
                return Ok(LpOutcome::Infeasible);
            }
            tab.drive_out_artificials(art_start);
        }

        // Phase 2 on structural + slack columns.
        let mut cost = vec![S::zero(); total];
        for (j, c) in self.objective.iter().enumerate() {
            let c = if self.maximize { -c.clone() } else { c.clone() };
            let (p, n) = var_cols[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c;
            }
        }
        if let PhaseResult::Unbounded = tab.minimize(&cost, art_start)? {
            return Ok(LpOutcome::Unbounded);
        }

        let mut col_values = vec![S::zero(); total];
        for (i, &b) in tab.basis.iter().enumerate() {
            col_values[b] = tab.data[i][total].clone();
        }
        let x: Vec<S> = var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => col_values[p].clone() - col_values[n].clone(),
                None => col_values[p].clone(),
            })
            .collect();
        let value = crate::scalar::dot(&self.objective, &x);
        Ok(LpOutcome::Optimal { x, value })
    }
}

enum PhaseResult {
    Optimal,
    Unbounded,
}

struct Tableau<S> {
    data: Vec<Vec<S>>,
    basis: Vec<usize>,
    total: usize,
    eps: f64,
}

impl<S: Scalar> Tableau<S> {
    fn objective_value(&self, cost: &[S]) -> S {
        self.basis
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (i, &b)| acc + cost[b].clone() * self.data[i][self.total].clone())
    }

    /// Minimize `cost` over columns `< allowed`, starting from the current basis.
    fn minimize(&mut self, cost: &[S], allowed: usize) -> Result<PhaseResult> {
        for _ in 0..MAX_PIVOTS {
            // Bland: lowest-index column with negative reduced cost.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    d = d - cost[b].clone() * self.data[i][j].clone();
                }
                d.sign(self.eps) == std::cmp::Ordering::Less
            });
            let Some(j) = entering else {
                return Ok(PhaseResult::Optimal);
            };
            let mut leave: Option<(usize, S)> = None;
            for i in 0..self.data.len() {
                let a = &self.data[i][j];
                if !a.is_pos(self.eps) {
                    continue;
                }
                let ratio = self.data[i][self.total].clone() / a.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let cmp = (ratio.clone() - lr.clone()).sign(self.eps);
                        if cmp == std::cmp::Ordering::Less
                            || (cmp == std::cmp::Ordering::Equal && self.basis[i] < self.basis[li])
                        {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(PhaseResult::Unbounded);
            };
            self.pivot(r, j);
        }
        Err(Error::Solver(format!("no convergence after {MAX_PIVOTS} pivots")))
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = S::one() / self.data[r][c].clone();
        for x in self.data[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = self.data[r].clone();
        for (i, row) in self.data.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero_tol(0.0) {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * p.clone();
            }
            if S::ARITHMETIC == crate::scalar::Arithmetic::Float {
                row[c] = S::zero();
            }
        }
        self.basis[r] = c;
    }

    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.data.len() {
            if self.basis[i] < art_start {
                i += 1;
                continue;
            }
            match (0..art_start).find(|&j| !self.data[i][j].is_zero_tol(self.eps)) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    // Redundant equality row.
                    self.data.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qv, Rational};

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::<Rational>::new(2);
        lp.constraint(qv(&[1, 0]), Relation::Le, q("4"))
            .constraint(qv(&[0, 2]), Relation::Le, q("12"))
            .constraint(qv(&[3, 2]), Relation::Le, q("18"))
            .maximize(qv(&[3, 5]));
        let (x, v) = lp.solve(0.0).unwrap().optimal().unwrap();
        assert_eq!(x, qv(&[2, 6]));
        assert_eq!(v, q("36"));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::<Rational>::new(1);
        lp.constraint(qv(&[1]), Relation::Ge, q("2")).constraint(qv(&[1]), Relation::Le, q("1"));
        assert_eq!(lp.solve(0.0).unwrap(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::<Rational>::new(1);
        lp.constraint(qv(&[1]), Relation::Ge, q("2")).maximize(qv(&[1]));
        assert_eq!(lp.solve(0.0).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min |x| style: x free, x = -3/2, minimize x -> -3/2
        let mut lp = LinearProgram::<Rational>::new(2);
        lp.set_free(0)
            .constraint(qv(&[1, 1]), Relation::Eq, q("-3/2"))
            .minimize(qv(&[0, 1]));
        let (x, _) = lp.solve(0.0).unwrap().optimal().unwrap();
        assert_eq!(x, vec![q("-3/2"), q("0")]);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.constraint(vec![1.0, 1.0], Relation::Eq, 1.0)
            .constraint(vec![2.0, 2.0], Relation::Eq, 2.0)
            .maximize(vec![1.0, 0.0]);
        let (x, v) = lp.solve(1e-9).unwrap().optimal().unwrap();
        assert!((v - 1.0).abs() < 1e-12 && (x[0] - 1.0).abs() < 1e-12);
    }
}
