//! Exact rational simplex method for the linear program over polynomial
//! multi-indexes:
//!
//! ```text
//! maximize beta
//! s.t.     sum_h alpha_h * mu_{hj} >= beta   (j = 1..n)
//!          sum_h alpha_h = 1,  alpha >= 0, beta >= 0
//! ```
//!
//! with `mu_{hj} = a_{hj} / s_h`. The standard form introduces one slack
//! per term row. `alpha = e_1, beta = 0` is always feasible, so no phase-1
//! solve is needed. Pivoting uses Bland's rule (degenerate polytopes occur
//! whenever mu rows repeat), and every quantity is an exact rational.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::MultiIndexMatrix;
use crate::poly::OuterMonomial;
use crate::rational::{rat_from_nat, Rat};

pub const DEFAULT_PIVOT_CAP: usize = 100_000;

/// The ratio matrix `mu[h][j] = a_{hj} / s_h` (d rows, n columns).
#[derive(Clone, Debug)]
pub struct LpProblem {
    mu: Vec<Vec<Rat>>,
}

impl LpProblem {
    pub fn new(mu: Vec<Vec<Rat>>) -> Result<Self> {
        if mu.is_empty() || mu[0].is_empty() {
            return Err(Error::Invalid("empty LP".into()));
        }
        let n = mu[0].len();
        if mu.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("ragged mu matrix".into()));
        }
        if mu.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::Invalid("mu entries must be non-negative".into()));
        }
        Ok(Self { mu })
    }

    pub fn from_exponents(matrix: &MultiIndexMatrix, g: &OuterMonomial) -> Result<Self> {
        if g.var_count() != matrix.var_count() {
            return Err(Error::Invalid("dimension mismatch".into()));
        }
        let mu = (0..matrix.var_count())
            .map(|h| {
                (0..matrix.term_count())
                    .map(|j| rat_from_nat(matrix.entry(h, j)) / &g.s()[h])
                    .collect()
            })
            .collect();
        Self::new(mu)
    }

    pub fn var_count(&self) -> usize {
        self.mu.len()
    }

    pub fn term_count(&self) -> usize {
        self.mu[0].len()
    }

    pub fn mu(&self) -> &[Vec<Rat>] {
        &self.mu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    DegenerateOptimal,
}

/// An exact optimal basic solution. `alpha` lies on the simplex, `beta` is
/// the optimum, and `basis` lists the basic variable indices of the
/// terminal (Bland) basis in the variable order `alpha_1..alpha_d, beta,
/// gamma_1..gamma_n`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub beta: Rat,
    pub alpha: Vec<Rat>,
    pub basis: Vec<usize>,
    pub status: LpStatus,
    pub pivots: usize,
}

pub fn lp_solve(problem: &LpProblem) -> Result<LpSolution> {
    lp_solve_capped(problem, DEFAULT_PIVOT_CAP)
}

pub fn lp_solve_capped(problem: &LpProblem, pivot_cap: usize) -> Result<LpSolution> {
    let d = problem.var_count();
    let n = problem.term_count();
    let nvars = d + 1 + n;
    let beta_col = d;

    // Tableau rows 0..n-1: -mu^T alpha + beta + gamma = 0; row n: sum alpha = 1.
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row = vec![Rat::zero(); nvars];
        for h in 0..d {
            row[h] = -problem.mu[h][j].clone();
        }
        row[beta_col] = Rat::one();
        row[d + 1 + j] = Rat::one();
        t.push(row);
    }
    let mut last = vec![Rat::zero(); nvars];
    for cell in last.iter_mut().take(d) {
        *cell = Rat::one();
    }
    t.push(last);
    let mut rhs = vec![Rat::zero(); n + 1];
    rhs[n] = Rat::one();

    // Initial basis: gamma_j on rows 0..n-1, alpha_1 on row n. Reduce the
    // alpha_1 column (its pivot entry on row n is already 1).
    let mut basis: Vec<usize> = (0..n).map(|j| d + 1 + j).collect();
    basis.push(0);
    for j in 0..n {
        let factor = t[j][0].clone();
        if factor.is_zero() {
            continue;
        }
        for h in 0..nvars {
            let sub = &factor * &t[n][h];
            t[j][h] -= sub;
        }
        let sub = &factor * &rhs[n];
        rhs[j] -= sub;
    }

    // Reduced cost row for "maximize beta"; no initial basic variable has
    // a cost coefficient.
    let mut cost = vec![Rat::zero(); nvars];
    cost[beta_col] = Rat::one();

    let mut pivots = 0usize;
    loop {
        // Bland: entering variable = smallest index with positive reduced cost.
        let Some(enter) = (0..nvars).find(|&jv| cost[jv].is_positive()) else {
            break;
        };
        // Ratio test; ties go to the smallest basic variable index.
        let mut leave: Option<(usize, Rat)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &row[enter];
            match &leave {
                Some((best, r)) if *r < ratio || (*r == ratio && basis[*best] < basis[i]) => {}
                _ => leave = Some((i, ratio)),
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::Internal(
                "LP unbounded; the simplex constraint should bound beta".into(),
            ));
        };
        pivots += 1;
        if pivots > pivot_cap {
            return Err(Error::PivotCap(pivot_cap));
        }
        // Pivot on (row, enter).
        let pivot = t[row][enter].clone();
        for cell in t[row].iter_mut() {
            *cell /= &pivot;
        }
        rhs[row] /= &pivot;
        for i in 0..t.len() {
            if i == row || t[i][enter].is_zero() {
                continue;
            }
            let factor = t[i][enter].clone();
            for h in 0..nvars {
                let sub = &factor * &t[row][h];
                t[i][h] -= sub;
            }
            let sub = &factor * &rhs[row];
            rhs[i] -= sub;
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for h in 0..nvars {
                let sub = &factor * &t[row][h];
                cost[h] -= sub;
            }
        }
        basis[row] = enter;
    }

    let mut alpha = vec![Rat::zero(); d];
    let mut beta = Rat::zero();
    for (i, &v) in basis.iter().enumerate() {
        if v < d {
            alpha[v] = rhs[i].clone();
        } else if v == beta_col {
            beta = rhs[i].clone();
        }
    }
    let status = if rhs.iter().any(|r| r.is_zero()) {
        LpStatus::DegenerateOptimal
    } else {
        LpStatus::Optimal
    };

    verify(problem, &alpha, &beta)?;
    let mut sorted_basis = basis;
    sorted_basis.sort_unstable();
    Ok(LpSolution {
        beta,
        alpha,
        basis: sorted_basis,
        status,
        pivots,
    })
}

/// Exact feasibility and optimality-structure check: alpha on the simplex,
/// and beta equal to the minimum weighted column sum.
fn verify(problem: &LpProblem, alpha: &[Rat], beta: &Rat) -> Result<()> {
    if alpha.iter().any(|a| a.is_negative()) || beta.is_negative() {
        return Err(Error::Internal("negative LP solution component".into()));
    }
    let sum: Rat = alpha.iter().sum();
    if !sum.is_one() {
        return Err(Error::Internal("alpha does not lie on the simplex".into()));
    }
    let min = objective_min(problem, alpha);
    if min != *beta {
        return Err(Error::Internal(
            "beta does not equal the minimum weighted column sum".into(),
        ));
    }
    Ok(())
}

/// `min_j sum_h alpha_h mu_{hj}`.
pub fn objective_min(problem: &LpProblem, alpha: &[Rat]) -> Rat {
    (0..problem.term_count())
        .map(|j| {
            (0..problem.var_count())
                .map(|h| &alpha[h] * &problem.mu[h][j])
                .sum::<Rat>()
        })
        .min()
        .expect("at least one term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn mu(rows: &[&[i64]]) -> LpProblem {
        LpProblem::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_variable_example() {
        // w1^2 + w2^4 with s = 1: beta = 4/3 at alpha = (2/3, 1/3).
        let sol = lp_solve(&mu(&[&[2, 0], &[0, 4]])).unwrap();
        assert_eq!(sol.beta, rat(4, 3));
        assert_eq!(sol.alpha, vec![rat(2, 3), rat(1, 3)]);
    }

    #[test]
    fn zero_column_gives_zero_beta() {
        let sol = lp_solve(&mu(&[&[2, 0], &[0, 0]])).unwrap();
        assert_eq!(sol.beta, Rat::zero());
    }

    #[test]
    fn three_variable_equalization() {
        // Diagonal (2, 4, 6): beta = 12/11 at alpha = (6/11, 3/11, 2/11).
        let sol = lp_solve(&mu(&[&[2, 0, 0], &[0, 4, 0], &[0, 0, 6]])).unwrap();
        assert_eq!(sol.beta, rat(12, 11));
        assert_eq!(sol.alpha, vec![rat(6, 11), rat(3, 11), rat(2, 11)]);
    }

    #[test]
    fn degenerate_monomial() {
        // Single monomial w1^4 w2^2: beta = max(4 alpha1 + 2 alpha2) = 4.
        let sol = lp_solve(&mu(&[&[4], &[2]])).unwrap();
        assert_eq!(sol.beta, rat_int(4));
        assert_eq!(sol.alpha, vec![rat_int(1), rat_int(0)]);
    }

    #[test]
    fn rational_prior_weights() {
        // mu for f = w1^2 + w2^2 with s = (1/2, 1/2): mu = [[4,0],[0,4]].
        let p = LpProblem::new(vec![
            vec![rat_int(4), rat_int(0)],
            vec![rat_int(0), rat_int(4)],
        ])
        .unwrap();
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.beta, rat_int(2));
    }

    #[test]
    fn solution_is_exactly_feasible() {
        let p = mu(&[&[2, 0, 3], &[1, 4, 0], &[0, 2, 5]]);
        let sol = lp_solve(&p).unwrap();
        assert_eq!(objective_min(&p, &sol.alpha), sol.beta);
        assert_eq!(sol.alpha.iter().sum::<Rat>(), rat_int(1));
    }
}
