//! Exact rational linear programming for probability-sum maxima.
//!
//! Problems here are tiny and always of the form: maximize a weighted
//! sum of probabilities p_i in [0,1] subject to "sum over an index set
//! <= 1" constraints. A dense simplex over BigRational with Bland's
//! rule keeps everything exact and deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::graph::{enumerate_maximal_cliques, Graph};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    /// Objective weight per variable; variables range over [0,1].
    pub objective: Vec<Rational>,
    /// Each entry is an index set S asserting sum_{i in S} x_i <= 1.
    pub constraints: Vec<Vec<usize>>,
}

impl LpProblem {
    /// Unit objective over n variables with the given sum-<=-1 sets.
    pub fn unit(n: usize, constraints: Vec<Vec<usize>>) -> LpProblem {
        LpProblem {
            objective: vec![Rational::one(); n],
            constraints,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.objective.len();
        if n > 200 {
            return Err(Error::SizeLimit(format!("{n} LP variables; limit is 200")));
        }
        for (k, s) in self.constraints.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::MalformedLp(format!("constraint {k} is empty")));
            }
            let mut seen = vec![false; n];
            for &i in s {
                if i >= n {
                    return Err(Error::MalformedLp(format!(
                        "constraint {k} references variable {i} of {n}"
                    )));
                }
                if seen[i] {
                    return Err(Error::MalformedLp(format!(
                        "constraint {k} repeats variable {i}"
                    )));
                }
                seen[i] = true;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rational,
    pub solution: Vec<Rational>,
}

/// Maximizes the objective. Exact; the returned solution is feasible
/// with zero tolerance and its objective equals `value`.
pub fn lp_max(problem: &LpProblem) -> Result<LpSolution, Error> {
    problem.validate()?;
    let n = problem.objective.len();

    // rows: the stated constraints, then a box row x_i <= 1 per variable.
    // All right-hand sides are 1, so the slack basis is feasible.
    let m = problem.constraints.len() + n;
    let cols = n + m + 1; // variables, slacks, rhs
    let mut t = vec![vec![Rational::zero(); cols]; m + 1];
    for (r, s) in problem.constraints.iter().enumerate() {
        for &i in s {
            t[r][i] = Rational::one();
        }
        t[r][n + r] = Rational::one();
        t[r][cols - 1] = Rational::one();
    }
    for i in 0..n {
        let r = problem.constraints.len() + i;
        t[r][i] = Rational::one();
        t[r][n + r] = Rational::one();
        t[r][cols - 1] = Rational::one();
    }
    // objective row holds -c so optimality is "no negative entries"
    for i in 0..n {
        t[m][i] = -problem.objective[i].clone();
    }

    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // Bland: entering column = lowest index with negative reduced cost
        let Some(pivot_col) = (0..cols - 1).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        // leaving row: min ratio, ties by lowest basis variable index
        let mut pivot_row: Option<usize> = None;
        let mut best_ratio: Option<Rational> = None;
        for r in 0..m {
            if t[r][pivot_col].is_positive() {
                let ratio = &t[r][cols - 1] / &t[r][pivot_col];
                let better = match &best_ratio {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[r] < basis[pivot_row.unwrap()])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    pivot_row = Some(r);
                }
            }
        }
        let Some(pr) = pivot_row else {
            return Err(Error::MalformedLp("unbounded objective".into()));
        };
        pivot(&mut t, pr, pivot_col);
        basis[pr] = pivot_col;
    }

    let mut solution = vec![Rational::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            solution[b] = t[r][cols - 1].clone();
        }
    }
    let value = t[m][cols - 1].clone();
    debug_assert_eq!(
        value,
        solution
            .iter()
            .zip(&problem.objective)
            .map(|(x, c)| x * c)
            .sum::<Rational>()
    );
    Ok(LpSolution { value, solution })
}

fn pivot(t: &mut [Vec<Rational>], pr: usize, pc: usize) {
    let cols = t[pr].len();
    let p = t[pr][pc].clone();
    for j in 0..cols {
        t[pr][j] = &t[pr][j] / &p;
    }
    for r in 0..t.len() {
        if r != pr && !t[r][pc].is_zero() {
            let factor = t[r][pc].clone();
            for j in 0..cols {
                let delta = &factor * &t[pr][j];
                t[r][j] = &t[r][j] - delta;
            }
        }
    }
}

/// Edge-constraint LP: only pairwise exclusivity restricts the
/// probabilities, one "x_i + x_j <= 1" per edge.
pub fn kolmogorov_max(g: &Graph) -> Result<Rational, Error> {
    let constraints = g.edges().into_iter().map(|(i, j)| vec![i, j]).collect();
    Ok(lp_max(&LpProblem::unit(g.len(), constraints))?.value)
}

/// One constraint per maximal clique: every pairwise exclusive set is
/// jointly exclusive. Never exceeds kolmogorov_max.
pub fn clique_lp_max(g: &Graph) -> Result<Rational, Error> {
    let constraints = enumerate_maximal_cliques(g);
    Ok(lp_max(&LpProblem::unit(g.len(), constraints))?.value)
}

/// Checks feasibility of a solution with zero tolerance.
pub fn is_feasible(problem: &LpProblem, x: &[Rational]) -> bool {
    if x.len() != problem.objective.len() {
        return false;
    }
    if x.iter().any(|v| v.is_negative() || *v > Rational::one()) {
        return false;
    }
    problem
        .constraints
        .iter()
        .all(|s| s.iter().map(|&i| x[i].clone()).sum::<Rational>() <= Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, Graph};
    use num_traits::ToPrimitive;

    #[test]
    fn triangle_edge_lp_is_three_halves() {
        let v = kolmogorov_max(&complete(3)).unwrap();
        assert_eq!(v, rat(3, 2));
    }

    #[test]
    fn triangle_clique_lp_is_one() {
        let v = clique_lp_max(&complete(3)).unwrap();
        assert_eq!(v, rat(1, 1));
    }

    #[test]
    fn pentagon_lps() {
        assert_eq!(kolmogorov_max(&cycle(5)).unwrap(), rat(5, 2));
        // the cliques of C5 are its edges
        assert_eq!(clique_lp_max(&cycle(5)).unwrap(), rat(5, 2));
    }

    #[test]
    fn edgeless_and_complete() {
        assert_eq!(kolmogorov_max(&Graph::new(4)).unwrap(), rat(4, 1));
        assert_eq!(clique_lp_max(&complete(4)).unwrap(), rat(1, 1));
    }

    #[test]
    fn solution_is_exactly_feasible() {
        let p = LpProblem::unit(5, cycle(5).edges().into_iter().map(|(i, j)| vec![i, j]).collect());
        let s = lp_max(&p).unwrap();
        assert!(is_feasible(&p, &s.solution));
        assert_eq!(
            s.solution.iter().sum::<Rational>(),
            s.value
        );
    }

    #[test]
    fn weighted_objective() {
        // max 2x0 + x1 with x0 + x1 <= 1: optimum at x0 = 1
        let p = LpProblem {
            objective: vec![rat(2, 1), rat(1, 1)],
            constraints: vec![vec![0, 1]],
        };
        let s = lp_max(&p).unwrap();
        assert_eq!(s.value, rat(2, 1));
        assert_eq!(s.value.to_f64().unwrap(), 2.0);
    }

    #[test]
    fn malformed_rejected() {
        let p = LpProblem::unit(2, vec![vec![0, 5]]);
        assert!(lp_max(&p).is_err());
        let p = LpProblem::unit(2, vec![vec![]]);
        assert!(lp_max(&p).is_err());
        let p = LpProblem::unit(2, vec![vec![0, 0]]);
        assert!(lp_max(&p).is_err());
    }
}
