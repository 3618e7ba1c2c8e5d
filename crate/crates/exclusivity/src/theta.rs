//! Lovász theta of a graph by a dense augmented-Lagrangian SDP solver.
//!
//! Primal form: maximize the sum of all entries of X subject to
//! trace(X) = 1, X_ij = 0 on every edge, X positive semidefinite.
//! The solver alternates a closed-form multiplier step (the constraint
//! Gram matrix is diagonal) with a projection onto the PSD cone, then
//! certifies the answer from both sides: a cleaned primal feasible X
//! gives a lower bound, a shifted dual slack gives an upper bound.

use crate::error::Error;
use crate::graph::Graph;
use crate::linalg::{eigen_decompose, SymMatrix};

#[derive(Clone, Debug)]
pub struct ThetaResult {
    /// Certified value: sum of entries of `primal`, a feasible X.
    pub value: f64,
    /// Exactly feasible primal witness (edges zero, trace 1, PSD).
    pub primal: SymMatrix,
    /// Certified dual upper bound on theta.
    pub dual_value: f64,
    /// dual_value - value; bounds the distance to the true theta.
    pub gap: f64,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 200_000;
const MAX_ORDER: usize = 50;

pub fn lovasz_theta(g: &Graph, tol: f64) -> Result<ThetaResult, Error> {
    let n = g.len();
    if n > MAX_ORDER {
        return Err(Error::SizeLimit(format!(
            "{n} vertices; theta solver limit is {MAX_ORDER}"
        )));
    }
    if tol < 1e-9 {
        return Err(Error::MalformedLp(format!("tol {tol} below 1e-9 floor")));
    }
    if n == 0 {
        return Ok(ThetaResult {
            value: 0.0,
            primal: SymMatrix::zeros(0),
            dual_value: 0.0,
            gap: 0.0,
            iterations: 0,
        });
    }

    let edges = g.edges();
    let c = SymMatrix::from_fn(n, |_, _| 1.0); // objective <J, X>

    let mut x = SymMatrix::identity(n).scale(1.0 / n as f64);
    let mut z = SymMatrix::zeros(n);
    let sigma = 1.0f64;

    let mut best: Option<ThetaResult> = None;
    let mut iterations = 0;

    for it in 1..=MAX_ITERATIONS {
        iterations = it;

        // multiplier step: the constraints are trace(X) = 1 and
        // X_ij = 0 per edge; their Gram matrix is diag(n, 2, 2, ...),
        // so the least-squares system solves entrywise.
        let y0 = (z.trace() + c.trace() + (x.trace() - 1.0) / sigma) / n as f64;
        // W = A^T(y) - C - X/sigma
        let mut w = SymMatrix::from_fn(n, |i, j| {
            let a_ty = if i == j { y0 } else { 0.0 };
            a_ty - c.get(i, j) - x.get(i, j) / sigma
        });
        for &(i, j) in &edges {
            let ye = z.get(i, j) + c.get(i, j) + x.get(i, j) / sigma;
            w.set(i, j, ye - c.get(i, j) - x.get(i, j) / sigma);
        }

        // split W into PSD part (new dual slack Z) and the rest (new X)
        let eig = eigen_decompose(&w);
        z = eig.reconstruct_with(|l| l.max(0.0));
        let x_new = z.sub(&w).scale(sigma); // -sigma * negative part

        let dual_residual = x_new.sub(&x).frobenius_norm() / sigma;
        let mut primal_residual = (x_new.trace() - 1.0).powi(2);
        for &(i, j) in &edges {
            primal_residual += 2.0 * x_new.get(i, j).powi(2);
        }
        primal_residual = primal_residual.sqrt();
        x = x_new;

        let scale = 1.0 + x.frobenius_norm();
        if it % 25 == 0 || (primal_residual + dual_residual) / scale < tol * 1e-2 {
            let candidate = certify(&x, &z, y0, &edges, n);
            let better = match &best {
                None => true,
                Some(b) => candidate.gap < b.gap,
            };
            if better {
                best = Some(ThetaResult {
                    iterations: it,
                    ..candidate
                });
            }
            if best.as_ref().unwrap().gap <= tol {
                break;
            }
        }
    }

    let best = best.unwrap_or_else(|| certify(&x, &z, 0.0, &edges, n));
    if best.gap > tol {
        return Err(Error::NoConvergence { gap: best.gap });
    }
    Ok(ThetaResult { iterations, ..best })
}

/// Builds certified two-sided bounds from the current iterate.
fn certify(x: &SymMatrix, z: &SymMatrix, y0: f64, edges: &[(usize, usize)], n: usize) -> ThetaResult {
    // primal side: force edge entries to exactly zero, push back to the
    // PSD cone by an identity shift, renormalize the trace; the result
    // is feasible by construction, so its objective is a lower bound.
    let mut cleaned = x.clone();
    for &(i, j) in edges {
        cleaned.set(i, j, 0.0);
    }
    let eig = eigen_decompose(&cleaned);
    let min_eig = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let shift = (-min_eig).max(0.0) + 1e-15;
    let mut feasible = cleaned.add(&SymMatrix::identity(n).scale(shift));
    let tr = feasible.trace();
    feasible = feasible.scale(1.0 / tr);
    let value = feasible.sum_entries();

    // dual side: a certificate is any matrix of the form A^T(y) - J,
    // i.e. uniform y0 on the diagonal, -1 off the edges, free entries on
    // the edges (taken from the iterate's slack Z). If it is not PSD,
    // raising y0 by the most negative eigenvalue fixes that, and the
    // dual objective is y0 itself, so the raised y0 bounds theta above.
    let mut slack = SymMatrix::from_fn(n, |i, j| if i == j { y0 - 1.0 } else { -1.0 });
    for &(i, j) in edges {
        slack.set(i, j, z.get(i, j));
    }
    let min_s = eigen_decompose(&slack)
        .values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let dual_value = y0 + (-min_s).max(0.0);

    ThetaResult {
        value,
        primal: feasible,
        dual_value,
        gap: dual_value - value,
        iterations: 0,
    }
}

/// Closed form for odd cycles: n cos(pi/n) / (1 + cos(pi/n)).
pub fn odd_cycle_theta(n: usize) -> Result<f64, Error> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::MalformedLp(format!("{n} is not an odd cycle length")));
    }
    let c = (std::f64::consts::PI / n as f64).cos();
    Ok(n as f64 * c / (1.0 + c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, Graph};

    #[test]
    fn odd_cycle_formula() {
        assert!((odd_cycle_theta(5).unwrap() - 5f64.sqrt()).abs() < 1e-12);
        assert!((odd_cycle_theta(3).unwrap() - 1.0).abs() < 1e-12);
        assert!((odd_cycle_theta(7).unwrap() - 3.3176672).abs() < 1e-7);
        assert!(odd_cycle_theta(4).is_err());
    }

    #[test]
    fn theta_extreme_graphs() {
        let r = lovasz_theta(&complete(5), 1e-7).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "K5 theta {}", r.value);
        let r = lovasz_theta(&Graph::new(5), 1e-7).unwrap();
        assert!((r.value - 5.0).abs() < 1e-6, "empty theta {}", r.value);
    }

    #[test]
    fn theta_c5_is_sqrt5() {
        let r = lovasz_theta(&cycle(5), 1e-7).unwrap();
        assert!((r.value - 5f64.sqrt()).abs() < 1e-6, "got {}", r.value);
        assert!(r.gap <= 1e-7);
        assert!(r.value <= r.dual_value + 1e-12);
    }
}
