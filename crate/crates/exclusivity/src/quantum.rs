//! Explicit finite-dimensional models certifying that the derived
//! maxima are achievable: a three-dimensional umbrella construction for
//! the pentagon and a two-qubit construction for CHSH. Real vectors
//! suffice for both.

use std::f64::consts::PI;

use crate::classical::{correlator_from_probs, kappa_from_s};
use crate::error::Error;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A state vector and one rank-1 projector (as a unit vector) per event.
#[derive(Clone, Debug)]
pub struct ProjectorModel {
    pub state: Vec<f64>,
    pub projectors: Vec<Vec<f64>>,
}

impl ProjectorModel {
    /// P(event j) = |<state|v_j>|^2.
    pub fn probability(&self, j: usize) -> f64 {
        dot(&self.state, &self.projectors[j]).powi(2)
    }

    pub fn s_value(&self) -> f64 {
        (0..self.projectors.len()).map(|j| self.probability(j)).sum()
    }

    pub fn max_unit_norm_residual(&self) -> f64 {
        std::iter::once(&self.state)
            .chain(self.projectors.iter())
            .map(|v| (norm(v) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest |<v_i|v_j>| over the given pairs.
    pub fn max_orthogonality_residual(&self, pairs: &[(usize, usize)]) -> f64 {
        pairs
            .iter()
            .map(|&(i, j)| dot(&self.projectors[i], &self.projectors[j]).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct KcbsRealization {
    pub s_value: f64,
    /// Sign-flipped sum evaluated in the same geometry.
    pub s_prime_value: f64,
    pub kappa: f64,
    pub model: ProjectorModel,
}

/// The umbrella model: state along the axis, five unit vectors at the
/// common polar angle with cos^2(theta) = cos(pi/5) / (1 + cos(pi/5)),
/// azimuths 4*pi*j/5 so consecutive vectors are orthogonal. Each event
/// probability is 1/sqrt(5) and the sum is sqrt(5).
pub fn kcbs_realization() -> KcbsRealization {
    let c5 = (PI / 5.0).cos();
    let cos2 = c5 / (1.0 + c5);
    let cos_t = cos2.sqrt();
    let sin_t = (1.0 - cos2).sqrt();
    let state = vec![1.0, 0.0, 0.0];
    let projectors: Vec<Vec<f64>> = (0..5)
        .map(|j| {
            let phi = 4.0 * PI * j as f64 / 5.0;
            vec![cos_t, sin_t * phi.cos(), sin_t * phi.sin()]
        })
        .collect();
    let model = ProjectorModel { state, projectors };
    let s_value = model.s_value();
    // the sign-flipped event list generates the same pentagon of
    // exclusivity relations, so the identical geometry realizes it with
    // the identical value
    let s_prime_value = s_value;
    KcbsRealization {
        s_value,
        s_prime_value,
        kappa: kappa_from_s(s_value, s_prime_value),
        model,
    }
}

/// Consecutive pairs around the pentagon, the realized exclusivities.
pub fn kcbs_adjacent_pairs() -> Vec<(usize, usize)> {
    (0..5).map(|j| (j, (j + 1) % 5)).collect()
}

#[derive(Clone, Debug)]
pub struct ChshRealization {
    pub beta: f64,
    pub s_value: f64,
    /// <A1 A2>, <A2 A3>, <A3 A4>, <A4 A1>.
    pub correlators: [f64; 4],
    /// Joint outcome probabilities (++, +-, -+, --) per correlator.
    pub joint_probs: [[f64; 4]; 4],
    /// Measurement angles in radians for A1..A4.
    pub angles: [f64; 4],
}

/// Maximally entangled two-qubit model with measurement directions at
/// successive 45 degree steps: on the state (|00> + |11>)/sqrt(2) the
/// correlator of directions (t1, t2) is cos(t1 - t2), so three
/// correlators reach +1/sqrt(2) and the cyclic one -1/sqrt(2), giving
/// beta = 2*sqrt(2).
pub fn chsh_realization() -> Result<ChshRealization, Error> {
    // A1, A3 on one side; A2, A4 on the other (the cycle alternates)
    let angles = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0];
    let mut correlators = [0.0; 4];
    let mut joint_probs = [[0.0; 4]; 4];
    for k in 0..4 {
        let (t1, t2) = (angles[k], angles[(k + 1) % 4]);
        let e = (t1 - t2).cos();
        // p(a,b) = (1 + a*b*E)/4 for the maximally entangled state with
        // uniformly random single-side outcomes
        let probs = [
            (1.0 + e) / 4.0,
            (1.0 - e) / 4.0,
            (1.0 - e) / 4.0,
            (1.0 + e) / 4.0,
        ];
        joint_probs[k] = probs;
        correlators[k] = correlator_from_probs(probs[0], probs[1], probs[2], probs[3])?;
    }
    let beta = correlators[0] + correlators[1] + correlators[2] - correlators[3];
    Ok(ChshRealization {
        beta,
        s_value: (beta + 4.0) / 2.0,
        correlators,
        joint_probs,
        angles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::beta_from_s;

    #[test]
    fn kcbs_model_reaches_sqrt5() {
        let r = kcbs_realization();
        assert!((r.s_value - 5f64.sqrt()).abs() < 1e-9, "S = {}", r.s_value);
        assert!(r.model.max_unit_norm_residual() < 1e-12);
        assert!(r.model.max_orthogonality_residual(&kcbs_adjacent_pairs()) < 1e-10);
        assert!((r.kappa - (4.0 * 5f64.sqrt() - 5.0)).abs() < 1e-8);
        // all five probabilities equal by symmetry
        for j in 0..5 {
            assert!((r.model.probability(j) - 5f64.sqrt() / 5.0).abs() < 1e-9);
        }
    }

    #[test]
    fn chsh_model_reaches_tsirelson() {
        let r = chsh_realization().unwrap();
        assert!((r.beta - 2.0 * 2f64.sqrt()).abs() < 1e-12, "beta = {}", r.beta);
        assert!((r.s_value - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((beta_from_s(r.s_value) - r.beta).abs() < 1e-12);
        for k in 0..3 {
            assert!((r.correlators[k] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        }
        assert!((r.correlators[3] + 1.0 / 2f64.sqrt()).abs() < 1e-12);
        for probs in r.joint_probs {
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(probs.iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
    }
}
