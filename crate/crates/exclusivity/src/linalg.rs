//! Dense symmetric matrices with a cyclic Jacobi eigendecomposition.
//! Small orders only; everything the SDP solver and the quantum models
//! need and nothing more.

#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> SymMatrix {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> SymMatrix {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both (i,j) and (j,i).
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn sum_entries(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Eigendecomposition of a symmetric matrix: M = Q diag(values) Q^T,
/// columns of Q are the eigenvectors. Cyclic Jacobi rotations until the
/// off-diagonal norm falls below 1e-12 relative to the matrix scale.
pub struct Eigen {
    pub values: Vec<f64>,
    /// Row-major n*n; column k is the eigenvector for values[k].
    pub vectors: Vec<f64>,
}

pub fn eigen_decompose(m: &SymMatrix) -> Eigen {
    let n = m.order();
    let mut a = m.data.clone();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let scale = m.max_abs().max(1e-300);
    let threshold = 1e-12 * scale;

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = a[p * n + r];
                if apr.abs() <= threshold * 1e-4 {
                    continue;
                }
                let app = a[p * n + p];
                let arr = a[r * n + r];
                let theta = (arr - app) / (2.0 * apr);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akr = a[k * n + r];
                    a[k * n + p] = c * akp - s * akr;
                    a[k * n + r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let ark = a[r * n + k];
                    a[p * n + k] = c * apk - s * ark;
                    a[r * n + k] = s * apk + c * ark;
                }
                for k in 0..n {
                    let qkp = q[k * n + p];
                    let qkr = q[k * n + r];
                    q[k * n + p] = c * qkp - s * qkr;
                    q[k * n + r] = s * qkp + c * qkr;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Eigen { values, vectors: q }
}

impl Eigen {
    /// Rebuilds Q f(Lambda) Q^T.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.values.len();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut v = 0.0;
                for k in 0..n {
                    v += self.vectors[i * n + k] * f(self.values[k]) * self.vectors[j * n + k];
                }
                m.set(i, j, v);
            }
        }
        m
    }
}

pub fn min_eigenvalue(m: &SymMatrix) -> f64 {
    eigen_decompose(m)
        .values
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

/// Frobenius-nearest positive semidefinite matrix: eigendecompose and
/// clamp negative eigenvalues to zero.
pub fn psd_project(m: &SymMatrix) -> SymMatrix {
    eigen_decompose(m).reconstruct_with(|l| l.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_projects_to_itself() {
        let i = SymMatrix::identity(4);
        let p = psd_project(&i);
        assert!(p.sub(&i).max_abs() < 1e-12);
    }

    #[test]
    fn clamps_negative_eigenvalue() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 0, 1.0);
        m.set(1, 1, -1.0);
        let p = psd_project(&m);
        assert!((p.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(p.get(1, 1).abs() < 1e-12);
        assert!(p.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn jacobi_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[3usize, 6, 12, 25, 50] {
            let m = SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let e = eigen_decompose(&m);
            let back = e.reconstruct_with(|l| l);
            assert!(
                back.sub(&m).max_abs() <= 1e-10 * m.max_abs().max(1.0),
                "reconstruction failed at n={n}"
            );
        }
    }

    #[test]
    fn projection_is_psd_and_nearest() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = SymMatrix::from_fn(6, |_, _| rng.gen_range(-1.0..1.0));
            let p = psd_project(&m);
            assert!(min_eigenvalue(&p) >= -1e-12);
            // nearest: residual m - p must be negative semidefinite and
            // orthogonal to p (eigen-clamp characterization)
            let e = eigen_decompose(&m);
            let oracle = e.reconstruct_with(|l| l.max(0.0));
            assert!(p.sub(&oracle).max_abs() < 1e-10);
        }
    }
}
