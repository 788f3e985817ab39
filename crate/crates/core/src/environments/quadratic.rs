use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::oracle::{Environment, Regularity};
use crate::rng::StreamRng;

/// `F(x) = ½xᵀAx + bᵀx` observed through `f(x, ξ) = ξ`, `ξ ~ N(F(x), σ²)`.
///
/// Every regularity constant is known: the noise bound is exactly `σ`,
/// `M = λ_max(A)` and `H = 0`.
#[derive(Clone, Debug)]
pub struct QuadraticEnv {
    a: DMatrix<f64>,
    b: DVector<f64>,
    sigma: f64,
    eigenvalues: Vec<f64>,
    minimizer: Option<Vec<f64>>,
    optimal_value: Option<f64>,
}

impl QuadraticEnv {
    /// `a` must be symmetric positive semidefinite.
    pub fn new(a: DMatrix<f64>, b: Vec<f64>, sigma: f64) -> Result<Self> {
        let d = a.nrows();
        if d == 0 || a.ncols() != d {
            return Err(Error::arg("A must be a non-empty square matrix"));
        }
        if b.len() != d {
            return Err(Error::arg("b must have the dimension of A"));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::arg("sigma must be finite and >= 0"));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::arg("A and b must be finite"));
        }
        let scale = a.amax().max(1.0);
        if (&a - a.transpose()).amax() > 1e-12 * scale {
            return Err(Error::arg("A must be symmetric"));
        }
        let eig = SymmetricEigen::new(a.clone());
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        if eigenvalues[0] < -1e-12 * scale {
            return Err(Error::arg(format!(
                "A must be positive semidefinite (smallest eigenvalue {})",
                eigenvalues[0]
            )));
        }
        let b = DVector::from_vec(b);
        let (minimizer, optimal_value) = if eigenvalues[0] > 1e-12 * scale {
            let xs = a
                .clone()
                .cholesky()
                .map(|c| -c.solve(&b))
                .ok_or_else(|| Error::Numerical("Cholesky factorisation failed".into()))?;
            let fstar = 0.5 * b.dot(&xs);
            (Some(xs.iter().copied().collect()), Some(fstar))
        } else {
            (None, None)
        };
        Ok(QuadraticEnv {
            a,
            b,
            sigma,
            eigenvalues,
            minimizer,
            optimal_value,
        })
    }

    /// `A = diag(eigenvalues)`.
    pub fn diagonal(eigenvalues: &[f64], b: Vec<f64>, sigma: f64) -> Result<Self> {
        QuadraticEnv::new(
            DMatrix::from_diagonal(&DVector::from_column_slice(eigenvalues)),
            b,
            sigma,
        )
    }

    /// `F(x) = ½‖x‖²`.
    pub fn isotropic(dimension: usize, sigma: f64) -> Result<Self> {
        QuadraticEnv::diagonal(&vec![1.0; dimension], vec![0.0; dimension], sigma)
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        self.b.as_slice()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Eigenvalues of `A` in increasing order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn smoothness(&self) -> f64 {
        *self.eigenvalues.last().expect("dimension >= 1")
    }

    pub fn minimizer(&self) -> Option<&[f64]> {
        self.minimizer.as_deref()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let d = x.len();
        let mut quad = 0.0;
        for j in 0..d {
            let col = self.a.column(j);
            let ax: f64 = col.iter().zip(x).map(|(p, q)| p * q).sum();
            quad += x[j] * ax;
        }
        0.5 * quad + self.b.iter().zip(x).map(|(p, q)| p * q).sum::<f64>()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let xv = DVector::from_column_slice(x);
        (&self.a * xv + &self.b).iter().copied().collect()
    }
}

impl Environment for QuadraticEnv {
    fn dimension(&self) -> usize {
        self.b.len()
    }

    fn draw(&self, x: &[f64], rng: &mut StreamRng) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        self.value(x) + self.sigma * z
    }

    fn exact_value(&self, x: &[f64]) -> Option<f64> {
        Some(self.value(x))
    }

    fn exact_gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(self.gradient(x))
    }

    fn optimal_value(&self) -> Option<f64> {
        self.optimal_value
    }

    fn regularity(&self) -> Regularity {
        Regularity {
            sigma: Some(self.sigma),
            smoothness: Some(self.smoothness()),
            hessian_lipschitz: Some(0.0),
        }
    }
}
