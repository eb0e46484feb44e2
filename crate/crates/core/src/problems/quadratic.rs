use crate::error::{Error, Result};
use crate::objective::SmoothOracle;

/// `f(x) = 1/2 sum_i d_i x_i^2` with all `d_i > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalQuadratic {
    diag: Vec<f64>,
}

impl DiagonalQuadratic {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("empty spectrum"));
        }
        if diag.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(Error::invalid("diagonal entries must be positive and finite"));
        }
        Ok(Self { diag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Smallest and largest curvature, i.e. `(mu, L)`.
    pub fn constants(&self) -> (f64, f64) {
        let lo = self.diag.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.diag.iter().copied().fold(0.0, f64::max);
        (lo, hi)
    }
}

impl SmoothOracle for DiagonalQuadratic {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        0.5 * self.diag.iter().zip(x).map(|(d, v)| d * v * v).sum::<f64>()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.diag.iter().zip(x).map(|(d, v)| d * v).collect()
    }

    fn value_diff(&self, x: &[f64], base: &[f64]) -> f64 {
        let terms = self.diag.iter().zip(x.iter().zip(base));
        0.5 * terms.map(|(d, (a, b))| d * (a - b) * (a + b)).sum::<f64>()
    }
}
