use crate::error::{Error, Result};

/// A sample of `n` observations, each a flat real vector of length `obs_dim`.
///
/// Paired-regression data use `obs_dim = 2` with component order `(x, y)`;
/// the asset-pricing model uses `(x1, x2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    obs_dim: usize,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(obs_dim: usize, values: Vec<f64>) -> Result<Self> {
        if obs_dim == 0 {
            return Err(Error::domain("obs_dim must be positive"));
        }
        if !values.len().is_multiple_of(obs_dim) {
            return Err(Error::domain(format!(
                "flat length {} is not a multiple of obs_dim {}",
                values.len(),
                obs_dim
            )));
        }
        Ok(Dataset { obs_dim, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let obs_dim = rows.first().map(|r| r.len()).unwrap_or(1);
        let mut values = Vec::with_capacity(rows.len() * obs_dim);
        for row in rows {
            if row.len() != obs_dim {
                return Err(Error::domain("ragged rows"));
            }
            values.extend_from_slice(row);
        }
        Dataset::new(obs_dim, values)
    }

    /// Scalar observations.
    pub fn univariate(values: Vec<f64>) -> Self {
        Dataset { obs_dim: 1, values }
    }

    pub fn n(&self) -> usize {
        self.values.len() / self.obs_dim
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.obs_dim..(i + 1) * self.obs_dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.obs_dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// First component of every observation (the full value for scalar data).
    pub fn col(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        let d = self.obs_dim;
        self.values.iter().skip(j).step_by(d).copied()
    }
}
