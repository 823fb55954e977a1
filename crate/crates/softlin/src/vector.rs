//! Soft elements of ℝⁿ (soft vectors): total maps parameter → vector, with
//! pointwise vector algebra and soft-scalar multiplication.

use std::sync::Arc;

use crate::error::{Result, SoftError};
use crate::param::{require_same_params, ParameterSet};
use crate::real::{SoftReal, SoftScalar};

/// A soft vector: one point of ℝⁿ per parameter label, n fixed across labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftVector {
    params: Arc<ParameterSet>,
    dim: usize,
    values: Vec<Vec<f64>>,
}

impl SoftVector {
    pub fn new(params: &Arc<ParameterSet>, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != params.len() {
            return Err(SoftError::InvalidInput(format!(
                "expected {} vectors for parameter set {params}, got {}",
                params.len(),
                values.len()
            )));
        }
        let dim = values[0].len();
        if dim == 0 {
            return Err(SoftError::InvalidInput("vectors must have dimension >= 1".into()));
        }
        if let Some(bad) = values.iter().find(|v| v.len() != dim) {
            return Err(SoftError::DimensionMismatch(format!(
                "vector of length {} in a dimension-{dim} soft vector",
                bad.len()
            )));
        }
        Ok(SoftVector {
            params: Arc::clone(params),
            dim,
            values,
        })
    }

    /// The constant soft vector: the same point at every parameter.
    pub fn constant(params: &Arc<ParameterSet>, value: impl Into<Vec<f64>>) -> Result<Self> {
        let value = value.into();
        Self::new(params, vec![value; params.len()])
    }

    /// The null soft vector Θ.
    pub fn null(params: &Arc<ParameterSet>, dim: usize) -> Self {
        SoftVector {
            params: Arc::clone(params),
            dim,
            values: vec![vec![0.0; dim]; params.len()],
        }
    }

    pub fn from_fn(
        params: &Arc<ParameterSet>,
        dim: usize,
        mut f: impl FnMut(usize, &str) -> Vec<f64>,
    ) -> Result<Self> {
        let values: Vec<Vec<f64>> = params.labels().enumerate().map(|(i, l)| f(i, l)).collect();
        let v = Self::new(params, values)?;
        if v.dim != dim {
            return Err(SoftError::DimensionMismatch(format!(
                "from_fn produced dimension {}, expected {dim}",
                v.dim
            )));
        }
        Ok(v)
    }

    pub fn params(&self) -> &Arc<ParameterSet> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, index: usize) -> &[f64] {
        &self.values[index]
    }

    pub fn get(&self, label: &str) -> Option<&[f64]> {
        self.params.index_of(label).map(|i| self.values[i].as_slice())
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn add(&self, other: &SoftVector) -> Result<SoftVector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SoftVector) -> Result<SoftVector> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> SoftVector {
        self.map(|a| -a)
    }

    /// Crisp scaling: the same factor at every parameter.
    pub fn scale(&self, factor: f64) -> SoftVector {
        self.map(|a| factor * a)
    }

    /// Soft-scalar multiplication: `(k̃·x̃)(λ) = k̃(λ)·x̃(λ)`.
    pub fn scale_soft(&self, k: &SoftScalar) -> Result<SoftVector> {
        require_same_params(&self.params, k.params())?;
        let values = self
            .values
            .iter()
            .zip(k.values())
            .map(|(v, &s)| v.iter().map(|&a| s * a).collect())
            .collect();
        Ok(SoftVector {
            params: Arc::clone(&self.params),
            dim: self.dim,
            values,
        })
    }

    /// `Σ c̃ᵢ·x̃ᵢ` pointwise.
    pub fn linear_combination(
        coefficients: &[SoftScalar],
        vectors: &[SoftVector],
    ) -> Result<SoftVector> {
        if coefficients.len() != vectors.len() || vectors.is_empty() {
            return Err(SoftError::InvalidInput(format!(
                "linear combination needs matching non-empty lists, got {} coefficients and {} vectors",
                coefficients.len(),
                vectors.len()
            )));
        }
        let mut acc = vectors[0].scale_soft(&coefficients[0])?;
        for (c, x) in coefficients.iter().zip(vectors).skip(1) {
            acc = acc.add(&x.scale_soft(c)?)?;
        }
        Ok(acc)
    }

    pub fn is_null(&self, tol: f64) -> bool {
        self.values
            .iter()
            .all(|v| v.iter().all(|&a| a.abs() <= tol))
    }

    /// Largest absolute coordinate difference over all parameters.
    pub fn max_abs_diff(&self, other: &SoftVector) -> Result<f64> {
        require_same_params(&self.params, &other.params)?;
        if self.dim != other.dim {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        let mut m = 0.0f64;
        for (u, v) in self.values.iter().zip(&other.values) {
            for (&a, &b) in u.iter().zip(v) {
                m = m.max((a - b).abs());
            }
        }
        Ok(m)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> SoftVector {
        SoftVector {
            params: Arc::clone(&self.params),
            dim: self.dim,
            values: self
                .values
                .iter()
                .map(|v| v.iter().copied().map(&f).collect())
                .collect(),
        }
    }

    fn zip_with(&self, other: &SoftVector, f: impl Fn(f64, f64) -> f64) -> Result<SoftVector> {
        require_same_params(&self.params, &other.params)?;
        if self.dim != other.dim {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u.iter().zip(v).map(|(&a, &b)| f(a, b)).collect())
            .collect();
        Ok(SoftVector {
            params: Arc::clone(&self.params),
            dim: self.dim,
            values,
        })
    }
}

/// A soft real viewed as a one-dimensional soft vector.
impl From<&SoftReal> for SoftVector {
    fn from(r: &SoftReal) -> Self {
        SoftVector {
            params: Arc::clone(r.params()),
            dim: 1,
            values: r.values().iter().map(|&v| vec![v]).collect(),
        }
    }
}
