//! Soft real numbers: total maps from a parameter set into the reals, with
//! pointwise arithmetic and the (partial) pointwise order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SoftError};
use crate::param::{require_same_params, ParameterSet};

/// Default comparison tolerance used when a call site does not override it.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A soft real number: one real value per parameter label.
///
/// The constant lift `r̄` (same value at every label) is built with
/// [`SoftReal::constant`].
#[derive(Debug, Clone, PartialEq)]
pub struct SoftReal {
    params: Arc<ParameterSet>,
    values: Vec<f64>,
}

/// A soft real used multiplicatively.
pub type SoftScalar = SoftReal;

impl SoftReal {
    pub fn new(params: &Arc<ParameterSet>, values: impl Into<Vec<f64>>) -> Result<Self> {
        let values = values.into();
        if values.len() != params.len() {
            return Err(SoftError::InvalidInput(format!(
                "expected {} values for parameter set {params}, got {}",
                params.len(),
                values.len()
            )));
        }
        Ok(SoftReal {
            params: Arc::clone(params),
            values,
        })
    }

    /// The constant lift: value `r` at every parameter.
    pub fn constant(params: &Arc<ParameterSet>, r: f64) -> Self {
        SoftReal {
            params: Arc::clone(params),
            values: vec![r; params.len()],
        }
    }

    pub fn zero(params: &Arc<ParameterSet>) -> Self {
        Self::constant(params, 0.0)
    }

    pub fn from_fn(params: &Arc<ParameterSet>, mut f: impl FnMut(usize, &str) -> f64) -> Self {
        let values = params
            .labels()
            .enumerate()
            .map(|(i, l)| f(i, l))
            .collect();
        SoftReal {
            params: Arc::clone(params),
            values,
        }
    }

    pub fn params(&self) -> &Arc<ParameterSet> {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.params.index_of(label).map(|i| self.values[i])
    }

    pub fn add(&self, other: &SoftReal) -> Result<SoftReal> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SoftReal) -> Result<SoftReal> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &SoftReal) -> Result<SoftReal> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn neg(&self) -> SoftReal {
        self.map(|a| -a)
    }

    /// Pointwise modulus `|r̃|`.
    pub fn abs(&self) -> SoftReal {
        self.map(f64::abs)
    }

    pub fn scale(&self, factor: f64) -> SoftReal {
        self.map(|a| factor * a)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SoftReal {
        SoftReal {
            params: Arc::clone(&self.params),
            values: self.values.iter().copied().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &SoftReal, f: impl Fn(f64, f64) -> f64) -> Result<SoftReal> {
        require_same_params(&self.params, &other.params)?;
        Ok(SoftReal {
            params: Arc::clone(&self.params),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Pointwise max of the two (used by window bounds).
    pub fn max_with(&self, other: &SoftReal) -> Result<SoftReal> {
        self.zip_with(other, f64::max)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every value is within `tol` of the given constant.
    pub fn is_constant(&self, r: f64, tol: f64) -> bool {
        self.values.iter().all(|v| (v - r).abs() <= tol)
    }
}

impl fmt::Display for SoftReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (l, v)) in self.params.labels().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}: {v}")?;
        }
        write!(f, ")")
    }
}

/// Outcome of a pointwise comparison of soft reals. The order on soft reals
/// is partial, so a dedicated third state marks the mixed case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    /// The relation holds at every parameter.
    Holds,
    /// The strict opposite relation holds at every parameter.
    Fails,
    /// The relation holds at some parameters and fails at others.
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Compares two soft reals pointwise.
///
/// `Le`/`Ge` allow `tol` slack at each point; `Eq` holds where `|x−y| ≤ tol`.
pub fn compare(rel: Relation, x: &SoftReal, y: &SoftReal, tol: f64) -> Result<TriState> {
    require_same_params(x.params(), y.params())?;
    if !(tol >= 0.0) {
        return Err(SoftError::InvalidInput(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let holds_at = |a: f64, b: f64| match rel {
        Relation::Le => a <= b + tol,
        Relation::Ge => a + tol >= b,
        Relation::Eq => (a - b).abs() <= tol,
    };
    let mut holds = 0usize;
    for (&a, &b) in x.values().iter().zip(y.values()) {
        if holds_at(a, b) {
            holds += 1;
        }
    }
    Ok(if holds == x.values().len() {
        TriState::Holds
    } else if holds == 0 {
        TriState::Fails
    } else {
        TriState::Incomparable
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps() -> Arc<ParameterSet> {
        ParameterSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn pointwise_arithmetic() {
        let ps = ps();
        let x = SoftReal::new(&ps, [2.0, 3.0]).unwrap();
        let y = SoftReal::new(&ps, [1.0, -1.0]).unwrap();
        assert_eq!(x.add(&y).unwrap().values(), &[3.0, 2.0]);

        let m = SoftReal::new(&ps, [-1.0, -1.0]).unwrap();
        assert_eq!(m.abs().values(), &[1.0, 1.0]);

        let z = SoftReal::zero(&ps);
        let w = SoftReal::new(&ps, [7.0, -4.0]).unwrap();
        assert_eq!(z.mul(&w).unwrap(), SoftReal::zero(&ps));
    }

    #[test]
    fn mismatched_parameter_sets_error() {
        let a = SoftReal::constant(&ps(), 1.0);
        let b = SoftReal::constant(&ParameterSet::new(["a", "c"]).unwrap(), 1.0);
        assert!(matches!(
            a.add(&b),
            Err(SoftError::ParameterMismatch(_))
        ));
    }

    #[test]
    fn partial_order_tristate() {
        let ps = ps();
        let le = |xs: [f64; 2], ys: [f64; 2]| {
            compare(
                Relation::Le,
                &SoftReal::new(&ps, xs).unwrap(),
                &SoftReal::new(&ps, ys).unwrap(),
                DEFAULT_TOL,
            )
            .unwrap()
        };
        assert_eq!(le([1.0, 1.0], [2.0, 2.0]), TriState::Holds);
        assert_eq!(le([1.0, 3.0], [2.0, 2.0]), TriState::Incomparable);
        assert_eq!(le([3.0, 3.0], [2.0, 2.0]), TriState::Fails);
    }

    #[test]
    fn constant_lift_equality() {
        let ps = ps();
        let x = SoftReal::new(&ps, [0.5, 0.5]).unwrap();
        let half = SoftReal::constant(&ps, 0.5);
        assert_eq!(
            compare(Relation::Eq, &x, &half, DEFAULT_TOL).unwrap(),
            TriState::Holds
        );
    }

    #[test]
    fn negative_tolerance_rejected() {
        let ps = ps();
        let x = SoftReal::zero(&ps);
        assert!(compare(Relation::Eq, &x, &x, -1.0).is_err());
    }
}
