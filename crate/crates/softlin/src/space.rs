//! Soft vector spaces and the linear algebra of soft sets and soft vectors:
//! sums and scalar products, translations, subspace criteria, linear
//! (in)dependence with per-parameter witnesses, and subspace intersection.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Result, SoftError};
use crate::linalg;
use crate::param::{require_same_params, ParameterSet};
use crate::real::DEFAULT_TOL;
use crate::sampling;
use crate::set::{SoftSet, SoftSetKind};
use crate::vector::SoftVector;

/// A soft set whose value at every parameter is a linear subspace of ℝⁿ,
/// stored as a canonical (full-column-rank) basis per parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftVectorSpace {
    params: Arc<ParameterSet>,
    dim: usize,
    bases: Vec<Vec<Vec<f64>>>,
}

impl SoftVectorSpace {
    pub fn new(
        params: &Arc<ParameterSet>,
        dim: usize,
        bases: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let set = SoftSet::subspace(params, dim, bases)?;
        Self::from_soft_set(&set)
    }

    /// The absolute soft vector space X̌ (full space at every parameter).
    pub fn absolute(params: &Arc<ParameterSet>, dim: usize) -> Self {
        Self::from_soft_set(&SoftSet::absolute(params, dim)).expect("absolute set is subspace kind")
    }

    /// The zero soft subspace.
    pub fn zero(params: &Arc<ParameterSet>, dim: usize) -> Self {
        SoftVectorSpace {
            params: Arc::clone(params),
            dim,
            bases: vec![Vec::new(); params.len()],
        }
    }

    pub fn from_soft_set(set: &SoftSet) -> Result<Self> {
        if set.kind() != SoftSetKind::Subspace {
            return Err(SoftError::Unsupported(
                "soft vector space requires a subspace-kind soft set".into(),
            ));
        }
        let bases = (0..set.params().len())
            .map(|i| set.basis_at(i).map(<[Vec<f64>]>::to_vec))
            .collect::<Result<Vec<_>>>()?;
        Ok(SoftVectorSpace {
            params: Arc::clone(set.params()),
            dim: set.dim(),
            bases,
        })
    }

    pub fn to_soft_set(&self) -> SoftSet {
        SoftSet::subspace(&self.params, self.dim, self.bases.clone())
            .expect("canonical bases stay valid")
    }

    pub fn params(&self) -> &Arc<ParameterSet> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_at(&self, index: usize) -> &[Vec<f64>] {
        &self.bases[index]
    }

    /// Dimension of the subspace at the given parameter.
    pub fn dim_at(&self, index: usize) -> usize {
        self.bases[index].len()
    }

    pub fn is_proper_everywhere(&self) -> bool {
        (0..self.params.len()).all(|i| self.dim_at(i) < self.dim)
    }

    pub fn is_zero_everywhere(&self) -> bool {
        self.bases.iter().all(Vec::is_empty)
    }

    pub fn contains(&self, x: &SoftVector, tol: f64) -> Result<bool> {
        self.to_soft_set().contains_element(x, tol)
    }

    /// Per-parameter span inclusion `other(λ) ⊆ self(λ)`.
    pub fn includes(&self, other: &SoftVectorSpace, tol: f64) -> Result<bool> {
        require_same_params(&self.params, &other.params)?;
        if self.dim != other.dim {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        Ok((0..self.params.len())
            .all(|i| linalg::span_included(&other.bases[i], &self.bases[i], self.dim, tol)))
    }
}

fn require_shared_shape(sets: &[SoftSet]) -> Result<()> {
    for pair in sets.windows(2) {
        require_same_params(pair[0].params(), pair[1].params())?;
        if pair[0].dim() != pair[1].dim() {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                pair[0].dim(),
                pair[1].dim()
            )));
        }
        if pair[0].kind() != pair[1].kind() {
            return Err(SoftError::Unsupported(
                "sum of soft sets requires a uniform representation".into(),
            ));
        }
    }
    Ok(())
}

/// Sum of soft sets: per-parameter Minkowski sums for finite kind, span of
/// concatenated bases for subspace kind. Nesting associates (the sum of sums
/// is the sum of all summands).
pub fn sum_soft_sets(sets: &[SoftSet]) -> Result<SoftSet> {
    if sets.is_empty() {
        return Err(SoftError::InvalidInput("sum of zero soft sets".into()));
    }
    require_shared_shape(sets)?;
    let params = sets[0].params();
    let dim = sets[0].dim();
    match sets[0].kind() {
        SoftSetKind::Finite => {
            let mut payload = Vec::with_capacity(params.len());
            for i in 0..params.len() {
                let mut acc: Vec<Vec<f64>> = sets[0].finite_at(i)?.to_vec();
                for s in &sets[1..] {
                    let next = s.finite_at(i)?;
                    let mut combined = Vec::with_capacity(acc.len() * next.len());
                    for a in &acc {
                        for b in next {
                            combined.push(a.iter().zip(b).map(|(&x, &y)| x + y).collect());
                        }
                    }
                    acc = combined;
                }
                payload.push(acc);
            }
            SoftSet::finite(params, dim, payload)
        }
        SoftSetKind::Subspace => {
            let mut payload = Vec::with_capacity(params.len());
            for i in 0..params.len() {
                let mut cols: Vec<Vec<f64>> = Vec::new();
                for s in sets {
                    cols.extend(s.basis_at(i)?.iter().cloned());
                }
                payload.push(cols);
            }
            SoftSet::subspace(params, dim, payload)
        }
    }
}

/// Pointwise scaling `(αF)(λ) = {αx : x ∈ F(λ)}`. Subspace spans are
/// unchanged for α ≠ 0 and collapse to the zero subspace for α = 0.
pub fn scale_soft_set(alpha: f64, f: &SoftSet) -> SoftSet {
    let params = f.params();
    let dim = f.dim();
    match f.kind() {
        SoftSetKind::Finite => {
            let payload = (0..params.len())
                .map(|i| {
                    f.finite_at(i)
                        .expect("finite kind")
                        .iter()
                        .map(|v| v.iter().map(|&x| alpha * x).collect())
                        .collect()
                })
                .collect();
            SoftSet::finite(params, dim, payload).expect("scaling preserves shape")
        }
        SoftSetKind::Subspace => {
            let payload = (0..params.len())
                .map(|i| {
                    if alpha == 0.0 {
                        Vec::new()
                    } else {
                        f.basis_at(i).expect("subspace kind").to_vec()
                    }
                })
                .collect();
            SoftSet::subspace(params, dim, payload).expect("scaling preserves shape")
        }
    }
}

/// Translation `U + F` of a finite-kind soft set by a finite set of crisp
/// vectors: the union of the single-vector translates `x + F`.
pub fn translate_soft_set(translates: &[Vec<f64>], f: &SoftSet) -> Result<SoftSet> {
    if f.kind() != SoftSetKind::Finite {
        return Err(SoftError::Unsupported(
            "translating a subspace-kind soft set yields an affine set, which this \
             representation cannot hold"
                .into(),
        ));
    }
    if translates.is_empty() {
        return Err(SoftError::InvalidInput("empty translate set".into()));
    }
    if let Some(bad) = translates.iter().find(|x| x.len() != f.dim()) {
        return Err(SoftError::DimensionMismatch(format!(
            "translate of length {} in dimension {}",
            bad.len(),
            f.dim()
        )));
    }
    let params = f.params();
    let mut payload = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let list = f.finite_at(i)?;
        let mut out = Vec::with_capacity(list.len() * translates.len());
        for x in translates {
            for y in list {
                out.push(x.iter().zip(y).map(|(&a, &b)| a + b).collect());
            }
        }
        payload.push(out);
    }
    SoftSet::finite(params, f.dim(), payload)
}

/// Translation by a single crisp vector.
pub fn translate_soft_set_by(x: &[f64], f: &SoftSet) -> Result<SoftSet> {
    translate_soft_set(std::slice::from_ref(&x.to_vec()), f)
}

/// Is every `F(λ)` a linear subspace of ℝⁿ?
///
/// Subspace-kind sets are subspaces by representation. A finite-kind set is
/// one exactly when every `F(λ)` equals `{θ}`: a finite set of reals closed
/// under arbitrary scaling can hold nothing else.
pub fn is_soft_vector_space(f: &SoftSet, tol: f64) -> bool {
    match f.kind() {
        SoftSetKind::Subspace => true,
        SoftSetKind::Finite => (0..f.params().len()).all(|i| {
            let list = f.finite_at(i).expect("finite kind");
            !list.is_empty() && list.iter().all(|v| v.iter().all(|&x| x.abs() <= tol))
        }),
    }
}

/// Soft-subspace test `G ⊑ F`: per-parameter span inclusion, plus a sampled
/// replay of the subspace criterion (`αG + βG ⊆ G` for random scalars) as a
/// redundant certificate.
pub fn is_soft_subspace(
    g: &SoftVectorSpace,
    f: &SoftVectorSpace,
    samples: u32,
    seed: u64,
) -> Result<bool> {
    if !f.includes(g, DEFAULT_TOL)? {
        return Ok(false);
    }
    let mut rng = sampling::rng_from_seed(seed);
    let n = g.dim();
    for _ in 0..samples {
        let alpha: f64 = rng.gen_range(-3.0..=3.0);
        let beta: f64 = rng.gen_range(-3.0..=3.0);
        for i in 0..g.params().len() {
            let basis = g.basis_at(i);
            if basis.is_empty() {
                continue;
            }
            let cu = sampling::uniform_vec(&mut rng, basis.len(), -2.0, 2.0);
            let cv = sampling::uniform_vec(&mut rng, basis.len(), -2.0, 2.0);
            let mut w = vec![0.0; n];
            for (j, col) in basis.iter().enumerate() {
                for (wi, &x) in w.iter_mut().zip(col) {
                    *wi += (alpha * cu[j] + beta * cv[j]) * x;
                }
            }
            let scale = w.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
            if !linalg::span_contains(basis, n, &w, DEFAULT_TOL * scale * 1e3) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the soft linear-independence test. If dependent, the witness
/// names the first failing parameter (declaration order) and coefficients
/// that annihilate the vectors there, normalized so the entry of largest
/// magnitude is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceVerdict {
    pub independent: bool,
    pub witness_parameter: Option<String>,
    pub witness_coefficients: Option<Vec<f64>>,
}

/// Per-parameter reduction of soft linear independence: the soft vectors are
/// independent exactly when their values are independent at every parameter.
pub fn is_linearly_independent(s: &[SoftVector], tol: f64) -> Result<IndependenceVerdict> {
    if s.is_empty() {
        return Err(SoftError::InvalidInput(
            "independence test needs at least one vector".into(),
        ));
    }
    for pair in s.windows(2) {
        require_same_params(pair[0].params(), pair[1].params())?;
        if pair[0].dim() != pair[1].dim() {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                pair[0].dim(),
                pair[1].dim()
            )));
        }
    }
    let params = s[0].params();
    let n = s[0].dim();
    let m = s.len();
    for i in 0..params.len() {
        let columns: Vec<Vec<f64>> = s.iter().map(|x| x.at(i).to_vec()).collect();
        if linalg::rank_of_columns(&columns, n, tol) < m {
            let raw = linalg::nullspace_vector(&columns, n, tol)
                .expect("rank deficiency implies a null vector");
            let (_, &pivot) = raw
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .expect("non-empty coefficients");
            let coeffs = raw.iter().map(|&c| c / pivot).collect();
            return Ok(IndependenceVerdict {
                independent: false,
                witness_parameter: Some(params.label(i).to_string()),
                witness_coefficients: Some(coeffs),
            });
        }
    }
    Ok(IndependenceVerdict {
        independent: true,
        witness_parameter: None,
        witness_coefficients: None,
    })
}

/// Intersection of soft vector subspaces, parameter by parameter.
pub fn intersect_spaces(spaces: &[SoftVectorSpace]) -> Result<SoftVectorSpace> {
    if spaces.is_empty() {
        return Err(SoftError::InvalidInput(
            "intersection of zero soft vector spaces".into(),
        ));
    }
    for pair in spaces.windows(2) {
        require_same_params(pair[0].params(), pair[1].params())?;
        if pair[0].dim() != pair[1].dim() {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                pair[0].dim(),
                pair[1].dim()
            )));
        }
    }
    let params = spaces[0].params();
    let dim = spaces[0].dim();
    let mut bases: Vec<Vec<Vec<f64>>> = (0..params.len())
        .map(|i| spaces[0].basis_at(i).to_vec())
        .collect();
    for s in &spaces[1..] {
        for (i, basis) in bases.iter_mut().enumerate() {
            *basis = linalg::intersect_spans(basis, s.basis_at(i), dim, DEFAULT_TOL);
        }
    }
    SoftVectorSpace::new(params, dim, bases)
}
