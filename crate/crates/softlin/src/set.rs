//! Soft sets over ℝⁿ: parametrized families of subsets, in a finite
//! (explicit vector list per parameter) or subspace (basis per parameter)
//! representation, with union / intersection / difference / complement and
//! the inclusion relations.

use std::sync::Arc;

use crate::error::{Result, SoftError};
use crate::linalg;
use crate::param::{require_same_params, ParameterSet};
use crate::real::DEFAULT_TOL;
use crate::vector::SoftVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoftSetKind {
    Finite,
    Subspace,
}

#[derive(Debug, Clone, PartialEq)]
enum Payload {
    /// Explicit vectors per parameter, deduplicated within tolerance.
    Finite(Vec<Vec<Vec<f64>>>),
    /// Basis vectors (linearly independent within tolerance) per parameter.
    Subspace(Vec<Vec<Vec<f64>>>),
}

/// Result of comparing two soft sets under soft inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetRelation {
    Subset,
    Superset,
    Equal,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoftSet {
    params: Arc<ParameterSet>,
    dim: usize,
    payload: Payload,
}

fn euclid_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn list_has(list: &[Vec<f64>], v: &[f64], tol: f64) -> bool {
    list.iter().any(|u| euclid_dist(u, v) <= tol)
}

fn dedup_vectors(list: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(list.len());
    for v in list {
        if !list_has(&out, &v, tol) {
            out.push(v);
        }
    }
    out
}

impl SoftSet {
    /// Finite-kind soft set; per-parameter vector lists are deduplicated
    /// within the default tolerance.
    pub fn finite(
        params: &Arc<ParameterSet>,
        dim: usize,
        per_label: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        Self::finite_with_tol(params, dim, per_label, DEFAULT_TOL)
    }

    pub fn finite_with_tol(
        params: &Arc<ParameterSet>,
        dim: usize,
        per_label: Vec<Vec<Vec<f64>>>,
        tol: f64,
    ) -> Result<Self> {
        if per_label.len() != params.len() {
            return Err(SoftError::InvalidInput(format!(
                "expected {} payload entries, got {}",
                params.len(),
                per_label.len()
            )));
        }
        for (i, list) in per_label.iter().enumerate() {
            if let Some(bad) = list.iter().find(|v| v.len() != dim) {
                return Err(SoftError::DimensionMismatch(format!(
                    "vector of length {} at parameter {:?} in a dimension-{dim} soft set",
                    bad.len(),
                    params.label(i)
                )));
            }
        }
        let payload = per_label
            .into_iter()
            .map(|list| dedup_vectors(list, tol))
            .collect();
        Ok(SoftSet {
            params: Arc::clone(params),
            dim,
            payload: Payload::Finite(payload),
        })
    }

    /// Subspace-kind soft set; each per-parameter column list is
    /// canonicalized to a pivoted, full-column-rank basis (zero columns drop).
    pub fn subspace(
        params: &Arc<ParameterSet>,
        dim: usize,
        per_label: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        Self::subspace_with_tol(params, dim, per_label, DEFAULT_TOL)
    }

    pub fn subspace_with_tol(
        params: &Arc<ParameterSet>,
        dim: usize,
        per_label: Vec<Vec<Vec<f64>>>,
        tol: f64,
    ) -> Result<Self> {
        if per_label.len() != params.len() {
            return Err(SoftError::InvalidInput(format!(
                "expected {} payload entries, got {}",
                params.len(),
                per_label.len()
            )));
        }
        for (i, cols) in per_label.iter().enumerate() {
            if let Some(bad) = cols.iter().find(|v| v.len() != dim) {
                return Err(SoftError::DimensionMismatch(format!(
                    "basis vector of length {} at parameter {:?} in dimension {dim}",
                    bad.len(),
                    params.label(i)
                )));
            }
        }
        let payload = per_label
            .into_iter()
            .map(|cols| linalg::canonical_basis(&cols, dim, tol))
            .collect();
        Ok(SoftSet {
            params: Arc::clone(params),
            dim,
            payload: Payload::Subspace(payload),
        })
    }

    /// The absolute soft set X̌: the full space at every parameter.
    pub fn absolute(params: &Arc<ParameterSet>, dim: usize) -> Self {
        let identity: Vec<Vec<f64>> = (0..dim)
            .map(|i| {
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                v
            })
            .collect();
        SoftSet {
            params: Arc::clone(params),
            dim,
            payload: Payload::Subspace(vec![identity; params.len()]),
        }
    }

    /// The null soft set Φ: empty at every parameter (finite kind).
    pub fn null(params: &Arc<ParameterSet>, dim: usize) -> Self {
        SoftSet {
            params: Arc::clone(params),
            dim,
            payload: Payload::Finite(vec![Vec::new(); params.len()]),
        }
    }

    pub fn params(&self) -> &Arc<ParameterSet> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SoftSetKind {
        match self.payload {
            Payload::Finite(_) => SoftSetKind::Finite,
            Payload::Subspace(_) => SoftSetKind::Subspace,
        }
    }

    pub fn is_finite_kind(&self) -> bool {
        self.kind() == SoftSetKind::Finite
    }

    /// Vector list at the given parameter index (finite kind only).
    pub fn finite_at(&self, index: usize) -> Result<&[Vec<f64>]> {
        match &self.payload {
            Payload::Finite(lists) => Ok(&lists[index]),
            Payload::Subspace(_) => Err(SoftError::Unsupported(
                "finite payload requested from a subspace-kind soft set".into(),
            )),
        }
    }

    /// Basis at the given parameter index (subspace kind only).
    pub fn basis_at(&self, index: usize) -> Result<&[Vec<f64>]> {
        match &self.payload {
            Payload::Subspace(bases) => Ok(&bases[index]),
            Payload::Finite(_) => Err(SoftError::Unsupported(
                "basis requested from a finite-kind soft set".into(),
            )),
        }
    }

    fn finite_payload(&self, context: &str) -> Result<&Vec<Vec<Vec<f64>>>> {
        match &self.payload {
            Payload::Finite(lists) => Ok(lists),
            Payload::Subspace(_) => Err(SoftError::Unsupported(format!(
                "{context} is only defined for finite-kind soft sets"
            ))),
        }
    }

    fn require_same_dim(&self, other: &SoftSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Union over the united parameter sets: `F(e)` off `B`, `G(e)` off `A`,
    /// `F(e) ∪ G(e)` on the overlap.
    pub fn union(&self, other: &SoftSet) -> Result<SoftSet> {
        self.require_same_dim(other)?;
        let f = self.finite_payload("union")?;
        let g = other.finite_payload("union")?;
        let mut labels: Vec<String> = self.params.labels().map(String::from).collect();
        for l in other.params.labels() {
            if !self.params.contains(l) {
                labels.push(l.to_string());
            }
        }
        let union_params = ParameterSet::new(labels)?;
        let mut payload = Vec::with_capacity(union_params.len());
        for l in union_params.labels() {
            let fa = self.params.index_of(l).map(|i| &f[i]);
            let gb = other.params.index_of(l).map(|i| &g[i]);
            let list = match (fa, gb) {
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (Some(a), Some(b)) => {
                    let mut merged = a.clone();
                    merged.extend(b.iter().cloned());
                    dedup_vectors(merged, DEFAULT_TOL)
                }
                (None, None) => unreachable!("label drawn from the union"),
            };
            payload.push(list);
        }
        Ok(SoftSet {
            params: union_params,
            dim: self.dim,
            payload: Payload::Finite(payload),
        })
    }

    /// Bi-intersection: the result is indexed by the common labels and holds
    /// `F(e) ∩ G(e)` there. Disjoint parameter sets are rejected (the result
    /// would have an empty index).
    pub fn intersection(&self, other: &SoftSet) -> Result<SoftSet> {
        self.require_same_dim(other)?;
        let f = self.finite_payload("intersection")?;
        let g = other.finite_payload("intersection")?;
        let labels: Vec<&str> = self
            .params
            .labels()
            .filter(|l| other.params.contains(l))
            .collect();
        if labels.is_empty() {
            return Err(SoftError::InvalidInput(
                "intersection of soft sets with disjoint parameter sets".into(),
            ));
        }
        let common = ParameterSet::new(labels)?;
        let mut payload = Vec::with_capacity(common.len());
        for l in common.labels() {
            let a = &f[self.params.index_of(l).unwrap()];
            let b = &g[other.params.index_of(l).unwrap()];
            payload.push(
                a.iter()
                    .filter(|v| list_has(b, v, DEFAULT_TOL))
                    .cloned()
                    .collect(),
            );
        }
        Ok(SoftSet {
            params: common,
            dim: self.dim,
            payload: Payload::Finite(payload),
        })
    }

    /// Pointwise difference `F(e) \ G(e)`; both sets must share one
    /// parameter set.
    pub fn difference(&self, other: &SoftSet) -> Result<SoftSet> {
        require_same_params(&self.params, &other.params)?;
        self.require_same_dim(other)?;
        let f = self.finite_payload("difference")?;
        let g = other.finite_payload("difference")?;
        let payload = f
            .iter()
            .zip(g)
            .map(|(a, b)| {
                a.iter()
                    .filter(|v| !list_has(b, v, DEFAULT_TOL))
                    .cloned()
                    .collect()
            })
            .collect();
        Ok(SoftSet {
            params: Arc::clone(&self.params),
            dim: self.dim,
            payload: Payload::Finite(payload),
        })
    }

    /// Relative complement `universe(e) − F(e)`; requires `F ⊆ universe`.
    pub fn complement(&self, universe: &SoftSet) -> Result<SoftSet> {
        require_same_params(&self.params, &universe.params)?;
        self.require_same_dim(universe)?;
        let f = self.finite_payload("complement")?;
        let u = universe.finite_payload("complement")?;
        for (i, (a, full)) in f.iter().zip(u).enumerate() {
            if let Some(v) = a.iter().find(|v| !list_has(full, v, DEFAULT_TOL)) {
                return Err(SoftError::InvalidInput(format!(
                    "complement: vector {v:?} at parameter {:?} is not in the universe",
                    self.params.label(i)
                )));
            }
        }
        universe.difference(self)
    }

    fn included_in(&self, other: &SoftSet, tol: f64) -> Result<bool> {
        if !self.params.is_label_subset_of(&other.params) {
            return Ok(false);
        }
        for (i, l) in self.params.labels().enumerate() {
            let j = other.params.index_of(l).unwrap();
            let ok = match (&self.payload, &other.payload) {
                (Payload::Finite(f), Payload::Finite(g)) => {
                    f[i].iter().all(|v| list_has(&g[j], v, tol))
                }
                (Payload::Subspace(f), Payload::Subspace(g)) => {
                    linalg::span_included(&f[i], &g[j], self.dim, tol)
                }
                _ => {
                    return Err(SoftError::Unsupported(
                        "cannot relate soft sets of different kinds".into(),
                    ))
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Soft inclusion both ways: `Subset`, `Superset`, `Equal` (mutual
    /// inclusion) or `None`. Kinds must match.
    pub fn relate(&self, other: &SoftSet, tol: f64) -> Result<SetRelation> {
        self.require_same_dim(other)?;
        let sub = self.included_in(other, tol)?;
        let sup = other.included_in(self, tol)?;
        Ok(match (sub, sup) {
            (true, true) => SetRelation::Equal,
            (true, false) => SetRelation::Subset,
            (false, true) => SetRelation::Superset,
            (false, false) => SetRelation::None,
        })
    }

    /// Soft-element membership: `x(λ) ∈ F(λ)` at every parameter.
    pub fn contains_element(&self, x: &SoftVector, tol: f64) -> Result<bool> {
        require_same_params(&self.params, x.params())?;
        if self.dim != x.dim() {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                self.dim,
                x.dim()
            )));
        }
        for i in 0..self.params.len() {
            let ok = match &self.payload {
                Payload::Finite(lists) => list_has(&lists[i], x.at(i), tol),
                Payload::Subspace(bases) => linalg::span_contains(&bases[i], self.dim, x.at(i), tol),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps1() -> Arc<ParameterSet> {
        ParameterSet::new(["l"]).unwrap()
    }

    fn v(x: f64, y: f64) -> Vec<f64> {
        vec![x, y]
    }

    #[test]
    fn union_over_disjoint_parameters() {
        let a = ParameterSet::new(["e1"]).unwrap();
        let b = ParameterSet::new(["e2"]).unwrap();
        let f = SoftSet::finite(&a, 2, vec![vec![v(1.0, 0.0)]]).unwrap();
        let g = SoftSet::finite(&b, 2, vec![vec![v(0.0, 1.0)]]).unwrap();
        let h = f.union(&g).unwrap();
        assert_eq!(h.params().len(), 2);
        assert_eq!(h.finite_at(0).unwrap(), &[v(1.0, 0.0)]);
        assert_eq!(h.finite_at(1).unwrap(), &[v(0.0, 1.0)]);
    }

    #[test]
    fn intersection_and_difference_pointwise() {
        let ps = ps1();
        let f = SoftSet::finite(&ps, 2, vec![vec![v(1.0, 0.0), v(0.0, 1.0)]]).unwrap();
        let g = SoftSet::finite(&ps, 2, vec![vec![v(0.0, 1.0)]]).unwrap();
        let inter = f.intersection(&g).unwrap();
        assert_eq!(inter.finite_at(0).unwrap(), &[v(0.0, 1.0)]);
        let diff = f.difference(&g).unwrap();
        assert_eq!(diff.finite_at(0).unwrap(), &[v(1.0, 0.0)]);
    }

    #[test]
    fn complement_against_universe() {
        let ps = ps1();
        let u = SoftSet::finite(
            &ps,
            2,
            vec![vec![v(1.0, 0.0), v(0.0, 1.0), v(1.0, 1.0)]],
        )
        .unwrap();
        let f = SoftSet::finite(&ps, 2, vec![vec![v(1.0, 0.0)]]).unwrap();
        let c = f.complement(&u).unwrap();
        assert_eq!(c.finite_at(0).unwrap(), &[v(0.0, 1.0), v(1.0, 1.0)]);

        // F = universe → Φ
        let all = u.complement(&u).unwrap();
        assert!(all.finite_at(0).unwrap().is_empty());

        // F = Φ → universe
        let phi = SoftSet::null(&ps, 2);
        let back = phi.complement(&u).unwrap();
        assert_eq!(back.relate(&u, DEFAULT_TOL).unwrap(), SetRelation::Equal);

        // non-subset rejected
        let stray = SoftSet::finite(&ps, 2, vec![vec![v(5.0, 5.0)]]).unwrap();
        assert!(stray.complement(&u).is_err());
    }

    #[test]
    fn relate_finite_and_subspace() {
        let ps = ps1();
        let f = SoftSet::finite(&ps, 2, vec![vec![v(1.0, 0.0)]]).unwrap();
        let g = SoftSet::finite(&ps, 2, vec![vec![v(1.0, 0.0), v(0.0, 1.0)]]).unwrap();
        assert_eq!(f.relate(&g, DEFAULT_TOL).unwrap(), SetRelation::Subset);
        assert_eq!(g.relate(&f, DEFAULT_TOL).unwrap(), SetRelation::Superset);
        assert_eq!(f.relate(&f, DEFAULT_TOL).unwrap(), SetRelation::Equal);

        let s1 = SoftSet::subspace(&ps, 2, vec![vec![v(1.0, 0.0)]]).unwrap();
        let s2 = SoftSet::subspace(&ps, 2, vec![vec![v(1.0, 0.0), v(0.0, 1.0)]]).unwrap();
        assert_eq!(s1.relate(&s2, DEFAULT_TOL).unwrap(), SetRelation::Subset);
        assert!(f.relate(&s1, DEFAULT_TOL).is_err(), "mixed kinds");
    }

    #[test]
    fn membership_in_coordinate_zero_subspace() {
        // G = span{e2,e3} in R^3: vectors with first coordinate 0
        let ps = ps1();
        let g = SoftSet::subspace(
            &ps,
            3,
            vec![vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]],
        )
        .unwrap();
        let inside = SoftVector::constant(&ps, [0.0, 1.0, 1.0]).unwrap();
        let outside = SoftVector::constant(&ps, [1.0, 0.0, 0.0]).unwrap();
        assert!(g.contains_element(&inside, DEFAULT_TOL).unwrap());
        assert!(!g.contains_element(&outside, DEFAULT_TOL).unwrap());

        let phi = SoftSet::null(&ps, 3);
        assert!(!phi.contains_element(&inside, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn union_of_subspaces_is_rejected() {
        let ps = ps1();
        let s = SoftSet::subspace(&ps, 2, vec![vec![v(1.0, 0.0)]]).unwrap();
        assert!(matches!(s.union(&s), Err(SoftError::Unsupported(_))));
    }
}
