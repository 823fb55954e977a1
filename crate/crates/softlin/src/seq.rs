//! Sequences of soft elements: windowed convergence and Cauchy checks,
//! per-parameter limit construction, limit algebra, and boundedness.
//!
//! All verdicts are empirical over a finite window `[⌈3N/4⌉, N]` at an
//! explicit tolerance — a semi-decision, never a proof. Windows are evaluated
//! on a deterministic subsample (at most [`WINDOW_MAX_POINTS`] base indices,
//! evenly spaced, always including both window ends, plus each base index's
//! successor so oscillating sequences are caught).

use std::sync::Arc;

use crate::error::{Result, SoftError};
use crate::norm::NormFamily;
use crate::param::{require_same_params, ParameterSet};
use crate::real::{SoftReal, SoftScalar};
use crate::set::{SoftSet, SoftSetKind};
use crate::space::SoftVectorSpace;
use crate::vector::SoftVector;

/// Base points per evaluated window.
pub const WINDOW_MAX_POINTS: u64 = 128;

/// A closed-form or tabulated sequence of soft scalars.
#[derive(Debug, Clone)]
pub enum ScalarSequence {
    Tabulated(Vec<SoftReal>),
    Constant(SoftReal),
    /// `r_n = base + slope / n`
    AffineInvN { base: SoftReal, slope: SoftReal },
    /// `r_n = base + (−1)ⁿ · amplitude`
    Alternating { base: SoftReal, amplitude: SoftReal },
}

impl ScalarSequence {
    pub fn params(&self) -> &Arc<ParameterSet> {
        match self {
            ScalarSequence::Tabulated(terms) => terms[0].params(),
            ScalarSequence::Constant(r) => r.params(),
            ScalarSequence::AffineInvN { base, .. } => base.params(),
            ScalarSequence::Alternating { base, .. } => base.params(),
        }
    }

    pub fn term(&self, n: u64) -> Result<SoftScalar> {
        if n == 0 {
            return Err(SoftError::InvalidInput("sequence indices start at 1".into()));
        }
        match self {
            ScalarSequence::Tabulated(terms) => terms
                .get((n - 1) as usize)
                .cloned()
                .ok_or(SoftError::IndexOutOfRange {
                    index: n,
                    len: terms.len(),
                }),
            ScalarSequence::Constant(r) => Ok(r.clone()),
            ScalarSequence::AffineInvN { base, slope } => {
                base.add(&slope.scale(1.0 / n as f64))
            }
            ScalarSequence::Alternating { base, amplitude } => {
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                base.add(&amplitude.scale(sign))
            }
        }
    }
}

/// A sequence of soft vectors: tabulated terms or a closed-form rule, with
/// lazy sums and scalar products.
#[derive(Debug, Clone)]
pub enum SequenceSource {
    Tabulated(Vec<SoftVector>),
    Constant(SoftVector),
    /// `x_n = base + (1/n) · slope`
    AffineInvN { base: SoftVector, slope: SoftVector },
    /// `x_n = base + (−1)ⁿ · amplitude`
    Alternating {
        base: SoftVector,
        amplitude: SoftVector,
    },
    Sum(Box<SequenceSource>, Box<SequenceSource>),
    Scaled(ScalarSequence, Box<SequenceSource>),
}

impl SequenceSource {
    pub fn tabulated(terms: Vec<SoftVector>) -> Result<Self> {
        if terms.is_empty() {
            return Err(SoftError::InvalidInput("tabulated sequence is empty".into()));
        }
        for pair in terms.windows(2) {
            require_same_params(pair[0].params(), pair[1].params())?;
            if pair[0].dim() != pair[1].dim() {
                return Err(SoftError::DimensionMismatch(format!(
                    "{} vs {}",
                    pair[0].dim(),
                    pair[1].dim()
                )));
            }
        }
        Ok(SequenceSource::Tabulated(terms))
    }

    pub fn params(&self) -> &Arc<ParameterSet> {
        match self {
            SequenceSource::Tabulated(terms) => terms[0].params(),
            SequenceSource::Constant(x) => x.params(),
            SequenceSource::AffineInvN { base, .. } => base.params(),
            SequenceSource::Alternating { base, .. } => base.params(),
            SequenceSource::Sum(a, _) => a.params(),
            SequenceSource::Scaled(_, s) => s.params(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SequenceSource::Tabulated(terms) => terms[0].dim(),
            SequenceSource::Constant(x) => x.dim(),
            SequenceSource::AffineInvN { base, .. } => base.dim(),
            SequenceSource::Alternating { base, .. } => base.dim(),
            SequenceSource::Sum(a, _) => a.dim(),
            SequenceSource::Scaled(_, s) => s.dim(),
        }
    }

    /// n-th term, n ≥ 1. Pure in n.
    pub fn term(&self, n: u64) -> Result<SoftVector> {
        if n == 0 {
            return Err(SoftError::InvalidInput("sequence indices start at 1".into()));
        }
        match self {
            SequenceSource::Tabulated(terms) => terms
                .get((n - 1) as usize)
                .cloned()
                .ok_or(SoftError::IndexOutOfRange {
                    index: n,
                    len: terms.len(),
                }),
            SequenceSource::Constant(x) => Ok(x.clone()),
            SequenceSource::AffineInvN { base, slope } => {
                base.add(&slope.scale(1.0 / n as f64))
            }
            SequenceSource::Alternating { base, amplitude } => {
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                base.add(&amplitude.scale(sign))
            }
            SequenceSource::Sum(a, b) => a.term(n)?.add(&b.term(n)?),
            SequenceSource::Scaled(k, s) => s.term(n)?.scale_soft(&k.term(n)?),
        }
    }
}

/// Lazy pointwise-in-n sum of two sequences.
pub fn combine_add(s1: &SequenceSource, s2: &SequenceSource) -> Result<SequenceSource> {
    require_same_params(s1.params(), s2.params())?;
    if s1.dim() != s2.dim() {
        return Err(SoftError::DimensionMismatch(format!(
            "{} vs {}",
            s1.dim(),
            s2.dim()
        )));
    }
    Ok(SequenceSource::Sum(
        Box::new(s1.clone()),
        Box::new(s2.clone()),
    ))
}

/// Lazy pointwise-in-n product with a soft-scalar sequence.
pub fn combine_scale(k: &ScalarSequence, s: &SequenceSource) -> Result<SequenceSource> {
    require_same_params(k.params(), s.params())?;
    Ok(SequenceSource::Scaled(k.clone(), Box::new(s.clone())))
}

/// Evenly spaced base indices of `[lo, hi]` (≤ `WINDOW_MAX_POINTS`), each
/// followed by its successor when it fits. Sorted, deduplicated, includes
/// both ends.
fn window_indices(lo: u64, hi: u64) -> Vec<u64> {
    debug_assert!(lo <= hi);
    let span = hi - lo;
    let count = WINDOW_MAX_POINTS.min(span + 1);
    let mut out = Vec::new();
    for k in 0..count {
        let base = if count == 1 {
            lo
        } else {
            lo + (span * k) / (count - 1)
        };
        out.push(base);
        if base < hi {
            out.push(base + 1);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn final_quarter(n: u64) -> (u64, u64) {
    let lo = (3 * n).div_ceil(4).max(1);
    (lo, n)
}

/// Status of a windowed convergence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceStatus {
    /// Every window term is within `tol` of the limit at every parameter.
    Converged,
    /// The window is Cauchy at `tol` but the supplied candidate is not its
    /// limit.
    CauchyOnly,
    /// The window neither settles nor shows shrinking successive
    /// differences.
    DivergentWindow,
    /// Successive differences still shrink across the window; the window is
    /// too short to decide at this tolerance.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct ConvergenceVerdict {
    pub status: ConvergenceStatus,
    /// Present exactly when `status == Converged`.
    pub limit: Option<SoftVector>,
    /// Pointwise maximum over the window of `‖x_n − target‖`.
    pub last_residual: SoftReal,
}

struct WindowData {
    terms: Vec<(u64, SoftVector)>,
}

impl WindowData {
    fn collect(seq: &SequenceSource, lo: u64, hi: u64) -> Result<Self> {
        let terms = window_indices(lo, hi)
            .into_iter()
            .map(|i| seq.term(i).map(|t| (i, t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WindowData { terms })
    }

    fn last(&self) -> &SoftVector {
        &self.terms.last().expect("window non-empty").1
    }

    /// Pointwise (per-parameter) diameter under the family norm.
    fn diameter(&self, fam: &NormFamily) -> Result<SoftReal> {
        let mut d = SoftReal::zero(fam.params());
        for (i, (_, x)) in self.terms.iter().enumerate() {
            for (_, y) in &self.terms[i + 1..] {
                d = d.max_with(&fam.metric(x, y)?)?;
            }
        }
        Ok(d)
    }

    /// Largest norm of successive differences at the first and last sampled
    /// adjacent pair, for the divergence/inconclusive split.
    fn successive_trend(&self, fam: &NormFamily) -> Result<Option<(f64, f64)>> {
        let mut first = None;
        let mut last = None;
        for pair in self.terms.windows(2) {
            if pair[1].0 == pair[0].0 + 1 {
                let d = fam.metric(&pair[0].1, &pair[1].1)?.max_value();
                if first.is_none() {
                    first = Some(d);
                }
                last = Some(d);
            }
        }
        Ok(first.zip(last))
    }

    fn max_residual(&self, fam: &NormFamily, target: &SoftVector) -> Result<SoftReal> {
        let mut r = SoftReal::zero(fam.params());
        for (_, x) in &self.terms {
            r = r.max_with(&fam.metric(x, target)?)?;
        }
        Ok(r)
    }
}

/// Windowed convergence check over the final quarter `[⌈3N/4⌉, N]`.
///
/// With a candidate, tests `‖x_n − candidate‖(λ) < tol` across the window;
/// without one, the limit estimate is the last window term.
pub fn check_convergence(
    fam: &NormFamily,
    seq: &SequenceSource,
    candidate: Option<&SoftVector>,
    n: u64,
    tol: f64,
) -> Result<ConvergenceVerdict> {
    if n < 2 {
        return Err(SoftError::InvalidInput("window end must be >= 2".into()));
    }
    require_same_params(fam.params(), seq.params())?;
    let (lo, hi) = final_quarter(n);
    let window = WindowData::collect(seq, lo, hi)?;
    let target = match candidate {
        Some(c) => c.clone(),
        None => window.last().clone(),
    };
    let residual = window.max_residual(fam, &target)?;
    if residual.values().iter().all(|&r| r < tol) {
        return Ok(ConvergenceVerdict {
            status: ConvergenceStatus::Converged,
            limit: Some(target),
            last_residual: residual,
        });
    }
    let diameter = window.diameter(fam)?;
    if diameter.values().iter().all(|&d| d < tol) {
        return Ok(ConvergenceVerdict {
            status: ConvergenceStatus::CauchyOnly,
            limit: None,
            last_residual: residual,
        });
    }
    let status = match window.successive_trend(fam)? {
        Some((first, last)) if last <= 0.9 * first => ConvergenceStatus::Inconclusive,
        _ => ConvergenceStatus::DivergentWindow,
    };
    Ok(ConvergenceVerdict {
        status,
        limit: None,
        last_residual: residual,
    })
}

/// Cauchy and boundedness report for the window `[1, N]`.
#[derive(Debug, Clone)]
pub struct CauchyReport {
    /// Window diameter over the final quarter below `tol` at every parameter.
    pub cauchy: bool,
    /// Always true on a finite window; see `growth_flagged`.
    pub bounded: bool,
    /// Pointwise max of `‖x_i − x_j‖` over the sampled pairs of `[1, N]`.
    pub bound: SoftReal,
    /// Set when the full-range bound exceeds 1.25 × the first-half bound at
    /// some parameter — the window-local signature of an unbounded sequence.
    pub growth_flagged: bool,
}

pub fn check_cauchy_bounded(
    fam: &NormFamily,
    seq: &SequenceSource,
    n: u64,
    tol: f64,
) -> Result<CauchyReport> {
    if n < 2 {
        return Err(SoftError::InvalidInput("window end must be >= 2".into()));
    }
    require_same_params(fam.params(), seq.params())?;
    let (lo, hi) = final_quarter(n);
    let cauchy = WindowData::collect(seq, lo, hi)?
        .diameter(fam)?
        .values()
        .iter()
        .all(|&d| d < tol);
    let bound = WindowData::collect(seq, 1, n)?.diameter(fam)?;
    let half_bound = WindowData::collect(seq, 1, (n / 2).max(1))?.diameter(fam)?;
    let growth_flagged = bound
        .values()
        .iter()
        .zip(half_bound.values())
        .any(|(&full, &half)| full > 1.25 * half + 1e-12);
    Ok(CauchyReport {
        cauchy,
        bounded: true,
        bound,
        growth_flagged,
    })
}

/// Per-parameter limit estimate: the last iterate `x_N`, accepted only when
/// the final-quarter window is Cauchy at `tol` (so `‖x_n − x̃‖(λ) < tol`
/// across the window).
pub fn construct_limit(
    fam: &NormFamily,
    seq: &SequenceSource,
    n: u64,
    tol: f64,
) -> Result<SoftVector> {
    if n < 2 {
        return Err(SoftError::InvalidInput("window end must be >= 2".into()));
    }
    require_same_params(fam.params(), seq.params())?;
    let (lo, hi) = final_quarter(n);
    let window = WindowData::collect(seq, lo, hi)?;
    let diameter = window.diameter(fam)?;
    if let Some((i, &d)) = diameter
        .values()
        .iter()
        .enumerate()
        .find(|(_, &d)| d >= tol)
    {
        return Err(SoftError::Precondition(format!(
            "window [{lo}, {hi}] is not Cauchy at tol {tol}: diameter {d} at parameter {:?}",
            fam.params().label(i)
        )));
    }
    Ok(window.last().clone())
}

/// Boundedness of a soft set under a norm family.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub bounded: bool,
    /// A witness `k̃` with `‖x̃‖ ⩽̃ k̃` for all members, when bounded.
    pub k: Option<SoftReal>,
}

pub fn is_bounded_soft_set(f: &SoftSet, fam: &NormFamily) -> Result<BoundReport> {
    require_same_params(f.params(), fam.params())?;
    if f.dim() != fam.dim() {
        return Err(SoftError::DimensionMismatch(format!(
            "{} vs {}",
            f.dim(),
            fam.dim()
        )));
    }
    match f.kind() {
        SoftSetKind::Finite => {
            let k = SoftReal::from_fn(f.params(), |i, _| {
                f.finite_at(i)
                    .expect("finite kind")
                    .iter()
                    .map(|v| fam.eval_at(i, v))
                    .fold(0.0, f64::max)
            });
            Ok(BoundReport {
                bounded: true,
                k: Some(k),
            })
        }
        SoftSetKind::Subspace => {
            let zero = (0..f.params().len()).all(|i| {
                f.basis_at(i).map(<[Vec<f64>]>::is_empty).unwrap_or(false)
            });
            Ok(BoundReport {
                bounded: zero,
                k: zero.then(|| SoftReal::zero(f.params())),
            })
        }
    }
}

/// Closure of a soft subspace. Finite-dimensional subspaces of ℝⁿ are
/// closed, so this is the identity; the closure theorem is exercised by the
/// limit-membership property tests instead.
pub fn subspace_closure(m: &SoftVectorSpace) -> SoftVectorSpace {
    m.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::NormDescriptor;
    use crate::real::DEFAULT_TOL;

    fn ps() -> Arc<ParameterSet> {
        ParameterSet::new(["a", "b"]).unwrap()
    }

    fn fam1d() -> NormFamily {
        NormFamily::uniform(&ps(), 1, NormDescriptor::P1).unwrap()
    }

    fn inv_n() -> SequenceSource {
        SequenceSource::AffineInvN {
            base: SoftVector::null(&ps(), 1),
            slope: SoftVector::constant(&ps(), [1.0]).unwrap(),
        }
    }

    #[test]
    fn inv_n_converges_to_zero() {
        let fam = fam1d();
        let candidate = SoftVector::null(&ps(), 1);
        let v = check_convergence(&fam, &inv_n(), Some(&candidate), 10_000, 1e-3).unwrap();
        assert_eq!(v.status, ConvergenceStatus::Converged);
        assert!(v.limit.is_some());
    }

    #[test]
    fn constant_half_converges_with_zero_residual() {
        let fam = fam1d();
        let half = SoftVector::constant(&ps(), [0.5]).unwrap();
        let seq = SequenceSource::Constant(half.clone());
        let v = check_convergence(&fam, &seq, Some(&half), 100, 1e-9).unwrap();
        assert_eq!(v.status, ConvergenceStatus::Converged);
        assert_eq!(v.last_residual, SoftReal::zero(&ps()));
    }

    #[test]
    fn alternating_is_divergent_on_window() {
        let fam = fam1d();
        let seq = SequenceSource::Alternating {
            base: SoftVector::null(&ps(), 1),
            amplitude: SoftVector::constant(&ps(), [1.0]).unwrap(),
        };
        let candidate = SoftVector::null(&ps(), 1);
        let v = check_convergence(&fam, &seq, Some(&candidate), 1000, 1e-3).unwrap();
        assert_eq!(v.status, ConvergenceStatus::DivergentWindow);
    }

    #[test]
    fn slow_sequence_is_inconclusive_at_tight_tol() {
        let fam = fam1d();
        let candidate = SoftVector::constant(&ps(), [1.0]).unwrap(); // wrong limit
        let v = check_convergence(&fam, &inv_n(), Some(&candidate), 100, 1e-9).unwrap();
        assert_eq!(v.status, ConvergenceStatus::Inconclusive);
    }

    #[test]
    fn cauchy_and_bounds() {
        let fam = fam1d();
        let r = check_cauchy_bounded(&fam, &inv_n(), 10_000, 1e-3).unwrap();
        assert!(r.cauchy && r.bounded && !r.growth_flagged);
        assert!(r.bound.values().iter().all(|&b| b <= 1.0 + 1e-12));

        let alt = SequenceSource::Alternating {
            base: SoftVector::null(&ps(), 1),
            amplitude: SoftVector::constant(&ps(), [1.0]).unwrap(),
        };
        let r = check_cauchy_bounded(&fam, &alt, 1000, 1e-3).unwrap();
        assert!(!r.cauchy && !r.growth_flagged);
        assert!(r.bound.values().iter().all(|&b| (b - 2.0).abs() < 1e-12));

        // x_n = n grows through the window
        let grow = SequenceSource::Tabulated(
            (1..=64)
                .map(|n| SoftVector::constant(&ps(), [n as f64]).unwrap())
                .collect(),
        );
        let r = check_cauchy_bounded(&fam, &grow, 64, 1e-3).unwrap();
        assert!(!r.cauchy && r.growth_flagged);
    }

    #[test]
    fn construct_limit_accepts_cauchy_and_refuses_oscillation() {
        let fam = fam1d();
        let x = construct_limit(&fam, &inv_n(), 1_000_000, 1e-3).unwrap();
        assert!(x.at(0)[0].abs() <= 1e-6);

        // constant sequences reproduce the constant exactly
        let half = SoftVector::constant(&ps(), [0.5]).unwrap();
        let constant = SequenceSource::Constant(half.clone());
        assert_eq!(construct_limit(&fam, &constant, 100, 1e-9).unwrap(), half);

        let alt = SequenceSource::Alternating {
            base: SoftVector::null(&ps(), 1),
            amplitude: SoftVector::constant(&ps(), [1.0]).unwrap(),
        };
        assert!(matches!(
            construct_limit(&fam, &alt, 1000, 1e-3),
            Err(SoftError::Precondition(_))
        ));
    }

    #[test]
    fn tabulated_too_short_errors() {
        let fam = fam1d();
        let seq = SequenceSource::Tabulated(vec![SoftVector::null(&ps(), 1); 5]);
        assert!(matches!(
            check_convergence(&fam, &seq, None, 10, 1e-3),
            Err(SoftError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn combined_limits_add_and_scale() {
        let fam = fam1d();
        let half = SequenceSource::Constant(SoftVector::constant(&ps(), [0.5]).unwrap());
        let sum = combine_add(&inv_n(), &half).unwrap();
        // Cauchy + Cauchy stays Cauchy on the window
        assert!(check_cauchy_bounded(&fam, &sum, 1_000_000, 1e-3).unwrap().cauchy);
        let lim = construct_limit(&fam, &sum, 1_000_000, 1e-3).unwrap();
        assert!((lim.at(0)[0] - 0.5).abs() < 1e-5);

        // (2 + 1/n) · (1 + 1/n)·e1 → 2·e1
        let scalar = ScalarSequence::AffineInvN {
            base: SoftReal::constant(&ps(), 2.0),
            slope: SoftReal::constant(&ps(), 1.0),
        };
        let vec_seq = SequenceSource::AffineInvN {
            base: SoftVector::constant(&ps(), [1.0]).unwrap(),
            slope: SoftVector::constant(&ps(), [1.0]).unwrap(),
        };
        let prod = combine_scale(&scalar, &vec_seq).unwrap();
        let lim = construct_limit(&fam, &prod, 1_000_000, 1e-3).unwrap();
        assert!((lim.at(0)[0] - 2.0).abs() < 1e-4);
    }

    #[test]
    fn bounded_soft_sets() {
        let ps = ps();
        let fam = NormFamily::uniform(&ps, 2, NormDescriptor::P2).unwrap();
        let f = SoftSet::finite(
            &ps,
            2,
            vec![vec![vec![3.0, 4.0], vec![0.0, 1.0]]; 2],
        )
        .unwrap();
        let r = is_bounded_soft_set(&f, &fam).unwrap();
        assert!(r.bounded);
        assert_eq!(r.k.unwrap().values(), &[5.0, 5.0]);

        let zero = SoftVectorSpace::zero(&ps, 2).to_soft_set();
        let r = is_bounded_soft_set(&zero, &fam).unwrap();
        assert!(r.bounded);
        assert_eq!(r.k.unwrap(), SoftReal::zero(&ps));

        let ray = SoftSet::subspace(&ps, 2, vec![vec![vec![1.0, 0.0]]; 2]).unwrap();
        let r = is_bounded_soft_set(&ray, &fam).unwrap();
        assert!(!r.bounded && r.k.is_none());
    }

    #[test]
    fn closure_is_identity_on_subspaces() {
        let ps = ps();
        let m = SoftVectorSpace::new(&ps, 3, vec![vec![vec![1.0, 0.0, 0.0]]; 2]).unwrap();
        let closed = subspace_closure(&m);
        assert!(closed.includes(&m, DEFAULT_TOL).unwrap());
        assert!(m.includes(&closed, DEFAULT_TOL).unwrap());
    }
}
