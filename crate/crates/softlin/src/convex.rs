//! Segments and convex soft sets: pointwise segment construction and
//! randomized convexity verification of membership-defined regions.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SoftError};
use crate::norm::{ball_membership, BallKind, BallSpec, NormDescriptor, NormFamily, PExponent};
use crate::param::{require_same_params, ParameterSet};
use crate::real::SoftReal;
use crate::sampling;
use crate::space::SoftVectorSpace;
use crate::vector::SoftVector;

/// A soft segment parameter: `t̃(λ) ∈ [0, 1]` at every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentParam(SoftReal);

impl SegmentParam {
    pub fn new(t: SoftReal) -> Result<Self> {
        if let Some(&bad) = t.values().iter().find(|&&v| !(0.0..=1.0).contains(&v)) {
            return Err(SoftError::InvalidInput(format!(
                "segment parameter {bad} outside [0, 1]"
            )));
        }
        Ok(SegmentParam(t))
    }

    pub fn constant(params: &Arc<ParameterSet>, t: f64) -> Result<Self> {
        Self::new(SoftReal::constant(params, t))
    }

    pub fn value(&self) -> &SoftReal {
        &self.0
    }
}

/// The segment point `ỹ(λ) = t(λ)·x₁(λ) + (1 − t(λ))·x₂(λ)`.
pub fn segment_point(x1: &SoftVector, x2: &SoftVector, t: &SegmentParam) -> Result<SoftVector> {
    require_same_params(x1.params(), t.value().params())?;
    let one_minus = t.value().map(|v| 1.0 - v);
    x1.scale_soft(t.value())?.add(&x2.scale_soft(&one_minus)?)
}

type MembershipFn = dyn Fn(&SoftVector) -> bool + Send + Sync;

/// A soft region with decidable pointwise membership. Balls and subspaces
/// also support member sampling; predicate regions are membership-only.
#[derive(Clone)]
pub enum SoftRegion {
    Ball {
        family: NormFamily,
        ball: BallSpec,
    },
    Subspace(SoftVectorSpace),
    Intersection(Vec<SoftRegion>),
    Predicate {
        params: Arc<ParameterSet>,
        dim: usize,
        membership: Arc<MembershipFn>,
    },
}

impl fmt::Debug for SoftRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoftRegion::Ball { ball, .. } => f
                .debug_struct("Ball")
                .field("kind", &ball.kind())
                .finish_non_exhaustive(),
            SoftRegion::Subspace(_) => f.debug_struct("Subspace").finish_non_exhaustive(),
            SoftRegion::Intersection(rs) => {
                f.debug_struct("Intersection").field("len", &rs.len()).finish()
            }
            SoftRegion::Predicate { .. } => f.debug_struct("Predicate").finish_non_exhaustive(),
        }
    }
}

impl SoftRegion {
    pub fn ball(family: NormFamily, ball: BallSpec) -> Result<Self> {
        require_same_params(family.params(), ball.center().params())?;
        if family.dim() != ball.center().dim() {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                family.dim(),
                ball.center().dim()
            )));
        }
        Ok(SoftRegion::Ball { family, ball })
    }

    pub fn params(&self) -> &Arc<ParameterSet> {
        match self {
            SoftRegion::Ball { family, .. } => family.params(),
            SoftRegion::Subspace(s) => s.params(),
            SoftRegion::Intersection(rs) => rs[0].params(),
            SoftRegion::Predicate { params, .. } => params,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SoftRegion::Ball { family, .. } => family.dim(),
            SoftRegion::Subspace(s) => s.dim(),
            SoftRegion::Intersection(rs) => rs[0].dim(),
            SoftRegion::Predicate { dim, .. } => *dim,
        }
    }

    /// Pointwise membership, tolerance-relaxed at closed boundaries.
    pub fn contains(&self, y: &SoftVector, tol: f64) -> Result<bool> {
        match self {
            SoftRegion::Ball { family, ball } => ball_membership(family, ball, y, tol),
            SoftRegion::Subspace(s) => s.contains(y, tol),
            SoftRegion::Intersection(rs) => {
                for r in rs {
                    if !r.contains(y, tol)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            SoftRegion::Predicate { membership, .. } => Ok(membership(y)),
        }
    }

    fn sample_member(&self, rng: &mut ChaCha8Rng, tol: f64) -> Result<SoftVector> {
        const MAX_ATTEMPTS: u32 = 100_000;
        match self {
            SoftRegion::Ball { family, ball } => {
                let params = family.params().clone();
                let n = family.dim();
                let mut values = Vec::with_capacity(params.len());
                for i in 0..params.len() {
                    let hw = box_half_width(family.descriptor_at(i));
                    let center = ball.center().at(i);
                    let radius = ball.radius().at(i);
                    let mut accepted = None;
                    for _ in 0..MAX_ATTEMPTS {
                        let u = sampling::uniform_vec(rng, n, -hw, hw);
                        let nu = family.eval_at(i, &u);
                        let ok = match ball.kind() {
                            BallKind::Open => nu < 1.0,
                            BallKind::Closed => nu <= 1.0,
                            BallKind::Sphere => nu > 1e-9,
                        };
                        if !ok {
                            continue;
                        }
                        let scale = match ball.kind() {
                            BallKind::Sphere => radius / nu,
                            _ => radius,
                        };
                        accepted = Some(
                            center
                                .iter()
                                .zip(&u)
                                .map(|(&c, &x)| c + scale * x)
                                .collect::<Vec<f64>>(),
                        );
                        break;
                    }
                    values.push(accepted.ok_or_else(|| {
                        SoftError::Precondition(format!(
                            "could not sample the ball at parameter {:?}",
                            params.label(i)
                        ))
                    })?);
                }
                SoftVector::new(&params, values)
            }
            SoftRegion::Subspace(s) => {
                let params = s.params().clone();
                let n = s.dim();
                let values = (0..params.len())
                    .map(|i| {
                        let basis = s.basis_at(i);
                        let coeffs = sampling::standard_normal_vec(rng, basis.len());
                        let mut v = vec![0.0; n];
                        for (c, col) in coeffs.iter().zip(basis) {
                            for (vi, &x) in v.iter_mut().zip(col) {
                                *vi += c * x;
                            }
                        }
                        v
                    })
                    .collect();
                SoftVector::new(&params, values)
            }
            SoftRegion::Intersection(rs) => {
                // Subspace constituents carry no volume inside a ball, so
                // rejection must start from their exact intersection.
                let subspaces: Vec<SoftVectorSpace> = rs
                    .iter()
                    .filter_map(|r| match r {
                        SoftRegion::Subspace(s) => Some(s.clone()),
                        _ => None,
                    })
                    .collect();
                let lead = if subspaces.is_empty() {
                    rs[0].clone()
                } else {
                    SoftRegion::Subspace(crate::space::intersect_spaces(&subspaces)?)
                };
                for _ in 0..1000 {
                    let candidate = lead.sample_member(rng, tol)?;
                    let mut inside = true;
                    for r in rs {
                        if !r.contains(&candidate, tol)? {
                            inside = false;
                            break;
                        }
                    }
                    if inside {
                        return Ok(candidate);
                    }
                }
                Err(SoftError::Precondition(
                    "could not sample the intersection (membership too thin or empty)".into(),
                ))
            }
            SoftRegion::Predicate { .. } => Err(SoftError::Unsupported(
                "predicate regions support membership only, not sampling".into(),
            )),
        }
    }
}

/// Half-width of an axis box containing the descriptor's unit ball.
fn box_half_width(desc: &NormDescriptor) -> f64 {
    match desc {
        NormDescriptor::P1 | NormDescriptor::P2 | NormDescriptor::PInf => 1.0,
        NormDescriptor::WeightedP { p, weights } => {
            let wmin = weights.iter().copied().fold(f64::INFINITY, f64::min);
            match p {
                PExponent::One | PExponent::Inf => 1.0 / wmin,
                PExponent::Two => (1.0 / wmin).sqrt(),
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvexCounterexample {
    pub x1: SoftVector,
    pub x2: SoftVector,
    pub t: SoftReal,
}

/// Result of a randomized convexity check. `convex_on_samples` reports on the
/// stated sample counts only, never a proof.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub convex_on_samples: bool,
    pub trials: u32,
    pub segment_checks: u32,
    pub counterexample: Option<ConvexCounterexample>,
}

/// Draws `trials` member pairs and 5 random segment parameters per pair,
/// and checks every segment point for membership (tolerance-relaxed at
/// closed boundaries). The first failing triple is returned.
pub fn check_convex(
    region: &SoftRegion,
    trials: u32,
    seed: u64,
    tol: f64,
) -> Result<ConvexityReport> {
    if trials < 1 {
        return Err(SoftError::InvalidInput("trials must be >= 1".into()));
    }
    let params = region.params().clone();
    let mut rng = sampling::rng_from_seed(seed);
    let mut segment_checks = 0;
    for _ in 0..trials {
        let x1 = region.sample_member(&mut rng, tol)?;
        let x2 = region.sample_member(&mut rng, tol)?;
        for _ in 0..5 {
            let t = SoftReal::from_fn(&params, |_, _| rng.gen_range(0.0..=1.0));
            let seg = SegmentParam::new(t.clone())?;
            let y = segment_point(&x1, &x2, &seg)?;
            segment_checks += 1;
            if !region.contains(&y, tol)? {
                return Ok(ConvexityReport {
                    convex_on_samples: false,
                    trials,
                    segment_checks,
                    counterexample: Some(ConvexCounterexample { x1, x2, t }),
                });
            }
        }
    }
    Ok(ConvexityReport {
        convex_on_samples: true,
        trials,
        segment_checks,
        counterexample: None,
    })
}

/// Conjunction of regions (membership-wise intersection).
pub fn intersect_regions(regions: Vec<SoftRegion>) -> Result<SoftRegion> {
    if regions.is_empty() {
        return Err(SoftError::InvalidInput(
            "intersection of zero regions".into(),
        ));
    }
    for pair in regions.windows(2) {
        require_same_params(pair[0].params(), pair[1].params())?;
        if pair[0].dim() != pair[1].dim() {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                pair[0].dim(),
                pair[1].dim()
            )));
        }
    }
    Ok(SoftRegion::Intersection(regions))
}
