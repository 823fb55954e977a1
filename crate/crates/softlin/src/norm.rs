//! Soft norms as per-parameter families of crisp norms, the induced soft
//! metric, balls, randomized axiom verification, and the extremal-constant
//! computations (independence constant, norm equivalence, Riesz witnesses).

use std::sync::Arc;

use rand::Rng;

use crate::error::{Result, SoftError};
use crate::linalg;
use crate::param::{require_same_params, ParameterSet};
use crate::real::SoftReal;
use crate::sampling;
use crate::space::SoftVectorSpace;
use crate::vector::SoftVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PExponent {
    One,
    Two,
    Inf,
}

/// A crisp norm on ℝⁿ. The weighted variants use
/// `(Σ wᵢ|xᵢ|^p)^(1/p)` for p ∈ {1, 2} and `max wᵢ|xᵢ|` for p = ∞.
#[derive(Debug, Clone, PartialEq)]
pub enum NormDescriptor {
    P1,
    P2,
    PInf,
    WeightedP { p: PExponent, weights: Vec<f64> },
}

impl NormDescriptor {
    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            NormDescriptor::P1 => v.iter().map(|x| x.abs()).sum(),
            NormDescriptor::P2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormDescriptor::PInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            NormDescriptor::WeightedP { p, weights } => match p {
                PExponent::One => v.iter().zip(weights).map(|(x, w)| w * x.abs()).sum(),
                PExponent::Two => v
                    .iter()
                    .zip(weights)
                    .map(|(x, w)| w * x * x)
                    .sum::<f64>()
                    .sqrt(),
                PExponent::Inf => v
                    .iter()
                    .zip(weights)
                    .fold(0.0, |m, (x, w)| m.max(w * x.abs())),
            },
        }
    }

    /// Smallest norm of a coordinate unit vector; a positive lower scale so
    /// that `‖x‖ ≥ axis_low · max|xᵢ|` holds for every descriptor here.
    fn axis_low(&self, dim: usize) -> f64 {
        match self {
            NormDescriptor::P1 | NormDescriptor::P2 | NormDescriptor::PInf => 1.0,
            NormDescriptor::WeightedP { p, weights } => {
                let wmin = weights.iter().copied().fold(f64::INFINITY, f64::min);
                let _ = dim;
                match p {
                    PExponent::One | PExponent::Inf => wmin,
                    PExponent::Two => wmin.sqrt(),
                }
            }
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if let NormDescriptor::WeightedP { weights, .. } = self {
            if weights.len() != dim {
                return Err(SoftError::DimensionMismatch(format!(
                    "{} weights for dimension {dim}",
                    weights.len()
                )));
            }
            if let Some(w) = weights.iter().find(|&&w| !(w > 0.0)) {
                return Err(SoftError::InvalidInput(format!(
                    "norm weights must be strictly positive, got {w}"
                )));
            }
        }
        Ok(())
    }

    fn is_euclidean_like(&self) -> bool {
        matches!(
            self,
            NormDescriptor::P2
                | NormDescriptor::WeightedP {
                    p: PExponent::Two,
                    ..
                }
        )
    }
}

/// A soft norm given by one crisp norm per parameter: `‖x̃‖(λ) = ‖x̃(λ)‖_λ`.
/// Evaluation at λ depends only on `x̃(λ)`, so the decomposition condition
/// holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct NormFamily {
    params: Arc<ParameterSet>,
    dim: usize,
    descriptors: Vec<NormDescriptor>,
}

impl NormFamily {
    pub fn new(
        params: &Arc<ParameterSet>,
        dim: usize,
        descriptors: Vec<NormDescriptor>,
    ) -> Result<Self> {
        if descriptors.len() != params.len() {
            return Err(SoftError::InvalidInput(format!(
                "expected {} norm descriptors, got {}",
                params.len(),
                descriptors.len()
            )));
        }
        if dim == 0 {
            return Err(SoftError::InvalidInput("dimension must be >= 1".into()));
        }
        for d in &descriptors {
            d.validate(dim)?;
        }
        Ok(NormFamily {
            params: Arc::clone(params),
            dim,
            descriptors,
        })
    }

    /// Extends one crisp norm to a soft norm (the same descriptor at every
    /// parameter).
    pub fn uniform(params: &Arc<ParameterSet>, dim: usize, d: NormDescriptor) -> Result<Self> {
        let n = params.len();
        Self::new(params, dim, vec![d; n])
    }

    pub fn params(&self) -> &Arc<ParameterSet> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn descriptor_at(&self, index: usize) -> &NormDescriptor {
        &self.descriptors[index]
    }

    /// `‖x̃‖`: the soft real of per-parameter crisp norms.
    pub fn eval(&self, x: &SoftVector) -> Result<SoftReal> {
        require_same_params(&self.params, x.params())?;
        if x.dim() != self.dim {
            return Err(SoftError::DimensionMismatch(format!(
                "{} vs {}",
                x.dim(),
                self.dim
            )));
        }
        Ok(SoftReal::from_fn(&self.params, |i, _| {
            self.descriptors[i].eval(x.at(i))
        }))
    }

    pub fn eval_at(&self, index: usize, v: &[f64]) -> f64 {
        self.descriptors[index].eval(v)
    }

    /// The induced soft metric `d(x̃, ỹ) = ‖x̃ − ỹ‖`.
    pub fn metric(&self, x: &SoftVector, y: &SoftVector) -> Result<SoftReal> {
        self.eval(&x.sub(y)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallKind {
    Open,
    Closed,
    Sphere,
}

/// A ball (or sphere) specification: soft center and strictly positive soft
/// radius. Membership is decided pointwise; the underlying point sets are
/// uncountable and never enumerated.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    center: SoftVector,
    radius: SoftReal,
    kind: BallKind,
}

impl BallSpec {
    pub fn new(center: SoftVector, radius: SoftReal, kind: BallKind) -> Result<Self> {
        require_same_params(center.params(), radius.params())?;
        if let Some(r) = radius.values().iter().find(|&&r| !(r > 0.0)) {
            return Err(SoftError::InvalidInput(format!(
                "ball radius must be strictly positive at every parameter, got {r}"
            )));
        }
        Ok(BallSpec {
            center,
            radius,
            kind,
        })
    }

    pub fn center(&self) -> &SoftVector {
        &self.center
    }

    pub fn radius(&self) -> &SoftReal {
        &self.radius
    }

    pub fn kind(&self) -> BallKind {
        self.kind
    }
}

/// Pointwise ball membership. Open balls use the strict inequality, closed
/// balls allow `tol` past the radius, spheres require `|‖·‖ − r| ≤ tol`.
pub fn ball_membership(fam: &NormFamily, ball: &BallSpec, y: &SoftVector, tol: f64) -> Result<bool> {
    let d = fam.metric(ball.center(), y)?;
    let r = ball.radius();
    Ok(d
        .values()
        .iter()
        .zip(r.values())
        .all(|(&dist, &rad)| match ball.kind() {
            BallKind::Open => dist < rad,
            BallKind::Closed => dist <= rad + tol,
            BallKind::Sphere => (dist - rad).abs() <= tol,
        }))
}

#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub axiom: String,
    pub parameter: String,
    pub sample: u32,
    pub detail: String,
}

/// Outcome of a randomized axiom run; violations are report content, not
/// errors.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub samples: u32,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn draw_vector(
    rng: &mut rand_chacha::ChaCha8Rng,
    params: &Arc<ParameterSet>,
    dim: usize,
    space: Option<&SoftVectorSpace>,
) -> SoftVector {
    match space {
        None => SoftVector::new(
            params,
            (0..params.len())
                .map(|_| sampling::standard_normal_vec(rng, dim))
                .collect(),
        )
        .expect("draw has uniform dimension"),
        Some(s) => SoftVector::new(
            params,
            (0..params.len())
                .map(|i| {
                    let basis = s.basis_at(i);
                    let coeffs = sampling::standard_normal_vec(rng, basis.len());
                    let mut v = vec![0.0; dim];
                    for (c, col) in coeffs.iter().zip(basis) {
                        for (vi, &x) in v.iter_mut().zip(col) {
                            *vi += c * x;
                        }
                    }
                    v
                })
                .collect(),
        )
        .expect("draw has uniform dimension"),
    }
}

fn check_norm_axioms(
    fam: &NormFamily,
    space: Option<&SoftVectorSpace>,
    samples: u32,
    seed: u64,
    tol: f64,
) -> Result<AxiomReport> {
    if samples < 1 {
        return Err(SoftError::InvalidInput("samples must be >= 1".into()));
    }
    if let Some(s) = space {
        require_same_params(fam.params(), s.params())?;
    }
    let params = fam.params().clone();
    let dim = fam.dim();
    let mut rng = sampling::rng_from_seed(seed);
    let mut violations = Vec::new();
    let mut record = |axiom: &str, i: usize, sample: u32, detail: String| {
        violations.push(AxiomViolation {
            axiom: axiom.to_string(),
            parameter: params.label(i).to_string(),
            sample,
            detail,
        });
    };

    // N2, zero direction: the null vector has norm exactly 0̄.
    let theta_norm = fam.eval(&SoftVector::null(&params, dim))?;
    for (i, &v) in theta_norm.values().iter().enumerate() {
        if v != 0.0 {
            record("N2", i, 0, format!("‖Θ‖ = {v} ≠ 0"));
        }
    }

    for sample in 0..samples {
        let x = draw_vector(&mut rng, &params, dim, space);
        let y = draw_vector(&mut rng, &params, dim, space);
        let alpha = SoftReal::from_fn(&params, |_, _| rng.gen_range(-3.0..=3.0));

        let nx = fam.eval(&x)?;
        let ny = fam.eval(&y)?;
        let nax = fam.eval(&x.scale_soft(&alpha)?)?;
        let nxy = fam.eval(&x.add(&y)?)?;

        for i in 0..params.len() {
            let axis_low = fam.descriptor_at(i).axis_low(dim);
            // N1: non-negativity
            if !(nx.at(i) >= 0.0) {
                record("N1", i, sample, format!("‖x‖ = {}", nx.at(i)));
            }
            // N2, sampled direction: a vanishing norm forces a vanishing value
            if nx.at(i) <= tol {
                let maxc = x.at(i).iter().fold(0.0f64, |m, &c| m.max(c.abs()));
                if maxc > tol / axis_low {
                    record(
                        "N2",
                        i,
                        sample,
                        format!("‖x‖ = {} but max|x_i| = {maxc}", nx.at(i)),
                    );
                }
            }
            // N3: absolute homogeneity
            let rhs = alpha.at(i).abs() * nx.at(i);
            if (nax.at(i) - rhs).abs() > tol * rhs.abs().max(1.0) {
                record(
                    "N3",
                    i,
                    sample,
                    format!("‖αx‖ = {} vs |α|‖x‖ = {rhs}", nax.at(i)),
                );
            }
            // N4: triangle inequality
            let bound = nx.at(i) + ny.at(i);
            if nxy.at(i) > bound + tol * bound.max(1.0) {
                record(
                    "N4",
                    i,
                    sample,
                    format!("‖x+y‖ = {} vs ‖x‖+‖y‖ = {bound}", nxy.at(i)),
                );
            }
        }
    }
    Ok(AxiomReport {
        samples,
        violations,
    })
}

/// Randomized check of the four norm axioms on the whole space.
pub fn verify_norm_axioms(fam: &NormFamily, samples: u32, seed: u64, tol: f64) -> Result<AxiomReport> {
    check_norm_axioms(fam, None, samples, seed, tol)
}

/// The same check with samples constrained to a soft vector subspace — the
/// relative norm inherits the axioms unchanged.
pub fn verify_norm_axioms_in(
    fam: &NormFamily,
    space: &SoftVectorSpace,
    samples: u32,
    seed: u64,
    tol: f64,
) -> Result<AxiomReport> {
    check_norm_axioms(fam, Some(space), samples, seed, tol)
}

/// Randomized check of the induced metric: the metric axioms plus both
/// translation-invariance identities.
pub fn verify_metric_axioms(
    fam: &NormFamily,
    samples: u32,
    seed: u64,
    tol: f64,
) -> Result<AxiomReport> {
    if samples < 1 {
        return Err(SoftError::InvalidInput("samples must be >= 1".into()));
    }
    let params = fam.params().clone();
    let dim = fam.dim();
    let mut rng = sampling::rng_from_seed(seed);
    let mut violations = Vec::new();
    let mut record = |axiom: &str, i: usize, sample: u32, detail: String| {
        violations.push(AxiomViolation {
            axiom: axiom.to_string(),
            parameter: params.label(i).to_string(),
            sample,
            detail,
        });
    };

    for sample in 0..samples {
        let x = draw_vector(&mut rng, &params, dim, None);
        let y = draw_vector(&mut rng, &params, dim, None);
        let z = draw_vector(&mut rng, &params, dim, None);
        let a = draw_vector(&mut rng, &params, dim, None);
        let alpha = SoftReal::from_fn(&params, |_, _| rng.gen_range(-3.0..=3.0));

        let dxy = fam.metric(&x, &y)?;
        let dyx = fam.metric(&y, &x)?;
        let dxz = fam.metric(&x, &z)?;
        let dyz = fam.metric(&y, &z)?;
        let dxx = fam.metric(&x, &x)?;
        let shifted = fam.metric(&x.add(&a)?, &y.add(&a)?)?;
        let scaled = fam.metric(&x.scale_soft(&alpha)?, &y.scale_soft(&alpha)?)?;

        for i in 0..params.len() {
            if !(dxy.at(i) >= 0.0) {
                record("M1", i, sample, format!("d(x,y) = {}", dxy.at(i)));
            }
            if dxx.at(i) != 0.0 {
                record("M2", i, sample, format!("d(x,x) = {}", dxx.at(i)));
            }
            let axis_low = fam.descriptor_at(i).axis_low(dim);
            if dxy.at(i) <= tol {
                let maxc = x
                    .at(i)
                    .iter()
                    .zip(y.at(i))
                    .fold(0.0f64, |m, (&u, &v)| m.max((u - v).abs()));
                if maxc > tol / axis_low {
                    record(
                        "M2",
                        i,
                        sample,
                        format!("d(x,y) = {} but max|x−y| = {maxc}", dxy.at(i)),
                    );
                }
            }
            if (dxy.at(i) - dyx.at(i)).abs() > tol * dxy.at(i).abs().max(1.0) {
                record(
                    "M3",
                    i,
                    sample,
                    format!("d(x,y) = {} vs d(y,x) = {}", dxy.at(i), dyx.at(i)),
                );
            }
            let bound = dxy.at(i) + dyz.at(i);
            if dxz.at(i) > bound + tol * bound.max(1.0) {
                record(
                    "M4",
                    i,
                    sample,
                    format!("d(x,z) = {} vs d(x,y)+d(y,z) = {bound}", dxz.at(i)),
                );
            }
            if (shifted.at(i) - dxy.at(i)).abs() > tol * dxy.at(i).abs().max(1.0) {
                record(
                    "T1",
                    i,
                    sample,
                    format!("d(x+a,y+a) = {} vs d(x,y) = {}", shifted.at(i), dxy.at(i)),
                );
            }
            let rhs = alpha.at(i).abs() * dxy.at(i);
            if (scaled.at(i) - rhs).abs() > tol * rhs.abs().max(1.0) {
                record(
                    "T2",
                    i,
                    sample,
                    format!("d(αx,αy) = {} vs |α|d(x,y) = {rhs}", scaled.at(i)),
                );
            }
        }
    }
    Ok(AxiomReport {
        samples,
        violations,
    })
}

// ---------------------------------------------------------------------------
// extremal computations
// ---------------------------------------------------------------------------

/// Minimizes `c ↦ ‖z − B·c‖` for one crisp norm. Exact (weighted) least
/// squares when the norm is Euclidean-like, otherwise coordinate descent with
/// ternary line searches (the objective is convex, hence unimodal on every
/// line) plus a diagonal pattern-search polish for the piecewise-linear
/// norms. Returns `(distance, coefficients)`.
fn min_distance_to_span(desc: &NormDescriptor, z: &[f64], basis: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let n = z.len();
    if basis.is_empty() {
        return (desc.eval(z), Vec::new());
    }
    if desc.is_euclidean_like() {
        let weights: Option<&[f64]> = match desc {
            NormDescriptor::WeightedP { weights, .. } => Some(weights),
            _ => None,
        };
        let scale = |v: &[f64]| -> Vec<f64> {
            match weights {
                Some(w) => v.iter().zip(w).map(|(&x, &wi)| wi.sqrt() * x).collect(),
                None => v.to_vec(),
            }
        };
        let scaled_basis: Vec<Vec<f64>> = basis.iter().map(|c| scale(c)).collect();
        let scaled_z = scale(z);
        let coeffs = linalg::least_squares_coeffs(&scaled_basis, n, &scaled_z);
        let residual = residual_vec(z, basis, &coeffs);
        return (desc.eval(&residual), coeffs);
    }

    let objective = |c: &[f64]| desc.eval(&residual_vec(z, basis, c));
    let k = basis.len();
    let mut c = linalg::least_squares_coeffs(basis, n, z);
    let mut best = objective(&c);
    let z2: f64 = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut half_width = 4.0 * (1.0 + z2);

    for _sweep in 0..40 {
        for j in 0..k {
            let f1 = |t: f64| {
                let mut cc = c.clone();
                cc[j] = t;
                objective(&cc)
            };
            let t = ternary_min(f1, c[j] - half_width, c[j] + half_width, 70);
            let v = f1(t);
            if v < best {
                best = v;
                c[j] = t;
            }
        }
        half_width = (half_width * 0.7).max(1e-7);
    }

    // Pattern search over coordinate and diagonal directions. Coordinate
    // descent stalls at corners of the piecewise-linear objectives; a convex
    // function always leaves an improving half-space, so seeded random
    // probes escape those corners before the step shrinks.
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for j in 0..k {
        let mut d = vec![0.0; k];
        d[j] = 1.0;
        dirs.push(d.clone());
        d[j] = -1.0;
        dirs.push(d);
    }
    for i in 0..k {
        for j in (i + 1)..k {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut d = vec![0.0; k];
                d[i] = si;
                d[j] = sj;
                dirs.push(d);
            }
        }
    }
    let mut rng = sampling::rng_from_seed(0x5EED_D157);
    let mut step = 0.5;
    while step > 1e-10 {
        let mut improved = false;
        for d in &dirs {
            let trial: Vec<f64> = c.iter().zip(d).map(|(&ci, &di)| ci + step * di).collect();
            let v = objective(&trial);
            if v < best - 1e-15 {
                best = v;
                c = trial;
                improved = true;
            }
        }
        if !improved && k > 1 {
            for _ in 0..96 {
                let d = sampling::standard_normal_vec(&mut rng, k);
                let norm: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-12 {
                    continue;
                }
                let trial: Vec<f64> = c
                    .iter()
                    .zip(&d)
                    .map(|(&ci, &di)| ci + step * di / norm)
                    .collect();
                let v = objective(&trial);
                if v < best - 1e-15 {
                    best = v;
                    c = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, c)
}

fn residual_vec(z: &[f64], basis: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut r = z.to_vec();
    for (c, col) in coeffs.iter().zip(basis) {
        for (ri, &x) in r.iter_mut().zip(col) {
            *ri -= c * x;
        }
    }
    r
}

fn ternary_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: u32) -> f64 {
    for _ in 0..iters {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Distance from a crisp point to a subspace under the norm at one parameter.
pub fn subspace_distance(fam: &NormFamily, index: usize, z: &[f64], basis: &[Vec<f64>]) -> f64 {
    min_distance_to_span(fam.descriptor_at(index), z, basis).0
}

/// The independence constant `c̃` of a linearly independent family: per
/// parameter, the minimum of `‖Σ αᵢ·x̃ᵢ(λ)‖_λ` over the ℓ¹ unit sphere
/// `Σ|αᵢ| = 1`, found by grid search (`grid` points per coefficient) and 50
/// coordinate-descent sweeps. The estimator approaches the true minimum from
/// above; treat the result as a lower bound up to the 1e−6 refinement
/// tolerance.
pub fn independence_constant(fam: &NormFamily, s: &[SoftVector], grid: u32) -> Result<SoftReal> {
    if grid < 2 {
        return Err(SoftError::InvalidInput("grid must be >= 2".into()));
    }
    let verdict = crate::space::is_linearly_independent(s, crate::real::DEFAULT_TOL)?;
    if !verdict.independent {
        return Err(SoftError::Precondition(format!(
            "independence constant requires independent vectors; dependent at parameter {:?}",
            verdict.witness_parameter.as_deref().unwrap_or("?")
        )));
    }
    require_same_params(fam.params(), s[0].params())?;
    if s[0].dim() != fam.dim() {
        return Err(SoftError::DimensionMismatch(format!(
            "{} vs {}",
            s[0].dim(),
            fam.dim()
        )));
    }
    let params = fam.params();
    let m = s.len();
    let mut out = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let columns: Vec<&[f64]> = s.iter().map(|x| x.at(i)).collect();
        let combo = |beta: &[f64]| -> Vec<f64> {
            let mut v = vec![0.0; fam.dim()];
            for (b, col) in beta.iter().zip(&columns) {
                for (vi, &x) in v.iter_mut().zip(*col) {
                    *vi += b * x;
                }
            }
            v
        };
        // scale-invariant objective ‖Σ βx‖ / ‖β‖₁
        let g = |beta: &[f64]| -> f64 {
            let l1: f64 = beta.iter().map(|b| b.abs()).sum();
            if l1 < 1e-12 {
                return f64::INFINITY;
            }
            fam.eval_at(i, &combo(beta)) / l1
        };

        let mut best = f64::INFINITY;
        let mut best_beta = vec![0.0; m];
        let mut idx = vec![0u32; m];
        loop {
            let beta: Vec<f64> = idx
                .iter()
                .map(|&j| -1.0 + 2.0 * j as f64 / (grid - 1) as f64)
                .collect();
            let v = g(&beta);
            if v < best {
                best = v;
                best_beta = beta;
            }
            let mut carry = m;
            for j in 0..m {
                idx[j] += 1;
                if idx[j] < grid {
                    carry = j;
                    break;
                }
                idx[j] = 0;
            }
            if carry == m {
                break;
            }
        }

        let mut span = 1.0;
        for _sweep in 0..50 {
            for j in 0..m {
                let center = best_beta[j];
                let mut local_best = best;
                let mut local_t = center;
                for step in 0..=40 {
                    let t = center - span + 2.0 * span * step as f64 / 40.0;
                    let mut beta = best_beta.clone();
                    beta[j] = t;
                    let v = g(&beta);
                    if v < local_best {
                        local_best = v;
                        local_t = t;
                    }
                }
                best = local_best;
                best_beta[j] = local_t;
            }
            span *= 0.75;
        }
        out.push(best);
    }
    SoftReal::new(params, out)
}

/// Sandwich constants for a pair of soft norms: per parameter, the extreme
/// ratios `‖x‖₁-family / ‖x‖₂-family` over the sampled vectors, the signed
/// coordinate unit vectors and the all-ones vector. Inner estimates of the
/// true extremes: the sandwich holds on every sampled vector by construction.
#[derive(Debug, Clone)]
pub struct EquivalenceConstants {
    pub a: SoftReal,
    pub b: SoftReal,
}

pub fn equivalence_constants(
    fam1: &NormFamily,
    fam2: &NormFamily,
    samples: u32,
    seed: u64,
) -> Result<EquivalenceConstants> {
    require_same_params(fam1.params(), fam2.params())?;
    if fam1.dim() != fam2.dim() {
        return Err(SoftError::DimensionMismatch(format!(
            "{} vs {}",
            fam1.dim(),
            fam2.dim()
        )));
    }
    let params = fam1.params();
    let n = fam1.dim();
    let mut rng = sampling::rng_from_seed(seed);
    let mut a = Vec::with_capacity(params.len());
    let mut b = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut consider = |v: &[f64]| {
            let denom = fam2.eval_at(i, v);
            if denom > 0.0 {
                let ratio = fam1.eval_at(i, v) / denom;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        };
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            consider(&e);
            e[j] = -1.0;
            consider(&e);
        }
        consider(&vec![1.0; n]);
        for _ in 0..samples {
            let mut v = sampling::standard_normal_vec(&mut rng, n);
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue;
            }
            for x in &mut v {
                *x /= norm;
            }
            consider(&v);
        }
        a.push(lo);
        b.push(hi);
    }
    Ok(EquivalenceConstants {
        a: SoftReal::new(params, a)?,
        b: SoftReal::new(params, b)?,
    })
}

/// A Riesz witness: a unit soft vector whose distance to the proper soft
/// subspace `L` exceeds `1̄ − ε̃` at every parameter.
///
/// Per parameter: draw a seed vector off the subspace, subtract its best
/// subspace approximation, normalize, and verify the distance bound (redrawn
/// up to `samples` times if the bound is missed, which can happen for the
/// nonsmooth norms when ε is tiny compared to the optimizer's gap).
pub fn riesz_witness(
    fam: &NormFamily,
    l: &SoftVectorSpace,
    eps: &SoftReal,
    samples: u32,
    seed: u64,
) -> Result<SoftVector> {
    require_same_params(fam.params(), l.params())?;
    require_same_params(fam.params(), eps.params())?;
    if l.dim() != fam.dim() {
        return Err(SoftError::DimensionMismatch(format!(
            "{} vs {}",
            l.dim(),
            fam.dim()
        )));
    }
    if let Some(e) = eps.values().iter().find(|&&e| !(e > 0.0)) {
        return Err(SoftError::InvalidInput(format!(
            "ε must be strictly positive at every parameter, got {e}"
        )));
    }
    let params = fam.params();
    let n = fam.dim();
    let mut values = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let basis = l.basis_at(i);
        if basis.len() >= n {
            return Err(SoftError::Precondition(format!(
                "L must be a proper subspace; it is the full space at parameter {:?}",
                params.label(i)
            )));
        }
        let eps_i = eps.at(i);
        let mut rng = sampling::rng_for(seed, i as u64);
        let attempts = samples.max(1);
        let mut found = None;
        for _ in 0..attempts {
            let z = sampling::standard_normal_vec(&mut rng, n);
            let z2: f64 = z.iter().map(|x| x * x).sum::<f64>().sqrt();
            if z2 < 1e-9 {
                continue;
            }
            let zn: Vec<f64> = z.iter().map(|x| x / z2).collect();
            if linalg::euclidean_distance_to_span(basis, n, &zn) < 0.2 {
                continue; // too close to L; the normalized gap would be noisy
            }
            let (delta, coeffs) = min_distance_to_span(fam.descriptor_at(i), &zn, basis);
            if !(delta > 0.0) {
                continue;
            }
            let w = residual_vec(&zn, basis, &coeffs);
            let wn = fam.eval_at(i, &w);
            let y: Vec<f64> = w.iter().map(|x| x / wn).collect();
            let dist = min_distance_to_span(fam.descriptor_at(i), &y, basis).0;
            if dist > 1.0 - eps_i {
                found = Some(y);
                break;
            }
        }
        match found {
            Some(y) => values.push(y),
            None => {
                return Err(SoftError::Precondition(format!(
                    "no Riesz witness found at parameter {:?} within {attempts} draws \
                     (ε = {eps_i}); ε may be below the distance optimizer's accuracy",
                    params.label(i)
                )))
            }
        }
    }
    SoftVector::new(params, values)
}
