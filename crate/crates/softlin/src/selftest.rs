//! The built-in verification battery: eleven oracle- and property-backed
//! criteria covering the whole calculus, runnable from tests and from the
//! CLI `selftest` verb. Every criterion is deterministic for a fixed seed;
//! details never include wall-clock readings, so serialized battery output
//! is byte-stable.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::convex::{check_convex, intersect_regions, SoftRegion};
use crate::error::Result;
use crate::norm::{
    equivalence_constants, independence_constant, riesz_witness, verify_metric_axioms,
    verify_norm_axioms, BallKind, BallSpec, NormDescriptor, NormFamily, PExponent,
};
use crate::param::ParameterSet;
use crate::real::{SoftReal, DEFAULT_TOL};
use crate::sampling;
use crate::seq::{
    check_cauchy_bounded, check_convergence, combine_add, combine_scale, construct_limit,
    ConvergenceStatus, ScalarSequence, SequenceSource,
};
use crate::set::{SetRelation, SoftSet};
use crate::space::{is_linearly_independent, SoftVectorSpace};
use crate::vector::SoftVector;

/// Independent brute-force oracles. These deliberately avoid the crate's
/// production numerics (no SVD, no coordinate descent): rank comes from
/// hand-rolled Gaussian elimination, distances from dense coefficient grids.
pub mod oracles {
    /// Rank by Gaussian elimination with partial pivoting on a plain row
    /// array; pivots count when they exceed `tol · max(n,k) · max|entry|`.
    pub fn ge_rank(columns: &[Vec<f64>], n: usize, tol: f64) -> usize {
        let k = columns.len();
        if k == 0 || n == 0 {
            return 0;
        }
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        let scale = a
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |m, &x| m.max(x.abs()));
        if scale == 0.0 {
            return 0;
        }
        let thresh = tol * n.max(k) as f64 * scale;
        let mut rank = 0;
        let mut row = 0;
        for col in 0..k {
            if row >= n {
                break;
            }
            let (p, best) = (row..n)
                .map(|r| (r, a[r][col].abs()))
                .fold((row, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= thresh {
                continue;
            }
            a.swap(row, p);
            for r in 0..n {
                if r != row {
                    let f = a[r][col] / a[row][col];
                    if f != 0.0 {
                        for c2 in col..k {
                            a[r][c2] -= f * a[row][c2];
                        }
                    }
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }

    /// Distance from `z` to the span of `basis` under an arbitrary norm, by
    /// a dense coefficient grid refined to final step 1e−3 (coarse pass over
    /// `[−4, 4]` per coefficient, then two ×10 refinements around the best
    /// cell).
    pub fn dense_grid_distance(
        norm: impl Fn(&[f64]) -> f64,
        z: &[f64],
        basis: &[Vec<f64>],
    ) -> f64 {
        if basis.is_empty() {
            return norm(z);
        }
        let k = basis.len();
        let residual = |c: &[f64]| -> Vec<f64> {
            let mut r = z.to_vec();
            for (ci, col) in c.iter().zip(basis) {
                for (ri, &x) in r.iter_mut().zip(col) {
                    *ri -= ci * x;
                }
            }
            r
        };
        let mut center = vec![0.0f64; k];
        let mut best_val = f64::INFINITY;
        for (half, step) in [(4.0f64, 0.1f64), (0.25, 0.01), (0.025, 0.001)] {
            let per_axis = (2.0 * half / step).round() as u64 + 1;
            let mut idx = vec![0u64; k];
            let mut best_point = center.clone();
            loop {
                let point: Vec<f64> = idx
                    .iter()
                    .zip(&center)
                    .map(|(&j, &c)| c - half + j as f64 * step)
                    .collect();
                let v = norm(&residual(&point));
                if v < best_val {
                    best_val = v;
                    best_point = point;
                }
                let mut carry = k;
                for j in 0..k {
                    idx[j] += 1;
                    if idx[j] < per_axis {
                        carry = j;
                        break;
                    }
                    idx[j] = 0;
                }
                if carry == k {
                    break;
                }
            }
            center = best_point;
        }
        best_val
    }

    /// Minimum of `‖α₁x₁ + α₂x₂‖` over the ℓ¹ sphere `|α₁| + |α₂| = 1`,
    /// by direct sweep of α₁ with both signs of α₂.
    pub fn l1_sphere_min_2d(
        norm: impl Fn(&[f64]) -> f64,
        x1: &[f64],
        x2: &[f64],
        steps: usize,
    ) -> f64 {
        let n = x1.len();
        let mut best = f64::INFINITY;
        for i in 0..=steps {
            let a1 = -1.0 + 2.0 * i as f64 / steps as f64;
            let a2_mag = 1.0 - a1.abs();
            for sign in [-1.0, 1.0] {
                let a2 = sign * a2_mag;
                let v: Vec<f64> = (0..n).map(|j| a1 * x1[j] + a2 * x2[j]).collect();
                best = best.min(norm(&v));
            }
        }
        best
    }
}

/// Outcome of one battery criterion. `detail` is deterministic for a fixed
/// seed; the elapsed time is kept apart so serialized reports stay
/// byte-identical across runs.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub index: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

const CRITERIA: [(u8, &str); 11] = [
    (1, "norm-axioms"),
    (2, "de-morgan-set-algebra"),
    (3, "independence-reduction"),
    (4, "null-vector-theorems"),
    (5, "induced-metric"),
    (6, "independence-constant"),
    (7, "equivalence-constants"),
    (8, "riesz-witness"),
    (9, "completeness-replay"),
    (10, "limit-algebra"),
    (11, "convexity"),
];

/// Runs the full battery (criteria 1–11) with streams derived from `seed`.
pub fn run_battery(seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(i, _)| run_criterion(i, seed)).collect()
}

pub fn criterion_name(index: u8) -> Option<&'static str> {
    CRITERIA
        .iter()
        .find(|&&(i, _)| i == index)
        .map(|&(_, name)| name)
}

pub fn run_criterion(index: u8, seed: u64) -> CriterionOutcome {
    let name = criterion_name(index).unwrap_or("unknown");
    let start = Instant::now();
    let result = match index {
        1 => criterion_norm_axioms(seed),
        2 => criterion_de_morgan(seed),
        3 => criterion_independence_reduction(seed),
        4 => criterion_null_vector(seed),
        5 => criterion_induced_metric(seed),
        6 => criterion_independence_constant(seed),
        7 => criterion_equivalence(seed),
        8 => criterion_riesz(seed),
        9 => criterion_completeness(seed),
        10 => criterion_limit_algebra(seed),
        11 => criterion_convexity(seed),
        _ => Err(crate::error::SoftError::InvalidInput(format!(
            "criterion index {index} out of range 1..=11"
        ))),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok((passed, detail)) => (passed, detail),
        Err(e) => (false, format!("errored: {e}")),
    };
    let limit = match index {
        1 => Some(Duration::from_secs(10)),
        2 => Some(Duration::from_secs(1)),
        _ => None,
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!("; exceeded the {}s budget", limit.as_secs()));
        }
    }
    CriterionOutcome {
        index,
        name,
        passed,
        detail,
        elapsed,
    }
}

type CriterionResult = Result<(bool, String)>;

fn random_params(rng: &mut rand_chacha::ChaCha8Rng, max_len: usize) -> crate::Result<std::sync::Arc<ParameterSet>> {
    let len = rng.gen_range(1..=max_len);
    ParameterSet::new((0..len).map(|i| format!("p{i}")))
}

fn random_descriptor(rng: &mut rand_chacha::ChaCha8Rng, dim: usize) -> NormDescriptor {
    match rng.gen_range(0..4) {
        0 => NormDescriptor::P1,
        1 => NormDescriptor::P2,
        2 => NormDescriptor::PInf,
        _ => {
            let p = match rng.gen_range(0..3) {
                0 => PExponent::One,
                1 => PExponent::Two,
                _ => PExponent::Inf,
            };
            let weights = (0..dim).map(|_| rng.gen_range(0.25..=4.0)).collect();
            NormDescriptor::WeightedP { p, weights }
        }
    }
}

fn random_family(
    rng: &mut rand_chacha::ChaCha8Rng,
    params: &std::sync::Arc<ParameterSet>,
    dim: usize,
) -> Result<NormFamily> {
    let descriptors = (0..params.len())
        .map(|_| random_descriptor(rng, dim))
        .collect();
    NormFamily::new(params, dim, descriptors)
}

// 1. Twenty random families, |A| ≤ 5, n ≤ 6, axioms N1–N4 on 10⁴ samples
//    each; zero violations; under 10 s.
fn criterion_norm_axioms(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 101);
    let mut total_violations = 0usize;
    for case in 0..20u64 {
        let params = random_params(&mut rng, 5)?;
        let dim = rng.gen_range(1..=6);
        let fam = random_family(&mut rng, &params, dim)?;
        let report = verify_norm_axioms(&fam, 10_000, seed ^ (case + 1), 1e-9)?;
        total_violations += report.violations.len();
    }
    Ok((
        total_violations == 0,
        format!("20 families x 10^4 samples, {total_violations} violations"),
    ))
}

// 2. De Morgan on 10³ random finite soft sets over enumerated universes of
//    ≤ 20 points; both identities exactly; under 1 s.
fn criterion_de_morgan(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 102);
    let mut failures = 0usize;
    for _ in 0..1000 {
        let params = random_params(&mut rng, 4)?;
        let point_count = rng.gen_range(1..=20);
        let universe_points: Vec<Vec<f64>> = (0..point_count)
            .map(|_| (0..2).map(|_| rng.gen_range(0..7) as f64).collect())
            .collect();
        let universe = SoftSet::finite(
            &params,
            2,
            vec![universe_points.clone(); params.len()],
        )?;
        let subset = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<SoftSet> {
            let payload = (0..params.len())
                .map(|i| {
                    universe
                        .finite_at(i)
                        .expect("finite")
                        .iter()
                        .filter(|_| rng.gen_bool(0.5))
                        .cloned()
                        .collect()
                })
                .collect();
            SoftSet::finite(&params, 2, payload)
        };
        let f = subset(&mut rng)?;
        let g = subset(&mut rng)?;

        let lhs1 = f.union(&g)?.complement(&universe)?;
        let rhs1 = f.complement(&universe)?.intersection(&g.complement(&universe)?)?;
        let lhs2 = f.intersection(&g)?.complement(&universe)?;
        let rhs2 = f.complement(&universe)?.union(&g.complement(&universe)?)?;
        if lhs1.relate(&rhs1, 0.0)? != SetRelation::Equal
            || lhs2.relate(&rhs2, 0.0)? != SetRelation::Equal
        {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("10^3 random universes, {failures} De Morgan failures"),
    ))
}

// 3. Per-parameter independence reduction against the Gaussian-elimination
//    oracle on 10³ random families; witnesses annihilate within 1e−8.
fn criterion_independence_reduction(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 103);
    let mut disagreements = 0usize;
    let mut witness_failures = 0usize;
    for _ in 0..1000 {
        let params = random_params(&mut rng, 4)?;
        let m = rng.gen_range(1..=5usize);
        let n = rng.gen_range(1..=6usize);
        let mut values: Vec<Vec<Vec<f64>>> = (0..m)
            .map(|_| {
                (0..params.len())
                    .map(|_| sampling::uniform_vec(&mut rng, n, -1.0, 1.0))
                    .collect()
            })
            .collect();
        if rng.gen_bool(0.5) {
            // engineer an exact dependency at one parameter
            let lam = rng.gen_range(0..params.len());
            if m == 1 {
                values[0][lam] = vec![0.0; n];
            } else {
                let mut combo = vec![0.0; n];
                for v in values.iter().take(m - 1) {
                    let c = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0][rng.gen_range(0..6)];
                    for (j, x) in v[lam].iter().enumerate() {
                        combo[j] += c * x;
                    }
                }
                values[m - 1][lam] = combo;
            }
        }
        let vectors: Vec<SoftVector> = values
            .into_iter()
            .map(|per_label| SoftVector::new(&params, per_label))
            .collect::<Result<_>>()?;
        let verdict = is_linearly_independent(&vectors, DEFAULT_TOL)?;
        let oracle_independent = (0..params.len()).all(|i| {
            let cols: Vec<Vec<f64>> = vectors.iter().map(|v| v.at(i).to_vec()).collect();
            oracles::ge_rank(&cols, n, DEFAULT_TOL) == m
        });
        if verdict.independent != oracle_independent {
            disagreements += 1;
            continue;
        }
        if !verdict.independent {
            let lam = params
                .index_of(verdict.witness_parameter.as_deref().unwrap())
                .unwrap();
            let coeffs = verdict.witness_coefficients.as_ref().unwrap();
            let mut combo = vec![0.0; n];
            for (c, v) in coeffs.iter().zip(&vectors) {
                for (j, x) in v.at(lam).iter().enumerate() {
                    combo[j] += c * x;
                }
            }
            let residual = combo.iter().fold(0.0f64, |mx, &x| mx.max(x.abs()));
            let all_zero = coeffs.iter().all(|&c| c == 0.0);
            if residual > 1e-8 || all_zero {
                witness_failures += 1;
            }
        }
    }
    Ok((
        disagreements == 0 && witness_failures == 0,
        format!(
            "10^3 families vs elimination oracle: {disagreements} disagreements, \
             {witness_failures} witness failures"
        ),
    ))
}

// 4. Null-vector theorems exact on 10⁴ draws, plus the product-null
//    counterexample with non-null factors.
fn criterion_null_vector(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 104);
    let mut failures = 0usize;
    for _ in 0..10_000 {
        let params = random_params(&mut rng, 4)?;
        let n = rng.gen_range(1..=4usize);
        let alpha = SoftVector::new(
            &params,
            (0..params.len())
                .map(|_| sampling::uniform_vec(&mut rng, n, -5.0, 5.0))
                .collect(),
        )?;
        let k = SoftReal::from_fn(&params, |_, _| rng.gen_range(-5.0..=5.0));
        let theta = SoftVector::null(&params, n);

        let zero_scalar = SoftReal::zero(&params);
        if alpha.scale_soft(&zero_scalar)? != theta {
            failures += 1;
        }
        if theta.scale_soft(&k)? != theta {
            failures += 1;
        }
        let minus_one = SoftReal::constant(&params, -1.0);
        if alpha.scale_soft(&minus_one)? != alpha.neg() {
            failures += 1;
        }
    }

    // k̃(1)=1, k̃(i)=0 and α̃(1)=θ, α̃(i)=(1,..,0_i,..,1): the product is Θ
    // with neither factor null.
    let n = 3usize;
    let params = ParameterSet::new((1..=n).map(|i| i.to_string()))?;
    let k = SoftReal::from_fn(&params, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let alpha = SoftVector::from_fn(&params, n, |i, _| {
        if i == 0 {
            vec![0.0; n]
        } else {
            (0..n).map(|j| if j == i { 0.0 } else { 1.0 }).collect()
        }
    })?;
    let remark_ok = alpha.scale_soft(&k)?.is_null(0.0)
        && !alpha.is_null(0.0)
        && !k.is_constant(0.0, 0.0);

    Ok((
        failures == 0 && remark_ok,
        format!("10^4 exact identities, {failures} failures; product-null counterexample holds: {remark_ok}"),
    ))
}

// 5. Metric axioms M1–M4 plus both translation-invariance identities on
//    10⁴ random triples per family, at 1e−9 relative error.
fn criterion_induced_metric(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 105);
    let mut total_violations = 0usize;
    for case in 0..6u64 {
        let params = random_params(&mut rng, 5)?;
        let dim = rng.gen_range(1..=6);
        let fam = random_family(&mut rng, &params, dim)?;
        let report = verify_metric_axioms(&fam, 10_000, seed ^ (0x500 + case), 1e-9)?;
        total_violations += report.violations.len();
    }
    Ok((
        total_violations == 0,
        format!("6 families x 10^4 triples, {total_violations} violations"),
    ))
}

// 6. Independence constant for the constant standard basis of ℝ²: P2 gives
//    1/√2 within [0.7070, 0.7072], P1 gives exactly 1; the lower-bound
//    inequality holds over 10⁴ random soft-scalar tuples.
fn criterion_independence_constant(seed: u64) -> CriterionResult {
    let params = ParameterSet::new(["a", "b", "c"])?;
    let e1 = SoftVector::constant(&params, [1.0, 0.0])?;
    let e2 = SoftVector::constant(&params, [0.0, 1.0])?;
    let s = [e1, e2];
    let fam2 = NormFamily::uniform(&params, 2, NormDescriptor::P2)?;
    let fam1 = NormFamily::uniform(&params, 2, NormDescriptor::P1)?;

    let c2 = independence_constant(&fam2, &s, 41)?;
    let in_window = c2
        .values()
        .iter()
        .all(|&v| (0.7070..=0.7072).contains(&v));
    let oracle = oracles::l1_sphere_min_2d(
        |v| v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        &[1.0, 0.0],
        &[0.0, 1.0],
        20_000,
    );
    let oracle_close = c2.values().iter().all(|&v| (v - oracle).abs() <= 1e-4);

    let c1 = independence_constant(&fam1, &s, 41)?;
    let p1_exact = c1.values().iter().all(|&v| (v - 1.0).abs() <= 1e-9);

    let mut rng = sampling::rng_for(seed, 106);
    let mut soundness_failures = 0usize;
    for _ in 0..10_000 {
        let a1 = SoftReal::from_fn(&params, |_, _| rng.gen_range(-3.0..=3.0));
        let a2 = SoftReal::from_fn(&params, |_, _| rng.gen_range(-3.0..=3.0));
        for (fam, c) in [(&fam2, &c2), (&fam1, &c1)] {
            let combo = SoftVector::linear_combination(
                &[a1.clone(), a2.clone()],
                &[s[0].clone(), s[1].clone()],
            )?;
            let lhs = fam.eval(&combo)?;
            let rhs = a1.abs().add(&a2.abs())?.mul(c)?;
            for i in 0..params.len() {
                if lhs.at(i) < rhs.at(i) - 1e-9 * rhs.at(i).abs().max(1.0) {
                    soundness_failures += 1;
                }
            }
        }
    }
    Ok((
        in_window && oracle_close && p1_exact && soundness_failures == 0,
        format!(
            "P2 c = {:.6} (oracle {:.6}), P1 c = {:.9}, {soundness_failures} soundness failures",
            c2.at(0),
            oracle,
            c1.at(0)
        ),
    ))
}

// 7. Equivalence constants: P1 vs P∞ on ℝ³ gives (1, 3) per parameter; the
//    sandwich holds on every sampled vector for 20 random family pairs.
fn criterion_equivalence(seed: u64) -> CriterionResult {
    let params = ParameterSet::new(["a", "b"])?;
    let p1 = NormFamily::uniform(&params, 3, NormDescriptor::P1)?;
    let pinf = NormFamily::uniform(&params, 3, NormDescriptor::PInf)?;
    let ec = equivalence_constants(&p1, &pinf, 500, seed ^ 0x700)?;
    let frozen_ok = (0..params.len()).all(|i| {
        (ec.a.at(i) - 1.0).abs() <= 1e-9 && (ec.b.at(i) - 3.0).abs() <= 1e-9
    });

    let mut rng = sampling::rng_for(seed, 107);
    let mut sandwich_failures = 0usize;
    for case in 0..20u64 {
        let params = random_params(&mut rng, 5)?;
        let dim = rng.gen_range(1..=6usize);
        let fam1 = random_family(&mut rng, &params, dim)?;
        let fam2 = random_family(&mut rng, &params, dim)?;
        let samples = 200u32;
        let pair_seed = seed ^ (0x710 + case);
        let ec = equivalence_constants(&fam1, &fam2, samples, pair_seed)?;

        // replay of the sampling scheme: signed axes, the all-ones vector,
        // then the seeded unit draws, per parameter in order
        let mut replay = sampling::rng_from_seed(pair_seed);
        for i in 0..params.len() {
            let mut candidates: Vec<Vec<f64>> = Vec::new();
            for j in 0..dim {
                let mut e = vec![0.0; dim];
                e[j] = 1.0;
                candidates.push(e.clone());
                e[j] = -1.0;
                candidates.push(e);
            }
            candidates.push(vec![1.0; dim]);
            for _ in 0..samples {
                let mut v = sampling::standard_normal_vec(&mut replay, dim);
                let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-12 {
                    continue;
                }
                for x in &mut v {
                    *x /= norm;
                }
                candidates.push(v);
            }
            for v in &candidates {
                let denom = fam2.eval_at(i, v);
                if denom <= 0.0 {
                    continue;
                }
                let ratio = fam1.eval_at(i, v) / denom;
                let slack = 1e-12 * ratio.abs().max(1.0);
                if ratio < ec.a.at(i) - slack || ratio > ec.b.at(i) + slack {
                    sandwich_failures += 1;
                }
            }
        }
    }
    Ok((
        frozen_ok && sandwich_failures == 0,
        format!(
            "P1/PInf constants ({:.9}, {:.9}); {sandwich_failures} sandwich failures on 20 pairs",
            ec.a.at(0),
            ec.b.at(0)
        ),
    ))
}

// 8. Riesz witnesses for 50 random (family, proper subspace, ε̃) instances:
//    unit norm within 1e−9 and distance > 1−ε against the dense-grid oracle.
fn criterion_riesz(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 108);
    let mut failures = 0usize;
    for case in 0..50u64 {
        let params = random_params(&mut rng, 3)?;
        let n = rng.gen_range(2..=3usize);
        let fam = random_family(&mut rng, &params, n)?;
        let k = rng.gen_range(1..n);
        let bases: Vec<Vec<Vec<f64>>> = (0..params.len())
            .map(|_| {
                let cols: Vec<Vec<f64>> = (0..k)
                    .map(|_| sampling::standard_normal_vec(&mut rng, n))
                    .collect();
                cols
            })
            .collect();
        let l = SoftVectorSpace::new(&params, n, bases)?;
        if !l.is_proper_everywhere() {
            continue; // degenerate random draw; proper subspaces only
        }
        let eps = SoftReal::from_fn(&params, |_, _| rng.gen_range(0.05..=0.9));
        let y = riesz_witness(&fam, &l, &eps, 200, seed ^ (0x800 + case))?;
        for i in 0..params.len() {
            let norm = fam.eval_at(i, y.at(i));
            if (norm - 1.0).abs() > 1e-9 {
                failures += 1;
                continue;
            }
            let oracle_dist = oracles::dense_grid_distance(
                |v| fam.eval_at(i, v),
                y.at(i),
                l.basis_at(i),
            );
            if oracle_dist <= 1.0 - eps.at(i) {
                failures += 1;
            }
        }
    }
    Ok((
        failures == 0,
        format!("50 instances against the dense-grid oracle, {failures} failures"),
    ))
}

// 9. Completeness replay: 100 Cauchy-by-construction sequences (half in the
//    soft reals, half in soft spaces of dimension ≤ 4); the constructed
//    limit is within 1e−6 of the analytic limit and the convergent ⇒ Cauchy
//    ⇒ bounded chain holds.
fn criterion_completeness(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 109);
    let mut failures = 0usize;
    let n_window = 100_000_000u64;
    let tol = 1e-6;
    for _ in 0..100 {
        let params = random_params(&mut rng, 5)?;
        let scalar_case = rng.gen_bool(0.5);
        let dim = if scalar_case { 1 } else { rng.gen_range(2..=4usize) };
        let fam = if scalar_case {
            // the modulus norm on the soft reals
            NormFamily::uniform(&params, 1, NormDescriptor::P1)?
        } else {
            random_family(&mut rng, &params, dim)?
        };
        let base = SoftVector::new(
            &params,
            (0..params.len())
                .map(|_| sampling::uniform_vec(&mut rng, dim, -2.0, 2.0))
                .collect(),
        )?;
        let slope = SoftVector::new(
            &params,
            (0..params.len())
                .map(|_| sampling::uniform_vec(&mut rng, dim, -2.0, 2.0))
                .collect(),
        )?;
        let seq = SequenceSource::AffineInvN {
            base: base.clone(),
            slope,
        };

        let limit = construct_limit(&fam, &seq, n_window, tol)?;
        let err = fam.metric(&limit, &base)?;
        if err.values().iter().any(|&e| e >= 1e-6) {
            failures += 1;
            continue;
        }
        let conv = check_convergence(&fam, &seq, Some(&base), n_window, tol)?;
        if conv.status != ConvergenceStatus::Converged {
            failures += 1;
            continue;
        }
        let cauchy = check_cauchy_bounded(&fam, &seq, n_window, 2.0 * tol)?;
        if !cauchy.cauchy || !cauchy.bounded || cauchy.bound.values().iter().any(|b| !b.is_finite())
        {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("100 Cauchy-by-construction sequences, {failures} failures"),
    ))
}

// 10. Limit algebra: sums and scalar products of convergent generated
//     sequences land on the combined limits within 2·tol, over 100 cases.
fn criterion_limit_algebra(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 110);
    let mut failures = 0usize;
    let n_window = 1_000_000u64;
    let tol = 1e-4;
    for _ in 0..100 {
        let params = random_params(&mut rng, 4)?;
        let dim = rng.gen_range(1..=3usize);
        let fam = random_family(&mut rng, &params, dim)?;
        let draw_seq = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<(SequenceSource, SoftVector)> {
            let base = SoftVector::new(
                &params,
                (0..params.len())
                    .map(|_| sampling::uniform_vec(rng, dim, -2.0, 2.0))
                    .collect(),
            )?;
            let slope = SoftVector::new(
                &params,
                (0..params.len())
                    .map(|_| sampling::uniform_vec(rng, dim, -2.0, 2.0))
                    .collect(),
            )?;
            Ok((
                SequenceSource::AffineInvN {
                    base: base.clone(),
                    slope,
                },
                base,
            ))
        };
        let (s1, lim1) = draw_seq(&mut rng)?;
        if rng.gen_bool(0.5) {
            let (s2, lim2) = draw_seq(&mut rng)?;
            let sum = combine_add(&s1, &s2)?;
            let expected = lim1.add(&lim2)?;
            let got = construct_limit(&fam, &sum, n_window, tol)?;
            if fam.metric(&got, &expected)?.values().iter().any(|&e| e >= 2.0 * tol) {
                failures += 1;
            }
        } else {
            let scalar_base = SoftReal::from_fn(&params, |_, _| rng.gen_range(-2.0..=2.0));
            let scalar = ScalarSequence::AffineInvN {
                base: scalar_base.clone(),
                slope: SoftReal::from_fn(&params, |_, _| rng.gen_range(-2.0..=2.0)),
            };
            let prod = combine_scale(&scalar, &s1)?;
            let expected = lim1.scale_soft(&scalar_base)?;
            let got = construct_limit(&fam, &prod, n_window, tol)?;
            if fam.metric(&got, &expected)?.values().iter().any(|&e| e >= 2.0 * tol) {
                failures += 1;
            }
        }
    }
    Ok((
        failures == 0,
        format!("100 combined sequences, {failures} failures"),
    ))
}

// 11. Convexity: closed balls and subspace regions report zero
//     counterexamples on 10³ segment samples each; the sphere yields a
//     counterexample; intersections of passing regions pass.
fn criterion_convexity(seed: u64) -> CriterionResult {
    let mut rng = sampling::rng_for(seed, 111);
    let mut failures = 0usize;
    let trials = 200; // 5 segment parameters per trial: 10³ segment samples

    let random_ball = |rng: &mut rand_chacha::ChaCha8Rng,
                       kind: BallKind|
     -> Result<SoftRegion> {
        let params = random_params(rng, 3)?;
        let dim = rng.gen_range(2..=3usize);
        let fam = random_family(rng, &params, dim)?;
        let center = SoftVector::new(
            &params,
            (0..params.len())
                .map(|_| sampling::uniform_vec(rng, dim, -1.0, 1.0))
                .collect(),
        )?;
        let radius = SoftReal::from_fn(&params, |_, _| rng.gen_range(0.5..=2.0));
        SoftRegion::ball(fam, BallSpec::new(center, radius, kind)?)
    };

    let mut passing: Vec<SoftRegion> = Vec::new();
    for case in 0..6u64 {
        let region = random_ball(&mut rng, BallKind::Closed)?;
        let report = check_convex(&region, trials, seed ^ (0xB00 + case), DEFAULT_TOL)?;
        if !report.convex_on_samples {
            failures += 1;
        } else {
            passing.push(region);
        }
    }
    for case in 0..3u64 {
        let params = random_params(&mut rng, 3)?;
        let n = rng.gen_range(2..=4usize);
        let k = rng.gen_range(1..=n);
        let bases: Vec<Vec<Vec<f64>>> = (0..params.len())
            .map(|_| {
                (0..k)
                    .map(|_| sampling::standard_normal_vec(&mut rng, n))
                    .collect()
            })
            .collect();
        let region = SoftRegion::Subspace(SoftVectorSpace::new(&params, n, bases)?);
        let report = check_convex(&region, trials, seed ^ (0xB10 + case), DEFAULT_TOL)?;
        if !report.convex_on_samples {
            failures += 1;
        }
    }

    // the sphere (boundary only) is not convex: a counterexample must appear
    let sphere_params = ParameterSet::new(["a"])?;
    let sphere = SoftRegion::ball(
        NormFamily::uniform(&sphere_params, 2, NormDescriptor::P2)?,
        BallSpec::new(
            SoftVector::null(&sphere_params, 2),
            SoftReal::constant(&sphere_params, 1.0),
            BallKind::Sphere,
        )?,
    )?;
    let sphere_report = check_convex(&sphere, trials, seed ^ 0xB20, DEFAULT_TOL)?;
    if sphere_report.convex_on_samples || sphere_report.counterexample.is_none() {
        failures += 1;
    }

    // intersections of passing regions keep passing (pairs over one shared
    // parameter set and dimension)
    let shared = ParameterSet::new(["a", "b"])?;
    let fam = NormFamily::uniform(&shared, 2, NormDescriptor::P2)?;
    let b1 = SoftRegion::ball(
        fam.clone(),
        BallSpec::new(
            SoftVector::null(&shared, 2),
            SoftReal::constant(&shared, 1.0),
            BallKind::Closed,
        )?,
    )?;
    let b2 = SoftRegion::ball(
        fam,
        BallSpec::new(
            SoftVector::constant(&shared, [0.5, 0.0])?,
            SoftReal::constant(&shared, 1.0),
            BallKind::Closed,
        )?,
    )?;
    let line = SoftRegion::Subspace(SoftVectorSpace::new(
        &shared,
        2,
        vec![vec![vec![1.0, 0.0]]; 2],
    )?);
    for (case, pair) in [
        vec![b1.clone(), b2.clone()],
        vec![b1.clone(), line.clone()],
    ]
    .into_iter()
    .enumerate()
    {
        let region = intersect_regions(pair)?;
        let report = check_convex(&region, trials, seed ^ (0xB30 + case as u64), DEFAULT_TOL)?;
        if !report.convex_on_samples {
            failures += 1;
        }
    }

    // sanity: members of the first passing ball stay members of itself ∩ itself
    if let Some(region) = passing.first() {
        let doubled = intersect_regions(vec![region.clone(), region.clone()])?;
        let probe = check_convex(&doubled, 20, seed ^ 0xB40, DEFAULT_TOL)?;
        if !probe.convex_on_samples {
            failures += 1;
        }
    }

    Ok((
        failures == 0,
        format!(
            "closed balls, subspaces and intersections convex on samples; sphere counterexample \
             found: {}; {failures} failures",
            sphere_report.counterexample.is_some()
        ),
    ))
}
