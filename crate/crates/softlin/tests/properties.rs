//! Property tests for the calculus invariants: set-algebra laws, the
//! per-parameter independence reduction, norm decomposition, translation
//! invariance, windowed limit uniqueness, and convexity preservation.

use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;

use softlin::convex::{check_convex, intersect_regions, SoftRegion};
use softlin::norm::{BallKind, BallSpec, NormDescriptor, NormFamily, PExponent};
use softlin::selftest::oracles;
use softlin::seq::{check_cauchy_bounded, check_convergence, construct_limit, ConvergenceStatus, SequenceSource};
use softlin::{
    compare, is_linearly_independent, is_soft_subspace, scale_soft_set, sum_soft_sets,
    ParameterSet, Relation, SetRelation, SoftReal, SoftSet, SoftVector, SoftVectorSpace,
    TriState, DEFAULT_TOL,
};

fn params(k: usize) -> Arc<ParameterSet> {
    ParameterSet::new((0..k).map(|i| format!("p{i}"))).unwrap()
}

/// Integer-valued points keep every set operation exact in f64.
fn int_points(n_points: usize, seed_vals: &[i32]) -> Vec<Vec<f64>> {
    (0..n_points)
        .map(|i| {
            vec![
                f64::from(seed_vals[(2 * i) % seed_vals.len()] % 7),
                f64::from(seed_vals[(2 * i + 1) % seed_vals.len()] % 7),
            ]
        })
        .collect()
}

fn subset_by_mask(universe: &SoftSet, masks: &[Vec<bool>]) -> SoftSet {
    let payload = (0..universe.params().len())
        .map(|i| {
            universe
                .finite_at(i)
                .unwrap()
                .iter()
                .enumerate()
                .filter(|(j, _)| masks[i][*j % masks[i].len()])
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect();
    SoftSet::finite(universe.params(), 2, payload).unwrap()
}

fn descriptor(choice: u8, dim: usize) -> NormDescriptor {
    match choice % 4 {
        0 => NormDescriptor::P1,
        1 => NormDescriptor::P2,
        2 => NormDescriptor::PInf,
        _ => NormDescriptor::WeightedP {
            p: match choice % 3 {
                0 => PExponent::One,
                1 => PExponent::Two,
                _ => PExponent::Inf,
            },
            weights: (0..dim).map(|i| 0.5 + (i as f64) * 0.75 + 0.25).collect(),
        },
    }
}

proptest! {
    // ≤̃ both ways forces pointwise equality at the same tolerance.
    #[test]
    fn le_antisymmetry((xs, ys) in (1usize..5).prop_flat_map(|k| {
        (vec(-5.0f64..5.0, k), vec(-5.0f64..5.0, k))
    })) {
        let ps = params(xs.len());
        let x = SoftReal::new(&ps, xs).unwrap();
        let y = SoftReal::new(&ps, ys).unwrap();
        let fwd = compare(Relation::Le, &x, &y, DEFAULT_TOL).unwrap();
        let bwd = compare(Relation::Le, &y, &x, DEFAULT_TOL).unwrap();
        if fwd == TriState::Holds && bwd == TriState::Holds {
            prop_assert_eq!(
                compare(Relation::Eq, &x, &y, 2.0 * DEFAULT_TOL).unwrap(),
                TriState::Holds
            );
        }
    }

    // Union/intersection laws and both De Morgan identities on enumerated
    // universes (exact: all points integer-valued).
    #[test]
    fn set_algebra_laws(
        k in 1usize..4,
        n_points in 1usize..12,
        seed_vals in vec(0i32..1000, 24),
        mask_a in vec(any::<bool>(), 12),
        mask_b in vec(any::<bool>(), 12),
        mask_c in vec(any::<bool>(), 12),
    ) {
        let ps = params(k);
        let points = int_points(n_points, &seed_vals);
        let universe = SoftSet::finite(&ps, 2, vec![points; k]).unwrap();
        let f = subset_by_mask(&universe, &vec![mask_a; k]);
        let g = subset_by_mask(&universe, &vec![mask_b; k]);
        let h = subset_by_mask(&universe, &vec![mask_c; k]);
        let phi = SoftSet::null(&ps, 2);

        let eq = |a: &SoftSet, b: &SoftSet| a.relate(b, 0.0).unwrap() == SetRelation::Equal;

        // commutativity + associativity
        prop_assert!(eq(&f.union(&g).unwrap(), &g.union(&f).unwrap()));
        prop_assert!(eq(&f.intersection(&g).unwrap(), &g.intersection(&f).unwrap()));
        prop_assert!(eq(
            &f.union(&g).unwrap().union(&h).unwrap(),
            &f.union(&g.union(&h).unwrap()).unwrap()
        ));
        prop_assert!(eq(
            &f.intersection(&g).unwrap().intersection(&h).unwrap(),
            &f.intersection(&g.intersection(&h).unwrap()).unwrap()
        ));

        // identities
        prop_assert!(eq(&f.union(&phi).unwrap(), &f));
        prop_assert!(eq(&f.intersection(&universe).unwrap(), &f));

        // De Morgan, both directions
        let c = |s: &SoftSet| s.complement(&universe).unwrap();
        prop_assert!(eq(&c(&f.union(&g).unwrap()), &c(&f).intersection(&c(&g)).unwrap()));
        prop_assert!(eq(&c(&f.intersection(&g).unwrap()), &c(&f).union(&c(&g)).unwrap()));
    }

    // Membership is monotone along soft inclusion.
    #[test]
    fn membership_monotone_under_subset(
        k in 1usize..4,
        n_points in 2usize..10,
        seed_vals in vec(0i32..1000, 24),
        mask in vec(any::<bool>(), 12),
    ) {
        let ps = params(k);
        let points = int_points(n_points, &seed_vals);
        let g = SoftSet::finite(&ps, 2, vec![points; k]).unwrap();
        let f = subset_by_mask(&g, &vec![mask; k]);
        prop_assume!(matches!(
            f.relate(&g, DEFAULT_TOL).unwrap(),
            SetRelation::Subset | SetRelation::Equal
        ));
        let first_members: Option<Vec<Vec<f64>>> = (0..k)
            .map(|i| f.finite_at(i).unwrap().first().cloned())
            .collect();
        prop_assume!(first_members.is_some());
        let x = SoftVector::new(&ps, first_members.unwrap()).unwrap();
        prop_assert!(f.contains_element(&x, DEFAULT_TOL).unwrap());
        prop_assert!(g.contains_element(&x, DEFAULT_TOL).unwrap());
    }

    // α(F+G) = αF + αG on finite soft sets (integer data: exact equality).
    #[test]
    fn scaling_distributes_over_sum(
        k in 1usize..4,
        alpha in -4i32..5,
        pts_f in vec(vec(-4i32..5, 2), 1..5),
        pts_g in vec(vec(-4i32..5, 2), 1..5),
    ) {
        let ps = params(k);
        let to_f64 = |pts: &Vec<Vec<i32>>| -> Vec<Vec<f64>> {
            pts.iter().map(|p| p.iter().map(|&x| f64::from(x)).collect()).collect()
        };
        let f = SoftSet::finite(&ps, 2, vec![to_f64(&pts_f); k]).unwrap();
        let g = SoftSet::finite(&ps, 2, vec![to_f64(&pts_g); k]).unwrap();
        let alpha = f64::from(alpha);

        let lhs = scale_soft_set(alpha, &sum_soft_sets(&[f.clone(), g.clone()]).unwrap());
        let rhs = sum_soft_sets(&[scale_soft_set(alpha, &f), scale_soft_set(alpha, &g)]).unwrap();
        prop_assert_eq!(lhs.relate(&rhs, 0.0).unwrap(), SetRelation::Equal);
    }

    // Soft independence reduces to per-parameter crisp independence, and
    // dependence witnesses annihilate after zero-padding.
    #[test]
    fn independence_reduces_per_parameter(
        k in 1usize..4,
        m in 1usize..5,
        n in 1usize..5,
        entries in vec(-3i32..4, 64),
        force_dependent in any::<bool>(),
    ) {
        let ps = params(k);
        let mut values: Vec<Vec<Vec<f64>>> = (0..m)
            .map(|v| {
                (0..k)
                    .map(|lam| {
                        (0..n)
                            .map(|j| f64::from(entries[(v * 17 + lam * 5 + j) % entries.len()]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        if force_dependent && m >= 2 {
            // make the last vector an exact combination at parameter 0
            let mut combo = vec![0.0; n];
            for v in values.iter().take(m - 1) {
                for (j, x) in v[0].iter().enumerate() {
                    combo[j] += 2.0 * x;
                }
            }
            values[m - 1][0] = combo;
        }
        let vectors: Vec<SoftVector> = values
            .into_iter()
            .map(|per_label| SoftVector::new(&ps, per_label).unwrap())
            .collect();
        let verdict = is_linearly_independent(&vectors, DEFAULT_TOL).unwrap();
        let oracle = (0..k).all(|i| {
            let cols: Vec<Vec<f64>> = vectors.iter().map(|v| v.at(i).to_vec()).collect();
            oracles::ge_rank(&cols, n, DEFAULT_TOL) == m
        });
        prop_assert_eq!(verdict.independent, oracle);

        if !verdict.independent {
            // zero-padded soft scalars: c̃ᵢ(λ_w) = cᵢ, 0 elsewhere
            let lam = ps.index_of(verdict.witness_parameter.as_deref().unwrap()).unwrap();
            let coeffs = verdict.witness_coefficients.unwrap();
            let soft_coeffs: Vec<SoftReal> = coeffs
                .iter()
                .map(|&c| SoftReal::from_fn(&ps, |i, _| if i == lam { c } else { 0.0 }))
                .collect();
            let combo = SoftVector::linear_combination(&soft_coeffs, &vectors).unwrap();
            let scale = vectors
                .iter()
                .flat_map(|v| v.at(lam).iter())
                .fold(1.0f64, |mx, &x| mx.max(x.abs()));
            prop_assert!(combo.is_null(1e-8 * scale));
            prop_assert!(coeffs.iter().any(|&c| c != 0.0));
        }
    }

    // 0̄·α̃ = Θ, k̃·Θ = Θ, (−1̄)·α̃ = −α̃, exactly.
    #[test]
    fn null_vector_algebra(
        k in 1usize..5,
        n in 1usize..5,
        coords in vec(-100.0f64..100.0, 32),
        scalar in -10.0f64..10.0,
    ) {
        let ps = params(k);
        let alpha = SoftVector::from_fn(&ps, n, |i, _| {
            (0..n).map(|j| coords[(i * 7 + j) % coords.len()]).collect()
        })
        .unwrap();
        let theta = SoftVector::null(&ps, n);
        let kbar = SoftReal::constant(&ps, scalar);

        prop_assert_eq!(alpha.scale_soft(&SoftReal::zero(&ps)).unwrap(), theta.clone());
        prop_assert_eq!(theta.scale_soft(&kbar).unwrap(), theta);
        prop_assert_eq!(
            alpha.scale_soft(&SoftReal::constant(&ps, -1.0)).unwrap(),
            alpha.neg()
        );
    }

    // Norm decomposition: agreement at a parameter forces equal norm there.
    #[test]
    fn norm_decomposition_is_pointwise(
        k in 1usize..5,
        n in 1usize..5,
        patch in 0usize..5,
        desc_choice in 0u8..12,
        coords in vec(-5.0f64..5.0, 64),
    ) {
        let ps = params(k);
        let patch = patch % k;
        let fam = NormFamily::uniform(&ps, n, descriptor(desc_choice, n)).unwrap();
        let x = SoftVector::from_fn(&ps, n, |i, _| {
            (0..n).map(|j| coords[(i * 11 + j) % coords.len()]).collect()
        })
        .unwrap();
        let y = SoftVector::from_fn(&ps, n, |i, _| {
            if i == patch {
                x.at(patch).to_vec()
            } else {
                (0..n).map(|j| coords[(i * 13 + j + 32) % coords.len()]).collect()
            }
        })
        .unwrap();
        let nx = fam.eval(&x).unwrap();
        let ny = fam.eval(&y).unwrap();
        prop_assert_eq!(nx.at(patch), ny.at(patch));
    }

    // d(α̃x̃, α̃ỹ) = |α̃|·d(x̃, ỹ) to 1e−12 relative.
    #[test]
    fn homogeneous_translation_invariance(
        k in 1usize..4,
        n in 1usize..5,
        desc_choice in 0u8..12,
        coords in vec(-5.0f64..5.0, 64),
        alphas in vec(-3.0f64..3.0, 8),
    ) {
        let ps = params(k);
        let fam = NormFamily::uniform(&ps, n, descriptor(desc_choice, n)).unwrap();
        let x = SoftVector::from_fn(&ps, n, |i, _| {
            (0..n).map(|j| coords[(i * 7 + j) % coords.len()]).collect()
        })
        .unwrap();
        let y = SoftVector::from_fn(&ps, n, |i, _| {
            (0..n).map(|j| coords[(i * 5 + j + 17) % coords.len()]).collect()
        })
        .unwrap();
        let alpha = SoftReal::from_fn(&ps, |i, _| alphas[i % alphas.len()]);
        let lhs = fam
            .metric(&x.scale_soft(&alpha).unwrap(), &y.scale_soft(&alpha).unwrap())
            .unwrap();
        let rhs = alpha.abs().mul(&fam.metric(&x, &y).unwrap()).unwrap();
        for i in 0..k {
            let err = (lhs.at(i) - rhs.at(i)).abs();
            prop_assert!(err <= 1e-12 * rhs.at(i).abs().max(1.0), "err {err} at {i}");
        }
    }

    // Sampled subspace criterion agrees with pure per-parameter rank
    // inclusion on generated subspace pairs.
    #[test]
    fn subspace_criterion_matches_rank_inclusion(
        k in 1usize..3,
        n in 2usize..5,
        kg in 1usize..4,
        kf in 1usize..4,
        entries in vec(-3i32..4, 64),
        nest in any::<bool>(),
    ) {
        let ps = params(k);
        let raw = |off: usize, count: usize| -> Vec<Vec<Vec<f64>>> {
            (0..k)
                .map(|lam| {
                    (0..count)
                        .map(|c| {
                            (0..n)
                                .map(|j| f64::from(entries[(off + lam * 13 + c * 7 + j) % entries.len()]))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        };
        let f = SoftVectorSpace::new(&ps, n, raw(0, kf)).unwrap();
        let g = if nest {
            // G spanned by vectors of F: inclusion holds by construction
            let bases = (0..k)
                .map(|lam| {
                    let fb = f.basis_at(lam);
                    fb.iter().take(kg.min(fb.len())).cloned().collect()
                })
                .collect();
            SoftVectorSpace::new(&ps, n, bases).unwrap()
        } else {
            SoftVectorSpace::new(&ps, n, raw(29, kg)).unwrap()
        };
        let claimed = is_soft_subspace(&g, &f, 8, 3).unwrap();
        let rank_inclusion = f.includes(&g, DEFAULT_TOL).unwrap();
        prop_assert_eq!(claimed, rank_inclusion);
    }
}

// Two accepted limits at the same (N, tol) sit within 2·tol of each other.
#[test]
fn limit_window_uniqueness() {
    let ps = params(3);
    let fam = NormFamily::uniform(&ps, 2, NormDescriptor::P2).unwrap();
    let base = SoftVector::constant(&ps, [0.3, -1.2]).unwrap();
    let slope = SoftVector::constant(&ps, [1.0, 0.5]).unwrap();
    let seq = SequenceSource::AffineInvN {
        base: base.clone(),
        slope,
    };
    let tol = 1e-3;
    let n = 100_000;
    let shift = SoftVector::constant(&ps, [4e-4, -3e-4]).unwrap();
    let other = base.add(&shift).unwrap();

    let v1 = check_convergence(&fam, &seq, Some(&base), n, tol).unwrap();
    let v2 = check_convergence(&fam, &seq, Some(&other), n, tol).unwrap();
    assert_eq!(v1.status, ConvergenceStatus::Converged);
    assert_eq!(v2.status, ConvergenceStatus::Converged);
    let d = fam.metric(&base, &other).unwrap();
    assert!(d.values().iter().all(|&x| x < 2.0 * tol));
}

// Convergent ⇒ Cauchy at 2·tol ⇒ finite bound, on generated sequences.
#[test]
fn convergent_implies_cauchy_implies_bounded() {
    let ps = params(4);
    let fam = NormFamily::uniform(&ps, 3, NormDescriptor::PInf).unwrap();
    for case in 0..25 {
        let s = 0.1 + 0.07 * case as f64;
        let base = SoftVector::constant(&ps, [s, -s, 0.5]).unwrap();
        let slope = SoftVector::constant(&ps, [1.0, s, -0.5]).unwrap();
        let seq = SequenceSource::AffineInvN {
            base: base.clone(),
            slope,
        };
        let tol = 1e-2;
        let verdict = check_convergence(&fam, &seq, Some(&base), 10_000, tol).unwrap();
        assert_eq!(verdict.status, ConvergenceStatus::Converged);
        let report = check_cauchy_bounded(&fam, &seq, 10_000, 2.0 * tol).unwrap();
        assert!(report.cauchy && report.bounded);
        assert!(report.bound.values().iter().all(|b| b.is_finite()));
    }
}

// Basis-expansion replay of finite-dimensional completeness: coefficient
// sequences α_j + 1/m reconstruct the expansion of the limit.
#[test]
fn coefficient_sequences_reconstruct_limit() {
    let ps = params(3);
    let n = 3;
    let fam = NormFamily::uniform(&ps, n, NormDescriptor::P2).unwrap();
    let alphas = [0.7, -1.3, 2.1];
    let basis: Vec<SoftVector> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            SoftVector::constant(&ps, e).unwrap()
        })
        .collect();
    // y_m = Σ (α_j + 1/m) e_j = (Σ α_j e_j) + (1/m) Σ e_j
    let target: Vec<f64> = alphas.to_vec();
    let base = SoftVector::constant(&ps, target.clone()).unwrap();
    let slope = SoftVector::constant(&ps, [1.0, 1.0, 1.0]).unwrap();
    let seq = SequenceSource::AffineInvN {
        base: base.clone(),
        slope,
    };
    let limit = construct_limit(&fam, &seq, 10_000_000, 1e-5).unwrap();
    // recovered coefficients are the coordinates in the constant basis
    for (j, &alpha) in alphas.iter().enumerate() {
        for i in 0..ps.len() {
            assert!((limit.at(i)[j] - alpha).abs() < 1e-6);
        }
    }
    let recon = SoftVector::linear_combination(
        &alphas
            .iter()
            .map(|&a| SoftReal::constant(&ps, a))
            .collect::<Vec<_>>(),
        &basis,
    )
    .unwrap();
    let err = fam.metric(&limit, &recon).unwrap();
    assert!(err.values().iter().all(|&e| e < 1e-5));
}

// 100 random (family, center, radius) triples: open and closed balls are
// convex on samples, with zero counterexamples.
#[test]
fn random_balls_are_convex_on_samples() {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xBA11);
    for case in 0..100u64 {
        let k = rng.gen_range(1..=3);
        let ps = params(k);
        let dim = rng.gen_range(2..=3);
        let fam = NormFamily::uniform(&ps, dim, descriptor(rng.gen_range(0..12), dim)).unwrap();
        let center = SoftVector::new(
            &ps,
            (0..k)
                .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect(),
        )
        .unwrap();
        let radius = SoftReal::from_fn(&ps, |_, _| rng.gen_range(0.5..2.0));
        for kind in [BallKind::Open, BallKind::Closed] {
            let region = SoftRegion::ball(
                fam.clone(),
                BallSpec::new(center.clone(), radius.clone(), kind).unwrap(),
            )
            .unwrap();
            let report = check_convex(&region, 10, 0x1000 + case, DEFAULT_TOL).unwrap();
            assert!(
                report.convex_on_samples,
                "case {case} {kind:?}: {:?}",
                report.counterexample
            );
        }
    }
}

// If the constituents pass, so does the intersection region.
#[test]
fn intersection_preserves_sampled_convexity() {
    let ps = params(2);
    let fam = NormFamily::uniform(&ps, 2, NormDescriptor::P1).unwrap();
    let b1 = SoftRegion::ball(
        fam.clone(),
        BallSpec::new(
            SoftVector::null(&ps, 2),
            SoftReal::constant(&ps, 1.5),
            BallKind::Closed,
        )
        .unwrap(),
    )
    .unwrap();
    let b2 = SoftRegion::ball(
        fam,
        BallSpec::new(
            SoftVector::constant(&ps, [0.5, 0.5]).unwrap(),
            SoftReal::constant(&ps, 1.0),
            BallKind::Closed,
        )
        .unwrap(),
    )
    .unwrap();
    for r in [&b1, &b2] {
        assert!(check_convex(r, 40, 7, DEFAULT_TOL).unwrap().convex_on_samples);
    }
    let inter = intersect_regions(vec![b1, b2]).unwrap();
    assert!(check_convex(&inter, 40, 8, DEFAULT_TOL)
        .unwrap()
        .convex_on_samples);
}

// Closure surrogate: limits of member sequences of a closed ball stay
// tol-members (sequences drive toward boundary points).
#[test]
fn closed_ball_limits_remain_members() {
    let ps = params(2);
    let fam = NormFamily::uniform(&ps, 2, NormDescriptor::P2).unwrap();
    let center = SoftVector::constant(&ps, [0.25, -0.5]).unwrap();
    let radius = SoftReal::constant(&ps, 1.25);
    let ball = BallSpec::new(center.clone(), radius.clone(), BallKind::Closed).unwrap();
    let region = SoftRegion::ball(fam.clone(), ball).unwrap();

    for (dx, dy) in [(1.0, 0.0), (0.6, -0.8), (-0.707, 0.707)] {
        // boundary point y* = center + r·u with ‖u‖ = 1
        let boundary = center
            .add(&SoftVector::constant(&ps, [dx, dy]).unwrap().scale(1.25))
            .unwrap();
        // members x_n = y* + (1/n)(center − y*) march out to the boundary
        let seq = SequenceSource::AffineInvN {
            base: boundary.clone(),
            slope: center.sub(&boundary).unwrap(),
        };
        for n in [2u64, 5, 50, 1000] {
            assert!(region.contains(&seq.term(n).unwrap(), DEFAULT_TOL).unwrap());
        }
        let limit = construct_limit(&fam, &seq, 1_000_000, 1e-3).unwrap();
        assert!(region.contains(&limit, 1e-4).unwrap());
        assert!(fam
            .metric(&limit, &boundary)
            .unwrap()
            .values()
            .iter()
            .all(|&e| e < 1e-4));
    }
}

// Relative norm: axioms survive restriction to a soft subspace.
#[test]
fn relative_norm_keeps_axioms() {
    use softlin::norm::verify_norm_axioms_in;
    let ps = params(3);
    let fam = NormFamily::uniform(&ps, 4, NormDescriptor::PInf).unwrap();
    let space = SoftVectorSpace::new(
        &ps,
        4,
        vec![
            vec![vec![1.0, 0.0, 1.0, 0.0], vec![0.0, 1.0, 0.0, -1.0]];
            3
        ],
    )
    .unwrap();
    let report = verify_norm_axioms_in(&fam, &space, 2000, 17, 1e-9).unwrap();
    assert!(report.passed(), "{:?}", report.violations);
}
