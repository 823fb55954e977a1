//! Task dispatch: runs every task of a validated scene against the library
//! and collects one report entry per task, in input order.

use std::time::Instant;

use indexmap::IndexMap;
use serde_json::{json, Value};
use softlin::convex::check_convex;
use softlin::norm::{
    equivalence_constants, independence_constant, riesz_witness, subspace_distance,
    verify_metric_axioms, verify_norm_axioms, AxiomReport, NormFamily,
};
use softlin::seq::{check_cauchy_bounded, check_convergence, construct_limit, ConvergenceStatus};
use softlin::{
    is_linearly_independent, is_soft_subspace, is_soft_vector_space, SetRelation, SoftReal,
    SoftSet, SoftVector, SoftVectorSpace,
};

use crate::report::{soft_real_value, soft_vector_value, OptsEcho, Report, TaskReport, Verdict};
use crate::scene::{EngineObject, NumOrName, SceneDocument, TaskDecl, SCHEMA_VERSION};

pub fn execute(scene: &SceneDocument, opts: OptsEcho, command: &str) -> Report {
    let tasks = scene
        .file
        .tasks
        .iter()
        .enumerate()
        .map(|(index, task)| run_task(scene, opts, index, task))
        .collect();
    Report {
        schema: SCHEMA_VERSION,
        command: command.to_string(),
        opts,
        tasks,
    }
}

fn task_seed(opts: OptsEcho, index: usize) -> u64 {
    opts.seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn run_task(scene: &SceneDocument, opts: OptsEcho, index: usize, task: &TaskDecl) -> TaskReport {
    let id = task
        .id()
        .map(String::from)
        .unwrap_or_else(|| format!("t{index}"));
    let mut report = TaskReport::new(id, task.kind());
    let start = Instant::now();
    if let Err(e) = dispatch(scene, opts, index, task, &mut report) {
        report.verdict = Verdict::Error;
        report.detail = Some(e);
    }
    report.elapsed = start.elapsed();
    report
}

fn get<'a>(scene: &'a SceneDocument, name: &str) -> &'a EngineObject {
    &scene.objects[name] // reference-checked at parse time
}

fn family(scene: &SceneDocument, name: &str) -> NormFamily {
    match get(scene, name) {
        EngineObject::Family(f) => f.clone(),
        _ => unreachable!("type-checked at parse time"),
    }
}

fn vector(scene: &SceneDocument, name: &str) -> SoftVector {
    match get(scene, name) {
        EngineObject::Vector(v) => v.clone(),
        _ => unreachable!("type-checked at parse time"),
    }
}

fn set(scene: &SceneDocument, name: &str) -> SoftSet {
    match get(scene, name) {
        EngineObject::Set(s) => s.clone(),
        _ => unreachable!("type-checked at parse time"),
    }
}

fn axiom_outcome(report: &mut TaskReport, axioms: &AxiomReport) {
    report.values.insert("samples".into(), json!(axioms.samples));
    report
        .values
        .insert("violations".into(), json!(axioms.violations.len()));
    if let Some(v) = axioms.violations.first() {
        report.verdict = Verdict::Violation;
        report.witness = Some(json!({
            "axiom": v.axiom,
            "parameter": v.parameter,
            "sample": v.sample,
            "detail": v.detail,
        }));
    }
}

fn finite_set_value(s: &SoftSet) -> Value {
    let mut map = serde_json::Map::new();
    for (i, label) in s.params().labels().enumerate() {
        let list = s.finite_at(i).expect("finite kind");
        map.insert(label.to_string(), json!(list));
    }
    Value::Object(map)
}

fn dispatch(
    scene: &SceneDocument,
    opts: OptsEcho,
    index: usize,
    task: &TaskDecl,
    out: &mut TaskReport,
) -> Result<(), String> {
    let seed = task_seed(opts, index);
    let err = |e: softlin::SoftError| e.to_string();
    match task {
        TaskDecl::NormAxioms { family: f, .. } => {
            let fam = family(scene, f);
            let axioms = verify_norm_axioms(&fam, opts.samples, seed, opts.tol).map_err(err)?;
            axiom_outcome(out, &axioms);
        }
        TaskDecl::MetricAxioms { family: f, .. } => {
            let fam = family(scene, f);
            let axioms = verify_metric_axioms(&fam, opts.samples, seed, opts.tol).map_err(err)?;
            axiom_outcome(out, &axioms);
        }
        TaskDecl::Independence {
            vectors: names,
            expect,
            ..
        } => {
            let vectors: Vec<SoftVector> = names.iter().map(|n| vector(scene, n)).collect();
            let verdict = is_linearly_independent(&vectors, opts.tol).map_err(err)?;
            out.values
                .insert("independent".into(), json!(verdict.independent));
            if let (Some(p), Some(c)) = (
                &verdict.witness_parameter,
                &verdict.witness_coefficients,
            ) {
                out.witness = Some(json!({
                    "parameter": p,
                    "coefficients": c,
                }));
            }
            if let Some(expect) = expect {
                let got = if verdict.independent {
                    "independent"
                } else {
                    "dependent"
                };
                if got != expect {
                    out.verdict = Verdict::Violation;
                    out.detail = Some(format!("expected {expect}, got {got}"));
                }
            }
        }
        TaskDecl::IndependenceConstant {
            family: f,
            vectors: names,
            grid,
            ..
        } => {
            let fam = family(scene, f);
            let vectors: Vec<SoftVector> = names.iter().map(|n| vector(scene, n)).collect();
            let c = independence_constant(&fam, &vectors, grid.unwrap_or(21)).map_err(err)?;
            out.values.insert("c".into(), soft_real_value(&c));
        }
        TaskDecl::Equivalence {
            family1,
            family2,
            expect_a,
            expect_b,
            expect_tol,
            ..
        } => {
            let f1 = family(scene, family1);
            let f2 = family(scene, family2);
            let ec = equivalence_constants(&f1, &f2, opts.samples, seed).map_err(err)?;
            out.values.insert("a".into(), soft_real_value(&ec.a));
            out.values.insert("b".into(), soft_real_value(&ec.b));
            let tol = expect_tol.unwrap_or(1e-9);
            let mut bad = Vec::new();
            if let Some(a) = expect_a {
                if ec.a.values().iter().any(|&v| (v - a).abs() > tol) {
                    bad.push(format!("a != {a}"));
                }
            }
            if let Some(b) = expect_b {
                if ec.b.values().iter().any(|&v| (v - b).abs() > tol) {
                    bad.push(format!("b != {b}"));
                }
            }
            if !bad.is_empty() {
                out.verdict = Verdict::Violation;
                out.detail = Some(bad.join("; "));
            }
        }
        TaskDecl::Riesz {
            family: f,
            subspace,
            eps,
            ..
        } => {
            let fam = family(scene, f);
            let space =
                SoftVectorSpace::from_soft_set(&set(scene, subspace)).map_err(err)?;
            let eps = match eps {
                NumOrName::Num(x) => SoftReal::constant(&scene.params, *x),
                NumOrName::Name(n) => match get(scene, n) {
                    EngineObject::Real(r) => r.clone(),
                    _ => unreachable!(),
                },
            };
            let y = riesz_witness(&fam, &space, &eps, opts.samples.max(50), seed).map_err(err)?;
            let norm = fam.eval(&y).map_err(err)?;
            let dist = SoftReal::from_fn(&scene.params, |i, _| {
                subspace_distance(&fam, i, y.at(i), space.basis_at(i))
            });
            out.values.insert("witness".into(), soft_vector_value(&y));
            out.values.insert("norm".into(), soft_real_value(&norm));
            out.values.insert("distance".into(), soft_real_value(&dist));
            let unit_ok = norm.values().iter().all(|&v| (v - 1.0).abs() <= 1e-9);
            let far_ok = dist
                .values()
                .iter()
                .zip(eps.values())
                .all(|(&d, &e)| d > 1.0 - e);
            if !(unit_ok && far_ok) {
                out.verdict = Verdict::Violation;
                out.detail = Some("witness bounds not met".into());
            }
        }
        TaskDecl::Convergence {
            family: f,
            sequence,
            candidate,
            n,
            tol,
            expect,
            ..
        } => {
            let fam = family(scene, f);
            let seq = match get(scene, sequence) {
                EngineObject::Sequence(s) => s.clone(),
                _ => unreachable!(),
            };
            let cand = candidate.as_ref().map(|c| vector(scene, c));
            let verdict = check_convergence(
                &fam,
                &seq,
                cand.as_ref(),
                n.unwrap_or(opts.window_n),
                tol.unwrap_or(opts.tol),
            )
            .map_err(err)?;
            let status = status_str(verdict.status);
            out.values.insert("status".into(), json!(status));
            out.values.insert(
                "residual".into(),
                soft_real_value(&verdict.last_residual),
            );
            if let Some(limit) = &verdict.limit {
                out.values.insert("limit".into(), soft_vector_value(limit));
            }
            if let Some(expect) = expect {
                if status != expect {
                    out.verdict = Verdict::Violation;
                    out.detail = Some(format!("expected {expect}, got {status}"));
                }
            }
        }
        TaskDecl::Cauchy {
            family: f,
            sequence,
            n,
            tol,
            expect_cauchy,
            ..
        } => {
            let fam = family(scene, f);
            let seq = match get(scene, sequence) {
                EngineObject::Sequence(s) => s.clone(),
                _ => unreachable!(),
            };
            let r = check_cauchy_bounded(
                &fam,
                &seq,
                n.unwrap_or(opts.window_n),
                tol.unwrap_or(opts.tol),
            )
            .map_err(err)?;
            out.values.insert("cauchy".into(), json!(r.cauchy));
            out.values.insert("bounded".into(), json!(r.bounded));
            out.values.insert("bound".into(), soft_real_value(&r.bound));
            out.values
                .insert("growth_flagged".into(), json!(r.growth_flagged));
            if let Some(expect) = expect_cauchy {
                if r.cauchy != *expect {
                    out.verdict = Verdict::Violation;
                    out.detail = Some(format!("expected cauchy = {expect}, got {}", r.cauchy));
                }
            }
        }
        TaskDecl::Limit {
            family: f,
            sequence,
            n,
            tol,
            expect,
            ..
        } => {
            let fam = family(scene, f);
            let seq = match get(scene, sequence) {
                EngineObject::Sequence(s) => s.clone(),
                _ => unreachable!(),
            };
            let tol = tol.unwrap_or(opts.tol);
            let limit =
                construct_limit(&fam, &seq, n.unwrap_or(opts.window_n), tol).map_err(err)?;
            out.values.insert("limit".into(), soft_vector_value(&limit));
            if let Some(expect) = expect {
                let target = vector(scene, expect);
                let d = fam.metric(&limit, &target).map_err(err)?;
                out.values.insert("error".into(), soft_real_value(&d));
                if d.values().iter().any(|&e| e >= 2.0 * tol) {
                    out.verdict = Verdict::Violation;
                    out.detail = Some(format!("limit differs from {expect:?} beyond 2·tol"));
                }
            }
        }
        TaskDecl::Convexity {
            region,
            trials,
            expect,
            ..
        } => {
            let region = match get(scene, region) {
                EngineObject::Region(r) => r.clone(),
                _ => unreachable!(),
            };
            let r = check_convex(&region, trials.unwrap_or(100), seed, opts.tol).map_err(err)?;
            out.values
                .insert("convex_on_samples".into(), json!(r.convex_on_samples));
            out.values.insert("trials".into(), json!(r.trials));
            out.values
                .insert("segment_checks".into(), json!(r.segment_checks));
            if let Some(ce) = &r.counterexample {
                out.witness = Some(json!({
                    "x1": soft_vector_value(&ce.x1),
                    "x2": soft_vector_value(&ce.x2),
                    "t": soft_real_value(&ce.t),
                }));
            }
            let expect = expect.as_deref().unwrap_or("convex");
            let ok = match expect {
                "convex" => r.convex_on_samples,
                "counterexample" => !r.convex_on_samples,
                other => return Err(format!("unknown convexity expectation {other:?}")),
            };
            if !ok {
                out.verdict = Verdict::Violation;
                out.detail = Some(format!(
                    "expected {expect}, got convex_on_samples = {}",
                    r.convex_on_samples
                ));
            }
        }
        TaskDecl::SetAlgebra {
            op, f, g, universe, ..
        } => {
            let fs = set(scene, f);
            let gs = g.as_ref().map(|g| set(scene, g));
            let us = universe.as_ref().map(|u| set(scene, u));
            let need_g = || gs.clone().ok_or_else(|| format!("{op} requires \"g\""));
            let need_u = || {
                us.clone()
                    .ok_or_else(|| format!("{op} requires \"universe\""))
            };
            match op.as_str() {
                "union" => {
                    let r = fs.union(&need_g()?).map_err(err)?;
                    out.values.insert("result".into(), finite_set_value(&r));
                }
                "intersection" => {
                    let r = fs.intersection(&need_g()?).map_err(err)?;
                    out.values.insert("result".into(), finite_set_value(&r));
                }
                "difference" => {
                    let r = fs.difference(&need_g()?).map_err(err)?;
                    out.values.insert("result".into(), finite_set_value(&r));
                }
                "complement" => {
                    let r = fs.complement(&need_u()?).map_err(err)?;
                    out.values.insert("result".into(), finite_set_value(&r));
                }
                "de_morgan" => {
                    let g = need_g()?;
                    let u = need_u()?;
                    let c = |s: &SoftSet| s.complement(&u);
                    let first = c(&fs.union(&g).map_err(err)?).map_err(err)?.relate(
                        &c(&fs).map_err(err)?.intersection(&c(&g).map_err(err)?).map_err(err)?,
                        opts.tol,
                    )
                    .map_err(err)?
                        == SetRelation::Equal;
                    let second = c(&fs.intersection(&g).map_err(err)?).map_err(err)?.relate(
                        &c(&fs).map_err(err)?.union(&c(&g).map_err(err)?).map_err(err)?,
                        opts.tol,
                    )
                    .map_err(err)?
                        == SetRelation::Equal;
                    out.values.insert("union_complement".into(), json!(first));
                    out.values
                        .insert("intersection_complement".into(), json!(second));
                    if !(first && second) {
                        out.verdict = Verdict::Violation;
                        out.detail = Some("a De Morgan identity failed".into());
                    }
                }
                other => return Err(format!("unknown set_algebra op {other:?}")),
            }
        }
        TaskDecl::SubspaceCheck {
            candidate, ambient, ..
        } => {
            let cand = set(scene, candidate);
            let is_space = is_soft_vector_space(&cand, opts.tol);
            out.values
                .insert("is_soft_vector_space".into(), json!(is_space));
            let mut ok = is_space;
            if let Some(ambient) = ambient {
                let amb = SoftVectorSpace::from_soft_set(&set(scene, ambient)).map_err(err)?;
                let cand_space = SoftVectorSpace::from_soft_set(&cand).map_err(err)?;
                let is_sub =
                    is_soft_subspace(&cand_space, &amb, opts.samples.min(64), seed).map_err(err)?;
                out.values.insert("is_soft_subspace".into(), json!(is_sub));
                ok = ok && is_sub;
            }
            if !ok {
                out.verdict = Verdict::Violation;
                out.detail = Some("subspace check failed".into());
            }
        }
    }
    let _ = index;
    Ok(())
}

fn status_str(status: ConvergenceStatus) -> &'static str {
    match status {
        ConvergenceStatus::Converged => "converged",
        ConvergenceStatus::CauchyOnly => "cauchy_only",
        ConvergenceStatus::DivergentWindow => "divergent_window",
        ConvergenceStatus::Inconclusive => "inconclusive",
    }
}

/// Converts the built-in battery into a report (one entry per criterion).
pub fn selftest_report(seed: u64, opts: OptsEcho) -> Report {
    let outcomes = softlin::selftest::run_battery(seed);
    let tasks = outcomes
        .into_iter()
        .map(|c| {
            let mut values = IndexMap::new();
            values.insert("criterion".to_string(), json!(c.index));
            values.insert("detail".to_string(), json!(c.detail));
            TaskReport {
                id: format!("criterion-{:02}", c.index),
                kind: c.name.to_string(),
                verdict: if c.passed {
                    Verdict::Pass
                } else {
                    Verdict::Violation
                },
                values,
                witness: None,
                detail: None,
                elapsed: c.elapsed,
            }
        })
        .collect();
    Report {
        schema: SCHEMA_VERSION,
        command: "selftest".to_string(),
        opts,
        tasks,
    }
}
