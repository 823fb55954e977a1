//! Scene documents: the JSON surface of the batch verifier. A scene declares
//! a parameter list, an ambient dimension, named objects, and an ordered
//! task list. Objects may reference earlier objects by name; tasks reference
//! objects by name.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use softlin::convex::SoftRegion;
use softlin::norm::{BallKind, BallSpec, NormDescriptor, NormFamily, PExponent};
use softlin::seq::{ScalarSequence, SequenceSource};
use softlin::{ParameterSet, SoftReal, SoftSet, SoftVector};

pub const SCHEMA_VERSION: u32 = 1;

/// A structured scene diagnostic: what failed, and where (object name or
/// task index).
#[derive(Debug)]
pub struct SceneError {
    pub location: String,
    pub message: String,
}

impl SceneError {
    fn new(location: impl Into<String>, message: impl fmt::Display) -> Self {
        SceneError {
            location: location.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scene error at {}: {}", self.location, self.message)
    }
}

impl std::error::Error for SceneError {}

type SceneResult<T> = Result<T, SceneError>;

// ---------------------------------------------------------------------------
// document DTOs (serde surface, round-trippable)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SceneFile {
    pub schema: u32,
    pub parameters: Vec<String>,
    pub dimension: usize,
    #[serde(default)]
    pub objects: OrderedObjects,
    #[serde(default)]
    pub tasks: Vec<TaskDecl>,
}

/// Insertion-ordered object map that rejects duplicate names at parse time.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct OrderedObjects(pub IndexMap<String, ObjectDecl>);

impl<'de> Deserialize<'de> for OrderedObjects {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: Deserializer<'de>,
    {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = OrderedObjects;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map of object declarations")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = IndexMap::new();
                while let Some((name, decl)) = map.next_entry::<String, ObjectDecl>()? {
                    if out.insert(name.clone(), decl).is_some() {
                        return Err(serde::de::Error::custom(format!(
                            "duplicate object name {name:?}"
                        )));
                    }
                }
                Ok(OrderedObjects(out))
            }
        }
        deserializer.deserialize_map(V)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectDecl {
    SoftReal {
        values: IndexMap<String, f64>,
    },
    SoftVector {
        values: IndexMap<String, Vec<f64>>,
    },
    SoftSet {
        kind: SetKindDecl,
        #[serde(skip_serializing_if = "Option::is_none")]
        elements: Option<IndexMap<String, Vec<Vec<f64>>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        basis: Option<IndexMap<String, Vec<Vec<f64>>>>,
    },
    NormFamily {
        norms: IndexMap<String, NormDecl>,
    },
    Sequence {
        rule: RuleDecl,
    },
    Region {
        region: RegionDecl,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SetKindDecl {
    Finite,
    Subspace,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NormDecl {
    /// "1", "2" or "inf"
    pub p: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleDecl {
    /// x_n = value
    Constant { value: String },
    /// x_n = base + (1/n)·slope
    AffineInvN { base: String, slope: String },
    /// x_n = base + (−1)ⁿ·amplitude
    Alternating { base: String, amplitude: String },
    Sum { terms: Vec<RuleDecl> },
    Scaled {
        scalar: ScalarRuleDecl,
        sequence: Box<RuleDecl>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarRuleDecl {
    Constant { value: String },
    AffineInvN { base: String, slope: String },
    Alternating { base: String, amplitude: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionDecl {
    OpenBall {
        family: String,
        center: String,
        radius: NumOrName,
    },
    ClosedBall {
        family: String,
        center: String,
        radius: NumOrName,
    },
    Sphere {
        family: String,
        center: String,
        radius: NumOrName,
    },
    Subspace { set: String },
    Intersection { regions: Vec<RegionDecl> },
}

/// A literal number (constant lift) or the name of a declared soft real.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumOrName {
    Num(f64),
    Name(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskDecl {
    NormAxioms {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family: String,
    },
    MetricAxioms {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family: String,
    },
    Independence {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        vectors: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect: Option<String>,
    },
    IndependenceConstant {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family: String,
        vectors: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        grid: Option<u32>,
    },
    Equivalence {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family1: String,
        family2: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect_a: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect_b: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect_tol: Option<f64>,
    },
    Riesz {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family: String,
        subspace: String,
        eps: NumOrName,
    },
    Convergence {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family: String,
        sequence: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        candidate: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect: Option<String>,
    },
    Cauchy {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family: String,
        sequence: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect_cauchy: Option<bool>,
    },
    Limit {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        family: String,
        sequence: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect: Option<String>,
    },
    Convexity {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        region: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        trials: Option<u32>,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect: Option<String>,
    },
    SetAlgebra {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        op: String,
        f: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        g: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        universe: Option<String>,
    },
    SubspaceCheck {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<String>,
        candidate: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        ambient: Option<String>,
    },
}

impl TaskDecl {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskDecl::NormAxioms { .. } => "norm_axioms",
            TaskDecl::MetricAxioms { .. } => "metric_axioms",
            TaskDecl::Independence { .. } => "independence",
            TaskDecl::IndependenceConstant { .. } => "independence_constant",
            TaskDecl::Equivalence { .. } => "equivalence",
            TaskDecl::Riesz { .. } => "riesz",
            TaskDecl::Convergence { .. } => "convergence",
            TaskDecl::Cauchy { .. } => "cauchy",
            TaskDecl::Limit { .. } => "limit",
            TaskDecl::Convexity { .. } => "convexity",
            TaskDecl::SetAlgebra { .. } => "set_algebra",
            TaskDecl::SubspaceCheck { .. } => "subspace_check",
        }
    }

    pub fn id(&self) -> Option<&str> {
        match self {
            TaskDecl::NormAxioms { id, .. }
            | TaskDecl::MetricAxioms { id, .. }
            | TaskDecl::Independence { id, .. }
            | TaskDecl::IndependenceConstant { id, .. }
            | TaskDecl::Equivalence { id, .. }
            | TaskDecl::Riesz { id, .. }
            | TaskDecl::Convergence { id, .. }
            | TaskDecl::Cauchy { id, .. }
            | TaskDecl::Limit { id, .. }
            | TaskDecl::Convexity { id, .. }
            | TaskDecl::SetAlgebra { id, .. }
            | TaskDecl::SubspaceCheck { id, .. } => id.as_deref(),
        }
    }
}

// ---------------------------------------------------------------------------
// validated scene
// ---------------------------------------------------------------------------

/// One resolved object of the scene.
#[derive(Debug, Clone)]
pub enum EngineObject {
    Real(SoftReal),
    Vector(SoftVector),
    Set(SoftSet),
    Family(NormFamily),
    Sequence(SequenceSource),
    Region(SoftRegion),
}

impl EngineObject {
    pub fn kind(&self) -> &'static str {
        match self {
            EngineObject::Real(_) => "soft_real",
            EngineObject::Vector(_) => "soft_vector",
            EngineObject::Set(_) => "soft_set",
            EngineObject::Family(_) => "norm_family",
            EngineObject::Sequence(_) => "sequence",
            EngineObject::Region(_) => "region",
        }
    }
}

/// A parsed, reference-checked, dimension-checked scene.
pub struct SceneDocument {
    pub file: SceneFile,
    pub params: Arc<ParameterSet>,
    pub dimension: usize,
    pub objects: IndexMap<String, EngineObject>,
}

/// Parses and validates a scene from JSON text.
pub fn parse_scene_str(text: &str) -> SceneResult<SceneDocument> {
    let file: SceneFile = serde_json::from_str(text)
        .map_err(|e| SceneError::new(format!("line {}", e.line()), e))?;
    validate(file)
}

fn validate(file: SceneFile) -> SceneResult<SceneDocument> {
    if file.schema != SCHEMA_VERSION {
        return Err(SceneError::new(
            "schema",
            format!("unsupported schema version {} (expected {SCHEMA_VERSION})", file.schema),
        ));
    }
    let params = ParameterSet::new(file.parameters.clone())
        .map_err(|e| SceneError::new("parameters", e))?;
    if file.dimension == 0 {
        return Err(SceneError::new("dimension", "must be >= 1"));
    }
    let dimension = file.dimension;

    let mut objects: IndexMap<String, EngineObject> = IndexMap::new();
    for (name, decl) in &file.objects.0 {
        let obj = build_object(name, decl, &params, dimension, &objects)?;
        objects.insert(name.clone(), obj);
    }

    for (index, task) in file.tasks.iter().enumerate() {
        check_task_references(index, task, &objects)?;
    }

    Ok(SceneDocument {
        params,
        dimension,
        objects,
        file,
    })
}

fn labelled_values<T: Clone>(
    loc: &str,
    params: &Arc<ParameterSet>,
    map: &IndexMap<String, T>,
) -> SceneResult<Vec<T>> {
    for key in map.keys() {
        if !params.contains(key) {
            return Err(SceneError::new(
                loc,
                format!("unknown parameter label {key:?}"),
            ));
        }
    }
    params
        .labels()
        .map(|l| {
            map.get(l).cloned().ok_or_else(|| {
                SceneError::new(loc, format!("missing value for parameter {l:?}"))
            })
        })
        .collect()
}

fn lookup<'a>(
    loc: &str,
    objects: &'a IndexMap<String, EngineObject>,
    name: &str,
    want: &'static str,
) -> SceneResult<&'a EngineObject> {
    let obj = objects.get(name).ok_or_else(|| {
        SceneError::new(loc, format!("reference to undeclared object {name:?}"))
    })?;
    let ok = matches!(
        (want, obj),
        ("soft_real", EngineObject::Real(_))
            | ("soft_vector", EngineObject::Vector(_))
            | ("soft_set", EngineObject::Set(_))
            | ("norm_family", EngineObject::Family(_))
            | ("sequence", EngineObject::Sequence(_))
            | ("region", EngineObject::Region(_))
    );
    if !ok {
        return Err(SceneError::new(
            loc,
            format!("object {name:?} is a {}, expected {want}", obj.kind()),
        ));
    }
    Ok(obj)
}

fn get_real(
    loc: &str,
    objects: &IndexMap<String, EngineObject>,
    name: &str,
) -> SceneResult<SoftReal> {
    match lookup(loc, objects, name, "soft_real")? {
        EngineObject::Real(r) => Ok(r.clone()),
        _ => unreachable!(),
    }
}

fn get_vector(
    loc: &str,
    objects: &IndexMap<String, EngineObject>,
    name: &str,
) -> SceneResult<SoftVector> {
    match lookup(loc, objects, name, "soft_vector")? {
        EngineObject::Vector(v) => Ok(v.clone()),
        _ => unreachable!(),
    }
}

fn get_family(
    loc: &str,
    objects: &IndexMap<String, EngineObject>,
    name: &str,
) -> SceneResult<NormFamily> {
    match lookup(loc, objects, name, "norm_family")? {
        EngineObject::Family(f) => Ok(f.clone()),
        _ => unreachable!(),
    }
}

fn resolve_real(
    loc: &str,
    objects: &IndexMap<String, EngineObject>,
    params: &Arc<ParameterSet>,
    v: &NumOrName,
) -> SceneResult<SoftReal> {
    match v {
        NumOrName::Num(x) => Ok(SoftReal::constant(params, *x)),
        NumOrName::Name(name) => get_real(loc, objects, name),
    }
}

fn build_object(
    name: &str,
    decl: &ObjectDecl,
    params: &Arc<ParameterSet>,
    dimension: usize,
    objects: &IndexMap<String, EngineObject>,
) -> SceneResult<EngineObject> {
    let loc = format!("object {name:?}");
    match decl {
        ObjectDecl::SoftReal { values } => {
            let values = labelled_values(&loc, params, values)?;
            SoftReal::new(params, values)
                .map(EngineObject::Real)
                .map_err(|e| SceneError::new(&loc, e))
        }
        ObjectDecl::SoftVector { values } => {
            let values = labelled_values(&loc, params, values)?;
            if let Some(bad) = values.iter().find(|v| v.len() != dimension) {
                return Err(SceneError::new(
                    &loc,
                    format!(
                        "vector of length {} clashes with scene dimension {dimension}",
                        bad.len()
                    ),
                ));
            }
            SoftVector::new(params, values)
                .map(EngineObject::Vector)
                .map_err(|e| SceneError::new(&loc, e))
        }
        ObjectDecl::SoftSet {
            kind,
            elements,
            basis,
        } => {
            let (payload, ctor): (_, fn(_, _, _) -> softlin::Result<SoftSet>) = match kind {
                SetKindDecl::Finite => (
                    elements.as_ref().ok_or_else(|| {
                        SceneError::new(&loc, "finite soft set requires \"elements\"")
                    })?,
                    |p: &Arc<ParameterSet>, d, v| SoftSet::finite(p, d, v),
                ),
                SetKindDecl::Subspace => (
                    basis.as_ref().ok_or_else(|| {
                        SceneError::new(&loc, "subspace soft set requires \"basis\"")
                    })?,
                    |p: &Arc<ParameterSet>, d, v| SoftSet::subspace(p, d, v),
                ),
            };
            let per_label = labelled_values(&loc, params, payload)?;
            for list in &per_label {
                if let Some(bad) = list.iter().find(|v| v.len() != dimension) {
                    return Err(SceneError::new(
                        &loc,
                        format!(
                            "vector of length {} clashes with scene dimension {dimension}",
                            bad.len()
                        ),
                    ));
                }
            }
            ctor(params, dimension, per_label)
                .map(EngineObject::Set)
                .map_err(|e| SceneError::new(&loc, e))
        }
        ObjectDecl::NormFamily { norms } => {
            let decls = labelled_values(&loc, params, norms)?;
            let descriptors = decls
                .iter()
                .map(|d| norm_descriptor(&loc, d))
                .collect::<SceneResult<Vec<_>>>()?;
            NormFamily::new(params, dimension, descriptors)
                .map(EngineObject::Family)
                .map_err(|e| SceneError::new(&loc, e))
        }
        ObjectDecl::Sequence { rule } => {
            build_sequence(&loc, rule, objects).map(EngineObject::Sequence)
        }
        ObjectDecl::Region { region } => {
            build_region(&loc, region, params, objects).map(EngineObject::Region)
        }
    }
}

fn norm_descriptor(loc: &str, decl: &NormDecl) -> SceneResult<NormDescriptor> {
    let p = match decl.p.as_str() {
        "1" => PExponent::One,
        "2" => PExponent::Two,
        "inf" => PExponent::Inf,
        other => {
            return Err(SceneError::new(
                loc,
                format!("unknown norm exponent {other:?} (use \"1\", \"2\" or \"inf\")"),
            ))
        }
    };
    Ok(match (&decl.weights, p) {
        (None, PExponent::One) => NormDescriptor::P1,
        (None, PExponent::Two) => NormDescriptor::P2,
        (None, PExponent::Inf) => NormDescriptor::PInf,
        (Some(w), p) => NormDescriptor::WeightedP {
            p,
            weights: w.clone(),
        },
    })
}

fn build_sequence(
    loc: &str,
    rule: &RuleDecl,
    objects: &IndexMap<String, EngineObject>,
) -> SceneResult<SequenceSource> {
    Ok(match rule {
        RuleDecl::Constant { value } => {
            SequenceSource::Constant(get_vector(loc, objects, value)?)
        }
        RuleDecl::AffineInvN { base, slope } => SequenceSource::AffineInvN {
            base: get_vector(loc, objects, base)?,
            slope: get_vector(loc, objects, slope)?,
        },
        RuleDecl::Alternating { base, amplitude } => SequenceSource::Alternating {
            base: get_vector(loc, objects, base)?,
            amplitude: get_vector(loc, objects, amplitude)?,
        },
        RuleDecl::Sum { terms } => {
            if terms.is_empty() {
                return Err(SceneError::new(loc, "sum rule needs at least one term"));
            }
            let mut acc = build_sequence(loc, &terms[0], objects)?;
            for t in &terms[1..] {
                let next = build_sequence(loc, t, objects)?;
                acc = softlin::seq::combine_add(&acc, &next)
                    .map_err(|e| SceneError::new(loc, e))?;
            }
            acc
        }
        RuleDecl::Scaled { scalar, sequence } => {
            let seq = build_sequence(loc, sequence, objects)?;
            let scalar = match scalar {
                ScalarRuleDecl::Constant { value } => {
                    ScalarSequence::Constant(get_real(loc, objects, value)?)
                }
                ScalarRuleDecl::AffineInvN { base, slope } => ScalarSequence::AffineInvN {
                    base: get_real(loc, objects, base)?,
                    slope: get_real(loc, objects, slope)?,
                },
                ScalarRuleDecl::Alternating { base, amplitude } => ScalarSequence::Alternating {
                    base: get_real(loc, objects, base)?,
                    amplitude: get_real(loc, objects, amplitude)?,
                },
            };
            softlin::seq::combine_scale(&scalar, &seq).map_err(|e| SceneError::new(loc, e))?
        }
    })
}

fn build_region(
    loc: &str,
    decl: &RegionDecl,
    params: &Arc<ParameterSet>,
    objects: &IndexMap<String, EngineObject>,
) -> SceneResult<SoftRegion> {
    match decl {
        RegionDecl::OpenBall {
            family,
            center,
            radius,
        } => build_ball(loc, BallKind::Open, family, center, radius, params, objects),
        RegionDecl::ClosedBall {
            family,
            center,
            radius,
        } => build_ball(loc, BallKind::Closed, family, center, radius, params, objects),
        RegionDecl::Sphere {
            family,
            center,
            radius,
        } => build_ball(loc, BallKind::Sphere, family, center, radius, params, objects),
        RegionDecl::Subspace { set } => {
            let set = match lookup(loc, objects, set, "soft_set")? {
                EngineObject::Set(s) => s.clone(),
                _ => unreachable!(),
            };
            let space = softlin::SoftVectorSpace::from_soft_set(&set)
                .map_err(|e| SceneError::new(loc, e))?;
            Ok(SoftRegion::Subspace(space))
        }
        RegionDecl::Intersection { regions } => {
            if regions.is_empty() {
                return Err(SceneError::new(loc, "intersection needs at least one region"));
            }
            let built = regions
                .iter()
                .map(|r| build_region(loc, r, params, objects))
                .collect::<SceneResult<Vec<_>>>()?;
            softlin::convex::intersect_regions(built).map_err(|e| SceneError::new(loc, e))
        }
    }
}

fn build_ball(
    loc: &str,
    kind: BallKind,
    family: &str,
    center: &str,
    radius: &NumOrName,
    params: &Arc<ParameterSet>,
    objects: &IndexMap<String, EngineObject>,
) -> SceneResult<SoftRegion> {
    let family = get_family(loc, objects, family)?;
    let center = get_vector(loc, objects, center)?;
    let radius = resolve_real(loc, objects, params, radius)?;
    let ball = BallSpec::new(center, radius, kind).map_err(|e| SceneError::new(loc, e))?;
    SoftRegion::ball(family, ball).map_err(|e| SceneError::new(loc, e))
}

fn check_task_references(
    index: usize,
    task: &TaskDecl,
    objects: &IndexMap<String, EngineObject>,
) -> SceneResult<()> {
    let loc = format!("task {index} ({})", task.kind());
    let mut need: Vec<(&str, &'static str)> = Vec::new();
    match task {
        TaskDecl::NormAxioms { family, .. } | TaskDecl::MetricAxioms { family, .. } => {
            need.push((family, "norm_family"));
        }
        TaskDecl::Independence { vectors, .. } => {
            for v in vectors {
                need.push((v, "soft_vector"));
            }
        }
        TaskDecl::IndependenceConstant {
            family, vectors, ..
        } => {
            need.push((family, "norm_family"));
            for v in vectors {
                need.push((v, "soft_vector"));
            }
        }
        TaskDecl::Equivalence {
            family1, family2, ..
        } => {
            need.push((family1, "norm_family"));
            need.push((family2, "norm_family"));
        }
        TaskDecl::Riesz {
            family,
            subspace,
            eps,
            ..
        } => {
            need.push((family, "norm_family"));
            need.push((subspace, "soft_set"));
            if let NumOrName::Name(n) = eps {
                need.push((n, "soft_real"));
            }
        }
        TaskDecl::Convergence {
            family,
            sequence,
            candidate,
            ..
        } => {
            need.push((family, "norm_family"));
            need.push((sequence, "sequence"));
            if let Some(c) = candidate {
                need.push((c, "soft_vector"));
            }
        }
        TaskDecl::Cauchy {
            family, sequence, ..
        } => {
            need.push((family, "norm_family"));
            need.push((sequence, "sequence"));
        }
        TaskDecl::Limit {
            family,
            sequence,
            expect,
            ..
        } => {
            need.push((family, "norm_family"));
            need.push((sequence, "sequence"));
            if let Some(e) = expect {
                need.push((e, "soft_vector"));
            }
        }
        TaskDecl::Convexity { region, .. } => {
            need.push((region, "region"));
        }
        TaskDecl::SetAlgebra {
            op, f, g, universe, ..
        } => {
            need.push((f, "soft_set"));
            if let Some(g) = g {
                need.push((g, "soft_set"));
            }
            if let Some(u) = universe {
                need.push((u, "soft_set"));
            }
            match op.as_str() {
                "union" | "intersection" | "difference" | "complement" | "de_morgan" => {}
                other => {
                    return Err(SceneError::new(
                        &loc,
                        format!("unknown set_algebra op {other:?}"),
                    ))
                }
            }
        }
        TaskDecl::SubspaceCheck {
            candidate, ambient, ..
        } => {
            need.push((candidate, "soft_set"));
            if let Some(a) = ambient {
                need.push((a, "soft_set"));
            }
        }
    }
    for (name, want) in need {
        lookup(&loc, objects, name, want)?;
    }
    Ok(())
}

/// Serializes a scene back to its normal form (pretty JSON, stable order).
pub fn emit_scene(file: &SceneFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("scene serialization");
    out.push('\n');
    out
}
