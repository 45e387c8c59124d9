//! Command dispatch: resolves inputs, runs the requested checks, and
//! assembles order-stable reports.

use std::path::PathBuf;

use corrcheck_core::adjdual::{
    dual_morphism, duality_data, generator_adjunction, span_left_adjoint, span_right_adjoint,
};
use corrcheck_core::fib::{
    arrow_fibration, classify_fibration, cocyl, grothendieck_two_sided, span_fibration,
    FiberedFunctor,
};
use corrcheck_core::fincat::{pullback, Cospan, FinCategory, Functor, Mor, Obj};
use corrcheck_core::spans::{compose_spans, reverse_span, PullbackChoice, Span};
use corrcheck_core::twisted::{segal_check, SegalOutcome};
use corrcheck_core::twocat::bc_square_in_corr;
use corrcheck_core::{fixtures, Caps, CatError};
use thiserror::Error;

use crate::bundle::{Bundle, BundleError};
use crate::report::{CheckReport, SuiteReport};
use crate::suite;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 2,
            RunError::Cap(_) => 3,
        }
    }
}

impl From<CatError> for RunError {
    fn from(e: CatError) -> Self {
        match e {
            CatError::CapExceeded { .. } | CatError::Overflow { .. } => RunError::Cap(e.to_string()),
            other => RunError::Input(other.to_string()),
        }
    }
}

impl From<BundleError> for RunError {
    fn from(e: BundleError) -> Self {
        RunError::Input(e.to_string())
    }
}

/// Where a category comes from: a shipped fixture or a bundle entry.
#[derive(Debug, Clone)]
pub struct CatSource {
    pub fixture: Option<String>,
    pub bundle: Option<PathBuf>,
    pub cat: Option<String>,
}

impl CatSource {
    pub fn resolve(&self, caps: &Caps) -> Result<(String, FinCategory), RunError> {
        match (&self.fixture, &self.bundle) {
            (Some(name), None) => Ok((name.clone(), fixtures::by_name(name)?)),
            (None, Some(path)) => {
                let bundle = Bundle::load(path, caps)?;
                let cat_name = self
                    .cat
                    .clone()
                    .or_else(|| bundle.categories.keys().next().cloned())
                    .ok_or_else(|| RunError::Input("bundle has no categories".into()))?;
                let cat = bundle
                    .categories
                    .get(&cat_name)
                    .cloned()
                    .ok_or_else(|| RunError::Input(format!("no category {cat_name:?} in bundle")))?;
                Ok((cat_name, cat))
            }
            _ => Err(RunError::Input("pass exactly one of --fixture or --bundle".into())),
        }
    }
}

/// Parses a span given as feet and apex `left,apex,right` (legs must be
/// unique) or as explicit legs `legs:LEFT;RIGHT`.
pub fn parse_span(cat: &FinCategory, spec: &str) -> Result<Span, RunError> {
    if let Some(rest) = spec.strip_prefix("legs:") {
        let (l, r) = rest
            .split_once(';')
            .ok_or_else(|| RunError::Input("legs spec must be legs:LEFT;RIGHT".into()))?;
        let left = find_mor(cat, l)?;
        let right = find_mor(cat, r)?;
        return Span::new(cat, left, right).map_err(Into::into);
    }
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(RunError::Input(format!(
            "span spec {spec:?} must be left,apex,right or legs:LEFT;RIGHT"
        )));
    }
    let left_foot = find_obj(cat, parts[0])?;
    let apex = find_obj(cat, parts[1])?;
    let right_foot = find_obj(cat, parts[2])?;
    let unique = |from: Obj, to: Obj| -> Result<Mor, RunError> {
        match cat.hom(from, to) {
            [one] => Ok(*one),
            [] => Err(RunError::Input(format!(
                "no arrow {} -> {}",
                cat.object_name(from),
                cat.object_name(to)
            ))),
            _ => Err(RunError::Input(format!(
                "arrow {} -> {} is ambiguous; use legs:LEFT;RIGHT",
                cat.object_name(from),
                cat.object_name(to)
            ))),
        }
    };
    let left = unique(apex, left_foot)?;
    let right = unique(apex, right_foot)?;
    Span::new(cat, left, right).map_err(Into::into)
}

fn find_obj(cat: &FinCategory, name: &str) -> Result<Obj, RunError> {
    cat.find_object(name)
        .ok_or_else(|| RunError::Input(format!("no object {name:?} in {}", cat.name())))
}

fn find_mor(cat: &FinCategory, name: &str) -> Result<Mor, RunError> {
    cat.find_mor(name)
        .ok_or_else(|| RunError::Input(format!("no morphism {name:?} in {}", cat.name())))
}

/// Builds a fibration from a `kind:fixture` spec.
pub fn parse_fibration(spec: &str, caps: &Caps) -> Result<(String, FiberedFunctor), RunError> {
    let (kind, fixture) = spec
        .split_once(':')
        .ok_or_else(|| RunError::Input("fibration spec must be kind:fixture".into()))?;
    let cat = fixtures::by_name(fixture)?;
    let fib = match kind {
        "span" => span_fibration(&cat, caps)?,
        "arrow" => arrow_fibration(&cat, caps)?,
        "cocyl-id" => cocyl(&Functor::identity(&cat), caps)?,
        "groth-hom" => {
            let (h, prod) = suite::hom_valued(&cat, caps);
            grothendieck_two_sided(&h, &prod, caps)?
        }
        other => {
            return Err(RunError::Input(format!(
                "unknown fibration kind {other:?}; use span, arrow, cocyl-id or groth-hom"
            )))
        }
    };
    Ok((spec.to_string(), fib))
}

pub fn validate_check(source: &CatSource, caps: &Caps) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let report = cat.validate();
    let check = if report.is_valid() {
        CheckReport::pass("validate")
            .detail(format!(
                "{} objects, {} morphisms, all laws hold",
                cat.object_count(),
                cat.mor_count()
            ))
            .provenance(format!("category: {name}"))
    } else {
        let mut c = CheckReport::fail("validate", format!("{} violations", report.violations.len()));
        for v in &report.violations {
            c = c.detail(v.to_string());
        }
        c.provenance(format!("category: {name}"))
    };
    Ok(vec![check])
}

pub fn pullback_check(
    source: &CatSource,
    left: &str,
    right: &str,
    caps: &Caps,
) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let cs = Cospan::new(&cat, find_mor(&cat, left)?, find_mor(&cat, right)?)?;
    let check = match pullback(&cat, &cs) {
        Some(pb) => CheckReport::pass("pullback")
            .detail(format!(
                "apex {} with projections {} and {}",
                cat.object_name(pb.apex),
                cat.mor_name(pb.to_left),
                cat.mor_name(pb.to_right)
            ))
            .provenance(format!("category: {name}")),
        None => CheckReport::fail(
            "pullback",
            format!("no object carries a universal cone over ({left}, {right})"),
        )
        .provenance(format!("category: {name}")),
    };
    Ok(vec![check])
}

pub fn compose_spans_check(
    source: &CatSource,
    first: &str,
    second: &str,
    caps: &Caps,
) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let s = parse_span(&cat, first)?;
    let t = parse_span(&cat, second)?;
    let choice = PullbackChoice::new(&cat);
    let check = match compose_spans(&s, &t, &choice) {
        Ok(comp) => CheckReport::pass("compose-spans")
            .detail(format!("composite: {}", comp.describe()))
            .provenance(format!("category: {name}")),
        Err(CatError::MissingPullback { left, right }) => CheckReport::fail(
            "compose-spans",
            format!("missing pullback over cospan ({left}, {right})"),
        )
        .provenance(format!("category: {name}")),
        Err(e) => return Err(e.into()),
    };
    Ok(vec![check])
}

pub fn segal_subcheck(
    source: &CatSource,
    n: usize,
    caps: &Caps,
) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let check = match segal_check(&cat, n, caps) {
        Ok(SegalOutcome::Yes { .. }) => CheckReport::pass("segal")
            .detail(format!("level {n} restriction is an equivalence"))
            .provenance(format!("category: {name}")),
        Ok(SegalOutcome::NonExtendableSpine { spine }) => {
            let mut c = CheckReport::fail("segal", "a spine datum does not extend");
            for s in spine {
                c = c.detail(format!("spine piece: {}", s.describe()));
            }
            c.provenance(format!("category: {name}"))
        }
        Ok(SegalOutcome::NotEquivalence { equivalence }) => CheckReport::fail(
            "segal",
            format!(
                "restriction is not an equivalence (fully faithful: {}, essentially surjective: {})",
                equivalence.fully_faithful, equivalence.essentially_surjective
            ),
        )
        .provenance(format!("category: {name}")),
        Err(e) => return Err(e.into()),
    };
    Ok(vec![check])
}

pub fn classify_fib_check(spec: &str, caps: &Caps) -> Result<Vec<CheckReport>, RunError> {
    let (label, fib) = parse_fibration(spec, caps)?;
    let report = classify_fibration(&fib, caps)?;
    let mut check = if report.two_sided || report.bivariant {
        CheckReport::pass("classify-fib")
    } else {
        CheckReport::fail("classify-fib", "not a two-sided fibration")
    };
    check = check
        .detail(format!(
            "cocartesian: {}, cartesian: {}",
            report.cocartesian_fibration, report.cartesian_fibration
        ))
        .detail(format!("two-sided: {} (flipped: {})", report.two_sided, report.two_sided_flipped))
        .detail(format!(
            "bifibration: {}, bivariant: {}, beck-chevalley: {}",
            report.bifibration,
            report.bivariant,
            report.beck_chevalley.map(|b| b.to_string()).unwrap_or_else(|| "n/a".into())
        ));
    for (flag, witness) in &report.witnesses {
        check = check.detail(format!("witness [{flag}]: {witness}"));
    }
    Ok(vec![check.provenance(format!("fibration: {label}"))])
}

pub fn groth_check(
    hom_of: Option<&str>,
    bundle: Option<&PathBuf>,
    cat_valued: Option<&str>,
    caps: &Caps,
) -> Result<Vec<CheckReport>, RunError> {
    let (label, h, prod) = match (hom_of, bundle, cat_valued) {
        (Some(fixture), None, None) => {
            let cat = fixtures::by_name(fixture)?;
            let (h, prod) = suite::hom_valued(&cat, caps);
            (format!("hom:{fixture}"), h, prod)
        }
        (None, Some(path), Some(name)) => {
            let bundle = Bundle::load(path, caps)?;
            let entry = bundle
                .cat_valued
                .get(name)
                .cloned()
                .ok_or_else(|| RunError::Input(format!("no cat_valued {name:?} in bundle")))?;
            (name.to_string(), entry.h, entry.prod)
        }
        _ => {
            return Err(RunError::Input(
                "pass either --hom-of FIXTURE or --bundle PATH --cat-valued NAME".into(),
            ))
        }
    };
    let g = grothendieck_two_sided(&h, &prod, caps)?;
    let report = classify_fibration(&g, caps)?;
    let check = if report.two_sided {
        CheckReport::pass("groth")
            .detail(format!(
                "total has {} objects and {} morphisms, classifies two-sided",
                g.total().object_count(),
                g.total().mor_count()
            ))
            .provenance(format!("cat-valued functor: {label}"))
    } else {
        let mut c = CheckReport::fail("groth", "construction is not two-sided");
        for (flag, witness) in &report.witnesses {
            c = c.detail(format!("witness [{flag}]: {witness}"));
        }
        c.provenance(format!("cat-valued functor: {label}"))
    };
    Ok(vec![check])
}

pub fn bc_check(spec: &str, caps: &Caps) -> Result<Vec<CheckReport>, RunError> {
    let (label, fib) = parse_fibration(spec, caps)?;
    let report = classify_fibration(&fib, caps)?;
    let check = match report.beck_chevalley {
        Some(true) => CheckReport::pass("bc")
            .detail("every one-coordinate-constant base change is bivariant")
            .provenance(format!("fibration: {label}")),
        Some(false) => {
            let witness = report
                .witnesses
                .iter()
                .find(|(flag, _)| flag == "beck-chevalley")
                .map(|(_, w)| w.clone())
                .unwrap_or_default();
            CheckReport::fail("bc", witness).provenance(format!("fibration: {label}"))
        }
        None => CheckReport::fail(
            "bc",
            format!("fibration is not bivariant, so Beck-Chevalley does not apply: {:?}", report.witnesses),
        )
        .provenance(format!("fibration: {label}")),
    };
    Ok(vec![check])
}

/// Parses a cartesian square given as corners `w,x,y,s` (unique arrows) or
/// legs `legs:TO_LEFT;TO_RIGHT;COSPAN_LEFT;COSPAN_RIGHT`.
pub fn bc_square_check(
    source: &CatSource,
    square: &str,
    caps: &Caps,
) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let (to_left, to_right, cs) = if let Some(rest) = square.strip_prefix("legs:") {
        let parts: Vec<&str> = rest.split(';').collect();
        if parts.len() != 4 {
            return Err(RunError::Input("legs spec needs four morphisms".into()));
        }
        let to_left = find_mor(&cat, parts[0])?;
        let to_right = find_mor(&cat, parts[1])?;
        let cs = Cospan::new(&cat, find_mor(&cat, parts[2])?, find_mor(&cat, parts[3])?)?;
        (to_left, to_right, cs)
    } else {
        let parts: Vec<&str> = square.split(',').collect();
        if parts.len() != 4 {
            return Err(RunError::Input("square spec must be w,x,y,s or legs:TL;TR;CL;CR".into()));
        }
        let w = find_obj(&cat, parts[0])?;
        let x = find_obj(&cat, parts[1])?;
        let y = find_obj(&cat, parts[2])?;
        let s = find_obj(&cat, parts[3])?;
        let unique = |from: Obj, to: Obj| -> Result<Mor, RunError> {
            match cat.hom(from, to) {
                [one] => Ok(*one),
                _ => Err(RunError::Input(format!(
                    "arrow {} -> {} missing or ambiguous",
                    cat.object_name(from),
                    cat.object_name(to)
                ))),
            }
        };
        let cs = Cospan::new(&cat, unique(x, s)?, unique(y, s)?)?;
        (unique(w, x)?, unique(w, y)?, cs)
    };
    let out = bc_square_in_corr(&cat, to_left, to_right, &cs, caps)?;
    let check = if out.cartesian_in_slice {
        CheckReport::pass("bc-square")
            .detail(format!(
                "corners: {}, {}, {}, {}",
                out.corners[0].describe(),
                out.corners[1].describe(),
                out.corners[2].describe(),
                out.corners[3].describe()
            ))
            .detail("the counit square is cartesian in the slice")
            .provenance(format!("category: {name}"))
    } else {
        CheckReport::fail("bc-square", "the counit square is not cartesian in the slice")
            .provenance(format!("category: {name}"))
    };
    Ok(vec![check])
}

pub fn adjoint_check(
    source: &CatSource,
    span: Option<&str>,
    arrow: Option<&str>,
    caps: &Caps,
) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let choice = PullbackChoice::new(&cat);
    let check = match (span, arrow) {
        (Some(spec), None) => {
            let s = parse_span(&cat, spec)?;
            match (span_right_adjoint(&s, &choice), span_left_adjoint(&s, &choice)) {
                (Ok(right), Ok(left)) => CheckReport::pass("adjoint")
                    .detail(format!("right adjoint: {}", right.right.describe()))
                    .detail(format!("left adjoint: {}", left.left.describe()))
                    .detail("both adjoints are the reversed span; triangles verified")
                    .provenance(format!("category: {name}")),
                (Err(e), _) | (_, Err(e)) => {
                    CheckReport::fail("adjoint", e.to_string()).provenance(format!("category: {name}"))
                }
            }
        }
        (None, Some(mor_name)) => {
            let alpha = find_mor(&cat, mor_name)?;
            match generator_adjunction(&cat, alpha, &choice) {
                Ok(adj) => CheckReport::pass("adjoint")
                    .detail(format!(
                        "{} -| {}",
                        adj.left.describe(),
                        adj.right.describe()
                    ))
                    .detail(format!(
                        "counit apex map: {}",
                        cat.mor_name(adj.counit.apex_map)
                    ))
                    .provenance(format!("category: {name}")),
                Err(e) => {
                    CheckReport::fail("adjoint", e.to_string()).provenance(format!("category: {name}"))
                }
            }
        }
        _ => return Err(RunError::Input("pass exactly one of --span or --arrow".into())),
    };
    Ok(vec![check])
}

pub fn dual_check(source: &CatSource, span: &str, caps: &Caps) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let s = parse_span(&cat, span)?;
    let choice = PullbackChoice::new(&cat);
    let check = match dual_morphism(&s, &choice) {
        Ok((dual, witness)) => CheckReport::pass("dual")
            .detail(format!("dual span: {}", dual.describe()))
            .detail(format!(
                "isomorphic to the reverse {} via apex map {}",
                reverse_span(&s).describe(),
                cat.mor_name(witness.apex_map)
            ))
            .provenance(format!("category: {name}")),
        Err(e) => CheckReport::fail("dual", e.to_string()).provenance(format!("category: {name}")),
    };
    Ok(vec![check])
}

pub fn zigzag_check(
    source: &CatSource,
    object: Option<&str>,
    caps: &Caps,
) -> Result<Vec<CheckReport>, RunError> {
    let (name, cat) = source.resolve(caps)?;
    let choice = PullbackChoice::new(&cat);
    let objects: Vec<Obj> = match object {
        Some(o) => vec![find_obj(&cat, o)?],
        None => cat.objects().collect(),
    };
    let mut checks = Vec::new();
    for c in objects {
        let label = format!("zigzag {}", cat.object_name(c));
        let check = match duality_data(&cat, c, &choice) {
            Ok(data) => CheckReport::pass(label)
                .detail(format!("unit: {}", data.unit.describe()))
                .detail(format!("counit: {}", data.counit.describe()))
                .detail("both zig-zag composites are isomorphic to the identity span")
                .provenance(format!("category: {name}")),
            Err(e) => CheckReport::fail(label, e.to_string()).provenance(format!("category: {name}")),
        };
        checks.push(check);
    }
    Ok(checks)
}

pub fn suite_report(caps: &Caps) -> SuiteReport {
    suite::run_all(caps)
}
