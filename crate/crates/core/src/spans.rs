//! The bicategory of correspondences: spans as 1-cells, apex maps as
//! 2-cells, composition by chosen pullbacks, coherence isos computed as
//! unique mediating maps.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::error::CatError;
use crate::fincat::{
    self, is_iso, mediating_morphism, pullback, terminal_object, Cospan, FinCategory, Functor,
    Mor, Obj, PullbackData,
};

/// A 1-cell `left_foot <- apex -> right_foot` of the correspondence
/// bicategory of its ambient category.
#[derive(Debug, Clone, PartialEq)]
pub struct Span {
    pub ambient: FinCategory,
    pub left_foot: Obj,
    pub right_foot: Obj,
    pub apex: Obj,
    pub left_leg: Mor,
    pub right_leg: Mor,
}

impl Span {
    pub fn new(ambient: &FinCategory, left_leg: Mor, right_leg: Mor) -> Result<Self, CatError> {
        if ambient.src(left_leg) != ambient.src(right_leg) {
            return Err(CatError::FootMismatch {
                expected: ambient.object_name(ambient.src(left_leg)).to_string(),
                found: ambient.object_name(ambient.src(right_leg)).to_string(),
            });
        }
        Ok(Span {
            ambient: ambient.clone(),
            left_foot: ambient.tgt(left_leg),
            right_foot: ambient.tgt(right_leg),
            apex: ambient.src(left_leg),
            left_leg,
            right_leg,
        })
    }

    pub fn describe(&self) -> String {
        format!(
            "{} <-{}- {} -{}-> {}",
            self.ambient.object_name(self.left_foot),
            self.ambient.mor_name(self.left_leg),
            self.ambient.object_name(self.apex),
            self.ambient.mor_name(self.right_leg),
            self.ambient.object_name(self.right_foot),
        )
    }

    fn same_feet(&self, other: &Span) -> bool {
        self.left_foot == other.left_foot && self.right_foot == other.right_foot
    }
}

/// `c <-id- c -id-> c`.
pub fn identity_span(cat: &FinCategory, c: Obj) -> Span {
    let id = cat.identity(c);
    Span::new(cat, id, id).expect("identity span is well typed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IotaSide {
    /// `ι(α) = (c <-id- c -α-> c')`.
    Left,
    /// `ι^R(α) = (c' <-α- c -id-> c)`.
    Right,
}

/// The inclusions of `C` and `C^op` into correspondences.
pub fn iota(cat: &FinCategory, alpha: Mor, side: IotaSide) -> Span {
    let id = cat.identity(cat.src(alpha));
    match side {
        IotaSide::Left => Span::new(cat, id, alpha).unwrap(),
        IotaSide::Right => Span::new(cat, alpha, id).unwrap(),
    }
}

/// Legs swapped; an involution.
pub fn reverse_span(s: &Span) -> Span {
    Span {
        ambient: s.ambient.clone(),
        left_foot: s.right_foot,
        right_foot: s.left_foot,
        apex: s.apex,
        left_leg: s.right_leg,
        right_leg: s.left_leg,
    }
}

/// Applies a functor to feet, apex and legs.
pub fn map_span(fun: &Functor, s: &Span) -> Result<Span, CatError> {
    fun.ensure_valid()?;
    Span::new(&fun.target, fun.on_mor(s.left_leg), fun.on_mor(s.right_leg))
}

/// Deterministic memo of pullback selections per cospan of one ambient
/// category. Behaves as a pure function: the underlying search is itself
/// deterministic, the mutex only guards the cache.
#[derive(Debug)]
pub struct PullbackChoice {
    cat: FinCategory,
    cache: Mutex<BTreeMap<(Mor, Mor), Option<PullbackData>>>,
}

impl PullbackChoice {
    pub fn new(cat: &FinCategory) -> Self {
        PullbackChoice { cat: cat.clone(), cache: Mutex::new(BTreeMap::new()) }
    }

    pub fn cat(&self) -> &FinCategory {
        &self.cat
    }

    pub fn try_pull(&self, cs: &Cospan) -> Option<PullbackData> {
        let mut cache = self.cache.lock().unwrap();
        *cache.entry((cs.left, cs.right)).or_insert_with(|| pullback(&self.cat, cs))
    }

    pub fn pull(&self, cs: &Cospan) -> Result<PullbackData, CatError> {
        self.try_pull(cs).ok_or_else(|| CatError::MissingPullback {
            left: self.cat.mor_name(cs.left).to_string(),
            right: self.cat.mor_name(cs.right).to_string(),
        })
    }

    /// Chosen binary product, as the pullback over the terminal object.
    pub fn product(&self, x: Obj, y: Obj) -> Result<PullbackData, CatError> {
        let t = terminal_object(&self.cat)
            .ok_or_else(|| CatError::NoTerminal(self.cat.name().to_string()))?;
        let cs = Cospan { left: self.cat.hom(x, t)[0], right: self.cat.hom(y, t)[0] };
        self.try_pull(&cs).ok_or_else(|| {
            CatError::MissingProduct(
                self.cat.object_name(x).to_string(),
                self.cat.object_name(y).to_string(),
            )
        })
    }
}

fn ambient_guard(a: &FinCategory, b: &FinCategory) -> Result<(), CatError> {
    if a.object_count() != b.object_count() || a.mor_count() != b.mor_count() {
        return Err(CatError::AmbientMismatch);
    }
    debug_assert_eq!(a, b);
    Ok(())
}

/// The composite span and the pullback that produced it.
pub fn compose_spans_with_data(
    s: &Span,
    t: &Span,
    choice: &PullbackChoice,
) -> Result<(Span, PullbackData), CatError> {
    ambient_guard(&s.ambient, &t.ambient)?;
    ambient_guard(&s.ambient, choice.cat())?;
    if s.right_foot != t.left_foot {
        return Err(CatError::FootMismatch {
            expected: s.ambient.object_name(s.right_foot).to_string(),
            found: t.ambient.object_name(t.left_foot).to_string(),
        });
    }
    let cat = &s.ambient;
    let cs = Cospan { left: s.right_leg, right: t.left_leg };
    let pb = choice.pull(&cs)?;
    let left = cat.compose(s.left_leg, pb.to_left)?;
    let right = cat.compose(t.right_leg, pb.to_right)?;
    Ok((Span::new(cat, left, right)?, pb))
}

/// Horizontal composition of 1-cells: `s` then `t`, apex the chosen pullback.
pub fn compose_spans(s: &Span, t: &Span, choice: &PullbackChoice) -> Result<Span, CatError> {
    compose_spans_with_data(s, t, choice).map(|(sp, _)| sp)
}

/// A 2-cell between parallel spans: an apex map commuting with both legs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanMor {
    pub source: Span,
    pub target: Span,
    pub apex_map: Mor,
}

impl SpanMor {
    pub fn new(source: Span, target: Span, apex_map: Mor) -> Result<Self, CatError> {
        if !source.same_feet(&target) {
            return Err(CatError::CellMismatch("feet differ".into()));
        }
        let cat = &source.ambient;
        if cat.src(apex_map) != source.apex || cat.tgt(apex_map) != target.apex {
            return Err(CatError::CellMismatch("apex map mistyped".into()));
        }
        if cat.compose_entry(target.left_leg, apex_map) != Some(source.left_leg)
            || cat.compose_entry(target.right_leg, apex_map) != Some(source.right_leg)
        {
            return Err(CatError::CellMismatch("leg triangles do not commute".into()));
        }
        Ok(SpanMor { source, target, apex_map })
    }

    pub fn identity(s: &Span) -> SpanMor {
        SpanMor { source: s.clone(), target: s.clone(), apex_map: s.ambient.identity(s.apex) }
    }

    pub fn is_invertible(&self) -> bool {
        is_iso(&self.source.ambient, self.apex_map).is_some()
    }

    /// The inverse 2-cell, when the apex map is invertible.
    pub fn invert(&self) -> Result<SpanMor, CatError> {
        let inv = is_iso(&self.source.ambient, self.apex_map)
            .ok_or_else(|| CatError::NoIsoWitness("2-cell is not invertible".into()))?;
        SpanMor::new(self.target.clone(), self.source.clone(), inv)
    }
}

/// Vertical composition of 2-cells: apex maps compose.
pub fn vcompose_2cells(first: &SpanMor, second: &SpanMor) -> Result<SpanMor, CatError> {
    if first.target != second.source {
        return Err(CatError::CellMismatch("target of first is not source of second".into()));
    }
    let m = first.source.ambient.compose(second.apex_map, first.apex_map)?;
    SpanMor::new(first.source.clone(), second.target.clone(), m)
}

/// Horizontal composition of 2-cells: the apex map is the unique mediator
/// into the target composite's pullback.
pub fn hcompose_2cells(
    eta: &SpanMor,
    theta: &SpanMor,
    choice: &PullbackChoice,
) -> Result<SpanMor, CatError> {
    let cat = &eta.source.ambient;
    let (src_comp, src_pb) = compose_spans_with_data(&eta.source, &theta.source, choice)?;
    let (tgt_comp, tgt_pb) = compose_spans_with_data(&eta.target, &theta.target, choice)?;
    let cone_left = cat.compose(eta.apex_map, src_pb.to_left)?;
    let cone_right = cat.compose(theta.apex_map, src_pb.to_right)?;
    let m = mediating_morphism(cat, &tgt_pb, cone_left, cone_right)
        .map_err(|e| CatError::NoMediator(format!("horizontal composite: {e}")))?;
    SpanMor::new(src_comp, tgt_comp, m)
}

/// Whiskering by identity 2-cells.
pub fn whisker_left(s: &Span, cell: &SpanMor, choice: &PullbackChoice) -> Result<SpanMor, CatError> {
    hcompose_2cells(&SpanMor::identity(s), cell, choice)
}

pub fn whisker_right(
    cell: &SpanMor,
    s: &Span,
    choice: &PullbackChoice,
) -> Result<SpanMor, CatError> {
    hcompose_2cells(cell, &SpanMor::identity(s), choice)
}

/// The invertible 2-cell `id ⊙ s -> s` induced by the pullback projection.
pub fn lunitor(s: &Span, choice: &PullbackChoice) -> Result<SpanMor, CatError> {
    let id = identity_span(&s.ambient, s.left_foot);
    let (comp, pb) = compose_spans_with_data(&id, s, choice)?;
    let cell = SpanMor::new(comp, s.clone(), pb.to_right)?;
    if !cell.is_invertible() {
        return Err(CatError::NoIsoWitness("left unitor is not invertible".into()));
    }
    Ok(cell)
}

/// The invertible 2-cell `s ⊙ id -> s`.
pub fn runitor(s: &Span, choice: &PullbackChoice) -> Result<SpanMor, CatError> {
    let id = identity_span(&s.ambient, s.right_foot);
    let (comp, pb) = compose_spans_with_data(s, &id, choice)?;
    let cell = SpanMor::new(comp, s.clone(), pb.to_left)?;
    if !cell.is_invertible() {
        return Err(CatError::NoIsoWitness("right unitor is not invertible".into()));
    }
    Ok(cell)
}

/// The invertible 2-cell `(s ⊙ t) ⊙ u -> s ⊙ (t ⊙ u)` between the two
/// chosen-pullback bracketings, computed via mediating morphisms.
pub fn associator(
    s: &Span,
    t: &Span,
    u: &Span,
    choice: &PullbackChoice,
) -> Result<SpanMor, CatError> {
    let cat = &s.ambient;
    let (st, pb_st) = compose_spans_with_data(s, t, choice)?;
    let (st_u, pb_stu) = compose_spans_with_data(&st, u, choice)?;
    let (tu, pb_tu) = compose_spans_with_data(t, u, choice)?;
    let (s_tu, pb_s_tu) = compose_spans_with_data(s, &tu, choice)?;

    // Cone from the left bracketing's apex over the cospan defining t ⊙ u.
    let to_t = cat.compose(pb_st.to_right, pb_stu.to_left)?;
    let into_tu = mediating_morphism(cat, &pb_tu, to_t, pb_stu.to_right)
        .map_err(|e| CatError::NoMediator(format!("associator (inner): {e}")))?;
    let to_s = cat.compose(pb_st.to_left, pb_stu.to_left)?;
    let m = mediating_morphism(cat, &pb_s_tu, to_s, into_tu)
        .map_err(|e| CatError::NoMediator(format!("associator (outer): {e}")))?;

    let cell = SpanMor::new(st_u, s_tu, m)?;
    if !cell.is_invertible() {
        return Err(CatError::NoIsoWitness("associator is not invertible".into()));
    }
    Ok(cell)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceKind {
    Assoc,
    LeftUnit,
    RightUnit,
}

/// Dispatching form of the coherence-iso constructors; `spans` is one span
/// for the unitors and three for the associator.
pub fn coherence_iso(
    kind: CoherenceKind,
    spans: &[Span],
    choice: &PullbackChoice,
) -> Result<SpanMor, CatError> {
    match (kind, spans) {
        (CoherenceKind::LeftUnit, [s]) => lunitor(s, choice),
        (CoherenceKind::RightUnit, [s]) => runitor(s, choice),
        (CoherenceKind::Assoc, [s, t, u]) => associator(s, t, u, choice),
        _ => Err(CatError::Other("wrong number of spans for coherence kind".into())),
    }
}

/// Searches for an invertible 2-cell between parallel spans.
pub fn find_span_iso(a: &Span, b: &Span) -> Option<SpanMor> {
    if !a.same_feet(b) {
        return None;
    }
    let cat = &a.ambient;
    for &m in cat.hom(a.apex, b.apex) {
        if is_iso(cat, m).is_some() {
            if let Ok(cell) = SpanMor::new(a.clone(), b.clone(), m) {
                return Some(cell);
            }
        }
    }
    None
}

/// Enumerates every span of the ambient category, ordered by leg ids.
pub fn all_spans(cat: &FinCategory) -> Vec<Span> {
    let mut out = Vec::new();
    for apex in cat.objects() {
        for &l in cat.mors_from(apex) {
            for &r in cat.mors_from(apex) {
                out.push(Span::new(cat, l, r).unwrap());
            }
        }
    }
    out
}

/// Spans with prescribed feet, ordered by leg ids.
pub fn spans_between(cat: &FinCategory, left: Obj, right: Obj) -> Vec<Span> {
    let mut out = Vec::new();
    for apex in cat.objects() {
        for &l in cat.hom(apex, left) {
            for &r in cat.hom(apex, right) {
                out.push(Span::new(cat, l, r).unwrap());
            }
        }
    }
    out
}

/// Outcome of the two invertibility methods: legs-are-isos versus exhaustive
/// search for a two-sided inverse up to invertible 2-cells.
#[derive(Debug, Clone)]
pub struct InvertibilityCheck {
    pub legs_iso: bool,
    pub inverse: Option<Span>,
}

impl InvertibilityCheck {
    pub fn methods_agree(&self) -> bool {
        self.legs_iso == self.inverse.is_some()
    }
}

/// Runs both invertibility methods. Method (b) needs the relevant pullbacks;
/// their absence aborts it with an error.
pub fn is_invertible_span(
    s: &Span,
    choice: &PullbackChoice,
) -> Result<InvertibilityCheck, CatError> {
    let cat = &s.ambient;
    let legs_iso = is_iso(cat, s.left_leg).is_some() && is_iso(cat, s.right_leg).is_some();

    let id_left = identity_span(cat, s.left_foot);
    let id_right = identity_span(cat, s.right_foot);
    let mut inverse = None;
    for t in spans_between(cat, s.right_foot, s.left_foot) {
        let st = compose_spans(s, &t, choice)?;
        if find_span_iso(&st, &id_left).is_none() {
            continue;
        }
        let ts = compose_spans(&t, s, choice)?;
        if find_span_iso(&ts, &id_right).is_some() {
            inverse = Some(t);
            break;
        }
    }
    Ok(InvertibilityCheck { legs_iso, inverse })
}

/// Binary tensor of spans under the cartesian symmetric monoidal structure:
/// feet and apex are chosen products, legs are product morphisms.
pub fn tensor_span(s: &Span, t: &Span, choice: &PullbackChoice) -> Result<Span, CatError> {
    ambient_guard(&s.ambient, &t.ambient)?;
    let cat = &s.ambient;
    let lf = choice.product(s.left_foot, t.left_foot)?;
    let rf = choice.product(s.right_foot, t.right_foot)?;
    let ap = choice.product(s.apex, t.apex)?;
    let left = product_mor(cat, &ap, &lf, s.left_leg, t.left_leg)?;
    let right = product_mor(cat, &ap, &rf, s.right_leg, t.right_leg)?;
    Span::new(cat, left, right)
}

/// `f × g`: the mediator into the target product cone.
pub fn product_mor(
    cat: &FinCategory,
    src: &PullbackData,
    tgt: &PullbackData,
    f: Mor,
    g: Mor,
) -> Result<Mor, CatError> {
    let cone_left = cat.compose(f, src.to_left)?;
    let cone_right = cat.compose(g, src.to_right)?;
    mediating_morphism(cat, tgt, cone_left, cone_right)
}

/// The pairing `⟨f, g⟩: z -> x × y` for `f: z -> x`, `g: z -> y`.
pub fn pair_into_product(
    cat: &FinCategory,
    tgt: &PullbackData,
    f: Mor,
    g: Mor,
) -> Result<Mor, CatError> {
    mediating_morphism(cat, tgt, f, g)
}

/// Checks `F(s ⊙ t) ≅ F(s) ⊙ F(t)` for a pullback-preserving functor by
/// exhibiting the invertible comparison 2-cell.
pub fn map_span_compat_iso(
    fun: &Functor,
    s: &Span,
    t: &Span,
    choice_src: &PullbackChoice,
    choice_tgt: &PullbackChoice,
) -> Result<SpanMor, CatError> {
    if fincat::preserves_pullbacks(fun)?.is_some() {
        return Err(CatError::InvalidFunctor("functor does not preserve pullbacks".into()));
    }
    let composed_then_mapped = map_span(fun, &compose_spans(s, t, choice_src)?)?;
    let mapped_then_composed = compose_spans(&map_span(fun, s)?, &map_span(fun, t)?, choice_tgt)?;
    find_span_iso(&composed_then_mapped, &mapped_then_composed)
        .ok_or_else(|| CatError::NoIsoWitness("functor image of composite".into()))
}
