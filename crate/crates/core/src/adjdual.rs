//! Adjunction and duality witnesses among spans: the generator adjunctions
//! `ι(α) ⊣ ι^R(α)`, ambidextrous adjoints of arbitrary spans, object
//! self-duality, and dual morphisms.
//!
//! Generator adjunctions live in the span bicategory proper: their units and
//! counits are single apex maps. Ambidextrous adjunctions of general spans
//! do not — their unit would need an apex map that usually does not exist —
//! so those witnesses use one level higher of structure: 2-cells that are
//! themselves correspondences between spans (spans in the hom category),
//! with the triangle identities holding up to invertible 3-cells.

use crate::error::CatError;
use crate::fincat::{
    is_iso, mediating_morphism, terminal_object, Cospan, FinCategory, Mor, Obj, PullbackData,
};
use crate::spans::{
    associator, compose_spans, compose_spans_with_data, find_span_iso, hcompose_2cells,
    identity_span, iota, lunitor, pair_into_product, reverse_span, runitor, tensor_span,
    vcompose_2cells, IotaSide, PullbackChoice, Span, SpanMor,
};

/// An adjunction between spans whose unit and counit are plain 2-cells.
///
/// `unit: id -> right∘left` and `counit: left∘right -> id` in functional
/// order; both triangle identities are checked literally against the
/// coherence isos computed from the same pullback choice.
#[derive(Debug, Clone)]
pub struct SpanAdjunction {
    pub left: Span,
    pub right: Span,
    pub unit: SpanMor,
    pub counit: SpanMor,
}

fn check_strict_triangles(adj: &SpanAdjunction, choice: &PullbackChoice) -> Result<(), CatError> {
    let l = &adj.left;
    let r = &adj.right;

    // Triangle on the left 1-cell:
    // id⊙L --unit⋆1--> (L⊙R)⊙L --assoc--> L⊙(R⊙L) --1⋆counit--> L⊙id
    // must equal the coherence route id⊙L --lunitor--> L --runitor^-1--> L⊙id.
    let step1 = hcompose_2cells(&adj.unit, &SpanMor::identity(l), choice)?;
    let step2 = associator(l, r, l, choice)?;
    let step3 = hcompose_2cells(&SpanMor::identity(l), &adj.counit, choice)?;
    let route = vcompose_2cells(&vcompose_2cells(&step1, &step2)?, &step3)?;
    let canonical = vcompose_2cells(&lunitor(l, choice)?, &runitor(l, choice)?.invert()?)?;
    if route.apex_map != canonical.apex_map {
        return Err(CatError::TriangleFailure { which: "left" });
    }

    // Triangle on the right 1-cell:
    // R⊙id --1⋆unit--> R⊙(L⊙R) --assoc^-1--> (R⊙L)⊙R --counit⋆1--> id⊙R.
    let step1 = hcompose_2cells(&SpanMor::identity(r), &adj.unit, choice)?;
    let step2 = associator(r, l, r, choice)?.invert()?;
    let step3 = hcompose_2cells(&adj.counit, &SpanMor::identity(r), choice)?;
    let route = vcompose_2cells(&vcompose_2cells(&step1, &step2)?, &step3)?;
    let canonical = vcompose_2cells(&runitor(r, choice)?, &lunitor(r, choice)?.invert()?)?;
    if route.apex_map != canonical.apex_map {
        return Err(CatError::TriangleFailure { which: "right" });
    }
    Ok(())
}

/// The adjunction `ι(α) ⊣ ι^R(α)`: the counit's apex map is `α` itself, the
/// unit's is the diagonal into `c ×_{c'} c`. Triangle identities are
/// verified literally.
pub fn generator_adjunction(
    cat: &FinCategory,
    alpha: Mor,
    choice: &PullbackChoice,
) -> Result<SpanAdjunction, CatError> {
    let left = iota(cat, alpha, IotaSide::Left);
    let right = iota(cat, alpha, IotaSide::Right);
    let c = cat.src(alpha);
    let c2 = cat.tgt(alpha);

    // Unit: id_c => L ⊙ R, mediated by the diagonal.
    let (lr, lr_pb) = compose_spans_with_data(&left, &right, choice)?;
    let diag = mediating_morphism(cat, &lr_pb, cat.identity(c), cat.identity(c))?;
    let unit = SpanMor::new(identity_span(cat, c), lr, diag)?;

    // Counit: R ⊙ L => id_{c'}, the apex map is α through the projection.
    let (rl, rl_pb) = compose_spans_with_data(&right, &left, choice)?;
    let eps = cat.compose(alpha, rl_pb.to_left)?;
    let counit = SpanMor::new(rl, identity_span(cat, c2), eps)?;

    let adj = SpanAdjunction { left, right, unit, counit };
    check_strict_triangles(&adj, choice)?;
    Ok(adj)
}

/// Brute-force cross-validation: searches unit and counit apex maps for
/// `ι(α) ⊣ ι^R(α)` satisfying both strict triangles.
pub fn generator_adjunction_by_search(
    cat: &FinCategory,
    alpha: Mor,
    choice: &PullbackChoice,
) -> Result<Option<SpanAdjunction>, CatError> {
    let left = iota(cat, alpha, IotaSide::Left);
    let right = iota(cat, alpha, IotaSide::Right);
    let c = cat.src(alpha);
    let c2 = cat.tgt(alpha);
    let (lr, _) = compose_spans_with_data(&left, &right, choice)?;
    let (rl, _) = compose_spans_with_data(&right, &left, choice)?;
    let id_c = identity_span(cat, c);
    let id_c2 = identity_span(cat, c2);
    for &u in cat.hom(c, lr.apex) {
        let Ok(unit) = SpanMor::new(id_c.clone(), lr.clone(), u) else { continue };
        for &e in cat.hom(rl.apex, c2) {
            let Ok(counit) = SpanMor::new(rl.clone(), id_c2.clone(), e) else { continue };
            let adj = SpanAdjunction {
                left: left.clone(),
                right: right.clone(),
                unit: unit.clone(),
                counit,
            };
            if check_strict_triangles(&adj, choice).is_ok() {
                return Ok(Some(adj));
            }
        }
    }
    Ok(None)
}

/// A 2-cell presented as a correspondence between parallel spans: a middle
/// span mapping to both sides. Plain 2-cells embed as the degenerate case.
#[derive(Debug, Clone)]
pub struct CorrCell {
    pub from: Span,
    pub to: Span,
    pub mid: Span,
    pub leg_from: SpanMor,
    pub leg_to: SpanMor,
}

impl CorrCell {
    pub fn new(mid: Span, leg_from: SpanMor, leg_to: SpanMor) -> Result<Self, CatError> {
        if leg_from.source != mid || leg_to.source != mid {
            return Err(CatError::CellMismatch(
                "correspondence legs must start at the middle".into(),
            ));
        }
        Ok(CorrCell {
            from: leg_from.target.clone(),
            to: leg_to.target.clone(),
            mid,
            leg_from,
            leg_to,
        })
    }

    /// Embeds a plain 2-cell.
    pub fn from_span_mor(cell: &SpanMor) -> CorrCell {
        CorrCell {
            from: cell.source.clone(),
            to: cell.target.clone(),
            mid: cell.source.clone(),
            leg_from: SpanMor::identity(&cell.source),
            leg_to: cell.clone(),
        }
    }

    pub fn identity(s: &Span) -> CorrCell {
        CorrCell::from_span_mor(&SpanMor::identity(s))
    }

    /// The 2-op reversal: the same correspondence read backwards.
    pub fn reverse(&self) -> CorrCell {
        CorrCell {
            from: self.to.clone(),
            to: self.from.clone(),
            mid: self.mid.clone(),
            leg_from: self.leg_to.clone(),
            leg_to: self.leg_from.clone(),
        }
    }
}

/// Vertical composition of correspondence cells: the middles are glued by a
/// pullback over the shared boundary (a pullback in the hom category,
/// created by the apex-forgetful functor).
pub fn vcompose_corr(
    a: &CorrCell,
    b: &CorrCell,
    choice: &PullbackChoice,
) -> Result<CorrCell, CatError> {
    if a.to != b.from {
        return Err(CatError::CellMismatch("correspondence cells not composable".into()));
    }
    let cat = &a.mid.ambient;
    let cs = Cospan { left: a.leg_to.apex_map, right: b.leg_from.apex_map };
    let pb = choice.pull(&cs)?;
    let mid = Span::new(
        cat,
        cat.compose(a.mid.left_leg, pb.to_left)?,
        cat.compose(a.mid.right_leg, pb.to_left)?,
    )?;
    let leg_from =
        SpanMor::new(mid.clone(), a.from.clone(), cat.compose(a.leg_from.apex_map, pb.to_left)?)?;
    let leg_to =
        SpanMor::new(mid.clone(), b.to.clone(), cat.compose(b.leg_to.apex_map, pb.to_right)?)?;
    CorrCell::new(mid, leg_from, leg_to)
}

/// Horizontal composition of correspondence cells over matching feet.
pub fn hcompose_corr(
    u: &CorrCell,
    v: &CorrCell,
    choice: &PullbackChoice,
) -> Result<CorrCell, CatError> {
    let mid = compose_spans(&u.mid, &v.mid, choice)?;
    let leg_from = hcompose_2cells(&u.leg_from, &v.leg_from, choice)?;
    let leg_to = hcompose_2cells(&u.leg_to, &v.leg_to, choice)?;
    CorrCell::new(mid, leg_from, leg_to)
}

/// Two correspondence cells are equal up to an invertible 3-cell when an
/// invertible apex map identifies the middles compatibly with both legs.
pub fn corr_cells_isomorphic(u: &CorrCell, v: &CorrCell) -> Option<Mor> {
    if u.from != v.from || u.to != v.to {
        return None;
    }
    let cat = &u.mid.ambient;
    for &m in cat.hom(u.mid.apex, v.mid.apex) {
        if is_iso(cat, m).is_none() {
            continue;
        }
        if SpanMor::new(u.mid.clone(), v.mid.clone(), m).is_err() {
            continue;
        }
        if cat.compose_entry(v.leg_from.apex_map, m) == Some(u.leg_from.apex_map)
            && cat.compose_entry(v.leg_to.apex_map, m) == Some(u.leg_to.apex_map)
        {
            return Some(m);
        }
    }
    None
}

/// An ambidextrous adjunction witness: the adjoint is the reversed span and
/// the unit/counit are correspondence cells.
#[derive(Debug, Clone)]
pub struct AmbidextrousAdjunction {
    pub left: Span,
    pub right: Span,
    pub unit: CorrCell,
    pub counit: CorrCell,
}

fn corr_triangles(adj: &AmbidextrousAdjunction, choice: &PullbackChoice) -> Result<(), CatError> {
    let l = &adj.left;
    let r = &adj.right;

    // id⊙L => (L⊙R)⊙L => L⊙(R⊙L) => L⊙id, against the coherence route.
    let step1 = hcompose_corr(&adj.unit, &CorrCell::identity(l), choice)?;
    let step2 = CorrCell::from_span_mor(&associator(l, r, l, choice)?);
    let step3 = hcompose_corr(&CorrCell::identity(l), &adj.counit, choice)?;
    let route = vcompose_corr(&vcompose_corr(&step1, &step2, choice)?, &step3, choice)?;
    let canonical = CorrCell::from_span_mor(&vcompose_2cells(
        &lunitor(l, choice)?,
        &runitor(l, choice)?.invert()?,
    )?);
    if corr_cells_isomorphic(&route, &canonical).is_none() {
        return Err(CatError::TriangleFailure { which: "left (correspondence)" });
    }

    let step1 = hcompose_corr(&CorrCell::identity(r), &adj.unit, choice)?;
    let step2 = CorrCell::from_span_mor(&associator(r, l, r, choice)?.invert()?);
    let step3 = hcompose_corr(&adj.counit, &CorrCell::identity(r), choice)?;
    let route = vcompose_corr(&vcompose_corr(&step1, &step2, choice)?, &step3, choice)?;
    let canonical = CorrCell::from_span_mor(&vcompose_2cells(
        &runitor(r, choice)?,
        &lunitor(r, choice)?.invert()?,
    )?);
    if corr_cells_isomorphic(&route, &canonical).is_none() {
        return Err(CatError::TriangleFailure { which: "right (correspondence)" });
    }
    Ok(())
}

/// The unit `id_a => S ⊙ reverse(S)`: middle `(a <-f- s -f-> a)`, one leg
/// the apex map `f`, the other the diagonal into `s ×_b s`.
fn ambidexterity_unit(s: &Span, choice: &PullbackChoice) -> Result<CorrCell, CatError> {
    let cat = &s.ambient;
    let (comp, pb) = compose_spans_with_data(s, &reverse_span(s), choice)?;
    let mid = Span::new(cat, s.left_leg, s.left_leg)?;
    let leg_from = SpanMor::new(mid.clone(), identity_span(cat, s.left_foot), s.left_leg)?;
    let diag = mediating_morphism(cat, &pb, cat.identity(s.apex), cat.identity(s.apex))?;
    let leg_to = SpanMor::new(mid.clone(), comp, diag)?;
    CorrCell::new(mid, leg_from, leg_to)
}

/// The counit `reverse(S) ⊙ S => id_b`: mirror of the unit.
fn ambidexterity_counit(s: &Span, choice: &PullbackChoice) -> Result<CorrCell, CatError> {
    let cat = &s.ambient;
    let (comp, pb) = compose_spans_with_data(&reverse_span(s), s, choice)?;
    let mid = Span::new(cat, s.right_leg, s.right_leg)?;
    let diag = mediating_morphism(cat, &pb, cat.identity(s.apex), cat.identity(s.apex))?;
    let leg_from = SpanMor::new(mid.clone(), comp, diag)?;
    let leg_to = SpanMor::new(mid.clone(), identity_span(cat, s.right_foot), s.right_leg)?;
    CorrCell::new(mid, leg_from, leg_to)
}

/// The right adjoint of a span is its reverse; triangle identities hold up
/// to invertible 3-cells of the correspondence calculus.
pub fn span_right_adjoint(
    s: &Span,
    choice: &PullbackChoice,
) -> Result<AmbidextrousAdjunction, CatError> {
    let adj = AmbidextrousAdjunction {
        left: s.clone(),
        right: reverse_span(s),
        unit: ambidexterity_unit(s, choice)?,
        counit: ambidexterity_counit(s, choice)?,
    };
    corr_triangles(&adj, choice)?;
    Ok(adj)
}

/// The left adjoint of a span is also its reverse, witnessed by the 2-op
/// reversals of the right-adjunction cells.
pub fn span_left_adjoint(
    s: &Span,
    choice: &PullbackChoice,
) -> Result<AmbidextrousAdjunction, CatError> {
    let rev = reverse_span(s);
    let adj = AmbidextrousAdjunction {
        left: rev.clone(),
        right: s.clone(),
        unit: ambidexterity_counit(s, choice)?.reverse(),
        counit: ambidexterity_unit(s, choice)?.reverse(),
    };
    corr_triangles(&adj, choice)?;
    Ok(adj)
}

/// Self-duality data for an object of a finitely complete category: the unit
/// `1 -|> c⊗c` and counit `c⊗c -|> 1` built from the diagonal and the map to
/// the terminal object.
#[derive(Debug, Clone)]
pub struct DualityData {
    pub object: Obj,
    pub unit: Span,
    pub counit: Span,
    pub product: PullbackData,
    pub terminal: Obj,
}

fn projection_iso(cat: &FinCategory, pb: &PullbackData, keep_left: bool) -> Result<Mor, CatError> {
    let m = if keep_left { pb.to_left } else { pb.to_right };
    if is_iso(cat, m).is_none() {
        return Err(CatError::NoIsoWitness("unit-object projection is not invertible".into()));
    }
    Ok(m)
}

/// `a × (b × c) -> (a × b) × c`, the canonical re-association iso.
fn reassociate_product(
    cat: &FinCategory,
    choice: &PullbackChoice,
    a: Obj,
    b: Obj,
    c: Obj,
) -> Result<Mor, CatError> {
    let p_bc = choice.product(b, c)?;
    let p_a_bc = choice.product(a, p_bc.apex)?;
    let p_ab = choice.product(a, b)?;
    let p_ab_c = choice.product(p_ab.apex, c)?;
    let xa = p_a_bc.to_left;
    let xb = cat.compose(p_bc.to_left, p_a_bc.to_right)?;
    let xc = cat.compose(p_bc.to_right, p_a_bc.to_right)?;
    let into_ab = pair_into_product(cat, &p_ab, xa, xb)?;
    let m = pair_into_product(cat, &p_ab_c, into_ab, xc)?;
    if is_iso(cat, m).is_none() {
        return Err(CatError::NoIsoWitness("product re-association is not invertible".into()));
    }
    Ok(m)
}

fn compose_chain(spans: &[Span], choice: &PullbackChoice) -> Result<Span, CatError> {
    let mut acc = spans[0].clone();
    for s in &spans[1..] {
        acc = compose_spans(&acc, s, choice)?;
    }
    Ok(acc)
}

/// Builds the duality data for `c` and verifies both zig-zag composites are
/// isomorphic to the identity span.
pub fn duality_data(
    cat: &FinCategory,
    c: Obj,
    choice: &PullbackChoice,
) -> Result<DualityData, CatError> {
    let t = terminal_object(cat).ok_or_else(|| CatError::NoTerminal(cat.name().to_string()))?;
    let pi = cat.hom(c, t)[0];
    let prod = choice.product(c, c)?;
    let diag = pair_into_product(cat, &prod, cat.identity(c), cat.identity(c))?;
    let unit = Span::new(cat, pi, diag)?;
    let counit = Span::new(cat, diag, pi)?;
    let data = DualityData { object: c, unit, counit, product: prod, terminal: t };
    verify_zigzags(cat, &data, choice)?;
    Ok(data)
}

/// Checks both zig-zag composites against the identity span, conjugating by
/// the unit-object isomorphisms.
pub fn verify_zigzags(
    cat: &FinCategory,
    data: &DualityData,
    choice: &PullbackChoice,
) -> Result<(), CatError> {
    let c = data.object;
    let t = data.terminal;
    let id_c = identity_span(cat, c);

    // Zig-zag 1: c ≅ c⊗1 --id⊗unit--> c⊗(c⊗c) ≅ (c⊗c)⊗c --counit⊗id--> 1⊗c ≅ c.
    let p_c1 = choice.product(c, t)?;
    let p_1c = choice.product(t, c)?;
    let into = iota(
        cat,
        pair_into_product(cat, &p_c1, cat.identity(c), cat.hom(c, t)[0])?,
        IotaSide::Left,
    );
    let x1 = tensor_span(&id_c, &data.unit, choice)?;
    let reassoc = iota(cat, reassociate_product(cat, choice, c, c, c)?, IotaSide::Left);
    let x2 = tensor_span(&data.counit, &id_c, choice)?;
    let out = iota(cat, projection_iso(cat, &p_1c, false)?, IotaSide::Left);
    let z1 = compose_chain(&[into, x1, reassoc, x2, out], choice)?;
    if find_span_iso(&z1, &id_c).is_none() {
        return Err(CatError::ZigzagFailure { which: "first" });
    }

    // Zig-zag 2: c ≅ 1⊗c --unit⊗id--> (c⊗c)⊗c ≅ c⊗(c⊗c) --id⊗counit--> c⊗1 ≅ c.
    let into = iota(
        cat,
        pair_into_product(cat, &p_1c, cat.hom(c, t)[0], cat.identity(c))?,
        IotaSide::Left,
    );
    let y1 = tensor_span(&data.unit, &id_c, choice)?;
    let reassoc_inv = {
        let m = reassociate_product(cat, choice, c, c, c)?;
        iota(cat, is_iso(cat, m).expect("checked invertible"), IotaSide::Left)
    };
    let y2 = tensor_span(&id_c, &data.counit, choice)?;
    let out = iota(cat, projection_iso(cat, &p_c1, true)?, IotaSide::Left);
    let z2 = compose_chain(&[into, y1, reassoc_inv, y2, out], choice)?;
    if find_span_iso(&z2, &id_c).is_none() {
        return Err(CatError::ZigzagFailure { which: "second" });
    }
    Ok(())
}

/// The dual of a span under the self-duality of its feet: the conjugated
/// composite `(ε ⊗ id) ∘ (id ⊗ S ⊗ id) ∘ (id ⊗ η)`, returned with an
/// invertible comparison 2-cell to the reversed span.
pub fn dual_morphism(s: &Span, choice: &PullbackChoice) -> Result<(Span, SpanMor), CatError> {
    let cat = &s.ambient;
    let c = s.left_foot;
    let c2 = s.right_foot;
    let t = terminal_object(cat).ok_or_else(|| CatError::NoTerminal(cat.name().to_string()))?;
    let eta = duality_data(cat, c, choice)?.unit;
    let eps = duality_data(cat, c2, choice)?.counit;
    let id_c = identity_span(cat, c);
    let id_c2 = identity_span(cat, c2);

    let p_c2_1 = choice.product(c2, t)?;
    let into = iota(
        cat,
        pair_into_product(cat, &p_c2_1, cat.identity(c2), cat.hom(c2, t)[0])?,
        IotaSide::Left,
    );
    let x1 = tensor_span(&id_c2, &eta, choice)?;
    let reassoc = iota(cat, reassociate_product(cat, choice, c2, c, c)?, IotaSide::Left);
    let x2 = tensor_span(&tensor_span(&id_c2, s, choice)?, &id_c, choice)?;
    let x3 = tensor_span(&eps, &id_c, choice)?;
    let p_1c = choice.product(t, c)?;
    let out = iota(cat, projection_iso(cat, &p_1c, false)?, IotaSide::Left);

    let composite = compose_chain(&[into, x1, reassoc, x2, x3, out], choice)?;
    let expected = reverse_span(s);
    let witness = find_span_iso(&composite, &expected)
        .ok_or_else(|| CatError::NoIsoWitness("dual morphism does not match the reverse".into()))?;
    Ok((composite, witness))
}
