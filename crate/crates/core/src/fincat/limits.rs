use crate::error::CatError;

use super::category::{FinCategory, Mor, Obj};

/// A cospan `x --left--> s <--right-- y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cospan {
    pub left: Mor,
    pub right: Mor,
}

impl Cospan {
    pub fn new(cat: &FinCategory, left: Mor, right: Mor) -> Result<Self, CatError> {
        if cat.tgt(left) != cat.tgt(right) {
            return Err(CatError::FootMismatch {
                expected: cat.object_name(cat.tgt(left)).to_string(),
                found: cat.object_name(cat.tgt(right)).to_string(),
            });
        }
        Ok(Cospan { left, right })
    }

    pub fn left_foot(&self, cat: &FinCategory) -> Obj {
        cat.src(self.left)
    }

    pub fn right_foot(&self, cat: &FinCategory) -> Obj {
        cat.src(self.right)
    }
}

/// A verified pullback cone over a cospan: the square commutes and every
/// commuting cone factors through the apex uniquely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PullbackData {
    pub apex: Obj,
    /// Projection to the source of the cospan's left leg.
    pub to_left: Mor,
    /// Projection to the source of the cospan's right leg.
    pub to_right: Mor,
    pub cospan: Cospan,
}

/// `yes` iff some `g` satisfies `g∘f = id` and `f∘g = id`; the witness is
/// the inverse.
pub fn is_iso(cat: &FinCategory, f: Mor) -> Option<Mor> {
    let (a, b) = (cat.src(f), cat.tgt(f));
    let (ida, idb) = (cat.identity(a), cat.identity(b));
    cat.hom(b, a)
        .iter()
        .copied()
        .find(|&g| cat.compose_entry(g, f) == Some(ida) && cat.compose_entry(f, g) == Some(idb))
}

fn cone_commutes(cat: &FinCategory, cs: &Cospan, leg_left: Mor, leg_right: Mor) -> bool {
    cat.compose_entry(cs.left, leg_left) == cat.compose_entry(cs.right, leg_right)
}

/// Counts the mediators from a commuting cone `(apex, u, v)` into the
/// candidate cone `(t, p, q)`, stopping at two.
fn mediator_count(
    cat: &FinCategory,
    t: Obj,
    p: Mor,
    q: Mor,
    apex: Obj,
    u: Mor,
    v: Mor,
) -> (usize, Option<Mor>) {
    let mut found = None;
    let mut count = 0;
    for &w in cat.hom(apex, t) {
        if cat.compose_entry(p, w) == Some(u) && cat.compose_entry(q, w) == Some(v) {
            count += 1;
            if found.is_none() {
                found = Some(w);
            }
            if count > 1 {
                break;
            }
        }
    }
    (count, found)
}

/// Verifies the universal property of a given commuting square over `cs` by
/// enumerating all cones. The square need not use the chosen pullback.
pub fn is_pullback_square(cat: &FinCategory, to_left: Mor, to_right: Mor, cs: &Cospan) -> bool {
    if cat.src(to_left) != cat.src(to_right) {
        return false;
    }
    if cat.tgt(to_left) != cat.src(cs.left) || cat.tgt(to_right) != cat.src(cs.right) {
        return false;
    }
    if !cone_commutes(cat, cs, to_left, to_right) {
        return false;
    }
    let t = cat.src(to_left);
    for z in cat.objects() {
        for &u in cat.hom(z, cat.src(cs.left)) {
            for &v in cat.hom(z, cat.src(cs.right)) {
                if !cone_commutes(cat, cs, u, v) {
                    continue;
                }
                if mediator_count(cat, t, to_left, to_right, z, u, v).0 != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// The chosen pullback of a cospan, or `None` when no object carries a
/// universal cone.
///
/// The choice among isomorphic candidates is deterministic: lowest apex id,
/// then lowest projection ids.
pub fn pullback(cat: &FinCategory, cs: &Cospan) -> Option<PullbackData> {
    let x = cat.src(cs.left);
    let y = cat.src(cs.right);
    for t in cat.objects() {
        for &p in cat.hom(t, x) {
            for &q in cat.hom(t, y) {
                if !cone_commutes(cat, cs, p, q) {
                    continue;
                }
                if is_pullback_square(cat, p, q, cs) {
                    return Some(PullbackData { apex: t, to_left: p, to_right: q, cospan: *cs });
                }
            }
        }
    }
    None
}

/// The unique morphism from a commuting cone to the pullback apex.
pub fn mediating_morphism(
    cat: &FinCategory,
    pb: &PullbackData,
    cone_left: Mor,
    cone_right: Mor,
) -> Result<Mor, CatError> {
    if cat.src(cone_left) != cat.src(cone_right) {
        return Err(CatError::NonCommutingCone);
    }
    if cat.tgt(cone_left) != cat.tgt(pb.to_left) || cat.tgt(cone_right) != cat.tgt(pb.to_right) {
        return Err(CatError::NonCommutingCone);
    }
    if !cone_commutes(cat, &pb.cospan, cone_left, cone_right) {
        return Err(CatError::NonCommutingCone);
    }
    let apex = cat.src(cone_left);
    let (count, found) =
        mediator_count(cat, pb.apex, pb.to_left, pb.to_right, apex, cone_left, cone_right);
    match count {
        1 => Ok(found.unwrap()),
        0 => Err(CatError::CorruptPullback("no mediating morphism".into())),
        _ => Err(CatError::CorruptPullback("mediating morphism is not unique".into())),
    }
}

/// Object with exactly one morphism from every object, lowest id first.
pub fn terminal_object(cat: &FinCategory) -> Option<Obj> {
    cat.objects().find(|&t| cat.objects().all(|z| cat.hom(z, t).len() == 1))
}

/// Binary product, realized as the pullback over the terminal object.
pub fn binary_product(cat: &FinCategory, x: Obj, y: Obj) -> Result<Option<PullbackData>, CatError> {
    let t = terminal_object(cat).ok_or_else(|| CatError::NoTerminal(cat.name().to_string()))?;
    let cs = Cospan { left: cat.hom(x, t)[0], right: cat.hom(y, t)[0] };
    Ok(pullback(cat, &cs))
}
