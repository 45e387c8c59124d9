//! Two-sided fibrations over product bases: (co)cartesian arrow detection,
//! the fibration taxonomy, the two-sided Grothendieck construction, the
//! arrow/span/cocylinder fibrations, Beck-Chevalley for fibrations, and
//! adjointability of category-valued functors.

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::CatError;
use crate::fincat::{
    is_iso, is_pullback_square, opposite, product_category, Cospan, FinCategory, Functor, Mor,
    Obj, ProductCat,
};

/// A functor `p: E -> B` packaged for fibration classification, with the
/// product factor structure of the base when there is one.
#[derive(Debug, Clone)]
pub struct FiberedFunctor {
    pub projection: Functor,
    pub factor: Option<ProductCat>,
}

impl FiberedFunctor {
    pub fn total(&self) -> &FinCategory {
        &self.projection.source
    }

    pub fn base(&self) -> &FinCategory {
        &self.projection.target
    }

    pub fn factor(&self) -> Result<&ProductCat, CatError> {
        self.factor.as_ref().ok_or(CatError::NoFactorStructure)
    }

    /// The same fibration over the swapped product base.
    pub fn flip(&self, caps: &Caps) -> Result<FiberedFunctor, CatError> {
        let f = self.factor()?;
        let flipped = product_category(&f.snd.target, &f.fst.target, caps)?;
        let obj_map: Vec<Obj> = self
            .total()
            .objects()
            .map(|e| {
                let (a, b) = f.split_obj(self.projection.on_obj(e));
                flipped.pair_obj(b, a)
            })
            .collect();
        let mor_map: Vec<Mor> = self
            .total()
            .mors()
            .map(|m| {
                let (a, b) = f.split_mor(self.projection.on_mor(m));
                flipped.pair_mor(b, a)
            })
            .collect();
        let projection = Functor::new(self.total().clone(), flipped.cat.clone(), obj_map, mor_map);
        Ok(FiberedFunctor { projection, factor: Some(flipped) })
    }
}

/// `yes` iff every factorization of maps out of `f`'s source through `p(f)`
/// lifts uniquely.
pub fn is_cocartesian_arrow(p: &Functor, f: Mor) -> bool {
    let e2 = p.source.tgt(f);
    for &g in p.source.mors_from(p.source.src(f)) {
        let e3 = p.source.tgt(g);
        for &h in p.target.hom(p.on_obj(e2), p.on_obj(e3)) {
            if p.target.compose_entry(h, p.on_mor(f)) != Some(p.on_mor(g)) {
                continue;
            }
            let lifts = p
                .source
                .hom(e2, e3)
                .iter()
                .filter(|&&hb| p.on_mor(hb) == h && p.source.compose_entry(hb, f) == Some(g))
                .count();
            if lifts != 1 {
                return false;
            }
        }
    }
    true
}

/// Dual of [`is_cocartesian_arrow`].
pub fn is_cartesian_arrow(p: &Functor, f: Mor) -> bool {
    let e = p.source.src(f);
    let e2 = p.source.tgt(f);
    for g in p.source.mors() {
        if p.source.tgt(g) != e2 {
            continue;
        }
        let e0 = p.source.src(g);
        for &h in p.target.hom(p.on_obj(e0), p.on_obj(e)) {
            if p.target.compose_entry(p.on_mor(f), h) != Some(p.on_mor(g)) {
                continue;
            }
            let lifts = p
                .source
                .hom(e0, e)
                .iter()
                .filter(|&&hb| p.on_mor(hb) == h && p.source.compose_entry(f, hb) == Some(g))
                .count();
            if lifts != 1 {
                return false;
            }
        }
    }
    true
}

/// A cocartesian lift of `alpha` with source `e`, if one exists.
pub fn cocartesian_lift(p: &Functor, e: Obj, alpha: Mor) -> Option<Mor> {
    p.source
        .mors_from(e)
        .iter()
        .copied()
        .find(|&f| p.on_mor(f) == alpha && is_cocartesian_arrow(p, f))
}

/// A cartesian lift of `beta` with target `e`, if one exists.
pub fn cartesian_lift(p: &Functor, e: Obj, beta: Mor) -> Option<Mor> {
    p.source
        .mors()
        .find(|&f| p.source.tgt(f) == e && p.on_mor(f) == beta && is_cartesian_arrow(p, f))
}

fn cocartesian_fibration_witness(p: &Functor) -> Option<(Obj, Mor)> {
    for e in p.source.objects() {
        for &alpha in p.target.mors_from(p.on_obj(e)) {
            if cocartesian_lift(p, e, alpha).is_none() {
                return Some((e, alpha));
            }
        }
    }
    None
}

fn cartesian_fibration_witness(p: &Functor) -> Option<(Obj, Mor)> {
    for e in p.source.objects() {
        for beta in p.target.mors() {
            if p.target.tgt(beta) != p.on_obj(e) {
                continue;
            }
            if cartesian_lift(p, e, beta).is_none() {
                return Some((e, beta));
            }
        }
    }
    None
}

/// Lift existence for the two-sided taxonomy: cocartesian lifts of
/// `(α, id)` from every object, cartesian lifts of `(id, β)` into every
/// object.
fn lax_two_sided_witness(p: &FiberedFunctor) -> Result<Option<String>, CatError> {
    let f = p.factor()?;
    let proj = &p.projection;
    for e in p.total().objects() {
        let (c, d) = f.split_obj(proj.on_obj(e));
        for &alpha in f.fst.target.mors_from(c) {
            let lifted = f.pair_mor(alpha, f.snd.target.identity(d));
            if cocartesian_lift(proj, e, lifted).is_none() {
                return Ok(Some(format!(
                    "no cocartesian lift of ({}, id) at {}",
                    f.fst.target.mor_name(alpha),
                    p.total().object_name(e)
                )));
            }
        }
        for beta in f.snd.target.mors() {
            if f.snd.target.tgt(beta) != d {
                continue;
            }
            let lifted = f.pair_mor(f.fst.target.identity(c), beta);
            if cartesian_lift(proj, e, lifted).is_none() {
                return Ok(Some(format!(
                    "no cartesian lift of (id, {}) with target {}",
                    f.snd.target.mor_name(beta),
                    p.total().object_name(e)
                )));
            }
        }
    }
    Ok(None)
}

/// Decides `p`-bicartesianness of an arrow over `(α, β)` by factoring it
/// through a cocartesian lift of `(α, id)` and a cartesian lift of
/// `(id, β)` and testing the induced comparison map for invertibility.
pub fn is_bicartesian_arrow(p: &FiberedFunctor, m: Mor) -> Result<bool, CatError> {
    let f = p.factor()?;
    let proj = &p.projection;
    let total = p.total();
    let e = total.src(m);
    let e2 = total.tgt(m);
    let (alpha, beta) = f.split_mor(proj.on_mor(m));
    let (_, d) = f.split_obj(proj.on_obj(e));
    let (c2, _) = f.split_obj(proj.on_obj(e2));

    let up = cocartesian_lift(proj, e, f.pair_mor(alpha, f.snd.target.identity(d)))
        .ok_or_else(|| CatError::Other("missing cocartesian lift for bicartesian test".into()))?;
    let down = cartesian_lift(proj, e2, f.pair_mor(f.fst.target.identity(c2), beta))
        .ok_or_else(|| CatError::Other("missing cartesian lift for bicartesian test".into()))?;

    // m = h ∘ up with p(h) = (id, β), then h = down ∘ w with p(w) = id.
    let mid_up = total.tgt(up);
    let mid_down = total.src(down);
    let h = total
        .hom(mid_up, e2)
        .iter()
        .copied()
        .find(|&h| {
            proj.on_mor(h) == f.pair_mor(f.fst.target.identity(c2), beta)
                && total.compose_entry(h, up) == Some(m)
        })
        .ok_or_else(|| CatError::Other("cocartesian factorization failed".into()))?;
    let w = total
        .hom(mid_up, mid_down)
        .iter()
        .copied()
        .find(|&w| {
            proj.on_mor(w) == p.base().identity(proj.on_obj(mid_up))
                && total.compose_entry(down, w) == Some(h)
        })
        .ok_or_else(|| CatError::Other("cartesian factorization failed".into()))?;
    Ok(is_iso(total, w).is_some())
}

/// Closure of bicartesian arrows under composition.
fn two_sided_witness(p: &FiberedFunctor) -> Result<Option<String>, CatError> {
    let total = p.total();
    let bicart: Vec<bool> =
        total.mors().map(|m| is_bicartesian_arrow(p, m)).collect::<Result<_, _>>()?;
    for m1 in total.mors() {
        if !bicart[m1.idx()] {
            continue;
        }
        for &m2 in total.mors_from(total.tgt(m1)) {
            if !bicart[m2.idx()] {
                continue;
            }
            let comp = total.compose_entry(m2, m1).expect("composable");
            if !bicart[comp.idx()] {
                return Ok(Some(format!(
                    "bicartesian {} . {} composes to non-bicartesian {}",
                    total.mor_name(m2),
                    total.mor_name(m1),
                    total.mor_name(comp)
                )));
            }
        }
    }
    Ok(None)
}

/// The full subcategory of the total over one base object, with morphisms
/// over its identity.
pub fn extract_fiber(p: &Functor, b: Obj) -> FinCategory {
    let total = &p.source;
    let mut builder =
        FinCategory::builder(format!("{}|{}", total.name(), p.target.object_name(b)));
    let mut obj_of = BTreeMap::new();
    for e in total.objects() {
        if p.on_obj(e) == b {
            obj_of.insert(e, builder.add_object(total.object_name(e)));
        }
    }
    let idb = p.target.identity(b);
    let mut mor_of = BTreeMap::new();
    for m in total.mors() {
        if p.on_mor(m) == idb {
            if let (Some(&s), Some(&t)) = (obj_of.get(&total.src(m)), obj_of.get(&total.tgt(m))) {
                let nm = builder.add_mor(total.mor_name(m), s, t);
                mor_of.insert(m, nm);
                if total.is_identity(m) {
                    builder.set_identity(s, nm);
                }
            }
        }
    }
    for (&m1, &n1) in &mor_of {
        for (&m2, &n2) in &mor_of {
            if total.tgt(m1) == total.src(m2) {
                let comp = total.compose_entry(m2, m1).expect("composable in total");
                if let Some(&nc) = mor_of.get(&comp) {
                    builder.set_composite(n2, n1, nc);
                }
            }
        }
    }
    builder.build_unchecked()
}

fn fibers_are_groupoids(p: &Functor) -> Option<String> {
    for b in p.target.objects() {
        let fiber = extract_fiber(p, b);
        for m in fiber.mors() {
            if is_iso(&fiber, m).is_none() {
                return Some(format!(
                    "fiber over {} has non-invertible {}",
                    p.target.object_name(b),
                    fiber.mor_name(m)
                ));
            }
        }
    }
    None
}

/// The full classification of a fibered functor, with witnesses for each
/// negative flag.
#[derive(Debug, Clone, Default)]
pub struct FibrationReport {
    pub cocartesian_fibration: bool,
    pub cartesian_fibration: bool,
    pub lax_two_sided: bool,
    pub two_sided: bool,
    pub lax_two_sided_flipped: bool,
    pub two_sided_flipped: bool,
    pub bifibration: bool,
    pub bivariant: bool,
    pub beck_chevalley: Option<bool>,
    pub witnesses: Vec<(String, String)>,
}

impl FibrationReport {
    fn note(&mut self, flag: &str, witness: String) {
        self.witnesses.push((flag.to_string(), witness));
    }
}

/// Computes every taxonomy flag by enumeration. Beck-Chevalley is evaluated
/// only for bivariant fibrations; elsewhere it is left undecided.
pub fn classify_fibration(p: &FiberedFunctor, caps: &Caps) -> Result<FibrationReport, CatError> {
    p.projection.ensure_valid()?;
    let mut report = FibrationReport::default();

    match cocartesian_fibration_witness(&p.projection) {
        None => report.cocartesian_fibration = true,
        Some((e, alpha)) => report.note(
            "cocartesian",
            format!(
                "no cocartesian lift of {} at {}",
                p.base().mor_name(alpha),
                p.total().object_name(e)
            ),
        ),
    }
    match cartesian_fibration_witness(&p.projection) {
        None => report.cartesian_fibration = true,
        Some((e, beta)) => report.note(
            "cartesian",
            format!(
                "no cartesian lift of {} into {}",
                p.base().mor_name(beta),
                p.total().object_name(e)
            ),
        ),
    }

    if p.factor.is_some() {
        match lax_two_sided_witness(p)? {
            None => {
                report.lax_two_sided = true;
                match two_sided_witness(p)? {
                    None => report.two_sided = true,
                    Some(w) => report.note("two-sided", w),
                }
            }
            Some(w) => report.note("lax two-sided", w),
        }
        let flipped = p.flip(caps)?;
        match lax_two_sided_witness(&flipped)? {
            None => {
                report.lax_two_sided_flipped = true;
                match two_sided_witness(&flipped)? {
                    None => report.two_sided_flipped = true,
                    Some(w) => report.note("two-sided (flipped)", w),
                }
            }
            Some(w) => report.note("lax two-sided (flipped)", w),
        }

        if report.two_sided {
            match fibers_are_groupoids(&p.projection) {
                None => report.bifibration = true,
                Some(w) => report.note("bifibration", w),
            }
        }
        report.bivariant = report.cocartesian_fibration
            && report.cartesian_fibration
            && report.two_sided
            && report.two_sided_flipped;
        if report.bivariant {
            let (ok, witness) = beck_chevalley_fibration(p, caps)?;
            report.beck_chevalley = Some(ok);
            if let Some(w) = witness {
                report.note("beck-chevalley", w);
            }
        }
    }
    Ok(report)
}

/// Strict base change of `p` along `g: B' -> B`: objects are pairs
/// `(b', e)` with `g(b') = p(e)`.
pub fn base_change(p: &Functor, g: &Functor, caps: &Caps) -> Result<Functor, CatError> {
    let bprime = &g.source;
    let total = &p.source;
    let mut b = FinCategory::builder(format!("{}*{}", bprime.name(), total.name()));
    let mut obj_of = BTreeMap::new();
    for x in bprime.objects() {
        for e in total.objects() {
            if g.on_obj(x) == p.on_obj(e) {
                let o =
                    b.add_object(format!("({},{})", bprime.object_name(x), total.object_name(e)));
                obj_of.insert((x, e), o);
            }
        }
    }
    let mut mors = Vec::new();
    let mut mor_of = BTreeMap::new();
    for mx in bprime.mors() {
        for me in total.mors() {
            if g.on_mor(mx) != p.on_mor(me) {
                continue;
            }
            let s = obj_of[&(bprime.src(mx), total.src(me))];
            let t = obj_of[&(bprime.tgt(mx), total.tgt(me))];
            let nm = b.add_mor(format!("({},{})", bprime.mor_name(mx), total.mor_name(me)), s, t);
            if bprime.is_identity(mx) && total.is_identity(me) {
                b.set_identity(s, nm);
            }
            mor_of.insert((mx, me), nm);
            mors.push((mx, me, nm));
        }
    }
    for &(x1, e1, n1) in &mors {
        for &(x2, e2, n2) in &mors {
            if bprime.tgt(x1) != bprime.src(x2) || total.tgt(e1) != total.src(e2) {
                continue;
            }
            let cx = bprime.compose_entry(x2, x1).expect("composable");
            let ce = total.compose_entry(e2, e1).expect("composable");
            b.set_composite(n2, n1, mor_of[&(cx, ce)]);
        }
    }
    let cat = b.build_derived(caps, "base change total")?;
    let mut obj_map = vec![Obj(0); cat.object_count()];
    for (&(x, _), &o) in &obj_of {
        obj_map[o.idx()] = x;
    }
    let mut mor_map = vec![Mor(0); cat.mor_count()];
    for (&(mx, _), &nm) in &mor_of {
        mor_map[nm.idx()] = mx;
    }
    Ok(Functor::new(cat, bprime.clone(), obj_map, mor_map))
}

/// Every cartesian square of a category, as `(to_left, to_right, cospan)`.
pub fn cartesian_squares(cat: &FinCategory) -> Vec<(Mor, Mor, Cospan)> {
    let mut out = Vec::new();
    for left in cat.mors() {
        for right in cat.mors() {
            if cat.tgt(left) != cat.tgt(right) {
                continue;
            }
            let cs = Cospan { left, right };
            let x = cat.src(left);
            let y = cat.src(right);
            for w in cat.objects() {
                for &pm in cat.hom(w, x) {
                    for &q in cat.hom(w, y) {
                        if is_pullback_square(cat, pm, q, &cs) {
                            out.push((pm, q, cs));
                        }
                    }
                }
            }
        }
    }
    out
}

/// A cartesian square in one factor, constant in the other, as a functor
/// from the walking square product into the base.
fn square_functor(
    f: &ProductCat,
    square: &(Mor, Mor, Cospan),
    fixed: Obj,
    square_in_left: bool,
    caps: &Caps,
) -> Result<(Functor, ProductCat), CatError> {
    let arrow = crate::fixtures::walking_arrow();
    let grid = product_category(&arrow, &arrow, caps)?;
    let square_cat = if square_in_left { &f.fst.target } else { &f.snd.target };
    let (to_left, to_right, cs) = square;

    let corner = |i: usize, j: usize| -> Obj {
        match (i, j) {
            (0, 0) => square_cat.src(*to_left),
            (1, 0) => square_cat.src(cs.left),
            (0, 1) => square_cat.src(cs.right),
            _ => square_cat.tgt(cs.left),
        }
    };
    let edge = |from: (usize, usize), to: (usize, usize)| -> Mor {
        match (from, to) {
            ((0, 0), (1, 0)) => *to_left,
            ((0, 0), (0, 1)) => *to_right,
            ((1, 0), (1, 1)) => cs.left,
            ((0, 1), (1, 1)) => cs.right,
            ((0, 0), (1, 1)) => {
                square_cat.compose_entry(cs.left, *to_left).expect("square diagonal composes")
            }
            (a, b) if a == b => square_cat.identity(corner(a.0, a.1)),
            _ => unreachable!("no such edge in the walking square"),
        }
    };
    let grid_pos = |o: Obj| -> (usize, usize) { (o.idx() / 2, o.idx() % 2) };

    let obj_map: Vec<Obj> = grid
        .cat
        .objects()
        .map(|o| {
            let (i, j) = grid_pos(o);
            if square_in_left {
                f.pair_obj(corner(i, j), fixed)
            } else {
                f.pair_obj(fixed, corner(i, j))
            }
        })
        .collect();
    let mor_map: Vec<Mor> = grid
        .cat
        .mors()
        .map(|m| {
            let e = edge(grid_pos(grid.cat.src(m)), grid_pos(grid.cat.tgt(m)));
            if square_in_left {
                f.pair_mor(e, f.snd.target.identity(fixed))
            } else {
                f.pair_mor(f.fst.target.identity(fixed), e)
            }
        })
        .collect();
    let functor = Functor::new(grid.cat.clone(), f.cat.clone(), obj_map, mor_map);
    Ok((functor, grid))
}

/// Beck-Chevalley for a bivariant fibration over `C x D`: every base change
/// along a one-coordinate-constant cartesian square must be bivariant.
pub fn beck_chevalley_fibration(
    p: &FiberedFunctor,
    caps: &Caps,
) -> Result<(bool, Option<String>), CatError> {
    let f = p.factor()?;
    for side_left in [true, false] {
        let cat = if side_left { &f.fst.target } else { &f.snd.target };
        let other = if side_left { &f.snd.target } else { &f.fst.target };
        for square in cartesian_squares(cat) {
            for fixed in other.objects() {
                let (g, grid) = square_functor(f, &square, fixed, side_left, caps)?;
                let changed = base_change(&p.projection, &g, caps)?;
                let changed = FiberedFunctor { projection: changed, factor: Some(grid) };
                if !bivariant_only(&changed, caps)? {
                    let (to_left, _, cs) = square;
                    return Ok((
                        false,
                        Some(format!(
                            "base change along the square at apex {} over ({}, {}) with constant {} is not bivariant",
                            cat.object_name(cat.src(to_left)),
                            cat.mor_name(cs.left),
                            cat.mor_name(cs.right),
                            other.object_name(fixed)
                        )),
                    ));
                }
            }
        }
    }
    Ok((true, None))
}

/// Bivariance alone (no nested Beck-Chevalley), for base-change checks.
fn bivariant_only(p: &FiberedFunctor, caps: &Caps) -> Result<bool, CatError> {
    if cocartesian_fibration_witness(&p.projection).is_some()
        || cartesian_fibration_witness(&p.projection).is_some()
    {
        return Ok(false);
    }
    if lax_two_sided_witness(p)?.is_some() || two_sided_witness(p)?.is_some() {
        return Ok(false);
    }
    let flipped = p.flip(caps)?;
    Ok(lax_two_sided_witness(&flipped)?.is_none() && two_sided_witness(&flipped)?.is_none())
}

/// A strict functor into finite categories: one category per object, one
/// functor per morphism, with the functoriality tables checked.
#[derive(Debug, Clone)]
pub struct CatValuedFunctor {
    pub source: FinCategory,
    pub values: Vec<FinCategory>,
    pub actions: Vec<Functor>,
}

impl CatValuedFunctor {
    pub fn new(
        source: FinCategory,
        values: Vec<FinCategory>,
        actions: Vec<Functor>,
    ) -> Result<Self, CatError> {
        let h = CatValuedFunctor { source, values, actions };
        h.validate()?;
        Ok(h)
    }

    pub fn value(&self, o: Obj) -> &FinCategory {
        &self.values[o.idx()]
    }

    pub fn action(&self, m: Mor) -> &Functor {
        &self.actions[m.idx()]
    }

    fn validate(&self) -> Result<(), CatError> {
        if self.values.len() != self.source.object_count()
            || self.actions.len() != self.source.mor_count()
        {
            return Err(CatError::InvalidFunctor("value tables are not total".into()));
        }
        for m in self.source.mors() {
            let a = self.action(m);
            a.ensure_valid()?;
            if a.source != self.values[self.source.src(m).idx()]
                || a.target != self.values[self.source.tgt(m).idx()]
            {
                return Err(CatError::InvalidFunctor(format!(
                    "action of {} is mistyped",
                    self.source.mor_name(m)
                )));
            }
        }
        for o in self.source.objects() {
            let a = self.action(self.source.identity(o));
            if a.obj_map().iter().copied().ne(self.values[o.idx()].objects())
                || a.mor_map().iter().copied().ne(self.values[o.idx()].mors())
            {
                return Err(CatError::InvalidFunctor(format!(
                    "identity of {} does not act as the identity functor",
                    self.source.object_name(o)
                )));
            }
        }
        for f in self.source.mors() {
            for &g in self.source.mors_from(self.source.tgt(f)) {
                let gf = self.source.compose_entry(g, f).expect("composable");
                let composite = self.action(f).then(self.action(g));
                if composite.obj_map() != self.action(gf).obj_map()
                    || composite.mor_map() != self.action(gf).mor_map()
                {
                    return Err(CatError::InvalidFunctor(format!(
                        "strict functoriality fails on ({}, {})",
                        self.source.mor_name(g),
                        self.source.mor_name(f)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The cocartesian Grothendieck construction of `H`: objects `(b, x)`,
/// morphisms `(φ, ξ: H(φ)(x) -> x')`.
pub fn grothendieck_cocartesian(
    h: &CatValuedFunctor,
    factor: Option<&ProductCat>,
    caps: &Caps,
) -> Result<FiberedFunctor, CatError> {
    let base = &h.source;
    let mut b = FinCategory::builder(format!("int({})", base.name()));
    let mut obj_of = BTreeMap::new();
    for c in base.objects() {
        for x in h.value(c).objects() {
            let o =
                b.add_object(format!("({},{})", base.object_name(c), h.value(c).object_name(x)));
            obj_of.insert((c, x), o);
        }
    }
    let mut mors = Vec::new();
    let mut mor_of = BTreeMap::new();
    for phi in base.mors() {
        let (c, c2) = (base.src(phi), base.tgt(phi));
        for x in h.value(c).objects() {
            let pushed = h.action(phi).on_obj(x);
            for x2 in h.value(c2).objects() {
                for &xi in h.value(c2).hom(pushed, x2) {
                    let s = obj_of[&(c, x)];
                    let t = obj_of[&(c2, x2)];
                    let nm = b.add_mor(
                        format!(
                            "({},{}):{}->{}",
                            base.mor_name(phi),
                            h.value(c2).mor_name(xi),
                            s.idx(),
                            t.idx()
                        ),
                        s,
                        t,
                    );
                    if base.is_identity(phi) && h.value(c).is_identity(xi) {
                        b.set_identity(s, nm);
                    }
                    mor_of.insert((phi, x, xi), nm);
                    mors.push((phi, x, xi, nm));
                }
            }
        }
    }
    // (φ', ξ') ∘ (φ, ξ) = (φ'φ, ξ' ∘ H(φ')(ξ)).
    for &(phi1, x1, xi1, n1) in &mors {
        let mid_c = base.tgt(phi1);
        for &(phi2, x2, xi2, n2) in &mors {
            if base.src(phi2) != mid_c || x2 != h.value(mid_c).tgt(xi1) {
                continue;
            }
            let phic = base.compose_entry(phi2, phi1).expect("composable");
            let pushed_xi1 = h.action(phi2).on_mor(xi1);
            let val = h.value(base.tgt(phi2));
            let xi = val.compose_entry(xi2, pushed_xi1).expect("fiberwise composable");
            b.set_composite(n2, n1, mor_of[&(phic, x1, xi)]);
        }
    }
    let cat = b.build_derived(caps, "grothendieck total")?;
    let mut obj_map = vec![Obj(0); cat.object_count()];
    for (&(c, _), &o) in &obj_of {
        obj_map[o.idx()] = c;
    }
    let mut mor_map = vec![Mor(0); cat.mor_count()];
    for (&(phi, _, _), &nm) in &mor_of {
        mor_map[nm.idx()] = phi;
    }
    let projection = Functor::new(cat, base.clone(), obj_map, mor_map);
    projection.ensure_valid()?;
    Ok(FiberedFunctor { projection, factor: factor.cloned() })
}

/// The two-sided Grothendieck construction for `H: C x D^op -> Cat`.
///
/// `prod` presents `H`'s source as a product with right factor `D^op`. The
/// total category has objects `(c, d, x ∈ H(c,d))`; a morphism over
/// `(α, β)` is an arrow `H(α, id)(x) -> H(id, β°)(x')` inside `H(c', d)`.
/// The result projects to `C x D` and classifies as a two-sided fibration.
pub fn grothendieck_two_sided(
    h: &CatValuedFunctor,
    prod: &ProductCat,
    caps: &Caps,
) -> Result<FiberedFunctor, CatError> {
    let c_cat = prod.fst.target.clone();
    let dop_cat = prod.snd.target.clone();
    let d_cat = opposite(&dop_cat);
    let base = product_category(&c_cat, &d_cat, caps)?;

    let value_at = |c: Obj, d: Obj| -> &FinCategory { h.value(prod.pair_obj(c, d)) };

    let mut b = FinCategory::builder(format!("groth({})", h.source.name()));
    let mut obj_of = BTreeMap::new();
    for c in c_cat.objects() {
        for d in d_cat.objects() {
            for x in value_at(c, d).objects() {
                let o = b.add_object(format!(
                    "({},{},{})",
                    c_cat.object_name(c),
                    d_cat.object_name(d),
                    value_at(c, d).object_name(x)
                ));
                obj_of.insert((c, d, x), o);
            }
        }
    }

    struct Entry {
        alpha: Mor,
        beta: Mor,
        xi: Mor,
        mor: Mor,
        src: (Obj, Obj, Obj),
        tgt: (Obj, Obj, Obj),
    }
    let mut entries: Vec<Entry> = Vec::new();
    let mut mor_of = BTreeMap::new();
    for alpha in c_cat.mors() {
        let (c, c2) = (c_cat.src(alpha), c_cat.tgt(alpha));
        for beta in d_cat.mors() {
            // β of D shares its index with the reversed arrow of D^op.
            let (d, d2) = (d_cat.src(beta), d_cat.tgt(beta));
            let push = h.action(prod.pair_mor(alpha, dop_cat.identity(d)));
            let pull = h.action(prod.pair_mor(c_cat.identity(c2), beta));
            for x in value_at(c, d).objects() {
                for x2 in value_at(c2, d2).objects() {
                    for &xi in value_at(c2, d).hom(push.on_obj(x), pull.on_obj(x2)) {
                        let s = obj_of[&(c, d, x)];
                        let t = obj_of[&(c2, d2, x2)];
                        let nm = b.add_mor(
                            format!(
                                "({},{},{}):{}->{}",
                                c_cat.mor_name(alpha),
                                d_cat.mor_name(beta),
                                value_at(c2, d).mor_name(xi),
                                s.idx(),
                                t.idx()
                            ),
                            s,
                            t,
                        );
                        if c_cat.is_identity(alpha)
                            && d_cat.is_identity(beta)
                            && value_at(c, d).is_identity(xi)
                        {
                            b.set_identity(s, nm);
                        }
                        mor_of.insert((alpha, beta, x, x2, xi), nm);
                        entries.push(Entry {
                            alpha,
                            beta,
                            xi,
                            mor: nm,
                            src: (c, d, x),
                            tgt: (c2, d2, x2),
                        });
                    }
                }
            }
        }
    }

    // ξ'' = H(id, β°)(ξ') ∘ H(α', id)(ξ) inside H(c'', d).
    for e1 in &entries {
        for e2 in &entries {
            if e1.tgt != e2.src {
                continue;
            }
            let (_, d, x) = e1.src;
            let (c3, _, _) = e2.tgt;
            let alpha_c = c_cat.compose_entry(e2.alpha, e1.alpha).expect("composable");
            let beta_c = d_cat.compose_entry(e2.beta, e1.beta).expect("composable");
            let push2 = h.action(prod.pair_mor(e2.alpha, dop_cat.identity(d)));
            let pull1 = h.action(prod.pair_mor(c_cat.identity(c3), e1.beta));
            let step1 = push2.on_mor(e1.xi);
            let step2 = pull1.on_mor(e2.xi);
            let xi = value_at(c3, d).compose_entry(step2, step1).expect("fiberwise composable");
            let (_, _, x3) = e2.tgt;
            b.set_composite(e2.mor, e1.mor, mor_of[&(alpha_c, beta_c, x, x3, xi)]);
        }
    }

    let cat = b.build_derived(caps, "two-sided grothendieck total")?;
    let mut obj_map = vec![Obj(0); cat.object_count()];
    for (&(c, d, _), &o) in &obj_of {
        obj_map[o.idx()] = base.pair_obj(c, d);
    }
    let mut mor_map = vec![Mor(0); cat.mor_count()];
    for (&(alpha, beta, _, _, _), &nm) in &mor_of {
        mor_map[nm.idx()] = base.pair_mor(alpha, beta);
    }
    let projection = Functor::new(cat, base.cat.clone(), obj_map, mor_map);
    projection.ensure_valid()?;
    Ok(FiberedFunctor { projection, factor: Some(base) })
}

/// The arrow category with its target-source projection `(ev1, ev0)`.
pub fn arrow_fibration(cat: &FinCategory, caps: &Caps) -> Result<FiberedFunctor, CatError> {
    let base = product_category(cat, cat, caps)?;
    let mut b = FinCategory::builder(format!("Arr({})", cat.name()));
    for m in cat.mors() {
        b.add_object(format!("[{}]", cat.mor_name(m)));
    }
    let mut entries = Vec::new();
    let mut index = BTreeMap::new();
    for sigma in cat.mors() {
        for sigma2 in cat.mors() {
            for &u in cat.hom(cat.src(sigma), cat.src(sigma2)) {
                for &v in cat.hom(cat.tgt(sigma), cat.tgt(sigma2)) {
                    if cat.compose_entry(v, sigma) != cat.compose_entry(sigma2, u) {
                        continue;
                    }
                    let nm = b.add_mor(
                        format!(
                            "({},{}):{}->{}",
                            cat.mor_name(u),
                            cat.mor_name(v),
                            sigma.idx(),
                            sigma2.idx()
                        ),
                        Obj(sigma.0),
                        Obj(sigma2.0),
                    );
                    if cat.is_identity(u) && cat.is_identity(v) && sigma == sigma2 {
                        b.set_identity(Obj(sigma.0), nm);
                    }
                    index.insert((sigma, sigma2, u, v), nm);
                    entries.push((sigma, sigma2, u, v, nm));
                }
            }
        }
    }
    for &(s1, s2, u1, v1, n1) in &entries {
        for &(s2b, s3, u2, v2, n2) in &entries {
            if s2 != s2b {
                continue;
            }
            let u = cat.compose_entry(u2, u1).expect("composable");
            let v = cat.compose_entry(v2, v1).expect("composable");
            b.set_composite(n2, n1, index[&(s1, s3, u, v)]);
        }
    }
    let total = b.build_derived(caps, "arrow category")?;
    let mut mor_map = vec![Mor(0); total.mor_count()];
    for &(_, _, u, v, nm) in &entries {
        mor_map[nm.idx()] = base.pair_mor(v, u);
    }
    let obj_map: Vec<Obj> = cat.mors().map(|m| base.pair_obj(cat.tgt(m), cat.src(m))).collect();
    let projection = Functor::new(total, base.cat.clone(), obj_map, mor_map);
    projection.ensure_valid()?;
    Ok(FiberedFunctor { projection, factor: Some(base) })
}

/// The span category with its feet projection `q = (ev1, ev2)`.
pub fn span_fibration(cat: &FinCategory, caps: &Caps) -> Result<FiberedFunctor, CatError> {
    let base = product_category(cat, cat, caps)?;
    let spans = crate::spans::all_spans(cat);
    let mut b = FinCategory::builder(format!("Span({})", cat.name()));
    for s in &spans {
        b.add_object(format!("[{}|{}]", cat.mor_name(s.left_leg), cat.mor_name(s.right_leg)));
    }
    let mut entries = Vec::new();
    let mut index = BTreeMap::new();
    for (i, s) in spans.iter().enumerate() {
        for (j, s2) in spans.iter().enumerate() {
            for &u0 in cat.hom(s.apex, s2.apex) {
                for &u1 in cat.hom(s.left_foot, s2.left_foot) {
                    if cat.compose_entry(s2.left_leg, u0) != cat.compose_entry(u1, s.left_leg) {
                        continue;
                    }
                    for &u2 in cat.hom(s.right_foot, s2.right_foot) {
                        if cat.compose_entry(s2.right_leg, u0)
                            != cat.compose_entry(u2, s.right_leg)
                        {
                            continue;
                        }
                        let nm = b.add_mor(
                            format!(
                                "({},{},{}):{}->{}",
                                cat.mor_name(u0),
                                cat.mor_name(u1),
                                cat.mor_name(u2),
                                i,
                                j
                            ),
                            Obj(i as u32),
                            Obj(j as u32),
                        );
                        if i == j
                            && cat.is_identity(u0)
                            && cat.is_identity(u1)
                            && cat.is_identity(u2)
                        {
                            b.set_identity(Obj(i as u32), nm);
                        }
                        index.insert((i, j, u0, u1, u2), nm);
                        entries.push((i, j, u0, u1, u2, nm));
                    }
                }
            }
        }
    }
    for &(i, j, a0, a1, a2, n1) in &entries {
        for &(j2, k, b0, b1, b2, n2) in &entries {
            if j != j2 {
                continue;
            }
            let c0 = cat.compose_entry(b0, a0).expect("composable");
            let c1 = cat.compose_entry(b1, a1).expect("composable");
            let c2 = cat.compose_entry(b2, a2).expect("composable");
            b.set_composite(n2, n1, index[&(i, k, c0, c1, c2)]);
        }
    }
    let total = b.build_derived(caps, "span category")?;
    let mut mor_map = vec![Mor(0); total.mor_count()];
    for &(_, _, _, u1, u2, nm) in &entries {
        mor_map[nm.idx()] = base.pair_mor(u1, u2);
    }
    let obj_map: Vec<Obj> =
        spans.iter().map(|s| base.pair_obj(s.left_foot, s.right_foot)).collect();
    let projection = Functor::new(total, base.cat.clone(), obj_map, mor_map);
    projection.ensure_valid()?;
    Ok(FiberedFunctor { projection, factor: Some(base) })
}

/// The mapping cocylinder of `F: C -> D`: pairs `(c, σ: d -> F(c))`, a
/// representable bifibration whose fiberwise final objects recover `F`.
pub fn cocyl(fun: &Functor, caps: &Caps) -> Result<FiberedFunctor, CatError> {
    fun.ensure_valid()?;
    let c_cat = &fun.source;
    let d_cat = &fun.target;
    let base = product_category(c_cat, d_cat, caps)?;
    let mut b = FinCategory::builder(format!("Cocyl({})", c_cat.name()));
    let mut obj_of = BTreeMap::new();
    for c in c_cat.objects() {
        for sigma in d_cat.mors() {
            if d_cat.tgt(sigma) != fun.on_obj(c) {
                continue;
            }
            let o = b.add_object(format!("({},{})", c_cat.object_name(c), d_cat.mor_name(sigma)));
            obj_of.insert((c, sigma), o);
        }
    }
    let mut entries = Vec::new();
    let mut index = BTreeMap::new();
    for (&(c, sigma), &s) in &obj_of {
        for (&(c2, sigma2), &t) in &obj_of {
            for &u in c_cat.hom(c, c2) {
                for &g in d_cat.hom(d_cat.src(sigma), d_cat.src(sigma2)) {
                    // σ' ∘ g = F(u) ∘ σ.
                    if d_cat.compose_entry(sigma2, g) != d_cat.compose_entry(fun.on_mor(u), sigma)
                    {
                        continue;
                    }
                    let nm = b.add_mor(
                        format!(
                            "({},{}):{}->{}",
                            c_cat.mor_name(u),
                            d_cat.mor_name(g),
                            s.idx(),
                            t.idx()
                        ),
                        s,
                        t,
                    );
                    if c_cat.is_identity(u) && d_cat.is_identity(g) && s == t {
                        b.set_identity(s, nm);
                    }
                    index.insert((s, t, u, g), nm);
                    entries.push((s, t, u, g, nm));
                }
            }
        }
    }
    for &(s, t, u1, g1, n1) in &entries {
        for &(t2, w, u2, g2, n2) in &entries {
            if t != t2 {
                continue;
            }
            let u = c_cat.compose_entry(u2, u1).expect("composable");
            let g = d_cat.compose_entry(g2, g1).expect("composable");
            b.set_composite(n2, n1, index[&(s, w, u, g)]);
        }
    }
    let total = b.build_derived(caps, "cocylinder")?;
    let mut obj_map = vec![Obj(0); total.object_count()];
    for (&(c, sigma), &o) in &obj_of {
        obj_map[o.idx()] = base.pair_obj(c, d_cat.src(sigma));
    }
    let mut mor_map = vec![Mor(0); total.mor_count()];
    for &(_, _, u, g, nm) in &entries {
        mor_map[nm.idx()] = base.pair_mor(u, g);
    }
    let projection = Functor::new(total, base.cat.clone(), obj_map, mor_map);
    projection.ensure_valid()?;
    Ok(FiberedFunctor { projection, factor: Some(base) })
}

/// The fiber of the first projection over `c`: objects over `(c, -)` and
/// morphisms whose first component is `id_c`.
pub fn first_projection_fiber(p: &FiberedFunctor, c: Obj) -> Result<FinCategory, CatError> {
    let f = p.factor()?;
    let total = p.total();
    let proj = &p.projection;
    let mut builder =
        FinCategory::builder(format!("{}|p1={}", total.name(), f.fst.target.object_name(c)));
    let mut obj_of = BTreeMap::new();
    for e in total.objects() {
        if f.split_obj(proj.on_obj(e)).0 == c {
            obj_of.insert(e, builder.add_object(total.object_name(e)));
        }
    }
    let idc = f.fst.target.identity(c);
    let mut mor_of = BTreeMap::new();
    for m in total.mors() {
        if f.split_mor(proj.on_mor(m)).0 == idc {
            if let (Some(&s), Some(&t)) = (obj_of.get(&total.src(m)), obj_of.get(&total.tgt(m))) {
                let nm = builder.add_mor(total.mor_name(m), s, t);
                mor_of.insert(m, nm);
                if total.is_identity(m) {
                    builder.set_identity(s, nm);
                }
            }
        }
    }
    for (&m1, &n1) in &mor_of {
        for (&m2, &n2) in &mor_of {
            if total.tgt(m1) == total.src(m2) {
                let comp = total.compose_entry(m2, m1).expect("composable");
                if let Some(&nc) = mor_of.get(&comp) {
                    builder.set_composite(n2, n1, nc);
                }
            }
        }
    }
    Ok(builder.build_unchecked())
}

/// Outcome of the representability test for a bifibration.
#[derive(Debug, Clone)]
pub enum Representability {
    /// Every first-projection fiber has a final object; the induced object
    /// assignment is recorded.
    Representable { assignment: Vec<Obj> },
    NotRepresentable { fiber_over: Obj },
}

/// A bifibration is representable when every first-projection fiber has a
/// final object. Errors when the input is not a bifibration at all.
pub fn is_representable_bifibration(
    p: &FiberedFunctor,
    caps: &Caps,
) -> Result<Representability, CatError> {
    let report = classify_fibration(p, caps)?;
    if !report.bifibration {
        return Err(CatError::NotBifibration);
    }
    representable_assignment(p)
}

/// The object assignment induced by fiberwise final objects: `c` maps to
/// the second projection of the final object of `p1^{-1}(c)`.
pub fn representable_assignment(p: &FiberedFunctor) -> Result<Representability, CatError> {
    let f = p.factor()?;
    let mut out = Vec::new();
    for c in f.fst.target.objects() {
        let fiber = first_projection_fiber(p, c)?;
        let Some(final_obj) = crate::fincat::terminal_object(&fiber) else {
            return Ok(Representability::NotRepresentable { fiber_over: c });
        };
        let e = p
            .total()
            .find_object(fiber.object_name(final_obj))
            .expect("fiber objects are named after total objects");
        out.push(f.split_obj(p.projection.on_obj(e)).1);
    }
    Ok(Representability::Representable { assignment: out })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    Cocartesian,
    Cartesian,
    Bicartesian,
    Bivariant,
}

/// Checks that a functor between totals over the same base preserves the
/// arrow class named by `kind`. Returns the first violating arrow.
pub fn fibration_morphism_check(
    f: &Functor,
    p: &FiberedFunctor,
    q: &FiberedFunctor,
    kind: MorphismKind,
) -> Result<Option<Mor>, CatError> {
    f.ensure_valid()?;
    let composed = f.then(&q.projection);
    if composed.obj_map() != p.projection.obj_map() || composed.mor_map() != p.projection.mor_map()
    {
        return Err(CatError::ProjectionMismatch);
    }
    for m in p.total().mors() {
        let preserved = match kind {
            MorphismKind::Cocartesian => {
                !is_cocartesian_arrow(&p.projection, m)
                    || is_cocartesian_arrow(&q.projection, f.on_mor(m))
            }
            MorphismKind::Cartesian => {
                !is_cartesian_arrow(&p.projection, m)
                    || is_cartesian_arrow(&q.projection, f.on_mor(m))
            }
            MorphismKind::Bicartesian => {
                !is_bicartesian_arrow(p, m)? || is_bicartesian_arrow(q, f.on_mor(m))?
            }
            MorphismKind::Bivariant => {
                (!is_cocartesian_arrow(&p.projection, m)
                    || is_cocartesian_arrow(&q.projection, f.on_mor(m)))
                    && (!is_cartesian_arrow(&p.projection, m)
                        || is_cartesian_arrow(&q.projection, f.on_mor(m)))
            }
        };
        if !preserved {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// The comparison map from the arrow fibration to the span fibration:
/// precomposition with the span-shape collapse, sending `σ: x -> y` to the
/// span `y <-σ- x -id-> x`. A morphism of two-sided fibrations.
pub fn arrow_to_span_morphism(
    cat: &FinCategory,
    arrow: &FiberedFunctor,
    span: &FiberedFunctor,
) -> Result<Functor, CatError> {
    let spans = crate::spans::all_spans(cat);
    let span_index = |left_leg: Mor, right_leg: Mor| -> Obj {
        Obj(spans
            .iter()
            .position(|s| s.left_leg == left_leg && s.right_leg == right_leg)
            .expect("span exists") as u32)
    };
    let obj_map: Vec<Obj> = cat.mors().map(|m| span_index(m, cat.identity(cat.src(m)))).collect();
    let mut mor_map = Vec::with_capacity(arrow.total().mor_count());
    for m in arrow.total().mors() {
        // The image's right legs are identities, so the lift over the same
        // base pair between the image objects is unique.
        let (v, u) = arrow.factor()?.split_mor(arrow.projection.on_mor(m));
        let src_span = obj_map[arrow.total().src(m).idx()];
        let tgt_span = obj_map[arrow.total().tgt(m).idx()];
        let want = span.factor()?.pair_mor(v, u);
        let target_mor = span
            .total()
            .hom(src_span, tgt_span)
            .iter()
            .copied()
            .find(|&sm| span.projection.on_mor(sm) == want)
            .ok_or_else(|| CatError::Other("missing span image morphism".into()))?;
        mor_map.push(target_mor);
    }
    let functor = Functor::new(arrow.total().clone(), span.total().clone(), obj_map, mor_map);
    functor.ensure_valid()?;
    Ok(functor)
}

/// Enumerates strict functors between totals commuting with the projections.
fn functors_over_base(p: &FiberedFunctor, r: &FiberedFunctor) -> Vec<Functor> {
    fn assign_objects(
        p: &FiberedFunctor,
        r: &FiberedFunctor,
        obj_map: &mut Vec<Obj>,
        results: &mut Vec<Functor>,
    ) {
        if obj_map.len() == p.total().object_count() {
            let mut mor_map = Vec::new();
            assign_morphisms(p, r, obj_map, &mut mor_map, results);
            return;
        }
        let e = Obj(obj_map.len() as u32);
        let be = p.projection.on_obj(e);
        for cand in r.total().objects() {
            if r.projection.on_obj(cand) != be {
                continue;
            }
            obj_map.push(cand);
            assign_objects(p, r, obj_map, results);
            obj_map.pop();
        }
    }

    fn assign_morphisms(
        p: &FiberedFunctor,
        r: &FiberedFunctor,
        obj_map: &[Obj],
        mor_map: &mut Vec<Mor>,
        results: &mut Vec<Functor>,
    ) {
        let total_p = p.total();
        let total_r = r.total();
        if mor_map.len() == total_p.mor_count() {
            let functor =
                Functor::new(total_p.clone(), total_r.clone(), obj_map.to_vec(), mor_map.clone());
            if functor.is_functor() {
                results.push(functor);
            }
            return;
        }
        let m = Mor(mor_map.len() as u32);
        let (s, t) = (total_p.src(m), total_p.tgt(m));
        let bm = p.projection.on_mor(m);
        for &cand in total_r.hom(obj_map[s.idx()], obj_map[t.idx()]) {
            if r.projection.on_mor(cand) != bm {
                continue;
            }
            mor_map.push(cand);
            // Functoriality pruning on pairs among assigned morphisms.
            let ok = (0..mor_map.len() as u32 - 1).map(Mor).all(|prev| {
                let check = |g: Mor, f: Mor| -> bool {
                    if total_p.tgt(f) != total_p.src(g) {
                        return true;
                    }
                    let gf = total_p.compose_entry(g, f).expect("composable");
                    if gf.idx() >= mor_map.len() {
                        return true;
                    }
                    total_r.compose_entry(mor_map[g.idx()], mor_map[f.idx()])
                        == Some(mor_map[gf.idx()])
                };
                check(m, prev) && check(prev, m)
            });
            if ok {
                assign_morphisms(p, r, obj_map, mor_map, results);
            }
            mor_map.pop();
        }
    }

    let mut results = Vec::new();
    let mut obj_map = Vec::new();
    assign_objects(p, r, &mut obj_map, &mut results);
    results
}

const UNIVER_MOR_CAP: usize = 8;

fn ensure_tiny(cat: &FinCategory) -> Result<(), CatError> {
    if cat.mor_count() > UNIVER_MOR_CAP {
        return Err(CatError::Overflow {
            what: "universal-property base",
            size: cat.mor_count(),
            limit: UNIVER_MOR_CAP,
        });
    }
    Ok(())
}

fn functor_key(f: &Functor) -> (Vec<Obj>, Vec<Mor>) {
    (f.obj_map().to_vec(), f.mor_map().to_vec())
}

/// Instance check of the span fibration's universal property: precomposition
/// with the arrow-to-span comparison must biject morphisms of cocartesian
/// and two-sided fibrations `span -> r` with morphisms of two-sided
/// fibrations `arrow -> r`. Exhaustive, so hard-capped at tiny bases.
pub fn univer_span_bijection(
    cat: &FinCategory,
    r: &FiberedFunctor,
    caps: &Caps,
) -> Result<bool, CatError> {
    ensure_tiny(cat)?;
    let arrow = arrow_fibration(cat, caps)?;
    let span = span_fibration(cat, caps)?;
    let phi = arrow_to_span_morphism(cat, &arrow, &span)?;

    let mut lhs = Vec::new();
    for g in functors_over_base(&span, r) {
        if fibration_morphism_check(&g, &span, r, MorphismKind::Cocartesian)?.is_none()
            && fibration_morphism_check(&g, &span, r, MorphismKind::Bicartesian)?.is_none()
        {
            lhs.push(g);
        }
    }
    let mut rhs_keys = Vec::new();
    for h in functors_over_base(&arrow, r) {
        if fibration_morphism_check(&h, &arrow, r, MorphismKind::Bicartesian)?.is_none() {
            rhs_keys.push(functor_key(&h));
        }
    }

    let mut images: Vec<_> = lhs.iter().map(|g| functor_key(&phi.then(g))).collect();
    images.sort();
    let before = images.len();
    images.dedup();
    if images.len() != before {
        return Ok(false);
    }
    rhs_keys.sort();
    Ok(images == rhs_keys)
}

/// Instance check of the arrow fibration's universal property: morphisms of
/// two-sided fibrations `arrow -> r` biject with diagonal sections of `r`
/// sending every arrow to a bicartesian arrow.
pub fn univer_arrow_bijection(
    cat: &FinCategory,
    r: &FiberedFunctor,
    caps: &Caps,
) -> Result<bool, CatError> {
    ensure_tiny(cat)?;
    let arrow = arrow_fibration(cat, caps)?;
    let rf = r.factor()?;

    let mut lhs = Vec::new();
    for h in functors_over_base(&arrow, r) {
        if fibration_morphism_check(&h, &arrow, r, MorphismKind::Bicartesian)?.is_none() {
            lhs.push(h);
        }
    }

    // Sections over the diagonal sending arrows to bicartesian arrows,
    // enumerated as functors C -> total over Δ.
    let diag_obj: Vec<Obj> = cat.objects().map(|c| rf.pair_obj(c, c)).collect();
    let diag_mor: Vec<Mor> = cat.mors().map(|m| rf.pair_mor(m, m)).collect();
    let diag = Functor::new(cat.clone(), rf.cat.clone(), diag_obj, diag_mor);
    let shaped = FiberedFunctor { projection: diag, factor: Some(rf.clone()) };
    let mut sections = Vec::new();
    for s in functors_over_base(&shaped, r) {
        let bicart_image = cat
            .mors()
            .map(|m| is_bicartesian_arrow(r, s.on_mor(m)))
            .collect::<Result<Vec<_>, _>>()?;
        if bicart_image.into_iter().all(|x| x) {
            sections.push(functor_key(&s));
        }
    }

    // ψ: C -> arrow total sends c to [id_c] and α to the (α, α) square.
    let arrow_total = arrow.total();
    let psi_obj: Vec<Obj> = cat.objects().map(|c| Obj(cat.identity(c).0)).collect();
    let psi_mor: Vec<Mor> = cat
        .mors()
        .map(|alpha| {
            let s = Obj(cat.identity(cat.src(alpha)).0);
            let t = Obj(cat.identity(cat.tgt(alpha)).0);
            arrow_total
                .hom(s, t)
                .iter()
                .copied()
                .find(|&m| {
                    arrow.projection.on_mor(m) == arrow.factor().unwrap().pair_mor(alpha, alpha)
                })
                .expect("diagonal lift exists")
        })
        .collect();
    let psi = Functor::new(cat.clone(), arrow_total.clone(), psi_obj, psi_mor);
    psi.ensure_valid()?;

    let mut images: Vec<_> = lhs.iter().map(|h| functor_key(&psi.then(h))).collect();
    images.sort();
    let before = images.len();
    images.dedup();
    if images.len() != before {
        return Ok(false);
    }
    sections.sort();
    sections.dedup();
    Ok(images == sections)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjSide {
    Left,
    Right,
}

/// A constructed functor adjunction; triangle identities hold strictly by
/// construction from the comma universal property.
#[derive(Debug, Clone)]
pub struct FunctorAdjunction {
    pub left: Functor,
    pub right: Functor,
    pub unit: Vec<Mor>,
    pub counit: Vec<Mor>,
}

/// The right adjoint of `F` by the comma-category construction: for every
/// target object the comma `(F ↓ b)` must have a terminal object.
pub fn find_functor_right_adjoint(f: &Functor) -> Result<Option<FunctorAdjunction>, CatError> {
    f.ensure_valid()?;
    let a_cat = &f.source;
    let b_cat = &f.target;

    let mut g_obj: Vec<Obj> = Vec::new();
    let mut counit: Vec<Mor> = Vec::new();
    for b in b_cat.objects() {
        let mut found = None;
        'cand: for a0 in a_cat.objects() {
            for &eps in b_cat.hom(f.on_obj(a0), b) {
                let universal = a_cat.objects().all(|a| {
                    b_cat.hom(f.on_obj(a), b).iter().all(|&m| {
                        a_cat
                            .hom(a, a0)
                            .iter()
                            .filter(|&&u| b_cat.compose_entry(eps, f.on_mor(u)) == Some(m))
                            .count()
                            == 1
                    })
                });
                if universal {
                    found = Some((a0, eps));
                    break 'cand;
                }
            }
        }
        match found {
            Some((a0, eps)) => {
                g_obj.push(a0);
                counit.push(eps);
            }
            None => return Ok(None),
        }
    }

    let mut g_mor = Vec::new();
    for m in b_cat.mors() {
        let (b1, b2) = (b_cat.src(m), b_cat.tgt(m));
        let want = b_cat.compose(m, counit[b1.idx()])?;
        let u = a_cat
            .hom(g_obj[b1.idx()], g_obj[b2.idx()])
            .iter()
            .copied()
            .find(|&u| b_cat.compose_entry(counit[b2.idx()], f.on_mor(u)) == Some(want))
            .ok_or_else(|| CatError::Other("comma terminality violated; engine bug".into()))?;
        g_mor.push(u);
    }
    let g = Functor::new(b_cat.clone(), a_cat.clone(), g_obj, g_mor);
    g.ensure_valid()?;

    let mut unit = Vec::new();
    for a in a_cat.objects() {
        let fb = f.on_obj(a);
        let u = a_cat
            .hom(a, g.on_obj(fb))
            .iter()
            .copied()
            .find(|&u| {
                b_cat.compose_entry(counit[fb.idx()], f.on_mor(u)) == Some(b_cat.identity(fb))
            })
            .ok_or_else(|| CatError::Other("unit construction failed; engine bug".into()))?;
        unit.push(u);
    }
    Ok(Some(FunctorAdjunction { left: f.clone(), right: g, unit, counit }))
}

fn op_functor(f: &Functor) -> Functor {
    Functor::new(
        opposite(&f.source),
        opposite(&f.target),
        f.obj_map().to_vec(),
        f.mor_map().to_vec(),
    )
}

/// The left adjoint of `F`, via right adjoints between opposites.
pub fn find_functor_left_adjoint(f: &Functor) -> Result<Option<FunctorAdjunction>, CatError> {
    Ok(find_functor_right_adjoint(&op_functor(f))?.map(|adj| FunctorAdjunction {
        left: Functor::new(
            f.target.clone(),
            f.source.clone(),
            adj.right.obj_map().to_vec(),
            adj.right.mor_map().to_vec(),
        ),
        right: f.clone(),
        unit: adj.counit,
        counit: adj.unit,
    }))
}

/// What breaks adjointability of a value square.
#[derive(Debug, Clone)]
pub enum AdjointabilityFailure {
    /// Some vertical has no adjoint at the recorded base arrows.
    MissingAdjoint { alpha: Mor, beta: Mor },
    /// The mate is not invertible at the recorded fiber object.
    NonInvertibleMate { alpha: Mor, beta: Mor, at: Obj },
}

/// Vertical right adjointability of a strictly commuting square of
/// categories, with the mate computed from the comma-built adjoints.
fn square_vertically_right_adjointable(
    top: &Functor,    // α': E00 -> E10
    left: &Functor,   // β': E00 -> E01
    right: &Functor,  // β:  E10 -> E11
    bottom: &Functor, // α:  E01 -> E11
) -> Result<Result<(), Option<Obj>>, CatError> {
    let Some(adj_right) = find_functor_right_adjoint(right)? else {
        return Ok(Err(None));
    };
    let Some(adj_left) = find_functor_right_adjoint(left)? else {
        return Ok(Err(None));
    };
    // Mate at x in E01: G_β(α(ε_{β'x})) ∘ η_β at α'(G_{β'}(x)).
    let e10 = &top.target;
    for x in bottom.source.objects() {
        let gx = adj_left.right.on_obj(x);
        let start = top.on_obj(gx);
        let eta = adj_right.unit[start.idx()];
        let eps = adj_left.counit[x.idx()];
        let step = adj_right.right.on_mor(bottom.on_mor(eps));
        let mate = e10.compose(step, eta)?;
        if is_iso(e10, mate).is_none() {
            return Ok(Err(Some(x)));
        }
    }
    Ok(Ok(()))
}

/// Adjointability of every value square of `H` in the chosen coordinate and
/// direction. `None` means adjointable everywhere.
pub fn functor_adjointable(
    h: &CatValuedFunctor,
    prod: &ProductCat,
    coordinate: Coordinate,
    side: AdjSide,
) -> Result<Option<AdjointabilityFailure>, CatError> {
    let c_cat = &prod.fst.target;
    let d_cat = &prod.snd.target;
    for alpha in c_cat.mors() {
        for beta in d_cat.mors() {
            let (c, c2) = (c_cat.src(alpha), c_cat.tgt(alpha));
            let (d, d2) = (d_cat.src(beta), d_cat.tgt(beta));
            // Verticals run in the chosen coordinate's direction.
            let (top, left, right, bottom) = match coordinate {
                Coordinate::Second => (
                    h.action(prod.pair_mor(alpha, d_cat.identity(d))),
                    h.action(prod.pair_mor(c_cat.identity(c), beta)),
                    h.action(prod.pair_mor(c_cat.identity(c2), beta)),
                    h.action(prod.pair_mor(alpha, d_cat.identity(d2))),
                ),
                Coordinate::First => (
                    h.action(prod.pair_mor(c_cat.identity(c), beta)),
                    h.action(prod.pair_mor(alpha, d_cat.identity(d))),
                    h.action(prod.pair_mor(alpha, d_cat.identity(d2))),
                    h.action(prod.pair_mor(c_cat.identity(c2), beta)),
                ),
            };
            let verdict = match side {
                AdjSide::Right => square_vertically_right_adjointable(top, left, right, bottom)?,
                AdjSide::Left => {
                    // Left adjointability = right adjointability of opposites.
                    square_vertically_right_adjointable(
                        &op_functor(top),
                        &op_functor(left),
                        &op_functor(right),
                        &op_functor(bottom),
                    )?
                }
            };
            match verdict {
                Ok(()) => {}
                Err(None) => {
                    return Ok(Some(AdjointabilityFailure::MissingAdjoint { alpha, beta }))
                }
                Err(Some(at)) => {
                    return Ok(Some(AdjointabilityFailure::NonInvertibleMate { alpha, beta, at }))
                }
            }
        }
    }
    Ok(None)
}
