use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::CatError;

use super::category::{FinCategory, Mor, Obj};
use super::functor::Functor;

/// Sources and targets swapped, composition transposed. An involution.
pub fn opposite(cat: &FinCategory) -> FinCategory {
    let name = match cat.name().strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{}^op", cat.name()),
    };
    let mut b = FinCategory::builder(name);
    let objs: Vec<Obj> = cat.objects().map(|o| b.add_object(cat.object_name(o))).collect();
    let mors: Vec<Mor> = cat
        .mors()
        .map(|m| b.add_mor(cat.mor_name(m), objs[cat.tgt(m).idx()], objs[cat.src(m).idx()]))
        .collect();
    for o in cat.objects() {
        b.set_identity(objs[o.idx()], mors[cat.identity(o).idx()]);
    }
    for f in cat.mors() {
        for &g in cat.mors_from(cat.tgt(f)) {
            if let Some(gf) = cat.compose_entry(g, f) {
                b.set_composite(mors[f.idx()], mors[g.idx()], mors[gf.idx()]);
            }
        }
    }
    b.build_unchecked()
}

/// A product category together with its projections and pair lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCat {
    pub cat: FinCategory,
    pub fst: Functor,
    pub snd: Functor,
    right_objects: usize,
    right_mors: usize,
}

impl ProductCat {
    pub fn pair_obj(&self, a: Obj, b: Obj) -> Obj {
        Obj((a.idx() * self.right_objects + b.idx()) as u32)
    }

    pub fn pair_mor(&self, f: Mor, g: Mor) -> Mor {
        Mor((f.idx() * self.right_mors + g.idx()) as u32)
    }

    pub fn split_obj(&self, o: Obj) -> (Obj, Obj) {
        (Obj((o.idx() / self.right_objects) as u32), Obj((o.idx() % self.right_objects) as u32))
    }

    pub fn split_mor(&self, m: Mor) -> (Mor, Mor) {
        (Mor((m.idx() / self.right_mors) as u32), Mor((m.idx() % self.right_mors) as u32))
    }
}

/// Objects and morphisms are pairs; composition is componentwise.
pub fn product_category(
    left: &FinCategory,
    right: &FinCategory,
    caps: &Caps,
) -> Result<ProductCat, CatError> {
    let mut b = FinCategory::builder(format!("{}x{}", left.name(), right.name()));
    for a in left.objects() {
        for x in right.objects() {
            b.add_object(format!("({},{})", left.object_name(a), right.object_name(x)));
        }
    }
    let ro = right.object_count();
    let rm = right.mor_count();
    for f in left.mors() {
        for g in right.mors() {
            let src = Obj((left.src(f).idx() * ro + right.src(g).idx()) as u32);
            let tgt = Obj((left.tgt(f).idx() * ro + right.tgt(g).idx()) as u32);
            b.add_mor(format!("({},{})", left.mor_name(f), right.mor_name(g)), src, tgt);
        }
    }
    let pm = |f: Mor, g: Mor| Mor((f.idx() * rm + g.idx()) as u32);
    for a in left.objects() {
        for x in right.objects() {
            let o = Obj((a.idx() * ro + x.idx()) as u32);
            b.set_identity(o, pm(left.identity(a), right.identity(x)));
        }
    }
    for f1 in left.mors() {
        for &g1 in left.mors_from(left.tgt(f1)) {
            let Some(c1) = left.compose_entry(g1, f1) else { continue };
            for f2 in right.mors() {
                for &g2 in right.mors_from(right.tgt(f2)) {
                    let Some(c2) = right.compose_entry(g2, f2) else { continue };
                    b.set_composite(pm(g1, g2), pm(f1, f2), pm(c1, c2));
                }
            }
        }
    }
    let cat = b.build_derived(caps, "product category")?;
    let fst = Functor::new(
        cat.clone(),
        left.clone(),
        cat.objects().map(|o| Obj((o.idx() / ro) as u32)).collect(),
        cat.mors().map(|m| Mor((m.idx() / rm) as u32)).collect(),
    );
    let snd = Functor::new(
        cat.clone(),
        right.clone(),
        cat.objects().map(|o| Obj((o.idx() % ro) as u32)).collect(),
        cat.mors().map(|m| Mor((m.idx() % rm) as u32)).collect(),
    );
    Ok(ProductCat { cat, fst, snd, right_objects: ro, right_mors: rm })
}

/// The two-sided slice `C_{/c,c'}`: objects are spans `c <- s -> c'`,
/// morphisms are apex maps commuting with both legs. This is the hom
/// category of the correspondence bicategory.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceCat {
    pub cat: FinCategory,
    /// Sends a span to its apex; preserves and creates pullbacks.
    pub forget: Functor,
    legs: Vec<(Mor, Mor)>,
    obj_index: BTreeMap<(Mor, Mor), Obj>,
    mor_index: BTreeMap<(Obj, Obj, Mor), Mor>,
}

impl SliceCat {
    /// The legs `(left, right)` of a slice object.
    pub fn legs(&self, o: Obj) -> (Mor, Mor) {
        self.legs[o.idx()]
    }

    pub fn object_of(&self, left_leg: Mor, right_leg: Mor) -> Option<Obj> {
        self.obj_index.get(&(left_leg, right_leg)).copied()
    }

    /// The slice morphism lying over an apex map, if the triangles commute.
    pub fn mor_of(&self, from: Obj, to: Obj, underlying: Mor) -> Option<Mor> {
        self.mor_index.get(&(from, to, underlying)).copied()
    }
}

pub fn slice2(cat: &FinCategory, c: Obj, c2: Obj, caps: &Caps) -> Result<SliceCat, CatError> {
    let mut legs = Vec::new();
    for s in cat.objects() {
        for &l in cat.hom(s, c) {
            for &r in cat.hom(s, c2) {
                legs.push((l, r));
            }
        }
    }

    let mut b = FinCategory::builder(format!(
        "{}/({},{})",
        cat.name(),
        cat.object_name(c),
        cat.object_name(c2)
    ));
    let mut obj_index = BTreeMap::new();
    for (i, &(l, r)) in legs.iter().enumerate() {
        let o = b.add_object(format!("<{}|{}>", cat.mor_name(l), cat.mor_name(r)));
        debug_assert_eq!(o.idx(), i);
        obj_index.insert((l, r), o);
    }

    // All apex maps with commuting leg triangles, identities included so the
    // forgetful functor's morphism map lines up with declaration order.
    let mut underlying = Vec::new();
    let mut mor_index = BTreeMap::new();
    for (i, &(l, r)) in legs.iter().enumerate() {
        for (j, &(l2, r2)) in legs.iter().enumerate() {
            let s = cat.src(l);
            let s2 = cat.src(l2);
            for &m in cat.hom(s, s2) {
                if cat.compose_entry(l2, m) == Some(l) && cat.compose_entry(r2, m) == Some(r) {
                    let from = Obj(i as u32);
                    let to = Obj(j as u32);
                    let sm = b.add_mor(format!("{}:{}->{}", cat.mor_name(m), i, j), from, to);
                    underlying.push(m);
                    mor_index.insert((from, to, m), sm);
                    if i == j && cat.is_identity(m) {
                        b.set_identity(from, sm);
                    }
                }
            }
        }
    }

    // Composition: compose apex maps in the ambient category.
    let entries: Vec<(Mor, Mor, Mor)> = {
        let mut out = Vec::new();
        let all: Vec<(Obj, Obj, Mor, Mor)> = mor_index
            .iter()
            .map(|(&(from, to, m), &sm)| (from, to, m, sm))
            .collect();
        let mut by_src: BTreeMap<Obj, Vec<(Obj, Mor, Mor)>> = BTreeMap::new();
        for &(from, to, m, sm) in &all {
            by_src.entry(from).or_default().push((to, m, sm));
        }
        for &(from, mid, m1, sm1) in &all {
            if let Some(outgoing) = by_src.get(&mid) {
                for &(to, m2, sm2) in outgoing {
                    let comp = cat.compose_entry(m2, m1).expect("apex maps compose");
                    let sm = mor_index[&(from, to, comp)];
                    out.push((sm2, sm1, sm));
                }
            }
        }
        out
    };
    for (g, f, gf) in entries {
        b.set_composite(g, f, gf);
    }

    let slice = b.build_derived(caps, "slice category")?;
    let forget = Functor::new(
        slice.clone(),
        cat.clone(),
        legs.iter().map(|&(l, _)| cat.src(l)).collect(),
        underlying.clone(),
    );
    Ok(SliceCat { cat: slice, forget, legs, obj_index, mor_index })
}
