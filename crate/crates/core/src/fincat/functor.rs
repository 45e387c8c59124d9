use std::collections::BTreeSet;

use crate::error::CatError;

use super::category::{FinCategory, Mor, Obj};
use super::limits::{self, Cospan};

/// A strict functor between finite categories, with total object and
/// morphism maps. Law preservation is checked, not assumed: see
/// [`Functor::check`].
#[derive(Debug, Clone, PartialEq)]
pub struct Functor {
    pub source: FinCategory,
    pub target: FinCategory,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

/// Witness of a broken functor law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    Identity { object: String },
    SourceTyping { morphism: String },
    TargetTyping { morphism: String },
    Composition { g: String, f: String },
}

impl Functor {
    pub fn new(
        source: FinCategory,
        target: FinCategory,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Self {
        assert_eq!(obj_map.len(), source.object_count());
        assert_eq!(mor_map.len(), source.mor_count());
        Functor { source, target, obj_map, mor_map }
    }

    pub fn identity(cat: &FinCategory) -> Self {
        Functor {
            source: cat.clone(),
            target: cat.clone(),
            obj_map: cat.objects().collect(),
            mor_map: cat.mors().collect(),
        }
    }

    /// Constant functor at an object of the target.
    pub fn constant(source: &FinCategory, target: &FinCategory, at: Obj) -> Self {
        Functor {
            source: source.clone(),
            target: target.clone(),
            obj_map: source.objects().map(|_| at).collect(),
            mor_map: source.mors().map(|_| target.identity(at)).collect(),
        }
    }

    pub fn on_obj(&self, o: Obj) -> Obj {
        self.obj_map[o.idx()]
    }

    pub fn on_mor(&self, m: Mor) -> Mor {
        self.mor_map[m.idx()]
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[Mor] {
        &self.mor_map
    }

    /// `F` then `G`, as a single functor.
    pub fn then(&self, other: &Functor) -> Functor {
        debug_assert_eq!(self.target.object_count(), other.source.object_count());
        Functor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.on_obj(o)).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.on_mor(m)).collect(),
        }
    }

    /// Checks every functor law; `None` means all hold.
    pub fn check(&self) -> Option<FunctorViolation> {
        for o in self.source.objects() {
            if self.on_mor(self.source.identity(o)) != self.target.identity(self.on_obj(o)) {
                return Some(FunctorViolation::Identity {
                    object: self.source.object_name(o).to_string(),
                });
            }
        }
        for m in self.source.mors() {
            if self.target.src(self.on_mor(m)) != self.on_obj(self.source.src(m)) {
                return Some(FunctorViolation::SourceTyping {
                    morphism: self.source.mor_name(m).to_string(),
                });
            }
            if self.target.tgt(self.on_mor(m)) != self.on_obj(self.source.tgt(m)) {
                return Some(FunctorViolation::TargetTyping {
                    morphism: self.source.mor_name(m).to_string(),
                });
            }
        }
        for f in self.source.mors() {
            for &g in self.source.mors_from(self.source.tgt(f)) {
                let gf = self.source.compose_entry(g, f);
                let image = self.target.compose_entry(self.on_mor(g), self.on_mor(f));
                if gf.map(|m| self.on_mor(m)) != image {
                    return Some(FunctorViolation::Composition {
                        g: self.source.mor_name(g).to_string(),
                        f: self.source.mor_name(f).to_string(),
                    });
                }
            }
        }
        None
    }

    pub fn is_functor(&self) -> bool {
        self.check().is_none()
    }

    pub fn ensure_valid(&self) -> Result<(), CatError> {
        match self.check() {
            None => Ok(()),
            Some(v) => Err(CatError::InvalidFunctor(format!("{v:?}"))),
        }
    }
}

/// `yes` iff for every cospan in the source possessing a pullback, the image
/// of the chosen pullback square is universal in the target. Returns a
/// counterexample cospan otherwise.
pub fn preserves_pullbacks(fun: &Functor) -> Result<Option<Cospan>, CatError> {
    fun.ensure_valid()?;
    let src = &fun.source;
    for left in src.mors() {
        for right in src.mors() {
            if src.tgt(left) != src.tgt(right) {
                continue;
            }
            let cs = Cospan { left, right };
            let Some(pb) = limits::pullback(src, &cs) else { continue };
            let image_cs = Cospan { left: fun.on_mor(left), right: fun.on_mor(right) };
            if !limits::is_pullback_square(
                &fun.target,
                fun.on_mor(pb.to_left),
                fun.on_mor(pb.to_right),
                &image_cs,
            ) {
                return Ok(Some(cs));
            }
        }
    }
    Ok(None)
}

/// A natural transformation between parallel functors, stored by its
/// components.
#[derive(Debug, Clone, PartialEq)]
pub struct NatTrans {
    pub source: Functor,
    pub target: Functor,
    components: Vec<Mor>,
}

impl NatTrans {
    /// Builds and checks naturality on every morphism of the source.
    pub fn new(source: Functor, target: Functor, components: Vec<Mor>) -> Result<Self, CatError> {
        let nt = NatTrans { source, target, components };
        nt.check()?;
        Ok(nt)
    }

    pub fn component(&self, o: Obj) -> Mor {
        self.components[o.idx()]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }

    fn check(&self) -> Result<(), CatError> {
        let cat = &self.source.target;
        for o in self.source.source.objects() {
            let c = self.component(o);
            if cat.src(c) != self.source.on_obj(o) || cat.tgt(c) != self.target.on_obj(o) {
                return Err(CatError::InvalidNatTrans(format!(
                    "component at {} is mistyped",
                    self.source.source.object_name(o)
                )));
            }
        }
        for m in self.source.source.mors() {
            let (a, b) = (self.source.source.src(m), self.source.source.tgt(m));
            let lhs = cat.compose_entry(self.component(b), self.source.on_mor(m));
            let rhs = cat.compose_entry(self.target.on_mor(m), self.component(a));
            if lhs != rhs || lhs.is_none() {
                return Err(CatError::InvalidNatTrans(format!(
                    "naturality fails at {}",
                    self.source.source.mor_name(m)
                )));
            }
        }
        Ok(())
    }
}

/// Equivalence flags for a functor: fully faithful is checked on every
/// hom-set by bijection, essential surjectivity by iso search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub fully_faithful: bool,
    pub essentially_surjective: bool,
}

impl EquivalenceReport {
    pub fn is_equivalence(&self) -> bool {
        self.fully_faithful && self.essentially_surjective
    }
}

pub fn is_equivalence(fun: &Functor) -> Result<EquivalenceReport, CatError> {
    fun.ensure_valid()?;
    let src = &fun.source;
    let tgt = &fun.target;

    let mut fully_faithful = true;
    'outer: for a in src.objects() {
        for b in src.objects() {
            let dom = src.hom(a, b);
            let cod = tgt.hom(fun.on_obj(a), fun.on_obj(b));
            if dom.len() != cod.len() {
                fully_faithful = false;
                break 'outer;
            }
            let mut image: Vec<Mor> = dom.iter().map(|&m| fun.on_mor(m)).collect();
            image.sort();
            image.dedup();
            if image.len() != cod.len() || image.iter().zip(cod).any(|(x, y)| x != y) {
                fully_faithful = false;
                break 'outer;
            }
        }
    }

    let hit: BTreeSet<Obj> = src.objects().map(|o| fun.on_obj(o)).collect();
    let essentially_surjective = tgt.objects().all(|t| {
        hit.contains(&t)
            || hit.iter().any(|&h| tgt.hom(h, t).iter().any(|&m| limits::is_iso(tgt, m).is_some()))
    });

    Ok(EquivalenceReport { fully_faithful, essentially_surjective })
}
