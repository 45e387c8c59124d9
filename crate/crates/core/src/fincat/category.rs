use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::{CatError, LawViolation, ValidationReport};

/// Index of an object in its [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub u32);

/// Index of a morphism in its [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mor(pub u32);

impl Obj {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Mor {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct MorData {
    name: String,
    src: Obj,
    tgt: Obj,
}

/// A totally enumerated finite category.
///
/// Objects and morphisms are identified by declaration order; all choice
/// functions elsewhere break ties by lowest index, so a category determines
/// every derived construction deterministically. Values are immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    mors: Vec<MorData>,
    identity: Vec<Mor>,
    /// Composition table, sorted by packed `(g, f)` key.
    comp: Vec<(u64, Mor)>,
    /// Morphism ids sorted by `(src, tgt, id)`, for hom-set range queries.
    hom_index: Vec<Mor>,
}

fn pack(g: Mor, f: Mor) -> u64 {
    ((g.0 as u64) << 32) | f.0 as u64
}

impl PartialEq for FinCategory {
    /// Structural equality: the category's own label is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.mors == other.mors
            && self.identity == other.identity
            && self.comp == other.comp
    }
}

impl Eq for FinCategory {}

impl FinCategory {
    pub fn builder(name: impl Into<String>) -> CatBuilder {
        CatBuilder {
            name: name.into(),
            objects: Vec::new(),
            mors: Vec::new(),
            identities: BTreeMap::new(),
            composites: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn mor_count(&self) -> usize {
        self.mors.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        (0..self.objects.len() as u32).map(Obj)
    }

    pub fn mors(&self) -> impl Iterator<Item = Mor> {
        (0..self.mors.len() as u32).map(Mor)
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.mors[m.idx()].src
    }

    pub fn tgt(&self, m: Mor) -> Obj {
        self.mors[m.idx()].tgt
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.identity[o.idx()]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identity[self.src(m).idx()] == m
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.idx()]
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.mors[m.idx()].name
    }

    pub fn find_object(&self, name: &str) -> Option<Obj> {
        self.objects.iter().position(|n| n == name).map(|i| Obj(i as u32))
    }

    pub fn find_mor(&self, name: &str) -> Option<Mor> {
        self.mors.iter().position(|m| m.name == name).map(|i| Mor(i as u32))
    }

    /// Raw table lookup; `None` when the pair has no entry.
    pub fn compose_entry(&self, g: Mor, f: Mor) -> Option<Mor> {
        let key = pack(g, f);
        self.comp
            .binary_search_by_key(&key, |&(k, _)| k)
            .ok()
            .map(|i| self.comp[i].1)
    }

    /// `g ∘ f` for a composable pair, i.e. the table entry.
    pub fn compose(&self, g: Mor, f: Mor) -> Result<Mor, CatError> {
        if self.tgt(f) != self.src(g) {
            return Err(CatError::NotComposable {
                g: self.mor_name(g).to_string(),
                f: self.mor_name(f).to_string(),
            });
        }
        self.compose_entry(g, f).ok_or_else(|| CatError::NotComposable {
            g: self.mor_name(g).to_string(),
            f: self.mor_name(f).to_string(),
        })
    }

    /// Composes a path of morphisms listed in diagrammatic order
    /// (`path[0]` first).
    pub fn compose_path(&self, path: &[Mor]) -> Result<Mor, CatError> {
        let mut acc = path[0];
        for &m in &path[1..] {
            acc = self.compose(m, acc)?;
        }
        Ok(acc)
    }

    /// The hom-set `Hom(a, b)` as a sorted slice of morphism ids.
    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        let lo = self.hom_index.partition_point(|&m| (self.src(m), self.tgt(m)) < (a, b));
        let hi = self.hom_index.partition_point(|&m| (self.src(m), self.tgt(m)) <= (a, b));
        &self.hom_index[lo..hi]
    }

    /// All morphisms with source `a`, sorted by `(tgt, id)`.
    pub fn mors_from(&self, a: Obj) -> &[Mor] {
        let lo = self.hom_index.partition_point(|&m| self.src(m) < a);
        let hi = self.hom_index.partition_point(|&m| self.src(m) <= a);
        &self.hom_index[lo..hi]
    }

    /// Checks every category law by enumeration and reports each failure
    /// with its witness. An empty report means the data is a category.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen = BTreeMap::new();
        for (i, n) in self.objects.iter().enumerate() {
            if seen.insert(n.clone(), i).is_some() {
                report.violations.push(LawViolation::DuplicateObjectName(n.clone()));
            }
        }
        seen.clear();
        for (i, m) in self.mors.iter().enumerate() {
            if seen.insert(m.name.clone(), i).is_some() {
                report.violations.push(LawViolation::DuplicateMorphismName(m.name.clone()));
            }
        }

        for o in self.objects() {
            let id = self.identity(o);
            if self.src(id) != o || self.tgt(id) != o {
                report.violations.push(LawViolation::IdentityTyping {
                    object: self.object_name(o).to_string(),
                    identity: self.mor_name(id).to_string(),
                });
            }
        }

        // Table shape: entries exactly on composable pairs, with correct typing.
        for &(key, gf) in &self.comp {
            let g = Mor((key >> 32) as u32);
            let f = Mor((key & 0xffff_ffff) as u32);
            if g.idx() >= self.mors.len() || f.idx() >= self.mors.len() {
                continue;
            }
            if self.tgt(f) != self.src(g) {
                report.violations.push(LawViolation::SpuriousComposite {
                    g: self.mor_name(g).to_string(),
                    f: self.mor_name(f).to_string(),
                });
            } else if self.src(gf) != self.src(f) || self.tgt(gf) != self.tgt(g) {
                report.violations.push(LawViolation::CompositeTyping {
                    g: self.mor_name(g).to_string(),
                    f: self.mor_name(f).to_string(),
                    composite: self.mor_name(gf).to_string(),
                });
            }
        }
        for f in self.mors() {
            for &g in self.mors_from(self.tgt(f)) {
                if self.compose_entry(g, f).is_none() {
                    report.violations.push(LawViolation::MissingComposite {
                        g: self.mor_name(g).to_string(),
                        f: self.mor_name(f).to_string(),
                    });
                }
            }
        }

        // Identity neutrality.
        for f in self.mors() {
            let idt = self.identity(self.tgt(f));
            if self.compose_entry(idt, f) != Some(f) {
                report.violations.push(LawViolation::IdentityNotNeutral {
                    morphism: self.mor_name(f).to_string(),
                    side: "left",
                });
            }
            let ids = self.identity(self.src(f));
            if self.compose_entry(f, ids) != Some(f) {
                report.violations.push(LawViolation::IdentityNotNeutral {
                    morphism: self.mor_name(f).to_string(),
                    side: "right",
                });
            }
        }

        // Associativity on every composable triple.
        for f in self.mors() {
            for &g in self.mors_from(self.tgt(f)) {
                let Some(gf) = self.compose_entry(g, f) else { continue };
                for &h in self.mors_from(self.tgt(g)) {
                    let left = self.compose_entry(h, g).and_then(|hg| self.compose_entry(hg, f));
                    let right = self.compose_entry(h, gf);
                    if left != right || left.is_none() {
                        report.violations.push(LawViolation::NotAssociative {
                            h: self.mor_name(h).to_string(),
                            g: self.mor_name(g).to_string(),
                            f: self.mor_name(f).to_string(),
                        });
                    }
                }
            }
        }
        report
    }
}

/// Incremental constructor for [`FinCategory`].
///
/// Identity morphisms and all identity composites are synthesized unless
/// declared explicitly; only non-identity composites need to be listed.
pub struct CatBuilder {
    name: String,
    objects: Vec<String>,
    mors: Vec<MorData>,
    identities: BTreeMap<u32, Mor>,
    composites: Vec<(Mor, Mor, Mor)>,
}

impl CatBuilder {
    pub fn add_object(&mut self, name: impl Into<String>) -> Obj {
        self.objects.push(name.into());
        Obj(self.objects.len() as u32 - 1)
    }

    pub fn add_mor(&mut self, name: impl Into<String>, src: Obj, tgt: Obj) -> Mor {
        self.mors.push(MorData { name: name.into(), src, tgt });
        Mor(self.mors.len() as u32 - 1)
    }

    pub fn set_identity(&mut self, o: Obj, m: Mor) {
        self.identities.insert(o.0, m);
    }

    pub fn set_composite(&mut self, g: Mor, f: Mor, gf: Mor) {
        self.composites.push((g, f, gf));
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn mor_count(&self) -> usize {
        self.mors.len()
    }

    /// Finishes construction and validates every law.
    pub fn build(self, caps: &Caps) -> Result<FinCategory, CatError> {
        let cat = self.assemble(caps, false)?;
        let report = cat.validate();
        if !report.is_valid() {
            return Err(CatError::InvalidCategory(report));
        }
        Ok(cat)
    }

    /// Finishes construction without validating; for exercising the validator
    /// on broken tables.
    pub fn build_unchecked(self) -> FinCategory {
        self.assemble(&Caps { max_objects: usize::MAX, max_morphisms: usize::MAX, max_level: usize::MAX }, true)
            .expect("unchecked assembly cannot fail")
    }

    /// Like [`CatBuilder::build`] but bounded by the derived-construction
    /// ceiling instead of the user cap.
    pub(crate) fn build_derived(self, caps: &Caps, what: &'static str) -> Result<FinCategory, CatError> {
        if self.objects.len() > caps.derived_objects() {
            return Err(CatError::Overflow { what, size: self.objects.len(), limit: caps.derived_objects() });
        }
        if self.mors.len() > caps.derived_morphisms() {
            return Err(CatError::Overflow { what, size: self.mors.len(), limit: caps.derived_morphisms() });
        }
        let lax = Caps { max_objects: usize::MAX, max_morphisms: usize::MAX, max_level: caps.max_level };
        self.assemble(&lax, false)
    }

    fn assemble(mut self, caps: &Caps, lenient: bool) -> Result<FinCategory, CatError> {
        if !lenient && self.objects.len() > caps.max_objects {
            return Err(CatError::CapExceeded {
                what: "objects",
                needed: self.objects.len(),
                cap: caps.max_objects,
            });
        }

        // Synthesize identities for objects that did not declare one.
        let mut identity = Vec::with_capacity(self.objects.len());
        for (i, name) in self.objects.iter().enumerate() {
            let o = Obj(i as u32);
            match self.identities.get(&o.0) {
                Some(&m) => identity.push(m),
                None => {
                    self.mors.push(MorData { name: format!("id_{name}"), src: o, tgt: o });
                    identity.push(Mor(self.mors.len() as u32 - 1));
                }
            }
        }

        if !lenient && self.mors.len() > caps.max_morphisms {
            return Err(CatError::CapExceeded {
                what: "morphisms",
                needed: self.mors.len(),
                cap: caps.max_morphisms,
            });
        }

        // Identity composites are synthesized; explicit entries win.
        let mut table: BTreeMap<u64, Mor> = BTreeMap::new();
        for (i, m) in self.mors.iter().enumerate() {
            let f = Mor(i as u32);
            table.insert(pack(identity[m.tgt.idx()], f), f);
            table.insert(pack(f, identity[m.src.idx()]), f);
        }
        for (g, f, gf) in self.composites {
            table.insert(pack(g, f), gf);
        }

        let comp: Vec<(u64, Mor)> = table.into_iter().collect();
        let mut hom_index: Vec<Mor> = (0..self.mors.len() as u32).map(Mor).collect();
        hom_index.sort_by_key(|&m| (self.mors[m.idx()].src, self.mors[m.idx()].tgt, m));

        Ok(FinCategory {
            name: self.name,
            objects: self.objects,
            mors: self.mors,
            identity,
            comp,
            hom_index,
        })
    }
}
