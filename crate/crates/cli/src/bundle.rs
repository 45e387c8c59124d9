//! The structured-text bundle format: named categories, functors,
//! category-valued functors, 2-categories, spans and squares in one
//! hand-authorable JSON document. Everything is validated on load.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use corrcheck_core::fib::CatValuedFunctor;
use corrcheck_core::fincat::{
    product_category, Cospan, FinCategory, Functor, Mor, Obj, ProductCat,
};
use corrcheck_core::spans::Span;
use corrcheck_core::twocat::Strict2Cat;
use corrcheck_core::{Caps, CatError};

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("in {entity} {name:?}: {source}")]
    Entity {
        entity: &'static str,
        name: String,
        #[source]
        source: CatError,
    },
    #[error("{entity} {name:?} references unknown {what} {referenced:?}")]
    DanglingReference { entity: &'static str, name: String, what: &'static str, referenced: String },
    #[error("{0}")]
    Invalid(String),
}

// --- on-disk schema ---------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MorSpec {
    id: String,
    src: String,
    tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CategorySpec {
    objects: Vec<String>,
    #[serde(default)]
    morphisms: Vec<MorSpec>,
    /// Identities may be omitted and are then synthesized.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    identities: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    composition: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FunctorSpec {
    source: String,
    target: String,
    on_objects: BTreeMap<String, String>,
    on_morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ActionSpec {
    on_objects: BTreeMap<String, String>,
    on_morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CatValuedSpec {
    /// Left and right factor of the product base `C x D`.
    left: String,
    right: String,
    /// Value category per base object, keyed "(c,d)".
    values: BTreeMap<String, String>,
    /// Transition functor per base morphism, keyed "(f,g)".
    actions: BTreeMap<String, ActionSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TwoCatSpec {
    objects: Vec<String>,
    /// Hom category names keyed "a|b".
    homs: BTreeMap<String, String>,
    /// Identity 1-cell (an object of `hom(a,a)`) per object.
    identities: BTreeMap<String, String>,
    /// Composition tables keyed "a|b|c": 1-cell triples and 2-cell triples.
    compositions: BTreeMap<String, CompSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CompSpec {
    on_cells: Vec<[String; 3]>,
    on_two_cells: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpanSpec {
    cat: String,
    left_leg: String,
    right_leg: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SquareSpec {
    cat: String,
    to_left: String,
    to_right: String,
    cospan_left: String,
    cospan_right: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct BundleSpec {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    categories: BTreeMap<String, CategorySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    functors: BTreeMap<String, FunctorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    cat_valued: BTreeMap<String, CatValuedSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    two_cats: BTreeMap<String, TwoCatSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    spans: BTreeMap<String, SpanSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    squares: BTreeMap<String, SquareSpec>,
}

// --- resolved bundle --------------------------------------------------------

/// A named commutative square in one of the bundle's categories.
#[derive(Debug, Clone)]
pub struct BundleSquare {
    pub cat: String,
    pub to_left: Mor,
    pub to_right: Mor,
    pub cospan: Cospan,
}

/// A resolved category-valued functor presented over a product base.
#[derive(Debug, Clone)]
pub struct BundleCatValued {
    pub h: CatValuedFunctor,
    pub prod: ProductCat,
}

/// Fully resolved and validated bundle contents.
#[derive(Debug, Clone, Default)]
pub struct Bundle {
    pub categories: BTreeMap<String, FinCategory>,
    pub functors: BTreeMap<String, Functor>,
    pub cat_valued: BTreeMap<String, BundleCatValued>,
    pub two_cats: BTreeMap<String, Strict2Cat>,
    pub spans: BTreeMap<String, (String, Span)>,
    pub squares: BTreeMap<String, BundleSquare>,
}

impl Bundle {
    pub fn load(path: &Path, caps: &Caps) -> Result<Bundle, BundleError> {
        let text = std::fs::read_to_string(path).map_err(|source| BundleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, caps)
    }

    pub fn parse(text: &str, caps: &Caps) -> Result<Bundle, BundleError> {
        let spec: BundleSpec = serde_json::from_str(text).map_err(|e| BundleError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        resolve(spec, caps)
    }

    /// Serializes back into the on-disk schema with stable key order.
    pub fn serialize(&self) -> String {
        let mut spec = BundleSpec::default();
        for (name, cat) in &self.categories {
            spec.categories.insert(name.clone(), category_spec(cat));
        }
        for (name, f) in &self.functors {
            let source = self
                .categories
                .iter()
                .find(|(_, c)| *c == &f.source)
                .map(|(n, _)| n.clone())
                .unwrap_or_default();
            let target = self
                .categories
                .iter()
                .find(|(_, c)| *c == &f.target)
                .map(|(n, _)| n.clone())
                .unwrap_or_default();
            spec.functors.insert(
                name.clone(),
                FunctorSpec {
                    source,
                    target,
                    on_objects: f
                        .source
                        .objects()
                        .map(|o| {
                            (
                                f.source.object_name(o).to_string(),
                                f.target.object_name(f.on_obj(o)).to_string(),
                            )
                        })
                        .collect(),
                    on_morphisms: f
                        .source
                        .mors()
                        .map(|m| {
                            (
                                f.source.mor_name(m).to_string(),
                                f.target.mor_name(f.on_mor(m)).to_string(),
                            )
                        })
                        .collect(),
                },
            );
        }
        for (name, (cat_name, span)) in &self.spans {
            spec.spans.insert(
                name.clone(),
                SpanSpec {
                    cat: cat_name.clone(),
                    left_leg: span.ambient.mor_name(span.left_leg).to_string(),
                    right_leg: span.ambient.mor_name(span.right_leg).to_string(),
                },
            );
        }
        for (name, sq) in &self.squares {
            let cat = &self.categories[&sq.cat];
            spec.squares.insert(
                name.clone(),
                SquareSpec {
                    cat: sq.cat.clone(),
                    to_left: cat.mor_name(sq.to_left).to_string(),
                    to_right: cat.mor_name(sq.to_right).to_string(),
                    cospan_left: cat.mor_name(sq.cospan.left).to_string(),
                    cospan_right: cat.mor_name(sq.cospan.right).to_string(),
                },
            );
        }
        serde_json::to_string_pretty(&spec).expect("bundle spec serializes")
    }
}

fn category_spec(cat: &FinCategory) -> CategorySpec {
    CategorySpec {
        objects: cat.objects().map(|o| cat.object_name(o).to_string()).collect(),
        morphisms: cat
            .mors()
            .filter(|&m| !cat.is_identity(m))
            .map(|m| MorSpec {
                id: cat.mor_name(m).to_string(),
                src: cat.object_name(cat.src(m)).to_string(),
                tgt: cat.object_name(cat.tgt(m)).to_string(),
            })
            .collect(),
        identities: BTreeMap::new(),
        composition: {
            let mut rows = Vec::new();
            for f in cat.mors() {
                if cat.is_identity(f) {
                    continue;
                }
                for &g in cat.mors_from(cat.tgt(f)) {
                    if cat.is_identity(g) {
                        continue;
                    }
                    let gf = cat.compose_entry(g, f).expect("total table");
                    rows.push([
                        cat.mor_name(g).to_string(),
                        cat.mor_name(f).to_string(),
                        cat.mor_name(gf).to_string(),
                    ]);
                }
            }
            rows
        },
    }
}

fn resolve(spec: BundleSpec, caps: &Caps) -> Result<Bundle, BundleError> {
    let mut bundle = Bundle::default();

    for (name, cspec) in &spec.categories {
        let cat = build_category(name, cspec, caps)?;
        bundle.categories.insert(name.clone(), cat);
    }

    for (name, fspec) in &spec.functors {
        let source = lookup(&bundle.categories, &fspec.source, "functor", name, "category")?;
        let target = lookup(&bundle.categories, &fspec.target, "functor", name, "category")?;
        let functor = build_functor(name, source, target, &fspec.on_objects, &fspec.on_morphisms)?;
        functor.ensure_valid().map_err(|source| BundleError::Entity {
            entity: "functor",
            name: name.clone(),
            source,
        })?;
        bundle.functors.insert(name.clone(), functor);
    }

    for (name, hspec) in &spec.cat_valued {
        let left = lookup(&bundle.categories, &hspec.left, "cat_valued", name, "category")?;
        let right = lookup(&bundle.categories, &hspec.right, "cat_valued", name, "category")?;
        let prod = product_category(left, right, caps).map_err(|source| BundleError::Entity {
            entity: "cat_valued",
            name: name.clone(),
            source,
        })?;
        let mut values = Vec::new();
        for o in prod.cat.objects() {
            let key = prod.cat.object_name(o);
            let val_name = hspec.values.get(key).ok_or_else(|| BundleError::DanglingReference {
                entity: "cat_valued",
                name: name.clone(),
                what: "value for base object",
                referenced: key.to_string(),
            })?;
            values.push(
                lookup(&bundle.categories, val_name, "cat_valued", name, "category")?.clone(),
            );
        }
        let mut actions = Vec::new();
        for m in prod.cat.mors() {
            let key = prod.cat.mor_name(m).to_string();
            let src_val = &values[prod.cat.src(m).idx()];
            let tgt_val = &values[prod.cat.tgt(m).idx()];
            let action = match hspec.actions.get(&key) {
                Some(a) => {
                    build_functor(name, src_val, tgt_val, &a.on_objects, &a.on_morphisms)?
                }
                None if prod.cat.is_identity(m) => Functor::identity(src_val),
                None => {
                    return Err(BundleError::DanglingReference {
                        entity: "cat_valued",
                        name: name.clone(),
                        what: "action for base morphism",
                        referenced: key,
                    })
                }
            };
            actions.push(action);
        }
        let h = CatValuedFunctor::new(prod.cat.clone(), values, actions).map_err(|source| {
            BundleError::Entity { entity: "cat_valued", name: name.clone(), source }
        })?;
        bundle.cat_valued.insert(name.clone(), BundleCatValued { h, prod });
    }

    for (name, tspec) in &spec.two_cats {
        let two_cat = build_two_cat(name, tspec, &bundle.categories, caps)?;
        let report = two_cat.validate();
        if !report.is_empty() {
            return Err(BundleError::Entity {
                entity: "two_cat",
                name: name.clone(),
                source: CatError::Invalid2Cat(report.join("; ")),
            });
        }
        bundle.two_cats.insert(name.clone(), two_cat);
    }

    for (name, sspec) in &spec.spans {
        let cat = lookup(&bundle.categories, &sspec.cat, "span", name, "category")?;
        let left = find_mor(cat, &sspec.left_leg, "span", name)?;
        let right = find_mor(cat, &sspec.right_leg, "span", name)?;
        let span = Span::new(cat, left, right).map_err(|source| BundleError::Entity {
            entity: "span",
            name: name.clone(),
            source,
        })?;
        bundle.spans.insert(name.clone(), (sspec.cat.clone(), span));
    }

    for (name, qspec) in &spec.squares {
        let cat = lookup(&bundle.categories, &qspec.cat, "square", name, "category")?;
        let to_left = find_mor(cat, &qspec.to_left, "square", name)?;
        let to_right = find_mor(cat, &qspec.to_right, "square", name)?;
        let cs = Cospan::new(
            cat,
            find_mor(cat, &qspec.cospan_left, "square", name)?,
            find_mor(cat, &qspec.cospan_right, "square", name)?,
        )
        .map_err(|source| BundleError::Entity { entity: "square", name: name.clone(), source })?;
        // Commutation check.
        let via_left = cat.compose_entry(cs.left, to_left);
        let via_right = cat.compose_entry(cs.right, to_right);
        if via_left != via_right || via_left.is_none() {
            return Err(BundleError::Invalid(format!("square {name:?} does not commute")));
        }
        bundle
            .squares
            .insert(name.clone(), BundleSquare { cat: qspec.cat.clone(), to_left, to_right, cospan: cs });
    }

    Ok(bundle)
}

fn lookup<'a, T>(
    map: &'a BTreeMap<String, T>,
    key: &str,
    entity: &'static str,
    name: &str,
    what: &'static str,
) -> Result<&'a T, BundleError> {
    map.get(key).ok_or_else(|| BundleError::DanglingReference {
        entity,
        name: name.to_string(),
        what,
        referenced: key.to_string(),
    })
}

fn find_obj(cat: &FinCategory, name: &str, entity: &'static str, owner: &str) -> Result<Obj, BundleError> {
    cat.find_object(name).ok_or_else(|| BundleError::DanglingReference {
        entity,
        name: owner.to_string(),
        what: "object",
        referenced: name.to_string(),
    })
}

fn find_mor(cat: &FinCategory, name: &str, entity: &'static str, owner: &str) -> Result<Mor, BundleError> {
    cat.find_mor(name).ok_or_else(|| BundleError::DanglingReference {
        entity,
        name: owner.to_string(),
        what: "morphism",
        referenced: name.to_string(),
    })
}

fn build_category(name: &str, spec: &CategorySpec, caps: &Caps) -> Result<FinCategory, BundleError> {
    let mut b = FinCategory::builder(name);
    let mut objs = BTreeMap::new();
    for oname in &spec.objects {
        objs.insert(oname.clone(), b.add_object(oname));
    }
    let mut mors = BTreeMap::new();
    for m in &spec.morphisms {
        let src = *objs.get(&m.src).ok_or_else(|| BundleError::DanglingReference {
            entity: "category",
            name: name.to_string(),
            what: "object",
            referenced: m.src.clone(),
        })?;
        let tgt = *objs.get(&m.tgt).ok_or_else(|| BundleError::DanglingReference {
            entity: "category",
            name: name.to_string(),
            what: "object",
            referenced: m.tgt.clone(),
        })?;
        mors.insert(m.id.clone(), b.add_mor(&m.id, src, tgt));
    }
    for (oname, mname) in &spec.identities {
        let o = *objs.get(oname).ok_or_else(|| BundleError::DanglingReference {
            entity: "category",
            name: name.to_string(),
            what: "object",
            referenced: oname.clone(),
        })?;
        let m = *mors.get(mname).ok_or_else(|| BundleError::DanglingReference {
            entity: "category",
            name: name.to_string(),
            what: "morphism",
            referenced: mname.clone(),
        })?;
        b.set_identity(o, m);
    }
    for [g, f, gf] in &spec.composition {
        let lookup = |n: &String| {
            mors.get(n).copied().ok_or_else(|| BundleError::DanglingReference {
                entity: "category",
                name: name.to_string(),
                what: "morphism",
                referenced: n.clone(),
            })
        };
        b.set_composite(lookup(g)?, lookup(f)?, lookup(gf)?);
    }
    b.build(caps).map_err(|source| BundleError::Entity {
        entity: "category",
        name: name.to_string(),
        source,
    })
}

fn build_functor(
    owner: &str,
    source: &FinCategory,
    target: &FinCategory,
    on_objects: &BTreeMap<String, String>,
    on_morphisms: &BTreeMap<String, String>,
) -> Result<Functor, BundleError> {
    let mut obj_map = Vec::with_capacity(source.object_count());
    for o in source.objects() {
        let key = source.object_name(o);
        let image = on_objects.get(key).ok_or_else(|| BundleError::DanglingReference {
            entity: "functor",
            name: owner.to_string(),
            what: "object image",
            referenced: key.to_string(),
        })?;
        obj_map.push(find_obj(target, image, "functor", owner)?);
    }
    let mut mor_map = Vec::with_capacity(source.mor_count());
    for m in source.mors() {
        let key = source.mor_name(m);
        // Identity images may be omitted; they are forced.
        let image = match on_morphisms.get(key) {
            Some(img) => find_mor(target, img, "functor", owner)?,
            None if source.is_identity(m) => target.identity(obj_map[source.src(m).idx()]),
            None => {
                return Err(BundleError::DanglingReference {
                    entity: "functor",
                    name: owner.to_string(),
                    what: "morphism image",
                    referenced: key.to_string(),
                })
            }
        };
        mor_map.push(image);
    }
    Ok(Functor::new(source.clone(), target.clone(), obj_map, mor_map))
}

fn build_two_cat(
    name: &str,
    spec: &TwoCatSpec,
    categories: &BTreeMap<String, FinCategory>,
    caps: &Caps,
) -> Result<Strict2Cat, BundleError> {
    let n = spec.objects.len();
    let mut homs = Vec::with_capacity(n * n);
    for a in &spec.objects {
        for b in &spec.objects {
            let key = format!("{a}|{b}");
            let hname = spec.homs.get(&key).ok_or_else(|| BundleError::DanglingReference {
                entity: "two_cat",
                name: name.to_string(),
                what: "hom category",
                referenced: key.clone(),
            })?;
            homs.push(lookup(categories, hname, "two_cat", name, "category")?.clone());
        }
    }
    let mut identity_cell = Vec::with_capacity(n);
    for (i, a) in spec.objects.iter().enumerate() {
        let cell = spec.identities.get(a).ok_or_else(|| BundleError::DanglingReference {
            entity: "two_cat",
            name: name.to_string(),
            what: "identity 1-cell",
            referenced: a.clone(),
        })?;
        identity_cell.push(find_obj(&homs[i * n + i], cell, "two_cat", name)?);
    }
    let mut comp = Vec::with_capacity(n * n * n);
    let mut comp_prod = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let hom_ab = &homs[a * n + b];
                let hom_bc = &homs[b * n + c];
                let hom_ac = &homs[a * n + c];
                let prod = product_category(hom_ab, hom_bc, caps).map_err(|source| {
                    BundleError::Entity { entity: "two_cat", name: name.to_string(), source }
                })?;
                let key = format!("{}|{}|{}", spec.objects[a], spec.objects[b], spec.objects[c]);
                let table = spec.compositions.get(&key).ok_or_else(|| {
                    BundleError::DanglingReference {
                        entity: "two_cat",
                        name: name.to_string(),
                        what: "composition table",
                        referenced: key.clone(),
                    }
                })?;
                let mut obj_map = vec![None; prod.cat.object_count()];
                for [f, g, fg] in &table.on_cells {
                    let fo = find_obj(hom_ab, f, "two_cat", name)?;
                    let go = find_obj(hom_bc, g, "two_cat", name)?;
                    obj_map[prod.pair_obj(fo, go).idx()] =
                        Some(find_obj(hom_ac, fg, "two_cat", name)?);
                }
                let mut mor_map = vec![None; prod.cat.mor_count()];
                for [phi, psi, chi] in &table.on_two_cells {
                    let pm = find_mor(hom_ab, phi, "two_cat", name)?;
                    let qm = find_mor(hom_bc, psi, "two_cat", name)?;
                    mor_map[prod.pair_mor(pm, qm).idx()] =
                        Some(find_mor(hom_ac, chi, "two_cat", name)?);
                }
                let obj_map: Vec<Obj> = obj_map
                    .into_iter()
                    .collect::<Option<_>>()
                    .ok_or_else(|| BundleError::Invalid(format!("two_cat {name:?}: composition table {key:?} is missing 1-cell entries")))?;
                let mor_map: Vec<Mor> = mor_map
                    .into_iter()
                    .collect::<Option<_>>()
                    .ok_or_else(|| BundleError::Invalid(format!("two_cat {name:?}: composition table {key:?} is missing 2-cell entries")))?;
                comp.push(Functor::new(prod.cat.clone(), hom_ac.clone(), obj_map, mor_map));
                comp_prod.push(prod);
            }
        }
    }
    Ok(Strict2Cat::new(spec.objects.clone(), homs, identity_cell, comp, comp_prod))
}
