//! Twisted-arrow shapes `Tw([n])`, cartesian functors out of them, the level
//! categories of the correspondence Segal object, and the Segal equivalence
//! check.

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::CatError;
use crate::fincat::{
    is_equivalence, is_iso, is_pullback_square, pullback, Cospan, EquivalenceReport, FinCategory,
    Functor, Mor, Obj, PullbackData,
};
use crate::spans::Span;

/// The twisted arrow category of `[n]`: objects are pairs `(i, j)` with
/// `i <= j`, with a unique arrow `(i, j) -> (i', j')` iff `i <= i' <= j' <= j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwShape {
    pub n: usize,
    pub carrier: FinCategory,
    /// The objects `(i, i+1)`.
    pub elementary: Vec<Obj>,
    pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), Obj>,
}

impl TwShape {
    pub fn obj(&self, i: usize, j: usize) -> Obj {
        self.index[&(i, j)]
    }

    pub fn pair(&self, o: Obj) -> (usize, usize) {
        self.pairs[o.idx()]
    }

    /// The unique arrow `(i, j) -> (i', j')` when `i <= i' <= j' <= j`.
    pub fn arrow(&self, from: (usize, usize), to: (usize, usize)) -> Option<Mor> {
        let (i, j) = from;
        let (i2, j2) = to;
        if i <= i2 && i2 <= j2 && j2 <= j {
            let a = self.obj(i, j);
            let b = self.obj(i2, j2);
            Some(self.carrier.hom(a, b)[0])
        } else {
            None
        }
    }
}

/// Builds `Tw([n])` with its elementary objects.
pub fn twisted_arrow(n: usize, caps: &Caps) -> Result<TwShape, CatError> {
    if n > caps.max_level {
        return Err(CatError::CapExceeded {
            what: "twisted-arrow level",
            needed: n,
            cap: caps.max_level,
        });
    }
    let mut b = FinCategory::builder(format!("Tw([{n}])"));
    let mut pairs = Vec::new();
    let mut index = BTreeMap::new();
    for i in 0..=n {
        for j in i..=n {
            let o = b.add_object(format!("({i},{j})"));
            pairs.push((i, j));
            index.insert((i, j), o);
        }
    }
    let mut arrows = BTreeMap::new();
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (c, &(i2, j2)) in pairs.iter().enumerate() {
            if i <= i2 && i2 <= j2 && j2 <= j {
                let m = b.add_mor(format!("({i},{j})->({i2},{j2})"), Obj(a as u32), Obj(c as u32));
                arrows.insert((a, c), m);
                if a == c {
                    b.set_identity(Obj(a as u32), m);
                }
            }
        }
    }
    for (&(a, c), &f) in &arrows {
        for (&(c2, d), &g) in &arrows {
            if c == c2 {
                b.set_composite(g, f, arrows[&(a, d)]);
            }
        }
    }
    let unbounded =
        Caps { max_objects: usize::MAX, max_morphisms: usize::MAX, max_level: caps.max_level };
    let carrier = b.build(&unbounded)?;
    let elementary = (0..n).map(|i| index[&(i, i + 1)]).collect();
    Ok(TwShape { n, carrier, elementary, pairs, index })
}

/// A functor out of a twisted-arrow shape.
#[derive(Debug, Clone, PartialEq)]
pub struct TwFunctor {
    pub shape: TwShape,
    pub functor: Functor,
}

impl TwFunctor {
    pub fn value(&self, i: usize, j: usize) -> Obj {
        self.functor.on_obj(self.shape.obj(i, j))
    }

    pub fn step(&self, from: (usize, usize), to: (usize, usize)) -> Mor {
        self.functor.on_mor(self.shape.arrow(from, to).expect("arrow exists"))
    }

    /// The spans `value(i,i) <- value(i,i+1) -> value(i+1,i+1)`.
    pub fn elementary_spans(&self) -> Vec<Span> {
        (0..self.shape.n)
            .map(|i| {
                Span::new(
                    &self.functor.target,
                    self.step((i, i + 1), (i, i)),
                    self.step((i, i + 1), (i + 1, i + 1)),
                )
                .expect("elementary steps share a source")
            })
            .collect()
    }
}

/// `yes` iff every condition square (the one at `(i, j)` for `j >= i + 2`) is
/// a pullback square in the target, with the universal property verified by
/// enumeration. Returns the first failing position otherwise.
pub fn is_cartesian_functor(s: &TwFunctor) -> Result<Option<(usize, usize)>, CatError> {
    s.functor.ensure_valid()?;
    let cat = &s.functor.target;
    let n = s.shape.n;
    for d in 2..=n {
        for i in 0..=(n - d) {
            let j = i + d;
            let cs = Cospan {
                left: s.step((i, j - 1), (i + 1, j - 1)),
                right: s.step((i + 1, j), (i + 1, j - 1)),
            };
            let to_left = s.step((i, j), (i, j - 1));
            let to_right = s.step((i, j), (i + 1, j));
            if !is_pullback_square(cat, to_left, to_right, &cs) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Positions `(i, j)` with `j - i >= 2` in fill order (by distance, then i).
fn higher_positions(n: usize) -> Vec<(usize, usize)> {
    let mut positions = Vec::new();
    for d in 2..=n {
        for i in 0..=(n - d) {
            positions.push((i, i + d));
        }
    }
    positions
}

/// Assembles a functor `Tw([n]) -> C` from values at every pair and the two
/// generating steps out of each, composing along paths for the rest.
fn assemble_tw_functor(
    shape: &TwShape,
    cat: &FinCategory,
    values: &BTreeMap<(usize, usize), Obj>,
    drop_j: &BTreeMap<(usize, usize), Mor>,
    raise_i: &BTreeMap<(usize, usize), Mor>,
) -> Result<TwFunctor, CatError> {
    let obj_map: Vec<Obj> =
        (0..shape.carrier.object_count()).map(|o| values[&shape.pair(Obj(o as u32))]).collect();
    let mut mor_map = vec![Mor(0); shape.carrier.mor_count()];
    for m in shape.carrier.mors() {
        let (i, j) = shape.pair(shape.carrier.src(m));
        let (i2, j2) = shape.pair(shape.carrier.tgt(m));
        // Raise i, then drop j; each step's value is already recorded.
        let mut acc = cat.identity(values[&(i, j)]);
        let mut ci = i;
        while ci < i2 {
            acc = cat.compose(raise_i[&(ci, j)], acc)?;
            ci += 1;
        }
        let mut cj = j;
        while cj > j2 {
            acc = cat.compose(drop_j[&(i2, cj)], acc)?;
            cj -= 1;
        }
        mor_map[m.idx()] = acc;
    }
    let functor = Functor::new(shape.carrier.clone(), cat.clone(), obj_map, mor_map);
    functor.ensure_valid()?;
    Ok(TwFunctor { shape: shape.clone(), functor })
}

/// Object values plus the two generating-step tables of a partial diagram.
type PartialDiagram =
    (BTreeMap<(usize, usize), Obj>, BTreeMap<(usize, usize), Mor>, BTreeMap<(usize, usize), Mor>);

fn seed_spine(spine: &[&Span]) -> PartialDiagram {
    let mut values = BTreeMap::new();
    let mut drop_j = BTreeMap::new();
    let mut raise_i = BTreeMap::new();
    for (i, s) in spine.iter().enumerate() {
        values.insert((i, i), s.left_foot);
        values.insert((i + 1, i + 1), s.right_foot);
        values.insert((i, i + 1), s.apex);
        drop_j.insert((i, i + 1), s.left_leg);
        raise_i.insert((i, i + 1), s.right_leg);
    }
    (values, drop_j, raise_i)
}

/// Extends elementary data by iterated pullbacks into a cartesian functor,
/// or reports `None` when some required pullback is missing.
pub fn kan_extend_cartesian(
    cat: &FinCategory,
    elementary: &[Span],
    caps: &Caps,
) -> Result<Option<TwFunctor>, CatError> {
    let n = elementary.len();
    if n == 0 {
        return Err(CatError::InconsistentElementary("need at least one span".into()));
    }
    for (k, pair) in elementary.windows(2).enumerate() {
        if pair[0].right_foot != pair[1].left_foot {
            return Err(CatError::InconsistentElementary(format!(
                "span {k} ends at {} but span {} starts at {}",
                cat.object_name(pair[0].right_foot),
                k + 1,
                cat.object_name(pair[1].left_foot),
            )));
        }
    }
    let shape = twisted_arrow(n, caps)?;
    let spine: Vec<&Span> = elementary.iter().collect();
    let (mut values, mut drop_j, mut raise_i) = seed_spine(&spine);
    for (i, j) in higher_positions(n) {
        let cs = Cospan { left: raise_i[&(i, j - 1)], right: drop_j[&(i + 1, j)] };
        let Some(pb) = pullback(cat, &cs) else {
            return Ok(None);
        };
        values.insert((i, j), pb.apex);
        drop_j.insert((i, j), pb.to_left);
        raise_i.insert((i, j), pb.to_right);
    }
    let tw = assemble_tw_functor(&shape, cat, &values, &drop_j, &raise_i)?;
    if is_cartesian_functor(&tw)?.is_some() {
        return Err(CatError::Other("Kan extension failed the cartesian check; engine bug".into()));
    }
    Ok(Some(tw))
}

/// A level category of the correspondence Segal object, together with the
/// diagrams its objects stand for and the components of its morphisms.
#[derive(Debug, Clone)]
pub struct LevelCat {
    pub cat: FinCategory,
    pub diagrams: Vec<Functor>,
    pub components: Vec<Vec<Mor>>,
    mor_lookup: BTreeMap<(u32, u32, Vec<Mor>), Mor>,
}

impl LevelCat {
    pub fn find_mor(&self, src: Obj, tgt: Obj, components: &[Mor]) -> Option<Mor> {
        self.mor_lookup.get(&(src.0, tgt.0, components.to_vec())).copied()
    }
}

/// Every universal cone over a cospan, in deterministic order.
fn all_universal_cones(cat: &FinCategory, cs: &Cospan) -> Vec<(Obj, Mor, Mor)> {
    let mut out = Vec::new();
    let x = cat.src(cs.left);
    let y = cat.src(cs.right);
    for t in cat.objects() {
        for &p in cat.hom(t, x) {
            for &q in cat.hom(t, y) {
                if is_pullback_square(cat, p, q, cs) {
                    out.push((t, p, q));
                }
            }
        }
    }
    out
}

/// Enumerates natural transformations `f -> g` whose components at the
/// marked shape objects are isomorphisms, by backtracking with naturality
/// pruning.
fn nat_trans_components(f: &Functor, g: &Functor, iso_at: &[bool], out: &mut Vec<Vec<Mor>>) {
    fn rec(
        j: &FinCategory,
        c: &FinCategory,
        f: &Functor,
        g: &Functor,
        iso_at: &[bool],
        partial: &mut Vec<Mor>,
        out: &mut Vec<Vec<Mor>>,
    ) {
        let o = partial.len();
        if o == j.object_count() {
            out.push(partial.clone());
            return;
        }
        let obj = Obj(o as u32);
        'cand: for &m in c.hom(f.on_obj(obj), g.on_obj(obj)) {
            if iso_at[o] && is_iso(c, m).is_none() {
                continue;
            }
            partial.push(m);
            for jm in j.mors() {
                let (a, b) = (j.src(jm), j.tgt(jm));
                if a.idx() <= o && b.idx() <= o {
                    let lhs = c.compose_entry(partial[b.idx()], f.on_mor(jm));
                    let rhs = c.compose_entry(g.on_mor(jm), partial[a.idx()]);
                    if lhs != rhs || lhs.is_none() {
                        partial.pop();
                        continue 'cand;
                    }
                }
            }
            rec(j, c, f, g, iso_at, partial, out);
            partial.pop();
        }
    }
    let mut partial = Vec::with_capacity(f.source.object_count());
    rec(&f.source, &f.target, f, g, iso_at, &mut partial, out);
}

/// Builds the category whose objects are the given diagrams (parallel
/// functors `J -> C`) and whose morphisms are natural transformations,
/// restricted to isomorphism components at the marked `J`-objects.
fn diagram_category(
    name: String,
    diagrams: Vec<Functor>,
    iso_at: &[bool],
    caps: &Caps,
    what: &'static str,
) -> Result<LevelCat, CatError> {
    if diagrams.is_empty() {
        let cat = FinCategory::builder(name).build_derived(caps, what)?;
        return Ok(LevelCat { cat, diagrams, components: Vec::new(), mor_lookup: BTreeMap::new() });
    }
    let c = diagrams[0].target.clone();
    if diagrams.len() > caps.derived_objects() {
        return Err(CatError::Overflow {
            what,
            size: diagrams.len(),
            limit: caps.derived_objects(),
        });
    }

    // Iso reachability between C objects, for fast pruning at marked positions.
    let iso_reachable: Vec<Vec<bool>> = c
        .objects()
        .map(|a| c.objects().map(|b| c.hom(a, b).iter().any(|&m| is_iso(&c, m).is_some())).collect())
        .collect();
    let prunable = iso_at.iter().any(|&x| x);

    let mut b = FinCategory::builder(name);
    for i in 0..diagrams.len() {
        b.add_object(format!("F{i}"));
    }
    let mut components: Vec<Vec<Mor>> = Vec::new();
    let mut sources: Vec<u32> = Vec::new();
    let mut targets: Vec<u32> = Vec::new();
    let mut mor_lookup = BTreeMap::new();
    for (i, f) in diagrams.iter().enumerate() {
        for (k, g) in diagrams.iter().enumerate() {
            if prunable {
                let feet_ok = f.source.objects().all(|o| {
                    !iso_at[o.idx()] || iso_reachable[f.on_obj(o).idx()][g.on_obj(o).idx()]
                });
                if !feet_ok {
                    continue;
                }
            }
            let mut cells = Vec::new();
            nat_trans_components(f, g, iso_at, &mut cells);
            for comps in cells {
                let m = b.add_mor(
                    format!("n{}:{}->{}", components.len(), i, k),
                    Obj(i as u32),
                    Obj(k as u32),
                );
                if b.mor_count() > caps.derived_morphisms() {
                    return Err(CatError::Overflow {
                        what,
                        size: b.mor_count(),
                        limit: caps.derived_morphisms(),
                    });
                }
                let is_id = i == k
                    && comps
                        .iter()
                        .enumerate()
                        .all(|(o, &cm)| cm == c.identity(f.on_obj(Obj(o as u32))));
                if is_id {
                    b.set_identity(Obj(i as u32), m);
                }
                mor_lookup.insert((i as u32, k as u32, comps.clone()), m);
                components.push(comps);
                sources.push(i as u32);
                targets.push(k as u32);
            }
        }
    }
    // Composition is componentwise; group by source to skip non-composable pairs.
    let mut by_source: Vec<Vec<u32>> = vec![Vec::new(); diagrams.len()];
    for (gi, &s) in sources.iter().enumerate() {
        by_source[s as usize].push(gi as u32);
    }
    for fi in 0..components.len() {
        for &gi in &by_source[targets[fi] as usize] {
            let comp: Vec<Mor> = components[fi]
                .iter()
                .zip(&components[gi as usize])
                .map(|(&a, &bm)| c.compose_entry(bm, a).expect("components compose"))
                .collect();
            let m = mor_lookup[&(sources[fi], targets[gi as usize], comp)];
            b.set_composite(Mor(gi), Mor(fi as u32), m);
        }
    }
    let cat = b.build_derived(caps, what)?;
    Ok(LevelCat { cat, diagrams, components, mor_lookup })
}

/// Runs `visit` on every composable `n`-tuple of spans (indices into
/// `spans`), in lexicographic order, stopping early on `Err`.
fn for_each_spine<E>(
    spans: &[Span],
    n: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    fn rec<E>(
        spans: &[Span],
        n: usize,
        stack: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> Result<(), E>,
    ) -> Result<(), E> {
        if stack.len() == n {
            return visit(stack);
        }
        for (i, s) in spans.iter().enumerate() {
            if let Some(&last) = stack.last() {
                if spans[last].right_foot != s.left_foot {
                    continue;
                }
            }
            stack.push(i);
            rec(spans, n, stack, visit)?;
            stack.pop();
        }
        Ok(())
    }
    let mut stack = Vec::with_capacity(n);
    rec(spans, n, &mut stack, visit)
}

/// Enumerates every cartesian functor `Tw([n]) -> C` as a diagram, via spine
/// data plus all universal cones at the higher positions.
fn cartesian_diagrams(
    cat: &FinCategory,
    shape: &TwShape,
    caps: &Caps,
) -> Result<Vec<Functor>, CatError> {
    let n = shape.n;
    if n == 0 {
        return Ok(cat
            .objects()
            .map(|o| {
                Functor::new(shape.carrier.clone(), cat.clone(), vec![o], vec![cat.identity(o)])
            })
            .collect());
    }
    let spans = crate::spans::all_spans(cat);
    let positions = higher_positions(n);
    let mut out: Vec<Functor> = Vec::new();

    fn fill(
        cat: &FinCategory,
        shape: &TwShape,
        positions: &[(usize, usize)],
        k: usize,
        values: &mut BTreeMap<(usize, usize), Obj>,
        drop_j: &mut BTreeMap<(usize, usize), Mor>,
        raise_i: &mut BTreeMap<(usize, usize), Mor>,
        out: &mut Vec<Functor>,
        caps: &Caps,
    ) -> Result<(), CatError> {
        if k == positions.len() {
            let tw = assemble_tw_functor(shape, cat, values, drop_j, raise_i)?;
            out.push(tw.functor);
            if out.len() > caps.derived_objects() {
                return Err(CatError::Overflow {
                    what: "level category objects",
                    size: out.len(),
                    limit: caps.derived_objects(),
                });
            }
            return Ok(());
        }
        let (i, j) = positions[k];
        let cs = Cospan { left: raise_i[&(i, j - 1)], right: drop_j[&(i + 1, j)] };
        for (t, p, q) in all_universal_cones(cat, &cs) {
            values.insert((i, j), t);
            drop_j.insert((i, j), p);
            raise_i.insert((i, j), q);
            fill(cat, shape, positions, k + 1, values, drop_j, raise_i, out, caps)?;
            values.remove(&(i, j));
            drop_j.remove(&(i, j));
            raise_i.remove(&(i, j));
        }
        Ok(())
    }

    for_each_spine(&spans, n, &mut |tuple: &[usize]| -> Result<(), CatError> {
        let chosen: Vec<&Span> = tuple.iter().map(|&i| &spans[i]).collect();
        let (mut values, mut drop_j, mut raise_i) = seed_spine(&chosen);
        fill(cat, shape, &positions, 0, &mut values, &mut drop_j, &mut raise_i, &mut out, caps)
    })?;
    Ok(out)
}

/// The level-`n` category: objects are cartesian functors `Tw([n]) -> C`,
/// morphisms are natural transformations.
pub fn corr_level(cat: &FinCategory, n: usize, caps: &Caps) -> Result<LevelCat, CatError> {
    let shape = twisted_arrow(n, caps)?;
    let diagrams = cartesian_diagrams(cat, &shape, caps)?;
    let iso_at = vec![false; shape.carrier.object_count()];
    diagram_category(format!("{}-level-{n}", cat.name()), diagrams, &iso_at, caps, "level category")
}

/// Spine positions `(i, j)` with `j - i <= 1`, in declaration order.
fn spine_positions(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=n {
        v.push((i, i));
        if i < n {
            v.push((i, i + 1));
        }
    }
    v
}

/// The spine shape: the full subposet of `Tw([n])` on pairs with
/// `j - i <= 1`. Generator arrows are declared in pairs `(to left foot,
/// to right foot)` per elementary object, before the synthesized identities.
fn spine_shape(n: usize) -> FinCategory {
    let mut b = FinCategory::builder(format!("Spine([{n}])"));
    let positions = spine_positions(n);
    let mut index = BTreeMap::new();
    for &(i, j) in &positions {
        index.insert((i, j), b.add_object(format!("({i},{j})")));
    }
    for i in 0..n {
        b.add_mor(format!("({i},{})->({i},{i})", i + 1), index[&(i, i + 1)], index[&(i, i)]);
        b.add_mor(
            format!("({i},{})->({},{})", i + 1, i + 1, i + 1),
            index[&(i, i + 1)],
            index[&(i + 1, i + 1)],
        );
    }
    let unbounded = Caps { max_objects: usize::MAX, max_morphisms: usize::MAX, max_level: usize::MAX };
    b.build(&unbounded).expect("spine shape is a category")
}

fn spine_diagram(shape: &FinCategory, cat: &FinCategory, spans: &[&Span]) -> Functor {
    let n = spans.len();
    let positions = spine_positions(n);
    let mut obj_map = Vec::new();
    for &(i, j) in &positions {
        obj_map.push(if i == j {
            if i < n {
                spans[i].left_foot
            } else {
                spans[n - 1].right_foot
            }
        } else {
            spans[i].apex
        });
    }
    let mut mor_map = Vec::new();
    for m in shape.mors() {
        let idx = m.idx();
        if idx < 2 * n {
            let i = idx / 2;
            mor_map.push(if idx % 2 == 0 { spans[i].left_leg } else { spans[i].right_leg });
        } else {
            mor_map.push(cat.identity(obj_map[shape.src(m).idx()]));
        }
    }
    Functor::new(shape.clone(), cat.clone(), obj_map, mor_map)
}

/// Outcome of a Segal check, with the failure certificate when negative.
#[derive(Debug, Clone)]
pub enum SegalOutcome {
    Yes { equivalence: EquivalenceReport },
    /// A spine datum whose composite pullback is absent.
    NonExtendableSpine { spine: Vec<Span> },
    /// Every spine extends but restriction is not an equivalence.
    NotEquivalence { equivalence: EquivalenceReport },
}

impl SegalOutcome {
    pub fn verdict(&self) -> bool {
        matches!(self, SegalOutcome::Yes { .. })
    }
}

/// Checks the Segal condition at level `n`: the restriction functor from the
/// level category to the spine product (level-1 categories glued over
/// level 0) must be an equivalence.
///
/// Both sides are reduced: morphism components at the vertex objects `(i,i)`
/// are restricted to isomorphisms, matching the discarding of noninvertible
/// arrows at level 0.
pub fn segal_check(cat: &FinCategory, n: usize, caps: &Caps) -> Result<SegalOutcome, CatError> {
    if n < 2 {
        return Err(CatError::Other("segal check needs n >= 2".into()));
    }
    let shape = twisted_arrow(n, caps)?;
    let spans = crate::spans::all_spans(cat);
    let positions = higher_positions(n);

    // Pass 1: every spine datum must extend, i.e. all iterated pullbacks
    // exist. Cached by cospan; the first failure is the certificate.
    let mut cache: BTreeMap<(Mor, Mor), Option<PullbackData>> = BTreeMap::new();
    let extend_failure = for_each_spine(&spans, n, &mut |tuple: &[usize]| -> Result<(), Vec<Span>> {
        let chosen: Vec<&Span> = tuple.iter().map(|&i| &spans[i]).collect();
        let (_, mut drop_j, mut raise_i) = seed_spine(&chosen);
        for &(i, j) in &positions {
            let cs = Cospan { left: raise_i[&(i, j - 1)], right: drop_j[&(i + 1, j)] };
            let pb = cache.entry((cs.left, cs.right)).or_insert_with(|| pullback(cat, &cs));
            match pb {
                Some(pb) => {
                    drop_j.insert((i, j), pb.to_left);
                    raise_i.insert((i, j), pb.to_right);
                }
                None => return Err(chosen.into_iter().cloned().collect()),
            }
        }
        Ok(())
    });
    if let Err(spine) = extend_failure {
        return Ok(SegalOutcome::NonExtendableSpine { spine });
    }

    // Pass 2: build both reduced categories and test the restriction functor.
    let diagrams = cartesian_diagrams(cat, &shape, caps)?;
    let mut iso_at = vec![false; shape.carrier.object_count()];
    for o in shape.carrier.objects() {
        let (i, j) = shape.pair(o);
        if i == j {
            iso_at[o.idx()] = true;
        }
    }
    let level = diagram_category(
        format!("{}-red-level-{n}", cat.name()),
        diagrams,
        &iso_at,
        caps,
        "level category",
    )?;

    let sshape = spine_shape(n);
    let mut spine_diagrams: Vec<Functor> = Vec::new();
    let collect_ok: Result<(), ()> = for_each_spine(&spans, n, &mut |tuple: &[usize]| {
        let chosen: Vec<&Span> = tuple.iter().map(|&i| &spans[i]).collect();
        spine_diagrams.push(spine_diagram(&sshape, cat, &chosen));
        Ok(())
    });
    collect_ok.expect("collection cannot fail");
    let spine_pos = spine_positions(n);
    let spine_iso_at: Vec<bool> = spine_pos.iter().map(|&(i, j)| i == j).collect();

    // Index spine diagrams by their full assignment for the restriction map.
    let spine_key = |d: &Functor| -> (Vec<Obj>, Vec<Mor>) {
        let objs = d.source.objects().map(|o| d.on_obj(o)).collect();
        let legs = d.source.mors().filter(|&m| !d.source.is_identity(m)).map(|m| d.on_mor(m)).collect();
        (objs, legs)
    };
    let mut spine_index: BTreeMap<(Vec<Obj>, Vec<Mor>), u32> = BTreeMap::new();
    for (i, d) in spine_diagrams.iter().enumerate() {
        spine_index.insert(spine_key(d), i as u32);
    }

    let spine_cat = diagram_category(
        format!("{}-spine-{n}", cat.name()),
        spine_diagrams,
        &spine_iso_at,
        caps,
        "spine category",
    )?;

    let obj_map: Vec<Obj> = level
        .diagrams
        .iter()
        .map(|f| {
            let objs: Vec<Obj> =
                spine_pos.iter().map(|&(i, j)| f.on_obj(shape.obj(i, j))).collect();
            let legs: Vec<Mor> = (0..n)
                .flat_map(|i| {
                    [
                        f.on_mor(shape.arrow((i, i + 1), (i, i)).unwrap()),
                        f.on_mor(shape.arrow((i, i + 1), (i + 1, i + 1)).unwrap()),
                    ]
                })
                .collect();
            Obj(spine_index[&(objs, legs)])
        })
        .collect();
    let mut mor_map = Vec::new();
    for (mi, comps) in level.components.iter().enumerate() {
        let m = Mor(mi as u32);
        let src = level.cat.src(m);
        let tgt = level.cat.tgt(m);
        let restricted: Vec<Mor> =
            spine_pos.iter().map(|&(i, j)| comps[shape.obj(i, j).idx()]).collect();
        let target_mor = spine_cat
            .find_mor(obj_map[src.idx()], obj_map[tgt.idx()], &restricted)
            .ok_or_else(|| CatError::Other("restricted transformation missing; engine bug".into()))?;
        mor_map.push(target_mor);
    }
    let restriction = Functor::new(level.cat.clone(), spine_cat.cat.clone(), obj_map, mor_map);
    restriction.ensure_valid()?;
    let equivalence = is_equivalence(&restriction)?;
    if equivalence.is_equivalence() {
        Ok(SegalOutcome::Yes { equivalence })
    } else {
        Ok(SegalOutcome::NotEquivalence { equivalence })
    }
}
