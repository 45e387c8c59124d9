//! The acceptance battery: every headline property of the toolkit as a
//! reusable, certificate-producing check.


use corrcheck_core::adjdual::{
    dual_morphism, duality_data, generator_adjunction, span_left_adjoint, span_right_adjoint,
};
use corrcheck_core::fib::{
    arrow_fibration, classify_fibration, extract_fiber, functor_adjointable,
    grothendieck_cocartesian, grothendieck_two_sided, is_cartesian_arrow, is_cocartesian_arrow,
    span_fibration, univer_arrow_bijection, univer_span_bijection, AdjSide, CatValuedFunctor,
    Coordinate, FiberedFunctor,
};
use corrcheck_core::fincat::{
    is_iso, product_category, pullback, Cospan, FinCategory, Functor, Mor, Obj, ProductCat,
};
use corrcheck_core::spans::{all_spans, is_invertible_span, reverse_span, PullbackChoice};
use corrcheck_core::twisted::{kan_extend_cartesian, segal_check, SegalOutcome};
use corrcheck_core::twocat::bc_square_in_corr;
use corrcheck_core::{fixtures, Caps};

use crate::report::{CheckReport, SuiteReport};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// 1. Pullback apexes agree with the gcd oracle over all 36 cospans into
///    12, and with the fiber-product enumeration oracle on 20 curated
///    cospans of skeletal finite sets.
pub fn check_pullback_oracle(caps: &Caps) -> CheckReport {
    let _ = caps;
    let name = "01 pullback oracle";
    let c = fixtures::d12();
    let top = c.find_object("12").unwrap();
    let divisors = [1u64, 2, 3, 4, 6, 12];
    let mut counted = 0;
    for &x in &divisors {
        for &y in &divisors {
            let cs = Cospan {
                left: c.hom(c.find_object(&x.to_string()).unwrap(), top)[0],
                right: c.hom(c.find_object(&y.to_string()).unwrap(), top)[0],
            };
            let Some(pb) = pullback(&c, &cs) else {
                return CheckReport::fail(name, format!("missing pullback for ({x},{y})"));
            };
            if c.object_name(pb.apex) != gcd(x, y).to_string() {
                return CheckReport::fail(
                    name,
                    format!("apex of ({x},{y}) is {}, gcd is {}", c.object_name(pb.apex), gcd(x, y)),
                );
            }
            counted += 1;
        }
    }

    // Curated cospans in skeletal finite sets: all 16 with target 1, plus
    // four with target 2 or 3 mixing presence and absence.
    let fs = fixtures::finset3();
    let mut curated: Vec<(String, String)> = Vec::new();
    for m in 0..=3u32 {
        for n in 0..=3u32 {
            let f = format!("{m}>1:{}", "0".repeat(m as usize));
            let g = format!("{n}>1:{}", "0".repeat(n as usize));
            curated.push((f, g));
        }
    }
    curated.push(("1>2:0".into(), "1>2:0".into()));
    curated.push(("1>2:0".into(), "1>2:1".into()));
    curated.push(("2>2:01".into(), "2>2:10".into()));
    curated.push(("3>3:012".into(), "3>3:000".into()));
    assert_eq!(curated.len(), 20);

    // Independent oracle: count pairs (a, b) with f(a) = g(b) from the
    // function digits; the pullback exists iff the count is at most 3.
    let digits = |name: &str| -> Vec<u32> {
        name.split(':').nth(1).unwrap().chars().map(|c| c.to_digit(10).unwrap()).collect()
    };
    for (fname, gname) in &curated {
        let f = fs.find_mor(fname).unwrap();
        let g = fs.find_mor(gname).unwrap();
        let fd = digits(fname);
        let gd = digits(gname);
        let mut size = 0u32;
        for &a in &fd {
            for &b in &gd {
                if a == b {
                    size += 1;
                }
            }
        }
        let cs = Cospan { left: f, right: g };
        let pb = pullback(&fs, &cs);
        if pb.is_some() != (size <= 3) {
            return CheckReport::fail(
                name,
                format!("presence mismatch for ({fname},{gname}): oracle size {size}"),
            );
        }
        if let Some(pb) = pb {
            if fs.object_name(pb.apex) != size.to_string() {
                return CheckReport::fail(
                    name,
                    format!("apex size mismatch for ({fname},{gname})"),
                );
            }
        }
        counted += 1;
    }
    CheckReport::pass(name)
        .detail(format!("{counted} cospans checked against both oracles"))
        .provenance("fixtures: d12, finset3")
}

/// 2. The legs-iso method and the inverse-search method agree on every
///    span of the divisor lattice and of the 2-element groupoid.
pub fn check_iso_criterion(caps: &Caps) -> CheckReport {
    let _ = caps;
    let name = "02 iso criterion";
    let mut counted = 0;
    for cat in [fixtures::d12(), fixtures::z2()] {
        let choice = PullbackChoice::new(&cat);
        for s in all_spans(&cat) {
            match is_invertible_span(&s, &choice) {
                Ok(check) if check.methods_agree() => counted += 1,
                Ok(_) => {
                    return CheckReport::fail(
                        name,
                        format!("methods disagree on {} in {}", s.describe(), cat.name()),
                    )
                }
                Err(e) => return CheckReport::fail(name, e.to_string()),
            }
        }
    }
    CheckReport::pass(name)
        .detail(format!("{counted} spans checked by both methods"))
        .provenance("fixtures: d12, z2")
}

/// 3. Generator adjunctions exist for every arrow with both triangle
///    identities holding literally against the coherence isos.
pub fn check_generator_adjunctions(caps: &Caps) -> CheckReport {
    let _ = caps;
    let name = "03 generator adjunctions";
    let mut counted = 0;
    for cat in [fixtures::d12(), fixtures::z2()] {
        let choice = PullbackChoice::new(&cat);
        for alpha in cat.mors() {
            if let Err(e) = generator_adjunction(&cat, alpha, &choice) {
                return CheckReport::fail(
                    name,
                    format!("{} in {}: {e}", cat.mor_name(alpha), cat.name()),
                );
            }
            counted += 1;
        }
    }
    CheckReport::pass(name)
        .detail(format!("{counted} arrows with literal triangle identities"))
        .provenance("fixtures: d12, z2")
}

/// 4. Every span between divisors has ambidextrous adjoints equal to its
///    reverse.
pub fn check_ambidexterity(caps: &Caps) -> CheckReport {
    let _ = caps;
    let name = "04 ambidexterity";
    let cat = fixtures::d12();
    let choice = PullbackChoice::new(&cat);
    let spans = all_spans(&cat);
    for s in &spans {
        match span_right_adjoint(s, &choice) {
            Ok(adj) if adj.right == reverse_span(s) => {}
            Ok(_) => {
                return CheckReport::fail(name, format!("right adjoint of {} is not the reverse", s.describe()))
            }
            Err(e) => return CheckReport::fail(name, format!("{}: {e}", s.describe())),
        }
        match span_left_adjoint(s, &choice) {
            Ok(adj) if adj.left == reverse_span(s) => {}
            Ok(_) => {
                return CheckReport::fail(name, format!("left adjoint of {} is not the reverse", s.describe()))
            }
            Err(e) => return CheckReport::fail(name, format!("{}: {e}", s.describe())),
        }
    }
    CheckReport::pass(name)
        .detail(format!("{} spans, both adjoints realized by the reverse", spans.len()))
        .provenance("fixture: d12")
}

/// 5. Self-duality zig-zags hold for every object, and the dual of every
///    span is isomorphic to its reverse.
pub fn check_self_duality(caps: &Caps) -> CheckReport {
    let _ = caps;
    let name = "05 self-duality";
    let cat = fixtures::d12();
    let choice = PullbackChoice::new(&cat);
    for c in cat.objects() {
        if let Err(e) = duality_data(&cat, c, &choice) {
            return CheckReport::fail(name, format!("object {}: {e}", cat.object_name(c)));
        }
    }
    let spans = all_spans(&cat);
    for s in &spans {
        match dual_morphism(s, &choice) {
            Ok((_, witness)) if witness.target == reverse_span(s) => {}
            Ok(_) => {
                return CheckReport::fail(name, format!("dual of {} mismatched", s.describe()))
            }
            Err(e) => return CheckReport::fail(name, format!("{}: {e}", s.describe())),
        }
    }
    CheckReport::pass(name)
        .detail(format!("6 objects with zig-zags, {} duals matched to reverses", spans.len()))
        .provenance("fixture: d12")
}

/// 6. The level-2 Segal condition holds over the divisor lattice and
///    fails over size-bounded finite sets, with an independently
///    re-verified certificate.
pub fn check_segal(caps: &Caps) -> CheckReport {
    let name = "06 segal condition";
    let d12 = fixtures::d12();
    match segal_check(&d12, 2, caps) {
        Ok(SegalOutcome::Yes { .. }) => {}
        Ok(other) => return CheckReport::fail(name, format!("d12 level 2 failed: {other:?}")),
        Err(e) => return CheckReport::fail(name, format!("d12 level 2 errored: {e}")),
    }
    let fs = fixtures::finset3();
    match segal_check(&fs, 2, caps) {
        Ok(SegalOutcome::NonExtendableSpine { spine }) => {
            // Re-verify the certificate independently.
            match kan_extend_cartesian(&fs, &spine, caps) {
                Ok(None) => {}
                Ok(Some(_)) => {
                    return CheckReport::fail(name, "certificate spine unexpectedly extends")
                }
                Err(e) => return CheckReport::fail(name, format!("certificate reverify: {e}")),
            }
            CheckReport::pass(name)
                .detail("d12 level 2: yes".to_string())
                .detail(format!(
                    "finset3 level 2: no, spine ({}) + ({}) re-verified non-extendable",
                    spine[0].describe(),
                    spine[1].describe()
                ))
                .provenance("fixtures: d12, finset3")
        }
        Ok(other) => CheckReport::fail(name, format!("finset3 level 2 gave {other:?}")),
        Err(e) => CheckReport::fail(name, format!("finset3 level 2 errored: {e}")),
    }
}

/// 7. The arrow fibration is a bifibration with hom-set sized discrete
///    fibers; the span fibration is bivariant with Beck-Chevalley; and the
///    (co)cartesian arrow sets match the closed-form criteria arrow by
///    arrow.
pub fn check_fibration_taxonomy(caps: &Caps) -> CheckReport {
    let name = "07 fibration taxonomy";
    let c = fixtures::d12();
    let arrow = match arrow_fibration(&c, caps) {
        Ok(a) => a,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    let report = match classify_fibration(&arrow, caps) {
        Ok(r) => r,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    if !report.bifibration {
        return CheckReport::fail(name, format!("arrow fibration flags: {:?}", report.witnesses));
    }
    let af = arrow.factor().unwrap();
    for cc in c.objects() {
        for d in c.objects() {
            let fiber = extract_fiber(&arrow.projection, af.pair_obj(cc, d));
            if fiber.object_count() != c.hom(d, cc).len()
                || fiber.mor_count() != fiber.object_count()
            {
                return CheckReport::fail(
                    name,
                    format!(
                        "fiber over ({},{}) is not discrete of size |Hom|",
                        c.object_name(cc),
                        c.object_name(d)
                    ),
                );
            }
        }
    }

    let span = match span_fibration(&c, caps) {
        Ok(s) => s,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    let sreport = match classify_fibration(&span, caps) {
        Ok(r) => r,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    if !sreport.bivariant || sreport.beck_chevalley != Some(true) {
        return CheckReport::fail(name, format!("span fibration flags: {:?}", sreport.witnesses));
    }

    // Closed-form criteria, arrow by arrow: cocartesian iff the apex
    // component is invertible; cartesian iff the apex cone over the W-shaped
    // diagram is a limit.
    let spans = all_spans(&c);
    let sf = span.factor().unwrap();
    for m in span.total().mors() {
        let apex_name = {
            let full = span.total().mor_name(m);
            full[1..full.find(')').unwrap()].split(',').next().unwrap().to_string()
        };
        let u0 = c.find_mor(&apex_name).unwrap();
        let cocart = is_cocartesian_arrow(&span.projection, m);
        if cocart != is_iso(&c, u0).is_some() {
            return CheckReport::fail(name, format!("cocartesian closed form fails on {m:?}"));
        }
        let cart = is_cartesian_arrow(&span.projection, m);
        let src = &spans[span.total().src(m).idx()];
        let tgt = &spans[span.total().tgt(m).idx()];
        let (u1, u2) = sf.split_mor(span.projection.on_mor(m));
        if cart != w_limit(&c, src, tgt, u0, u1, u2) {
            return CheckReport::fail(name, format!("cartesian closed form fails on {m:?}"));
        }
    }
    CheckReport::pass(name)
        .detail("arrow fibration: bifibration with |Hom|-sized discrete fibers".to_string())
        .detail("span fibration: bivariant, Beck-Chevalley holds".to_string())
        .detail(format!("{} total arrows matched the closed-form criteria", span.total().mor_count()))
        .provenance("fixture: d12")
}

fn w_limit(
    c: &FinCategory,
    src: &corrcheck_core::spans::Span,
    tgt: &corrcheck_core::spans::Span,
    u0: Mor,
    u1: Mor,
    u2: Mor,
) -> bool {
    let commutes = |a: Mor, b: Mor, d: Mor| -> bool {
        c.compose_entry(u1, a) == c.compose_entry(tgt.left_leg, b)
            && c.compose_entry(u2, d) == c.compose_entry(tgt.right_leg, b)
    };
    if !commutes(src.left_leg, u0, src.right_leg) {
        return false;
    }
    for z in c.objects() {
        for &a in c.hom(z, src.left_foot) {
            for &b in c.hom(z, tgt.apex) {
                for &d in c.hom(z, src.right_foot) {
                    if !commutes(a, b, d) {
                        continue;
                    }
                    let mediators = c
                        .hom(z, src.apex)
                        .iter()
                        .filter(|&&w| {
                            c.compose_entry(src.left_leg, w) == Some(a)
                                && c.compose_entry(u0, w) == Some(b)
                                && c.compose_entry(src.right_leg, w) == Some(d)
                        })
                        .count();
                    if mediators != 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The hom-valued functor on `C x C^op` with discrete hom categories.
pub fn hom_valued(cat: &FinCategory, caps: &Caps) -> (CatValuedFunctor, ProductCat) {
    let op = corrcheck_core::fincat::opposite(cat);
    let prod = product_category(cat, &op, caps).unwrap();
    let discrete_hom = |d: Obj, c: Obj| -> FinCategory {
        let mut b = FinCategory::builder(format!(
            "Hom({},{})",
            cat.object_name(d),
            cat.object_name(c)
        ));
        for &m in cat.hom(d, c) {
            b.add_object(cat.mor_name(m));
        }
        b.build_unchecked()
    };
    let values: Vec<FinCategory> = prod
        .cat
        .objects()
        .map(|o| {
            let (c, d) = prod.split_obj(o);
            discrete_hom(d, c)
        })
        .collect();
    let actions: Vec<Functor> = prod
        .cat
        .mors()
        .map(|m| {
            let (alpha, beta_op) = prod.split_mor(m);
            let (c, d) = prod.split_obj(prod.cat.src(m));
            let (c2, d2) = prod.split_obj(prod.cat.tgt(m));
            let src_val = discrete_hom(d, c);
            let tgt_val = discrete_hom(d2, c2);
            let obj_map: Vec<Obj> = cat
                .hom(d, c)
                .iter()
                .map(|&f| {
                    let composed = cat.compose(alpha, cat.compose(f, beta_op).unwrap()).unwrap();
                    tgt_val.find_object(cat.mor_name(composed)).unwrap()
                })
                .collect();
            let mor_map: Vec<Mor> = obj_map.iter().map(|&o| tgt_val.identity(o)).collect();
            Functor::new(src_val, tgt_val, obj_map, mor_map)
        })
        .collect();
    (CatValuedFunctor::new(prod.cat.clone(), values, actions).unwrap(), prod)
}

fn constant_h(base: &FinCategory, value: &FinCategory) -> CatValuedFunctor {
    CatValuedFunctor::new(
        base.clone(),
        base.objects().map(|_| value.clone()).collect(),
        base.mors().map(|_| Functor::identity(value)).collect(),
    )
    .unwrap()
}

fn thin_h(
    base: &FinCategory,
    values: Vec<FinCategory>,
    transition: impl Fn(Mor) -> Functor,
) -> CatValuedFunctor {
    let actions: Vec<Functor> = base
        .mors()
        .map(|m| {
            if base.is_identity(m) {
                Functor::identity(&values[base.src(m).idx()])
            } else {
                transition(m)
            }
        })
        .collect();
    CatValuedFunctor::new(base.clone(), values, actions).unwrap()
}

/// Brute-force isomorphism search between tiny categories.
fn tiny_cat_iso(a: &FinCategory, b: &FinCategory) -> bool {
    if a.object_count() != b.object_count() || a.mor_count() != b.mor_count() {
        return false;
    }
    fn objects(a: &FinCategory, b: &FinCategory, map: &mut Vec<Obj>, used: &mut Vec<bool>) -> bool {
        if map.len() == a.object_count() {
            let mut mor_map: Vec<Option<Mor>> = vec![None; a.mor_count()];
            let mut used_m = vec![false; b.mor_count()];
            return mors(a, b, map, &mut mor_map, &mut used_m, 0);
        }
        for y in b.objects() {
            if used[y.idx()] {
                continue;
            }
            map.push(y);
            used[y.idx()] = true;
            if objects(a, b, map, used) {
                return true;
            }
            used[y.idx()] = false;
            map.pop();
        }
        false
    }
    fn mors(
        a: &FinCategory,
        b: &FinCategory,
        obj_map: &[Obj],
        mor_map: &mut Vec<Option<Mor>>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        if next == a.mor_count() {
            for f in a.mors() {
                if a.is_identity(f) != b.is_identity(mor_map[f.idx()].unwrap()) {
                    return false;
                }
                for &g in a.mors_from(a.tgt(f)) {
                    let gf = a.compose_entry(g, f).unwrap();
                    if b.compose_entry(mor_map[g.idx()].unwrap(), mor_map[f.idx()].unwrap())
                        != mor_map[gf.idx()]
                    {
                        return false;
                    }
                }
            }
            return true;
        }
        let m = Mor(next as u32);
        for cand in b.mors() {
            if used[cand.idx()]
                || b.src(cand) != obj_map[a.src(m).idx()]
                || b.tgt(cand) != obj_map[a.tgt(m).idx()]
            {
                continue;
            }
            mor_map[next] = Some(cand);
            used[cand.idx()] = true;
            if mors(a, b, obj_map, mor_map, used, next + 1) {
                return true;
            }
            used[cand.idx()] = false;
            mor_map[next] = None;
        }
        false
    }
    objects(a, b, &mut Vec::new(), &mut vec![false; b.object_count()])
}

/// The five Grothendieck roundtrip fixtures: name, functor, and product
/// presentation (right factor is `D^op`).
fn groth_fixtures(caps: &Caps) -> Vec<(String, CatValuedFunctor, ProductCat)> {
    let arrow = fixtures::walking_arrow();
    let pt = fixtures::point();
    let arrow_op = corrcheck_core::fincat::opposite(&arrow);
    let mut out = Vec::new();

    // Constant singleton over [1] x [1]^op.
    let prod = product_category(&arrow, &arrow_op, caps).unwrap();
    out.push(("constant-singleton".to_string(), constant_h(&prod.cat, &pt), prod));

    // Constant groupoid over the point.
    let prod = product_category(&pt, &pt, caps).unwrap();
    out.push(("constant-groupoid".to_string(), constant_h(&prod.cat, &fixtures::z2()), prod));

    // Hom-valued on the divisor lattice.
    let (h, prod) = hom_valued(&fixtures::d12(), caps);
    out.push(("hom-valued-d12".to_string(), h, prod));

    // Collapse transition over [1] x [0]^op.
    let prod = product_category(&arrow, &pt, caps).unwrap();
    let v0 = fixtures::walking_arrow();
    let v1 = fixtures::point();
    let collapse = Functor::constant(&v0, &v1, Obj(0));
    out.push((
        "collapse-transition".to_string(),
        thin_h(&prod.cat, vec![v0, v1], |_| collapse.clone()),
        prod,
    ));

    // Endo-collapse transitions over [1] x [1]^op.
    let prod = product_category(&arrow, &arrow_op, caps).unwrap();
    let varr = fixtures::walking_arrow();
    let const0 = Functor::constant(&varr, &varr, Obj(0));
    let values: Vec<FinCategory> = prod.cat.objects().map(|_| varr.clone()).collect();
    out.push((
        "endo-collapse".to_string(),
        thin_h(&prod.cat, values, |_| const0.clone()),
        prod,
    ));

    out
}

/// 8. The two-sided Grothendieck construction classifies as two-sided,
///    its fibers recover the prescribed values up to isomorphism, and the
///    hom-valued total is isomorphic to the arrow category.
pub fn check_groth_roundtrip(caps: &Caps) -> CheckReport {
    let name = "08 grothendieck roundtrip";
    let mut details = Vec::new();
    for (label, h, prod) in groth_fixtures(caps) {
        let g = match grothendieck_two_sided(&h, &prod, caps) {
            Ok(g) => g,
            Err(e) => return CheckReport::fail(name, format!("{label}: {e}")),
        };
        let report = match classify_fibration(&g, caps) {
            Ok(r) => r,
            Err(e) => return CheckReport::fail(name, format!("{label}: {e}")),
        };
        if !report.two_sided {
            return CheckReport::fail(
                name,
                format!("{label}: not two-sided: {:?}", report.witnesses),
            );
        }
        // Fibers recover the values, by search.
        let gf = g.factor().unwrap();
        let c_cat = &gf.fst.target;
        let d_cat = &gf.snd.target;
        for c in c_cat.objects() {
            for d in d_cat.objects() {
                let fiber = extract_fiber(&g.projection, gf.pair_obj(c, d));
                let value = h.value(prod.pair_obj(c, d));
                if !tiny_cat_iso(&fiber, value) {
                    return CheckReport::fail(
                        name,
                        format!(
                            "{label}: fiber over ({},{}) does not match the value",
                            c_cat.object_name(c),
                            d_cat.object_name(d)
                        ),
                    );
                }
            }
        }
        details.push(format!("{label}: two-sided, fibers match"));
    }

    // The hom-valued total is isomorphic to the arrow category, by the
    // explicit comparison functor.
    let c = fixtures::d12();
    let (h, prod) = hom_valued(&c, caps);
    let g = grothendieck_two_sided(&h, &prod, caps).unwrap();
    let arrow = arrow_fibration(&c, caps).unwrap();
    match explicit_arrow_iso(&g, &arrow) {
        Ok(()) => details.push("hom-valued total is the arrow category".to_string()),
        Err(e) => return CheckReport::fail(name, format!("arrow comparison: {e}")),
    }

    let mut report = CheckReport::pass(name).provenance("fixtures: walking-arrow, point, z2, d12");
    for d in details {
        report = report.detail(d);
    }
    report
}

/// The comparison functor from the hom-valued total to the arrow total:
/// `(c, d, f) -> [f]` over the identity on the base, checked to be an
/// isomorphism of categories.
fn explicit_arrow_iso(g: &FiberedFunctor, arrow: &FiberedFunctor) -> Result<(), String> {
    if g.total().object_count() != arrow.total().object_count()
        || g.total().mor_count() != arrow.total().mor_count()
    {
        return Err("object or morphism counts differ".into());
    }
    // Objects are named "(c,d,f)"; the arrow-category object is "[f]".
    let mut obj_map = Vec::with_capacity(g.total().object_count());
    for o in g.total().objects() {
        let name = g.total().object_name(o);
        let inner = &name[1..name.len() - 1];
        let f_name = inner.splitn(3, ',').nth(2).ok_or("bad object name")?;
        let image = arrow
            .total()
            .find_object(&format!("[{f_name}]"))
            .ok_or_else(|| format!("no arrow object for {f_name}"))?;
        obj_map.push(image);
    }
    // Morphisms over (α, β) map to the unique arrow-square over (β?, α?)
    // with the matching endpoints; commutation pins it down.
    let gf = g.factor().map_err(|e| e.to_string())?;
    let af = arrow.factor().map_err(|e| e.to_string())?;
    let mut mor_map = Vec::with_capacity(g.total().mor_count());
    for m in g.total().mors() {
        let (alpha, beta) = gf.split_mor(g.projection.on_mor(m));
        let s = obj_map[g.total().src(m).idx()];
        let t = obj_map[g.total().tgt(m).idx()];
        // Arrow projection is (target, source) = (α, β) here.
        let want = af.pair_mor(alpha, beta);
        let image = arrow
            .total()
            .hom(s, t)
            .iter()
            .copied()
            .find(|&am| arrow.projection.on_mor(am) == want)
            .ok_or("missing arrow-square image")?;
        mor_map.push(image);
    }
    let functor = Functor::new(g.total().clone(), arrow.total().clone(), obj_map, mor_map);
    if !functor.is_functor() {
        return Err("comparison map is not a functor".into());
    }
    let mut seen: Vec<Mor> = functor.mor_map().to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != arrow.total().mor_count() {
        return Err("comparison map is not bijective on morphisms".into());
    }
    Ok(())
}

/// The adjointability fixtures for criterion 9, on products `C x D`.
fn adjointability_fixtures(caps: &Caps) -> Vec<(String, CatValuedFunctor, ProductCat)> {
    let arrow = fixtures::walking_arrow();
    let prod = product_category(&arrow, &arrow, caps).unwrap();
    let mut out = Vec::new();
    out.push(("constant-arrow".to_string(), constant_h(&prod.cat, &arrow), prod.clone()));
    out.push(("constant-groupoid".to_string(), constant_h(&prod.cat, &fixtures::z2()), prod.clone()));
    out.push(("constant-point".to_string(), constant_h(&prod.cat, &fixtures::point()), prod.clone()));

    // Meet maps on the divisor lattice of 4 as a thin fixture.
    let d4 = fixtures::divisor_lattice(4);
    let meet2: Vec<Obj> = d4
        .objects()
        .map(|o| {
            let d: u64 = d4.object_name(o).parse().unwrap();
            d4.find_object(&gcd(2, d).to_string()).unwrap()
        })
        .collect();
    let meet2_mor: Vec<Mor> = d4
        .mors()
        .map(|m| d4.hom(meet2[d4.src(m).idx()], meet2[d4.tgt(m).idx()])[0])
        .collect();
    let meet2_fun = Functor::new(d4.clone(), d4.clone(), meet2, meet2_mor);
    let values: Vec<FinCategory> = prod.cat.objects().map(|_| d4.clone()).collect();
    out.push((
        "meet-transitions".to_string(),
        thin_h(&prod.cat, values, |_| meet2_fun.clone()),
        prod.clone(),
    ));

    // Engineered negative: an empty-corner diagram with a non-invertible mate.
    let v_point = fixtures::point();
    let v_arrow = fixtures::walking_arrow();
    let values: Vec<FinCategory> = prod
        .cat
        .objects()
        .map(|o| if o.idx() == 0 { v_point.clone() } else { v_arrow.clone() })
        .collect();
    let actions: Vec<Functor> = prod
        .cat
        .mors()
        .map(|m| {
            let s = prod.cat.src(m).idx();
            let t = prod.cat.tgt(m).idx();
            match (s == 0, t == 0) {
                (true, true) => Functor::identity(&v_point),
                (true, false) => Functor::constant(&v_point, &v_arrow, Obj(0)),
                _ => Functor::identity(&v_arrow),
            }
        })
        .collect();
    out.push((
        "engineered-negative".to_string(),
        CatValuedFunctor::new(prod.cat.clone(), values, actions).unwrap(),
        prod,
    ));
    out
}

/// 9. Adjointability of the value squares agrees with two-sidedness of
///    the cocartesian unstraightening on every fixture, including the
///    engineered negative.
pub fn check_adjointability_equivalence(caps: &Caps) -> CheckReport {
    let name = "09 adjointability equivalence";
    let mut details = Vec::new();
    let mut saw_negative = false;
    for (label, h, prod) in adjointability_fixtures(caps) {
        let adjointable =
            match functor_adjointable(&h, &prod, Coordinate::Second, AdjSide::Right) {
                Ok(r) => r.is_none(),
                Err(e) => return CheckReport::fail(name, format!("{label}: {e}")),
            };
        let p = match grothendieck_cocartesian(&h, Some(&prod), caps) {
            Ok(p) => p,
            Err(e) => return CheckReport::fail(name, format!("{label}: {e}")),
        };
        let report = match classify_fibration(&p, caps) {
            Ok(r) => r,
            Err(e) => return CheckReport::fail(name, format!("{label}: {e}")),
        };
        if adjointable != report.two_sided {
            return CheckReport::fail(
                name,
                format!("{label}: adjointable={adjointable} but two-sided={}", report.two_sided),
            );
        }
        if !adjointable {
            saw_negative = true;
        }
        details.push(format!("{label}: agree ({})", if adjointable { "yes" } else { "no" }));
    }
    if !saw_negative {
        return CheckReport::fail(name, "no negative fixture exercised");
    }
    let mut report = CheckReport::pass(name).provenance("5 category-valued fixtures");
    for d in details {
        report = report.detail(d);
    }
    report
}

/// 10. For every cartesian square of the divisor lattice the constructive
///     Beck-Chevalley square is cartesian in the slice; the identity
///     square degenerates to identity spans.
pub fn check_bc_square(caps: &Caps) -> CheckReport {
    let name = "10 constructive bc square";
    let c = fixtures::d12();
    let squares = corrcheck_core::fib::cartesian_squares(&c);
    for (to_left, to_right, cs) in &squares {
        match bc_square_in_corr(&c, *to_left, *to_right, cs, caps) {
            Ok(out) if out.cartesian_in_slice => {}
            Ok(_) => {
                return CheckReport::fail(
                    name,
                    format!(
                        "square over ({}, {}) is not cartesian in the slice",
                        c.mor_name(cs.left),
                        c.mor_name(cs.right)
                    ),
                )
            }
            Err(e) => return CheckReport::fail(name, e.to_string()),
        }
    }
    // Degenerate identity square.
    let s = c.find_object("6").unwrap();
    let id = c.identity(s);
    let out = match bc_square_in_corr(&c, id, id, &Cospan { left: id, right: id }, caps) {
        Ok(o) => o,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    let id_span = corrcheck_core::spans::identity_span(&c, s);
    if out.corners.iter().any(|corner| *corner != id_span) {
        return CheckReport::fail(name, "identity square did not degenerate to identity spans");
    }
    CheckReport::pass(name)
        .detail(format!("{} cartesian squares verified in the slice", squares.len()))
        .provenance("fixture: d12")
}

/// 11. The universal-property bijections for the span and arrow
///     fibrations, by full enumeration at tiny scale.
pub fn check_univer_bijections(caps: &Caps) -> CheckReport {
    let name = "11 universal property bijections";
    for c in [fixtures::point(), fixtures::walking_arrow()] {
        let r = match span_fibration(&c, caps) {
            Ok(r) => r,
            Err(e) => return CheckReport::fail(name, e.to_string()),
        };
        match univer_span_bijection(&c, &r, caps) {
            Ok(true) => {}
            Ok(false) => {
                return CheckReport::fail(name, format!("span bijection fails over {}", c.name()))
            }
            Err(e) => return CheckReport::fail(name, e.to_string()),
        }
        match univer_arrow_bijection(&c, &r, caps) {
            Ok(true) => {}
            Ok(false) => {
                return CheckReport::fail(name, format!("arrow bijection fails over {}", c.name()))
            }
            Err(e) => return CheckReport::fail(name, e.to_string()),
        }
    }
    CheckReport::pass(name)
        .detail("span and arrow universal properties verified over [0] and [1]")
        .provenance("fixtures: point, walking-arrow")
}

/// Checks 1 through 11 in order.
pub fn run_battery(caps: &Caps) -> Vec<CheckReport> {
    vec![
        check_pullback_oracle(caps),
        check_iso_criterion(caps),
        check_generator_adjunctions(caps),
        check_ambidexterity(caps),
        check_self_duality(caps),
        check_segal(caps),
        check_fibration_taxonomy(caps),
        check_groth_roundtrip(caps),
        check_adjointability_equivalence(caps),
        check_bc_square(caps),
        check_univer_bijections(caps),
    ]
}

/// The full acceptance suite: the battery plus a determinism check that
/// re-runs everything and compares the rendered reports byte for byte.
pub fn run_all(caps: &Caps) -> SuiteReport {
    let first = run_battery(caps);
    let second = run_battery(caps);
    let first_render = SuiteReport::new(first.clone()).render();
    let second_render = SuiteReport::new(second).render();
    let determinism = if first_render == second_render {
        CheckReport::pass("12 determinism").detail("two consecutive runs rendered byte-identically")
    } else {
        CheckReport::fail("12 determinism", "consecutive runs differ")
    };
    let mut checks = first;
    checks.push(determinism);
    SuiteReport::new(checks)
}
