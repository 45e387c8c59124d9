use corrcheck_core::fincat::{FinCategory, Functor, Mor, Obj};
use corrcheck_core::fixtures;
use corrcheck_core::spans::{
    all_spans, associator, compose_spans, coherence_iso, find_span_iso, hcompose_2cells,
    identity_span, iota, is_invertible_span, lunitor, map_span, map_span_compat_iso, reverse_span,
    runitor, tensor_span, vcompose_2cells, CoherenceKind, IotaSide, PullbackChoice, Span, SpanMor,
};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn obj(cat: &FinCategory, name: &str) -> Obj {
    cat.find_object(name).unwrap()
}

fn mor(cat: &FinCategory, name: &str) -> Mor {
    cat.find_mor(name).unwrap()
}

/// Divisor-lattice span with the given feet and apex; legs are the unique
/// poset arrows.
fn d12_span(cat: &FinCategory, left: &str, apex: &str, right: &str) -> Span {
    let l = cat.hom(obj(cat, apex), obj(cat, left))[0];
    let r = cat.hom(obj(cat, apex), obj(cat, right))[0];
    Span::new(cat, l, r).unwrap()
}

#[test]
fn identity_span_shape() {
    let c = fixtures::walking_arrow();
    let s = identity_span(&c, obj(&c, "0"));
    assert_eq!(s.left_foot, s.right_foot);
    assert_eq!(s.apex, s.left_foot);
    assert_eq!(reverse_span(&s), s);
    let choice = PullbackChoice::new(&c);
    assert!(is_invertible_span(&s, &choice).unwrap().legs_iso);
}

#[test]
fn iota_formulas() {
    let c = fixtures::d12();
    let a = mor(&c, "2->4");
    let left = iota(&c, a, IotaSide::Left);
    assert_eq!(c.object_name(left.left_foot), "2");
    assert_eq!(c.object_name(left.apex), "2");
    assert_eq!(c.object_name(left.right_foot), "4");
    let right = iota(&c, a, IotaSide::Right);
    assert_eq!(reverse_span(&left), right);
    // iota of an identity is the identity span on either side.
    let id = c.identity(obj(&c, "3"));
    assert_eq!(iota(&c, id, IotaSide::Left), identity_span(&c, obj(&c, "3")));
    assert_eq!(iota(&c, id, IotaSide::Right), identity_span(&c, obj(&c, "3")));
}

#[test]
fn composition_in_d12_is_gcd() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "4", "12");
    let t = d12_span(&c, "12", "6", "12");
    let st = compose_spans(&s, &t, &choice).unwrap();
    assert_eq!(c.object_name(st.apex), "2");
    assert_eq!(st, d12_span(&c, "12", "2", "12"));
}

#[test]
fn iota_composite_recovers_span() {
    // ι(β) after ι^R(α) is the span (c <-α- s -β-> c').
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let alpha = mor(&c, "2->4");
    let beta = mor(&c, "2->6");
    let composite =
        compose_spans(&iota(&c, alpha, IotaSide::Right), &iota(&c, beta, IotaSide::Left), &choice)
            .unwrap();
    assert_eq!(composite, Span::new(&c, alpha, beta).unwrap());
}

#[test]
fn unitors_are_invertible_and_unit_on_identity() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "4", "2", "6");
    for cell in [lunitor(&s, &choice).unwrap(), runitor(&s, &choice).unwrap()] {
        assert!(cell.is_invertible());
        assert_eq!(cell.target, s);
    }
    // On an identity span the unitor is the identity 2-cell.
    let id = identity_span(&c, obj(&c, "4"));
    let cell = lunitor(&id, &choice).unwrap();
    assert_eq!(cell.source, id);
    assert!(c.is_identity(cell.apex_map));
}

#[test]
fn composing_with_identity_is_isomorphic() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    for s in all_spans(&c) {
        let left_id = identity_span(&c, s.left_foot);
        let st = compose_spans(&left_id, &s, &choice).unwrap();
        assert!(find_span_iso(&st, &s).is_some());
    }
}

#[test]
fn associator_exists_and_pentagon_holds() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "4", "12");
    let t = d12_span(&c, "12", "6", "12");
    let u = d12_span(&c, "12", "3", "12");
    let a = associator(&s, &t, &u, &choice).unwrap();
    assert!(a.is_invertible());

    // Poset hom-sets are subsingletons: both associator routes between the
    // two extreme bracketings of a 4-fold composite must agree literally.
    let v = d12_span(&c, "12", "2", "12");
    let st = compose_spans(&s, &t, &choice).unwrap();
    let tu = compose_spans(&t, &u, &choice).unwrap();
    let uv = compose_spans(&u, &v, &choice).unwrap();
    let tuv = compose_spans(&t, &uv, &choice).unwrap();

    // Route 1: ((st)u)v -> (s(tu))v -> s((tu)v) -> s(t(uv)).
    let r1a = hcompose_2cells(&associator(&s, &t, &u, &choice).unwrap(), &SpanMor::identity(&v), &choice).unwrap();
    let r1b = associator(&s, &tu, &v, &choice).unwrap();
    let r1c = hcompose_2cells(&SpanMor::identity(&s), &associator(&t, &u, &v, &choice).unwrap(), &choice).unwrap();
    let route1 = vcompose_2cells(&vcompose_2cells(&r1a, &r1b).unwrap(), &r1c).unwrap();

    // Route 2: ((st)u)v -> (st)(uv) -> s(t(uv)).
    let r2a = associator(&st, &u, &v, &choice).unwrap();
    let r2b = associator(&s, &t, &uv, &choice).unwrap();
    let route2 = vcompose_2cells(&r2a, &r2b).unwrap();

    assert_eq!(route1.source, route2.source);
    assert_eq!(route1.target, route2.target);
    assert_eq!(route1.apex_map, route2.apex_map);
    assert_eq!(route1.target, compose_spans(&s, &tuv, &choice).unwrap());
}

#[test]
fn triangle_coherence() {
    // (s ⊙ id) ⊙ t --assoc--> s ⊙ (id ⊙ t) then unitors agree with unitors.
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "2", "6");
    let t = d12_span(&c, "6", "3", "12");
    let mid = identity_span(&c, obj(&c, "6"));
    let a = associator(&s, &mid, &t, &choice).unwrap();
    let left = hcompose_2cells(&runitor(&s, &choice).unwrap(), &SpanMor::identity(&t), &choice).unwrap();
    let right = hcompose_2cells(&SpanMor::identity(&s), &lunitor(&t, &choice).unwrap(), &choice).unwrap();
    let via_assoc = vcompose_2cells(&a, &right).unwrap();
    assert_eq!(left.apex_map, via_assoc.apex_map);
}

#[test]
fn vertical_composition_laws() {
    let c = fixtures::d12();
    let top = obj(&c, "12");
    let slice = corrcheck_core::fincat::slice2(&c, top, top, &corrcheck_core::Caps::default()).unwrap();
    // Chain 1 -> 2 -> 4 in the slice over (12, 12): apex maps compose.
    let s1 = d12_span(&c, "12", "1", "12");
    let s2 = d12_span(&c, "12", "2", "12");
    let s4 = d12_span(&c, "12", "4", "12");
    let a = SpanMor::new(s1.clone(), s2.clone(), mor(&c, "1->2")).unwrap();
    let b = SpanMor::new(s2.clone(), s4.clone(), mor(&c, "2->4")).unwrap();
    let ab = vcompose_2cells(&a, &b).unwrap();
    assert_eq!(ab.apex_map, mor(&c, "1->4"));
    // Identity laws.
    assert_eq!(vcompose_2cells(&SpanMor::identity(&s1), &a).unwrap(), a);
    assert_eq!(vcompose_2cells(&a, &SpanMor::identity(&s2)).unwrap(), a);
    let _ = slice;
}

#[test]
fn interchange_on_slice_fixtures() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    // 2x2 grid of 2-cells between spans 12 -|> 12.
    let s1 = d12_span(&c, "12", "1", "12");
    let s2 = d12_span(&c, "12", "2", "12");
    let s4 = d12_span(&c, "12", "4", "12");
    let t1 = d12_span(&c, "12", "3", "12");
    let t2 = d12_span(&c, "12", "6", "12");
    let t3 = d12_span(&c, "12", "12", "12");
    let a1 = SpanMor::new(s1.clone(), s2.clone(), mor(&c, "1->2")).unwrap();
    let a2 = SpanMor::new(s2.clone(), s4.clone(), mor(&c, "2->4")).unwrap();
    let b1 = SpanMor::new(t1.clone(), t2.clone(), mor(&c, "3->6")).unwrap();
    let b2 = SpanMor::new(t2.clone(), t3.clone(), mor(&c, "6->12")).unwrap();

    let vertical_first = hcompose_2cells(
        &vcompose_2cells(&a1, &a2).unwrap(),
        &vcompose_2cells(&b1, &b2).unwrap(),
        &choice,
    )
    .unwrap();
    let horizontal_first = vcompose_2cells(
        &hcompose_2cells(&a1, &b1, &choice).unwrap(),
        &hcompose_2cells(&a2, &b2, &choice).unwrap(),
    )
    .unwrap();
    assert_eq!(vertical_first.apex_map, horizontal_first.apex_map);
}

#[test]
fn whiskering_iso_cell_stays_iso() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "2", "6");
    let t = d12_span(&c, "6", "3", "12");
    let iso = SpanMor::identity(&t);
    let whiskered = hcompose_2cells(&SpanMor::identity(&s), &iso, &choice).unwrap();
    assert!(whiskered.is_invertible());
}

#[test]
fn iso_criterion_agreement_d12_and_z2() {
    for cat in [fixtures::d12(), fixtures::z2()] {
        let choice = PullbackChoice::new(&cat);
        for s in all_spans(&cat) {
            let check = is_invertible_span(&s, &choice).unwrap();
            assert!(check.methods_agree(), "disagreement on {}", s.describe());
        }
    }
}

#[test]
fn iota_of_noniso_is_not_invertible() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = iota(&c, mor(&c, "2->4"), IotaSide::Left);
    let check = is_invertible_span(&s, &choice).unwrap();
    assert!(!check.legs_iso);
    assert!(check.inverse.is_none());
}

#[test]
fn groupoid_spans_are_invertible() {
    let c = fixtures::z2();
    let choice = PullbackChoice::new(&c);
    let s = Span::new(&c, mor(&c, "s"), mor(&c, "e")).unwrap();
    let check = is_invertible_span(&s, &choice).unwrap();
    assert!(check.legs_iso);
    assert!(check.inverse.is_some());
}

#[test]
fn reverse_is_involutive_and_swaps_iota() {
    let c = fixtures::d12();
    for s in all_spans(&c) {
        assert_eq!(reverse_span(&reverse_span(&s)), s);
    }
    let a = mor(&c, "3->6");
    assert_eq!(reverse_span(&iota(&c, a, IotaSide::Left)), iota(&c, a, IotaSide::Right));
}

#[test]
fn reverse_distributes_over_composition_up_to_iso() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "2", "6");
    let t = d12_span(&c, "6", "3", "12");
    let st = compose_spans(&s, &t, &choice).unwrap();
    let rev_of_comp = reverse_span(&st);
    let comp_of_rev = compose_spans(&reverse_span(&t), &reverse_span(&s), &choice).unwrap();
    assert!(find_span_iso(&rev_of_comp, &comp_of_rev).is_some());
}

#[test]
fn map_span_through_functors() {
    let c = fixtures::d12();
    let s = d12_span(&c, "12", "4", "4");
    assert_eq!(map_span(&Functor::identity(&c), &s).unwrap(), s);
    let id = identity_span(&c, obj(&c, "4"));
    assert_eq!(map_span(&Functor::identity(&c), &id).unwrap(), id);
}

#[test]
fn gcd_endofunctor_is_span_compatible() {
    // d -> gcd(d, 6) preserves pullbacks, so mapping commutes with
    // composition up to an invertible comparison cell.
    let c = fixtures::d12();
    let divisors = [1u64, 2, 3, 4, 6, 12];
    let obj_map: Vec<_> =
        divisors.iter().map(|&d| obj(&c, &gcd(d, 6).to_string())).collect();
    let mor_map: Vec<_> = c
        .mors()
        .map(|m| {
            let a: u64 = c.object_name(c.src(m)).parse().unwrap();
            let b: u64 = c.object_name(c.tgt(m)).parse().unwrap();
            c.hom(obj(&c, &gcd(a, 6).to_string()), obj(&c, &gcd(b, 6).to_string()))[0]
        })
        .collect();
    let f = Functor::new(c.clone(), c.clone(), obj_map, mor_map);
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "2", "6");
    let t = d12_span(&c, "6", "3", "12");
    let cell = map_span_compat_iso(&f, &s, &t, &choice, &choice).unwrap();
    assert!(cell.is_invertible());
}

#[test]
fn tensor_is_pointwise_gcd_in_d12() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "4", "4");
    let t = d12_span(&c, "6", "2", "12");
    let st = tensor_span(&s, &t, &choice).unwrap();
    assert_eq!(c.object_name(st.left_foot), gcd(12, 6).to_string());
    assert_eq!(c.object_name(st.apex), gcd(4, 2).to_string());
    assert_eq!(c.object_name(st.right_foot), gcd(4, 12).to_string());
    // Symmetry iso exists.
    let ts = tensor_span(&t, &s, &choice).unwrap();
    assert!(find_span_iso(&st, &ts).is_some());
}

#[test]
fn tensor_with_terminal_identity_is_isomorphic() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let unit = identity_span(&c, obj(&c, "12"));
    let s = d12_span(&c, "12", "2", "6");
    let su = tensor_span(&s, &unit, &choice).unwrap();
    // gcd(x, 12) = x, so the tensor is the span itself on the nose here.
    assert!(find_span_iso(&su, &s).is_some());
}

#[test]
fn iota_functorial_up_to_coherence() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let a = mor(&c, "1->2");
    let b = mor(&c, "2->4");
    let ba = c.compose(b, a).unwrap();
    let composed = compose_spans(&iota(&c, a, IotaSide::Left), &iota(&c, b, IotaSide::Left), &choice).unwrap();
    assert!(find_span_iso(&iota(&c, ba, IotaSide::Left), &composed).is_some());
}

#[test]
fn coherence_dispatcher_matches_direct_constructors() {
    let c = fixtures::d12();
    let choice = PullbackChoice::new(&c);
    let s = d12_span(&c, "12", "2", "6");
    assert_eq!(
        coherence_iso(CoherenceKind::LeftUnit, std::slice::from_ref(&s), &choice).unwrap(),
        lunitor(&s, &choice).unwrap()
    );
    assert!(coherence_iso(CoherenceKind::Assoc, std::slice::from_ref(&s), &choice).is_err());
}
