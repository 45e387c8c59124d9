use corrcheck_core::fincat::{product_category, FinCategory, Functor, Mor, Obj};
use corrcheck_core::fixtures;
use corrcheck_core::twocat::{
    bc_square_in_corr, check_left_bc, find_right_adjoint, is_horizontally_right_adjointable,
    is_right_adjointable, is_vertically_right_adjointable, mate_2cell, monotone_endomap_deloop,
    poset_corr_inclusion, poset_corr_two_cat, EndomapDeloop, OneCell, Square2, Strict2Cat,
    SquareAdjointability, TwoFunctor,
};
use corrcheck_core::Caps;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn divisors() -> [u64; 6] {
    [1, 2, 3, 4, 6, 12]
}

/// The meet map `gcd(k, -)` as an object table over D12.
fn meet_map(c: &FinCategory, k: u64) -> Vec<Obj> {
    divisors().iter().map(|&d| c.find_object(&gcd(k, d).to_string()).unwrap()).collect()
}

/// The Heyting implication `(k => -)` over D12: largest d with gcd(k,d) | b.
fn heyting_map(c: &FinCategory, k: u64) -> Vec<Obj> {
    divisors()
        .iter()
        .map(|&b| {
            let best = divisors().iter().copied().filter(|&d| b % gcd(k, d) == 0).max().unwrap();
            c.find_object(&best.to_string()).unwrap()
        })
        .collect()
}

fn d12_deloop() -> EndomapDeloop {
    let c = fixtures::d12();
    let caps = Caps::default();
    let mut gens = Vec::new();
    for &k in &divisors() {
        gens.push(meet_map(&c, k));
        gens.push(heyting_map(&c, k));
    }
    monotone_endomap_deloop(&c, &gens, &caps).unwrap()
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

#[test]
fn trivial_one_object_two_cat_is_valid() {
    let caps = Caps::default();
    let pt = fixtures::point();
    let prod = product_category(&pt, &pt, &caps).unwrap();
    let comp = Functor::new(prod.cat.clone(), pt.clone(), vec![Obj(0)], vec![Mor(0)]);
    let d2 = Strict2Cat::new(vec!["*".into()], vec![pt], vec![Obj(0)], vec![comp], vec![prod]);
    assert!(d2.validate().is_empty());
}

#[test]
fn endomap_deloop_is_valid() {
    let deloop = d12_deloop();
    assert!(deloop.two_cat.validate().is_empty());
    // The closure contains the identity plus all generators.
    assert!(deloop.maps.len() >= 13);
}

#[test]
fn broken_interchange_is_cited() {
    // A composition table that is not a functor gets reported.
    let caps = Caps::default();
    let hom = fixtures::walking_arrow();
    let prod = product_category(&hom, &hom, &caps).unwrap();
    // Object map: min (meet); morphism map deliberately breaks composition
    // by sending a composable pair onto mismatched endpoints.
    let obj_map: Vec<Obj> = prod
        .cat
        .objects()
        .map(|o| {
            let (f, g) = prod.split_obj(o);
            Obj(f.0.min(g.0))
        })
        .collect();
    let mor_map: Vec<Mor> = prod
        .cat
        .mors()
        .map(|m| {
            let s = obj_map[prod.cat.src(m).idx()];
            let t = obj_map[prod.cat.tgt(m).idx()];
            // Wrong on purpose: always the identity of the source, even when
            // the endpoints differ.
            if s == t {
                hom.identity(s)
            } else {
                hom.identity(t)
            }
        })
        .collect();
    let comp = Functor::new(prod.cat.clone(), hom.clone(), obj_map, mor_map);
    let d2 = Strict2Cat::new(
        vec!["*".into()],
        vec![hom.clone()],
        vec![Obj(1)],
        vec![comp],
        vec![prod],
    );
    let report = d2.validate();
    assert!(report.iter().any(|line| line.contains("not a functor")));
}

// ---------------------------------------------------------------------------
// adjoints and mates in the endomap deloop
// ---------------------------------------------------------------------------

#[test]
fn identity_one_cell_has_identity_adjunction() {
    let deloop = d12_deloop();
    let d2 = &deloop.two_cat;
    let id = d2.identity_one_cell(0);
    let adj = find_right_adjoint(d2, id).unwrap();
    assert_eq!(adj.right.cell, id.cell);
}

#[test]
fn meet_map_adjoint_is_heyting_implication() {
    let c = fixtures::d12();
    let deloop = d12_deloop();
    let d2 = &deloop.two_cat;
    for &k in &divisors() {
        let f = deloop.cell_of(&meet_map(&c, k)).unwrap();
        let adj = find_right_adjoint(d2, f)
            .unwrap_or_else(|| panic!("gcd({k},-) must have a right adjoint"));
        assert_eq!(
            deloop.maps[adj.right.cell.idx()],
            heyting_map(&c, k),
            "residuation oracle for {k}"
        );
    }
}

#[test]
fn implication_maps_have_no_right_adjoint() {
    let c = fixtures::d12();
    let deloop = d12_deloop();
    let f = deloop.cell_of(&heyting_map(&c, 4)).unwrap();
    assert!(find_right_adjoint(&deloop.two_cat, f).is_none());
}

#[test]
fn adjoints_are_unique_in_thin_homs() {
    // Any two right adjoints are connected by an invertible 2-cell; in a
    // poset-enriched deloop that forces equality, so enumerate all valid
    // adjunction data and compare.
    let c = fixtures::d12();
    let deloop = d12_deloop();
    let d2 = &deloop.two_cat;
    let f = deloop.cell_of(&meet_map(&c, 6)).unwrap();
    let mut found = Vec::new();
    for g_obj in d2.hom(0, 0).objects() {
        let g = OneCell { src: 0, tgt: 0, cell: g_obj };
        let fg = d2.compose_one(f, g);
        let gf = d2.compose_one(g, f);
        for &unit in d2.hom(0, 0).hom(d2.identity_one_cell(0).cell, fg.cell) {
            for &counit in d2.hom(0, 0).hom(gf.cell, d2.identity_one_cell(0).cell) {
                let adj = corrcheck_core::twocat::Adjunction2 { left: f, right: g, unit, counit };
                let ok = {
                    // find_right_adjoint re-verifies triangles internally;
                    // recheck through the mate of the identity square.
                    let sq = Square2::strict(
                        d2,
                        d2.identity_one_cell(0),
                        f,
                        f,
                        d2.identity_one_cell(0),
                    )
                    .unwrap();
                    mate_2cell(d2, &sq, &adj, &adj).is_ok()
                };
                if ok {
                    found.push(g_obj);
                }
            }
        }
    }
    found.dedup();
    // All candidates surviving the triangle check coincide with the first.
    let canonical = find_right_adjoint(d2, f).unwrap().right.cell;
    assert!(found.contains(&canonical));
}

#[test]
fn identity_square_mate_is_identity() {
    let deloop = d12_deloop();
    let d2 = &deloop.two_cat;
    let id = d2.identity_one_cell(0);
    let sq = Square2::strict(d2, id, id, id, id).unwrap();
    match is_vertically_right_adjointable(d2, &sq).unwrap() {
        SquareAdjointability::Yes { mate } => {
            assert!(d2.hom(0, 0).is_identity(mate));
        }
        other => panic!("identity square must be adjointable, got {other:?}"),
    }
}

#[test]
fn mates_match_the_lattice_oracle() {
    // For every strictly commuting square of meet maps with adjointable
    // verticals, the engine's mate verdict must agree with pointwise
    // equality of gcd(a', k => x) and (k' => gcd(a, x)).
    let c = fixtures::d12();
    let deloop = d12_deloop();
    let d2 = &deloop.two_cat;
    let meet_cells: Vec<(u64, OneCell)> =
        divisors().iter().map(|&k| (k, deloop.cell_of(&meet_map(&c, k)).unwrap())).collect();
    let mut checked = 0;
    for &(a_top, top) in &meet_cells {
        for &(b_left, left) in &meet_cells {
            for &(b_right, right) in &meet_cells {
                for &(a_bot, bottom) in &meet_cells {
                    let Ok(sq) = Square2::strict(d2, top, left, right, bottom) else { continue };
                    let verdict = is_vertically_right_adjointable(d2, &sq).unwrap();
                    // Oracle: m1(x) = a_top ∧ (b_left => x), m2(x) = (b_right => (a_bot ∧ x)).
                    let m1: Vec<Obj> = deloop.maps
                        [deloop.cell_of(&heyting_map(&c, b_left)).unwrap().cell.idx()]
                    .iter()
                    .map(|&o| {
                        let v: u64 = c.object_name(o).parse().unwrap();
                        c.find_object(&gcd(a_top, v).to_string()).unwrap()
                    })
                    .collect();
                    let m2: Vec<Obj> = divisors()
                        .iter()
                        .map(|&x| {
                            let inner = gcd(a_bot, x);
                            let best = divisors()
                                .iter()
                                .copied()
                                .filter(|&d| inner % gcd(b_right, d) == 0)
                                .max()
                                .unwrap();
                            c.find_object(&best.to_string()).unwrap()
                        })
                        .collect();
                    match verdict {
                        SquareAdjointability::Yes { .. } => assert_eq!(m1, m2),
                        SquareAdjointability::NonInvertibleMate { .. } => assert_ne!(m1, m2),
                        SquareAdjointability::MissingAdjoint { .. } => {
                            panic!("meet maps always have right adjoints")
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn transpose_duality() {
    let deloop = d12_deloop();
    let d2 = &deloop.two_cat;
    let c = fixtures::d12();
    let f = deloop.cell_of(&meet_map(&c, 4)).unwrap();
    let g = deloop.cell_of(&meet_map(&c, 6)).unwrap();
    let sq = Square2::strict(d2, f, g, g, f).unwrap();
    let horizontal = is_horizontally_right_adjointable(d2, &sq).unwrap().holds();
    let vertical_of_transpose = is_vertically_right_adjointable(d2, &sq.transpose()).unwrap().holds();
    assert_eq!(horizontal, vertical_of_transpose);
}

// ---------------------------------------------------------------------------
// Beck-Chevalley for functors into 2-categories
// ---------------------------------------------------------------------------

#[test]
fn poset_span_two_cat_is_valid_and_bc_holds() {
    let caps = Caps::default();
    let c = fixtures::d12();
    let d2 = poset_corr_two_cat(&c, &caps).unwrap();
    assert!(d2.validate().is_empty());
    let inclusion = poset_corr_inclusion(&c, &d2, &caps).unwrap();
    assert_eq!(check_left_bc(&d2, &inclusion).unwrap(), None);
}

#[test]
fn collapse_functor_fails_bc_with_witness() {
    // Send every nonidentity arrow of D12 to the bottom of a delooped meet
    // monoid on the walking arrow; the collapsed cell has no right adjoint.
    let caps = Caps::default();
    let c = fixtures::d12();
    let arrow_poset = fixtures::walking_arrow();
    let constant0: Vec<Obj> = arrow_poset.objects().map(|_| Obj(0)).collect();
    let deloop =
        monotone_endomap_deloop(&arrow_poset, std::slice::from_ref(&constant0), &caps).unwrap();
    let d2 = &deloop.two_cat;
    assert!(d2.validate().is_empty());
    let collapsed = deloop.cell_of(&constant0).unwrap();
    let f = TwoFunctor {
        source: c.clone(),
        obj_map: c.objects().map(|_| 0).collect(),
        cell_map: c
            .mors()
            .map(|m| if c.is_identity(m) { d2.identity_one_cell(0).cell } else { collapsed.cell })
            .collect(),
    };
    let witness = check_left_bc(d2, &f).unwrap().expect("collapse must fail");
    // A genuine cospan of the lattice is cited.
    assert_eq!(c.tgt(witness.left), c.tgt(witness.right));
}

#[test]
fn identity_rich_homs_make_bc_trivial() {
    // Mapping every arrow to the identity 1-cell is right adjointable
    // everywhere.
    let caps = Caps::default();
    let c = fixtures::divisor_lattice(4);
    let pt = fixtures::point();
    let prod = product_category(&pt, &pt, &caps).unwrap();
    let comp = Functor::new(prod.cat.clone(), pt.clone(), vec![Obj(0)], vec![Mor(0)]);
    let d2 = Strict2Cat::new(vec!["*".into()], vec![pt], vec![Obj(0)], vec![comp], vec![prod]);
    let f = TwoFunctor {
        source: c.clone(),
        obj_map: c.objects().map(|_| 0).collect(),
        cell_map: c.mors().map(|_| Obj(0)).collect(),
    };
    assert_eq!(check_left_bc(&d2, &f).unwrap(), None);
}

// ---------------------------------------------------------------------------
// the constructive BC square in correspondence homs
// ---------------------------------------------------------------------------

#[test]
fn identity_square_gives_identity_spans() {
    let caps = Caps::default();
    let c = fixtures::d12();
    let s = c.find_object("6").unwrap();
    let id = c.identity(s);
    let cs = corrcheck_core::fincat::Cospan { left: id, right: id };
    let out = bc_square_in_corr(&c, id, id, &cs, &caps).unwrap();
    for corner in &out.corners {
        assert_eq!(*corner, corrcheck_core::spans::identity_span(&c, s));
    }
    assert!(out.cartesian_in_slice);
}

#[test]
fn gcd_square_is_cartesian_in_the_slice() {
    let c = fixtures::d12();
    let caps = Caps::default();
    // 2 = gcd(4, 6) over 12.
    let to_left = c.find_mor("2->4").unwrap();
    let to_right = c.find_mor("2->6").unwrap();
    let cs = corrcheck_core::fincat::Cospan {
        left: c.find_mor("4->12").unwrap(),
        right: c.find_mor("6->12").unwrap(),
    };
    let out = bc_square_in_corr(&c, to_left, to_right, &cs, &caps).unwrap();
    assert!(out.cartesian_in_slice);
    let apex_names: Vec<&str> =
        out.corners.iter().map(|s| c.object_name(s.apex)).collect();
    assert_eq!(apex_names, vec!["2", "6", "4", "12"]);
}

#[test]
fn every_cartesian_square_in_d12_is_cartesian_in_the_slice() {
    let c = fixtures::d12();
    let caps = Caps::default();
    for (to_left, to_right, cs) in corrcheck_core::fib::cartesian_squares(&c) {
        let out = bc_square_in_corr(&c, to_left, to_right, &cs, &caps).unwrap();
        assert!(out.cartesian_in_slice);
    }
}

#[test]
fn square_with_invertible_leg_collapses() {
    let c = fixtures::d12();
    let caps = Caps::default();
    // Pullback along an identity: cospan (4 -> 12, id_12).
    let left = c.find_mor("4->12").unwrap();
    let id12 = c.identity(c.find_object("12").unwrap());
    let cs = corrcheck_core::fincat::Cospan { left, right: id12 };
    let pb = corrcheck_core::fincat::pullback(&c, &cs).unwrap();
    let out = bc_square_in_corr(&c, pb.to_left, pb.to_right, &cs, &caps).unwrap();
    assert!(out.cartesian_in_slice);
    // The left column collapses: diagonal corner equals the bottom corner.
    assert_eq!(out.corners[0], out.corners[2]);
}

#[test]
fn non_cartesian_square_is_rejected() {
    let c = fixtures::d12();
    let caps = Caps::default();
    // 1 sits strictly below gcd(4, 6) = 2.
    let to_left = c.find_mor("1->4").unwrap();
    let to_right = c.find_mor("1->6").unwrap();
    let cs = corrcheck_core::fincat::Cospan {
        left: c.find_mor("4->12").unwrap(),
        right: c.find_mor("6->12").unwrap(),
    };
    assert!(bc_square_in_corr(&c, to_left, to_right, &cs, &caps).is_err());
}

// ---------------------------------------------------------------------------
// both-orientation adjointability on span 2-categories
// ---------------------------------------------------------------------------

#[test]
fn iota_squares_are_right_adjointable_in_the_span_two_cat() {
    let caps = Caps::default();
    let c = fixtures::divisor_lattice(4);
    let d2 = poset_corr_two_cat(&c, &caps).unwrap();
    let inclusion = poset_corr_inclusion(&c, &d2, &caps).unwrap();
    for (to_left, to_right, cs) in corrcheck_core::fib::cartesian_squares(&c) {
        let sq = Square2::strict(
            &d2,
            inclusion.one_cell(to_right),
            inclusion.one_cell(to_left),
            inclusion.one_cell(cs.right),
            inclusion.one_cell(cs.left),
        )
        .unwrap();
        assert!(is_right_adjointable(&d2, &sq).unwrap());
    }
}

// ---------------------------------------------------------------------------
// left/right adjointability duality via 2-cell reversal
// ---------------------------------------------------------------------------

#[test]
fn two_op_is_valid_and_involutive_in_counts() {
    let caps = Caps::default();
    let deloop = d12_deloop();
    let op = deloop.two_cat.two_op(&caps).unwrap();
    assert!(op.validate().is_empty());
    assert_eq!(op.hom(0, 0).object_count(), deloop.two_cat.hom(0, 0).object_count());
}

#[test]
fn vertical_right_adjointability_matches_horizontal_left() {
    // On squares whose horizontals are left adjointable and verticals right
    // adjointable, the two notions coincide.
    let caps = Caps::default();
    let c = fixtures::d12();
    let deloop = d12_deloop();
    let d2 = &deloop.two_cat;
    let op = d2.two_op(&caps).unwrap();
    let meet_cells: Vec<OneCell> =
        divisors().iter().map(|&k| deloop.cell_of(&meet_map(&c, k)).unwrap()).collect();
    let mut compared = 0;
    for &top in &meet_cells {
        for &left in &meet_cells {
            for &right in &meet_cells {
                for &bottom in &meet_cells {
                    let Ok(sq) = Square2::strict(d2, top, left, right, bottom) else { continue };
                    // Horizontals must be left adjointable: a 1-cell is left
                    // adjointable iff it is right adjointable after 2-cell
                    // reversal.
                    let horizontals_ok = find_right_adjoint(&op, top).is_some()
                        && find_right_adjoint(&op, bottom).is_some();
                    let verticals_ok = find_right_adjoint(d2, left).is_some()
                        && find_right_adjoint(d2, right).is_some();
                    if !horizontals_ok || !verticals_ok {
                        continue;
                    }
                    let vertical_right = is_vertically_right_adjointable(d2, &sq).unwrap().holds();
                    // Horizontal left adjointability: transpose, then reverse
                    // 2-cells and test vertical right adjointability there.
                    let op_sq = Square2 {
                        top: sq.left,
                        left: sq.top,
                        right: sq.bottom,
                        bottom: sq.right,
                        witness: None,
                    };
                    let horizontal_left =
                        is_vertically_right_adjointable(&op, &op_sq).unwrap().holds();
                    assert_eq!(vertical_right, horizontal_left);
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 0);
}
