//! Finite strict 2-categories: validation, adjoint search for 1-cells, mate
//! computation, square adjointability, the left Beck-Chevalley checker for
//! functors into 2-categories, and the constructive Beck-Chevalley square
//! inside correspondence hom-categories.

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::CatError;
use crate::fincat::{
    is_iso, is_pullback_square, product_category, pullback, slice2, Cospan, FinCategory, Functor,
    Mor, Obj, ProductCat, SliceCat,
};
use crate::spans::{Span, SpanMor};

/// A finite strict 2-category: objects, hom categories, identity 1-cells,
/// and strictly associative and unital composition functors.
#[derive(Debug, Clone)]
pub struct Strict2Cat {
    pub objects: Vec<String>,
    homs: Vec<FinCategory>,
    identity_cell: Vec<Obj>,
    comp: Vec<Functor>,
    comp_prod: Vec<ProductCat>,
}

/// A 1-cell: an object of a hom category, tagged with its boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneCell {
    pub src: usize,
    pub tgt: usize,
    pub cell: Obj,
}

impl Strict2Cat {
    pub fn new(
        objects: Vec<String>,
        homs: Vec<FinCategory>,
        identity_cell: Vec<Obj>,
        comp: Vec<Functor>,
        comp_prod: Vec<ProductCat>,
    ) -> Self {
        let n = objects.len();
        assert_eq!(homs.len(), n * n);
        assert_eq!(identity_cell.len(), n);
        assert_eq!(comp.len(), n * n * n);
        Strict2Cat { objects, homs, identity_cell, comp, comp_prod }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn hom(&self, a: usize, b: usize) -> &FinCategory {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn identity_one_cell(&self, a: usize) -> OneCell {
        OneCell { src: a, tgt: a, cell: self.identity_cell[a] }
    }

    fn comp_index(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.objects.len();
        a * n * n + b * n + c
    }

    /// Horizontal composition of 1-cells, `f` then `g`.
    pub fn compose_one(&self, f: OneCell, g: OneCell) -> OneCell {
        assert_eq!(f.tgt, g.src);
        let idx = self.comp_index(f.src, f.tgt, g.tgt);
        let prod = &self.comp_prod[idx];
        OneCell {
            src: f.src,
            tgt: g.tgt,
            cell: self.comp[idx].on_obj(prod.pair_obj(f.cell, g.cell)),
        }
    }

    /// Horizontal composition of 2-cells of `hom(a,b)` and `hom(b,c)`.
    pub fn compose_two(&self, a: usize, b: usize, c: usize, phi: Mor, psi: Mor) -> Mor {
        let idx = self.comp_index(a, b, c);
        let prod = &self.comp_prod[idx];
        self.comp[idx].on_mor(prod.pair_mor(phi, psi))
    }

    /// The 2-category with all 2-cells reversed: hom categories are
    /// replaced by their opposites, composition tables carry over index for
    /// index. Left adjointability is right adjointability here.
    pub fn two_op(&self, caps: &Caps) -> Result<Strict2Cat, CatError> {
        let n = self.objects.len();
        let op_homs: Vec<FinCategory> = self.homs.iter().map(crate::fincat::opposite).collect();
        let mut comp = Vec::with_capacity(n * n * n);
        let mut comp_prod = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let idx = self.comp_index(a, b, c);
                    let prod = product_category(&op_homs[a * n + b], &op_homs[b * n + c], caps)?;
                    comp.push(Functor::new(
                        prod.cat.clone(),
                        op_homs[a * n + c].clone(),
                        self.comp[idx].obj_map().to_vec(),
                        self.comp[idx].mor_map().to_vec(),
                    ));
                    comp_prod.push(prod);
                }
            }
        }
        Ok(Strict2Cat {
            objects: self.objects.clone(),
            homs: op_homs,
            identity_cell: self.identity_cell.clone(),
            comp,
            comp_prod,
        })
    }

    /// Checks every strict law by enumeration; empty report iff valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.objects.len();
        for (i, hom) in self.homs.iter().enumerate() {
            let report = hom.validate();
            if !report.is_valid() {
                out.push(format!("hom({},{}) is not a category: {report}", i / n, i % n));
            }
        }
        // Composition functors are functors; this encodes interchange.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let idx = self.comp_index(a, b, c);
                    if let Some(v) = self.comp[idx].check() {
                        out.push(format!("composition ({a},{b},{c}) is not a functor: {v:?}"));
                    }
                }
            }
        }
        // Strict unitality on 1-cells and 2-cells.
        for a in 0..n {
            for b in 0..n {
                let hom = self.hom(a, b);
                for f in hom.objects() {
                    let fc = OneCell { src: a, tgt: b, cell: f };
                    if self.compose_one(self.identity_one_cell(a), fc).cell != f {
                        out.push(format!(
                            "left unit fails on 1-cell {} of hom({a},{b})",
                            hom.object_name(f)
                        ));
                    }
                    if self.compose_one(fc, self.identity_one_cell(b)).cell != f {
                        out.push(format!(
                            "right unit fails on 1-cell {} of hom({a},{b})",
                            hom.object_name(f)
                        ));
                    }
                }
                for phi in hom.mors() {
                    let ida = self.hom(a, a).identity(self.identity_cell[a]);
                    if self.compose_two(a, a, b, ida, phi) != phi {
                        out.push(format!(
                            "left unit fails on 2-cell {} of hom({a},{b})",
                            hom.mor_name(phi)
                        ));
                    }
                    let idb = self.hom(b, b).identity(self.identity_cell[b]);
                    if self.compose_two(a, b, b, phi, idb) != phi {
                        out.push(format!(
                            "right unit fails on 2-cell {} of hom({a},{b})",
                            hom.mor_name(phi)
                        ));
                    }
                }
            }
        }
        // Strict associativity on 1-cell and 2-cell triples.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for f in self.hom(a, b).objects() {
                            let fc = OneCell { src: a, tgt: b, cell: f };
                            for g in self.hom(b, c).objects() {
                                let gc = OneCell { src: b, tgt: c, cell: g };
                                for h in self.hom(c, d).objects() {
                                    let hc = OneCell { src: c, tgt: d, cell: h };
                                    let left = self.compose_one(self.compose_one(fc, gc), hc);
                                    let right = self.compose_one(fc, self.compose_one(gc, hc));
                                    if left.cell != right.cell {
                                        out.push(format!(
                                            "associativity fails on 1-cells ({},{},{})",
                                            self.hom(a, b).object_name(f),
                                            self.hom(b, c).object_name(g),
                                            self.hom(c, d).object_name(h)
                                        ));
                                    }
                                }
                            }
                        }
                        'cells: for phi in self.hom(a, b).mors() {
                            for psi in self.hom(b, c).mors() {
                                for chi in self.hom(c, d).mors() {
                                    let left = self.compose_two(
                                        a,
                                        c,
                                        d,
                                        self.compose_two(a, b, c, phi, psi),
                                        chi,
                                    );
                                    let right = self.compose_two(
                                        a,
                                        b,
                                        d,
                                        phi,
                                        self.compose_two(b, c, d, psi, chi),
                                    );
                                    if left != right {
                                        out.push(format!(
                                            "associativity fails on 2-cells in hom({a},{d})"
                                        ));
                                        break 'cells;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// An adjunction between 1-cells with strict triangle identities.
#[derive(Debug, Clone)]
pub struct Adjunction2 {
    pub left: OneCell,
    pub right: OneCell,
    pub unit: Mor,
    pub counit: Mor,
}

fn strict_triangles(d2: &Strict2Cat, f: OneCell, g: OneCell, unit: Mor, counit: Mor) -> bool {
    let (a, b) = (f.src, f.tgt);
    // (η ⋆ 1_f) then (1_f ⋆ ε) must be the identity on f.
    let one_f = d2.hom(a, b).identity(f.cell);
    let step1 = d2.compose_two(a, a, b, unit, one_f);
    let step2 = d2.compose_two(a, b, b, one_f, counit);
    if d2.hom(a, b).compose_entry(step2, step1) != Some(one_f) {
        return false;
    }
    // (1_g ⋆ η) then (ε ⋆ 1_g) must be the identity on g.
    let one_g = d2.hom(b, a).identity(g.cell);
    let step1 = d2.compose_two(b, a, a, one_g, unit);
    let step2 = d2.compose_two(b, b, a, counit, one_g);
    d2.hom(b, a).compose_entry(step2, step1) == Some(one_g)
}

/// Exhaustive search for a right adjoint of a 1-cell: candidate right
/// 1-cells with unit and counit 2-cells satisfying both strict triangles,
/// first hit in deterministic order.
pub fn find_right_adjoint(d2: &Strict2Cat, f: OneCell) -> Option<Adjunction2> {
    let (a, b) = (f.src, f.tgt);
    for g_obj in d2.hom(b, a).objects() {
        let g = OneCell { src: b, tgt: a, cell: g_obj };
        let fg = d2.compose_one(f, g);
        let gf = d2.compose_one(g, f);
        for &unit in d2.hom(a, a).hom(d2.identity_cell[a], fg.cell) {
            for &counit in d2.hom(b, b).hom(gf.cell, d2.identity_cell[b]) {
                if strict_triangles(d2, f, g, unit, counit) {
                    return Some(Adjunction2 { left: f, right: g, unit, counit });
                }
            }
        }
    }
    None
}

/// A commutative square of 1-cells. The two composites must be equal on the
/// nose, or related by a recorded invertible 2-cell witness
/// `top·right -> left·bottom`.
#[derive(Debug, Clone)]
pub struct Square2 {
    pub top: OneCell,
    pub left: OneCell,
    pub right: OneCell,
    pub bottom: OneCell,
    pub witness: Option<Mor>,
}

impl Square2 {
    pub fn strict(
        d2: &Strict2Cat,
        top: OneCell,
        left: OneCell,
        right: OneCell,
        bottom: OneCell,
    ) -> Result<Self, CatError> {
        let via_top = d2.compose_one(top, right);
        let via_left = d2.compose_one(left, bottom);
        if via_top.cell != via_left.cell {
            return Err(CatError::Invalid2Cat("square does not commute strictly".into()));
        }
        Ok(Square2 { top, left, right, bottom, witness: None })
    }

    pub fn with_witness(
        d2: &Strict2Cat,
        top: OneCell,
        left: OneCell,
        right: OneCell,
        bottom: OneCell,
        witness: Mor,
    ) -> Result<Self, CatError> {
        let via_top = d2.compose_one(top, right);
        let via_left = d2.compose_one(left, bottom);
        let hom = d2.hom(top.src, right.tgt);
        if hom.src(witness) != via_top.cell || hom.tgt(witness) != via_left.cell {
            return Err(CatError::Invalid2Cat("witness is mistyped".into()));
        }
        if is_iso(hom, witness).is_none() {
            return Err(CatError::Invalid2Cat("witness is not invertible".into()));
        }
        Ok(Square2 { top, left, right, bottom, witness: Some(witness) })
    }

    /// The transposed square, for horizontal adjointability.
    pub fn transpose(&self) -> Square2 {
        Square2 {
            top: self.left,
            left: self.top,
            right: self.bottom,
            bottom: self.right,
            witness: self.witness,
        }
    }
}

/// The canonical mate `left^R · top -> bottom · right^R` of a square whose
/// verticals carry the given adjunctions, assembled by whiskering through
/// the composition functors.
pub fn mate_2cell(
    d2: &Strict2Cat,
    sq: &Square2,
    adj_left: &Adjunction2,
    adj_right: &Adjunction2,
) -> Result<Mor, CatError> {
    if adj_left.left != sq.left || adj_right.left != sq.right {
        return Err(CatError::Invalid2Cat("adjunction data does not match the square".into()));
    }
    let e1 = sq.left.tgt; // lower-left object
    let d_tgt = sq.right.src; // upper-right object
    let lr = adj_left.right; // left^R : e1 -> top.src
    let start = d2.compose_one(lr, sq.top);
    let hom = d2.hom(e1, d_tgt);

    // (1 ⋆ η_right): (left^R·top)·id -> (left^R·top)·(right·right^R).
    let one_start = hom.identity(start.cell);
    let step1 = d2.compose_two(e1, d_tgt, d_tgt, one_start, adj_right.unit);

    // (left^R·top)·(right·right^R) = left^R·(top·right)·right^R, where
    // top·right equals left·bottom strictly or via the witness.
    let step_witness = sq.witness.map(|w| {
        let rr = adj_right.right;
        let rr_id = d2.hom(rr.src, rr.tgt).identity(rr.cell);
        let lr_id = d2.hom(lr.src, lr.tgt).identity(lr.cell);
        let w_rr = d2.compose_two(sq.top.src, d_tgt, rr.tgt, w, rr_id);
        d2.compose_two(e1, sq.top.src, rr.tgt, lr_id, w_rr)
    });

    // (ε_left ⋆ 1): (left^R·left)·(bottom·right^R) -> bottom·right^R.
    let tail = d2.compose_one(sq.bottom, adj_right.right);
    let one_tail = hom.identity(tail.cell);
    let step2 = d2.compose_two(e1, e1, d_tgt, adj_left.counit, one_tail);

    let mut acc = step1;
    if let Some(wit) = step_witness {
        acc = hom
            .compose_entry(wit, acc)
            .ok_or_else(|| CatError::Invalid2Cat("witness does not compose".into()))?;
    }
    hom.compose_entry(step2, acc).ok_or_else(|| {
        CatError::Invalid2Cat("mate legs do not compose; square data mismatch".into())
    })
}

/// Outcome of a square adjointability check.
#[derive(Debug, Clone)]
pub enum SquareAdjointability {
    Yes { mate: Mor },
    /// One of the relevant 1-cells has no adjoint.
    MissingAdjoint { which: &'static str },
    NonInvertibleMate { mate: Mor },
}

impl SquareAdjointability {
    pub fn holds(&self) -> bool {
        matches!(self, SquareAdjointability::Yes { .. })
    }
}

/// Vertical right adjointability: both verticals admit right adjoints and
/// the canonical mate is invertible.
pub fn is_vertically_right_adjointable(
    d2: &Strict2Cat,
    sq: &Square2,
) -> Result<SquareAdjointability, CatError> {
    let Some(adj_left) = find_right_adjoint(d2, sq.left) else {
        return Ok(SquareAdjointability::MissingAdjoint { which: "left vertical" });
    };
    let Some(adj_right) = find_right_adjoint(d2, sq.right) else {
        return Ok(SquareAdjointability::MissingAdjoint { which: "right vertical" });
    };
    let mate = mate_2cell(d2, sq, &adj_left, &adj_right)?;
    let hom = d2.hom(sq.left.tgt, sq.right.src);
    if is_iso(hom, mate).is_some() {
        Ok(SquareAdjointability::Yes { mate })
    } else {
        Ok(SquareAdjointability::NonInvertibleMate { mate })
    }
}

/// Horizontal right adjointability is vertical adjointability of the
/// transpose; full right adjointability is both.
pub fn is_horizontally_right_adjointable(
    d2: &Strict2Cat,
    sq: &Square2,
) -> Result<SquareAdjointability, CatError> {
    is_vertically_right_adjointable(d2, &sq.transpose())
}

pub fn is_right_adjointable(d2: &Strict2Cat, sq: &Square2) -> Result<bool, CatError> {
    Ok(is_vertically_right_adjointable(d2, sq)?.holds()
        && is_horizontally_right_adjointable(d2, sq)?.holds())
}

/// A strict functor from a finite category into a 2-category: object map
/// plus 1-cell map, strictly functorial.
#[derive(Debug, Clone)]
pub struct TwoFunctor {
    pub source: FinCategory,
    pub obj_map: Vec<usize>,
    pub cell_map: Vec<Obj>,
}

impl TwoFunctor {
    pub fn one_cell(&self, m: Mor) -> OneCell {
        OneCell {
            src: self.obj_map[self.source.src(m).idx()],
            tgt: self.obj_map[self.source.tgt(m).idx()],
            cell: self.cell_map[m.idx()],
        }
    }

    pub fn check(&self, d2: &Strict2Cat) -> Result<(), CatError> {
        let c = &self.source;
        for o in c.objects() {
            if self.cell_map[c.identity(o).idx()] != d2.identity_cell[self.obj_map[o.idx()]] {
                return Err(CatError::Invalid2Cat(format!(
                    "identity of {} does not map to the identity 1-cell",
                    c.object_name(o)
                )));
            }
        }
        for f in c.mors() {
            for &g in c.mors_from(c.tgt(f)) {
                let gf = c.compose_entry(g, f).expect("composable");
                let composed = d2.compose_one(self.one_cell(f), self.one_cell(g));
                if composed.cell != self.cell_map[gf.idx()] {
                    return Err(CatError::Invalid2Cat(format!(
                        "strict functoriality fails on ({}, {})",
                        c.mor_name(g),
                        c.mor_name(f)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Left Beck-Chevalley for a functor into a 2-category: every cospan with a
/// pullback must map to a right adjointable square (both orientations).
/// Returns the first failing cospan.
pub fn check_left_bc(d2: &Strict2Cat, f: &TwoFunctor) -> Result<Option<Cospan>, CatError> {
    f.check(d2)?;
    let c = &f.source;
    for left in c.mors() {
        for right in c.mors() {
            if c.tgt(left) != c.tgt(right) {
                continue;
            }
            let cs = Cospan { left, right };
            let Some(pb) = pullback(c, &cs) else { continue };
            let sq = Square2::strict(
                d2,
                f.one_cell(pb.to_right),
                f.one_cell(pb.to_left),
                f.one_cell(cs.right),
                f.one_cell(cs.left),
            )?;
            if !is_right_adjointable(d2, &sq)? {
                return Ok(Some(cs));
            }
        }
    }
    Ok(None)
}

/// The Beck-Chevalley square of counit 2-cells inside the hom category
/// `End(s)` of the span bicategory, for a cartesian square of the ambient
/// category, with the verdict that it is cartesian in the slice.
#[derive(Debug, Clone)]
pub struct CorrBcSquare {
    /// Corners: the spans `ι(γ)ι^R(γ)`, `ι(β)ι^R(β)`, `ι(α)ι^R(α)`, `id_s`.
    pub corners: [Span; 4],
    /// Edges: top, left, right, bottom counit-derived 2-cells.
    pub cells: [SpanMor; 4],
    pub slice: SliceCat,
    pub cartesian_in_slice: bool,
}

/// Builds the four composite spans and counit 2-cells for a cartesian
/// square with corner `s`, and verifies the result is a cartesian square in
/// the slice `C_{/s,s}`.
pub fn bc_square_in_corr(
    cat: &FinCategory,
    to_left: Mor,  // w -> x
    to_right: Mor, // w -> y
    cs: &Cospan,   // x -> s <- y
    caps: &Caps,
) -> Result<CorrBcSquare, CatError> {
    if !is_pullback_square(cat, to_left, to_right, cs) {
        return Err(CatError::Other("input square is not cartesian".into()));
    }
    let s = cat.tgt(cs.left);
    let gamma = cat.compose(cs.left, to_left)?;
    let span_of = |leg: Mor| -> Result<Span, CatError> { Span::new(cat, leg, leg) };
    let diag_span = span_of(gamma)?;
    let right_span = span_of(cs.right)?;
    let left_span = span_of(cs.left)?;
    let id_span = crate::spans::identity_span(cat, s);

    // The counit-derived 2-cells are the original square's arrows as apex
    // maps between the composite spans.
    let top = SpanMor::new(diag_span.clone(), right_span.clone(), to_right)?;
    let left = SpanMor::new(diag_span.clone(), left_span.clone(), to_left)?;
    let right = SpanMor::new(right_span.clone(), id_span.clone(), cs.right)?;
    let bottom = SpanMor::new(left_span.clone(), id_span.clone(), cs.left)?;

    let via_top = crate::spans::vcompose_2cells(&top, &right)?;
    let via_left = crate::spans::vcompose_2cells(&left, &bottom)?;
    if via_top.apex_map != via_left.apex_map {
        return Err(CatError::Other("counit square does not commute; engine bug".into()));
    }

    // Cartesianness inside the slice category.
    let slice = slice2(cat, s, s, caps)?;
    let o_diag = slice.object_of(gamma, gamma).expect("slice object exists");
    let o_right = slice.object_of(cs.right, cs.right).expect("slice object exists");
    let o_left = slice.object_of(cs.left, cs.left).expect("slice object exists");
    let ids = cat.identity(s);
    let o_id = slice.object_of(ids, ids).expect("slice object exists");
    let m_top = slice.mor_of(o_diag, o_right, to_right).expect("slice morphism exists");
    let m_left = slice.mor_of(o_diag, o_left, to_left).expect("slice morphism exists");
    let m_right = slice.mor_of(o_right, o_id, cs.right).expect("slice morphism exists");
    let m_bottom = slice.mor_of(o_left, o_id, cs.left).expect("slice morphism exists");
    let cartesian_in_slice = is_pullback_square(
        &slice.cat,
        m_left,
        m_top,
        &Cospan { left: m_bottom, right: m_right },
    );

    Ok(CorrBcSquare {
        corners: [diag_span, right_span, left_span, id_span],
        cells: [top, left, right, bottom],
        slice,
        cartesian_in_slice,
    })
}

// ---------------------------------------------------------------------------
// 2-category constructors
// ---------------------------------------------------------------------------

/// The span 2-category of a poset: objects are the poset's objects, homs are
/// the two-sided slices, composition is by meets. Strict because poset
/// pullbacks are unique on the nose.
pub fn poset_corr_two_cat(cat: &FinCategory, caps: &Caps) -> Result<Strict2Cat, CatError> {
    let n = cat.object_count();
    let mut homs = Vec::with_capacity(n * n);
    let mut slices = Vec::with_capacity(n * n);
    for a in cat.objects() {
        for b in cat.objects() {
            let s = slice2(cat, a, b, caps)?;
            homs.push(s.cat.clone());
            slices.push(s);
        }
    }
    let identity_cell: Vec<Obj> = cat
        .objects()
        .map(|a| {
            let id = cat.identity(a);
            slices[a.idx() * n + a.idx()].object_of(id, id).expect("identity span exists")
        })
        .collect();

    let mut comp = Vec::with_capacity(n * n * n);
    let mut comp_prod = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let hom_ab = &slices[a * n + b];
                let hom_bc = &slices[b * n + c];
                let hom_ac = &slices[a * n + c];
                let prod = product_category(&hom_ab.cat, &hom_bc.cat, caps)?;
                let obj_map: Vec<Obj> = prod
                    .cat
                    .objects()
                    .map(|o| {
                        let (f, g) = prod.split_obj(o);
                        let (l1, r1) = hom_ab.legs(f);
                        let (l2, r2) = hom_bc.legs(g);
                        let pb = pullback(cat, &Cospan { left: r1, right: l2 })
                            .expect("poset has all meets");
                        let left = cat.compose(l1, pb.to_left).expect("legs compose");
                        let right = cat.compose(r2, pb.to_right).expect("legs compose");
                        hom_ac.object_of(left, right).expect("composite span exists")
                    })
                    .collect();
                let mor_map: Vec<Mor> = prod
                    .cat
                    .mors()
                    .map(|m| {
                        let from = obj_map[prod.cat.src(m).idx()];
                        let to = obj_map[prod.cat.tgt(m).idx()];
                        // Thin homs: the composite 2-cell is the unique arrow.
                        hom_ac.cat.hom(from, to)[0]
                    })
                    .collect();
                comp.push(Functor::new(prod.cat.clone(), hom_ac.cat.clone(), obj_map, mor_map));
                comp_prod.push(prod);
            }
        }
    }
    Ok(Strict2Cat::new(
        cat.objects().map(|o| cat.object_name(o).to_string()).collect(),
        homs,
        identity_cell,
        comp,
        comp_prod,
    ))
}

/// The inclusion of a poset into its span 2-category, sending an arrow to
/// the span with an identity left leg.
pub fn poset_corr_inclusion(
    cat: &FinCategory,
    d2: &Strict2Cat,
    caps: &Caps,
) -> Result<TwoFunctor, CatError> {
    let cell_map: Vec<Obj> = cat
        .mors()
        .map(|m| {
            let a = cat.src(m);
            let b = cat.tgt(m);
            // Slice object ids are reproducible, so rebuilding the slice
            // yields the stored hom category's ids.
            let slice = slice2(cat, a, b, caps)?;
            let id = cat.identity(a);
            Ok(slice.object_of(id, m).expect("iota span exists"))
        })
        .collect::<Result<_, CatError>>()?;
    let f = TwoFunctor {
        source: cat.clone(),
        obj_map: cat.objects().map(|o| o.idx()).collect(),
        cell_map,
    };
    f.check(d2)?;
    Ok(f)
}

/// A delooped category of monotone endomaps: one object, one 1-cell per map
/// in the closure, a unique 2-cell `f -> g` when `f <= g` pointwise.
pub struct EndomapDeloop {
    pub two_cat: Strict2Cat,
    /// The monotone maps backing each 1-cell, in object order.
    pub maps: Vec<Vec<Obj>>,
}

impl EndomapDeloop {
    pub fn cell_of(&self, map: &[Obj]) -> Option<OneCell> {
        self.maps
            .iter()
            .position(|m| m == map)
            .map(|i| OneCell { src: 0, tgt: 0, cell: Obj(i as u32) })
    }
}

/// Closes a generating set of monotone endomaps of a poset under
/// composition and builds the delooped strict 2-category.
pub fn monotone_endomap_deloop(
    poset: &FinCategory,
    generators: &[Vec<Obj>],
    caps: &Caps,
) -> Result<EndomapDeloop, CatError> {
    let identity: Vec<Obj> = poset.objects().collect();
    let mut maps: Vec<Vec<Obj>> = vec![identity];
    for g in generators {
        if !maps.contains(g) {
            maps.push(g.clone());
        }
    }
    loop {
        let mut added = false;
        let snapshot = maps.clone();
        for f in &snapshot {
            for g in &snapshot {
                // Apply f, then g.
                let composite: Vec<Obj> = f.iter().map(|&o| g[o.idx()]).collect();
                if !maps.contains(&composite) {
                    maps.push(composite);
                    added = true;
                }
            }
        }
        if maps.len() > caps.derived_objects() {
            return Err(CatError::Overflow {
                what: "monotone endomap closure",
                size: maps.len(),
                limit: caps.derived_objects(),
            });
        }
        if !added {
            break;
        }
    }

    let le = |f: &Vec<Obj>, g: &Vec<Obj>| -> bool {
        f.iter().zip(g).all(|(&x, &y)| !poset.hom(x, y).is_empty())
    };
    let mut b = FinCategory::builder(format!("End({})", poset.name()));
    for i in 0..maps.len() {
        b.add_object(format!("m{i}"));
    }
    let mut arrows = BTreeMap::new();
    for (i, f) in maps.iter().enumerate() {
        for (j, g) in maps.iter().enumerate() {
            if le(f, g) {
                let m = b.add_mor(format!("m{i}<=m{j}"), Obj(i as u32), Obj(j as u32));
                arrows.insert((i, j), m);
                if i == j {
                    b.set_identity(Obj(i as u32), m);
                }
            }
        }
    }
    for (&(i, j), &f) in &arrows {
        for (&(j2, k), &g) in &arrows {
            if j == j2 {
                b.set_composite(g, f, arrows[&(i, k)]);
            }
        }
    }
    let hom = b.build_derived(caps, "endomap hom category")?;

    let prod = product_category(&hom, &hom, caps)?;
    let obj_map: Vec<Obj> = prod
        .cat
        .objects()
        .map(|o| {
            let (f, g) = prod.split_obj(o);
            let composite: Vec<Obj> =
                maps[f.idx()].iter().map(|&x| maps[g.idx()][x.idx()]).collect();
            Obj(maps.iter().position(|m| *m == composite).expect("closed under composition")
                as u32)
        })
        .collect();
    let mor_map: Vec<Mor> = prod
        .cat
        .mors()
        .map(|m| {
            let from = obj_map[prod.cat.src(m).idx()];
            let to = obj_map[prod.cat.tgt(m).idx()];
            hom.hom(from, to)[0]
        })
        .collect();
    let comp = Functor::new(prod.cat.clone(), hom.clone(), obj_map, mor_map);

    let two_cat =
        Strict2Cat::new(vec!["*".to_string()], vec![hom], vec![Obj(0)], vec![comp], vec![prod]);
    Ok(EndomapDeloop { two_cat, maps })
}
