//! Shipped fixture categories used by the check runner and the test suites.

use crate::caps::Caps;
use crate::error::CatError;
use crate::fincat::FinCategory;

/// Divisors of `n` ordered by divisibility, one arrow per pair `a | b`.
/// Pullbacks are gcds, the terminal object is `n`.
pub fn divisor_lattice(n: u64) -> FinCategory {
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut b = FinCategory::builder(format!("D{n}"));
    let objs: Vec<_> = divisors.iter().map(|d| b.add_object(d.to_string())).collect();
    let mut arrows = std::collections::BTreeMap::new();
    for (i, &a) in divisors.iter().enumerate() {
        for (j, &c) in divisors.iter().enumerate() {
            if a != c && c % a == 0 {
                let m = b.add_mor(format!("{a}->{c}"), objs[i], objs[j]);
                arrows.insert((i, j), m);
            }
        }
    }
    // One arrow per pair, so composites are forced by typing.
    for (&(i, j), &f) in &arrows {
        for (&(j2, k), &g) in &arrows {
            if j == j2 {
                b.set_composite(g, f, arrows[&(i, k)]);
            }
        }
    }
    b.build(&Caps::default()).expect("divisor lattice is a category")
}

/// The divisibility poset of 12; the workhorse fixture.
pub fn d12() -> FinCategory {
    divisor_lattice(12)
}

/// One-object groupoid on the cyclic group of order `k`.
pub fn cyclic_group(k: u32) -> FinCategory {
    let mut b = FinCategory::builder(format!("Z{k}"));
    let star = b.add_object("*");
    let mors: Vec<_> = (0..k)
        .map(|i| {
            let name = match i {
                0 => "e".to_string(),
                1 if k == 2 => "s".to_string(),
                _ => format!("g{i}"),
            };
            b.add_mor(name, star, star)
        })
        .collect();
    b.set_identity(star, mors[0]);
    for i in 0..k {
        for j in 0..k {
            b.set_composite(mors[j as usize], mors[i as usize], mors[((i + j) % k) as usize]);
        }
    }
    b.build(&Caps::default()).expect("cyclic group is a category")
}

/// The Z/2 groupoid: one object, morphisms `e` and `s` with `s∘s = e`.
pub fn z2() -> FinCategory {
    cyclic_group(2)
}

/// Skeletal finite sets of size at most `max`: objects are cardinalities,
/// morphisms are all functions. Encodes a function `m -> n` by its image
/// digits. Lacks pullbacks whenever the fiber product outgrows `max`.
pub fn finset(max: u32) -> FinCategory {
    let mut b = FinCategory::builder(format!("FinSet<={max}"));
    let objs: Vec<_> = (0..=max).map(|i| b.add_object(i.to_string())).collect();

    // All functions m -> n, indexed per (m, n) in lexicographic order.
    let mut tables: std::collections::BTreeMap<(u32, u32), Vec<(Vec<u32>, crate::fincat::Mor)>> =
        std::collections::BTreeMap::new();
    for m in 0..=max {
        for n in 0..=max {
            let fns = enumerate_functions(m, n);
            let mut entry = Vec::new();
            for f in fns {
                let digits: String = f.iter().map(|d| d.to_string()).collect();
                let mor =
                    b.add_mor(format!("{m}>{n}:{digits}"), objs[m as usize], objs[n as usize]);
                entry.push((f, mor));
            }
            tables.insert((m, n), entry);
        }
    }
    for m in 0..=max {
        let id_vec: Vec<u32> = (0..m).collect();
        let id = tables[&(m, m)].iter().find(|(f, _)| *f == id_vec).unwrap().1;
        b.set_identity(objs[m as usize], id);
    }
    for m in 0..=max {
        for n in 0..=max {
            for k in 0..=max {
                for (f, fm) in &tables[&(m, n)] {
                    for (g, gm) in &tables[&(n, k)] {
                        let comp: Vec<u32> = f.iter().map(|&x| g[x as usize]).collect();
                        let cm = tables[&(m, k)].iter().find(|(h, _)| *h == comp).unwrap().1;
                        b.set_composite(*gm, *fm, cm);
                    }
                }
            }
        }
    }
    b.build(&Caps::default()).expect("finite sets form a category")
}

fn enumerate_functions(m: u32, n: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![vec![]];
    }
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; m as usize];
    loop {
        out.push(cur.clone());
        let mut i = m as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Full subcategory of finite sets on sizes 0..=3.
pub fn finset3() -> FinCategory {
    finset(3)
}

/// The walking arrow `[1]`: objects 0, 1 and one arrow `a`.
pub fn walking_arrow() -> FinCategory {
    let mut b = FinCategory::builder("[1]");
    let o0 = b.add_object("0");
    let o1 = b.add_object("1");
    b.add_mor("a", o0, o1);
    b.build(&Caps::default()).expect("walking arrow is a category")
}

/// The terminal category `[0]`.
pub fn point() -> FinCategory {
    let mut b = FinCategory::builder("[0]");
    b.add_object("*");
    b.build(&Caps::default()).expect("point is a category")
}

/// The span shape: `1 <- 0 -> 2`.
pub fn lambda20() -> FinCategory {
    let mut b = FinCategory::builder("Lambda^2_0");
    let o0 = b.add_object("0");
    let o1 = b.add_object("1");
    let o2 = b.add_object("2");
    b.add_mor("l", o0, o1);
    b.add_mor("r", o0, o2);
    b.build(&Caps::default()).expect("span shape is a category")
}

/// The cospan shape: `0 -> 1 <- 2`.
pub fn walking_cospan() -> FinCategory {
    let mut b = FinCategory::builder("Cospan");
    let o0 = b.add_object("0");
    let o1 = b.add_object("1");
    let o2 = b.add_object("2");
    b.add_mor("l", o0, o1);
    b.add_mor("r", o2, o1);
    b.build(&Caps::default()).expect("cospan shape is a category")
}

/// The commuting square poset `w -> x -> s`, `w -> y -> s`; its unique
/// square is cartesian.
pub fn walking_square() -> FinCategory {
    let mut b = FinCategory::builder("Square");
    let w = b.add_object("w");
    let x = b.add_object("x");
    let y = b.add_object("y");
    let s = b.add_object("s");
    let wx = b.add_mor("wx", w, x);
    let wy = b.add_mor("wy", w, y);
    let xs = b.add_mor("xs", x, s);
    let ys = b.add_mor("ys", y, s);
    let ws = b.add_mor("ws", w, s);
    b.set_composite(xs, wx, ws);
    b.set_composite(ys, wy, ws);
    b.build(&Caps::default()).expect("square poset is a category")
}

/// Looks up a shipped fixture by its CLI name.
pub fn by_name(name: &str) -> Result<FinCategory, CatError> {
    match name {
        "d12" => Ok(d12()),
        "z2" => Ok(z2()),
        "finset3" => Ok(finset3()),
        "finset2" => Ok(finset(2)),
        "walking-arrow" => Ok(walking_arrow()),
        "lambda20" => Ok(lambda20()),
        "walking-square" => Ok(walking_square()),
        "point" => Ok(point()),
        other => Err(CatError::UnknownObject(format!("fixture {other:?}"))),
    }
}
