//! Saddle connections up to a box bound, by developing triangles along
//! wedges of directions from each corner of the zero.

use serde::Serialize;

use super::decompose::{decompose, triangulate};
use super::surface::TranslationSurface;
use super::Vec2;
use crate::error::Result;
use crate::exactnum::QuadNum;

fn in_box(v: &Vec2, bound: &QuadNum) -> bool {
    v.x.abs() <= *bound && v.y.abs() <= *bound
}

/// Both points lie beyond one side of the box `[-bound, bound]²`.
fn beyond_box(p: &Vec2, q: &Vec2, bound: &QuadNum) -> bool {
    let nb = -bound;
    (p.x > *bound && q.x > *bound) || (p.x < nb && q.x < nb) || (p.y > *bound && q.y > *bound) || (p.y < nb && q.y < nb)
}

/// Holonomies of all outgoing saddle connections with both coordinates
/// bounded by `bound`. A saddle connection appears once from each end, so
/// the list is symmetric under `v ↦ −v`.
pub fn saddle_connections(s: &TranslationSurface, bound: &QuadNum) -> Result<Vec<Vec2>> {
    let tris = triangulate(s)?;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for (ti, t) in tris.iter().enumerate() {
        for j in 0..3 {
            let o = -t.vertex(j);
            let a = t.vertex(j + 1) + &o;
            let b = t.vertex(j + 2) + &o;
            if in_box(&a, bound) {
                out.push(a.clone());
            }
            stack.push((ti, (j + 1) % 3, o, a, b));
        }
    }
    while let Some((ti, k, o, a, b)) = stack.pop() {
        let t = &tris[ti];
        let (p, q) = (t.vertex(k) + &o, t.vertex(k + 1) + &o);
        if beyond_box(&p, &q, bound) {
            continue;
        }
        let (t2, k2) = t.nb[k];
        let o2 = &o - &t.off[k];
        let r = tris[t2].vertex(k2 + 2) + &o2;
        let left_of_a = a.cross(&r).is_positive();
        let right_of_b = r.cross(&b).is_positive();
        if left_of_a && right_of_b {
            if in_box(&r, bound) {
                out.push(r.clone());
            }
            stack.push((t2, (k2 + 1) % 3, o2.clone(), a, r.clone()));
            stack.push((t2, (k2 + 2) % 3, o2, r, b));
        } else if !right_of_b {
            stack.push((t2, (k2 + 1) % 3, o2, a, b));
        } else {
            stack.push((t2, (k2 + 2) % 3, o2, a, b));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleCylinder {
    pub direction: Vec2,
    /// Holonomy of the core curve.
    pub core: Vec2,
}

/// Simple cylinders whose core holonomy lies in the box of size `bound`,
/// one entry per cylinder (directions taken up to sign).
pub fn find_simple_cylinders(s: &TranslationSurface, bound: &QuadNum) -> Result<Vec<SimpleCylinder>> {
    let mut dirs: Vec<Vec2> = Vec::new();
    for v in saddle_connections(s, bound)? {
        let upper = v.y.is_positive() || (v.y.is_zero() && v.x.is_positive());
        if upper && !dirs.iter().any(|u| u.cross(&v).is_zero()) {
            dirs.push(v);
        }
    }
    let mut out = Vec::new();
    for dir in dirs {
        let dec = decompose(s, &dir)?;
        for (i, c) in dec.cylinders.iter().enumerate() {
            let core = dec.core_holonomy(i);
            if c.is_simple() && in_box(&core, bound) {
                out.push(SimpleCylinder {
                    direction: dir.clone(),
                    core,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_surface, SurfaceModel};
    use crate::prototypes::Prototype;

    #[test]
    fn symmetric_and_contains_edges() {
        let p = Prototype::a3(2, 1, 0, -1).unwrap();
        let s = build_surface(&p, SurfaceModel::APlus).unwrap();
        let sc = saddle_connections(&s, &QuadNum::int(3, s.disc)).unwrap();
        for v in &sc {
            assert!(sc.contains(&-v));
        }
        assert!(sc.contains(&Vec2::new(s.lambda(), QuadNum::zero(s.disc))));
        assert!(sc.contains(&Vec2::new(QuadNum::zero(s.disc), s.lambda())));
    }

    #[test]
    fn a_plus_has_horizontal_simple_cylinder() {
        let p = Prototype::a3(2, 1, 0, -1).unwrap();
        let s = build_surface(&p, SurfaceModel::APlus).unwrap();
        let found = find_simple_cylinders(&s, &QuadNum::int(2, s.disc)).unwrap();
        let lam = s.lambda();
        assert!(found
            .iter()
            .any(|c| c.core == Vec2::new(lam.clone(), QuadNum::zero(s.disc))));
    }
}
