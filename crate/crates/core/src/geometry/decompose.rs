//! Cylinder decomposition in a periodic direction.
//!
//! The surface is rotated by the similarity `[[vx, vy], [−vy, vx]]` so the
//! direction becomes horizontal, triangulated, and the five rightward
//! horizontal separatrices are traced until they hit the zero. Each
//! triangle is then cut at the heights of its vertices and of the traced
//! saddle connections; the resulting bands chain across right edges into
//! cylinders. All lengths in the result are measured in the rotated frame,
//! i.e. multiplied by `|v|`.

use std::fmt;

use serde::Serialize;

use super::surface::TranslationSurface;
use super::{serialize_quad, Vec2};
use crate::error::{PrymError, Result};
use crate::exactnum::QuadNum;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// A triangle of the triangulated surface with its glued neighbours.
#[derive(Clone, Debug)]
pub(crate) struct Tri {
    pub v: [Vec2; 3],
    /// Neighbour across edge `j` and its edge index.
    pub nb: [(usize, usize); 3],
    /// Translation from this triangle's chart to the neighbour's.
    pub off: [Vec2; 3],
    pub rho: usize,
}

impl Tri {
    pub fn vertex(&self, j: usize) -> &Vec2 {
        &self.v[j % 3]
    }
}

fn in_closed_triangle(p: &Vec2, a: &Vec2, b: &Vec2, c: &Vec2) -> bool {
    let s1 = (b - a).cross(&(p - a)).sign();
    let s2 = (c - b).cross(&(p - b)).sign();
    let s3 = (a - c).cross(&(p - c)).sign();
    s1 >= 0 && s2 >= 0 && s3 >= 0
}

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
fn ear_clip(pts: &[Vec2]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::new();
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&i| {
            let (a, b, c) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            if !(&pts[b] - &pts[a]).cross(&(&pts[c] - &pts[a])).is_positive() {
                return false;
            }
            !idx.iter()
                .any(|&k| k != a && k != b && k != c && in_closed_triangle(&pts[k], &pts[a], &pts[b], &pts[c]))
        });
        let i = ear.expect("simple polygon has an ear");
        out.push([idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]]);
        idx.remove(i);
    }
    out.push([idx[0], idx[1], idx[2]]);
    out
}

/// Triangulates every polygon; ρ-images reuse the index triples of their
/// preimage so triangles correspond under ρ.
pub(crate) fn triangulate(s: &TranslationSurface) -> Result<Vec<Tri>> {
    let np = s.polygons.len();
    let mut triples: Vec<Option<Vec<[usize; 3]>>> = vec![None; np];
    for p in 0..np {
        if triples[p].is_none() {
            let tr = ear_clip(&s.polygons[p].vertices);
            let r = s.rho[p];
            if r == p {
                return Err(PrymError::Consistency("ρ-invariant polygons are not supported".into()));
            }
            triples[r] = Some(tr.clone());
            triples[p] = Some(tr);
        }
    }
    let triples: Vec<Vec<[usize; 3]>> = triples.into_iter().map(|t| t.unwrap()).collect();
    let mut first = vec![0; np];
    let mut total = 0;
    for p in 0..np {
        first[p] = total;
        total += triples[p].len();
    }
    // owner of each polygon edge and of each diagonal
    let mut edge_owner: Vec<Vec<Option<(usize, usize)>>> = s.polygons.iter().map(|p| vec![None; p.len()]).collect();
    let mut diag: std::collections::HashMap<(usize, usize, usize), (usize, usize)> = Default::default();
    for p in 0..np {
        let n = s.polygons[p].len();
        for (i, t) in triples[p].iter().enumerate() {
            for j in 0..3 {
                let (a, b) = (t[j], t[(j + 1) % 3]);
                if b == (a + 1) % n {
                    edge_owner[p][a] = Some((first[p] + i, j));
                } else {
                    diag.insert((p, a, b), (first[p] + i, j));
                }
            }
        }
    }
    let mut tris = Vec::with_capacity(total);
    for p in 0..np {
        let poly = &s.polygons[p];
        let n = poly.len();
        for (i, t) in triples[p].iter().enumerate() {
            let v = [0, 1, 2].map(|j| poly.vertices[t[j]].clone());
            let mut nb = [(0, 0); 3];
            let mut off = [Vec2::zero(s.disc), Vec2::zero(s.disc), Vec2::zero(s.disc)];
            for j in 0..3 {
                let (a, b) = (t[j], t[(j + 1) % 3]);
                let (q, partner) = if b == (a + 1) % n {
                    let g = s.gluings[p][a];
                    (g.poly, edge_owner[g.poly][g.edge].expect("edge owned"))
                } else {
                    (p, diag[&(p, b, a)])
                };
                nb[j] = partner;
                let pt = &triples[q][partner.0 - first[q]];
                let pv = &s.polygons[q].vertices[pt[(partner.1 + 1) % 3]];
                off[j] = pv - &v[j];
            }
            tris.push(Tri {
                v,
                nb,
                off,
                rho: first[s.rho[p]] + i,
            });
        }
    }
    Ok(tris)
}

fn transform(tris: &[Tri], m: &[[QuadNum; 2]; 2]) -> Vec<Tri> {
    let f = |v: &Vec2| Vec2::new(&m[0][0] * &v.x + &m[0][1] * &v.y, &m[1][0] * &v.x + &m[1][1] * &v.y);
    tris.iter()
        .map(|t| Tri {
            v: [f(&t.v[0]), f(&t.v[1]), f(&t.v[2])],
            nb: t.nb,
            off: [f(&t.off[0]), f(&t.off[1]), f(&t.off[2])],
            rho: t.rho,
        })
        .collect()
}

/// The similarity taking `dir` to the positive horizontal axis.
pub(crate) fn rotation(dir: &Vec2) -> [[QuadNum; 2]; 2] {
    [[dir.x.clone(), dir.y.clone()], [-&dir.y, dir.x.clone()]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orbit {
    Fixed,
    /// Swapped with the cylinder of the given index.
    Swapped(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Cylinder {
    /// Circumference.
    #[serde(serialize_with = "serialize_quad")]
    pub width: QuadNum,
    #[serde(serialize_with = "serialize_quad")]
    pub height: QuadNum,
    /// Twist in `[0, width)`, measured along a saddle connection lying on
    /// both boundaries when there is one, else between the first saddle
    /// connections of the two boundaries.
    #[serde(serialize_with = "serialize_quad")]
    pub twist: QuadNum,
    pub orbit: Orbit,
    /// Saddle connections on the bottom boundary with their start positions
    /// in `[0, width)`, sorted by position.
    #[serde(skip)]
    pub bottom: Vec<(usize, QuadNum)>,
    #[serde(skip)]
    pub top: Vec<(usize, QuadNum)>,
}

impl Cylinder {
    pub fn is_simple(&self) -> bool {
        self.bottom.len() == 1 && self.top.len() == 1
    }

    pub fn top_pos(&self, sc: usize) -> Option<&QuadNum> {
        self.top.iter().find(|(k, _)| *k == sc).map(|(_, x)| x)
    }

    pub fn bottom_pos(&self, sc: usize) -> Option<&QuadNum> {
        self.bottom.iter().find(|(k, _)| *k == sc).map(|(_, x)| x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DecompModel {
    APlus,
    AMinus,
    B,
    C,
    D,
    /// A genus-4 decomposition with the given number of cylinders.
    Genus4(usize),
}

impl fmt::Display for DecompModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompModel::APlus => "A+",
            DecompModel::AMinus => "A-",
            DecompModel::B => "B",
            DecompModel::C => "C",
            DecompModel::D => "D",
            DecompModel::Genus4(k) => return write!(f, "genus-4 with {k} cylinders"),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderDecomposition {
    pub disc: u64,
    pub direction: Vec2,
    /// `|v|²`: areas in this decomposition are the surface areas times this.
    #[serde(serialize_with = "serialize_quad")]
    pub area_scale: QuadNum,
    pub cylinders: Vec<Cylinder>,
    pub model: DecompModel,
}

impl CylinderDecomposition {
    pub fn area(&self) -> QuadNum {
        self.cylinders
            .iter()
            .fold(QuadNum::zero(self.disc), |acc, c| acc + &c.width * &c.height)
    }

    pub fn fixed(&self) -> Option<usize> {
        self.cylinders.iter().position(|c| c.orbit == Orbit::Fixed)
    }

    /// Holonomy of the core curve of cylinder `i` in surface coordinates.
    pub fn core_holonomy(&self, i: usize) -> Vec2 {
        self.direction.scale(&(&self.cylinders[i].width / &self.area_scale))
    }
}

struct Piece {
    tri: usize,
    y: QuadNum,
    x0: QuadNum,
    sc: usize,
}

fn x_at(a: &Vec2, b: &Vec2, y: &QuadNum) -> QuadNum {
    &a.x + &(&(y - &a.y) * &(&(&b.x - &a.x) / &(&b.y - &a.y)))
}

pub fn decompose(s: &TranslationSurface, dir: &Vec2) -> Result<CylinderDecomposition> {
    decompose_with_budget(s, dir, DEFAULT_BUDGET)
}

pub fn decompose_with_budget(s: &TranslationSurface, dir: &Vec2, budget: usize) -> Result<CylinderDecomposition> {
    if dir.is_zero() {
        return Err(PrymError::Consistency("zero direction".into()));
    }
    let m = rotation(dir);
    let tris = transform(&triangulate(s)?, &m);
    let nt = tris.len();

    // Saddle connections.
    let mut levels: Vec<Vec<QuadNum>> = tris.iter().map(|t| t.v.iter().map(|v| v.y.clone()).collect()).collect();
    let mut firsts: Vec<Piece> = Vec::new();
    let mut n_sc = 0;
    let mut steps = 0usize;
    for (ti, t) in tris.iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (t.vertex(j), t.vertex(j + 1));
            if a.y == b.y && b.x > a.x {
                let (t2, j2) = t.nb[j];
                firsts.push(Piece {
                    tri: ti,
                    y: a.y.clone(),
                    x0: a.x.clone(),
                    sc: n_sc,
                });
                let start = tris[t2].vertex(j2 + 1);
                firsts.push(Piece {
                    tri: t2,
                    y: start.y.clone(),
                    x0: start.x.clone(),
                    sc: n_sc,
                });
                n_sc += 1;
            }
        }
    }
    for (ti, t) in tris.iter().enumerate() {
        for j in 0..3 {
            let (prev, cur, next) = (t.vertex(j + 2), t.vertex(j), t.vertex(j + 1));
            if !(prev.y > cur.y && next.y < cur.y) {
                continue;
            }
            let sc = n_sc;
            n_sc += 1;
            let y0 = cur.y.clone();
            firsts.push(Piece {
                tri: ti,
                y: y0.clone(),
                x0: cur.x.clone(),
                sc,
            });
            let (mut ct, mut ej) = (ti, (j + 1) % 3);
            let mut p = Vec2::new(x_at(next, prev, &y0), y0);
            loop {
                steps += 1;
                if steps > budget {
                    return Err(PrymError::NotPeriodic);
                }
                let (t2, j2) = tris[ct].nb[ej];
                p = &p + &tris[ct].off[ej];
                levels[t2].push(p.y.clone());
                let tr = &tris[t2];
                let o = tr.vertex(j2 + 2);
                if o.y == p.y {
                    break;
                }
                let nj = if o.y > p.y { (j2 + 1) % 3 } else { (j2 + 2) % 3 };
                let x = x_at(tr.vertex(nj), tr.vertex(nj + 1), &p.y);
                p = Vec2::new(x, p.y.clone());
                ct = t2;
                ej = nj;
            }
        }
    }
    let expected = s.total_angle_pi() / 2;
    if n_sc != expected {
        return Err(PrymError::Consistency(format!(
            "{n_sc} horizontal saddle connections, expected {expected}"
        )));
    }

    // Bands.
    for l in &mut levels {
        l.sort();
        l.dedup();
    }
    let mut band_start = vec![0usize; nt + 1];
    for ti in 0..nt {
        band_start[ti + 1] = band_start[ti] + levels[ti].len() - 1;
    }
    let nb = band_start[nt];
    let band_tri: Vec<usize> = (0..nt)
        .flat_map(|ti| std::iter::repeat_n(ti, levels[ti].len() - 1))
        .collect();
    let band_of = |ti: usize, y1: &QuadNum| -> Option<usize> {
        levels[ti][..levels[ti].len() - 1]
            .iter()
            .position(|l| l == y1)
            .map(|i| band_start[ti] + i)
    };
    let range = |b: usize| {
        let ti = band_tri[b];
        let i = b - band_start[ti];
        (&levels[ti][i], &levels[ti][i + 1])
    };
    let mut right = vec![(0usize, Vec2::zero(s.disc)); nb];
    for (b, slot) in right.iter_mut().enumerate() {
        let ti = band_tri[b];
        let t = &tris[ti];
        let (y1, y2) = range(b);
        let j = (0..3)
            .find(|&j| {
                let (a, c) = (t.vertex(j), t.vertex(j + 1));
                c.y > a.y && a.y <= *y1 && c.y >= *y2
            })
            .ok_or_else(|| PrymError::Consistency("band without right edge".into()))?;
        let (t2, _) = t.nb[j];
        let off = t.off[j].clone();
        let target = band_of(t2, &(y1 + &off.y))
            .ok_or_else(|| PrymError::Consistency("band does not continue across an edge".into()))?;
        *slot = (target, off);
    }

    // Cylinders.
    let mut cyl_of = vec![usize::MAX; nb];
    let mut origin = vec![Vec2::zero(s.disc); nb];
    let mut cylinders = Vec::new();
    for start in 0..nb {
        if cyl_of[start] != usize::MAX {
            continue;
        }
        let id = cylinders.len();
        let mut b = start;
        let mut o = Vec2::zero(s.disc);
        loop {
            cyl_of[b] = id;
            origin[b] = o.clone();
            let (next, off) = &right[b];
            o = &o + off;
            b = *next;
            if b == start {
                break;
            }
            if cyl_of[b] != usize::MAX {
                return Err(PrymError::Consistency("bands do not close up into cylinders".into()));
            }
        }
        if !o.y.is_zero() || !o.x.is_negative() {
            return Err(PrymError::Consistency("cylinder holonomy is not horizontal".into()));
        }
        let (y1, y2) = range(start);
        cylinders.push(Cylinder {
            width: -&o.x,
            height: y2 - y1,
            twist: QuadNum::zero(s.disc),
            orbit: Orbit::Fixed,
            bottom: Vec::new(),
            top: Vec::new(),
        });
    }
    for piece in &firsts {
        let ti = piece.tri;
        for i in 0..levels[ti].len() - 1 {
            let b = band_start[ti] + i;
            let c = &mut cylinders[cyl_of[b]];
            let pos = (&piece.x0 - &origin[b].x).rem_euclid(&c.width);
            if levels[ti][i] == piece.y {
                c.bottom.push((piece.sc, pos));
            } else if levels[ti][i + 1] == piece.y {
                c.top.push((piece.sc, pos));
            }
        }
    }

    // Involution.
    let rc = Vec2::new(
        &m[0][0] * &s.centre.x + &m[0][1] * &s.centre.y,
        &m[1][0] * &s.centre.x + &m[1][1] * &s.centre.y,
    );
    let mut cyl_img = vec![usize::MAX; cylinders.len()];
    for b in 0..nb {
        let (_, y2) = range(b);
        let rb = band_of(tris[band_tri[b]].rho, &(&rc.y - y2))
            .ok_or_else(|| PrymError::Consistency("ρ-image of a band is missing".into()))?;
        let (c, rcyl) = (cyl_of[b], cyl_of[rb]);
        if cyl_img[c] != usize::MAX && cyl_img[c] != rcyl {
            return Err(PrymError::Consistency("ρ does not act on cylinders".into()));
        }
        cyl_img[c] = rcyl;
    }
    let mut n_fixed = 0;
    for (i, c) in cylinders.iter_mut().enumerate() {
        c.bottom.sort_by(|a, b| a.1.cmp(&b.1));
        c.top.sort_by(|a, b| a.1.cmp(&b.1));
        if c.bottom.is_empty() || c.top.is_empty() {
            return Err(PrymError::Consistency(
                "cylinder boundary without saddle connections".into(),
            ));
        }
        c.orbit = if cyl_img[i] == i {
            n_fixed += 1;
            Orbit::Fixed
        } else {
            Orbit::Swapped(cyl_img[i])
        };
        let shared = c
            .bottom
            .iter()
            .find_map(|(k, x)| c.top_pos(*k).map(|y| (y.clone(), x.clone())));
        let (top, bot) = shared.unwrap_or_else(|| (c.top[0].1.clone(), c.bottom[0].1.clone()));
        c.twist = (top - bot).rem_euclid(&c.width);
    }
    let model = match cylinders.len() {
        k if s.genus() == 4 => DecompModel::Genus4(k),
        1 => DecompModel::D,
        2 => DecompModel::C,
        3 => {
            if n_fixed != 1 {
                return Err(PrymError::Consistency(format!("{n_fixed} fixed cylinders among 3")));
            }
            let f = cylinders.iter().find(|c| c.orbit == Orbit::Fixed).unwrap();
            match f.bottom.len() {
                1 => DecompModel::APlus,
                2 => DecompModel::B,
                3 => DecompModel::AMinus,
                k => {
                    return Err(PrymError::Consistency(format!(
                        "fixed cylinder with {k} bottom saddle connections"
                    )))
                }
            }
        }
        k => return Err(PrymError::Consistency(format!("{k} cylinders"))),
    };
    let area_scale = dir.dot(dir);
    let dec = CylinderDecomposition {
        disc: s.disc,
        direction: dir.clone(),
        area_scale,
        cylinders,
        model,
    };
    if dec.area() != &s.area() * &dec.area_scale {
        return Err(PrymError::Consistency("cylinder areas do not add up".into()));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_surface, SurfaceModel};
    use crate::prototypes::Prototype;

    fn horizontal(s: &TranslationSurface) -> CylinderDecomposition {
        decompose(s, &Vec2::ints(1, 0, s.disc)).unwrap()
    }

    #[test]
    fn horizontal_models() {
        let a = Prototype::a3(4, 2, 1, -2).unwrap();
        let dp = horizontal(&build_surface(&a, SurfaceModel::APlus).unwrap());
        assert_eq!(dp.model, DecompModel::APlus);
        let dm = horizontal(&build_surface(&a, SurfaceModel::AMinus).unwrap());
        assert_eq!(dm.model, DecompModel::AMinus);
        let b = Prototype::b3(1, 1, 0, 0).unwrap();
        let db = horizontal(&build_surface(&b, SurfaceModel::B).unwrap());
        assert_eq!(db.model, DecompModel::B);
        for d in [dp, dm, db] {
            assert_eq!(d.cylinders.len(), 3);
        }
    }

    #[test]
    fn vertical_is_periodic() {
        let a = Prototype::a3(2, 1, 0, -1).unwrap();
        let s = build_surface(&a, SurfaceModel::APlus).unwrap();
        let d = decompose(&s, &Vec2::ints(0, 1, s.disc)).unwrap();
        assert_eq!(d.area(), s.area());
    }
}
