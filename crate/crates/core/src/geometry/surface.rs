//! Polygon models A+, A− and B.
//!
//! Each layout is built from "half" polygons `H_i` together with their images
//! `ρ(H_i) = c − H_i` under the central symmetry about `c/2`. With `s = λ/2`:
//!
//! * A+ (`c = (λ, λ)`): `H0` is the lower-right triangle of the fixed λ×λ
//!   square, `H1` the hexagon of the upper swapped cylinder
//!   `(λ−w,λ) (0,λ) (λ,λ) (λ+t,λ+h) (t,λ+h) (λ−w+t,λ+h)`, whose first and
//!   fifth edges are the self-glued saddle connection of length `w − λ`.
//! * A− (`c = (2s+w+t, h)`): the fixed cylinder is cut along the segment
//!   from `(2s,0)` to `(t,h)` so that its parallelogram is ρ-symmetric;
//!   `H0 = (2s,0) (w,0) (w+s,0) (w+2s,0) (w+t,h)` and `H1` is the s×s square
//!   sitting on `[t, t+s]` at height `h`.
//! * B (`c = (w+t, h)`): `H0 = (0,0) (w−s,0) (w,0) (w+t,h)` and
//!   `H1 = (t,h) (t+s,h) (t+s,h+s) (t+w−s,h+s) (t,h+s)`.
//! * genus-4 model A (`c = (2s, 0)`, `W, H, T = w/2, h/2, t/2`):
//!   `H0 = (0,0) (2s,0) (W,0) (W+T,H) (T+2s,H) (T+s,H) (T,H)` is one of the
//!   two swapped parallelogram cylinders and `H1` the s×s square on
//!   `[T, T+s]` at height `H`. The bottom edge `[0, 2s]` is glued to its
//!   own ρ-image.
//!
//! Every vertex is the zero of the form; [`TranslationSurface::validate`]
//! checks this along with area, gluings and the fixed points of ρ (four in
//! genus 3, two in genus 4).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Vec2;
use crate::error::{PrymError, Result};
use crate::exactnum::QuadNum;
use crate::prototypes::{Model, Prototype};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceModel {
    APlus,
    AMinus,
    B,
    /// The four-cylinder model A of genus 4.
    G4A,
}

impl SurfaceModel {
    pub fn eps(self) -> Option<i8> {
        match self {
            SurfaceModel::APlus => Some(1),
            SurfaceModel::AMinus => Some(-1),
            SurfaceModel::B | SurfaceModel::G4A => None,
        }
    }

    pub fn genus(self) -> u8 {
        if self == SurfaceModel::G4A {
            4
        } else {
            3
        }
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceModel::APlus => "Aplus",
            SurfaceModel::AMinus => "Aminus",
            SurfaceModel::B => "B",
            SurfaceModel::G4A => "G4A",
        })
    }
}

impl FromStr for SurfaceModel {
    type Err = PrymError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Aplus" | "A+" | "aplus" => Ok(SurfaceModel::APlus),
            "Aminus" | "A-" | "aminus" => Ok(SurfaceModel::AMinus),
            "B" | "b" => Ok(SurfaceModel::B),
            "G4A" => Ok(SurfaceModel::G4A),
            _ => Err(PrymError::Parse(format!("unknown model {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeRef {
    pub poly: usize,
    pub edge: usize,
}

const fn er(poly: usize, edge: usize) -> EdgeRef {
    EdgeRef { poly, edge }
}

/// A counter-clockwise vertex loop. Edge `k` runs from vertex `k` to `k+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, k: usize) -> &Vec2 {
        &self.vertices[k % self.len()]
    }

    pub fn edge(&self, k: usize) -> Vec2 {
        self.vertex(k + 1) - self.vertex(k)
    }

    /// Twice the signed area.
    pub fn area2(&self) -> QuadNum {
        let n = self.len();
        let d = self.vertices[0].x.disc();
        (0..n).fold(QuadNum::zero(d), |acc, k| {
            acc + self.vertex(k).cross(self.vertex(k + 1))
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationSurface {
    pub disc: u64,
    pub model: SurfaceModel,
    pub proto: Prototype,
    pub polygons: Vec<Polygon>,
    /// `gluings[p][k]` is the edge glued to edge `k` of polygon `p`.
    pub gluings: Vec<Vec<EdgeRef>>,
    /// ρ maps polygon `p` onto polygon `rho[p]` by `x ↦ centre − x`,
    /// vertex `k` to vertex `k`.
    pub rho: Vec<usize>,
    pub centre: Vec2,
}

struct Builder {
    polys: Vec<Polygon>,
    half: usize,
    glue: Vec<Vec<Option<EdgeRef>>>,
    centre: Vec2,
}

impl Builder {
    fn new(half: Vec<Vec<Vec2>>, centre: Vec2) -> Self {
        let n = half.len();
        let mut polys: Vec<Polygon> = half.into_iter().map(|vertices| Polygon { vertices }).collect();
        for i in 0..n {
            let img = polys[i].vertices.iter().map(|v| &centre - v).collect();
            polys.push(Polygon { vertices: img });
        }
        let glue = polys.iter().map(|p| vec![None; p.len()]).collect();
        Builder {
            polys,
            half: n,
            glue,
            centre,
        }
    }

    fn image(&self, r: EdgeRef) -> EdgeRef {
        er((r.poly + self.half) % (2 * self.half), r.edge)
    }

    fn set(&mut self, a: EdgeRef, b: EdgeRef) {
        let slot = &mut self.glue[a.poly][a.edge];
        assert!(slot.is_none() || *slot == Some(b), "layout glues {a:?} twice");
        *slot = Some(b);
    }

    /// Glues `a` with `b` and `ρ(a)` with `ρ(b)`.
    fn pair(&mut self, a: (usize, usize), b: (usize, usize)) {
        let (a, b) = (er(a.0, a.1), er(b.0, b.1));
        let (ra, rb) = (self.image(a), self.image(b));
        self.set(a, b);
        self.set(b, a);
        self.set(ra, rb);
        self.set(rb, ra);
    }

    fn finish(self, proto: Prototype, model: SurfaceModel) -> TranslationSurface {
        let gluings = self
            .glue
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|g| g.expect("layout leaves an edge unglued"))
                    .collect()
            })
            .collect();
        let n = 2 * self.half;
        TranslationSurface {
            disc: proto.disc as u64,
            model,
            proto,
            polygons: self.polys,
            gluings,
            rho: (0..n).map(|i| (i + self.half) % n).collect(),
            centre: self.centre,
        }
    }
}

/// Canonical polygon realization of a prototype in the given model.
pub fn build_surface(proto: &Prototype, model: SurfaceModel) -> Result<TranslationSurface> {
    proto.validate()?;
    let wanted = if model == SurfaceModel::B { Model::B } else { Model::A };
    if proto.genus != model.genus() || proto.model != wanted {
        return Err(PrymError::InvalidPrototype(format!(
            "{proto} cannot be realized in model {model}"
        )));
    }
    let d = proto.disc as u64;
    let int = |n: i64| QuadNum::int(n, d);
    let (w, h, t) = (int(proto.w), int(proto.h), int(proto.t));
    let lam = proto.lambda();
    let zero = int(0);
    let p = |x: QuadNum, y: QuadNum| Vec2::new(x, y);

    let surface = match model {
        SurfaceModel::APlus => {
            let c0a = vec![
                p(zero.clone(), zero.clone()),
                p(lam.clone(), zero.clone()),
                p(lam.clone(), lam.clone()),
            ];
            let top = &lam + &h;
            let c1 = vec![
                p(&lam - &w, lam.clone()),
                p(zero.clone(), lam.clone()),
                p(lam.clone(), lam.clone()),
                p(&lam + &t, top.clone()),
                p(t.clone(), top.clone()),
                p(&lam - &w + &t, top),
            ];
            let mut b = Builder::new(vec![c0a, c1], p(lam.clone(), lam.clone()));
            b.pair((0, 0), (3, 1));
            b.pair((0, 1), (2, 1));
            b.pair((0, 2), (2, 2));
            b.pair((1, 0), (1, 4));
            b.pair((1, 2), (1, 5));
            b.pair((1, 3), (3, 3));
            b.finish(*proto, model)
        }
        SurfaceModel::AMinus => {
            let s = &lam / &int(2);
            let s2 = lam.clone();
            let c0a = vec![
                p(s2.clone(), zero.clone()),
                p(w.clone(), zero.clone()),
                p(&w + &s, zero.clone()),
                p(&w + &s2, zero.clone()),
                p(&w + &t, h.clone()),
            ];
            let hs = &h + &s;
            let c1 = vec![
                p(t.clone(), h.clone()),
                p(&t + &s, h.clone()),
                p(&t + &s, hs.clone()),
                p(t.clone(), hs),
            ];
            let centre = p(&s2 + &w + &t, h.clone());
            let mut b = Builder::new(vec![c0a, c1], centre);
            b.pair((0, 0), (2, 0));
            b.pair((0, 1), (1, 2));
            b.pair((0, 3), (2, 3));
            b.pair((0, 4), (2, 4));
            b.pair((1, 0), (2, 2));
            b.pair((1, 1), (1, 3));
            b.finish(*proto, model)
        }
        SurfaceModel::B => {
            let s = &lam / &int(2);
            let c0a = vec![
                p(zero.clone(), zero.clone()),
                p(&w - &s, zero.clone()),
                p(w.clone(), zero.clone()),
                p(&w + &t, h.clone()),
            ];
            let hs = &h + &s;
            let c1 = vec![
                p(t.clone(), h.clone()),
                p(&t + &s, h.clone()),
                p(&t + &s, hs.clone()),
                p(&t + &w - &s, hs.clone()),
                p(t.clone(), hs),
            ];
            let mut b = Builder::new(vec![c0a, c1], p(&w + &t, h.clone()));
            b.pair((0, 0), (1, 3));
            b.pair((0, 1), (3, 0));
            b.pair((0, 2), (2, 2));
            b.pair((0, 3), (2, 3));
            b.pair((1, 1), (1, 4));
            b.pair((1, 2), (3, 2));
            b.finish(*proto, model)
        }
        SurfaceModel::G4A => {
            let s = &lam / &int(2);
            let s2 = lam.clone();
            let half = |x: &QuadNum| x / &int(2);
            let (ww, hh, tt) = (half(&w), half(&h), half(&t));
            let m1 = vec![
                p(zero.clone(), zero.clone()),
                p(s2.clone(), zero.clone()),
                p(ww.clone(), zero.clone()),
                p(&ww + &tt, hh.clone()),
                p(&tt + &s2, hh.clone()),
                p(&tt + &s, hh.clone()),
                p(tt.clone(), hh.clone()),
            ];
            let hs = &hh + &s;
            let sq = vec![
                p(tt.clone(), hh.clone()),
                p(&tt + &s, hh.clone()),
                p(&tt + &s, hs.clone()),
                p(tt.clone(), hs),
            ];
            let mut b = Builder::new(vec![m1, sq], p(s2.clone(), zero.clone()));
            b.pair((0, 0), (2, 0));
            b.pair((0, 1), (0, 3));
            b.pair((0, 2), (0, 6));
            b.pair((0, 4), (3, 2));
            b.pair((0, 5), (1, 0));
            b.pair((1, 1), (1, 3));
            b.finish(*proto, model)
        }
    };
    surface.validate()?;
    Ok(surface)
}

impl TranslationSurface {
    pub fn lambda(&self) -> QuadNum {
        self.proto.lambda()
    }

    pub fn area(&self) -> QuadNum {
        let two = QuadNum::int(2, self.disc);
        self.polygons
            .iter()
            .fold(QuadNum::zero(self.disc), |acc, p| acc + p.area2())
            / two
    }

    /// Area predicted by the model: `λ² + 2wh` for A+, `λ²/2 + wh` for A−
    /// and B, `(λ² + wh)/2` in genus 4.
    pub fn model_area(&self) -> QuadNum {
        let lam = self.lambda();
        let wh = QuadNum::int(self.proto.w * self.proto.h, self.disc);
        let l2 = &lam * &lam;
        let two = QuadNum::int(2, self.disc);
        match self.model {
            SurfaceModel::APlus => l2 + &wh + &wh,
            SurfaceModel::G4A => (l2 + wh) / two,
            _ => l2 / two + wh,
        }
    }

    pub fn genus(&self) -> u8 {
        self.model.genus()
    }

    /// Translation taking points of edge `r` to the glued edge.
    pub fn gluing_offset(&self, r: EdgeRef) -> Vec2 {
        let g = self.gluings[r.poly][r.edge];
        self.polygons[g.poly].vertex(g.edge + 1) - self.polygons[r.poly].vertex(r.edge)
    }

    /// Vertex classes as lists of corners `(polygon, vertex)`.
    pub fn vertex_classes(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen: Vec<Vec<bool>> = self.polygons.iter().map(|p| vec![false; p.len()]).collect();
        let mut classes = Vec::new();
        for p in 0..self.polygons.len() {
            for k in 0..self.polygons[p].len() {
                if seen[p][k] {
                    continue;
                }
                let mut class = Vec::new();
                let (mut cp, mut ck) = (p, k);
                while !seen[cp][ck] {
                    seen[cp][ck] = true;
                    class.push((cp, ck));
                    let g = self.gluings[cp][ck];
                    cp = g.poly;
                    ck = (g.edge + 1) % self.polygons[cp].len();
                }
                classes.push(class);
            }
        }
        classes
    }

    /// Total cone angle over all vertices, in units of π.
    pub fn total_angle_pi(&self) -> usize {
        self.polygons.iter().map(|p| p.len() - 2).sum()
    }

    /// Number of fixed points of ρ (the zero, midpoints of edges glued to
    /// their own image, centres of ρ-invariant polygons).
    pub fn rho_fixed_points(&self) -> usize {
        let mut n = 1;
        for (p, row) in self.gluings.iter().enumerate() {
            if self.rho[p] == p {
                n += 1;
            }
            for (k, g) in row.iter().enumerate() {
                if *g == er(self.rho[p], k) && (p, k) < (g.poly, g.edge) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(PrymError::Consistency(format!("surface {}: {m}", self.proto)));
        for (p, poly) in self.polygons.iter().enumerate() {
            if !poly.area2().is_positive() {
                return bad(format!("polygon {p} is not counter-clockwise"));
            }
            for k in 0..poly.len() {
                let g = self.gluings[p][k];
                if self.gluings[g.poly][g.edge] != er(p, k) {
                    return bad(format!("gluing of ({p},{k}) is not an involution"));
                }
                if (g.poly, g.edge) == (p, k) {
                    return bad(format!("edge ({p},{k}) glued to itself"));
                }
                if poly.edge(k) != -&self.polygons[g.poly].edge(g.edge) {
                    return bad(format!("edges ({p},{k}) and ({},{}) are not opposite", g.poly, g.edge));
                }
                let r = self.rho[p];
                let rg = self.gluings[r][k];
                if rg != er(self.rho[g.poly], g.edge) {
                    return bad(format!("ρ does not commute with the gluing of ({p},{k})"));
                }
            }
            let r = self.rho[p];
            if self.rho[r] != p {
                return bad(format!("ρ is not an involution on polygon {p}"));
            }
            let img: Vec<Vec2> = poly.vertices.iter().map(|v| &self.centre - v).collect();
            if img != self.polygons[r].vertices {
                return bad(format!("polygon {r} is not the ρ-image of {p}"));
            }
        }
        let classes = self.vertex_classes();
        let angle = 4 * self.genus() as usize - 2;
        if classes.len() != 1 || self.total_angle_pi() != angle {
            return bad(format!(
                "{} vertex classes with total angle {}π, expected one zero of angle {angle}π",
                classes.len(),
                self.total_angle_pi()
            ));
        }
        let fixed = if self.genus() == 3 { 4 } else { 2 };
        if self.rho_fixed_points() != fixed {
            return bad(format!("ρ has {} fixed points", self.rho_fixed_points()));
        }
        if self.area() != self.model_area() {
            return bad(format!("area {} differs from {}", self.area(), self.model_area()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("surface serializes")
    }

    /// Applies a linear map `[[a, b], [c, d]]` (positive determinant) to
    /// every polygon.
    pub fn transformed(&self, m: &[[QuadNum; 2]; 2]) -> TranslationSurface {
        let f = |v: &Vec2| Vec2::new(&m[0][0] * &v.x + &m[0][1] * &v.y, &m[1][0] * &v.x + &m[1][1] * &v.y);
        let mut out = self.clone();
        for poly in &mut out.polygons {
            for v in &mut poly.vertices {
                *v = f(v);
            }
        }
        out.centre = f(&self.centre);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_models_validate() {
        let a = Prototype::a3(2, 1, 0, -1).unwrap();
        for m in [SurfaceModel::APlus, SurfaceModel::AMinus] {
            build_surface(&a, m).unwrap();
        }
        let b = Prototype::b3(1, 1, 0, 0).unwrap();
        build_surface(&b, SurfaceModel::B).unwrap();
        assert!(build_surface(&b, SurfaceModel::APlus).is_err());
        assert!(build_surface(&a, SurfaceModel::B).is_err());
        let g4 = Prototype::new(12, 1, 0, 2, 4, Model::A).unwrap();
        build_surface(&g4, SurfaceModel::G4A).unwrap();
        assert!(build_surface(&g4, SurfaceModel::APlus).is_err());
    }

    #[test]
    fn area_d12() {
        let p = Prototype::a3(1, 1, 0, -2).unwrap();
        let s = build_surface(&p, SurfaceModel::APlus).unwrap();
        // λ = -1 + √3, so λ² + 2 = 6 − 2√3 = 6 − √12.
        assert_eq!(s.area(), QuadNum::from_ints(6, -1, 12));
    }

    #[test]
    fn twisted_surfaces_validate() {
        for d in 17..120 {
            for p in crate::prototypes::enumerate(d, 3, Model::A) {
                build_surface(&p, SurfaceModel::APlus).unwrap();
                build_surface(&p, SurfaceModel::AMinus).unwrap();
            }
            for p in crate::prototypes::enumerate(d, 3, Model::B) {
                build_surface(&p, SurfaceModel::B).unwrap();
            }
        }
    }
}
