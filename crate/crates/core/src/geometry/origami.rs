//! Square-tiled surfaces for square discriminants.
//!
//! An origami is a pair of permutations `r` (right neighbour) and `u` (upper
//! neighbour) of the squares. The horizontal shear `[[1,1],[0,1]]`
//! ([`Origami::act_r`]) keeps `r` and replaces `u` by `u ∘ r⁻¹`; the
//! vertical shear `[[1,0],[1,1]]` ([`Origami::act_l`]) keeps `u` and
//! replaces `r` by `r ∘ u⁻¹`. In words over `{L, R}`, `L` is the horizontal
//! and `R` the vertical shear.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::decompose::decompose;
use super::surface::{build_surface, SurfaceModel};
use super::Vec2;
use crate::error::{PrymError, Result};
use crate::exactnum::{exact_sqrt, rational_lattice_hnf, QuadNum};
use crate::prototypes::CompletePrototype;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Origami {
    pub r: Vec<usize>,
    pub u: Vec<usize>,
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `(a ∘ b)(i) = a(b(i))`.
fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&j| a[j]).collect()
}

impl Origami {
    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn act_r(&self) -> Origami {
        Origami {
            r: self.r.clone(),
            u: compose(&self.u, &inverse(&self.r)),
        }
    }

    pub fn act_l(&self) -> Origami {
        Origami {
            r: compose(&self.r, &inverse(&self.u)),
            u: self.u.clone(),
        }
    }

    pub fn is_transitive(&self) -> bool {
        self.relabel_from(0).is_some()
    }

    /// Cycle lengths (greater than one) of the commutator `r u r⁻¹ u⁻¹`.
    pub fn commutator_cycles(&self) -> Vec<usize> {
        let c = compose(
            &compose(&self.r, &self.u),
            &compose(&inverse(&self.r), &inverse(&self.u)),
        );
        let mut seen = vec![false; c.len()];
        let mut out = Vec::new();
        for i in 0..c.len() {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = c[j];
                len += 1;
            }
            if len > 1 {
                out.push(len);
            }
        }
        out.sort_unstable();
        out
    }

    fn relabel_from(&self, start: usize) -> Option<Origami> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([start]);
        label[start] = 0;
        let mut next = 1;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for y in [self.r[x], self.u[x]] {
                if label[y] == usize::MAX {
                    label[y] = next;
                    next += 1;
                    queue.push_back(y);
                }
            }
        }
        if order.len() != n {
            return None;
        }
        let mut r = vec![0; n];
        let mut u = vec![0; n];
        for x in 0..n {
            r[label[x]] = label[self.r[x]];
            u[label[x]] = label[self.u[x]];
        }
        Some(Origami { r, u })
    }

    /// Representative of the relabeling class; transitive origamis only.
    pub fn canonical(&self) -> Origami {
        (0..self.n())
            .filter_map(|s| self.relabel_from(s))
            .min()
            .expect("canonical form of a transitive origami")
    }

    pub fn is_isomorphic(&self, other: &Origami) -> bool {
        self.n() == other.n() && self.canonical() == other.canonical()
    }

    /// Applies a word in `L` (horizontal shear) and `R` (vertical shear),
    /// read as a matrix product acting on the left, so the last letter acts
    /// first.
    pub fn apply_word(&self, word: &str) -> Result<Origami> {
        let mut o = self.clone();
        for c in word.chars().rev().filter(|c| !c.is_whitespace()) {
            o = match c {
                'L' => o.act_r(),
                'R' => o.act_l(),
                _ => return Err(PrymError::Parse(format!("word {word:?}: unexpected {c:?}"))),
            };
        }
        Ok(o)
    }

    /// Canonical forms of `Lᵏ·self` for `k ≥ 0`, one per distinct surface.
    pub fn horizontal_shears(&self) -> Vec<Origami> {
        let mut out: Vec<Origami> = Vec::new();
        let mut o = self.clone();
        loop {
            let c = o.canonical();
            if out.contains(&c) {
                return out;
            }
            out.push(c);
            o = o.act_r();
        }
    }

    /// Whether `word·(Lᵃ·self) ≅ Lᵇ·target` for some `a, b`: the relation
    /// between square-tiled surfaces normalized only up to horizontal
    /// shears. Returns the first such `(a, b)`.
    pub fn word_relates(&self, word: &str, target: &Origami) -> Result<Option<(usize, usize)>> {
        let targets = target.horizontal_shears();
        for (a, start) in self.horizontal_shears().iter().enumerate() {
            let img = start.apply_word(word)?.canonical();
            if let Some(b) = targets.iter().position(|t| *t == img) {
                return Ok(Some((a, b)));
            }
        }
        Ok(None)
    }

    /// The orbit under `L` and `R`, as canonical forms in discovery order.
    pub fn orbit(&self) -> Vec<Origami> {
        let start = self.canonical();
        let mut seen = HashSet::from([start.clone()]);
        let mut out = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(o) = queue.pop_front() {
            for next in [o.act_l().canonical(), o.act_r().canonical()] {
                if seen.insert(next.clone()) {
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        out
    }
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |p: &[usize]| p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "r: {}", line(&self.r))?;
        write!(f, "u: {}", line(&self.u))
    }
}

/// Square tiling of the model-A± surface of a complete prototype with
/// square discriminant, after rescaling its period lattice to `ℤ²`.
pub fn to_origami(cp: &CompletePrototype) -> Result<Origami> {
    let disc = cp.proto.disc;
    if exact_sqrt(disc).is_none() {
        return Err(PrymError::NonSquare(disc));
    }
    let model = if cp.eps > 0 {
        SurfaceModel::APlus
    } else {
        SurfaceModel::AMinus
    };
    let s = build_surface(&cp.proto, model)?;
    let d = s.disc;
    let rat = |q: &QuadNum| q.rational_part().clone();
    let gens: Vec<(BigRational, BigRational)> = s
        .polygons
        .iter()
        .flat_map(|p| (0..p.len()).map(move |k| p.edge(k)))
        .map(|e| (rat(&e.x), rat(&e.y)))
        .collect();
    let (a, b, c) = rational_lattice_hnf(&gens)?;
    let q = |r: BigRational| QuadNum::new(r, BigRational::zero(), d);
    let inv = [[q(a.recip()), q(-(&b / (&a * &c)))], [QuadNum::zero(d), q(c.recip())]];
    let norm = s.transformed(&inv);
    let dec = decompose(&norm, &Vec2::ints(1, 0, d))?;
    let int = |x: &QuadNum| -> Result<usize> {
        x.to_i64()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| PrymError::Consistency(format!("non-integral length {x} in a square-tiled surface")))
    };
    let mut first = Vec::new();
    let mut n = 0;
    for cyl in &dec.cylinders {
        first.push(n);
        n += int(&cyl.width)? * int(&cyl.height)?;
    }
    // Positions relative to the first bottom saddle connection.
    let rebased = |list: &[(usize, QuadNum)], base: &QuadNum, w: &QuadNum| -> Result<Vec<(usize, usize)>> {
        list.iter()
            .map(|(k, x)| Ok((*k, int(&(x - base).rem_euclid(w))?)))
            .collect()
    };
    let mut tops = Vec::new();
    let mut bottoms = Vec::new();
    for cyl in &dec.cylinders {
        let base = cyl.bottom[0].1.clone();
        tops.push(rebased(&cyl.top, &base, &cyl.width)?);
        bottoms.push(rebased(&cyl.bottom, &base, &cyl.width)?);
    }
    let mut r = vec![0; n];
    let mut u = vec![0; n];
    for (ci, cyl) in dec.cylinders.iter().enumerate() {
        let (w, h) = (int(&cyl.width)?, int(&cyl.height)?);
        let id = |row: usize, col: usize| first[ci] + row * w + col;
        for row in 0..h {
            for col in 0..w {
                r[id(row, col)] = id(row, (col + 1) % w);
                if row + 1 < h {
                    u[id(row, col)] = id(row + 1, col);
                    continue;
                }
                // the saddle connection on top covering [col, col+1]
                let (sc, start) = tops[ci]
                    .iter()
                    .filter(|(_, p)| *p <= col)
                    .max_by_key(|(_, p)| *p)
                    .or_else(|| tops[ci].iter().max_by_key(|(_, p)| *p))
                    .copied()
                    .unwrap();
                let shift = (col + w - start) % w;
                let (cj, &(_, bpos)) = bottoms
                    .iter()
                    .enumerate()
                    .find_map(|(cj, list)| list.iter().find(|(k, _)| *k == sc).map(|e| (cj, e)))
                    .ok_or_else(|| PrymError::Consistency("saddle connection without a cylinder above".into()))?;
                let wj = int(&dec.cylinders[cj].width)?;
                u[id(row, col)] = first[cj] + (bpos + shift) % wj;
            }
        }
    }
    let o = Origami { r, u };
    if !o.is_transitive() {
        return Err(PrymError::Consistency("square tiling is not connected".into()));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prototypes::Prototype;

    fn cp(w: i64, h: i64, t: i64, e: i64, eps: i8) -> CompletePrototype {
        CompletePrototype {
            proto: Prototype::a3(w, h, t, e).unwrap(),
            eps,
        }
    }

    #[test]
    fn ten_squares_one_zero() {
        let o = to_origami(&cp(12, 1, 0, -2, 1)).unwrap();
        assert_eq!(o.n(), 10);
        assert_eq!(o.commutator_cycles(), vec![5]);
    }

    #[test]
    fn shears_commute_with_relabeling() {
        let o = to_origami(&cp(12, 1, 0, -2, 1)).unwrap();
        let c = o.canonical();
        assert_eq!(o.act_r().canonical(), c.act_r().canonical());
        assert_eq!(o.act_l().canonical(), c.act_l().canonical());
    }

    #[test]
    fn words() {
        let o = to_origami(&cp(12, 1, 0, -2, 1)).unwrap();
        assert_eq!(o.apply_word("LR").unwrap(), o.act_l().act_r());
        assert!(o.apply_word("LX").is_err());
        let k = o.horizontal_shears().len();
        assert!(o.apply_word(&"L".repeat(k)).unwrap().is_isomorphic(&o));
    }

    #[test]
    fn non_square_rejected() {
        assert_eq!(to_origami(&cp(2, 1, 0, -1, 1)), Err(PrymError::NonSquare(17)));
    }
}
