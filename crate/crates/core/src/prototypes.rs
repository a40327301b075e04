//! Prototype families for cylinder decompositions of Prym eigenforms.

use std::fmt;

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{PrymError, Result};
use crate::exactnum::{exact_sqrt, gcd, gcd4, QuadNum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Model {
    A,
    B,
}

/// A tuple `(w, h, t, e)` together with its discriminant, genus and model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Prototype {
    pub w: i64,
    pub h: i64,
    pub t: i64,
    pub e: i64,
    pub disc: i64,
    pub genus: u8,
    pub model: Model,
}

/// `D = e² + k·wh` with `k = 8` in genus 3 and `k = 4` in genus 4.
pub fn disc_factor(genus: u8) -> i64 {
    match genus {
        3 => 8,
        4 => 4,
        _ => panic!("prototypes exist only in genus 3 and 4, not {genus}"),
    }
}

impl Prototype {
    /// Builds and validates a prototype; the discriminant is derived.
    pub fn new(w: i64, h: i64, t: i64, e: i64, genus: u8, model: Model) -> Result<Self> {
        if genus != 3 && genus != 4 {
            return Err(PrymError::InvalidPrototype(format!("genus {genus}")));
        }
        let p = Prototype {
            w,
            h,
            t,
            e,
            disc: e * e + disc_factor(genus) * w * h,
            genus,
            model,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn a3(w: i64, h: i64, t: i64, e: i64) -> Result<Self> {
        Self::new(w, h, t, e, 3, Model::A)
    }

    pub fn b3(w: i64, h: i64, t: i64, e: i64) -> Result<Self> {
        Self::new(w, h, t, e, 3, Model::B)
    }

    pub fn tuple(&self) -> [i64; 4] {
        [self.w, self.h, self.t, self.e]
    }

    pub fn sqrt_disc(&self) -> QuadNum {
        QuadNum::sqrt_d(self.disc as u64)
    }

    /// λ = (e + √D)/2.
    pub fn lambda(&self) -> QuadNum {
        QuadNum::lambda(self.e, self.disc as u64)
    }

    pub fn is_reduced(&self) -> bool {
        self.h == 1 && self.t == 0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(PrymError::InvalidPrototype(format!("{self}: {m}")));
        if self.w <= 0 || self.h <= 0 {
            return bad("w and h must be positive");
        }
        if self.t < 0 || self.t >= gcd(self.w, self.h) {
            return bad("t must lie in [0, gcd(w,h))");
        }
        if gcd4(self.w, self.h, self.t, self.e) != 1 {
            return bad("gcd(w,h,t,e) must be 1");
        }
        if self.disc != self.e * self.e + disc_factor(self.genus) * self.w * self.h {
            return bad("discriminant relation fails");
        }
        if !self.shape_condition() {
            return bad(match (self.genus, self.model) {
                (3, Model::A) => "condition e+2h<w fails",
                (3, Model::B) => "condition λ/2 < w < λ fails",
                (4, Model::A) => "condition λ < w/2 fails",
                _ => "condition w/2 < λ < w fails",
            });
        }
        Ok(())
    }

    fn shape_condition(&self) -> bool {
        let d = self.disc as u64;
        let lam = self.lambda();
        let w = QuadNum::int(self.w, d);
        let half = QuadNum::from_frac(1, 2, d);
        match (self.genus, self.model) {
            (3, Model::A) => {
                let exact = lam < w;
                debug_assert_eq!(exact, self.e + 2 * self.h < self.w);
                exact
            }
            (3, Model::B) => &lam * &half < w && w < lam,
            (4, Model::A) => {
                let exact = lam < &w * &half;
                debug_assert_eq!(exact, self.w > 2 * (self.e + 2 * self.h));
                exact
            }
            _ => &w * &half < lam && lam < w,
        }
    }
}

impl fmt::Display for Prototype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.w, self.h, self.t, self.e)
    }
}

fn divisors(n: i64) -> Vec<i64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let r = n.sqrt();
    for k in 1..=r {
        if n % k == 0 {
            small.push(k);
            if k != n / k {
                large.push(n / k);
            }
        }
    }
    large.reverse();
    small.extend(large);
    small
}

/// All prototypes of the given discriminant, genus and model, in
/// lexicographic order of `(e, w, h, t)`.
pub fn enumerate(disc: i64, genus: u8, model: Model) -> Vec<Prototype> {
    let mut out = Vec::new();
    if disc <= 0 {
        return out;
    }
    let k = disc_factor(genus);
    let r = disc.sqrt();
    for e in -r..=r {
        let rest = disc - e * e;
        if rest <= 0 || rest % k != 0 {
            continue;
        }
        for w in divisors(rest / k) {
            let h = rest / k / w;
            for t in 0..gcd(w, h) {
                if gcd4(w, h, t, e) != 1 {
                    continue;
                }
                let p = Prototype {
                    w,
                    h,
                    t,
                    e,
                    disc,
                    genus,
                    model,
                };
                if p.shape_condition() {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// A prototype of model A together with the sign of its decomposition type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompletePrototype {
    pub proto: Prototype,
    pub eps: i8,
}

impl CompletePrototype {
    pub fn new(proto: Prototype, eps: i8) -> Result<Self> {
        if proto.genus != 3 || proto.model != Model::A {
            return Err(PrymError::InvalidPrototype(format!(
                "{proto}: complete prototypes need genus 3, model A"
            )));
        }
        if eps != 1 && eps != -1 {
            return Err(PrymError::InvalidPrototype(format!("sign {eps}")));
        }
        Ok(CompletePrototype { proto, eps })
    }
}

impl fmt::Display for CompletePrototype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.proto;
        let s = if self.eps > 0 { '+' } else { '-' };
        write!(f, "({},{},{},{},{})", p.w, p.h, p.t, p.e, s)
    }
}

/// `𝒬_D`: every prototype of `𝒫_D` with both signs, `+` first.
pub fn enumerate_complete(disc: i64) -> Vec<CompletePrototype> {
    enumerate(disc, 3, Model::A)
        .into_iter()
        .flat_map(|p| [1, -1].map(|eps| CompletePrototype { proto: p, eps }))
        .collect()
}

/// A reduced prototype `(w, 1, 0, e)`, identified with `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedClass {
    pub e: i64,
    pub disc: i64,
    pub genus: u8,
}

impl ReducedClass {
    pub fn new(e: i64, disc: i64, genus: u8) -> Result<Self> {
        let r = ReducedClass { e, disc, genus };
        if r.is_valid() {
            Ok(r)
        } else {
            Err(PrymError::InvalidPrototype(format!(
                "[{e}] is not a reduced class for D={disc}, genus {genus}"
            )))
        }
    }

    pub fn is_valid(&self) -> bool {
        let (e, d) = (self.e, self.disc);
        let residue = match self.genus {
            3 => (d - e * e).rem_euclid(8) == 0,
            4 => (d - e).rem_euclid(2) == 0,
            _ => false,
        };
        residue && e * e < d && (e + 4) * (e + 4) < d
    }

    /// Width of the reduced prototype.
    pub fn w(&self) -> i64 {
        (self.disc - self.e * self.e) / disc_factor(self.genus)
    }
}

/// `𝒮_D` (genus 3) or its genus-4 analogue, in increasing order.
pub fn enumerate_reduced(disc: i64, genus: u8) -> Vec<ReducedClass> {
    if disc <= 0 {
        return Vec::new();
    }
    let r = disc.sqrt();
    (-r..=r)
        .map(|e| ReducedClass { e, disc, genus })
        .filter(ReducedClass::is_valid)
        .collect()
}

pub fn reduced_to_prototype(r: &ReducedClass) -> Result<Prototype> {
    let k = disc_factor(r.genus);
    if (r.disc - r.e * r.e) % k != 0 {
        return Err(PrymError::InvalidPrototype(format!("[{}] residue", r.e)));
    }
    Prototype::new(r.w(), 1, 0, r.e, r.genus, Model::A)
}

/// A pair `(p, q)` parametrizing one- and two-cylinder cusps when `D = d²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareCuspPrototype {
    pub p: i64,
    pub q: i64,
    pub d: i64,
}

impl SquareCuspPrototype {
    /// The derived tuple `(e, p, q, s)` with `e = d − 4p` and `s = d − 2p`.
    pub fn quadruple(&self) -> (i64, i64, i64, i64) {
        (self.d - 4 * self.p, self.p, self.q, self.d - 2 * self.p)
    }
}

pub fn enumerate_square_cusp(d: i64) -> Vec<SquareCuspPrototype> {
    let mut out = Vec::new();
    let mut p = 1;
    while 2 * p < d {
        for q in 1..p {
            if gcd(gcd(p, q), d) == 1 {
                out.push(SquareCuspPrototype { p, q, d });
            }
        }
        p += 1;
    }
    out
}

/// Genus-two cusp prototype `(a, b, c, e)` with `D = e² + 4bc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Genus2Prototype {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub e: i64,
    pub disc: i64,
}

pub fn enumerate_genus2(disc: i64) -> Vec<Genus2Prototype> {
    let mut out = Vec::new();
    if disc <= 0 {
        return out;
    }
    let r = disc.sqrt();
    for e in -r..=r {
        let rest = disc - e * e;
        if rest <= 0 || rest % 4 != 0 {
            continue;
        }
        for b in divisors(rest / 4) {
            let c = rest / 4 / b;
            if c + e >= b {
                continue;
            }
            for a in 0..gcd(b, c) {
                if gcd4(a, b, c, e) == 1 {
                    out.push(Genus2Prototype { a, b, c, e, disc });
                }
            }
        }
    }
    out
}

pub fn is_square(disc: i64) -> bool {
    exact_sqrt(disc).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(v: &[Prototype]) -> Vec<[i64; 4]> {
        v.iter().map(Prototype::tuple).collect()
    }

    #[test]
    fn small_discriminants() {
        assert_eq!(tuples(&enumerate(12, 3, Model::A)), vec![[1, 1, 0, -2]]);
        assert_eq!(tuples(&enumerate(8, 3, Model::B)), vec![[1, 1, 0, 0]]);
        assert!(enumerate(8, 3, Model::A).is_empty());
        for d in [9, 16] {
            assert!(enumerate(d, 3, Model::A).is_empty());
            assert!(enumerate(d, 3, Model::B).is_empty());
        }
    }

    #[test]
    fn model_b_48() {
        let mut got = tuples(&enumerate(48, 3, Model::B));
        got.sort();
        let mut want = vec![[3, 2, 0, 0], [4, 1, 0, 4], [2, 3, 0, 0], [1, 4, 0, -4]];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn model_a_68() {
        let mut got = tuples(&enumerate(68, 3, Model::A));
        got.sort();
        let mut want = vec![[2, 2, 1, -6], [8, 1, 0, -2], [4, 1, 0, -6], [8, 1, 0, 2], [4, 2, 1, -2]];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn counts_17() {
        assert_eq!(enumerate(17, 3, Model::A).len(), 2);
        assert_eq!(enumerate(17, 3, Model::B).len(), 2);
        assert_eq!(enumerate(17, 4, Model::A).len(), 2);
        assert_eq!(enumerate(17, 4, Model::B).len(), 4);
    }

    #[test]
    fn reduced() {
        let es: Vec<i64> = enumerate_reduced(41, 3).iter().map(|r| r.e).collect();
        assert_eq!(es, vec![-5, -3, -1, 1]);
        assert!(enumerate_reduced(5, 3).is_empty());
        let es: Vec<i64> = enumerate_reduced(12, 3).iter().map(|r| r.e).collect();
        assert_eq!(es, vec![-2]);
        let p = reduced_to_prototype(&ReducedClass {
            e: -6,
            disc: 148,
            genus: 3,
        })
        .unwrap();
        assert_eq!(p.tuple(), [14, 1, 0, -6]);
        let p = reduced_to_prototype(&ReducedClass {
            e: 2,
            disc: 292,
            genus: 3,
        })
        .unwrap();
        assert_eq!(p.tuple(), [36, 1, 0, 2]);
        assert!(reduced_to_prototype(&ReducedClass {
            e: 0,
            disc: 8,
            genus: 3
        })
        .is_err());
    }

    #[test]
    fn square_cusps() {
        let pairs = |d| -> Vec<(i64, i64)> { enumerate_square_cusp(d).iter().map(|s| (s.p, s.q)).collect() };
        assert_eq!(pairs(5), vec![(2, 1)]);
        assert_eq!(pairs(7), vec![(2, 1), (3, 1), (3, 2)]);
        assert!(pairs(3).is_empty());
    }

    #[test]
    fn genus2() {
        assert_eq!(enumerate_genus2(8).len(), 2);
        assert_eq!(enumerate_genus2(17).len(), 6);
        let g = enumerate_genus2(5);
        assert_eq!(g.len(), 1);
        assert_eq!((g[0].a, g[0].b, g[0].c, g[0].e), (0, 1, 1, -1));
    }
}
