//! Recovering `(w, h, t, e)` from a three-cylinder decomposition.
//!
//! Write `X`, `Y` for the width and height ratios that are `w/λ` and `h/λ`
//! in the normalized picture (A+: swapped over fixed; A−, B: fixed over
//! twice the swapped). From `λ² = eλ + 2wh` and `D = e² + 8wh` one gets
//! `λ = √D/(1 + 2XY)`, after which `w, h, e` follow. The twist comes from
//! shearing the cylinders whose lattice is `λℤ²` (resp. `(λ/2)ℤ²`) straight.

use std::fmt;

use serde::Serialize;

use super::decompose::{decompose, Cylinder, CylinderDecomposition, DecompModel, Orbit};
use super::surface::{build_surface, SurfaceModel};
use super::Vec2;
use crate::butterfly::MoveLabel;
use crate::error::{PrymError, Result};
use crate::exactnum::{gcd, QuadNum};
use crate::prototypes::{CompletePrototype, Model, Prototype};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Identified {
    Complete(CompletePrototype),
    ModelB(Prototype),
    /// Four-cylinder model A in genus 4.
    Genus4(Prototype),
}

impl Identified {
    pub fn complete(&self) -> Option<CompletePrototype> {
        match self {
            Identified::Complete(cp) => Some(*cp),
            Identified::ModelB(_) | Identified::Genus4(_) => None,
        }
    }
}

impl fmt::Display for Identified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identified::Complete(cp) => write!(f, "{cp}"),
            Identified::ModelB(p) => write!(f, "({},{},{},{},B)", p.w, p.h, p.t, p.e),
            Identified::Genus4(p) => write!(f, "{p}"),
        }
    }
}

fn not_eigen(m: &str) -> PrymError {
    PrymError::NotEigenform(m.to_string())
}

fn integer(x: &QuadNum, what: &str) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| not_eigen(&format!("{what} = {x} is not an integer")))
}

/// Shared saddle connection of the two boundaries, as `top − bottom`.
fn shared_twist(c: &Cylinder) -> Result<QuadNum> {
    c.bottom
        .iter()
        .find_map(|(k, x)| c.top_pos(*k).map(|y| y - x))
        .ok_or_else(|| not_eigen("no saddle connection on both boundaries"))
}

fn simple_twist(c: &Cylinder) -> Result<QuadNum> {
    if !c.is_simple() {
        return Err(not_eigen("expected a simple cylinder"));
    }
    Ok(&c.top[0].1 - &c.bottom[0].1)
}

fn pos(list: &[(usize, QuadNum)], sc: usize) -> Result<&QuadNum> {
    list.iter()
        .find(|(k, _)| *k == sc)
        .map(|(_, x)| x)
        .ok_or_else(|| not_eigen("saddle connection missing from a boundary"))
}

pub fn identify_prototype(dec: &CylinderDecomposition) -> Result<Identified> {
    if let DecompModel::Genus4(k) = dec.model {
        return identify_genus4(dec, k);
    }
    let d = dec.disc;
    let fixed = dec.fixed().ok_or_else(|| not_eigen("no fixed cylinder"))?;
    if dec.cylinders.len() != 3 {
        return Err(not_eigen(&format!("model {} has no prototype", dec.model)));
    }
    let c0 = &dec.cylinders[fixed];
    let (w0, h0) = (&c0.width, &c0.height);
    let one = QuadNum::one(d);
    let two = QuadNum::int(2, d);

    // The swapped cylinder used for the twist: for B the one whose bottom
    // is a single saddle connection.
    let pair: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
    let c1 = match dec.model {
        DecompModel::B => pair
            .iter()
            .map(|&i| &dec.cylinders[i])
            .find(|c| c.bottom.len() == 1)
            .ok_or_else(|| not_eigen("model B without a cylinder over a single saddle connection"))?,
        _ => &dec.cylinders[pair[0]],
    };
    if !matches!(c1.orbit, Orbit::Swapped(_)) {
        return Err(not_eigen("cylinder pair is not swapped"));
    }
    let (w1, h1) = (&c1.width, &c1.height);

    let (x, y) = match dec.model {
        DecompModel::APlus => (w1 / w0, h1 / h0),
        DecompModel::AMinus | DecompModel::B => (w0 / &(&two * w1), h0 / &(&two * h1)),
        m => return Err(not_eigen(&format!("model {m} has no prototype"))),
    };
    let xy2 = &two * &(&x * &y);
    let lam = QuadNum::sqrt_d(d) / (&one + &xy2);
    let w = integer(&(&x * &lam), "w")?;
    let h = integer(&(&y * &lam), "h")?;
    let e = integer(&(&(&one - &xy2) * &lam), "e")?;

    let t = match dec.model {
        DecompModel::APlus => {
            let tau0 = simple_twist(c0)?;
            let tau1 = shared_twist(c1)?;
            &lam * &(tau1 - &(&tau0 * &(h1 / h0))) / w0.clone()
        }
        DecompModel::AMinus => {
            let tau0 = shared_twist(c0)?;
            let tau1 = simple_twist(c1)?;
            &lam * &(tau0 - &(&tau1 * &(h0 / h1))) / (&two * w1)
        }
        _ => {
            let i1 = c1.bottom[0].0;
            let u = c1
                .top
                .iter()
                .map(|(k, _)| *k)
                .find(|k| c0.bottom_pos(*k).is_some())
                .ok_or_else(|| not_eigen("no saddle connection between the swapped and fixed cylinder"))?;
            let tau0 = pos(&c0.top, i1)? - pos(&c0.bottom, u)?;
            let tau1 = pos(&c1.top, u)? - pos(&c1.bottom, i1)?;
            &lam * &(tau0 - &(&tau1 * &(h0 / h1))) / (&two * w1)
        }
    };
    let t = integer(&t, "t")?;
    if w <= 0 || h <= 0 {
        return Err(not_eigen("non-positive w or h"));
    }
    let t = t.rem_euclid(gcd(w, h));
    let err = |e: PrymError| not_eigen(&e.to_string());
    Ok(match dec.model {
        DecompModel::APlus | DecompModel::AMinus => {
            let p = Prototype::a3(w, h, t, e).map_err(err)?;
            let eps = if dec.model == DecompModel::APlus { 1 } else { -1 };
            Identified::Complete(CompletePrototype { proto: p, eps })
        }
        _ => Identified::ModelB(Prototype::b3(w, h, t, e).map_err(err)?),
    })
}

/// Direction of the decomposition realizing `B_q`: `(w + qt, qh)`, or
/// `(t, h)` for `q = ∞`. The same vector works on A+, A− and genus-4
/// model-A surfaces.
pub fn butterfly_direction(p: &Prototype, q: MoveLabel) -> Vec2 {
    let d = p.disc as u64;
    match q {
        MoveLabel::Finite(q) => Vec2::ints(p.w + q * p.t, q * p.h, d),
        MoveLabel::Infinity => Vec2::ints(p.t, p.h, d),
    }
}

/// `B_q` computed on the surface: build, decompose along
/// [`butterfly_direction`], identify.
pub fn geometric_butterfly(cp: &CompletePrototype, q: MoveLabel) -> Result<Identified> {
    let model = if cp.eps > 0 {
        SurfaceModel::APlus
    } else {
        SurfaceModel::AMinus
    };
    let s = build_surface(&cp.proto, model)?;
    identify_prototype(&decompose(&s, &butterfly_direction(&cp.proto, q))?)
}

/// Genus-4 model A: squares of side `λ/2` and a swapped pair of cylinders
/// with lattice `ℤ(w/2, 0) + ℤ(t/2, h/2)`, so `X = w/λ`, `Y = h/λ` and
/// `λ = √D/(1 + XY)` from `λ² = eλ + wh`.
fn identify_genus4(dec: &CylinderDecomposition, k: usize) -> Result<Identified> {
    if k != 4 {
        return Err(not_eigen(&format!(
            "genus-4 decomposition into {k} cylinders has no prototype"
        )));
    }
    let d = dec.disc;
    let cs = dec
        .cylinders
        .iter()
        .find(|c| c.is_simple())
        .ok_or_else(|| not_eigen("no simple cylinder"))?;
    let cm = dec
        .cylinders
        .iter()
        .find(|c| !c.is_simple())
        .ok_or_else(|| not_eigen("all cylinders simple"))?;
    let x = &cm.width / &cs.width;
    let y = &cm.height / &cs.height;
    let one = QuadNum::one(d);
    let xy = &x * &y;
    let lam = QuadNum::sqrt_d(d) / (&one + &xy);
    let w = integer(&(&x * &lam), "w")?;
    let h = integer(&(&y * &lam), "h")?;
    let e = integer(&(&(&one - &xy) * &lam), "e")?;
    let tau_m = shared_twist(cm)?;
    let tau_s = simple_twist(cs)?;
    let t = &lam * &(tau_m - &(&tau_s * &(&cm.height / &cs.height))) / cs.width.clone();
    let t = integer(&t, "t")?;
    if w <= 0 || h <= 0 {
        return Err(not_eigen("non-positive w or h"));
    }
    let t = t.rem_euclid(gcd(w, h));
    let p = Prototype::new(w, h, t, e, 4, Model::A).map_err(|e| not_eigen(&e.to_string()))?;
    Ok(Identified::Genus4(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_surface, decompose, SurfaceModel, Vec2};
    use crate::prototypes::enumerate;

    fn horizontal(p: &Prototype, m: SurfaceModel) -> Identified {
        let s = build_surface(p, m).unwrap();
        identify_prototype(&decompose(&s, &Vec2::ints(1, 0, s.disc)).unwrap()).unwrap()
    }

    #[test]
    fn geometric_moves_small() {
        use crate::butterfly::{admissible_finite, apply, apply_complete};
        use crate::prototypes::enumerate_complete;
        for d in 17..=60 {
            for cp in enumerate_complete(d) {
                let mut qs: Vec<MoveLabel> = admissible_finite(&cp.proto)
                    .into_iter()
                    .map(MoveLabel::Finite)
                    .collect();
                qs.push(MoveLabel::Infinity);
                for q in qs {
                    let got = geometric_butterfly(&cp, q).unwrap();
                    assert_eq!(got, Identified::Complete(apply_complete(&cp, q).unwrap()), "{cp} {q}");
                }
            }
        }
        let p = Prototype::new(4, 2, 0, -5, 4, Model::A).unwrap();
        let s = build_surface(&p, SurfaceModel::G4A).unwrap();
        let q = MoveLabel::Finite(1);
        let got = identify_prototype(&decompose(&s, &butterfly_direction(&p, q)).unwrap()).unwrap();
        assert_eq!(got, Identified::Genus4(apply(&p, q).unwrap()));
    }

    #[test]
    fn round_trip_small() {
        let p = Prototype::a3(2, 1, 0, -1).unwrap();
        assert_eq!(
            horizontal(&p, SurfaceModel::APlus),
            Identified::Complete(CompletePrototype { proto: p, eps: 1 })
        );
        let b = Prototype::b3(1, 1, 0, 0).unwrap();
        assert_eq!(horizontal(&b, SurfaceModel::B), Identified::ModelB(b));
    }

    #[test]
    fn round_trip_all_small_discs() {
        for d in 12..150 {
            for p in enumerate(d, 3, Model::A) {
                for (m, eps) in [(SurfaceModel::APlus, 1), (SurfaceModel::AMinus, -1)] {
                    assert_eq!(
                        horizontal(&p, m),
                        Identified::Complete(CompletePrototype { proto: p, eps }),
                        "{p} {m}"
                    );
                }
            }
            for p in enumerate(d, 3, Model::B) {
                assert_eq!(horizontal(&p, SurfaceModel::B), Identified::ModelB(p), "{p}");
            }
            for p in enumerate(d, 4, Model::A) {
                assert_eq!(horizontal(&p, SurfaceModel::G4A), Identified::Genus4(p), "{p}");
            }
        }
    }
}
