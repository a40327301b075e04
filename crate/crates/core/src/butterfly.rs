//! Butterfly moves on prototypes and reduced classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PrymError, Result};
use crate::exactnum::{col_hnf, gcd, IntMat2};
use crate::prototypes::{disc_factor, CompletePrototype, Model, Prototype, ReducedClass};

/// Parameter of a Butterfly move: a positive integer or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveLabel {
    Finite(i64),
    Infinity,
}

impl fmt::Display for MoveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveLabel::Finite(q) => write!(f, "B{q}"),
            MoveLabel::Infinity => write!(f, "Binf"),
        }
    }
}

impl FromStr for MoveLabel {
    type Err = PrymError;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_prefix('B').unwrap_or(s);
        match body {
            "inf" | "∞" => Ok(MoveLabel::Infinity),
            _ => match body.parse::<i64>() {
                Ok(q) if q >= 1 => Ok(MoveLabel::Finite(q)),
                _ => Err(PrymError::Parse(format!("bad move label {s:?}"))),
            },
        }
    }
}

pub fn is_admissible(p: &Prototype, q: MoveLabel) -> bool {
    match q {
        MoveLabel::Infinity | MoveLabel::Finite(1) => true,
        MoveLabel::Finite(q) if q < 1 => false,
        MoveLabel::Finite(q) => {
            let x = p.e + 4 * q * p.h;
            x < 0 || x * x < p.disc
        }
    }
}

/// Finite move parameters admissible on `p`, in increasing order.
pub fn admissible_finite(p: &Prototype) -> Vec<i64> {
    let mut out = vec![1];
    let mut q = 2;
    while is_admissible(p, MoveLabel::Finite(q)) {
        out.push(q);
        q += 1;
    }
    out
}

/// The 2×2 block whose column Hermite form is `[[w', b], [0, h']]`.
pub fn move_block(p: &Prototype, q: MoveLabel) -> IntMat2 {
    let (w, h, t, e) = (p.w, p.h, p.t, p.e);
    match (p.genus, q) {
        (3, MoveLabel::Finite(q)) => IntMat2::new(h, -e - t - 2 * q * h, -q * h, w + q * t),
        (3, MoveLabel::Infinity) => IntMat2::new(0, -e + w - 2 * h, -h, t),
        (_, MoveLabel::Finite(q)) => IntMat2::new(h, -2 * e - t - 4 * q * h, -q * h, w + q * t),
        (_, MoveLabel::Infinity) => IntMat2::new(0, w - 2 * e - 4 * h, -h, t),
    }
}

/// Applies `B_q` to a model-A prototype (genus 3 or 4).
pub fn apply(p: &Prototype, q: MoveLabel) -> Result<Prototype> {
    if p.model != Model::A {
        return Err(PrymError::InvalidPrototype(format!("{p}: moves act on model A")));
    }
    if !is_admissible(p, q) {
        return Err(PrymError::Inadmissible);
    }
    let (e2, h2) = match q {
        MoveLabel::Finite(q) => (-p.e - 4 * q * p.h, gcd(q * p.h, p.w + q * p.t)),
        MoveLabel::Infinity => (-p.e - 4 * p.h, gcd(p.t, p.h)),
    };
    let k = disc_factor(p.genus);
    let rest = p.disc - e2 * e2;
    if rest <= 0 || rest % (k * h2) != 0 {
        return Err(PrymError::Consistency(format!(
            "{p} {q}: D - e'^2 = {rest} not a positive multiple of {}",
            k * h2
        )));
    }
    let w2 = rest / (k * h2);
    let block = move_block(p, q);
    if block.det().abs() != w2 * h2 {
        return Err(PrymError::Consistency(format!(
            "{p} {q}: block determinant {} differs from w'h' = {}",
            block.det(),
            w2 * h2
        )));
    }
    let hnf = col_hnf(&block)?.hnf.0;
    if hnf[0][0] != w2 || hnf[1][1] != h2 {
        return Err(PrymError::Consistency(format!(
            "{p} {q}: block normal form {:?} disagrees with (w',h') = ({w2},{h2})",
            hnf
        )));
    }
    let t2 = hnf[0][1].rem_euclid(gcd(w2, h2));
    Prototype::new(w2, h2, t2, e2, p.genus, Model::A).map_err(|err| PrymError::Consistency(format!("{p} {q}: {err}")))
}

pub fn apply_complete(cp: &CompletePrototype, q: MoveLabel) -> Result<CompletePrototype> {
    Ok(CompletePrototype {
        proto: apply(&cp.proto, q)?,
        eps: -cp.eps,
    })
}

/// `e ↦ −e − 4q` on reduced classes.
pub fn reduced_move(r: &ReducedClass, q: i64) -> Option<ReducedClass> {
    if q < 1 || gcd(r.w(), q) != 1 {
        return None;
    }
    let image = ReducedClass { e: -r.e - 4 * q, ..*r };
    image.is_valid().then_some(image)
}

/// Strategy move `F_q` (`signed_q > 0`) or `F_{-q}` (`signed_q < 0`),
/// realized as the composite `(B_q, B_∞)` resp. `(B_∞, B_q)` on reduced
/// prototypes.
pub fn f_move(r: &ReducedClass, signed_q: i64) -> Option<ReducedClass> {
    let q = signed_q.abs();
    if q < 2 || !r.is_valid() {
        return None;
    }
    let start = crate::prototypes::reduced_to_prototype(r).ok()?;
    let step = |p: &Prototype, m: MoveLabel| -> Option<Prototype> {
        if is_admissible(p, m) {
            apply(p, m).ok()
        } else {
            None
        }
    };
    let end = if signed_q > 0 {
        let mid = step(&start, MoveLabel::Finite(q))?;
        if !mid.is_reduced() {
            return None;
        }
        step(&mid, MoveLabel::Infinity)?
    } else {
        let mid = step(&start, MoveLabel::Infinity)?;
        if !mid.is_reduced() {
            return None;
        }
        step(&mid, MoveLabel::Finite(q))?
    };
    if !end.is_reduced() {
        return None;
    }
    let image = ReducedClass { e: end.e, ..*r };
    image.is_valid().then_some(image)
}

/// Value of the mod-2 symplectic invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mod2 {
    Zero,
    Nonzero,
}

/// Generator matrix of a complete prototype in its own symplectic basis.
pub fn generator_matrix(cp: &CompletePrototype) -> [[i64; 4]; 4] {
    let Prototype { w, h, t, e, .. } = cp.proto;
    if cp.eps > 0 {
        [[e, 0, 2 * w, 2 * t], [0, e, 0, 2 * h], [h, -t, 0, 0], [0, w, 0, 0]]
    } else {
        [[e, 0, w, t], [0, e, 0, h], [2 * h, -2 * t, 0, 0], [0, 2 * w, 0, 0]]
    }
}

/// Intersection form in the basis `(α₁, β₁, α₂, β₂)`.
pub fn intersection_form(eps: i8) -> [[i64; 4]; 4] {
    let (x, y) = if eps > 0 { (1, 2) } else { (2, 1) };
    [[0, x, 0, 0], [-x, 0, 0, 0], [0, 0, 0, y], [0, 0, -y, 0]]
}

pub fn mod2_invariant(cp: &CompletePrototype) -> Result<Mod2> {
    if cp.proto.disc % 2 == 0 {
        return Err(PrymError::EvenDiscriminant);
    }
    let t = generator_matrix(cp);
    let form = intersection_form(cp.eps);
    let cols: Vec<[i64; 4]> = (0..4).map(|j| [0, 1, 2, 3].map(|i| t[i][j].rem_euclid(2))).collect();
    let pair = |u: &[i64; 4], v: &[i64; 4]| -> i64 {
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s += u[i] * form[i][j] * v[j];
            }
        }
        s.rem_euclid(2)
    };
    for u in &cols {
        for v in &cols {
            if pair(u, v) != 0 {
                return Ok(Mod2::Nonzero);
            }
        }
    }
    Ok(Mod2::Zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prototypes::enumerate;

    fn a3(w: i64, h: i64, t: i64, e: i64) -> Prototype {
        Prototype::a3(w, h, t, e).unwrap()
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(&a3(14, 1, 0, -6), MoveLabel::Finite(4)));
        assert!(!is_admissible(&a3(5, 1, 0, 1), MoveLabel::Finite(3)));
        assert!(is_admissible(&a3(5, 1, 0, 1), MoveLabel::Finite(1)));
    }

    #[test]
    fn moves() {
        let f = |p: Prototype, q| apply(&p, q).unwrap().tuple();
        assert_eq!(f(a3(2, 2, 1, -6), MoveLabel::Finite(1)), [8, 1, 0, -2]);
        assert_eq!(f(a3(36, 1, 0, 2), MoveLabel::Finite(2)), [12, 2, 1, -10]);
        assert_eq!(f(a3(3, 2, 0, -10), MoveLabel::Infinity), [9, 2, 0, 2]);
        assert_eq!(f(a3(10, 1, 0, -6), MoveLabel::Finite(2)), [7, 2, 0, -2]);
    }

    #[test]
    fn complete_flips_sign() {
        let cp = CompletePrototype {
            proto: a3(36, 1, 0, 2),
            eps: -1,
        };
        let im = apply_complete(&cp, MoveLabel::Finite(2)).unwrap();
        assert_eq!(im.proto.tuple(), [12, 2, 1, -10]);
        assert_eq!(im.eps, 1);
    }

    #[test]
    fn reduced_moves() {
        let r = |e| ReducedClass { e, disc: 41, genus: 3 };
        assert_eq!(reduced_move(&r(1), 1).map(|x| x.e), Some(-5));
        assert_eq!(reduced_move(&r(1), 2), None);
        assert_eq!(reduced_move(&r(-5), 2), None);
    }

    #[test]
    fn mod2_values() {
        let p = a3(2, 1, 0, -1);
        assert_eq!(p.disc, 17);
        let plus = CompletePrototype { proto: p, eps: 1 };
        let minus = CompletePrototype { proto: p, eps: -1 };
        assert_eq!(mod2_invariant(&plus).unwrap(), Mod2::Nonzero);
        assert_eq!(mod2_invariant(&minus).unwrap(), Mod2::Zero);
        let even = CompletePrototype {
            proto: a3(1, 1, 0, -2),
            eps: 1,
        };
        assert_eq!(mod2_invariant(&even), Err(PrymError::EvenDiscriminant));
    }

    #[test]
    fn genus4_moves_validate() {
        for d in 12..400 {
            for p in enumerate(d, 4, Model::A) {
                for q in admissible_finite(&p) {
                    apply(&p, MoveLabel::Finite(q)).unwrap();
                }
                apply(&p, MoveLabel::Infinity).unwrap();
            }
        }
    }

    #[test]
    fn label_round_trip() {
        for m in [MoveLabel::Finite(1), MoveLabel::Finite(7), MoveLabel::Infinity] {
            assert_eq!(m.to_string().parse::<MoveLabel>().unwrap(), m);
        }
    }
}
