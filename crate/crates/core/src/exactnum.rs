//! Exact arithmetic in Q(√D) and small integer linear algebra.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PrymError, Result};

/// Integer square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd4(a: i64, b: i64, c: i64, d: i64) -> i64 {
    a.gcd(&b).gcd(&c).gcd(&d)
}

/// Returns `(g, x, y)` with `a*x + b*y = g` and `g >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// An element `a + b√D` of the real quadratic field Q(√D).
///
/// When `D` is a perfect square the irrational part is folded into `a`, so
/// `b` is always zero in that case.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: u64,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadNum {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        match exact_sqrt(d as i64) {
            Some(r) => QuadNum {
                a: a + b * rat(r),
                b: BigRational::zero(),
                d,
            },
            None => QuadNum { a, b, d },
        }
    }

    pub fn from_ints(a: i64, b: i64, d: u64) -> Self {
        Self::new(rat(a), rat(b), d)
    }

    pub fn from_frac(num: i64, den: i64, d: u64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
            d,
        )
    }

    pub fn int(n: i64, d: u64) -> Self {
        Self::from_ints(n, 0, d)
    }

    pub fn zero(d: u64) -> Self {
        Self::int(0, d)
    }

    pub fn one(d: u64) -> Self {
        Self::int(1, d)
    }

    pub fn sqrt_d(d: u64) -> Self {
        Self::from_ints(0, 1, d)
    }

    /// λ = (e + √D)/2.
    pub fn lambda(e: i64, d: u64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(e), BigInt::from(2)),
            BigRational::new(BigInt::one(), BigInt::from(2)),
            d,
        )
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn disc(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    pub fn sign(&self) -> i32 {
        qsign(self)
    }

    pub fn is_positive(&self) -> bool {
        qsign(self) > 0
    }

    pub fn is_negative(&self) -> bool {
        qsign(self) < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        QuadNum {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// Field norm `a² − b²D`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d as i64)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(√{})", self.d);
        let n = self.norm();
        QuadNum {
            a: &self.a / &n,
            b: -(&self.b / &n),
            d: self.d,
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64();
        let mut k = if approx.is_finite() {
            BigInt::from(approx.floor() as i128)
        } else {
            self.a.floor().to_integer()
        };
        loop {
            let kq = QuadNum::new(BigRational::from_integer(k.clone()), BigRational::zero(), self.d);
            if kq > *self {
                k -= 1;
                continue;
            }
            let k1 = QuadNum::new(BigRational::from_integer(k.clone() + 1), BigRational::zero(), self.d);
            if k1 <= *self {
                k += 1;
                continue;
            }
            return k;
        }
    }

    /// Representative of `self` modulo `m` in `[0, m)`; `m` must be positive.
    pub fn rem_euclid(&self, m: &QuadNum) -> QuadNum {
        let q = (self / m).floor();
        self - &(m * &QuadNum::new(BigRational::from_integer(q), BigRational::zero(), m.d))
    }

    fn join(&self, other: &QuadNum) -> u64 {
        if self.d == other.d || other.b.is_zero() {
            self.d
        } else if self.b.is_zero() {
            other.d
        } else {
            panic!("mixed discriminants {} and {}", self.d, other.d)
        }
    }
}

/// Sign of `a + b√D` under the real embedding with `√D ≥ 0`.
pub fn qsign(x: &QuadNum) -> i32 {
    fn s(r: &BigRational) -> i32 {
        if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        }
    }
    let sa = s(&x.a);
    let sb = s(&x.b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let a2 = &x.a * &x.a;
    let b2d = &x.b * &x.b * rat(x.d as i64);
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        qsign(&(self - other)).cmp(&0)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})√{}", self.b, self.d)
        } else {
            write!(f, "{} + ({})√{}", self.a, self.b, self.d)
        }
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, o: &QuadNum) -> QuadNum {
        let d = self.join(o);
        QuadNum {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d,
        }
    }
}

impl<'a> Sub<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn sub(self, o: &QuadNum) -> QuadNum {
        let d = self.join(o);
        QuadNum {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            d,
        }
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, o: &QuadNum) -> QuadNum {
        let d = self.join(o);
        if self.b.is_zero() {
            return QuadNum {
                a: &self.a * &o.a,
                b: &self.a * &o.b,
                d,
            };
        }
        if o.b.is_zero() {
            return QuadNum {
                a: &self.a * &o.a,
                b: &self.b * &o.a,
                d,
            };
        }
        QuadNum {
            a: &self.a * &o.a + &self.b * &o.b * rat(d as i64),
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl<'a> Div<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn div(self, o: &QuadNum) -> QuadNum {
        if o.b.is_zero() {
            assert!(!o.a.is_zero(), "division by zero in Q(√{})", o.d);
            let d = self.join(o);
            return QuadNum {
                a: &self.a / &o.a,
                b: &self.b / &o.a,
                d,
            };
        }
        self * &o.inv()
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, o: QuadNum) -> QuadNum { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, o: &QuadNum) -> QuadNum { (&self).$m(o) }
        }
        impl<'a> $tr<QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $m(self, o: QuadNum) -> QuadNum { self.$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

/// A 2×2 integer matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat2(pub [[i64; 2]; 2]);

impl IntMat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn mul(&self, o: &IntMat2) -> IntMat2 {
        let (a, b) = (self.0, o.0);
        let mut r = [[0i64; 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        IntMat2(r)
    }
}

/// Output of [`col_hnf`]: `diag(row_sign, 1) · m · u = hnf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColHnf {
    pub hnf: IntMat2,
    pub u: IntMat2,
    pub row_sign: i64,
}

/// Column Hermite normal form of a nonsingular 2×2 integer matrix.
///
/// The result is upper triangular with bottom-right entry the positive gcd of
/// the bottom row and a positive top-left entry. The top-right entry is left
/// unreduced. If `det(m) < 0` the top row is negated, recorded in `row_sign`.
pub fn col_hnf(m: &IntMat2) -> Result<ColHnf> {
    let det = m.det();
    if det == 0 {
        return Err(PrymError::DegenerateLattice);
    }
    let [[_, _], [c, d]] = m.0;
    let (g, x, y) = egcd(c, d);
    let u = IntMat2::new(d / g, x, -c / g, y);
    let mut hnf = m.mul(&u);
    let mut row_sign = 1;
    if hnf.0[0][0] < 0 {
        row_sign = -1;
        hnf.0[0][0] = -hnf.0[0][0];
        hnf.0[0][1] = -hnf.0[0][1];
    }
    debug_assert_eq!(hnf.0[1][0], 0);
    debug_assert_eq!(hnf.0[1][1], g);
    Ok(ColHnf { hnf, u, row_sign })
}

/// Basis `[[a, b], [0, c]]` (columns `(a,0)` and `(b,c)`, `a, c > 0`,
/// `0 ≤ b < a`) of the lattice spanned by integer vectors.
pub fn lattice_hnf(gens: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt, BigInt)> {
    let mut c = BigInt::zero();
    let mut v = (BigInt::zero(), BigInt::zero());
    for (x, y) in gens {
        let e = c.extended_gcd(y);
        let (g, s, t) = if e.gcd.is_negative() {
            (-e.gcd, -e.x, -e.y)
        } else {
            (e.gcd, e.x, e.y)
        };
        if g.is_zero() {
            continue;
        }
        v = (&s * &v.0 + &t * x, g.clone());
        c = g;
    }
    if c.is_zero() {
        return Err(PrymError::DegenerateLattice);
    }
    let mut a = BigInt::zero();
    for (x, y) in gens {
        let k = y / &c;
        let r = x - &k * &v.0;
        a = a.gcd(&r);
    }
    if a.is_zero() {
        return Err(PrymError::DegenerateLattice);
    }
    let b = v.0.mod_floor(&a);
    Ok((a, b, c))
}

/// Same as [`lattice_hnf`] for rational generators; returns the basis scaled
/// back to rationals.
pub fn rational_lattice_hnf(gens: &[(BigRational, BigRational)]) -> Result<(BigRational, BigRational, BigRational)> {
    let mut den = BigInt::one();
    for (x, y) in gens {
        den = den.lcm(x.denom()).lcm(y.denom());
    }
    let scale = BigRational::from_integer(den.clone());
    let ints: Vec<(BigInt, BigInt)> = gens
        .iter()
        .map(|(x, y)| ((x * &scale).to_integer(), (y * &scale).to_integer()))
        .collect();
    let (a, b, c) = lattice_hnf(&ints)?;
    let f = |n: BigInt| BigRational::new(n, den.clone());
    Ok((f(a), f(b), f(c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: u64) -> QuadNum {
        QuadNum::from_ints(a, b, d)
    }

    #[test]
    fn qsign_examples() {
        assert_eq!(qsign(&q(0, 0, 17)), 0);
        assert_eq!(qsign(&q(-2, 1, 5)), 1);
        assert_eq!(qsign(&q(3, -1, 8)), 1);
        assert_eq!(qsign(&q(2, -1, 5)), -1);
    }

    #[test]
    fn square_disc_folds() {
        let x = q(1, 1, 25);
        assert!(x.is_rational());
        assert_eq!(x.to_i64(), Some(6));
    }

    #[test]
    fn field_ops() {
        let x = q(1, 2, 7);
        let y = q(-3, 1, 7);
        let p = &x * &y;
        assert_eq!(p, q(-3 + 14, 1 - 6, 7));
        assert_eq!(&p / &y, x);
        assert_eq!(x.inv() * &x, QuadNum::one(7));
    }

    #[test]
    fn floor_and_rem() {
        assert_eq!(q(0, 1, 2).floor(), BigInt::from(1));
        assert_eq!(q(0, -1, 2).floor(), BigInt::from(-2));
        let m = q(0, 1, 2);
        let r = q(5, 0, 2).rem_euclid(&m);
        assert!(r >= QuadNum::zero(2) && r < m);
    }

    #[test]
    fn col_hnf_examples() {
        let h = col_hnf(&IntMat2::new(1, -6, -2, 36)).unwrap();
        assert_eq!(h.hnf.0[0][0], 12);
        assert_eq!(h.hnf.0[1], [0, 2]);
        assert_eq!((h.hnf.0[0][1] + 1).rem_euclid(12), 0);
        let h = col_hnf(&IntMat2::identity()).unwrap();
        assert_eq!(h.hnf, IntMat2::identity());
        let h = col_hnf(&IntMat2::new(2, 1, -2, 3)).unwrap();
        assert_eq!(h.hnf.0[0][0], 8);
        assert_eq!(h.hnf.0[1], [0, 1]);
        assert!(col_hnf(&IntMat2::new(1, 2, 2, 4)).is_err());
    }

    #[test]
    fn lattice_basis() {
        let g: Vec<(BigInt, BigInt)> = [(4, 0), (0, 4), (12, 0), (0, 1)]
            .iter()
            .map(|&(x, y)| (BigInt::from(x), BigInt::from(y)))
            .collect();
        let (a, b, c) = lattice_hnf(&g).unwrap();
        assert_eq!((a, b, c), (BigInt::from(4), BigInt::zero(), BigInt::one()));
    }
}
