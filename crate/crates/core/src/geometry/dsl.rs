//! Symbolic directions such as `"L/2 : h + L/2"` or `"3w : -h - L/2"`.
//!
//! ```text
//! dir  := expr ':' expr
//! expr := ['+'|'-'] term (('+'|'-') term)*
//! term := rat ['*'] sym ['/' int] | sym ['/' int] | rat
//! rat  := int ['/' int]
//! sym  := 'w' | 'h' | 't' | 'L'
//! ```
//!
//! `L` stands for λ of the prototype.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Vec2;
use crate::error::{PrymError, Result};
use crate::exactnum::QuadNum;
use crate::prototypes::Prototype;

fn perr(s: &str, m: &str) -> PrymError {
    PrymError::Parse(format!("direction {s:?}: {m}"))
}

struct Cursor<'a> {
    src: &'a str,
    chars: Vec<char>,
    i: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.chars.len() && self.chars[self.i].is_ascii_digit() {
            self.i += 1;
        }
        (self.i > start).then(|| self.chars[start..self.i].iter().collect::<String>().parse().unwrap())
    }

    fn denominator(&mut self) -> Result<BigInt> {
        if !self.eat('/') {
            return Ok(BigInt::one());
        }
        match self.int() {
            Some(n) if !n.is_zero() => Ok(n),
            _ => Err(perr(self.src, "expected a non-zero denominator after '/'")),
        }
    }
}

fn symbol(c: char, p: &Prototype) -> Option<QuadNum> {
    let d = p.disc as u64;
    match c {
        'w' => Some(QuadNum::int(p.w, d)),
        'h' => Some(QuadNum::int(p.h, d)),
        't' => Some(QuadNum::int(p.t, d)),
        'L' => Some(p.lambda()),
        _ => None,
    }
}

/// Evaluates one coordinate expression for the prototype `p`.
pub fn parse_expr(src: &str, p: &Prototype) -> Result<QuadNum> {
    let d = p.disc as u64;
    let mut cur = Cursor {
        src,
        chars: src.chars().collect(),
        i: 0,
    };
    let mut total = QuadNum::zero(d);
    let mut first = true;
    loop {
        let neg = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            break;
        };
        first = false;
        let mut coef = BigRational::one();
        let mut have_num = false;
        if let Some(n) = cur.int() {
            have_num = true;
            coef = BigRational::from_integer(n);
            // a '/' directly after a number belongs to the number unless a
            // symbol follows the denominator
            let save = cur.i;
            if cur.eat('/') {
                match cur.int() {
                    Some(den) if !den.is_zero() => coef /= BigRational::from_integer(den),
                    _ => cur.i = save,
                }
            }
            cur.eat('*');
        }
        let sym = cur.peek().and_then(|c| symbol(c, p));
        let is_sym = sym.is_some();
        let mut value = match sym {
            Some(v) => {
                cur.i += 1;
                v * QuadNum::new(coef, BigRational::zero(), d)
            }
            None if have_num => QuadNum::new(coef, BigRational::zero(), d),
            None => return Err(perr(src, "expected a number or one of w, h, t, L")),
        };
        if is_sym {
            let den = cur.denominator()?;
            value = value / QuadNum::new(BigRational::from_integer(den), BigRational::zero(), d);
        }
        total = if neg { total - value } else { total + value };
    }
    if cur.peek().is_some() {
        return Err(perr(src, &format!("unexpected {:?}", cur.peek().unwrap())));
    }
    if first {
        return Err(perr(src, "empty expression"));
    }
    Ok(total)
}

/// Parses `"EXPR:EXPR"` into a non-zero direction.
pub fn parse_direction(src: &str, p: &Prototype) -> Result<Vec2> {
    let (x, y) = src
        .split_once(':')
        .ok_or_else(|| perr(src, "expected two expressions separated by ':'"))?;
    let v = Vec2::new(parse_expr(x, p)?, parse_expr(y, p)?);
    if v.is_zero() {
        return Err(perr(src, "zero direction"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let p = Prototype::b3(3, 2, 0, 0).unwrap();
        let lam = p.lambda();
        let half = &lam / &QuadNum::int(2, 48);
        assert_eq!(parse_expr("L/2", &p).unwrap(), half);
        assert_eq!(parse_expr("2 + L/2", &p).unwrap(), &half + &QuadNum::int(2, 48));
        assert_eq!(parse_expr("-2-L/2", &p).unwrap(), -(&half + &QuadNum::int(2, 48)));
        assert_eq!(parse_expr("3w", &p).unwrap(), QuadNum::int(9, 48));
        assert_eq!(parse_expr("1/2*L", &p).unwrap(), half);
        assert_eq!(parse_expr("3/4", &p).unwrap(), QuadNum::from_frac(3, 4, 48));
        assert_eq!(parse_expr("w + t - h", &p).unwrap(), QuadNum::int(1, 48));
    }

    #[test]
    fn errors() {
        let p = Prototype::b3(3, 2, 0, 0).unwrap();
        for bad in ["", "x", "L/0", "2 L L", "0:0", "L"] {
            assert!(parse_direction(bad, &p).is_err(), "{bad}");
        }
        assert!(parse_direction("L/2 : 2 + L/2", &p).is_ok());
    }
}
