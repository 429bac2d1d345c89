//! Sparse text format for integer and rational polynomials.
//!
//! Terms look like `c*x^k`, joined by `+` or `-`: `15552*x^15 + 5184*x^14 - 1`.
//! The coefficient may be an integer or a fraction `a/b`, the `*` may be
//! omitted (`3x^2`), `x` alone means `x^1`, and terms may repeat or appear in
//! any order (repeated powers are summed). Output always uses descending
//! powers with unit coefficients dropped.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Scalar};
use crate::{IntPoly, RatPoly};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }
}

/// Parse into `(power, coefficient)` terms; coefficients may be rational.
pub fn parse_terms(s: &str) -> Result<Vec<(usize, BigRational)>> {
    let mut cur = Cursor { src: s.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let negative = match cur.peek() {
            None if first => return cur.err("empty polynomial"),
            None => break,
            Some(b'+') => {
                cur.pos += 1;
                false
            }
            Some(b'-') => {
                cur.pos += 1;
                true
            }
            Some(_) if first => false,
            Some(c) => return cur.err(format!("expected '+' or '-', found '{}'", c as char)),
        };
        first = false;

        let mut coeff = BigRational::one();
        let mut have_coeff = false;
        if let Some(num) = cur.digits() {
            have_coeff = true;
            let n: BigInt = num.parse().unwrap();
            let mut den = BigInt::one();
            if cur.peek() == Some(b'/') {
                cur.pos += 1;
                match cur.digits() {
                    Some(d) => den = d.parse().unwrap(),
                    None => return cur.err("expected denominator after '/'"),
                }
                if den.is_zero() {
                    return cur.err("zero denominator");
                }
            }
            coeff = BigRational::new(n, den);
            if cur.peek() == Some(b'*') {
                cur.pos += 1;
                if cur.peek() != Some(b'x') {
                    return cur.err("expected 'x' after '*'");
                }
            }
        }
        let mut power = 0usize;
        if cur.peek() == Some(b'x') {
            cur.pos += 1;
            power = 1;
            if cur.peek() == Some(b'^') {
                cur.pos += 1;
                match cur.digits() {
                    Some(d) => {
                        power = d.parse().or_else(|_| cur.err("exponent too large"))?;
                    }
                    None => return cur.err("expected exponent after '^'"),
                }
            }
        } else if !have_coeff {
            return match cur.peek() {
                Some(c) => cur.err(format!("unexpected '{}'", c as char)),
                None => cur.err("dangling sign"),
            };
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((power, coeff));
    }
    Ok(terms)
}

pub fn parse_rat(s: &str) -> Result<RatPoly> {
    let mut f = RatPoly::zero();
    for (k, c) in parse_terms(s)? {
        f.add_term(c, k);
    }
    Ok(f)
}

pub fn parse_int(s: &str) -> Result<IntPoly> {
    let f = parse_rat(s)?;
    crate::zpoly::to_int(&f).ok_or(Error::Parse {
        pos: 0,
        msg: "integer coefficients required".into(),
    })
}

/// Formatting hook for coefficient types.
pub trait CoeffText: Scalar {
    fn is_neg(&self) -> bool;
    fn abs_text(&self) -> String;
}

impl CoeffText for BigInt {
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_text(&self) -> String {
        self.abs().to_string()
    }
}

impl CoeffText for BigRational {
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_text(&self) -> String {
        self.abs().to_string()
    }
}

impl CoeffText for i64 {
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_text(&self) -> String {
        self.unsigned_abs().to_string()
    }
}

pub fn format_poly<T: CoeffText>(f: &Poly<T>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in f.terms().collect::<Vec<_>>().into_iter().rev() {
        let neg = c.is_neg();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs_text();
        let unit = mag == "1";
        match (k, unit) {
            (0, _) => out.push_str(&mag),
            (_, true) => {}
            (_, false) => {
                let _ = write!(out, "{mag}*");
            }
        }
        match k {
            0 => {}
            1 => out.push('x'),
            _ => {
                let _ = write!(out, "x^{k}");
            }
        }
    }
    out
}

impl<T: CoeffText> std::fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_poly(self))
    }
}

impl std::str::FromStr for IntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_int(s)
    }
}

impl std::str::FromStr for RatPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rat(s)
    }
}


/// `#[serde(with = "...")]` adapter: integer polynomial as sparse text.
pub mod int_poly_serde {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::IntPoly;

    pub fn serialize<S: Serializer>(f: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_poly(f))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<IntPoly, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_int(&s).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "...")]` adapter: rational polynomial as sparse text.
pub mod rat_poly_serde {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::RatPoly;

    pub fn serialize<S: Serializer>(f: &RatPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_poly(f))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RatPoly, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rat(&s).map_err(D::Error::custom)
    }
}
