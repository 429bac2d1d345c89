//! Bit-packed polynomials over GF(2) and the square-free machinery built on the
//! decomposition `f = f_e^2 + x f_o^2`.
//!
//! Text form is hexadecimal with a `0x` prefix, the least significant bit being
//! the constant term: `0x7` is `x^2 + x + 1`.

pub mod factor;
pub mod lemmas;
pub mod word;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fp::FpPoly;
use crate::Degree;

pub use factor::{factor_census, is_irreducible_2, radical, FactorCensus};
pub use lemmas::*;

/// Polynomial over GF(2); bit `i` of the word sequence is the coefficient of `x^i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    fn norm(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(1)
    }

    pub fn x() -> Self {
        Self::from_word(2)
    }

    pub fn from_word(w: u64) -> Self {
        Self::norm(vec![w])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        Self::norm(words)
    }

    /// `sum x^e` over the given exponents (repeats cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut f = Self::zero();
        for &e in exps {
            f.flip(e);
        }
        f
    }

    pub fn monomial(k: usize) -> Self {
        Self::from_exponents(&[k])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The single word, when the degree is below 64.
    pub fn to_word(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn degree(&self) -> Degree {
        match self.words.last() {
            None => Degree::NegInfinity,
            Some(&w) => Degree::Finite((self.words.len() - 1) * 64 + word::deg(w) as usize),
        }
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().finite().unwrap_or(0)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// `f + x^i`.
    pub fn flipped(&self, i: usize) -> Self {
        let mut g = self.clone();
        g.flip(i);
        g
    }

    /// `L_2(f)`: the number of monomials.
    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn exponents(&self) -> Vec<usize> {
        (0..=self.deg()).filter(|&i| self.bit(i)).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.words.len().max(o.words.len());
        let w = (0..n)
            .map(|i| self.words.get(i).copied().unwrap_or(0) ^ o.words.get(i).copied().unwrap_or(0))
            .collect();
        Self::norm(w)
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut out = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            out[i + ws] ^= w << bs;
            if bs != 0 {
                out[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        Self::norm(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.words.len() + o.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            for (j, &b) in o.words.iter().enumerate() {
                let p = word::clmul(a, b);
                out[i + j] ^= p as u64;
                out[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        Self::norm(out)
    }

    /// `f^2`, by spreading bits.
    pub fn square(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.words.len());
        for &w in &self.words {
            out.push(word::spread(w & 0xFFFF_FFFF));
            out.push(word::spread(w >> 32));
        }
        Self::norm(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let Degree::Finite(dd) = d.degree() else {
            panic!("division by the zero polynomial");
        };
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Degree::Finite(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let s = dr - dd;
            r = r.add(&d.shift(s));
            q.flip(s);
        }
        (q, r)
    }

    pub fn rem(&self, d: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.to_word(), d.to_word()) {
            assert!(b != 0, "division by the zero polynomial");
            return Self::from_word(word::rem(a, b));
        }
        self.div_rem(d).1
    }

    pub fn divides(&self, f: &Self) -> bool {
        !self.is_zero() && f.rem(self).is_zero()
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// `gcd(0, 0) = 0`; otherwise monic automatically.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Formal derivative; equals `f_o^2`.
    pub fn derivative(&self) -> Self {
        // odd-indexed bits move down one place, even ones vanish
        let w = self.words.iter().map(|&w| (w >> 1) & 0x5555_5555_5555_5555).collect();
        Self::norm(w)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one().rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.square().rem(m);
            e >>= 1;
        }
        acc
    }

    /// `g` with `g^2 = self`, when only even exponents occur.
    pub fn sqrt(&self) -> Option<Self> {
        let EvenOddPair { fe, fo } = decompose(self);
        fo.is_zero().then_some(fe)
    }

    pub fn to_fp(&self) -> FpPoly {
        let c: Vec<i64> = (0..=self.deg()).map(|i| self.bit(i) as i64).collect();
        FpPoly::new(2, if self.is_zero() { &[] } else { &c }).expect("2 is prime")
    }

    pub fn from_fp(f: &FpPoly) -> Result<Self> {
        if f.modulus() != 2 {
            return Err(Error::InvalidParameter(format!("polynomial over F_{} is not binary", f.modulus())));
        }
        let exps: Vec<usize> = f.residues().iter().enumerate().filter(|(_, &r)| r == 1).map(|(i, _)| i).collect();
        Ok(Self::from_exponents(&exps))
    }

    /// Sparse text such as `x^4 + x + 1`.
    pub fn to_sparse(&self) -> String {
        self.to_fp().to_string()
    }

    /// Accept `0x..` hex or the sparse text form reduced mod 2.
    pub fn parse_any(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with("0x") || t.starts_with("0X") {
            t.parse()
        } else {
            Self::from_fp(&FpPoly::parse(2, t)?)
        }
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("0x0");
        }
        let mut it = self.words.iter().rev();
        write!(f, "0x{:x}", it.next().unwrap())?;
        for w in it {
            write!(f, "{w:016x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let hex = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .ok_or(Error::Parse { pos: 0, msg: "expected 0x prefix".into() })?;
        if hex.is_empty() {
            return Err(Error::Parse { pos: 2, msg: "no hex digits".into() });
        }
        if let Some(i) = hex.find(|c: char| !c.is_ascii_hexdigit()) {
            return Err(Error::Parse { pos: 2 + i, msg: "invalid hex digit".into() });
        }
        let digits = hex.as_bytes();
        let mut words = Vec::new();
        let mut end = digits.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&digits[start..end]).unwrap();
            words.push(u64::from_str_radix(chunk, 16).unwrap());
            end = start;
        }
        Ok(Self::norm(words))
    }
}

impl Serialize for Gf2Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Gf2Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `f = fe^2 + x fo^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenOddPair {
    pub fe: Gf2Poly,
    pub fo: Gf2Poly,
}

impl EvenOddPair {
    pub fn recompose(&self) -> Gf2Poly {
        self.fe.square().add(&self.fo.square().shift(1))
    }
}

pub fn decompose(f: &Gf2Poly) -> EvenOddPair {
    let mut fe = Vec::with_capacity(f.words.len().div_ceil(2));
    let mut fo = Vec::with_capacity(fe.capacity());
    for pair in f.words.chunks(2) {
        let (lo, hi) = (pair[0], pair.get(1).copied().unwrap_or(0));
        fe.push(word::squeeze(lo) | word::squeeze(hi) << 32);
        fo.push(word::squeeze(lo >> 1) | word::squeeze(hi >> 1) << 32);
    }
    EvenOddPair { fe: Gf2Poly::norm(fe), fo: Gf2Poly::norm(fo) }
}

pub fn recompose(fe: &Gf2Poly, fo: &Gf2Poly) -> Gf2Poly {
    EvenOddPair { fe: fe.clone(), fo: fo.clone() }.recompose()
}

/// `gcd(fe, fo) = 1`.
pub fn is_squarefree_2(f: &Gf2Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("is_squarefree_2"));
    }
    let EvenOddPair { fe, fo } = decompose(f);
    Ok(fe.gcd(&fo).is_one())
}

/// `gcd(f, f') = 1`, the textbook test.
pub fn is_squarefree_classical(f: &Gf2Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("is_squarefree_classical"));
    }
    Ok(f.gcd(&f.derivative()).is_one())
}

/// `w` with `w^2 | f`, `deg w >= 1`, when `f` is not square-free.
pub fn square_witness_2(f: &Gf2Poly) -> Result<Option<Gf2Poly>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("square_witness_2"));
    }
    Ok(crate::fp::square_witness_p(&f.to_fp())?.map(|w| Gf2Poly::from_fp(&w).expect("binary")))
}
