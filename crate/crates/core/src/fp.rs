//! Polynomials over prime fields `F_p` and the hard-instance families over them.
//!
//! Coefficients are stored as canonical residues in `[0, p)`; the balanced
//! representatives in `(-p/2, p/2]` are what [`FpPoly::coeffs`], the text form
//! and [`lp_length`] expose. Moduli up to `2^62` are supported; products go
//! through `u128`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::text::{format_poly, parse_int};
use crate::{Degree, IntPoly, Poly};

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn reduce_i64(c: i64, p: u64) -> u64 {
    (c as i128).rem_euclid(p as i128) as u64
}

fn balanced(r: u64, p: u64) -> i64 {
    if 2 * (r as u128) > p as u128 {
        r as i64 - p as i64
    } else {
        r as i64
    }
}

/// Polynomial over `F_p`; trailing zero residues are stripped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    fn raw(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Self { p, c }
    }

    fn check_modulus(p: u64) -> Result<()> {
        if p >= 1 << 62 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(())
    }

    /// From integer coefficients, constant term first; `p` must be prime.
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Self> {
        Self::check_modulus(p)?;
        Ok(Self::raw(p, coeffs.iter().map(|&c| reduce_i64(c, p)).collect()))
    }

    pub fn from_int(p: u64, f: &IntPoly) -> Result<Self> {
        Self::check_modulus(p)?;
        Ok(Self::from_int_unchecked(p, f))
    }

    fn from_int_unchecked(p: u64, f: &IntPoly) -> Self {
        let pb = BigInt::from(p);
        let c = f
            .coeffs()
            .iter()
            .map(|a| {
                let r = a % &pb;
                let r = if r.sign() == Sign::Minus { r + &pb } else { r };
                r.to_u64().expect("residue fits")
            })
            .collect();
        Self::raw(p, c)
    }

    /// Parse the sparse text form, then reduce mod `p`.
    pub fn parse(p: u64, s: &str) -> Result<Self> {
        Self::from_int(p, &parse_int(s)?)
    }

    pub fn zero(p: u64) -> Self {
        Self { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::raw(p, vec![1 % p])
    }

    pub fn x(p: u64) -> Self {
        Self::raw(p, vec![0, 1])
    }

    /// `c x^k`.
    pub fn monomial(p: u64, c: i64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = reduce_i64(c, p);
        Self::raw(p, v)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn degree(&self) -> Degree {
        match self.c.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    /// Residue of the coefficient of `x^i` in `[0, p)`.
    pub fn residue(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn residues(&self) -> &[u64] {
        &self.c
    }

    /// Balanced coefficient of `x^i`.
    pub fn coeff(&self, i: usize) -> i64 {
        balanced(self.residue(i), self.p)
    }

    /// Balanced coefficients, constant term first.
    pub fn coeffs(&self) -> Vec<i64> {
        self.c.iter().map(|&r| balanced(r, self.p)).collect()
    }

    pub fn to_int(&self) -> IntPoly {
        IntPoly::new(self.coeffs().into_iter().map(BigInt::from).collect())
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn trailing_power(&self) -> usize {
        self.c.iter().position(|&r| r != 0).unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| {
                let s = self.residue(i) + o.residue(i);
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            })
            .collect();
        Self::raw(self.p, v)
    }

    pub fn neg(&self) -> Self {
        Self::raw(self.p, self.c.iter().map(|&r| if r == 0 { 0 } else { self.p - r }).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::raw(self.p, acc.into_iter().map(|v| v as u64).collect())
    }

    pub fn scale(&self, s: u64) -> Self {
        let s = s % self.p;
        Self::raw(self.p, self.c.iter().map(|&r| mul_mod(r, s, self.p)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.c);
        Self::raw(self.p, v)
    }

    /// Add `c x^k`.
    pub fn with_term(&self, c: i64, k: usize) -> Self {
        self.add(&Self::monomial(self.p, c, k))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &r)| mul_mod(r, i as u64 % self.p, self.p))
            .collect();
        Self::raw(self.p, v)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dl = d.c.len();
        if r.len() < dl {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p);
        let mut q = vec![0u64; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + dl - 1];
            if top == 0 {
                continue;
            }
            let t = mul_mod(top, inv, p);
            q[k] = t;
            for (j, &b) in d.c.iter().enumerate() {
                let sub = mul_mod(t, b, p);
                let cur = r[k + j];
                r[k + j] = if cur >= sub { cur - sub } else { cur + p - sub };
            }
        }
        (Self::raw(p, q), Self::raw(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient when `d | self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Self) -> bool {
        !self.is_zero() && f.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.p), |acc, _| acc.mul(self))
    }

    /// `g` with `g^p = self`, when every exponent is a multiple of `p`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        debug_assert!(self.c.iter().enumerate().all(|(i, &r)| r == 0 || i % p == 0));
        Self::raw(self.p, self.c.iter().step_by(p).copied().collect())
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&Poly::new(self.coeffs())))
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[p={}]({})", self.p, self)
    }
}

#[derive(Serialize, Deserialize)]
struct FpPolyText {
    p: u64,
    poly: String,
}

impl Serialize for FpPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FpPolyText { p: self.p, poly: self.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FpPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = FpPolyText::deserialize(d)?;
        FpPoly::parse(t.p, &t.poly).map_err(serde::de::Error::custom)
    }
}

/// `L_p(f)`: sum of absolute balanced coefficients.
pub fn lp_length(f: &FpPoly) -> u64 {
    f.coeffs().iter().map(|c| c.unsigned_abs()).sum()
}

pub fn is_squarefree_p(f: &FpPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("is_squarefree_p"));
    }
    if f.deg() == 0 {
        return Ok(true);
    }
    let d = f.derivative();
    if d.is_zero() {
        // a p-th power of positive degree
        return Ok(false);
    }
    Ok(f.gcd(&d).deg() == 0)
}

/// Square-free decomposition `f = lc * prod a_i^{e_i}` with monic, square-free,
/// pairwise coprime `a_i`.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    assert!(!f.is_zero());
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let f = f.monic();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).expect("gcd divides");
        if fac.deg() > 0 {
            out.push((fac, i));
        }
        c = c.exact_div(&y).expect("gcd divides");
        w = y;
        i += 1;
    }
    if c.deg() > 0 {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p as usize));
        }
    }
    out.sort_by_key(|(_, m)| *m);
    out
}

/// Product of the repeated irreducible factors, each once; `w^2 | f`.
pub fn square_witness_p(f: &FpPoly) -> Result<Option<FpPoly>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("square_witness_p"));
    }
    let w = squarefree_decomposition(f)
        .into_iter()
        .filter(|(_, m)| *m >= 2)
        .fold(FpPoly::one(f.p), |acc, (g, _)| acc.mul(&g));
    Ok((w.deg() > 0).then_some(w))
}

/// Solve `f = r_i mod m_i` for pairwise coprime moduli, `deg f < deg prod m_i`.
pub fn crt(entries: &[(FpPoly, FpPoly)]) -> Result<FpPoly> {
    let Some((r0, m0)) = entries.first() else {
        return Err(Error::InvalidParameter("empty congruence system".into()));
    };
    let (mut f, mut m) = (r0.rem(m0), m0.clone());
    for (i, (r, mi)) in entries.iter().enumerate().skip(1) {
        let (g, s, _) = m.ext_gcd(mi);
        if g.deg() != 0 {
            return Err(Error::ModuliNotCoprime(0, i));
        }
        // f + m * s * (r - f) is r mod mi and f mod m
        let lift = m.mul(&s.mul(&r.sub(&f)).rem(mi));
        f = f.add(&lift);
        m = m.mul(mi);
        f = f.rem(&m);
    }
    Ok(f)
}

/// Squared moduli of the family for `p`: `x^2 (x+1)^2 (x^2+x+1)^2` for `p = 2`,
/// `x^2 (x+1)^2 (x-1)^2 (x^2+x-1)^2 (x^2-x-1)^2` for `p = 3`, and
/// `x^2 (2x+1)^2 (2x-1)^2 (6x+1)^2 (6x-1)^2` otherwise.
pub fn family_bases(p: u64) -> Result<Vec<FpPoly>> {
    FpPoly::check_modulus(p)?;
    let texts: &[&str] = match p {
        2 => &["x", "x + 1", "x^2 + x + 1"],
        3 => &["x", "x + 1", "x - 1", "x^2 + x - 1", "x^2 - x - 1"],
        _ => &["x", "2*x + 1", "2*x - 1", "6*x + 1", "6*x - 1"],
    };
    texts.iter().map(|s| FpPoly::parse(p, s)).collect()
}

pub fn family_modulus(p: u64) -> Result<FpPoly> {
    Ok(family_bases(p)?
        .iter()
        .fold(FpPoly::one(p), |acc, b| acc.mul(&b.mul(b))))
}

const TAIL2: &str = "x^6 + x^5 + x^4 + x^3 + x^2";
const TAIL3: &str = "x^13 - x^12 - x^9 + x^8 + x^6 + x^5 - x^2";

/// The fixed part of the family: the printed tails for `p = 2, 3`, the
/// degree-15 integer instance reduced mod `p` otherwise.
pub fn family_tail(p: u64) -> Result<FpPoly> {
    match p {
        2 => FpPoly::parse(2, TAIL2),
        3 => FpPoly::parse(3, TAIL3),
        _ => FpPoly::from_int(p, &crate::construct::turan15()),
    }
}

/// CRT solution over `F_3` of `0 mod x^2`, `-1 mod (x+1)^2`, `1 mod (x-1)^2`,
/// `-x mod (x^2+x-1)^2`, `x mod (x^2-x-1)^2`.
pub fn f3_tail_from_crt() -> Result<FpPoly> {
    let p = 3;
    let bases = family_bases(p)?;
    let residues = ["0", "-1", "1", "-x", "x"];
    let entries: Vec<_> = bases
        .iter()
        .zip(residues)
        .map(|(b, r)| Ok((FpPoly::parse(p, r)?, b.mul(b))))
        .collect::<Result<_>>()?;
    crt(&entries)
}

fn family_u_degree(p: u64, d: usize) -> Result<usize> {
    let (min_d, m) = match p {
        2 => (8, 8),
        3 => (14, 14),
        _ => (15, 10),
    };
    if d < min_d {
        return Err(Error::InvalidParameter(format!("family for p = {p} needs d >= {min_d}")));
    }
    Ok(d - m)
}

/// `modulus * u + tail`, required to have degree exactly `d`.
pub fn family_member(p: u64, d: usize, u: &FpPoly) -> Result<FpPoly> {
    let k = family_u_degree(p, d)?;
    if u.modulus() != p {
        return Err(Error::InvalidParameter("u lives over a different field".into()));
    }
    let zero_allowed = p >= 5 && d == 15;
    if !(u.degree() == Degree::Finite(k) || (zero_allowed && u.is_zero())) {
        return Err(Error::InvalidParameter(format!("u must have degree {k}, got {}", u.degree())));
    }
    let f = family_modulus(p)?.mul(u).add(&family_tail(p)?);
    if f.degree() != Degree::Finite(d) {
        return Err(Error::InvalidParameter(format!("member has degree {}, not {d}", f.degree())));
    }
    Ok(f)
}

/// Neighbour `f + perturbation` and `w` with `w^2 | f + perturbation`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpBlocker {
    pub perturbation: FpPoly,
    pub witness: FpPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FamilyVerdict {
    Verified { blockers: Vec<FpBlocker> },
    /// `x^2` does not divide `f`.
    NoDoubleRootAtZero,
    SquarefreeNeighbor { perturbation: FpPoly, neighbor: FpPoly },
}

impl FamilyVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Self::Verified { .. })
    }
}

/// Certify `L_p(f - g) >= 2` for every square-free `g` of any degree.
///
/// `x^2 | f` blocks `f` and `f + c x^k` for all `k >= 2`; the remaining
/// distance-1 neighbours `f +- 1`, `f +- x` each get a square witness.
pub fn verify_family_member(f: &FpPoly) -> Result<FamilyVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("verify_family_member"));
    }
    let p = f.p;
    if f.residue(0) != 0 || f.residue(1) != 0 {
        return Ok(FamilyVerdict::NoDoubleRootAtZero);
    }
    let mut blockers = vec![FpBlocker { perturbation: FpPoly::zero(p), witness: FpPoly::x(p) }];
    let mut perts = vec![FpPoly::one(p), FpPoly::monomial(p, -1, 0), FpPoly::x(p), FpPoly::monomial(p, -1, 1)];
    perts.dedup();
    for e in perts {
        let g = f.add(&e);
        match square_witness_p(&g)? {
            Some(w) => blockers.push(FpBlocker { perturbation: e, witness: w }),
            None => return Ok(FamilyVerdict::SquarefreeNeighbor { perturbation: e, neighbor: g }),
        }
    }
    Ok(FamilyVerdict::Verified { blockers })
}

/// Enumeration guard for [`family_count_check`].
pub const FAMILY_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub p: u64,
    pub d: usize,
    /// `2^{d-8}`, `2 * 3^{d-14}`, `(p-2) p^5` or `(p-1) p^{d-10}`.
    #[serde(with = "bigint_text")]
    pub family_size_lower_bound: BigInt,
    pub verified_members: u64,
    pub distinct: bool,
    /// First member in enumeration order with its blockers.
    pub sample: FpPoly,
    pub sample_blockers: Vec<FpBlocker>,
    /// First failing member, if any.
    pub failure: Option<(FpPoly, FamilyVerdict)>,
}

mod bigint_text {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.distinct && BigInt::from(self.verified_members) == self.family_size_lower_bound
    }
}

/// Guaranteed lower bound for `N_p(d)`, the number of hard members.
pub fn family_lower_bound(p: u64, d: usize) -> Result<BigInt> {
    let k = family_u_degree(p, d)?;
    let pb = BigInt::from(p);
    Ok(match p {
        2 => pb.pow(k as u32),
        3 => BigInt::from(2) * pb.pow(k as u32),
        _ if d == 15 => BigInt::from(p - 2) * pb.pow(5),
        _ => BigInt::from(p - 1) * pb.pow(k as u32),
    })
}

/// Leading coefficients of `u` that keep the member at degree `d`.
fn admissible_leads(p: u64, k: usize) -> Result<Vec<u64>> {
    let m = family_modulus(p)?;
    let t = family_tail(p)?;
    let lm = m.leading();
    let top = t.residue(m.deg() + k);
    Ok((1..p)
        .filter(|&a| (mul_mod(a, lm, p) + top) % p != 0)
        .collect())
}

/// Enumerate every admissible `u`, build and verify each member, and compare
/// the member count with `family_lower_bound`.
pub fn family_count_check(p: u64, d: usize) -> Result<FamilyReport> {
    FpPoly::check_modulus(p)?;
    let k = if p >= 5 && d == 15 { 5 } else { family_u_degree(p, d)? };
    let leads = admissible_leads(p, k)?;
    let low = (p as u128).checked_pow(k as u32);
    let count = low.and_then(|l| l.checked_mul(leads.len() as u128));
    let count = match count {
        Some(c) if c <= FAMILY_LIMIT as u128 => c as u64,
        _ => {
            return Err(Error::TooLarge(
                format!("{}*{p}^{k}", leads.len()),
                FAMILY_LIMIT.to_string(),
            ))
        }
    };
    let low = low.unwrap() as u64;
    let modulus = family_modulus(p)?;
    let tail = family_tail(p)?;
    let build = |idx: u64| {
        let mut c = Vec::with_capacity(k + 1);
        let mut r = idx % low;
        for _ in 0..k {
            c.push(r % p);
            r /= p;
        }
        c.push(leads[(idx / low) as usize]);
        modulus.mul(&FpPoly::raw(p, c)).add(&tail)
    };
    let results: Vec<(Vec<u64>, bool)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let f = build(i);
            let ok = f.degree() == Degree::Finite(d) && verify_family_member(&f).map(|v| v.is_verified()).unwrap_or(false);
            (f.c, ok)
        })
        .collect();
    let failure = match results.iter().position(|(_, ok)| !ok) {
        Some(i) => {
            let f = build(i as u64);
            let v = verify_family_member(&f)?;
            Some((f, v))
        }
        None => None,
    };
    let verified = results.iter().filter(|(_, ok)| *ok).count() as u64;
    let mut seen = HashSet::with_capacity(results.len());
    let distinct = results.into_iter().all(|(c, _)| seen.insert(c));
    let sample = build(0);
    let sample_blockers = match verify_family_member(&sample)? {
        FamilyVerdict::Verified { blockers } => blockers,
        _ => Vec::new(),
    };
    Ok(FamilyReport {
        p,
        d,
        family_size_lower_bound: family_lower_bound(p, d)?,
        verified_members: verified,
        distinct,
        sample,
        sample_blockers,
        failure,
    })
}

/// Balanced perturbations of `L_p`-length exactly `t` on positions `0..n`.
fn lp_perturbations(p: u64, t: usize, n: usize) -> Vec<Vec<(usize, i64)>> {
    let max_mag = (p / 2) as usize;
    // for odd p both signs are distinct residues; for p = 2 only +1 exists
    let signed = p > 2;
    crate::neighborhood::perturbations_at(t, n)
        .into_iter()
        .filter(|e| e.iter().all(|&(_, c)| c.unsigned_abs() as usize <= max_mag))
        .filter(|e| signed || e.iter().all(|&(_, c)| c > 0))
        .collect()
}

fn apply(f: &FpPoly, e: &[(usize, i64)]) -> FpPoly {
    e.iter().fold(f.clone(), |g, &(k, c)| g.with_term(c, k))
}

/// Smallest `t` with a square-free `g`, `deg g <= cap`, `L_p(f - g) = t`,
/// searching `t <= max_t`; ties go to the first perturbation in enumeration order.
pub fn min_distance_p(f: &FpPoly, cap: usize, max_t: usize) -> Option<(usize, FpPoly)> {
    let n = cap + 1;
    for t in 0..=max_t {
        for e in lp_perturbations(f.p, t, n) {
            let g = apply(f, &e);
            if !g.is_zero() && g.deg() <= cap && is_squarefree_p(&g).unwrap_or(false) {
                return Some((t, g));
            }
        }
    }
    None
}

/// Guard for [`question62_scan`]: `p^d <= 10^8`.
pub const SCAN_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub p: u64,
    pub d: usize,
    pub polynomials: u64,
    pub max_min_distance: usize,
    /// First `f` in enumeration order attaining the maximum.
    pub witness: FpPoly,
    /// A closest square-free `g` for the witness.
    pub witness_neighbor: FpPoly,
    /// `histogram[t]` = number of `f` at distance `t`.
    pub histogram: Vec<u64>,
}

/// For every `f` of degree exactly `d` over `F_p`, the `L_p`-distance to the
/// nearest square-free `g` with `deg g <= d`; returns the maximum.
pub fn question62_scan(p: u64, d: usize) -> Result<ScanReport> {
    FpPoly::check_modulus(p)?;
    let pd = (p as u128).checked_pow(d as u32).filter(|&v| v <= SCAN_LIMIT as u128);
    let Some(pd) = pd else {
        return Err(Error::TooLarge(format!("{p}^{d}"), SCAN_LIMIT.to_string()));
    };
    let pd = pd as u64;
    let total = (p - 1) * pd;
    // distance never exceeds L_p(f - 1) <= d * p/2 + 1, but it is tiny in practice
    let tables: Vec<_> = (0..=3).map(|t| lp_perturbations(p, t, d + 1)).collect();
    let build = |idx: u64| {
        let mut c = Vec::with_capacity(d + 1);
        let mut r = idx % pd;
        for _ in 0..d {
            c.push(r % p);
            r /= p;
        }
        c.push(1 + idx / pd);
        FpPoly::raw(p, c)
    };
    let search = |f: &FpPoly| -> (usize, FpPoly) {
        for (t, table) in tables.iter().enumerate() {
            for e in table {
                let g = apply(f, e);
                if !g.is_zero() && is_squarefree_p(&g).unwrap_or(false) {
                    return (t, g);
                }
            }
        }
        min_distance_p(f, d, usize::MAX).expect("the constant 1 is square-free")
    };
    let dists: Vec<usize> = (0..total).into_par_iter().map(|i| search(&build(i)).0).collect();
    let max = *dists.iter().max().unwrap_or(&0);
    let mut histogram = vec![0u64; max + 1];
    for &t in &dists {
        histogram[t] += 1;
    }
    let wi = dists.iter().position(|&t| t == max).unwrap_or(0) as u64;
    let witness = build(wi);
    let (_, witness_neighbor) = search(&witness);
    Ok(ScanReport {
        p,
        d,
        polynomials: total,
        max_min_distance: max,
        witness,
        witness_neighbor,
        histogram,
    })
}

/// Square-free test of `x^n + f` over `F_p` via `Q = n f - x f'`.
///
/// Returns `true` when `gcd(P, P') = 1` mod `p`; since `P` is monic of degree
/// `n` this proves `P` square-free over the integers as well. Requires
/// `n > deg f`.
pub fn tail_squarefree_mod(f: &IntPoly, n: usize, p: u64) -> bool {
    debug_assert!(f.is_zero() || n > f.deg());
    let fp = FpPoly::from_int_unchecked(p, f);
    let df = fp.derivative();
    let nb = n as u64 % p;
    let q = fp.scale(nb).sub(&df.shift(1));
    if q.is_zero() {
        return false;
    }
    if q.deg() == 0 {
        return true;
    }
    let xp = FpPoly::x(p).pow_mod((n - 1) as u64, &q);
    let pm = xp.shift(1).add(&fp).rem(&q);
    let dpm = xp.scale(nb).add(&df).rem(&q);
    q.gcd(&pm).gcd(&dpm).deg() == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, s: &str) -> FpPoly {
        FpPoly::parse(p, s).unwrap()
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(3_215_031_751));
        assert!(FpPoly::new(4, &[1]).is_err());
    }

    #[test]
    fn balanced_lengths() {
        assert_eq!(lp_length(&FpPoly::new(5, &[3, 4]).unwrap()), 3);
        assert_eq!(FpPoly::new(5, &[3, 4]).unwrap().coeffs(), vec![-2, -1]);
        assert_eq!(lp_length(&fp(2, "x^3 + x + 1")), 3);
        assert_eq!(lp_length(&fp(3, "2*x")), 1);
        assert_eq!(FpPoly::new(2, &[1, -1]).unwrap().coeffs(), vec![1, 1]);
        assert_eq!(fp(3, "2*x + 4").to_string(), "-x + 1");
    }

    #[test]
    fn arithmetic() {
        let a = fp(7, "x^3 + 2*x + 3");
        let b = fp(7, "x^2 - 1");
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < 2);
        assert_eq!(fp(5, "x^2 - 1").gcd(&fp(5, "x - 1")), fp(5, "x - 1"));
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(fp(3, "x").pow_mod(9, &fp(3, "x^2 + 1")), fp(3, "x").pow(9).rem(&fp(3, "x^2 + 1")));
    }

    #[test]
    fn squarefree_examples() {
        assert!(!is_squarefree_p(&fp(3, "x^3 + 1")).unwrap());
        assert!(is_squarefree_p(&fp(5, "x^2 + 1")).unwrap());
        assert!(!is_squarefree_p(&fp(2, TAIL2)).unwrap());
        assert!(is_squarefree_p(&FpPoly::zero(3)).is_err());
    }

    #[test]
    fn decomposition_recovers() {
        // (x+1)^3 (x^2+1)^2 x over F_3: the cube is a p-th power
        let f = fp(3, "x + 1").pow(3).mul(&fp(3, "x^2 + 1").pow(2)).mul(&fp(3, "x"));
        let dec = squarefree_decomposition(&f);
        assert_eq!(dec, vec![(fp(3, "x"), 1), (fp(3, "x^2 + 1"), 2), (fp(3, "x + 1"), 3)]);
        let w = square_witness_p(&f).unwrap().unwrap();
        assert!(w.mul(&w).divides(&f));
    }

    #[test]
    fn p3_tail_is_crt_solution() {
        assert_eq!(f3_tail_from_crt().unwrap(), fp(3, TAIL3));
        assert_eq!(family_modulus(3).unwrap().deg(), 14);
    }

    #[test]
    fn members_and_blockers() {
        let f = family_member(2, 8, &FpPoly::one(2)).unwrap();
        assert_eq!(f.deg(), 8);
        let FamilyVerdict::Verified { blockers } = verify_family_member(&f).unwrap() else {
            panic!()
        };
        let w = |e: &str| blockers.iter().find(|b| b.perturbation == fp(2, e)).unwrap().witness.clone();
        assert!(fp(2, "x + 1").divides(&w("1")));
        assert!(fp(2, "x^2 + x + 1").divides(&w("x")));

        let g = family_member(3, 14, &FpPoly::one(3)).unwrap();
        let FamilyVerdict::Verified { blockers } = verify_family_member(&g).unwrap() else {
            panic!()
        };
        let w = |e: &str| blockers.iter().find(|b| b.perturbation == fp(3, e)).unwrap().witness.clone();
        assert!(fp(3, "x + 1").divides(&w("1")));
        assert!(fp(3, "x - 1").divides(&w("-1")));
        assert!(fp(3, "x^2 + x - 1").divides(&w("x")));
        assert!(fp(3, "x^2 - x - 1").divides(&w("-x")));

        let h = family_member(5, 15, &FpPoly::zero(5)).unwrap();
        assert_eq!(h, FpPoly::from_int(5, &crate::construct::turan15()).unwrap());
        assert!(verify_family_member(&h).unwrap().is_verified());

        assert!(matches!(
            verify_family_member(&fp(2, "x^3")).unwrap(),
            FamilyVerdict::SquarefreeNeighbor { .. }
        ));
        assert!(family_member(2, 7, &FpPoly::one(2)).is_err());
        assert!(family_member(2, 9, &FpPoly::one(2)).is_err());
    }

    #[test]
    fn small_counts() {
        for (p, d, n) in [(2, 10, 4u64), (3, 15, 6), (5, 15, 3 * 3125)] {
            let r = family_count_check(p, d).unwrap();
            assert!(r.passed(), "{p} {d}: {r:?}");
            assert_eq!(r.verified_members, n);
        }
    }

    #[test]
    fn scan_small() {
        let r = question62_scan(2, 8).unwrap();
        assert_eq!(r.max_min_distance, 2);
        assert_eq!(r.polynomials, 256);
        let fam = family_member(2, 8, &FpPoly::one(2)).unwrap();
        let (t, g) = min_distance_p(&fam, 8, 3).unwrap();
        assert_eq!(t, 2);
        assert!(is_squarefree_p(&g).unwrap());
        assert!(question62_scan(7, 10).is_err());
    }

    #[test]
    fn modular_tail_test() {
        let f = parse_int("3*x^3 - x^2 + 2*x - 1").unwrap();
        for n in 4..40 {
            if tail_squarefree_mod(&f, n, 1_000_000_007) {
                assert!(crate::zpoly::is_squarefree_z(&f.with_term(BigInt::from(1), n)).unwrap());
            }
        }
        let sq = parse_int("2*x^2 + 1").unwrap();
        assert!(!tail_squarefree_mod(&sq, 4, 1_000_000_007));
    }
}
