//! Irreducibility and distinct-degree factor counts over GF(2).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Gf2Poly;
use crate::error::{Error, Result};

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(2^k) mod f`.
fn frobenius_power(f: &Gf2Poly, k: usize) -> Gf2Poly {
    let mut h = Gf2Poly::x().rem(f);
    for _ in 0..k {
        h = h.square().rem(f);
    }
    h
}

/// Rabin's test: `x^(2^d) = x mod f` and `gcd(x^(2^(d/q)) - x, f) = 1` for
/// every prime `q | d`.
pub fn is_irreducible_2(f: &Gf2Poly) -> Result<bool> {
    let d = f.deg();
    if f.is_zero() || d == 0 {
        return Err(Error::InvalidParameter("irreducibility needs degree >= 1".into()));
    }
    if d == 1 {
        return Ok(true);
    }
    let x = Gf2Poly::x();
    if frobenius_power(f, d) != x.rem(f) {
        return Ok(false);
    }
    for q in prime_factors(d) {
        let h = frobenius_power(f, d / q).add(&x);
        if !f.gcd(&h).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Product of the distinct irreducible factors of `f`.
pub fn radical(f: &Gf2Poly) -> Gf2Poly {
    assert!(!f.is_zero(), "radical of zero");
    if f.deg() == 0 {
        return Gf2Poly::one();
    }
    let d = f.derivative();
    if d.is_zero() {
        return radical(&f.sqrt().expect("even exponents only"));
    }
    let g = f.gcd(&d);
    if g.is_one() {
        return f.clone();
    }
    // f / g collects the factors of odd multiplicity, g holds the rest
    let a = f.exact_div(&g).expect("gcd divides");
    let b = radical(&g);
    let common = a.gcd(&b);
    a.mul(&b).exact_div(&common).expect("gcd divides")
}

/// Number of distinct irreducible factors per degree.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FactorCensus {
    pub counts: BTreeMap<usize, usize>,
}

impl FactorCensus {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// `sum degree * count`, the degree of the radical.
    pub fn weighted_degree(&self) -> usize {
        self.counts.iter().map(|(d, c)| d * c).sum()
    }
}

/// Distinct-degree factorization of the radical of `f`.
pub fn factor_census(f: &Gf2Poly) -> Result<FactorCensus> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factor_census"));
    }
    let mut r = radical(f);
    let mut census = FactorCensus::default();
    let x = Gf2Poly::x();
    let mut h = x.clone();
    let mut i = 1;
    while r.deg() >= 2 * i {
        h = h.square().rem(&r);
        let g = r.gcd(&h.add(&x));
        if !g.is_one() {
            census.counts.insert(i, g.deg() / i);
            r = r.exact_div(&g).expect("gcd divides");
            h = h.rem(&r);
        }
        i += 1;
    }
    if r.deg() > 0 {
        *census.counts.entry(r.deg()).or_default() += 1;
    }
    Ok(census)
}
