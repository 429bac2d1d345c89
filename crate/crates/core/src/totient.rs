//! Euler totient sieve and the counting function `Phi(r) = #{n >= 1 : phi(n) <= r}`.
//!
//! `Phi(r)` is finite because `phi(n) > n^{5/6}` once `n >= 30000`; every `n`
//! with `phi(n) <= r` therefore lies below [`cutoff`]`(r)`, so one sieve up to
//! `cutoff(r_max)` plus a histogram of totient values yields `Phi(r)` for every
//! `r <= r_max` at once.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `zeta(2) zeta(3) / zeta(6)`, the asymptotic density of `Phi(r) / r`.
pub const ZETA_RATIO: f64 = 1.943596;

/// Ratio below which every integer `r <= 10^6` stays.
pub const PHI_RATIO_BOUND: f64 = 2.5;

/// Exact totients `phi(1..=limit)`; index 0 is unused and holds 0.
#[derive(Debug, Clone)]
pub struct PhiTable {
    limit: usize,
    values: Vec<u32>,
}

impl PhiTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `phi(n)` for `1 <= n <= limit`.
    pub fn phi(&self, n: usize) -> u32 {
        assert!(n >= 1 && n <= self.limit, "n = {n} outside 1..={}", self.limit);
        self.values[n]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

/// Linear sieve.
pub fn phi_sieve(limit: usize) -> PhiTable {
    let limit = limit.max(1);
    let mut phi = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    phi[1] = 1;
    for i in 2..=limit {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if ip > limit {
                break;
            }
            if i % p as usize == 0 {
                phi[ip] = phi[i] * p;
                break;
            }
            phi[ip] = phi[i] * (p - 1);
        }
    }
    PhiTable { limit, values: phi }
}

/// `max{30000, ceil(2.243 r log log(r^{6/5}))}`, rounded outward.
pub fn cutoff(r: u64) -> u64 {
    let rf = r as f64;
    let ll = (1.2 * rf.ln()).ln();
    let bound = 2.243 * rf * ll;
    if !bound.is_finite() || bound <= 30000.0 {
        return 30000;
    }
    // a few ulps of slack: an over-wide scan is harmless, an under-wide one is not
    (bound * (1.0 + 1e-12)).ceil() as u64 + 1
}

/// `Phi(r)` for all `r <= r_max` from a single sieve.
#[derive(Debug, Clone)]
pub struct PhiCounter {
    r_max: u64,
    /// `prefix[r] = Phi(r)`
    prefix: Vec<u64>,
}

impl PhiCounter {
    pub fn new(r_max: u64) -> Self {
        let r_max = r_max.max(1);
        let table = phi_sieve(cutoff(r_max) as usize);
        let mut hist = vec![0u64; r_max as usize + 1];
        for &v in &table.values()[1..] {
            if (v as u64) <= r_max {
                hist[v as usize] += 1;
            }
        }
        let mut acc = 0u64;
        let prefix = hist
            .into_iter()
            .map(|c| {
                acc += c;
                acc
            })
            .collect();
        Self { r_max, prefix }
    }

    pub fn r_max(&self) -> u64 {
        self.r_max
    }

    /// `Phi(r)` for `1 <= r <= r_max`.
    pub fn count(&self, r: u64) -> u64 {
        assert!(r >= 1 && r <= self.r_max, "r = {r} outside 1..={}", self.r_max);
        self.prefix[r as usize]
    }
}

/// `Phi(r)`, scanning `n <= cutoff(r)`.
pub fn phi_count(r: u64) -> u64 {
    assert!(r >= 1, "Phi is defined for r >= 1");
    let table = phi_sieve(cutoff(r) as usize);
    table.values()[1..].iter().filter(|&&v| (v as u64) <= r).count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub r: u64,
    pub phi_count: u64,
    #[serde(with = "ratio_text")]
    pub ratio: BigRational,
}

mod ratio_text {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Rows `r_min <= r <= r_max` with `Phi(r)/r >= threshold`.
///
/// Every `r` in range is also checked against `Phi(r) <= 2.5 r`; the first
/// violation aborts with [`Error::PhiBoundViolated`].
pub fn census(r_min: u64, r_max: u64, threshold: &BigRational) -> Result<Vec<CensusRow>> {
    if r_min < 1 || r_min > r_max {
        return Err(Error::InvalidParameter(format!("bad census range {r_min}..={r_max}")));
    }
    let counter = PhiCounter::new(r_max);
    let mut rows = Vec::new();
    for r in r_min..=r_max {
        let c = counter.count(r);
        // Phi(r) <= 2.5 r  <=>  2 Phi(r) <= 5 r
        if 2 * c > 5 * r {
            return Err(Error::PhiBoundViolated(r));
        }
        let ratio = BigRational::new(BigInt::from(c), BigInt::from(r));
        if &ratio >= threshold {
            rows.push(CensusRow { r, phi_count: c, ratio });
        }
    }
    Ok(rows)
}

/// Upper bound `zeta-ratio * r + 58.61 r exp(-(sqrt 2 / 8) sqrt(log r log log r))`
/// on `Phi(r)`, valid for `r >= 240`.
pub fn derbal_bound<T: Float + FromPrimitive>(r: T) -> Result<T> {
    let c = |v: f64| T::from_f64(v).expect("representable constant");
    if !(r >= c(240.0)) {
        return Err(Error::InvalidParameter("derbal_bound needs r >= 240".into()));
    }
    let l = r.ln();
    let err = c(58.61) * r * (-(c(2.0).sqrt() / c(8.0)) * (l * l.ln()).sqrt()).exp();
    Ok(c(ZETA_RATIO) * r + err)
}

/// `n / (1.782 log log n + 2.507 / log log n)`, a lower bound for `phi(n)`, `n >= 3`.
pub fn totient_lower_bound(n: u64) -> f64 {
    let ll = (n as f64).ln().ln();
    n as f64 / (1.782 * ll + 2.507 / ll)
}

/// True when `ratio` is at least the given decimal, computed exactly.
pub fn ratio_at_least(ratio: &BigRational, num: i64, den: i64) -> bool {
    if den.is_zero() {
        return false;
    }
    ratio >= &BigRational::new(BigInt::from(num), BigInt::from(den))
}
