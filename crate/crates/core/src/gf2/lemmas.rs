//! Constructive square-free neighbours over GF(2): the exhaustive tail search
//! `x^n + f`, the distance-3 construction through nearby irreducibles and the
//! distance-1 construction under factor-count conditions.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::factor::{factor_census, is_irreducible_2};
use super::{decompose, is_squarefree_2, recompose, word, EvenOddPair, Gf2Poly};
use crate::error::{Error, Result};

/// Largest degree covered by the tail search (the corollary mode reaches one more).
pub const LEMMA52_MAX_DEGREE: usize = 36;
pub const DEFAULT_SHARD_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma52Config {
    pub max_degree: usize,
    /// Search `f` with `x | f`, `x^2 \nmid f` and `deg f <= max_degree + 1`, using `1 < n < d`.
    pub corollary: bool,
    /// Each shard covers `2^shard_bits` candidates (fewer for small degrees).
    pub shard_bits: u32,
}

impl Lemma52Config {
    pub fn new(max_degree: usize) -> Self {
        Self { max_degree, corollary: false, shard_bits: DEFAULT_SHARD_BITS }
    }

    pub fn corollary(max_degree: usize) -> Self {
        Self { corollary: true, ..Self::new(max_degree) }
    }

    fn validate(&self) -> Result<()> {
        if !(2..=LEMMA52_MAX_DEGREE).contains(&self.max_degree) {
            return Err(Error::InvalidParameter(format!(
                "max degree {} outside 2..={LEMMA52_MAX_DEGREE}",
                self.max_degree
            )));
        }
        if !(1..=40).contains(&self.shard_bits) {
            return Err(Error::InvalidParameter("shard bits outside 1..=40".into()));
        }
        Ok(())
    }

    fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        if self.corollary {
            3..=self.max_degree + 1
        } else {
            2..=self.max_degree
        }
    }

    /// Free middle bits of a degree-`d` candidate.
    fn free_bits(&self, d: usize) -> usize {
        if self.corollary {
            d - 2
        } else {
            d - 1
        }
    }

    fn candidate(&self, d: usize, m: u64) -> u64 {
        if self.corollary {
            0b10 | m << 2 | 1 << d
        } else {
            1 | m << 1 | 1 << d
        }
    }

    fn first_n(&self) -> usize {
        if self.corollary {
            2
        } else {
            1
        }
    }
}

/// A contiguous range of candidate counters of one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub degree: usize,
    pub start: u64,
    pub end: u64,
}

/// Deterministic shard list: degrees ascending, counters ascending.
pub fn lemma52_shards(cfg: &Lemma52Config) -> Result<Vec<Shard>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let size = 1u64 << cfg.shard_bits;
    for d in cfg.degrees() {
        let total = 1u64 << cfg.free_bits(d);
        let mut start = 0;
        while start < total {
            let end = (start + size).min(total);
            out.push(Shard { index: out.len() as u64, degree: d, start, end });
            start = end;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardReport {
    pub index: u64,
    pub degree: usize,
    pub candidates: u64,
    pub non_squarefree: u64,
    /// Largest minimal `n` over the non-square-free candidates (0 if none).
    pub max_minimal_n: usize,
    /// Candidates with no square-free `x^n + f`.
    pub failures: Vec<Gf2Poly>,
}

pub fn run_shard(cfg: &Lemma52Config, shard: &Shard) -> ShardReport {
    let d = shard.degree;
    let mut rep = ShardReport {
        index: shard.index,
        degree: d,
        candidates: shard.end - shard.start,
        non_squarefree: 0,
        max_minimal_n: 0,
        failures: Vec::new(),
    };
    let n0 = cfg.first_n();
    for m in shard.start..shard.end {
        let f = cfg.candidate(d, m);
        let (fe, fo) = word::split(f);
        if word::gcd(fe, fo) == 1 {
            continue;
        }
        rep.non_squarefree += 1;
        // flipping bit n toggles one bit of fe or fo
        let hit = (n0..d).find(|&n| {
            let (e, o) = if n % 2 == 0 { (fe ^ 1 << (n / 2), fo) } else { (fe, fo ^ 1 << (n / 2)) };
            word::gcd(e, o) == 1
        });
        match hit {
            Some(n) => rep.max_minimal_n = rep.max_minimal_n.max(n),
            None => rep.failures.push(Gf2Poly::from_word(f)),
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub degree: usize,
    pub candidates: u64,
    pub non_squarefree: u64,
    pub max_minimal_n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma52Report {
    pub max_degree: usize,
    pub corollary: bool,
    /// Statistics over the shards run in this invocation.
    pub degrees: Vec<DegreeStats>,
    pub failures: Vec<Gf2Poly>,
    pub shards_total: u64,
    pub shards_run: u64,
    pub shards_skipped: u64,
}

impl Lemma52Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Merge shard reports (already in shard order).
pub fn merge_shards(cfg: &Lemma52Config, total: u64, skipped: u64, reports: &[ShardReport]) -> Lemma52Report {
    let mut degrees: Vec<DegreeStats> = Vec::new();
    let mut failures = Vec::new();
    for r in reports {
        match degrees.last_mut() {
            Some(s) if s.degree == r.degree => {
                s.candidates += r.candidates;
                s.non_squarefree += r.non_squarefree;
                s.max_minimal_n = s.max_minimal_n.max(r.max_minimal_n);
            }
            _ => degrees.push(DegreeStats {
                degree: r.degree,
                candidates: r.candidates,
                non_squarefree: r.non_squarefree,
                max_minimal_n: r.max_minimal_n,
            }),
        }
        failures.extend(r.failures.iter().cloned());
    }
    Lemma52Report {
        max_degree: cfg.max_degree,
        corollary: cfg.corollary,
        degrees,
        failures,
        shards_total: total,
        shards_run: reports.len() as u64,
        shards_skipped: skipped,
    }
}

/// Run every shard not in `skip` in parallel; `on_done` sees each finished
/// shard (in completion order), the merged report is in shard order.
pub fn lemma52_run(
    cfg: &Lemma52Config,
    skip: &BTreeSet<u64>,
    on_done: &(dyn Fn(&ShardReport) + Sync),
) -> Result<Lemma52Report> {
    let shards = lemma52_shards(cfg)?;
    let todo: Vec<&Shard> = shards.iter().filter(|s| !skip.contains(&s.index)).collect();
    let skipped = (shards.len() - todo.len()) as u64;
    let reports: Vec<ShardReport> = todo
        .par_iter()
        .map(|s| {
            let r = run_shard(cfg, s);
            on_done(&r);
            r
        })
        .collect();
    Ok(merge_shards(cfg, shards.len() as u64, skipped, &reports))
}

/// For every non-square-free `f` with `f(0) = 1` and `deg f <= max_degree`,
/// find `0 < n < deg f` with `x^n + f` square-free.
pub fn lemma52_search(max_degree: usize) -> Result<Lemma52Report> {
    lemma52_run(&Lemma52Config::new(max_degree), &BTreeSet::new(), &|_| {})
}

/// Closest irreducible `h` of the same degree with `h(0) = 1`, changing at most
/// three middle coefficients: one flip, then two, then three, each in
/// lexicographic order of positions.
pub fn nearest_irreducible(p: &Gf2Poly) -> Option<Gf2Poly> {
    let k = p.deg();
    if p.is_zero() || k == 0 || !p.bit(0) {
        return None;
    }
    if is_irreducible_2(p).ok()? {
        return Some(p.clone());
    }
    let mids: Vec<usize> = (1..k).collect();
    for i in 0..mids.len() {
        let h = p.flipped(mids[i]);
        if is_irreducible_2(&h).ok()? {
            return Some(h);
        }
    }
    for i in 0..mids.len() {
        for j in i + 1..mids.len() {
            let h = p.flipped(mids[i]).flipped(mids[j]);
            if is_irreducible_2(&h).ok()? {
                return Some(h);
            }
        }
    }
    for i in 0..mids.len() {
        for j in i + 1..mids.len() {
            for l in j + 1..mids.len() {
                let h = p.flipped(mids[i]).flipped(mids[j]).flipped(mids[l]);
                if is_irreducible_2(&h).ok()? {
                    return Some(h);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma81Case {
    /// `f_o = 0`: `g = f_e^2 + x`.
    OddPartZero,
    /// `deg f_e > deg f_1`: `f_e` replaced by a nearby irreducible.
    EvenDominant,
    /// `deg f_1 > deg f_e`: `f_1` replaced by a nearby irreducible.
    OddDominant,
    /// Equal degrees, `f_1` reducible: `f_e` replaced by a nearby irreducible.
    EqualReducible,
    /// Equal degrees, `f_1` irreducible or constant: `g = f` or `g = f + x^2`.
    EqualIrreducible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma81Outcome {
    pub g: Gf2Poly,
    pub case: Lemma81Case,
}

fn no_irreducible(p: &Gf2Poly) -> Error {
    Error::NoNearbyIrreducible(p.to_string())
}

/// Square-free `g` with `deg g = deg f` and `L_2(f - g) <= 3`, for `f(0) = 1`.
pub fn lemma81_construct(f: &Gf2Poly) -> Result<Lemma81Outcome> {
    if f.deg() < 2 || !f.bit(0) {
        return Err(Error::InvalidParameter("need f(0) = 1 and deg f >= 2".into()));
    }
    let EvenOddPair { fe, fo } = decompose(f);
    let (g, case) = if fo.is_zero() {
        (fe.square().add(&Gf2Poly::x()), Lemma81Case::OddPartZero)
    } else {
        let k = fo.words().iter().position(|&w| w != 0).unwrap() * 64
            + fo.words().iter().find(|&&w| w != 0).unwrap().trailing_zeros() as usize;
        let f1 = super::Gf2Poly::from_exponents(&fo.exponents().iter().map(|e| e - k).collect::<Vec<_>>());
        let (de, d1) = (fe.deg(), f1.deg());
        if de > d1 {
            let h = nearest_irreducible(&fe).ok_or_else(|| no_irreducible(&fe))?;
            (recompose(&h, &fo), Lemma81Case::EvenDominant)
        } else if d1 > de {
            let h1 = nearest_irreducible(&f1).ok_or_else(|| no_irreducible(&f1))?;
            (recompose(&fe, &h1.shift(k)), Lemma81Case::OddDominant)
        } else if de > 0 && !is_irreducible_2(&f1)? {
            let h = nearest_irreducible(&fe).ok_or_else(|| no_irreducible(&fe))?;
            (recompose(&h, &fo), Lemma81Case::EqualReducible)
        } else if fe.gcd(&fo).is_one() {
            (f.clone(), Lemma81Case::EqualIrreducible)
        } else {
            (f.flipped(2), Lemma81Case::EqualIrreducible)
        }
    };
    debug_assert!(is_squarefree_2(&g)?);
    Ok(Lemma81Outcome { g, case })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma55Clause {
    /// `f_e` avoids `x, x+1, x^2+x+1`; `f_o` has at most 5 distinct factors.
    EvenCoprime,
    /// `f_o` avoids `x, x+1, x^2+x+1`; `f_e` has at most 5 distinct factors.
    OddCoprime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ClauseFailure {
    /// The side that must avoid the small irreducibles is divisible by one (or is zero).
    DivisibleBy { factor: Gf2Poly },
    TooManyFactors { count: usize },
    /// Conditions hold but no candidate `h` kept the degree and coprimality.
    NoCandidate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lemma55Outcome {
    Constructed { g: Gf2Poly, clause: Lemma55Clause, h: Gf2Poly },
    DegreeTooSmall { degree: usize },
    Absent { even_clause: ClauseFailure, odd_clause: ClauseFailure },
}

fn small_irreducibles() -> [Gf2Poly; 3] {
    [Gf2Poly::from_word(0b10), Gf2Poly::from_word(0b11), Gf2Poly::from_word(0b111)]
}

fn check_clause(coprime_side: &Gf2Poly, counted_side: &Gf2Poly) -> Result<std::result::Result<(), ClauseFailure>> {
    for q in small_irreducibles() {
        if coprime_side.is_zero() || q.divides(coprime_side) {
            return Ok(Err(ClauseFailure::DivisibleBy { factor: q }));
        }
    }
    if !counted_side.is_zero() {
        let count = factor_census(counted_side)?.total();
        if count > 5 {
            return Ok(Err(ClauseFailure::TooManyFactors { count }));
        }
    }
    Ok(Ok(()))
}

/// Candidates `0, 1, x, x^2, x^3, x^4`.
fn lemma55_shifts() -> Vec<Gf2Poly> {
    let mut v = vec![Gf2Poly::zero()];
    v.extend((0..=4).map(Gf2Poly::monomial));
    v
}

/// Square-free `g` with `deg g = deg f` and `L_2(f - g) <= 1` when either
/// factor-count condition holds, `deg f >= 9`.
pub fn lemma55_construct(f: &Gf2Poly) -> Result<Lemma55Outcome> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("lemma55_construct"));
    }
    let d = f.deg();
    if d < 9 {
        return Ok(Lemma55Outcome::DegreeTooSmall { degree: d });
    }
    let EvenOddPair { fe, fo } = decompose(f);
    let attempt = |clause: Lemma55Clause| -> Result<std::result::Result<Lemma55Outcome, ClauseFailure>> {
        let (free, other) = match clause {
            Lemma55Clause::EvenCoprime => (&fe, &fo),
            Lemma55Clause::OddCoprime => (&fo, &fe),
        };
        if let Err(e) = check_clause(free, other)? {
            return Ok(Err(e));
        }
        let build = |moved: &Gf2Poly| match clause {
            Lemma55Clause::EvenCoprime => recompose(moved, other),
            Lemma55Clause::OddCoprime => recompose(other, moved),
        };
        if other.is_zero() {
            // f is a pure square or x times a square: change the other side's constant
            let bump = match clause {
                Lemma55Clause::EvenCoprime => Gf2Poly::x(),
                Lemma55Clause::OddCoprime => Gf2Poly::one(),
            };
            let g = build(free).add(&bump);
            let h = Gf2Poly::zero();
            if g.deg() == d && is_squarefree_2(&g)? {
                return Ok(Ok(Lemma55Outcome::Constructed { g, clause, h }));
            }
            return Ok(Err(ClauseFailure::NoCandidate));
        }
        for h in lemma55_shifts() {
            let moved = free.add(&h);
            if other.gcd(&moved).is_one() {
                let g = build(&moved);
                if g.deg() == d {
                    return Ok(Ok(Lemma55Outcome::Constructed { g, clause, h }));
                }
            }
        }
        Ok(Err(ClauseFailure::NoCandidate))
    };
    let even = match attempt(Lemma55Clause::EvenCoprime)? {
        Ok(out) => return Ok(out),
        Err(e) => e,
    };
    let odd = match attempt(Lemma55Clause::OddCoprime)? {
        Ok(out) => return Ok(out),
        Err(e) => e,
    };
    Ok(Lemma55Outcome::Absent { even_clause: even, odd_clause: odd })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Gf2Poly {
        Gf2Poly::parse_any(s).unwrap()
    }

    #[test]
    fn shards_cover_everything() {
        let cfg = Lemma52Config { shard_bits: 3, ..Lemma52Config::new(8) };
        let shards = lemma52_shards(&cfg).unwrap();
        let total: u64 = shards.iter().map(|s| s.end - s.start).sum();
        assert_eq!(total, (2..=8).map(|d| 1u64 << (d - 1)).sum::<u64>());
        assert!(shards.iter().enumerate().all(|(i, s)| s.index == i as u64));
        assert!(lemma52_shards(&Lemma52Config::new(37)).is_err());
        assert!(lemma52_shards(&Lemma52Config::new(1)).is_err());
    }

    #[test]
    fn degree_four_search() {
        let r = lemma52_search(4).unwrap();
        assert!(r.passed());
        // x^4 + x^2 + 1 = (x^2+x+1)^2 gains square-freeness at some n in 1..=3
        let f = g("x^4 + x^2 + 1");
        assert!((1..4).any(|n| is_squarefree_2(&f.flipped(n)).unwrap()));
        let d4 = r.degrees.iter().find(|s| s.degree == 4).unwrap();
        assert_eq!(d4.candidates, 8);
        let brute = (0..8u64)
            .map(|m| Gf2Poly::from_word(1 | m << 1 | 1 << 4))
            .filter(|f| !is_squarefree_2(f).unwrap())
            .count() as u64;
        assert_eq!(d4.non_squarefree, brute);
    }

    #[test]
    fn search_is_schedule_independent() {
        let cfg = Lemma52Config { shard_bits: 4, ..Lemma52Config::new(12) };
        let a = lemma52_run(&cfg, &BTreeSet::new(), &|_| {}).unwrap();
        let b = lemma52_search(12).unwrap();
        assert_eq!(a.degrees, b.degrees);
        assert!(a.passed());
        let skip: BTreeSet<u64> = (0..5).collect();
        let c = lemma52_run(&cfg, &skip, &|_| {}).unwrap();
        assert_eq!(c.shards_skipped, 5);
        assert_eq!(c.shards_run + 5, c.shards_total);
    }

    #[test]
    fn corollary_mode() {
        let r = lemma52_run(&Lemma52Config::corollary(12), &BTreeSet::new(), &|_| {}).unwrap();
        assert!(r.passed());
        assert_eq!(r.degrees.first().unwrap().degree, 3);
        assert_eq!(r.degrees.last().unwrap().degree, 13);
    }

    #[test]
    fn lemma81_examples() {
        let out = lemma81_construct(&g("x^4 + x^2 + 1")).unwrap();
        assert_eq!(out.case, Lemma81Case::OddPartZero);
        assert_eq!(out.g, g("x^4 + x^2 + x + 1"));
        let out = lemma81_construct(&g("x^2 + 1")).unwrap();
        assert_eq!(out.g, g("x^2 + x + 1"));
        assert!(lemma81_construct(&g("x^3 + x")).is_err());
    }

    #[test]
    fn lemma81_exhaustive_small() {
        for d in 2..=12usize {
            for m in 0..1u64 << (d - 1) {
                let f = Gf2Poly::from_word(1 | m << 1 | 1 << d);
                let out = lemma81_construct(&f).unwrap();
                assert!(is_squarefree_2(&out.g).unwrap(), "{f}");
                assert_eq!(out.g.deg(), d);
                assert!(out.g.add(&f).weight() <= 3, "{f} -> {}", out.g);
            }
        }
    }

    #[test]
    fn nearest_irreducible_order() {
        assert_eq!(nearest_irreducible(&g("x^2 + x + 1")), Some(g("x^2 + x + 1")));
        assert_eq!(nearest_irreducible(&g("x^2 + 1")), Some(g("x^2 + x + 1")));
        assert_eq!(nearest_irreducible(&g("x^4 + 1")), Some(g("x^4 + x + 1")));
        assert_eq!(nearest_irreducible(&g("x^4 + x")), None);
    }

    #[test]
    fn lemma55_examples() {
        // fo = 0 and fe = x^5 + x^2 + 1 (irreducible): f = fe^2
        let fe = g("x^5 + x^2 + 1");
        let f = fe.square();
        match lemma55_construct(&f).unwrap() {
            Lemma55Outcome::Constructed { g: out, clause, .. } => {
                assert_eq!(clause, Lemma55Clause::EvenCoprime);
                assert_eq!(out, f.add(&Gf2Poly::x()));
            }
            other => panic!("{other:?}"),
        }
        // fe divisible by x + 1 and fo with six distinct factors: both clauses fail
        let fo = g("x").mul(&g("x + 1")).mul(&g("x^2 + x + 1")).mul(&g("x^3 + x + 1")).mul(&g("x^3 + x^2 + 1")).mul(&g("x^4 + x + 1"));
        let fe = g("x + 1").mul(&g("x^6 + x + 1"));
        let f = recompose(&fe, &fo);
        match lemma55_construct(&f).unwrap() {
            Lemma55Outcome::Absent { even_clause, odd_clause } => {
                assert_eq!(even_clause, ClauseFailure::DivisibleBy { factor: g("x + 1") });
                assert_eq!(odd_clause, ClauseFailure::DivisibleBy { factor: g("x") });
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(lemma55_construct(&g("x^8 + 1")).unwrap(), Lemma55Outcome::DegreeTooSmall { degree: 8 });
    }

    #[test]
    fn lemma55_outputs_are_close() {
        let mut built = 0;
        for m in 0..1u64 << 12 {
            let f = Gf2Poly::from_word(m | 1 << 13);
            if let Lemma55Outcome::Constructed { g: out, .. } = lemma55_construct(&f).unwrap() {
                assert!(is_squarefree_2(&out).unwrap(), "{f}");
                assert_eq!(out.deg(), 13);
                assert!(out.add(&f).weight() <= 1);
                built += 1;
            }
        }
        assert!(built > 0);
    }
}
