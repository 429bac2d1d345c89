//! Search around a polynomial in the `L`-metric and the tail constructions
//! `x^n + f`.
//!
//! Neighbours are produced in a fixed order: by distance `L(f - g)`, then by
//! the support of the perturbation (fewer positions first, each support set in
//! lexicographic order), then by the magnitudes on that support, then by signs
//! with `+` before `-` position by position. The order is a convention of this
//! crate; the search reports the first square-free hit in it.

use num_bigint::BigInt;
use num_traits::{Float, FromPrimitive, One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::totient::phi_count;
use crate::zpoly::{is_squarefree_z, length, tail_is_squarefree};
use crate::IntPoly;

/// Budgets above this need `allow_large`.
pub const MAX_BUDGET: usize = 2;

/// Sparse perturbation `sum c_i x^i` as `(position, coefficient)` pairs.
pub type Perturbation = Vec<(usize, i64)>;

/// All compositions of `total` into `parts` positive integers, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Perturbations of `L`-length exactly `t` supported on `0..positions`.
pub fn perturbations_at(t: usize, positions: usize) -> Vec<Perturbation> {
    let mut out = Vec::new();
    if t == 0 {
        out.push(Vec::new());
        return out;
    }
    for size in 1..=t.min(positions) {
        let mags = compositions(t, size);
        for support in subsets(positions, size) {
            for m in &mags {
                for signs in 0..(1u32 << size) {
                    let p = support
                        .iter()
                        .zip(m)
                        .enumerate()
                        .map(|(j, (&pos, &mag))| {
                            let neg = signs >> (size - 1 - j) & 1 == 1;
                            (pos, if neg { -(mag as i64) } else { mag as i64 })
                        })
                        .collect();
                    out.push(p);
                }
            }
        }
    }
    out
}

fn apply(f: &IntPoly, p: &Perturbation) -> IntPoly {
    let mut g = f.clone();
    for &(k, c) in p {
        g.add_term(BigInt::from(c), k);
    }
    g
}

fn guard(budget: usize, allow_large: bool) -> Result<()> {
    if budget > MAX_BUDGET && !allow_large {
        return Err(Error::BudgetTooLarge(budget));
    }
    Ok(())
}

/// Every `g != 0` with `L(f - g) <= budget` and `deg g <= degree_cap`, once each,
/// paired with its distance.
pub fn neighbors_with_distance(
    f: &IntPoly,
    budget: usize,
    degree_cap: usize,
    allow_large: bool,
) -> Result<Vec<(IntPoly, usize)>> {
    guard(budget, allow_large)?;
    // positions above the cap can only help when they cancel a term of f
    let positions = f.deg().max(degree_cap) + 1;
    let mut out = Vec::new();
    for t in 0..=budget {
        for p in perturbations_at(t, positions) {
            let g = apply(f, &p);
            if !g.is_zero() && g.deg() <= degree_cap {
                out.push((g, t));
            }
        }
    }
    Ok(out)
}

/// The `L`-ball of radius `budget` around `f`, cut to `deg g <= degree_cap`.
pub fn enumerate_neighbors(f: &IntPoly, budget: usize, degree_cap: usize, allow_large: bool) -> Result<Vec<IntPoly>> {
    Ok(neighbors_with_distance(f, budget, degree_cap, allow_large)?
        .into_iter()
        .map(|(g, _)| g)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Found {
    #[serde(with = "crate::text::int_poly_serde")]
    pub g: IntPoly,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    #[serde(with = "crate::text::int_poly_serde")]
    pub center: IntPoly,
    pub budget: usize,
    pub degree_cap: usize,
    pub found: Option<Found>,
    /// Neighbours tested up to and including the hit, or all of them.
    pub neighbors_tested: usize,
}

/// First square-free neighbour in enumeration order.
///
/// Candidates are tested in parallel; the reported hit is the one with the
/// smallest enumeration index, so the answer does not depend on scheduling.
pub fn nearest_squarefree(f: &IntPoly, budget: usize, degree_cap: usize, allow_large: bool) -> Result<SearchReport> {
    let cands = neighbors_with_distance(f, budget, degree_cap, allow_large)?;
    let hit = cands
        .par_iter()
        .position_first(|(g, _)| is_squarefree_z(g).unwrap_or(false));
    let (found, tested) = match hit {
        Some(i) => {
            let (g, distance) = cands[i].clone();
            (Some(Found { g, distance }), i + 1)
        }
        None => (None, cands.len()),
    };
    Ok(SearchReport {
        center: f.clone(),
        budget,
        degree_cap,
        found,
        neighbors_tested: tested,
    })
}

fn needs_shift(f: &IntPoly) -> bool {
    f.trailing_power() >= 2
}

/// `x^n + f`, plus `1` when `x^2 | f`, checked square-free.
pub fn thm13_construct(f: &IntPoly, n: usize) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("thm13_construct"));
    }
    let bound = length(&f.derivative());
    if BigInt::from(n) <= bound {
        return Err(Error::TailExponentTooSmall { n, bound: bound.to_string() });
    }
    let base = if needs_shift(f) { f.with_term(BigInt::one(), 0) } else { f.clone() };
    let g = base.with_term(BigInt::one(), n);
    assert!(tail_is_squarefree(&base, n)?, "tail x^{n} + f is not square-free: {g}");
    Ok(g)
}

/// `(log d / log log d)^3`.
pub fn log_ratio_cubed<T: Float + FromPrimitive>(d: T) -> T {
    let l = d.ln();
    (l / l.ln()).powi(3)
}

/// `2.2 d (log d / log log d)^3 log L`.
pub fn thm14_bound<T: Float + FromPrimitive>(d: usize, lf: u64) -> Result<T> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!("degree {d} below 3")));
    }
    let c = |v: f64| T::from_f64(v).expect("representable");
    let dt = T::from_usize(d).expect("representable");
    let lt = T::from_u64(lf).expect("representable");
    Ok(c(2.2) * dt * log_ratio_cubed(dt) * lt.ln())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub m: u64,
    pub phi_d: u64,
}

impl DegreeWindow {
    pub fn first(&self) -> u64 {
        self.m + 1
    }

    pub fn last(&self) -> u64 {
        self.m + self.phi_d + 1
    }

    pub fn candidates(&self) -> std::ops::RangeInclusive<u64> {
        self.first()..=self.last()
    }

    pub fn len(&self) -> u64 {
        self.phi_d + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Result of the bounded-degree tail construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Thm14Outcome {
    /// `g = x^n + f` with `n` from the window.
    Window {
        window: DegreeWindow,
        n: u64,
        #[serde(with = "crate::text::int_poly_serde")]
        g: IntPoly,
    },
    /// `L(f) = 2`: `g = +-x^d +- 2x` or `+-x^d +- 2`.
    LengthTwo {
        #[serde(with = "crate::text::int_poly_serde")]
        g: IntPoly,
    },
}

/// `floor(d + 2 d (log d / log log d)^3 log L)` rounded upward by a hair, and
/// `Phi(d)` from the totient module.
pub fn thm14_window(f: &IntPoly) -> Result<DegreeWindow> {
    let d = f.deg();
    if f.is_zero() || d < 3 {
        return Err(Error::InvalidParameter("window needs deg f >= 3".into()));
    }
    if needs_shift(f) {
        return Err(Error::InvalidParameter("x^2 divides f; pass f + 1".into()));
    }
    let lf = length(f).to_u64().ok_or_else(|| Error::InvalidParameter("L(f) too large".into()))?;
    if lf < 3 {
        return Err(Error::InvalidParameter("window needs L(f) >= 3".into()));
    }
    let df = d as f64;
    let b = df + 2.0 * df * log_ratio_cubed(df) * (lf as f64).ln();
    let m = (b * (1.0 + 1e-12) + 1e-9).floor() as u64;
    Ok(DegreeWindow { m, phi_d: phi_count(d as u64) })
}

fn length_two_fallback(f: &IntPoly) -> IntPoly {
    // f = a x^d + b x^k with k in {0, 1}: doubling b gives an Eisenstein factor at 2
    let (k, b) = f.terms().next().map(|(k, c)| (k, c.clone())).expect("two terms");
    let g = f.with_term(b, k);
    debug_assert!(is_squarefree_z(&g).unwrap_or(false));
    g
}

/// Search the window for `n` with `x^n + f` square-free (after the `+1` shift
/// when `x^2 | f`); `L(f) = 2` takes the explicit fallback.
pub fn thm14_construct(f: &IntPoly) -> Result<Thm14Outcome> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("thm14_construct"));
    }
    let base = if needs_shift(f) { f.with_term(BigInt::one(), 0) } else { f.clone() };
    if length(&base) == BigInt::from(2) && base.terms().count() == 2 && base.trailing_power() <= 1 && base.deg() >= 3 {
        return Ok(Thm14Outcome::LengthTwo { g: length_two_fallback(&base) });
    }
    let window = thm14_window(&base)?;
    for n in window.candidates() {
        if tail_is_squarefree(&base, n as usize)? {
            let g = base.with_term(BigInt::one(), n as usize);
            return Ok(Thm14Outcome::Window { window, n, g });
        }
    }
    Err(Error::TailExhausted(window.last() as usize))
}

/// Smallest `n >= 1` with `x^n + f` (plus `1` when `x^2 | f`) square-free.
pub fn minimal_tail_exponent(f: &IntPoly, cap: usize) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("minimal_tail_exponent"));
    }
    if cap == 0 {
        return Err(Error::InvalidParameter("cap must be at least 1".into()));
    }
    let base = if needs_shift(f) { f.with_term(BigInt::one(), 0) } else { f.clone() };
    for n in 1..=cap {
        let g = base.with_term(BigInt::one(), n);
        if !g.is_zero() && tail_is_squarefree(&base, n)? {
            return Ok(n);
        }
    }
    Err(Error::TailExhausted(cap))
}

/// Count of the `L`-ball around `x^d` cut to degree `<= d`, computed
/// combinatorially.
pub fn ball_size_around_monomial(d: usize, budget: usize) -> usize {
    // perturbations on d+1 positions with L = t, minus those cancelling x^d to 0
    let n = d + 1;
    let mut total = 0usize;
    for t in 0..=budget {
        for size in 1..=t.min(n) {
            total += binom(n, size) * binom(t - 1, size - 1) * (1 << size);
        }
        if t == 0 {
            total += 1;
        }
    }
    // only -x^d with t = 1 gives the zero polynomial
    if budget >= 1 {
        total -= 1;
    }
    total
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::turan15;
    use crate::text::parse_int;
    use std::collections::HashSet;

    fn ip(s: &str) -> IntPoly {
        parse_int(s).unwrap()
    }

    #[test]
    fn ball_around_cube() {
        let got = enumerate_neighbors(&ip("x^3"), 1, 3, false).unwrap();
        let expected: Vec<IntPoly> = [
            "x^3", "x^3 + 1", "x^3 - 1", "x^3 + x", "x^3 - x", "x^3 + x^2", "x^3 - x^2", "2*x^3",
        ]
        .iter()
        .map(|s| ip(s))
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn ball_sizes_match_count() {
        for b in 0..=2 {
            for d in 0..6 {
                let f = IntPoly::monomial(BigInt::one(), d);
                let got = enumerate_neighbors(&f, b, d, false).unwrap();
                let set: HashSet<_> = got.iter().cloned().collect();
                assert_eq!(set.len(), got.len(), "duplicates at d={d} b={b}");
                assert_eq!(got.len(), ball_size_around_monomial(d, b), "d={d} b={b}");
                for g in &got {
                    assert!(length(&(&f - g)) <= BigInt::from(b));
                }
            }
        }
    }

    #[test]
    fn small_balls() {
        assert!(enumerate_neighbors(&ip("x"), 1, 0, false).unwrap().is_empty());
        let got = enumerate_neighbors(&ip("1"), 1, 1, false).unwrap();
        let set: HashSet<_> = got.into_iter().collect();
        let expected: HashSet<_> = ["1", "2", "x + 1", "-x + 1"].iter().map(|s| ip(s)).collect();
        assert_eq!(set, expected);
        assert!(matches!(enumerate_neighbors(&ip("1"), 3, 1, false), Err(Error::BudgetTooLarge(3))));
        assert!(enumerate_neighbors(&ip("1"), 3, 1, true).is_ok());
    }

    #[test]
    fn nearest_examples() {
        let r = nearest_squarefree(&ip("x^3"), 1, 3, false).unwrap();
        assert_eq!(r.found.unwrap(), Found { g: ip("x^3 + 1"), distance: 1 });
        let f = turan15();
        let r1 = nearest_squarefree(&f, 1, 15, false).unwrap();
        assert!(r1.found.is_none());
        let r2 = nearest_squarefree(&f, 2, 15, false).unwrap();
        let hit = r2.found.unwrap();
        assert_eq!(hit.distance, 2);
        assert!(is_squarefree_z(&hit.g).unwrap());
    }

    #[test]
    fn tail_construction() {
        assert_eq!(thm13_construct(&ip("x^3"), 4).unwrap(), ip("x^4 + x^3 + 1"));
        // L(2x + 1) = 3, so n = 3 is too small for x^2 + x
        assert!(thm13_construct(&ip("x^2 + x"), 3).is_err());
        assert_eq!(thm13_construct(&ip("x^2 + x"), 4).unwrap(), ip("x^4 + x^2 + x"));
        assert!(matches!(
            thm13_construct(&ip("x^3"), 3),
            Err(Error::TailExponentTooSmall { n: 3, .. })
        ));
    }

    #[test]
    fn minimal_exponents() {
        assert_eq!(minimal_tail_exponent(&ip("x^3"), 10).unwrap(), 1);
        assert_eq!(minimal_tail_exponent(&ip("x^2 + x"), 10).unwrap(), 1);
        assert!(minimal_tail_exponent(&IntPoly::zero(), 3).is_err());
    }

    #[test]
    fn bound_pieces() {
        for d in 3..2000 {
            assert!(log_ratio_cubed(d as f64) > 20.0, "d = {d}");
        }
        let b: f64 = thm14_bound(3, 3).unwrap();
        assert!(b > 2.2 * 3.0 * 20.0 * 1.09);
        assert!(thm14_bound::<f64>(10, 3).unwrap() < thm14_bound::<f64>(10, 4).unwrap());
        assert!(thm14_bound::<f64>(2, 3).is_err());
    }

    #[test]
    fn window_shape() {
        let f = ip("x^3 + x + 1");
        let w = thm14_window(&f).unwrap();
        assert_eq!(w.phi_d, 5);
        assert_eq!(w.len(), 6);
        let df = 3.0f64;
        let b = df + 2.0 * df * log_ratio_cubed(df) * 3f64.ln();
        assert_eq!(w.m, b.floor() as u64);
        match thm14_construct(&f).unwrap() {
            Thm14Outcome::Window { n, g, .. } => {
                assert!(w.candidates().contains(&n));
                assert_eq!(g, f.with_term(BigInt::one(), n as usize));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn length_two_fallbacks() {
        for s in ["x^5 + x", "x^5 - x", "-x^4 + x", "x^4 + 1", "-x^6 - 1", "x^3 - 1"] {
            let f = ip(s);
            let Thm14Outcome::LengthTwo { g } = thm14_construct(&f).unwrap() else {
                panic!("{s}")
            };
            assert!(is_squarefree_z(&g).unwrap(), "{s} -> {g}");
            assert_eq!(g.deg(), f.deg());
            assert_eq!(g.leading_coeff(), f.leading_coeff());
            assert_eq!(length(&(&g - &f)), BigInt::from(1), "{s} -> {g}");
        }
        // x^2 | x^3, so the base is x^3 + 1
        let Thm14Outcome::LengthTwo { g } = thm14_construct(&ip("x^3")).unwrap() else { panic!() };
        assert_eq!(g, ip("x^3 + 2"));
    }
}
