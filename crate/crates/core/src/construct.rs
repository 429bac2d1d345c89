//! Polynomials whose every length-1 neighbour fails to be square-free.
//!
//! A polynomial `f = x^2 h` can only move to a square-free polynomial at
//! length distance 1 through `f + 1`, `f - 1`, `f + x` or `f - x`, because
//! every other unit perturbation `+-x^k` (`k >= 2`) keeps the double root at
//! zero. Prescribing a square divisor for each of those four neighbours is a
//! polynomial Chinese remainder problem; this module solves it, makes the
//! solution integral, and verifies the resulting hard instances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::parse_int;
use crate::zpoly::{self, resultant, square_witness, to_int, to_rat};
use crate::{FpPoly, IntPoly, RatPoly};

/// The degree-15 hard instance `15552x^15 + ... + 36x^2`.
pub const TURAN15: &str = "15552*x^15 + 5184*x^14 + 5616*x^13 + 8784*x^12 + 13908*x^11 \
    + 13756*x^10 + 96413*x^9 - 18929*x^8 - 57229*x^7 + 6851*x^6 \
    + 9435*x^5 - 932*x^4 - 346*x^3 + 36*x^2";

/// Degree-15 instance built from the resultant-one base list `x, x-1, 2x-1, ...`.
pub const REFEREE15: &str = "125200*x^15 - 325540*x^14 - 726388*x^13 + 2529575*x^12 + 552645*x^11 \
    - 6814352*x^10 + 3701398*x^9 + 6619994*x^8 - 7934278*x^7 + 313994*x^6 \
    + 3958516*x^5 - 2649357*x^4 + 723237*x^3 - 74643*x^2";

pub fn turan15() -> IntPoly {
    parse_int(TURAN15).expect("constant parses")
}

pub fn referee15() -> IntPoly {
    parse_int(REFEREE15).expect("constant parses")
}

/// Residue/modulus pairs over `Q[x]`, moduli pairwise coprime.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceSystem {
    entries: Vec<(RatPoly, IntPoly)>,
}

impl CongruenceSystem {
    pub fn new(entries: Vec<(RatPoly, IntPoly)>) -> Result<Self> {
        for (i, (r, m)) in entries.iter().enumerate() {
            if m.is_zero() || m.deg() == 0 {
                return Err(Error::InvalidParameter(format!("modulus {i} must have degree >= 1")));
            }
            if !r.is_zero() && r.deg() >= m.deg() {
                return Err(Error::ResidueTooLarge {
                    index: i,
                    residue_degree: r.deg(),
                    modulus_degree: m.deg(),
                });
            }
        }
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let g = to_rat(&entries[i].1).gcd(&to_rat(&entries[j].1));
                if g.deg() > 0 {
                    return Err(Error::ModuliNotCoprime(i, j));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Residues given as integer polynomials.
    pub fn from_int(entries: Vec<(IntPoly, IntPoly)>) -> Result<Self> {
        Self::new(entries.into_iter().map(|(r, m)| (to_rat(&r), m)).collect())
    }

    pub fn entries(&self) -> &[(RatPoly, IntPoly)] {
        &self.entries
    }

    /// `f = 0 mod x^2, -1 mod (2x+1)^2, x mod (2x-1)^2, 1 mod (6x+1)^2, -x mod (6x-1)^2`.
    pub fn turan15() -> Self {
        let sq = |s: &str| parse_int(s).unwrap().pow(2);
        Self::from_int(vec![
            (IntPoly::zero(), sq("x")),
            (parse_int("-1").unwrap(), sq("2*x + 1")),
            (parse_int("x").unwrap(), sq("2*x - 1")),
            (parse_int("1").unwrap(), sq("6*x + 1")),
            (parse_int("-x").unwrap(), sq("6*x - 1")),
        ])
        .expect("valid system")
    }

    /// The system over the squared resultant-one list `x, x-1, 2x-1, x^2+x-1, x^3-x^2-2x+1`.
    pub fn referee15() -> Self {
        let bases = referee_bases(1);
        Self::squared_bases(&bases, &referee_residues()).expect("valid system")
    }

    /// Moduli `b^2` for each base, with the given residues.
    pub fn squared_bases(bases: &[IntPoly], residues: &[IntPoly]) -> Result<Self> {
        if bases.len() != residues.len() {
            return Err(Error::InvalidParameter("one residue per base required".into()));
        }
        Self::from_int(
            residues
                .iter()
                .cloned()
                .zip(bases.iter().map(|b| b.pow(2)))
                .collect(),
        )
    }
}

fn referee_residues() -> Vec<IntPoly> {
    ["0", "1", "-1", "x", "-x"].iter().map(|s| parse_int(s).unwrap()).collect()
}

/// `[x, kx-1, 2kx-1, k^2x^2+kx-1, k^3x^3-k^2x^2-2kx+1]`; `k = 1` is the printed list.
pub fn referee_bases(k: i64) -> Vec<IntPoly> {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let k3 = &k2 * &k;
    let one = BigInt::one();
    vec![
        IntPoly::x(),
        IntPoly::new(vec![-one.clone(), k.clone()]),
        IntPoly::new(vec![-one.clone(), BigInt::from(2) * &k]),
        IntPoly::new(vec![-one.clone(), k.clone(), k2.clone()]),
        IntPoly::new(vec![one, BigInt::from(-2) * &k, -k2, k3]),
    ]
}

/// The unique solution of degree below `sum deg(m_i)`, by iterated pairing.
pub fn crt_solve(system: &CongruenceSystem) -> Result<RatPoly> {
    let mut entries = system.entries.iter();
    let Some((r0, m0)) = entries.next() else {
        return Ok(RatPoly::zero());
    };
    let mut acc_r = r0.clone();
    let mut acc_m = to_rat(m0);
    for (r, m) in entries {
        let m = to_rat(m);
        let (g, s, _) = acc_m.ext_gcd(&m);
        if g.deg() > 0 {
            return Err(Error::InvalidParameter("moduli not coprime".into()));
        }
        // acc_r + acc_m * s * (r - acc_r) agrees with acc_r mod acc_m, and with r
        // mod m because s * acc_m = 1 mod m.
        let lift = &(&acc_m * &s) * &(r - &acc_r);
        acc_m = &acc_m * &m;
        acc_r = (&acc_r + &lift).rem(&acc_m);
    }
    Ok(acc_r)
}

pub fn moduli_product(system: &CongruenceSystem) -> IntPoly {
    system
        .entries
        .iter()
        .fold(IntPoly::one(), |acc, (_, m)| &acc * m)
}

/// Output of [`integerize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Integerization {
    /// `cosets[i]` is the fractional part every choice of `a_i` must have.
    pub cosets: Vec<BigRational>,
    /// `f0 + h * f1` with every `a_i` at its representative in `[0, 1)`.
    pub witness: IntPoly,
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Choose `f1 = a_0 + ... + a_c x^c` so that `f0 + h f1` has integer coefficients.
///
/// Coefficients are matched from the lowest power of `h` upward: the
/// trailing coefficient of `h` is a unit, so each `a_i` is pinned modulo the
/// integers by the already-fixed `a_0, ..., a_{i-1}`.
pub fn integerize(f0: &RatPoly, h: &IntPoly, correction_degree: usize) -> Result<Integerization> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial("integerize"));
    }
    let t = h.trailing_power();
    let ht = h.coeff(t);
    if !ht.abs().is_one() {
        return Err(Error::NonUnitTrailing(ht.to_string()));
    }
    let ht = BigRational::from_integer(ht);
    let hr = to_rat(h);
    let mut cosets: Vec<BigRational> = Vec::with_capacity(correction_degree + 1);
    for i in 0..=correction_degree {
        let mut acc = f0.coeff(t + i);
        for (j, a) in cosets.iter().enumerate() {
            acc += hr.coeff(t + i - j) * a;
        }
        // ht * a_i + acc must be an integer; ht = +-1 is its own inverse
        cosets.push(frac(&(-(&ht * &acc))));
    }
    let f1 = RatPoly::new(cosets.clone());
    let candidate = f0 + &(&hr * &f1);
    match to_int(&candidate) {
        Some(witness) => Ok(Integerization { cosets, witness }),
        None => Err(Error::CorrectionTooSmall(correction_degree)),
    }
}

/// Check that every pair of distinct bases has resultant `+-1`.
pub fn validate_resultant_one_list(bases: &[IntPoly]) -> Result<()> {
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            let r = resultant(&bases[i], &bases[j])?;
            if !r.abs().is_one() {
                return Err(Error::ResultantNotUnit(i, j, r.to_string()));
            }
        }
    }
    Ok(())
}

/// Check that every pair of distinct bases generates the unit ideal of `Z[x]`:
/// the resultant is nonzero and the pair stays coprime modulo each prime
/// dividing it. Weaker than resultant `+-1`, and still enough for an
/// integral CRT solution.
pub fn validate_comaximal_list(bases: &[IntPoly]) -> Result<()> {
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            let r = resultant(&bases[i], &bases[j])?;
            if r.is_zero() {
                return Err(Error::ModuliNotCoprime(i, j));
            }
            let r = u64::try_from(r.abs())
                .map_err(|_| Error::TooLarge("resultant".into(), r.to_string()))?;
            for p in prime_divisors(r) {
                let a = FpPoly::from_int(p, &bases[i])?;
                let b = FpPoly::from_int(p, &bases[j])?;
                if a.gcd(&b).deg() > 0 || (a.is_zero() && b.is_zero()) {
                    return Err(Error::ModuliNotCoprime(i, j));
                }
            }
        }
    }
    Ok(())
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
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

const LIST_SEARCH_HEIGHT: i64 = 3;

/// Candidates of degree `d`, height at most 3, positive leading coefficient,
/// in lexicographic order of `(a_d, a_{d-1}, ..., a_0)`.
fn candidates_of_degree(d: usize) -> impl Iterator<Item = IntPoly> {
    let h = LIST_SEARCH_HEIGHT;
    let width = (2 * h + 1) as u64;
    let total = (h as u64) * width.pow(d as u32);
    (0..total).map(move |mut idx| {
        // little-endian digits, most significant digit is the leading coefficient
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for c in coeffs.iter_mut().take(d) {
            *c = BigInt::from((idx % width) as i64 - h);
            idx /= width;
        }
        coeffs[d] = BigInt::from(idx as i64 + 1);
        IntPoly::new(coeffs)
    })
}

/// Extend `seed` to `count` bases, each new base having resultant `+-1` with
/// every earlier one. Candidates run by increasing degree, then
/// lexicographically within a degree.
pub fn resultant_one_list_search(seed: &[IntPoly], count: usize, degree_cap: usize) -> Result<Vec<IntPoly>> {
    validate_resultant_one_list(seed)?;
    let mut list = seed.to_vec();
    for d in 1..=degree_cap {
        if list.len() >= count {
            break;
        }
        for cand in candidates_of_degree(d) {
            if list.contains(&cand) {
                continue;
            }
            let ok = list
                .iter()
                .all(|b| resultant(b, &cand).map(|r| r.abs().is_one()).unwrap_or(false));
            if ok {
                list.push(cand);
                if list.len() >= count {
                    break;
                }
            }
        }
    }
    if list.len() < count {
        return Err(Error::SearchExhausted(degree_cap));
    }
    Ok(list)
}

/// `(2x+1)^2 (2x-1)^2 (6x+1)^2 (6x-1)^2`, the moduli product of the degree-15
/// instance with the `x^2` removed.
pub fn turan15_multiplier() -> IntPoly {
    let h = moduli_product(&CongruenceSystem::turan15());
    zpoly::exact_div(&h, &IntPoly::monomial(BigInt::one(), 2)).expect("x^2 divides")
}

/// `(x-1)^2 (2x-1)^2 (x^2+x-1)^2 (x^3-x^2-2x+1)^2` for the referee instance.
pub fn referee15_multiplier() -> IntPoly {
    let h = moduli_product(&CongruenceSystem::referee15());
    zpoly::exact_div(&h, &IntPoly::monomial(BigInt::one(), 2)).expect("x^2 divides")
}

/// `base + k * multiplier * x^(d - deg multiplier)`, a degree-`d` member of the
/// family built on a degree-15 hard instance. `d = 15` returns `base`.
pub fn hard_family(d: usize, k: i64, base: &IntPoly, multiplier: &IntPoly) -> Result<IntPoly> {
    if d < 15 {
        return Err(Error::InvalidParameter(format!("degree {d} below 15")));
    }
    if d == 15 {
        return Ok(base.clone());
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be nonzero".into()));
    }
    if d <= base.deg() || d < multiplier.deg() {
        return Err(Error::InvalidParameter(format!("degree {d} too small for this base")));
    }
    let tail = multiplier.scale(&BigInt::from(k)).shift(d - multiplier.deg());
    Ok(base + &tail)
}

/// One neighbour `f + perturbation` together with `w`, `w^2 | f + perturbation`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocker {
    #[serde(with = "crate::text::int_poly_serde")]
    pub perturbation: IntPoly,
    #[serde(with = "crate::text::int_poly_serde")]
    pub witness: IntPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardInstanceReport {
    #[serde(with = "crate::text::int_poly_serde")]
    pub f: IntPoly,
    pub blockers: Vec<Blocker>,
}

/// Why a polynomial is not a hard instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HardInstanceRefutation {
    /// `f + perturbation` is square-free.
    SquarefreeNeighbor {
        #[serde(with = "crate::text::int_poly_serde")]
        perturbation: IntPoly,
        #[serde(with = "crate::text::int_poly_serde")]
        neighbor: IntPoly,
    },
    /// `x^2` does not divide `f` and no square-free neighbour showed up in the
    /// scanned range either, so the instance is neither certified nor refuted.
    NoDoubleRootAtZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HardInstanceVerdict {
    Verified(HardInstanceReport),
    Refuted(HardInstanceRefutation),
}

fn unit_perturbations() -> Vec<IntPoly> {
    ["1", "-1", "x", "-x"].iter().map(|s| parse_int(s).unwrap()).collect()
}

/// Certify that no `g` with `L(f - g) <= 1` is square-free.
///
/// Requires `x^2 | f` (which blocks `f` itself and every `f +- x^k`, `k >= 2`)
/// and a square witness for each of `f + 1`, `f - 1`, `f + x`, `f - x`. In
/// addition `f +- x^k` for `2 <= k <= k_cap` are checked directly.
pub fn verify_hard_instance(f: &IntPoly, k_cap: usize) -> Result<HardInstanceVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("verify_hard_instance"));
    }
    let mut perturbations = vec![IntPoly::zero()];
    perturbations.extend(unit_perturbations());
    for k in 2..=k_cap {
        perturbations.push(IntPoly::monomial(BigInt::one(), k));
        perturbations.push(IntPoly::monomial(-BigInt::one(), k));
    }
    let double_root = f.trailing_power() >= 2;
    let mut blockers = Vec::with_capacity(perturbations.len());
    for p in perturbations {
        let g = f + &p;
        if g.is_zero() {
            // the zero polynomial is not square-free; nothing to certify
            continue;
        }
        match square_witness(&g)? {
            Some(w) => blockers.push(Blocker { perturbation: p, witness: w }),
            None => {
                return Ok(HardInstanceVerdict::Refuted(HardInstanceRefutation::SquarefreeNeighbor {
                    perturbation: p,
                    neighbor: g,
                }))
            }
        }
    }
    if !double_root {
        return Ok(HardInstanceVerdict::Refuted(HardInstanceRefutation::NoDoubleRootAtZero));
    }
    Ok(HardInstanceVerdict::Verified(HardInstanceReport { f: f.clone(), blockers }))
}

/// Smallest `|t| <= floor(d/2)` with `f + t` square-free, positive `t` first on ties.
pub fn squarefree_shift(f: &IntPoly) -> Result<i64> {
    if f.is_zero() || f.deg() == 0 {
        return Err(Error::InvalidParameter("squarefree_shift needs degree >= 1".into()));
    }
    let half = (f.deg() / 2) as i64;
    for m in 0..=half {
        for t in if m == 0 { vec![0] } else { vec![m, -m] } {
            if zpoly::is_squarefree_z(&f.with_term(BigInt::from(t), 0))? {
                return Ok(t);
            }
        }
    }
    unreachable!("some shift with |t| <= deg/2 is square-free")
}

/// A coset representative as `num/den` (or an integer).
pub fn coset_text(q: &BigRational) -> String {
    let (n, d) = (q.numer(), q.denom());
    if d.is_one() {
        n.to_string()
    } else {
        format!("{}/{}", n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{format_poly, parse_rat};
    use crate::zpoly::root_multiplicity;

    fn ip(s: &str) -> IntPoly {
        parse_int(s).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn crt_interpolates() {
        let sys = CongruenceSystem::from_int(vec![(ip("0"), ip("x")), (ip("1"), ip("x - 1"))]).unwrap();
        assert_eq!(crt_solve(&sys).unwrap(), to_rat(&ip("x")));
    }

    #[test]
    fn crt_rejects_shared_factor() {
        let err = CongruenceSystem::from_int(vec![
            (ip("0"), ip("x^2")),
            (ip("1"), ip("x - 1")),
            (ip("0"), ip("x^2 - x")),
        ])
        .unwrap_err();
        assert_eq!(err, Error::ModuliNotCoprime(0, 2));
        assert!(matches!(
            CongruenceSystem::from_int(vec![(ip("x"), ip("x - 1"))]),
            Err(Error::ResidueTooLarge { .. })
        ));
    }

    #[test]
    fn turan_system_solution() {
        let f0 = crt_solve(&CongruenceSystem::turan15()).unwrap();
        let expected = parse_rat(
            "106515*x^9 - 8991*x^8 - 236133/4*x^7 + 20385/4*x^6 + 152209/16*x^5 \
             - 13701/16*x^4 - 22207/64*x^3 + 2243/64*x^2",
        )
        .unwrap();
        assert_eq!(f0, expected);
    }

    #[test]
    fn moduli_products() {
        assert_eq!(
            moduli_product(&CongruenceSystem::turan15()),
            ip("20736*x^10 - 11520*x^8 + 1888*x^6 - 80*x^4 + x^2")
        );
        let single = CongruenceSystem::from_int(vec![(ip("0"), ip("x^2"))]).unwrap();
        assert_eq!(moduli_product(&single), ip("x^2"));
        let two = CongruenceSystem::from_int(vec![(ip("0"), ip("x")), (ip("0"), ip("x - 1"))]).unwrap();
        assert_eq!(moduli_product(&two), ip("x^2 - x"));
    }

    #[test]
    fn integerize_recovers_cosets() {
        let sys = CongruenceSystem::turan15();
        let f0 = crt_solve(&sys).unwrap();
        let h = moduli_product(&sys);
        let out = integerize(&f0, &h, 5).unwrap();
        let expected = [q(61, 64), q(63, 64), q(9, 16), q(11, 16), q(1, 4), q(3, 4)];
        assert_eq!(out.cosets, expected);
        assert_eq!(out.witness, turan15());
        assert!(matches!(integerize(&f0, &h, 2), Err(Error::CorrectionTooSmall(2))));
        assert!(matches!(integerize(&f0, &ip("2*x^2 + x^3"), 5), Err(Error::NonUnitTrailing(_))));
    }

    #[test]
    fn integerize_integral_input() {
        let f0 = to_rat(&ip("3*x^2 - 7"));
        let out = integerize(&f0, &ip("x^2 + 5*x^3"), 0).unwrap();
        assert_eq!(out.cosets, vec![BigRational::zero()]);
        assert_eq!(out.witness, ip("3*x^2 - 7"));
    }

    #[test]
    fn referee_system_solution() {
        let f = crt_solve(&CongruenceSystem::referee15()).unwrap();
        assert_eq!(format_poly(&f), format_poly(&referee15()));
    }

    #[test]
    fn resultant_lists() {
        validate_resultant_one_list(&referee_bases(1)).unwrap();
        validate_resultant_one_list(&referee_bases(-1)).unwrap();
        // Res(kx - 1, 2kx - 1) = k, yet the pairs stay comaximal and the solution integral
        assert_eq!(
            validate_resultant_one_list(&referee_bases(2)),
            Err(Error::ResultantNotUnit(1, 2, "2".into()))
        );
        for k in [2, -1, 3, -5] {
            validate_comaximal_list(&referee_bases(k)).unwrap();
            let sys = CongruenceSystem::squared_bases(&referee_bases(k), &referee_residues()).unwrap();
            let f = to_int(&crt_solve(&sys).unwrap()).expect("integral solution");
            assert_eq!(f.deg(), 15);
            assert!(matches!(verify_hard_instance(&f, 4).unwrap(), HardInstanceVerdict::Verified(_)));
        }
        assert!(validate_comaximal_list(&[ip("x"), ip("x + 2")]).is_err());
        assert!(validate_resultant_one_list(&[ip("x"), ip("x")]).is_err());
        let list = resultant_one_list_search(&[ip("x")], 5, 3).unwrap();
        assert_eq!(list.len(), 5);
        validate_resultant_one_list(&list).unwrap();
        assert_eq!(&list[..3], &[ip("x"), ip("x - 1"), ip("2*x - 1")]);
        assert!(matches!(
            resultant_one_list_search(&[ip("x")], 40, 1),
            Err(Error::SearchExhausted(1))
        ));
    }

    #[test]
    fn family_members() {
        let base = turan15();
        let m = turan15_multiplier();
        assert_eq!(hard_family(15, 7, &base, &m).unwrap(), base);
        let g = hard_family(16, 1, &base, &m).unwrap();
        assert_eq!(g.deg(), 16);
        assert_eq!(&g - &base, m.shift(8));
        assert!(hard_family(16, 0, &base, &m).is_err());
        assert!(hard_family(14, 1, &base, &m).is_err());
    }

    #[test]
    fn verifies_turan15() {
        let f = turan15();
        let HardInstanceVerdict::Verified(report) = verify_hard_instance(&f, 4).unwrap() else {
            panic!("expected a hard instance");
        };
        let find = |p: &str| {
            report
                .blockers
                .iter()
                .find(|b| b.perturbation == ip(p))
                .map(|b| b.witness.clone())
                .unwrap()
        };
        assert_eq!(find("0"), ip("x"));
        assert_eq!(find("-x"), ip("2*x - 1"));
        assert_eq!(find("1"), ip("2*x + 1"));
        assert_eq!(find("x"), ip("6*x - 1"));
        assert_eq!(find("-1"), ip("6*x + 1"));
        assert_eq!(root_multiplicity(&f, &BigRational::zero()).unwrap(), 2);
        assert!(root_multiplicity(&(&f - &ip("x")), &q(1, 2)).unwrap() >= 2);
    }

    #[test]
    fn refutes_cube() {
        match verify_hard_instance(&ip("x^3"), 3).unwrap() {
            HardInstanceVerdict::Refuted(HardInstanceRefutation::SquarefreeNeighbor { neighbor, .. }) => {
                assert_eq!(neighbor, ip("x^3 + 1"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shifts() {
        assert_eq!(squarefree_shift(&ip("x^3")).unwrap(), 1);
        assert_eq!(squarefree_shift(&ip("x^2 + x")).unwrap(), 0);
        assert_eq!(squarefree_shift(&ip("x^2")).unwrap(), 1);
        assert!(squarefree_shift(&ip("5")).is_err());
    }
}
