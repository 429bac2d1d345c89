//! Integer polynomial machinery: length, height, primitive gcd, resultant and
//! the square-free tests built on them.
//!
//! The algorithms are generic over any signed integer scalar (`BigInt` in
//! practice, `i64` is handy in tests where coefficients stay small).
//! "Square-free" is structural: no `h` with `deg h >= 1` has `h^2 | f`, so
//! integer content such as the 4 in `4x` never disqualifies a polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::poly::{Poly, Scalar};
use crate::{IntPoly, RatPoly};

/// Signed integer coefficient type.
pub trait IntScalar: Scalar + Integer + Signed {}

impl<T: Scalar + Integer + Signed> IntScalar for T {}

/// `L(f)`: sum of absolute values of the coefficients.
pub fn length<T: IntScalar>(f: &Poly<T>) -> T {
    f.coeffs().iter().fold(T::zero(), |acc, c| acc + c.abs())
}

/// `H(f)`: largest absolute coefficient.
pub fn height<T: IntScalar>(f: &Poly<T>) -> T {
    f.coeffs()
        .iter()
        .map(|c| c.abs())
        .fold(T::zero(), |acc, c| if c > acc { c } else { acc })
}

/// Non-negative gcd of the coefficients.
pub fn content<T: IntScalar>(f: &Poly<T>) -> T {
    f.coeffs().iter().fold(T::zero(), |acc, c| acc.gcd(c))
}

/// `f / content(f)` with the sign of `f` kept.
fn divide_content<T: IntScalar>(f: &Poly<T>) -> Poly<T> {
    let c = content(f);
    if c.is_zero() || c.is_one() {
        return f.clone();
    }
    Poly::new(f.coeffs().iter().map(|a| a.clone() / c.clone()).collect())
}

/// Content-free, positive leading coefficient.
pub fn primitive_part<T: IntScalar>(f: &Poly<T>) -> Poly<T> {
    let g = divide_content(f);
    if g.leading_coeff().is_negative() {
        -g
    } else {
        g
    }
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
pub fn pseudo_rem<T: IntScalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    assert!(!b.is_zero(), "pseudo-division by zero");
    let db = b.deg();
    if a.is_zero() || a.deg() < db {
        return a.clone();
    }
    let lb = b.leading_coeff();
    let mut r = a.coeffs().to_vec();
    let mut steps = a.deg() - db + 1;
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let lr = r[top].clone();
        for c in r.iter_mut() {
            *c = c.clone() * lb.clone();
        }
        let shift = top - db;
        for (j, bc) in b.coeffs().iter().enumerate() {
            r[shift + j] = r[shift + j].clone() - lr.clone() * bc.clone();
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        steps -= 1;
    }
    let mut rem = Poly::new(r);
    if steps > 0 {
        let mut m = T::one();
        for _ in 0..steps {
            m = m * lb.clone();
        }
        rem = rem.scale(&m);
    }
    rem
}

/// Exact quotient `f / g` in `Z[x]`, or `None` when `g` does not divide `f`.
pub fn exact_div<T: IntScalar>(f: &Poly<T>, g: &Poly<T>) -> Option<Poly<T>> {
    assert!(!g.is_zero(), "division by zero polynomial");
    if f.is_zero() {
        return Some(Poly::zero());
    }
    if f.deg() < g.deg() {
        return None;
    }
    let dg = g.deg();
    let lg = g.leading_coeff();
    let mut r = f.coeffs().to_vec();
    let mut q = vec![T::zero(); f.deg() - dg + 1];
    for i in (0..q.len()).rev() {
        let top = r[i + dg].clone();
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(&lg);
        if !rem.is_zero() {
            return None;
        }
        for (j, gc) in g.coeffs().iter().enumerate() {
            r[i + j] = r[i + j].clone() - c.clone() * gc.clone();
        }
        q[i] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(Poly::new(q))
    } else {
        None
    }
}

/// Primitive gcd in `Z[x]` of the primitive parts of `f` and `g`.
///
/// Runs the pseudo-remainder sequence, dividing out the content at every step.
/// The result has content 1 and a positive leading coefficient.
pub fn gcd_primitive<T: IntScalar>(f: &Poly<T>, g: &Poly<T>) -> Result<Poly<T>> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomial("gcd_primitive"));
    }
    if f.is_zero() {
        return Ok(primitive_part(g));
    }
    if g.is_zero() {
        return Ok(primitive_part(f));
    }
    let (mut a, mut b) = (divide_content(f), divide_content(g));
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.deg() == 0 {
            return Ok(Poly::one());
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = divide_content(&r);
    }
    Ok(primitive_part(&a))
}

fn pow_int<T: IntScalar>(base: &T, e: usize) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

/// Resultant of two nonzero polynomials by the subresultant algorithm.
pub fn resultant<T: IntScalar>(f: &Poly<T>, g: &Poly<T>) -> Result<T> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial("resultant"));
    }
    if f.deg() == 0 {
        return Ok(pow_int(&f.leading_coeff(), g.deg()));
    }
    if g.deg() == 0 {
        return Ok(pow_int(&g.leading_coeff(), f.deg()));
    }
    let (ca, cb) = (content(f), content(g));
    let mut a = divide_content(f);
    let mut b = divide_content(g);
    let t = pow_int(&ca, g.deg()) * pow_int(&cb, f.deg());
    let mut s = T::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
    }
    let (mut gg, mut h) = (T::one(), T::one());
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        if r.is_zero() {
            return Ok(T::zero());
        }
        let div = gg.clone() * pow_int(&h, delta);
        b = Poly::new(r.coeffs().iter().map(|c| c.clone() / div.clone()).collect());
        gg = a.leading_coeff();
        h = if delta == 0 {
            h
        } else {
            pow_int(&gg, delta) / pow_int(&h, delta - 1)
        };
        if b.deg() == 0 {
            break;
        }
    }
    let da = a.deg();
    let h = pow_int(&b.leading_coeff(), da) / pow_int(&h, da - 1);
    Ok(s * t * h)
}

/// Square-free test via `deg gcd(f, f') = 0`. Nonzero constants are square-free.
pub fn is_squarefree_z<T: IntScalar>(f: &Poly<T>) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("is_squarefree_z"));
    }
    if f.deg() == 0 {
        return Ok(true);
    }
    Ok(gcd_primitive(f, &f.derivative())?.deg() == 0)
}

/// Square-free test via the resultant `Res(f, f') != 0`.
pub fn is_squarefree_by_resultant<T: IntScalar>(f: &Poly<T>) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("is_squarefree_by_resultant"));
    }
    if f.deg() == 0 {
        return Ok(true);
    }
    Ok(!resultant(f, &f.derivative())?.is_zero())
}

/// A primitive `w` with `deg w >= 1` and `w^2 | f`, or `None` when `f` is
/// square-free. `w` is the radical of `gcd(f, f')`, so every repeated
/// irreducible factor of `f` divides it exactly once.
pub fn square_witness<T: IntScalar>(f: &Poly<T>) -> Result<Option<Poly<T>>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("square_witness"));
    }
    if f.deg() == 0 {
        return Ok(None);
    }
    let g = gcd_primitive(f, &f.derivative())?;
    if g.deg() == 0 {
        return Ok(None);
    }
    let gg = gcd_primitive(&g, &g.derivative())?;
    let rad = exact_div(&g, &gg).expect("gcd divides its argument");
    Ok(Some(primitive_part(&rad)))
}

/// Largest `m` with `(q x - p)^m | f`, where `r = p/q` in lowest terms.
pub fn root_multiplicity(f: &IntPoly, r: &BigRational) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("root_multiplicity"));
    }
    let lin = Poly::linear(r.denom().clone(), -r.numer().clone());
    let mut cur = f.clone();
    let mut m = 0;
    while let Some(q) = exact_div(&cur, &lin) {
        if q.is_zero() {
            break;
        }
        cur = q;
        m += 1;
    }
    Ok(m)
}

pub fn to_rat(f: &IntPoly) -> RatPoly {
    f.map(|c| BigRational::from_integer(c.clone()))
}

/// Integer polynomial from a rational one when every coefficient is integral.
pub fn to_int(f: &RatPoly) -> Option<IntPoly> {
    if f.coeffs().iter().all(|c| c.is_integer()) {
        Some(f.map(|c| c.to_integer()))
    } else {
        None
    }
}

/// Clear denominators and make primitive.
pub fn rat_primitive(f: &RatPoly) -> IntPoly {
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: IntPoly = f.map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer());
    primitive_part(&scaled)
}

const TAIL_PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 1_000_000_007, 998_244_353];

/// Square-free test for the sparse polynomial `x^n + f`.
///
/// With `P = x^n + f`, the combination `n P - x P' = n f - x f'` has degree at
/// most `deg f`, and `gcd(P, P')` divides it. All reductions therefore happen
/// modulo a polynomial of degree `<= deg f`, which keeps tails with `n` in the
/// thousands cheap. Falls back to the dense test when the combination vanishes.
pub fn tail_is_squarefree(f: &IntPoly, n: usize) -> Result<bool> {
    let p = f.with_term(BigInt::one(), n);
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("tail_is_squarefree"));
    }
    let nb = BigInt::from(n);
    let q = &f.scale(&nb) - &f.derivative().shift(1);
    if q.is_zero() || n <= f.deg() + 1 {
        return is_squarefree_z(&p);
    }
    // a square-free reduction of the monic P settles it; the exact path below is the fallback
    if TAIL_PRIMES.iter().any(|&p| crate::fp::tail_squarefree_mod(f, n, p)) {
        return Ok(true);
    }
    let q = to_rat(&primitive_part(&q));
    if q.deg() == 0 {
        return Ok(true);
    }
    let x = RatPoly::x();
    let x_pow = x.pow_mod((n - 1) as u64, &q);
    let fr = to_rat(f);
    let p_mod = (&(&x_pow * &x) + &fr).rem(&q);
    let dp_mod = (&x_pow.scale(&BigRational::from_integer(nb)) + &to_rat(&f.derivative())).rem(&q);
    let g = q.gcd(&p_mod).gcd(&dp_mod);
    Ok(g.deg() == 0)
}
