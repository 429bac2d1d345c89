//! Self-contained, re-checkable claims about square-freeness.
//!
//! A certificate stores its polynomials as text so that a report can be
//! validated later without rerunning the search that produced it.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{self, FpPoly};
use crate::gf2::{self, Gf2Poly};
use crate::text::{format_poly, parse_int};
use crate::zpoly;
use crate::IntPoly;

/// Coefficient ring of a certificate: `Z`, `F2` or `F<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Ring {
    Z,
    F2,
    Fp(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => f.write_str("Z"),
            Ring::F2 => f.write_str("F2"),
            Ring::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown ring {s:?}"));
        match s {
            "Z" => Ok(Ring::Z),
            "F2" => Ok(Ring::F2),
            _ => {
                let p: u64 = s.strip_prefix('F').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if !fp::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                Ok(if p == 2 { Ring::F2 } else { Ring::Fp(p) })
            }
        }
    }
}

impl From<Ring> for String {
    fn from(r: Ring) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for Ring {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `witness^2` divides `poly` and `witness` is not constant.
    SquareDivisor { ring: Ring, poly: String, witness: String },
    /// `poly` has no repeated factor.
    Squarefree { ring: Ring, poly: String },
}

/// Text used for a polynomial inside a certificate.
pub fn int_text(f: &IntPoly) -> String {
    format_poly(f)
}

pub fn gf2_text(f: &Gf2Poly) -> String {
    f.to_string()
}

pub fn fp_text(f: &FpPoly) -> String {
    f.to_string()
}

impl Certificate {
    pub fn ring(&self) -> Ring {
        match self {
            Certificate::SquareDivisor { ring, .. } | Certificate::Squarefree { ring, .. } => *ring,
        }
    }

    pub fn poly(&self) -> &str {
        match self {
            Certificate::SquareDivisor { poly, .. } | Certificate::Squarefree { poly, .. } => poly,
        }
    }

    /// The square `witness^2` in the certificate's text form, for square divisors.
    pub fn witness_square(&self) -> Result<Option<String>> {
        let Certificate::SquareDivisor { ring, witness, .. } = self else {
            return Ok(None);
        };
        Ok(Some(match ring {
            Ring::Z => {
                let w = parse_int(witness)?;
                int_text(&(&w * &w))
            }
            Ring::F2 => gf2_text(&Gf2Poly::parse_any(witness)?.square()),
            Ring::Fp(p) => {
                let w = FpPoly::parse(*p, witness)?;
                fp_text(&w.mul(&w))
            }
        }))
    }

    pub fn square_divisor_z(f: &IntPoly, w: &IntPoly) -> Self {
        Certificate::SquareDivisor { ring: Ring::Z, poly: int_text(f), witness: int_text(w) }
    }

    pub fn square_divisor_2(f: &Gf2Poly, w: &Gf2Poly) -> Self {
        Certificate::SquareDivisor { ring: Ring::F2, poly: gf2_text(f), witness: gf2_text(w) }
    }

    /// Over `F_2` this produces an `F2` certificate in hex form.
    pub fn square_divisor_p(f: &FpPoly, w: &FpPoly) -> Self {
        if f.modulus() == 2 {
            let conv = |g: &FpPoly| Gf2Poly::from_fp(g).expect("modulus 2");
            return Self::square_divisor_2(&conv(f), &conv(w));
        }
        Certificate::SquareDivisor { ring: Ring::Fp(f.modulus()), poly: fp_text(f), witness: fp_text(w) }
    }

    /// Certificate for the square-freeness status of an integer polynomial.
    pub fn for_int(f: &IntPoly) -> Result<Self> {
        Ok(match zpoly::square_witness(f)? {
            Some(w) => Self::square_divisor_z(f, &w),
            None => Certificate::Squarefree { ring: Ring::Z, poly: int_text(f) },
        })
    }

    pub fn for_gf2(f: &Gf2Poly) -> Result<Self> {
        Ok(match gf2::square_witness_2(f)? {
            Some(w) => Self::square_divisor_2(f, &w),
            None => Certificate::Squarefree { ring: Ring::F2, poly: gf2_text(f) },
        })
    }

    pub fn for_fp(f: &FpPoly) -> Result<Self> {
        if f.modulus() == 2 {
            return Self::for_gf2(&Gf2Poly::from_fp(f)?);
        }
        Ok(match fp::square_witness_p(f)? {
            Some(w) => Self::square_divisor_p(f, &w),
            None => Certificate::Squarefree { ring: Ring::Fp(f.modulus()), poly: fp_text(f) },
        })
    }

    /// Re-verify the claim from the stored text. `Ok(false)` means the
    /// certificate parses but its claim is wrong.
    pub fn recheck(&self) -> Result<bool> {
        match self {
            Certificate::SquareDivisor { ring, poly, witness } => match ring {
                Ring::Z => {
                    let (f, w) = (parse_int(poly)?, parse_int(witness)?);
                    Ok(!f.is_zero() && w.deg() >= 1 && zpoly::exact_div(&f, &(&w * &w)).is_some())
                }
                Ring::F2 => {
                    let (f, w) = (Gf2Poly::parse_any(poly)?, Gf2Poly::parse_any(witness)?);
                    Ok(!f.is_zero() && !w.is_zero() && w.deg() >= 1 && w.square().divides(&f))
                }
                Ring::Fp(p) => {
                    let (f, w) = (FpPoly::parse(*p, poly)?, FpPoly::parse(*p, witness)?);
                    Ok(!f.is_zero() && !w.is_zero() && w.deg() >= 1 && w.mul(&w).divides(&f))
                }
            },
            Certificate::Squarefree { ring, poly } => match ring {
                Ring::Z => {
                    let f = parse_int(poly)?;
                    if f.is_zero() {
                        return Ok(false);
                    }
                    if f.deg() == 0 {
                        return Ok(true);
                    }
                    Ok(!zpoly::resultant(&f, &f.derivative())?.is_zero())
                }
                Ring::F2 => {
                    let f = Gf2Poly::parse_any(poly)?;
                    gf2::is_squarefree_classical(&f).or(Ok(false))
                }
                Ring::Fp(p) => {
                    let f = FpPoly::parse(*p, poly)?;
                    if f.is_zero() {
                        return Ok(false);
                    }
                    if f.deg() == 0 {
                        return Ok(true);
                    }
                    let d = f.derivative();
                    Ok(!d.is_zero() && f.gcd(&d).deg() == 0)
                }
            },
        }
    }
}
