//! Single-word GF(2)[x] arithmetic: bit `i` of a `u64` is the coefficient of `x^i`.
//! Used by the exhaustive searches, where every polynomial has degree below 64.

/// Degree of a nonzero word polynomial.
#[inline]
pub fn deg(a: u64) -> u32 {
    debug_assert!(a != 0);
    63 - a.leading_zeros()
}

#[inline]
pub fn rem(mut a: u64, b: u64) -> u64 {
    debug_assert!(b != 0);
    let db = deg(b);
    while a != 0 {
        let da = deg(a);
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

#[inline]
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Carry-less product of two words.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    let (a, mut b) = (a as u128, b);
    let mut acc = 0u128;
    while b != 0 {
        let i = b.trailing_zeros();
        acc ^= a << i;
        b &= b - 1;
    }
    acc
}

/// Even-indexed bits packed together: `f_e` of `f = f_e^2 + x f_o^2`.
#[inline]
pub fn squeeze(x: u64) -> u64 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF
}

/// Inverse of [`squeeze`] on the low 32 bits: the square of a polynomial.
#[inline]
pub fn spread(x: u64) -> u64 {
    let mut x = x & 0x0000_0000_FFFF_FFFF;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

/// `(f_e, f_o)`.
#[inline]
pub fn split(f: u64) -> (u64, u64) {
    (squeeze(f), squeeze(f >> 1))
}

#[inline]
pub fn squarefree(f: u64) -> bool {
    let (e, o) = split(f);
    gcd(e, o) == 1
}
