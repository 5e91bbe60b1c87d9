//! Polynomials over GF(2) packed into a machine word.
//!
//! Bit `i` holds the coefficient of `x^i`, so `0b1011` is `x^3 + x + 1`.
//! Degrees up to 63 are supported, which covers every modulus a
//! [`Field`](super::Field) can use.

use std::fmt;

use super::FieldError;

/// A polynomial over GF(2) of degree at most 63.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BinaryPoly(pub u64);

impl BinaryPoly {
    pub const ZERO: BinaryPoly = BinaryPoly(0);
    pub const ONE: BinaryPoly = BinaryPoly(1);
    pub const X: BinaryPoly = BinaryPoly(2);

    /// Degree of the polynomial, `None` for the zero polynomial.
    pub fn degree(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros())
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Parses the hex form used in code-spec documents (`"b"` is `x^3 + x + 1`).
    pub fn from_hex(s: &str) -> Result<Self, FieldError> {
        let trimmed = s.trim();
        let digits = trimmed
            .strip_prefix("0x")
            .or_else(|| trimmed.strip_prefix("0X"))
            .unwrap_or(trimmed);
        u64::from_str_radix(digits, 16)
            .map(BinaryPoly)
            .map_err(|_| FieldError::BadHex(s.to_string()))
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    /// Remainder of `self` divided by `modulus`.
    pub fn reduce(self, modulus: BinaryPoly) -> BinaryPoly {
        let Some(dm) = modulus.degree() else {
            panic!("division by the zero polynomial");
        };
        let mut r = self.0;
        while let Some(dr) = BinaryPoly(r).degree() {
            if dr < dm {
                break;
            }
            r ^= modulus.0 << (dr - dm);
        }
        BinaryPoly(r)
    }

    pub fn gcd(self, other: BinaryPoly) -> BinaryPoly {
        let (mut a, mut b) = (self, other);
        while b.0 != 0 {
            let r = a.reduce(b);
            a = b;
            b = r;
        }
        a
    }

    /// `self * other mod modulus`; both inputs must already be reduced.
    pub fn mul_mod(self, other: BinaryPoly, modulus: BinaryPoly) -> BinaryPoly {
        let wide = clmul(self.0, other.0);
        BinaryPoly(reduce_wide(wide, modulus))
    }
}

impl fmt::Debug for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPoly({self})")
    }
}

impl fmt::Display for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..64).rev() {
            if self.0 >> i & 1 == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Carry-less product of two 64-bit polynomials.
pub(crate) fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut a = a as u128;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

pub(crate) fn reduce_wide(mut r: u128, modulus: BinaryPoly) -> u64 {
    let dm = modulus.degree().expect("nonzero modulus");
    let m = modulus.0 as u128;
    while r != 0 {
        let dr = 127 - r.leading_zeros();
        if dr < dm {
            break;
        }
        r ^= m << (dr - dm);
    }
    r as u64
}

/// Irreducibility over GF(2).
///
/// A polynomial `f` of degree `w` is irreducible iff `gcd(x^(2^i) - x, f) = 1`
/// for every `1 <= i <= w/2`.
pub fn is_irreducible(poly: BinaryPoly) -> bool {
    let Some(w) = poly.degree() else {
        return false;
    };
    if w == 0 {
        return false;
    }
    if w == 1 {
        return true;
    }
    let x = BinaryPoly::X.reduce(poly);
    let mut frob = x;
    for _ in 1..=w / 2 {
        frob = frob.mul_mod(frob, poly);
        let g = poly.gcd(BinaryPoly(frob.0 ^ x.0));
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// The all-ones polynomial `1 + x + ... + x^(p-1)`.
pub fn mp_polynomial(p: u32) -> BinaryPoly {
    assert!((2..=64).contains(&p), "M_p needs 2 <= p <= 64, got {p}");
    if p == 64 {
        BinaryPoly(u64::MAX)
    } else {
        BinaryPoly((1u64 << p) - 1)
    }
}
