//! Arithmetic in GF(2^w), `1 <= w <= 63`, with an explicit modulus and a
//! designated generator `alpha`.
//!
//! Elements are packed in the polynomial basis `{1, x, ..., x^(w-1)}`.
//! Fields up to width 16 carry exp/log tables built from a primitive element
//! of the multiplicative group; wider fields multiply by carry-less
//! shift-and-xor followed by reduction.

mod poly;
mod prime;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use poly::{is_irreducible, mp_polynomial, BinaryPoly};
pub use prime::{find_construction_prime, is_prime, is_two_primitive, DEFAULT_PRIME_SEARCH_CAP};

use poly::{clmul, reduce_wide};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field width {0} is outside 1..=63")]
    BadWidth(u32),
    #[error("modulus {modulus} has degree {degree:?}, expected {width}")]
    WrongDegree {
        modulus: BinaryPoly,
        degree: Option<u32>,
        width: u32,
    },
    #[error("modulus {0} is reducible over GF(2)")]
    Reducible(BinaryPoly),
    #[error("alpha = {alpha:#x} is not a field element other than 0 and 1")]
    BadAlpha { alpha: u64 },
    #[error("no default modulus for width {0}")]
    NoDefaultModulus(u32),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no prime p with {min_size} < p <= {cap} has 2 as a primitive root")]
    NoConstructionPrime { min_size: u64, cap: u64 },
    #[error("invalid hex polynomial {0:?}")]
    BadHex(String),
}

/// An element of some GF(2^w). Only meaningful together with its [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// One primitive polynomial per width 1..=16, low bit = constant term.
const DEFAULT_MODULI: [u64; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443, 0x8003, 0x1100b,
];

pub fn default_modulus(width: u32) -> Option<BinaryPoly> {
    DEFAULT_MODULI
        .get((width as usize).checked_sub(1)?)
        .map(|&m| BinaryPoly(m))
}

const TABLE_MAX_WIDTH: u32 = 16;

struct Tables {
    // exp has 2(q-1) entries so log a + log b never needs reducing
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct FieldInner {
    width: u32,
    modulus: BinaryPoly,
    alpha: FieldElement,
    alpha_order: u64,
    tables: Option<Tables>,
}

/// GF(2^w) with a fixed modulus and generator. Cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.width() == other.width() && self.modulus() == other.modulus() && self.alpha() == other.alpha()
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("width", &self.width())
            .field("modulus", &self.modulus())
            .field("alpha", &self.alpha())
            .field("alpha_order", &self.alpha_order())
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF(2^{}) mod {}, alpha={:#x} (order {})",
            self.width(),
            self.modulus(),
            self.alpha().0,
            self.alpha_order()
        )
    }
}

impl Field {
    pub fn new(width: u32, modulus: BinaryPoly, alpha: FieldElement) -> Result<Field, FieldError> {
        if !(1..=63).contains(&width) {
            return Err(FieldError::BadWidth(width));
        }
        if modulus.degree() != Some(width) {
            return Err(FieldError::WrongDegree {
                modulus,
                degree: modulus.degree(),
                width,
            });
        }
        if !is_irreducible(modulus) {
            return Err(FieldError::Reducible(modulus));
        }
        if alpha.0 <= 1 || alpha.0 >> width != 0 {
            return Err(FieldError::BadAlpha { alpha: alpha.0 });
        }
        let mut inner = FieldInner {
            width,
            modulus,
            alpha,
            alpha_order: 0,
            tables: None,
        };
        if width <= TABLE_MAX_WIDTH {
            inner.tables = Some(build_tables(width, modulus));
        }
        let mut field = Field { inner: Arc::new(inner) };
        let order = field.order(alpha).expect("alpha is nonzero");
        Arc::get_mut(&mut field.inner).expect("freshly built").alpha_order = order;
        Ok(field)
    }

    /// GF(2^w) over the built-in primitive polynomial with `alpha = x`.
    pub fn with_default_modulus(width: u32) -> Result<Field, FieldError> {
        let modulus = default_modulus(width).ok_or(FieldError::NoDefaultModulus(width))?;
        Field::new(width, modulus, FieldElement(2))
    }

    /// Smallest default field whose generator has order at least `min_order`.
    pub fn smallest_default(min_order: u64) -> Result<Field, FieldError> {
        let width = (2..=TABLE_MAX_WIDTH)
            .find(|&w| (1u64 << w) > min_order)
            .ok_or(FieldError::NoDefaultModulus(TABLE_MAX_WIDTH + 1))?;
        Field::with_default_modulus(width)
    }

    /// GF(2^(p-1)) defined by `M_p(x)` with `alpha = x`, which has order `p`
    /// whenever `M_p` is irreducible.
    pub fn from_mp(p: u32) -> Result<Field, FieldError> {
        Field::new(p - 1, mp_polynomial(p), FieldElement(2))
    }

    pub fn width(&self) -> u32 {
        self.inner.width
    }

    pub fn modulus(&self) -> BinaryPoly {
        self.inner.modulus
    }

    pub fn alpha(&self) -> FieldElement {
        self.inner.alpha
    }

    pub fn alpha_order(&self) -> u64 {
        self.inner.alpha_order
    }

    /// Number of elements, `2^w`.
    pub fn size(&self) -> u128 {
        1u128 << self.inner.width
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 >> self.inner.width == 0
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.inner.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] + t.log[b.0 as usize];
                FieldElement(t.exp[l as usize] as u64)
            }
            None => FieldElement(reduce_wide(clmul(a.0, b.0), self.inner.modulus)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::InverseOfZero);
        }
        if let Some(t) = &self.inner.tables {
            let q1 = (1u32 << self.inner.width) - 1;
            let l = t.log[a.0 as usize];
            return Ok(FieldElement(t.exp[((q1 - l) % q1) as usize] as u64));
        }
        // a^(2^w - 2)
        let e = (1u64 << self.inner.width).wrapping_sub(2);
        Ok(self.pow_unsigned(a, e))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any signed `e`. Negative exponents require `a != 0`.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            Ok(self.pow_unsigned(a, e as u64))
        } else {
            let p = self.pow_unsigned(a, e.unsigned_abs());
            self.inv(p)
        }
    }

    fn pow_unsigned(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `alpha^e`, with `e` reduced modulo the order of alpha.
    pub fn alpha_pow(&self, e: i64) -> FieldElement {
        let ord = self.inner.alpha_order as i64;
        self.pow_unsigned(self.inner.alpha, e.rem_euclid(ord) as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::InverseOfZero);
        }
        let group = (1u64 << self.inner.width) - 1;
        let mut ord = group;
        for (p, _) in prime::factorize(group) {
            while ord.is_multiple_of(p) && self.pow_unsigned(a, ord / p) == FieldElement::ONE {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// Iterates over every element, zero first. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..(1u64 << self.inner.width)).map(FieldElement)
    }
}

fn build_tables(width: u32, modulus: BinaryPoly) -> Tables {
    let q1 = (1usize << width) - 1;
    let slow_mul = |a: u64, b: u64| reduce_wide(clmul(a, b), modulus);
    let factors: Vec<u64> = prime::factorize(q1 as u64).into_iter().map(|(p, _)| p).collect();
    let is_primitive = |g: u64| {
        factors.iter().all(|&p| {
            let mut e = q1 as u64 / p;
            let (mut base, mut acc) = (g, 1u64);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc != 1
        })
    };
    let gen = if q1 == 1 {
        1
    } else {
        (2..=q1 as u64)
            .find(|&g| is_primitive(g))
            .expect("multiplicative group of a field is cyclic")
    };
    let mut exp = vec![0u32; 2 * q1];
    let mut log = vec![0u32; q1 + 1];
    let mut x = 1u64;
    for i in 0..q1 {
        exp[i] = x as u32;
        exp[i + q1] = x as u32;
        log[x as usize] = i as u32;
        x = slow_mul(x, gen);
    }
    Tables { exp, log }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> Field {
        Field::new(3, BinaryPoly(0b1011), FieldElement(2)).unwrap()
    }

    #[test]
    fn add_examples() {
        let f = gf8();
        let x = FieldElement(5);
        assert_eq!(f.add(x, x), FieldElement::ZERO);
        assert_eq!(f.add(x, FieldElement::ZERO), x);
        // alpha^3 = alpha + 1 in GF(8) mod x^3 + x + 1
        let a = f.alpha();
        let a3 = f.pow(a, 3).unwrap();
        assert_eq!(f.add(a3, a), FieldElement::ONE);
    }

    #[test]
    fn mul_pow_inv_examples() {
        let f = gf8();
        let a = f.alpha();
        assert_eq!(f.mul(a, a), FieldElement(4));
        assert_eq!(f.pow(a, 7).unwrap(), FieldElement::ONE);
        assert_eq!(f.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
        assert_eq!(f.inv(FieldElement::ZERO), Err(FieldError::InverseOfZero));
        assert_eq!(f.pow(FieldElement::ZERO, -1), Err(FieldError::InverseOfZero));
        assert_eq!(f.pow(a, -1).unwrap(), f.pow(a, 6).unwrap());
    }

    #[test]
    fn order_examples() {
        let f = gf8();
        assert_eq!(f.order(FieldElement::ONE).unwrap(), 1);
        assert_eq!(f.order(f.alpha()).unwrap(), 7);
        assert_eq!(f.alpha_order(), 7);
        assert!(f.order(FieldElement::ZERO).is_err());
        let m11 = Field::from_mp(11).unwrap();
        assert_eq!(m11.width(), 10);
        assert_eq!(m11.alpha_order(), 11);
    }

    #[test]
    fn order_by_repeated_multiplication() {
        let f = Field::from_mp(11).unwrap();
        let mut x = FieldElement::ONE;
        for e in 1..=11 {
            x = f.mul(x, f.alpha());
            assert_eq!(x == FieldElement::ONE, e == 11);
        }
    }

    #[test]
    fn default_moduli_are_primitive() {
        for w in 2..=16 {
            let f = Field::with_default_modulus(w).unwrap();
            assert_eq!(f.alpha_order(), (1 << w) - 1, "width {w}");
        }
        assert!(Field::with_default_modulus(1).is_err());
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            Field::new(3, BinaryPoly(0b10011), FieldElement(2)),
            Err(FieldError::WrongDegree { .. })
        ));
        assert!(matches!(
            Field::new(6, mp_polynomial(7), FieldElement(2)),
            Err(FieldError::Reducible(_))
        ));
        assert!(matches!(
            Field::new(3, BinaryPoly(0b1011), FieldElement(1)),
            Err(FieldError::BadAlpha { .. })
        ));
        assert!(matches!(
            Field::new(3, BinaryPoly(0b1011), FieldElement(8)),
            Err(FieldError::BadAlpha { .. })
        ));
        assert!(matches!(
            Field::new(64, BinaryPoly(0), FieldElement(2)),
            Err(FieldError::BadWidth(64))
        ));
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for w in 2..=6 {
            let f = Field::with_default_modulus(w).unwrap();
            let elems: Vec<_> = f.elements().collect();
            for &a in &elems {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                    let ord = f.order(a).unwrap();
                    assert_eq!(f.pow(a, ord as i64).unwrap(), FieldElement::ONE);
                    for e in 1..ord {
                        assert_ne!(f.pow(a, e as i64).unwrap(), FieldElement::ONE);
                    }
                    assert_eq!(((1u64 << w) - 1) % ord, 0);
                }
                for &b in &elems {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(f.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn table_and_clmul_paths_agree() {
        let f = Field::with_default_modulus(8).unwrap();
        for a in 0..256u64 {
            for b in (0..256u64).step_by(7) {
                let slow = reduce_wide(clmul(a, b), f.modulus());
                assert_eq!(f.mul(FieldElement(a), FieldElement(b)).0, slow);
            }
        }
    }

    #[test]
    fn wide_field_inverse() {
        // x^61 + x^5 + x^2 + x + 1 is irreducible
        let modulus = BinaryPoly((1u64 << 61) | 0b100111);
        let f = Field::new(61, modulus, FieldElement(2)).unwrap();
        let a = FieldElement(0x1234_5678_9abc);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        assert_eq!((1u64 << 61) - 1, f.alpha_order());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn field_axioms_gf2_12(a in 0u64..4096, b in 0u64..4096, c in 0u64..4096) {
                let f = Field::with_default_modulus(12).unwrap();
                let (a, b, c) = (FieldElement(a), FieldElement(b), FieldElement(c));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                prop_assert_eq!(f.add(f.add(a, b), b), a);
            }

            #[test]
            fn field_axioms_wide(a in 1u64..(1 << 40), b in 0u64..(1 << 40), c in 0u64..(1 << 40)) {
                let f = Field::from_mp(53).unwrap();
                let (a, b, c) = (FieldElement(a), FieldElement(b), FieldElement(c));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
        }
    }
}
