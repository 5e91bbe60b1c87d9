//! Primes `p` for which `M_p(x) = 1 + x + ... + x^(p-1)` is irreducible.
//!
//! `M_p` is irreducible over GF(2) exactly when 2 is a primitive root mod `p`;
//! a root of it then has multiplicative order `p`.

use num_prime::nt_funcs::{factorize64, is_prime64};

use super::FieldError;

/// Largest `p` whose `M_p` still fits a 63-bit field.
pub const DEFAULT_PRIME_SEARCH_CAP: u64 = 64;

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

pub(crate) fn factorize(n: u64) -> Vec<(u64, usize)> {
    if n <= 1 {
        return Vec::new();
    }
    factorize64(n).into_iter().collect()
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// True iff 2 generates the multiplicative group mod the odd prime `p`.
pub fn is_two_primitive(p: u64) -> Result<bool, FieldError> {
    if p == 2 || !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let group = p - 1;
    Ok(factorize(group).into_iter().all(|(q, _)| pow_mod(2, group / q, p) != 1))
}

/// Smallest prime `p > min_size`, `p <= cap`, with 2 primitive mod `p`.
pub fn find_construction_prime(min_size: u64, cap: u64) -> Result<u64, FieldError> {
    let start = min_size.saturating_add(1).max(3);
    (start..=cap)
        .find(|&p| is_prime(p) && is_two_primitive(p) == Ok(true))
        .ok_or(FieldError::NoConstructionPrime { min_size, cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{is_irreducible, mp_polynomial, Field};

    // Order of 2 by listing its powers.
    fn order_of_two(p: u64) -> u64 {
        let mut x = 2 % p;
        let mut e = 1;
        while x != 1 {
            x = x * 2 % p;
            e += 1;
        }
        e
    }

    #[test]
    fn two_primitive_examples() {
        assert_eq!(is_two_primitive(11), Ok(true));
        assert_eq!(is_two_primitive(7), Ok(false));
        assert_eq!(is_two_primitive(13), Ok(true));
        assert_eq!(is_two_primitive(15), Err(FieldError::NotPrime(15)));
        assert_eq!(is_two_primitive(2), Err(FieldError::NotPrime(2)));
    }

    #[test]
    fn two_primitive_matches_enumeration() {
        for p in (3..500).filter(|&p| is_prime(p)) {
            assert_eq!(is_two_primitive(p).unwrap(), order_of_two(p) == p - 1, "p = {p}");
        }
    }

    #[test]
    fn construction_prime_examples() {
        assert_eq!(find_construction_prime(9, DEFAULT_PRIME_SEARCH_CAP), Ok(11));
        assert_eq!(find_construction_prime(12, DEFAULT_PRIME_SEARCH_CAP), Ok(13));
        assert_eq!(find_construction_prime(2, DEFAULT_PRIME_SEARCH_CAP), Ok(3));
        assert_eq!(find_construction_prime(1, DEFAULT_PRIME_SEARCH_CAP), Ok(3));
        assert!(matches!(
            find_construction_prime(62, DEFAULT_PRIME_SEARCH_CAP),
            Err(FieldError::NoConstructionPrime { .. })
        ));
    }

    #[test]
    fn every_construction_prime_gives_a_field_of_order_p() {
        let mut min = 1;
        while let Ok(p) = find_construction_prime(min, DEFAULT_PRIME_SEARCH_CAP) {
            assert!(is_irreducible(mp_polynomial(p as u32)), "M_{p}");
            let f = Field::from_mp(p as u32).unwrap();
            assert_eq!(f.alpha_order(), p);
            min = p;
        }
        assert!(min >= 53);
    }

    #[test]
    fn mp_irreducible_iff_two_primitive() {
        for p in (3..=40u64).filter(|&p| is_prime(p)) {
            assert_eq!(
                is_irreducible(mp_polynomial(p as u32)),
                is_two_primitive(p).unwrap(),
                "p = {p}"
            );
        }
    }
}
