//! Integer arithmetic underneath coset counting and the two-power gcd
//! identities: multiplicative orders, Euler's phi, 2-adic valuations.

use crate::{Error, Result};

/// Greatest common divisor by Euclid's algorithm.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Euclid's algorithm over u128, wide enough for 2^b - 1 with b up to 126.
pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Smallest m >= 1 with q^m = 1 (mod n).
///
/// Naive iteration; n stays small here, so no factorization shortcut.
pub fn mult_order(q: u64, n: u64) -> Result<u32> {
    if q < 2 {
        return Err(Error::BadParameter(format!("mult_order needs q >= 2, got {q}")));
    }
    if n == 0 {
        return Err(Error::BadParameter("mult_order needs n >= 1".into()));
    }
    if gcd(q, n) != 1 {
        return Err(Error::NotCoprime { q, n });
    }
    if n == 1 {
        return Ok(1);
    }
    let mut pow = q % n;
    let mut order = 1u32;
    while pow != 1 {
        pow = ((pow as u128 * q as u128) % n as u128) as u64;
        order += 1;
    }
    Ok(order)
}

/// Count of 1 <= a <= n with gcd(a, n) = 1, by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi needs n >= 1");
    let mut phi = n;
    let mut rem = n;
    let mut p = 2u64;
    while p * p <= rem {
        if rem.is_multiple_of(p) {
            phi = phi / p * (p - 1);
            while rem.is_multiple_of(p) {
                rem /= p;
            }
        }
        p += 1;
    }
    if rem > 1 {
        phi = phi / rem * (rem - 1);
    }
    phi
}

/// n = 2^s * odd_part with odd_part odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Valuation {
    pub s: u32,
    pub odd_part: u64,
}

/// The 2-adic valuation of n >= 1.
pub fn two_adic(n: u64) -> Valuation {
    assert!(n >= 1, "two_adic needs n >= 1");
    let s = n.trailing_zeros();
    Valuation { s, odd_part: n >> s }
}

/// gcd(2^a + 1, 2^b - 1), computed twice: by the case formula
/// (2^gcd(a,b) + 1 when v2(b) > v2(a), else 1) and by direct integer gcd.
///
/// Disagreement between the two routes is a fatal defect and panics.
pub fn gcd_two_pow(a: u32, b: u32) -> u128 {
    assert!(
        (1..=126).contains(&a) && (1..=126).contains(&b),
        "gcd_two_pow needs 1 <= a, b <= 126"
    );
    let direct = gcd_u128((1u128 << a) + 1, (1u128 << b) - 1);
    let formula = if two_adic(b as u64).s > two_adic(a as u64).s {
        (1u128 << gcd(a as u64, b as u64)) + 1
    } else {
        1
    };
    assert_eq!(
        direct, formula,
        "two-power gcd identity violated at a={a}, b={b}"
    );
    direct
}

/// Smallest 1 <= i <= t with gcd(2^i + 1, 2^m - 1) = 1 for even m = 2t + 2,
/// or None when no such exponent exists (exactly when m is a power of 2).
pub fn coprime_exponent_witness(m: u32) -> Result<Option<u32>> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::BadParameter(format!(
            "coprime_exponent_witness needs even m >= 4, got {m}"
        )));
    }
    let t = (m - 2) / 2;
    Ok((1..=t).find(|&i| gcd_two_pow(i, m) == 1))
}
