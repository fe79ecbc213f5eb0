//! GF(2^m) arithmetic with discrete log/antilog tables, the absolute trace,
//! and GF(2)[x] polynomial arithmetic including minimal polynomials of
//! cyclotomic cosets.
//!
//! A field context fixes a primitive element pi (a root of the smallest
//! primitive polynomial of degree m, read as an integer with bit i holding the
//! coefficient of x^i) and a primitive n-th root of unity
//! alpha = pi^((2^m - 1)/n) for an odd n dividing 2^m - 1. Field elements are
//! polynomial-basis bit masks; multiplication goes through the log table with
//! zero handled by a sentinel, so the hot loops multiply in O(1).

use crate::cosets::CosetTable;
use crate::{numtheory, Error, Result};

/// A GF(2^m) element in polynomial basis: bit i is the coefficient of pi^i.
pub type FieldElement = u32;

const LOG_ZERO: u32 = u32::MAX;

/// Immutable GF(2^m) context tied to a code length n | 2^m - 1.
///
/// Shareable read-only across any number of threads.
pub struct FieldContext {
    m: u32,
    primitive_poly: u32,
    n: u64,
    unity_root_exponent: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_table: Vec<u8>,
}

impl FieldContext {
    /// Build the tables for GF(2^m) together with the n-th root of unity.
    ///
    /// Requires 2 <= m <= 16, n odd, n | 2^m - 1, and m = ord_n(2) so that
    /// alpha has exact order n. Deterministic across runs: the primitive
    /// polynomial is the smallest primitive polynomial of degree m.
    pub fn build(m: u32, n: u64) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::BadParameter(format!(
                "field degree m must be in 2..=16, got {m}"
            )));
        }
        if n.is_multiple_of(2) {
            return Err(Error::EvenModulus(n));
        }
        let order = (1u64 << m) - 1;
        if n == 0 || !order.is_multiple_of(n) {
            return Err(Error::BadParameter(format!(
                "n = {n} does not divide 2^{m} - 1 = {order}"
            )));
        }
        if numtheory::mult_order(2, n)? != m {
            return Err(Error::BadParameter(format!(
                "m = {m} is not the multiplicative order of 2 mod {n}"
            )));
        }

        let primitive_poly = smallest_primitive_poly(m);
        let q = 1usize << m;
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![LOG_ZERO; q];
        let mut v: u32 = 1;
        for (i, slot) in exp.iter_mut().enumerate().take(q - 1) {
            *slot = v;
            debug_assert_eq!(log[v as usize], LOG_ZERO, "element repeated in exp table");
            log[v as usize] = i as u32;
            v <<= 1;
            if v & (1 << m) != 0 {
                v ^= primitive_poly;
            }
        }
        assert_eq!(v, 1, "primitive polynomial scan produced a non-primitive poly");
        exp.copy_within(0..q - 1, q - 1);

        let mut ctx = FieldContext {
            m,
            primitive_poly,
            n,
            unity_root_exponent: order / n,
            exp,
            log,
            trace_table: Vec::new(),
        };

        let mut trace_table = vec![0u8; q];
        for x in 0..q as u32 {
            let mut acc = x;
            let mut t = x;
            for _ in 1..m {
                t = ctx.mul(t, t);
                acc ^= t;
            }
            debug_assert!(acc <= 1, "trace landed outside GF(2)");
            trace_table[x as usize] = acc as u8;
        }
        ctx.trace_table = trace_table;
        Ok(ctx)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field size q = 2^m.
    pub fn q(&self) -> u64 {
        1u64 << self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// (2^m - 1)/n, so that alpha = pi^unity_root_exponent.
    pub fn unity_root_exponent(&self) -> u64 {
        self.unity_root_exponent
    }

    /// pi^e, reducing e mod 2^m - 1.
    #[inline]
    pub fn primitive_power(&self, e: u64) -> FieldElement {
        let order = self.q() - 1;
        self.exp[(e % order) as usize]
    }

    /// alpha^e where alpha is the primitive n-th root of unity.
    #[inline]
    pub fn unity_root_power(&self, e: u64) -> FieldElement {
        self.primitive_power((e % self.n) * self.unity_root_exponent)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        self.exp[(la + lb) as usize]
    }

    /// x^e in the field; 0^0 = 1 by convention.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if x == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = self.q() - 1;
        let l = self.log[x as usize] as u64;
        self.exp[((l * (e % order)) % order) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: FieldElement) -> Option<u32> {
        if x == 0 {
            None
        } else {
            Some(self.log[x as usize])
        }
    }

    /// Absolute trace Tr(x) = x + x^2 + x^4 + ... + x^(2^(m-1)), in {0, 1}.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u8 {
        self.trace_table[x as usize]
    }
}

/// The primitive polynomial of degree m with the smallest integer encoding
/// (bit i = coefficient of x^i), found by exhaustive primitivity scan.
pub fn smallest_primitive_poly(m: u32) -> u32 {
    assert!((2..=16).contains(&m));
    let q = 1u64 << m;
    'cand: for cand in ((1u32 << m) | 1..(1u32 << (m + 1))).step_by(2) {
        // Iterate powers of x modulo cand; primitive iff the first return
        // to 1 happens exactly at step 2^m - 1.
        let mut v: u32 = 1;
        for i in 1..q {
            v <<= 1;
            if v & (1 << m) != 0 {
                v ^= cand;
            }
            if v == 1 {
                if i == q - 1 {
                    return cand;
                }
                continue 'cand;
            }
        }
        // x is a unit (constant term 1), so its order divides the unit group
        // order <= 2^m - 1; a return to 1 must have happened above.
        unreachable!("power sequence never returned to 1");
    }
    unreachable!("no primitive polynomial of degree {m}");
}

/// A polynomial over GF(2), packed 64 coefficients per word, lowest degree
/// first. No trailing zero words are kept.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryPolynomial {
    words: Vec<u64>,
}

impl BinaryPolynomial {
    pub fn zero() -> Self {
        BinaryPolynomial { words: Vec::new() }
    }

    pub fn one() -> Self {
        BinaryPolynomial { words: vec![1] }
    }

    /// x^d.
    pub fn monomial(d: usize) -> Self {
        let mut words = vec![0u64; d / 64 + 1];
        words[d / 64] = 1u64 << (d % 64);
        BinaryPolynomial { words }
    }

    /// x^n + 1.
    pub fn x_pow_n_plus_one(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.words[0] ^= 1;
        p
    }

    /// Sum of x^e over the given exponents (duplicates cancel).
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exponents {
            if p.words.len() <= e / 64 {
                p.words.resize(e / 64 + 1, 0);
            }
            p.words[e / 64] ^= 1u64 << (e % 64);
        }
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some(64 * (self.words.len() - 1) + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    /// Coefficients packed into exactly `words` u64s (must fit).
    pub fn to_words(&self, words: usize) -> Vec<u64> {
        assert!(self.words.len() <= words, "polynomial does not fit");
        let mut out = self.words.clone();
        out.resize(words, 0);
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut words = vec![0u64; self.words.len().max(rhs.words.len())];
        for (i, w) in self.words.iter().enumerate() {
            words[i] ^= w;
        }
        for (i, w) in rhs.words.iter().enumerate() {
            words[i] ^= w;
        }
        let mut p = BinaryPolynomial { words };
        p.trim();
        p
    }

    /// Multiply by x^k.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let word_shift = k / 64;
        let bit_shift = k % 64;
        let mut words = vec![0u64; self.words.len() + word_shift + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + word_shift] |= w << bit_shift;
            if bit_shift != 0 {
                words[i + word_shift + 1] |= w >> (64 - bit_shift);
            }
        }
        let mut p = BinaryPolynomial { words };
        p.trim();
        p
    }

    /// Carry-less (XOR) product.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut acc = Self::zero();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                acc = acc.add(&rhs.shl(64 * wi + b));
                bits &= bits - 1;
            }
        }
        acc
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    pub fn divrem(&self, rhs: &Self) -> Result<(Self, Self)> {
        let db = rhs.degree().ok_or(Error::ZeroDivision)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            rem = rem.add(&rhs.shl(shift));
            quot = quot.add(&Self::monomial(shift));
        }
        Ok((quot, rem))
    }

    /// gcd in GF(2)[x] (automatically monic).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    /// Hex encoding of the coefficient bits, low bit = constant term.
    pub fn hex(&self) -> String {
        if self.is_zero() {
            return "0x0".into();
        }
        let mut s = String::from("0x");
        let mut first = true;
        for w in self.words.iter().rev() {
            if first {
                s.push_str(&format!("{w:x}"));
                first = false;
            } else {
                s.push_str(&format!("{w:016x}"));
            }
        }
        s
    }
}

impl std::fmt::Display for BinaryPolynomial {
    /// Term form, lowest degree first: "1 + x^2 + x^3".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in 0..=self.degree().unwrap() {
            if !self.coeff(i) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl std::fmt::Debug for BinaryPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// Minimal polynomial of alpha^s over GF(2) for every s in the given
/// 2-cyclotomic coset: the product of (x - alpha^i) over the coset, which
/// collapses to GF(2) coefficients exactly when the coset is complete.
pub fn minimal_polynomial(coset: &[u64], ctx: &FieldContext) -> Result<BinaryPolynomial> {
    let n = ctx.n();
    if coset.is_empty() {
        return Err(Error::BadParameter("empty coset".into()));
    }
    let set: std::collections::BTreeSet<u64> = coset.iter().map(|&e| e % n).collect();
    if set.len() != coset.len() {
        return Err(Error::BadParameter("repeated exponent in coset".into()));
    }
    for &e in &set {
        if !set.contains(&(2 * e % n)) {
            return Err(Error::IncompleteCoset { n, element: e });
        }
    }

    // Product over GF(2^m)[x], coefficients lowest-degree first.
    let mut coeffs: Vec<FieldElement> = vec![1];
    for &e in &set {
        let root = ctx.unity_root_power(e);
        let mut next = vec![0u32; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] ^= c;
            next[i] ^= ctx.mul(c, root);
        }
        coeffs = next;
    }
    let mut exponents = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c > 1 {
            return Err(Error::Inconsistent(format!(
                "minimal polynomial coefficient {c:#x} outside GF(2) at degree {i}"
            )));
        }
        if c == 1 {
            exponents.push(i);
        }
    }
    Ok(BinaryPolynomial::from_exponents(&exponents))
}

/// Minimal polynomial of alpha^s, looking the coset up in a table.
pub fn minimal_polynomial_of(s: u64, table: &CosetTable, ctx: &FieldContext) -> Result<BinaryPolynomial> {
    let coset = table
        .coset_of(s)
        .ok_or(Error::UnknownLeader { n: table.n(), leader: s })?;
    minimal_polynomial(&coset.elements, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::CosetTable;

    #[test]
    fn smallest_primitive_polys() {
        assert_eq!(smallest_primitive_poly(2), 0b111);
        assert_eq!(smallest_primitive_poly(3), 0b1011);
        // x^4 + x + 1
        assert_eq!(smallest_primitive_poly(4), 0b10011);
        // x^6 + x + 1
        assert_eq!(smallest_primitive_poly(6), 0b1000011);
    }

    #[test]
    fn build_field_examples() {
        let f4 = FieldContext::build(4, 15).unwrap();
        assert_eq!(f4.primitive_poly(), 0b10011);
        let f6 = FieldContext::build(6, 63).unwrap();
        assert_eq!(f6.primitive_poly(), 0b1000011);
        let f21 = FieldContext::build(6, 21).unwrap();
        assert_eq!(f21.unity_root_exponent(), 3);
    }

    #[test]
    fn build_field_rejects_bad_parameters() {
        assert!(FieldContext::build(6, 15).is_err()); // ord_15(2) = 4 != 6
        assert!(FieldContext::build(4, 14).is_err()); // even
        assert!(FieldContext::build(4, 7).is_err()); // 15 % 7 != 0
    }

    #[test]
    fn unity_root_has_exact_order() {
        let ctx = FieldContext::build(6, 21).unwrap();
        let alpha = ctx.unity_root_power(1);
        let mut v = alpha;
        for i in 1..21 {
            assert_ne!(v, 1, "alpha^{i} = 1 too early");
            v = ctx.mul(v, alpha);
        }
        assert_eq!(v, 1);
    }

    #[test]
    fn trace_basics() {
        let ctx = FieldContext::build(6, 63).unwrap();
        assert_eq!(ctx.trace(0), 0);
        assert_eq!(ctx.trace(1), 0); // m even
        let ctx4 = FieldContext::build(4, 15).unwrap();
        let zeros = (0..16).filter(|&x| ctx4.trace(x) == 0).count();
        assert_eq!(zeros, 8);
    }

    #[test]
    fn field_axioms_random_triples() {
        // 1000 deterministic pseudo-random triples per m.
        for m in [4u32, 5, 6, 8] {
            let n = (1u64 << m) - 1;
            let ctx = FieldContext::build(m, n).unwrap();
            let mask = (1u32 << m) - 1;
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            for _ in 0..1000 {
                let a = (next() as u32) & mask;
                let b = (next() as u32) & mask;
                let c = (next() as u32) & mask;
                assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                assert_eq!(ctx.mul(a, b ^ c), ctx.mul(a, b) ^ ctx.mul(a, c));
            }
        }
    }

    #[test]
    fn minimal_polynomials_for_n_21() {
        let ctx = FieldContext::build(6, 21).unwrap();
        let table = CosetTable::build(21).unwrap();
        // The two size-3 cosets give 1 + x^2 + x^3 and 1 + x + x^3 in some
        // order, and their product is 1 + x + ... + x^6.
        let size3: Vec<_> = table
            .cosets()
            .iter()
            .filter(|c| c.elements.len() == 3)
            .collect();
        assert_eq!(size3.len(), 2);
        let p0 = minimal_polynomial(&size3[0].elements, &ctx).unwrap();
        let p1 = minimal_polynomial(&size3[1].elements, &ctx).unwrap();
        let expect_a = BinaryPolynomial::from_exponents(&[0, 2, 3]);
        let expect_b = BinaryPolynomial::from_exponents(&[0, 1, 3]);
        assert!(
            (p0 == expect_a && p1 == expect_b) || (p0 == expect_b && p1 == expect_a),
            "got {p0} and {p1}"
        );
        let product = p0.mul(&p1);
        assert_eq!(product, BinaryPolynomial::from_exponents(&[0, 1, 2, 3, 4, 5, 6]));

        // Coset {0} gives 1 + x.
        let p = minimal_polynomial(&[0], &ctx).unwrap();
        assert_eq!(p, BinaryPolynomial::from_exponents(&[0, 1]));
    }

    #[test]
    fn minimal_polynomial_rejects_incomplete_coset() {
        let ctx = FieldContext::build(6, 21).unwrap();
        assert!(matches!(
            minimal_polynomial(&[3, 6], &ctx),
            Err(Error::IncompleteCoset { .. })
        ));
    }

    #[test]
    fn minimal_polynomials_factor_x_n_plus_one() {
        for n in [15u64, 21, 31, 63, 127] {
            let m = crate::numtheory::mult_order(2, n).unwrap();
            let ctx = FieldContext::build(m, n).unwrap();
            let table = CosetTable::build(n).unwrap();
            let mut product = BinaryPolynomial::one();
            for coset in table.cosets() {
                product = product.mul(&minimal_polynomial(&coset.elements, &ctx).unwrap());
            }
            assert_eq!(product, BinaryPolynomial::x_pow_n_plus_one(n as usize), "n={n}");
        }
    }

    #[test]
    fn frobenius_invariance() {
        let ctx = FieldContext::build(6, 63).unwrap();
        let table = CosetTable::build(63).unwrap();
        for s in [1u64, 3, 5, 9, 11] {
            let a = minimal_polynomial_of(s, &table, &ctx).unwrap();
            let b = minimal_polynomial_of(2 * s % 63, &table, &ctx).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn poly_mul_identity_and_paper_product() {
        let a = BinaryPolynomial::from_exponents(&[0, 2, 3]);
        let b = BinaryPolynomial::from_exponents(&[0, 1, 3]);
        assert_eq!(
            a.mul(&b),
            BinaryPolynomial::from_exponents(&[0, 1, 2, 3, 4, 5, 6])
        );
        assert_eq!(a.mul(&BinaryPolynomial::one()), a);
    }

    #[test]
    fn poly_gcd_of_binomials() {
        let a = BinaryPolynomial::x_pow_n_plus_one(6);
        let b = BinaryPolynomial::x_pow_n_plus_one(4);
        assert_eq!(a.gcd(&b), BinaryPolynomial::x_pow_n_plus_one(2));
    }

    #[test]
    fn gcd_degree_matches_exponent_gcd() {
        for e1 in 1..=24usize {
            for e2 in 1..=24usize {
                let g = BinaryPolynomial::x_pow_n_plus_one(e1)
                    .gcd(&BinaryPolynomial::x_pow_n_plus_one(e2));
                let d = crate::numtheory::gcd(e1 as u64, e2 as u64) as usize;
                assert_eq!(g.degree(), Some(d), "e1={e1} e2={e2}");
            }
        }
    }

    #[test]
    fn divrem_contract() {
        let a = BinaryPolynomial::from_exponents(&[0, 1, 4, 7]);
        let b = BinaryPolynomial::from_exponents(&[0, 2, 3]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(a.divrem(&BinaryPolynomial::zero()).is_err());
    }

    #[test]
    fn hex_layout() {
        // 1 + x + x^2 + x^3 + x^4 + x^5 + x^6 -> 0x7f
        let g = BinaryPolynomial::from_exponents(&[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(g.hex(), "0x7f");
    }
}
