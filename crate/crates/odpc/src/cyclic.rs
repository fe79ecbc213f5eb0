//! Binary cyclic codes identified by the coset leaders of their nonzeros,
//! with exact minimum distance and weight distribution by exhaustive
//! generator-matrix enumeration, and MacWilliams transforms as a cross-check.
//!
//! The enumeration walks all 2^k messages in Gray-code order so every
//! codeword costs one row XOR plus a popcount, on words packed 64 coordinates
//! each. The message space may be split across worker threads; the merge is
//! min / elementwise sum, so the result is identical for any worker count.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cosets::CosetTable;
use crate::gf2::{BinaryPolynomial, FieldContext, FieldElement};
use crate::{numtheory, Error, Result};

/// A binary cyclic code of length n, identified by the sorted set of
/// cyclotomic-coset leaders of its nonzeros. The generator polynomial is the
/// product of the minimal polynomials of all the other cosets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCode {
    pub n: u64,
    pub nonzero_leaders: BTreeSet<u64>,
    pub dimension: u32,
    pub generator: BinaryPolynomial,
}

/// Canonical stored leader for the primitive idempotent labelled by s in the
/// starred convention: the leader of the coset of -s mod n.
pub fn theta_star_leader(table: &CosetTable, s: u64) -> u64 {
    let n = table.n();
    table.leader_of((n - s % n) % n)
}

/// Build the cyclic code of length n whose nonzeros are the cosets of the
/// given leaders.
pub fn code_from_leaders(n: u64, leaders: &BTreeSet<u64>) -> Result<CyclicCode> {
    let table = CosetTable::build(n)?;
    let m = numtheory::mult_order(2, n)?;
    if m > 16 {
        return Err(Error::BadParameter(format!(
            "splitting field GF(2^{m}) for n = {n} is out of range"
        )));
    }
    let ctx = FieldContext::build(m, n)?;
    let mut dimension = 0u32;
    for &leader in leaders {
        if !table.is_leader(leader) {
            return Err(Error::UnknownLeader { n, leader });
        }
        dimension += table.coset_of(leader).unwrap().elements.len() as u32;
    }
    let mut generator = BinaryPolynomial::one();
    for coset in table.cosets() {
        if !leaders.contains(&coset.leader) {
            generator = generator.mul(&crate::gf2::minimal_polynomial(&coset.elements, &ctx)?);
        }
    }
    debug_assert_eq!(generator.degree(), Some((n - dimension as u64) as usize));
    debug_assert!(
        BinaryPolynomial::x_pow_n_plus_one(n as usize)
            .divrem(&generator)
            .unwrap()
            .1
            .is_zero()
    );
    Ok(CyclicCode {
        n,
        nonzero_leaders: leaders.clone(),
        dimension,
        generator,
    })
}

/// The dual code: its nonzeros are the negated zeros of the original.
pub fn dual_code(code: &CyclicCode) -> Result<CyclicCode> {
    let table = CosetTable::build(code.n)?;
    let dual_leaders: BTreeSet<u64> = table
        .leaders()
        .filter(|l| !code.nonzero_leaders.contains(l))
        .map(|l| theta_star_leader(&table, l))
        .collect();
    code_from_leaders(code.n, &dual_leaders)
}

/// Guards for the exhaustive enumeration.
#[derive(Debug, Clone, Copy)]
pub struct EnumOptions {
    /// Refuse codes with dimension above this (never approximate silently).
    pub max_dimension: u32,
    /// Worker threads for the message-space scan.
    pub workers: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { max_dimension: 28, workers: 1 }
    }
}

fn words_for(n: u64) -> usize {
    (n as usize).div_ceil(64)
}

/// Rows of the generator matrix, packed: row i holds x^i * g(x).
fn generator_rows(code: &CyclicCode) -> Vec<Vec<u64>> {
    let w = words_for(code.n);
    (0..code.dimension as usize)
        .map(|i| code.generator.shl(i).to_words(w))
        .collect()
}

#[inline]
fn weight_of(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

#[inline]
fn xor_in(acc: &mut [u64], row: &[u64]) {
    for (a, r) in acc.iter_mut().zip(row) {
        *a ^= r;
    }
}

/// Codeword for a raw (non-Gray) message bit pattern.
fn encode_message(rows: &[Vec<u64>], message: u64) -> Vec<u64> {
    let mut cw = vec![0u64; rows[0].len()];
    let mut bits = message;
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        xor_in(&mut cw, &rows[b]);
        bits &= bits - 1;
    }
    cw
}

/// Visit the weights of the codewords for messages in [start, end), walking
/// the Gray code so each step is a single row XOR.
fn scan_weights(rows: &[Vec<u64>], start: u64, end: u64, visit: &mut impl FnMut(u32)) {
    if start >= end {
        return;
    }
    let mut cw = encode_message(rows, start ^ (start >> 1));
    visit(weight_of(&cw));
    for msg in start + 1..end {
        let bit = msg.trailing_zeros() as usize;
        xor_in(&mut cw, &rows[bit]);
        visit(weight_of(&cw));
    }
}

/// Split [lo, hi) across workers, fold weights per worker, and return the
/// per-worker accumulators in worker order.
fn parallel_scan<T: Send>(
    rows: &[Vec<u64>],
    lo: u64,
    hi: u64,
    workers: usize,
    make: &(dyn Fn() -> T + Sync),
    step: &(dyn Fn(&mut T, u32) + Sync),
) -> Vec<T> {
    let workers = workers.max(1).min((hi - lo).max(1) as usize);
    if workers == 1 {
        let mut acc = make();
        scan_weights(rows, lo, hi, &mut |w| step(&mut acc, w));
        return vec![acc];
    }
    let chunk = (hi - lo).div_ceil(workers as u64);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| {
                let start = lo + chunk * i as u64;
                let end = hi.min(start.saturating_add(chunk));
                scope.spawn(move || {
                    let mut acc = make();
                    scan_weights(rows, start, end, &mut |w| step(&mut acc, w));
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

fn check_dimension(code: &CyclicCode, opts: &EnumOptions) -> Result<()> {
    if code.dimension == 0 {
        return Err(Error::BadParameter(
            "the zero code has no minimum distance".into(),
        ));
    }
    if code.dimension > opts.max_dimension {
        return Err(Error::DimensionLimit {
            dimension: code.dimension,
            limit: opts.max_dimension,
        });
    }
    Ok(())
}

/// Exact minimum nonzero weight over all 2^k - 1 codewords.
pub fn min_distance(code: &CyclicCode, opts: &EnumOptions) -> Result<u32> {
    check_dimension(code, opts)?;
    let rows = generator_rows(code);
    let total = 1u64 << code.dimension;
    let mins = parallel_scan(
        &rows,
        1,
        total,
        opts.workers,
        &|| u32::MAX,
        &|min, w| {
            if w < *min {
                *min = w;
            }
        },
    );
    Ok(mins.into_iter().min().unwrap())
}

/// Map weight -> codeword count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub counts: BTreeMap<u32, u128>,
}

impl WeightDistribution {
    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<u32> {
        self.counts.keys().find(|&&w| w > 0).copied()
    }

    /// Distinct nonzero weights.
    pub fn nonzero_weights(&self) -> Vec<u32> {
        self.counts.keys().filter(|&&w| w > 0).copied().collect()
    }

    /// Sum of w * A_w.
    pub fn weighted_sum(&self) -> u128 {
        self.counts.iter().map(|(&w, &c)| w as u128 * c).sum()
    }
}

/// Complete weight tally over all 2^k codewords.
pub fn weight_distribution(code: &CyclicCode, opts: &EnumOptions) -> Result<WeightDistribution> {
    check_dimension(code, opts)?;
    let rows = generator_rows(code);
    let total = 1u64 << code.dimension;
    let n = code.n as usize;
    let tallies = parallel_scan(
        &rows,
        0,
        total,
        opts.workers,
        &|| vec![0u64; n + 1],
        &|tally: &mut Vec<u64>, w| tally[w as usize] += 1,
    );
    let mut counts = BTreeMap::new();
    for tally in tallies {
        for (w, c) in tally.into_iter().enumerate() {
            if c > 0 {
                *counts.entry(w as u32).or_insert(0u128) += c as u128;
            }
        }
    }
    let wd = WeightDistribution { counts };
    debug_assert_eq!(wd.total(), 1u128 << code.dimension);
    Ok(wd)
}

/// Weight of the codeword with coordinates c_i = sum over terms of
/// Tr(alpha * pi^(i*s)), for a full-length code (n = 2^m - 1).
///
/// The resulting word lies in the cyclic code whose nonzeros are the cosets
/// of -s mod n for each term exponent s.
pub fn trace_weight(ctx: &FieldContext, terms: &[(u64, FieldElement)]) -> Result<u32> {
    let word = trace_codeword(ctx, terms)?;
    Ok(weight_of(&word))
}

/// The packed trace codeword itself (bit i = c_i), for membership checks.
pub fn trace_codeword(ctx: &FieldContext, terms: &[(u64, FieldElement)]) -> Result<Vec<u64>> {
    let n = ctx.n();
    if n != ctx.q() - 1 {
        return Err(Error::BadParameter(format!(
            "trace codewords need full length 2^m - 1, got n = {n}"
        )));
    }
    let mut word = vec![0u64; words_for(n)];
    for i in 0..n {
        let mut c = 0u8;
        for &(s, alpha) in terms {
            let e = (i % n) * (s % n);
            c ^= ctx.trace(ctx.mul(alpha, ctx.primitive_power(e)));
        }
        if c == 1 {
            word[(i / 64) as usize] |= 1u64 << (i % 64);
        }
    }
    Ok(word)
}

fn pascal_table(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![BigUint::from(1u32); r + 1];
        for c in 1..r {
            row[c] = &rows[r - 1][c - 1] + &rows[r - 1][c];
        }
        rows.push(row);
    }
    rows
}

/// Weight distribution of the dual code via the MacWilliams identities.
///
/// A'_j = 2^-k * sum_w A_w * K_j(w) with the binary Krawtchouk polynomials
/// K_j(w) = sum_i (-1)^i C(w,i) C(n-w, j-i). All arithmetic is exact; a
/// non-integral or negative result reports the input as inconsistent.
pub fn macwilliams_transform(
    wd: &WeightDistribution,
    n: u64,
    k: u32,
) -> Result<WeightDistribution> {
    if k > 127 || wd.total() != 1u128 << k {
        return Err(Error::Inconsistent(format!(
            "distribution sums to {} but 2^{k} codewords were expected",
            wd.total()
        )));
    }
    if wd.counts.keys().any(|&w| w as u64 > n) {
        return Err(Error::Inconsistent("weight exceeds length".into()));
    }
    let n = n as usize;
    let pascal = pascal_table(n);
    let choose = |a: usize, b: usize| -> BigInt {
        if b > a {
            BigInt::zero()
        } else {
            BigInt::from(pascal[a][b].clone())
        }
    };
    let denom = BigInt::from(BigUint::from(2u32).pow(k));
    let mut counts = BTreeMap::new();
    for j in 0..=n {
        let mut acc = BigInt::zero();
        for (&w, &a_w) in &wd.counts {
            let w = w as usize;
            let mut kraw = BigInt::zero();
            for i in 0..=j.min(w) {
                let term = choose(w, i) * choose(n - w, j - i);
                if i % 2 == 0 {
                    kraw += term;
                } else {
                    kraw -= term;
                }
            }
            acc += BigInt::from(a_w) * kraw;
        }
        if acc.is_negative() || (&acc % &denom) != BigInt::zero() {
            return Err(Error::Inconsistent(format!(
                "transform produced a non-codeword count at weight {j}"
            )));
        }
        let val = (acc / &denom)
            .to_u128()
            .ok_or_else(|| Error::Inconsistent("dual count exceeds u128".into()))?;
        if val > 0 {
            counts.insert(j as u32, val);
        }
    }
    Ok(WeightDistribution { counts })
}
