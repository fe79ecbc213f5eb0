//! 2-cyclotomic cosets modulo an odd n and the chain-counting arithmetic:
//! how many maximal nested families of cyclic subcodes a cyclic code has,
//! and how they split into classes by dimension profile.
//!
//! For a cyclic code whose generator excludes a set P of cosets, the counting
//! goes through L(v), the number of cosets of size v, and J(v), the number of
//! excluded cosets of size v. The chain length is lambda = sum(L - J), there
//! are lambda! chains, each dimension-profile class holds mu = prod (L - J)!
//! of them, and there are lambda!/mu classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;

use crate::{numtheory, Error, Result};

/// One 2-cyclotomic coset: its smallest member and the sorted orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    pub leader: u64,
    pub elements: Vec<u64>,
}

/// The full partition of {0, 1, ..., n-1} into cosets under doubling mod n.
#[derive(Debug, Clone)]
pub struct CosetTable {
    n: u64,
    cosets: Vec<Coset>,
    leader_index: HashMap<u64, usize>,
}

impl CosetTable {
    /// Partition {0, ..., n-1} under s -> 2s mod n. n must be odd.
    pub fn build(n: u64) -> Result<CosetTable> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::EvenModulus(n));
        }
        if n > 1 << 24 {
            return Err(Error::BadParameter(format!("n = {n} too large for coset table")));
        }
        let mut seen = vec![false; n as usize];
        let mut cosets = Vec::new();
        for s in 0..n {
            if seen[s as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut e = s;
            loop {
                seen[e as usize] = true;
                orbit.push(e);
                e = 2 * e % n;
                if e == s {
                    break;
                }
            }
            orbit.sort_unstable();
            // s is the minimum: anything smaller in the orbit would already
            // have been visited by the ascending scan.
            cosets.push(Coset { leader: s, elements: orbit });
        }
        let leader_index = cosets
            .iter()
            .enumerate()
            .map(|(i, c)| (c.leader, i))
            .collect();
        Ok(CosetTable { n, cosets, leader_index })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// The coset containing s (any member, not only the leader).
    pub fn coset_of(&self, s: u64) -> Option<&Coset> {
        let leader = self.leader_of(s);
        self.leader_index.get(&leader).map(|&i| &self.cosets[i])
    }

    /// Leader (smallest member) of the coset containing s.
    pub fn leader_of(&self, s: u64) -> u64 {
        let mut e = s % self.n;
        let mut min = e;
        loop {
            e = 2 * e % self.n;
            if e == s % self.n {
                break;
            }
            min = min.min(e);
        }
        min
    }

    pub fn is_leader(&self, s: u64) -> bool {
        self.leader_index.contains_key(&s)
    }

    pub fn leaders(&self) -> impl Iterator<Item = u64> + '_ {
        self.cosets.iter().map(|c| c.leader)
    }

    /// Map size -> number of cosets of that size.
    pub fn size_multiset(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for c in &self.cosets {
            *out.entry(c.elements.len() as u32).or_insert(0) += 1;
        }
        out
    }
}

/// L(v): the number of 2-cyclotomic cosets modulo n with size v, computed by
/// the divisor-sum formula sum over g | n with ord(2, n/g) = v of phi(n/g)/v
/// and cross-checked against a direct tally of the coset table.
pub fn count_cosets_of_size(n: u64, v: u32) -> Result<u64> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n));
    }
    let m = numtheory::mult_order(2, n)?;
    if v == 0 || !m.is_multiple_of(v) {
        return Err(Error::BadParameter(format!("v = {v} does not divide m = {m}")));
    }
    let mut divisors = Vec::new();
    let mut g = 1u64;
    while g * g <= n {
        if n.is_multiple_of(g) {
            divisors.push(g);
            if g != n / g {
                divisors.push(n / g);
            }
        }
        g += 1;
    }
    let mut formula = 0u64;
    for d in divisors {
        if numtheory::mult_order(2, n / d)? == v {
            formula += numtheory::euler_phi(n / d) / v as u64;
        }
    }
    let direct = CosetTable::build(n)?
        .size_multiset()
        .get(&v)
        .copied()
        .unwrap_or(0);
    assert_eq!(
        formula, direct,
        "coset-count formula disagrees with direct tally at n={n}, v={v}"
    );
    Ok(formula)
}

/// Chain-counting summary for a cyclic code identified by the coset leaders
/// its generator polynomial covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingSummary {
    /// Chain length: the number of cosets the generator does not cover.
    pub lambda: u32,
    /// lambda! chains in total.
    pub total_chains: BigUint,
    /// Chains per dimension-profile class: prod over v of (L(v) - J(v))!.
    pub per_class: BigUint,
    /// lambda!/mu classes.
    pub num_classes: BigUint,
    /// L: size -> number of cosets of that size.
    pub l_by_size: BTreeMap<u32, u64>,
    /// J: size -> number of generator-covered cosets of that size.
    pub j_by_size: BTreeMap<u32, u64>,
}

pub fn factorial(k: u64) -> BigUint {
    let mut f = BigUint::from(1u32);
    for i in 2..=k {
        f *= i;
    }
    f
}

/// Counting summary for the cyclic code of length n whose generator is the
/// product of the minimal polynomials of exactly `generator_leaders`.
pub fn chain_counts(n: u64, generator_leaders: &BTreeSet<u64>) -> Result<CountingSummary> {
    let table = CosetTable::build(n)?;
    let l_by_size = table.size_multiset();
    let mut j_by_size: BTreeMap<u32, u64> = BTreeMap::new();
    for &leader in generator_leaders {
        if !table.is_leader(leader) {
            return Err(Error::UnknownLeader { n, leader });
        }
        let size = table.coset_of(leader).unwrap().elements.len() as u32;
        *j_by_size.entry(size).or_insert(0) += 1;
    }

    let mut lambda = 0u64;
    let mut per_class = BigUint::from(1u32);
    for (&v, &l) in &l_by_size {
        let j = j_by_size.get(&v).copied().unwrap_or(0);
        lambda += l - j;
        per_class *= factorial(l - j);
    }
    let total_chains = factorial(lambda);
    let num_classes = &total_chains / &per_class;

    // Re-assert the defining identities.
    assert_eq!(
        lambda,
        l_by_size
            .iter()
            .map(|(v, l)| l - j_by_size.get(v).copied().unwrap_or(0))
            .sum::<u64>()
    );
    assert_eq!(&num_classes * &per_class, total_chains);

    Ok(CountingSummary {
        lambda: lambda as u32,
        total_chains,
        per_class,
        num_classes,
        l_by_size,
        j_by_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_sizes_n_21() {
        let table = CosetTable::build(21).unwrap();
        let sizes = table.size_multiset();
        let expect: BTreeMap<u32, u64> = [(1, 1), (2, 1), (3, 2), (6, 2)].into();
        assert_eq!(sizes, expect);
    }

    #[test]
    fn coset_of_9_mod_63() {
        let table = CosetTable::build(63).unwrap();
        let c = table.coset_of(9).unwrap();
        assert_eq!(c.elements, vec![9, 18, 36]);
        assert_eq!(c.leader, 9);
    }

    #[test]
    fn cosets_of_15_explicit() {
        let table = CosetTable::build(15).unwrap();
        let got: Vec<Vec<u64>> = table.cosets().iter().map(|c| c.elements.clone()).collect();
        let expect: Vec<Vec<u64>> = vec![
            vec![0],
            vec![1, 2, 4, 8],
            vec![3, 6, 9, 12],
            vec![5, 10],
            vec![7, 11, 13, 14],
        ];
        assert_eq!(got, expect);
    }

    #[test]
    fn rejects_even_n() {
        assert!(CosetTable::build(10).is_err());
        assert!(CosetTable::build(0).is_err());
    }

    #[test]
    fn partition_property() {
        for n in (1..=1024u64).step_by(2) {
            let table = CosetTable::build(n).unwrap();
            let total: usize = table.cosets().iter().map(|c| c.elements.len()).sum();
            assert_eq!(total as u64, n, "n={n}");
            // Closure under doubling and leader minimality.
            for c in table.cosets() {
                let set: BTreeSet<u64> = c.elements.iter().copied().collect();
                assert_eq!(c.leader, *set.iter().next().unwrap());
                for &e in &set {
                    assert!(set.contains(&(2 * e % n)));
                }
            }
        }
    }

    #[test]
    fn count_formula_examples() {
        assert_eq!(count_cosets_of_size(21, 3).unwrap(), 2);
        assert_eq!(count_cosets_of_size(21, 6).unwrap(), 2);
        // Direct tally is the oracle: the only size-1 coset mod 63 is {0}.
        assert_eq!(count_cosets_of_size(63, 1).unwrap(), 1);
        assert!(count_cosets_of_size(21, 4).is_err());
    }

    #[test]
    fn count_formula_matches_tally_up_to_255() {
        for n in (1..=255u64).step_by(2) {
            let m = numtheory::mult_order(2, n).unwrap();
            let sizes = CosetTable::build(n).unwrap().size_multiset();
            for v in 1..=m {
                if !m.is_multiple_of(v) {
                    continue;
                }
                let formula = count_cosets_of_size(n, v).unwrap();
                assert_eq!(formula, sizes.get(&v).copied().unwrap_or(0), "n={n} v={v}");
            }
        }
    }

    #[test]
    fn chain_counts_example_code() {
        // n = 21, generator covering the two size-3 cosets.
        let generators: BTreeSet<u64> = [3, 9].into();
        let s = chain_counts(21, &generators).unwrap();
        assert_eq!(s.lambda, 4);
        assert_eq!(s.total_chains, BigUint::from(24u32));
        assert_eq!(s.per_class, BigUint::from(2u32));
        assert_eq!(s.num_classes, BigUint::from(12u32));
    }

    #[test]
    fn chain_counts_rm_cases() {
        // Second-order punctured Reed-Muller codes: m=5 and m=6.
        // m=5: nonzeros {0, D_-1, D_-3, D_-5}; generator covers the rest.
        let table = CosetTable::build(31).unwrap();
        let nonzero: BTreeSet<u64> = [0, 15, 7, 11].into();
        let gens: BTreeSet<u64> = table.leaders().filter(|l| !nonzero.contains(l)).collect();
        let s = chain_counts(31, &gens).unwrap();
        assert_eq!(s.lambda, 4);
        assert_eq!(s.total_chains, BigUint::from(24u32));
        assert_eq!(s.per_class, BigUint::from(6u32));
        assert_eq!(s.num_classes, BigUint::from(4u32));

        let table = CosetTable::build(63).unwrap();
        let nonzero: BTreeSet<u64> = [0, 31, 15, 23, 27].into();
        let gens: BTreeSet<u64> = table.leaders().filter(|l| !nonzero.contains(l)).collect();
        let s = chain_counts(63, &gens).unwrap();
        assert_eq!(s.lambda, 5);
        assert_eq!(s.total_chains, BigUint::from(120u32));
        assert_eq!(s.per_class, BigUint::from(6u32));
        assert_eq!(s.num_classes, BigUint::from(20u32));
    }

    #[test]
    fn chain_counts_rejects_unknown_leader() {
        let gens: BTreeSet<u64> = [2].into(); // 2 is in the coset of 1
        assert!(matches!(
            chain_counts(21, &gens),
            Err(Error::UnknownLeader { .. })
        ));
    }
}
