//! Cyclic subcode chains: enumeration, distance/dimension profiles, the
//! inverse dictionary order, and the optimum-profile searches under
//! Standard I (fixed dimension profile) and Standard II (unconstrained).
//!
//! A chain is stored smallest-code-first: order[0] generates the last code of
//! the nested family, and each longer prefix adds one cyclotomic coset. The
//! profile is reported the other way round (largest code first). The inverse
//! dictionary order compares from the small-code end, so the best-first
//! search fixes the last profile entry first, then the next among the
//! survivors, and so on. Every constrained prefix extends to a full
//! constrained chain, which makes the level-by-level filtering exact rather
//! than heuristic; an exhaustive fallback is kept for validation.
//!
//! Distances of the 2^lambda distinct prefix codes are shared across all
//! lambda! chains through a cache keyed by (n, sorted leader set), which can
//! be persisted as line-oriented records.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::cosets::{factorial, CosetTable};
use crate::cyclic::{self, CyclicCode, EnumOptions, WeightDistribution};
use crate::{Error, Result};

/// An ordering of the addable coset leaders, smallest code first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub base_n: u64,
    pub order: Vec<u64>,
}

/// Minimum distances indexed largest code first (non-decreasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile(pub Vec<u32>);

/// Dimensions indexed largest code first (strictly decreasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionProfile(pub Vec<u32>);

impl fmt::Display for DistanceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", itertools::join(&self.0, ","))
    }
}

impl fmt::Display for DimensionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", itertools::join(&self.0, ","))
    }
}

/// Compare two equal-length profiles in the inverse dictionary order:
/// a > b iff at the highest index where they differ, a is larger.
pub fn cmp_inv_dict(a: &DistanceProfile, b: &DistanceProfile) -> Result<Ordering> {
    if a.0.len() != b.0.len() {
        return Err(Error::LengthMismatch { left: a.0.len(), right: b.0.len() });
    }
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    Ok(Ordering::Equal)
}

/// Cached result for one code: minimum distance and, when it has been
/// computed, the full weight distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheEntry {
    pub distance: u32,
    pub weights: Option<BTreeMap<u32, u64>>,
}

/// Persistent map (n, sorted nonzero leaders) -> distance data.
///
/// The key is chain-order independent, so the 2^lambda distinct prefix codes
/// are shared across all lambda! chains of a search.
#[derive(Debug, Default, Clone)]
pub struct DistanceCache {
    entries: HashMap<(u64, Vec<u64>), CacheEntry>,
}

fn cache_key(n: u64, leaders: &BTreeSet<u64>) -> (u64, Vec<u64>) {
    (n, leaders.iter().copied().collect())
}

impl DistanceCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: u64, leaders: &BTreeSet<u64>) -> Option<&CacheEntry> {
        self.entries.get(&cache_key(n, leaders))
    }

    pub fn insert_distance(&mut self, n: u64, leaders: &BTreeSet<u64>, distance: u32) {
        self.entries
            .entry(cache_key(n, leaders))
            .or_insert(CacheEntry { distance, weights: None });
    }

    /// Minimum distance of the code, from the cache or computed and cached.
    pub fn distance_of(&mut self, code: &CyclicCode, opts: &EnumOptions) -> Result<u32> {
        if let Some(e) = self.entries.get(&cache_key(code.n, &code.nonzero_leaders)) {
            return Ok(e.distance);
        }
        let d = cyclic::min_distance(code, opts)?;
        self.insert_distance(code.n, &code.nonzero_leaders, d);
        Ok(d)
    }

    /// Weight distribution of the code, cached alongside the distance.
    pub fn weights_of(
        &mut self,
        code: &CyclicCode,
        opts: &EnumOptions,
    ) -> Result<WeightDistribution> {
        let key = cache_key(code.n, &code.nonzero_leaders);
        if let Some(e) = self.entries.get(&key) {
            if let Some(w) = &e.weights {
                return Ok(WeightDistribution {
                    counts: w.iter().map(|(&k, &v)| (k, v as u128)).collect(),
                });
            }
        }
        let wd = cyclic::weight_distribution(code, opts)?;
        let smalls: Option<BTreeMap<u32, u64>> = wd
            .counts
            .iter()
            .map(|(&w, &c)| u64::try_from(c).ok().map(|c| (w, c)))
            .collect();
        if let Some(weights) = smalls {
            let distance = wd.min_nonzero_weight().unwrap_or(0);
            let entry = self
                .entries
                .entry(key)
                .or_insert(CacheEntry { distance, weights: None });
            entry.weights = Some(weights);
        }
        Ok(wd)
    }

    /// One record per line: {"d":..,"leaders":[..],"n":..} with an optional
    /// "wd":[[weight,count],..]. Lines are emitted in sorted key order, so a
    /// save/load round trip is the identity.
    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut keys: Vec<_> = self.entries.keys().collect();
        keys.sort();
        let mut out = String::new();
        for key in keys {
            let entry = &self.entries[key];
            let mut record = json!({
                "n": key.0,
                "leaders": key.1,
                "d": entry.distance,
            });
            if let Some(wd) = &entry.weights {
                let pairs: Vec<Value> = wd.iter().map(|(&w, &c)| json!([w, c])).collect();
                record["wd"] = Value::Array(pairs);
            }
            out.push_str(&record.to_string());
            out.push('\n');
        }
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::Io(format!("cannot create {}: {e}", path.display())))?;
        file.write_all(out.as_bytes())
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(())
    }

    /// Load records, skipping corrupt lines with a warning on stderr.
    /// Merging keeps the most informative entry per key (weights beat none).
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let mut cache = Self::new();
        if !path.exists() {
            return Ok(cache);
        }
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("cannot open {}: {e}", path.display())))?;
        for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::Io(format!("read error: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            match parse_cache_line(&line) {
                Some((key, entry)) => cache.merge_entry(key, entry),
                None => eprintln!(
                    "warning: skipping corrupt cache line {} in {}",
                    lineno + 1,
                    path.display()
                ),
            }
        }
        Ok(cache)
    }

    fn merge_entry(&mut self, key: (u64, Vec<u64>), entry: CacheEntry) {
        match self.entries.get_mut(&key) {
            None => {
                self.entries.insert(key, entry);
            }
            Some(existing) => {
                if existing.distance != entry.distance {
                    eprintln!(
                        "warning: conflicting cached distances for n={} {:?}; keeping {}",
                        key.0, key.1, existing.distance
                    );
                    return;
                }
                if existing.weights.is_none() {
                    existing.weights = entry.weights;
                }
            }
        }
    }

    /// Merge another cache into this one.
    pub fn merge(&mut self, other: DistanceCache) {
        for (key, entry) in other.entries {
            self.merge_entry(key, entry);
        }
    }

    /// Recompute up to `sample` entries from scratch (cheapest dimensions
    /// first) and fail if any cached distance disagrees.
    pub fn audit_sample(&self, sample: usize, opts: &EnumOptions) -> Result<()> {
        let mut keys: Vec<_> = self.entries.keys().collect();
        keys.sort();
        let mut audited = 0;
        for key in keys {
            if audited == sample {
                break;
            }
            let leaders: BTreeSet<u64> = key.1.iter().copied().collect();
            let code = cyclic::code_from_leaders(key.0, &leaders)?;
            if code.dimension > opts.max_dimension {
                continue;
            }
            let fresh = cyclic::min_distance(&code, opts)?;
            let cached = self.entries[key].distance;
            if fresh != cached {
                return Err(Error::Inconsistent(format!(
                    "cache holds d = {cached} for n = {}, leaders {:?}, but recomputation gives {fresh}",
                    key.0, key.1
                )));
            }
            audited += 1;
        }
        Ok(())
    }
}

fn parse_cache_line(line: &str) -> Option<((u64, Vec<u64>), CacheEntry)> {
    let v: Value = serde_json::from_str(line).ok()?;
    let n = v.get("n")?.as_u64()?;
    let leaders: Vec<u64> = v
        .get("leaders")?
        .as_array()?
        .iter()
        .map(|x| x.as_u64())
        .collect::<Option<_>>()?;
    if leaders.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let distance = u32::try_from(v.get("d")?.as_u64()?).ok()?;
    let weights = match v.get("wd") {
        None => None,
        Some(Value::Array(pairs)) => {
            let mut map = BTreeMap::new();
            for p in pairs {
                let p = p.as_array()?;
                if p.len() != 2 {
                    return None;
                }
                map.insert(u32::try_from(p[0].as_u64()?).ok()?, p[1].as_u64()?);
            }
            Some(map)
        }
        Some(_) => return None,
    };
    Some(((n, leaders), CacheEntry { distance, weights }))
}

/// All lambda! chains of the code, as a lazy stream in lexicographic order
/// of the leader sequences.
pub fn enumerate_chains(code: &CyclicCode) -> impl Iterator<Item = Chain> + '_ {
    use itertools::Itertools;
    let leaders: Vec<u64> = code.nonzero_leaders.iter().copied().collect();
    let len = leaders.len();
    leaders
        .into_iter()
        .permutations(len)
        .map(move |order| Chain { base_n: code.n, order })
}

fn prefix_code(n: u64, prefix: &[u64]) -> Result<CyclicCode> {
    cyclic::code_from_leaders(n, &prefix.iter().copied().collect())
}

/// Distance and dimension profiles of one chain, largest code first.
/// Prefix distances come from the cache, which is populated on the way.
pub fn chain_profiles(
    chain: &Chain,
    cache: &mut DistanceCache,
    opts: &EnumOptions,
) -> Result<(DistanceProfile, DimensionProfile)> {
    let lambda = chain.order.len();
    if lambda == 0 {
        return Err(Error::BadParameter("empty chain".into()));
    }
    let distinct: BTreeSet<u64> = chain.order.iter().copied().collect();
    if distinct.len() != lambda {
        return Err(Error::BadParameter("repeated leader in chain".into()));
    }
    let mut d_small_first = Vec::with_capacity(lambda);
    let mut dims_small_first = Vec::with_capacity(lambda);
    for p in 1..=lambda {
        let code = prefix_code(chain.base_n, &chain.order[..p])?;
        d_small_first.push(cache.distance_of(&code, opts)?);
        dims_small_first.push(code.dimension);
    }
    // Subcode monotonicity: growing the code can only lower the distance.
    assert!(
        d_small_first.windows(2).all(|w| w[0] >= w[1]),
        "distance profile not monotone for chain {:?}",
        chain.order
    );
    d_small_first.reverse();
    dims_small_first.reverse();
    Ok((DistanceProfile(d_small_first), DimensionProfile(dims_small_first)))
}

/// Which comparison standard a search ran under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Standard {
    I,
    II,
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Standard::I => write!(f, "I"),
            Standard::II => write!(f, "II"),
        }
    }
}

/// Constraints on the chain family searched.
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Only chains whose dimension profile equals this one (Standard I).
    pub class: Option<DimensionProfile>,
    /// Only chains beginning with exactly these leaders, in order.
    pub forced_prefix: Vec<u64>,
}

/// Result of an optimum-profile search.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub standard: Standard,
    pub profile: DistanceProfile,
    /// Dimension profile of the canonical (lexicographically smallest)
    /// witness chain.
    pub dims: DimensionProfile,
    /// Every chain achieving the optimum, sorted lexicographically.
    pub witnesses: Vec<Vec<u64>>,
    /// Prefix evaluations performed (cache hits included).
    pub explored: u64,
    pub class_filter: Option<DimensionProfile>,
}

impl SearchReport {
    /// Canonical JSON form (serde_json orders keys).
    pub fn to_json(&self) -> Value {
        json!({
            "standard": self.standard.to_string(),
            "profile": self.profile.0,
            "dims": self.dims.0,
            "witnesses": self.witnesses,
            "explored": self.explored,
        })
    }
}

const MAX_SEARCH_LAMBDA: usize = 10;

struct SearchPlan {
    leaders: Vec<u64>,
    /// Required coset size at each position, when a class filter is present.
    size_seq: Option<Vec<u32>>,
    sizes: HashMap<u64, u32>,
    forced: Vec<u64>,
}

fn plan_search(code: &CyclicCode, options: &SearchOptions) -> Result<SearchPlan> {
    let leaders: Vec<u64> = code.nonzero_leaders.iter().copied().collect();
    let lambda = leaders.len();
    if lambda == 0 {
        return Err(Error::BadParameter("code has no nonzero cosets".into()));
    }
    if lambda > MAX_SEARCH_LAMBDA {
        return Err(Error::BadParameter(format!(
            "search over {lambda}! chains is not feasible (limit lambda <= {MAX_SEARCH_LAMBDA})"
        )));
    }
    let table = CosetTable::build(code.n)?;
    let sizes: HashMap<u64, u32> = leaders
        .iter()
        .map(|&l| (l, table.coset_of(l).unwrap().elements.len() as u32))
        .collect();

    let size_seq = match &options.class {
        None => None,
        Some(class) => {
            if class.0.len() != lambda {
                return Err(Error::BadParameter(format!(
                    "dimension profile length {} does not match lambda = {lambda}",
                    class.0.len()
                )));
            }
            if class.0[0] != code.dimension {
                return Err(Error::BadParameter(format!(
                    "dimension profile must start at the full dimension {}",
                    code.dimension
                )));
            }
            // Added coset size at position p, smallest code first.
            let mut seq = Vec::with_capacity(lambda);
            for p in 0..lambda {
                let above = class.0[lambda - 1 - p];
                let below = if p == 0 { 0 } else { class.0[lambda - p] };
                if above <= below {
                    return Err(Error::BadParameter(
                        "dimension profile is not strictly decreasing".into(),
                    ));
                }
                seq.push(above - below);
            }
            let mut want: Vec<u32> = seq.clone();
            want.sort_unstable();
            let mut have: Vec<u32> = sizes.values().copied().collect();
            have.sort_unstable();
            if want != have {
                return Err(Error::BadParameter(format!(
                    "no chain realizes dimension profile {class}"
                )));
            }
            Some(seq)
        }
    };

    let forced = options.forced_prefix.clone();
    if forced.len() > lambda {
        return Err(Error::BadParameter("forced prefix longer than the chain".into()));
    }
    let forced_set: BTreeSet<u64> = forced.iter().copied().collect();
    if forced_set.len() != forced.len() || !forced_set.iter().all(|l| sizes.contains_key(l)) {
        return Err(Error::BadParameter(
            "forced prefix must list distinct nonzero-coset leaders".into(),
        ));
    }
    Ok(SearchPlan { leaders, size_seq, sizes, forced })
}

fn allowed_at(plan: &SearchPlan, position: usize, used: &[u64]) -> Vec<u64> {
    plan.leaders
        .iter()
        .copied()
        .filter(|l| !used.contains(l))
        .filter(|l| match &plan.size_seq {
            Some(seq) => plan.sizes[l] == seq[position],
            None => true,
        })
        .filter(|l| match plan.forced.get(position) {
            Some(f) => l == f,
            None => true,
        })
        .collect()
}

/// Best-first lexicographic search from the small-code end: fix the largest
/// attainable distance for the first added coset, then for the second among
/// the survivors, and so on.
pub fn odpc_search(
    code: &CyclicCode,
    cache: &mut DistanceCache,
    opts: &EnumOptions,
    options: &SearchOptions,
    standard: Standard,
) -> Result<SearchReport> {
    let plan = plan_search(code, options)?;
    let lambda = plan.leaders.len();
    let mut survivors: Vec<Vec<u64>> = vec![Vec::new()];
    let mut profile_small_first: Vec<u32> = Vec::with_capacity(lambda);
    let mut explored = 0u64;
    for position in 0..lambda {
        let mut best: Option<u32> = None;
        let mut next: Vec<(Vec<u64>, u32)> = Vec::new();
        for prefix in &survivors {
            for leader in allowed_at(&plan, position, prefix) {
                let mut extended = prefix.clone();
                extended.push(leader);
                let pcode = prefix_code(code.n, &extended)?;
                let d = cache.distance_of(&pcode, opts)?;
                explored += 1;
                if best.is_none_or(|b| d > b) {
                    best = Some(d);
                }
                next.push((extended, d));
            }
        }
        let best =
            best.ok_or_else(|| Error::BadParameter("no chain satisfies the constraints".into()))?;
        survivors = next
            .into_iter()
            .filter(|(_, d)| *d == best)
            .map(|(p, _)| p)
            .collect();
        profile_small_first.push(best);
    }
    let mut witnesses = survivors;
    witnesses.sort();
    let canonical = Chain { base_n: code.n, order: witnesses[0].clone() };
    let (profile, dims) = chain_profiles(&canonical, cache, opts)?;
    debug_assert_eq!(
        profile.0,
        profile_small_first.iter().rev().copied().collect::<Vec<_>>()
    );
    Ok(SearchReport {
        standard,
        profile,
        dims,
        witnesses,
        explored,
        class_filter: options.class.clone(),
    })
}

/// Exhaustive fallback: walk every constrained chain, compare full profiles.
pub fn odpc_exhaustive(
    code: &CyclicCode,
    cache: &mut DistanceCache,
    opts: &EnumOptions,
    options: &SearchOptions,
    standard: Standard,
) -> Result<SearchReport> {
    let plan = plan_search(code, options)?;
    let lambda = plan.leaders.len();
    let mut best: Option<(DistanceProfile, Vec<Vec<u64>>)> = None;
    let mut explored = 0u64;
    let mut stack: Vec<Vec<u64>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == lambda {
            explored += lambda as u64;
            let chain = Chain { base_n: code.n, order: prefix.clone() };
            let (profile, _) = chain_profiles(&chain, cache, opts)?;
            match &mut best {
                None => best = Some((profile, vec![prefix])),
                Some((bp, wits)) => match cmp_inv_dict(&profile, bp)? {
                    Ordering::Greater => best = Some((profile, vec![prefix])),
                    Ordering::Equal => wits.push(prefix),
                    Ordering::Less => {}
                },
            }
            continue;
        }
        for leader in allowed_at(&plan, prefix.len(), &prefix) {
            let mut extended = prefix.clone();
            extended.push(leader);
            stack.push(extended);
        }
    }
    let (profile, mut witnesses) =
        best.ok_or_else(|| Error::BadParameter("no chain satisfies the constraints".into()))?;
    witnesses.sort();
    let canonical = Chain { base_n: code.n, order: witnesses[0].clone() };
    let (_, dims) = chain_profiles(&canonical, cache, opts)?;
    Ok(SearchReport {
        standard,
        profile,
        dims,
        witnesses,
        explored,
        class_filter: options.class.clone(),
    })
}

/// Optimum distance profile over all chains (Standard II).
pub fn odpc_standard_ii(
    code: &CyclicCode,
    cache: &mut DistanceCache,
    opts: &EnumOptions,
) -> Result<SearchReport> {
    odpc_search(code, cache, opts, &SearchOptions::default(), Standard::II)
}

/// Optimum distance profile within one dimension-profile class (Standard I).
pub fn odpc_standard_i(
    code: &CyclicCode,
    class: &DimensionProfile,
    cache: &mut DistanceCache,
    opts: &EnumOptions,
) -> Result<SearchReport> {
    let options = SearchOptions { class: Some(class.clone()), forced_prefix: Vec::new() };
    odpc_search(code, cache, opts, &options, Standard::I)
}

/// All dimension-profile classes with the per-class chain count mu.
/// Classes are returned in descending lexicographic order of the profiles.
pub fn list_classes(code: &CyclicCode) -> Result<Vec<(DimensionProfile, BigUint)>> {
    let table = CosetTable::build(code.n)?;
    let mut sizes: Vec<u32> = code
        .nonzero_leaders
        .iter()
        .map(|&l| table.coset_of(l).unwrap().elements.len() as u32)
        .collect();
    if sizes.is_empty() {
        return Err(Error::BadParameter("code has no nonzero cosets".into()));
    }
    sizes.sort_unstable();

    let mut mu = BigUint::from(1u32);
    {
        let mut run = 1u64;
        for i in 1..=sizes.len() {
            if i < sizes.len() && sizes[i] == sizes[i - 1] {
                run += 1;
            } else {
                mu *= factorial(run);
                run = 1;
            }
        }
    }

    // Distinct permutations of the size multiset, in lexicographic order.
    let mut classes = Vec::new();
    let mut seq = sizes.clone();
    loop {
        let mut dims = Vec::with_capacity(seq.len());
        let mut acc = 0u32;
        for &s in &seq {
            acc += s;
            dims.push(acc);
        }
        dims.reverse();
        classes.push((DimensionProfile(dims), mu.clone()));
        if classes.len() > 1_000_000 {
            return Err(Error::BadParameter("too many classes to list".into()));
        }
        // Next lexicographic permutation of the multiset.
        let Some(i) = (0..seq.len() - 1).rev().find(|&i| seq[i] < seq[i + 1]) else {
            break;
        };
        let j = (i + 1..seq.len()).rev().find(|&j| seq[j] > seq[i]).unwrap();
        seq.swap(i, j);
        seq[i + 1..].reverse();
    }
    classes.sort_by(|a, b| b.0 .0.cmp(&a.0 .0));
    // The class partition covers all lambda! chains.
    debug_assert_eq!(
        BigUint::from(classes.len() as u64) * &mu,
        factorial(sizes.len() as u64)
    );
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::code_from_leaders;

    fn code(n: u64, leaders: &[u64]) -> CyclicCode {
        code_from_leaders(n, &leaders.iter().copied().collect()).unwrap()
    }

    fn opts() -> EnumOptions {
        EnumOptions::default()
    }

    #[test]
    fn cmp_inv_dict_examples() {
        let p = |v: &[u32]| DistanceProfile(v.to_vec());
        assert_eq!(
            cmp_inv_dict(&p(&[2, 6, 6, 8]), &p(&[2, 6, 6, 8])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            cmp_inv_dict(&p(&[7, 11, 15, 31]), &p(&[7, 11, 12, 16])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            cmp_inv_dict(&p(&[3, 5, 7, 15]), &p(&[3, 6, 7, 15])).unwrap(),
            Ordering::Less
        );
        assert!(cmp_inv_dict(&p(&[1]), &p(&[1, 2])).is_err());
    }

    #[test]
    fn enumerate_chain_counts() {
        let c = code(21, &[0, 1, 5, 7]);
        assert_eq!(enumerate_chains(&c).count(), 24);
        let single = code(15, &[0]);
        assert_eq!(enumerate_chains(&single).count(), 1);
        for chain in enumerate_chains(&c) {
            let set: BTreeSet<u64> = chain.order.iter().copied().collect();
            assert_eq!(set, c.nonzero_leaders);
        }
    }

    #[test]
    fn example_chain_profile_n21() {
        // Smallest code first: one size-6 coset, then {7,14}, then {0}, then
        // the other size-6 coset. Expected DPC (2,6,6,8), dims (15,9,8,6).
        let mut cache = DistanceCache::new();
        let expect_d = DistanceProfile(vec![2, 6, 6, 8]);
        let expect_dims = DimensionProfile(vec![15, 9, 8, 6]);
        for order in [[1u64, 7, 0, 5], [5, 7, 0, 1]] {
            let chain = Chain { base_n: 21, order: order.to_vec() };
            let (d, dims) = chain_profiles(&chain, &mut cache, &opts()).unwrap();
            assert_eq!(dims, expect_dims);
            // Both chains in the class share the DPC.
            assert_eq!(d, expect_d);
        }
    }

    #[test]
    fn nested_profiles_small_m() {
        let mut cache = DistanceCache::new();
        // m = 5 nested chain.
        let chain = Chain { base_n: 31, order: vec![0, 15, 11, 7] };
        let (d, dims) = chain_profiles(&chain, &mut cache, &opts()).unwrap();
        assert_eq!(d, DistanceProfile(vec![7, 11, 15, 31]));
        assert_eq!(dims, DimensionProfile(vec![16, 11, 6, 1]));
        // m = 4 nested chain.
        let chain = Chain { base_n: 15, order: vec![0, 7, 5, 3] };
        let (d, dims) = chain_profiles(&chain, &mut cache, &opts()).unwrap();
        assert_eq!(d, DistanceProfile(vec![3, 5, 7, 15]));
        assert_eq!(dims, DimensionProfile(vec![11, 7, 5, 1]));
    }

    #[test]
    fn standard_i_example_class() {
        let c = code(21, &[0, 1, 5, 7]);
        let mut cache = DistanceCache::new();
        let class = DimensionProfile(vec![15, 9, 8, 6]);
        let report = odpc_standard_i(&c, &class, &mut cache, &opts()).unwrap();
        assert_eq!(report.profile, DistanceProfile(vec![2, 6, 6, 8]));
        assert_eq!(report.witnesses.len(), 2);
        assert_eq!(report.dims, class);
    }

    #[test]
    fn standard_i_rejects_unrealizable_class() {
        let c = code(21, &[0, 1, 5, 7]);
        let mut cache = DistanceCache::new();
        // Needs added sizes 6,1,3,5 but the cosets have sizes 1,2,6,6.
        let class = DimensionProfile(vec![15, 9, 8, 5]);
        assert!(odpc_standard_i(&c, &class, &mut cache, &opts()).is_err());
    }

    #[test]
    fn pruned_matches_exhaustive_small() {
        for (n, leaders) in [(21u64, vec![0u64, 1, 5, 7]), (15, vec![0, 7, 5, 3])] {
            let c = code(n, &leaders);
            let mut cache = DistanceCache::new();
            let pruned = odpc_standard_ii(&c, &mut cache, &opts()).unwrap();
            let exhaustive = odpc_exhaustive(
                &c,
                &mut cache,
                &opts(),
                &SearchOptions::default(),
                Standard::II,
            )
            .unwrap();
            assert_eq!(pruned.profile, exhaustive.profile, "n={n}");
            assert_eq!(pruned.witnesses, exhaustive.witnesses, "n={n}");
        }
    }

    #[test]
    fn standard_ii_dominates_every_class() {
        let c = code(21, &[0, 1, 5, 7]);
        let mut cache = DistanceCache::new();
        let ii = odpc_standard_ii(&c, &mut cache, &opts()).unwrap();
        let classes = list_classes(&c).unwrap();
        assert_eq!(classes.len(), 12);
        for (class, mu) in classes {
            assert_eq!(mu, BigUint::from(2u32));
            let i = odpc_standard_i(&c, &class, &mut cache, &opts()).unwrap();
            assert_ne!(
                cmp_inv_dict(&ii.profile, &i.profile).unwrap(),
                Ordering::Less
            );
        }
    }

    #[test]
    fn forced_prefix_restricts_the_family() {
        let c = code(15, &[0, 7, 5, 3]);
        let mut cache = DistanceCache::new();
        let options = SearchOptions { class: None, forced_prefix: vec![0, 7] };
        let report = odpc_search(&c, &mut cache, &opts(), &options, Standard::II).unwrap();
        for w in &report.witnesses {
            assert_eq!(&w[..2], &[0, 7]);
        }
    }

    #[test]
    fn cache_round_trip_and_merge() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let c = code(15, &[7]);
        let mut cache = DistanceCache::new();
        cache.distance_of(&c, &opts()).unwrap();
        cache.weights_of(&c, &opts()).unwrap();
        cache.save(&path).unwrap();
        let loaded = DistanceCache::load(&path).unwrap();
        assert_eq!(loaded.len(), 1);
        let entry = loaded.get(15, &c.nonzero_leaders).unwrap();
        assert_eq!(entry.distance, 8);
        assert_eq!(entry.weights.as_ref().unwrap().get(&8), Some(&15));
        // Byte-identical second save.
        let before = std::fs::read(&path).unwrap();
        loaded.save(&path).unwrap();
        assert_eq!(before, std::fs::read(&path).unwrap());
    }

    #[test]
    fn cache_audit_catches_poisoned_entries() {
        let c = code(15, &[7]);
        let mut cache = DistanceCache::new();
        cache.distance_of(&c, &opts()).unwrap();
        assert!(cache.audit_sample(10, &opts()).is_ok());
        let mut poisoned = DistanceCache::new();
        poisoned.insert_distance(15, &c.nonzero_leaders, 9);
        assert!(matches!(
            poisoned.audit_sample(10, &opts()),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn cache_skips_corrupt_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        std::fs::write(
            &path,
            "{\"d\":8,\"leaders\":[7],\"n\":15}\nnot json\n{\"d\":5}\n",
        )
        .unwrap();
        let cache = DistanceCache::load(&path).unwrap();
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn cache_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        std::fs::write(&path, "").unwrap();
        assert!(DistanceCache::load(&path).unwrap().is_empty());
    }

    #[test]
    fn list_classes_partition() {
        let c = code(21, &[0, 1, 5, 7]);
        let classes = list_classes(&c).unwrap();
        assert_eq!(classes.len(), 12);
        let mu_total: BigUint = classes.iter().map(|(_, mu)| mu.clone()).sum();
        assert_eq!(mu_total, BigUint::from(24u32));
        // Profiles are distinct and strictly decreasing.
        let set: BTreeSet<Vec<u32>> = classes.iter().map(|(d, _)| d.0.clone()).collect();
        assert_eq!(set.len(), 12);
        for (dims, _) in &classes {
            assert!(dims.0.windows(2).all(|w| w[0] > w[1]));
            assert_eq!(dims.0[0], 15);
        }
    }

    #[test]
    fn report_json_round_trips() {
        let c = code(15, &[0, 7, 5, 3]);
        let mut cache = DistanceCache::new();
        let report = odpc_standard_ii(&c, &mut cache, &opts()).unwrap();
        let text = report.to_json().to_string();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.to_string(), text);
    }
}
