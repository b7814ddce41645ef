//! Seeded instance families: progressions, subgroups, random sets, the
//! multi-prime construction with no small model, and a small explorer for
//! sums of prime multiples.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Limits};
use crate::set::GroupSet;
use crate::sumset::{doubling, DoublingReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// {base + Σ l_j v_j : 0 ≤ l_j < L_j}
    Progression { group: Vec<u64>, base: Vec<u64>, generators: Vec<(Vec<u64>, u64)> },
    Subgroup { group: Vec<u64>, generators: Vec<Vec<u64>> },
    /// A uniformly random subset of size ⌊density·|G|⌋ (at least 1).
    Random { group: Vec<u64>, density: Ratio<i64>, seed: u64 },
    /// A random subset of a progression with the given relative density.
    RandomInProgression { group: Vec<u64>, generators: Vec<(Vec<u64>, u64)>, density: Ratio<i64>, seed: u64 },
    Counterexample { primes: Vec<u64>, q: u64 },
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub set: GroupSet,
    pub doubling: DoublingReport,
    pub notes: Vec<String>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_size(density: &Ratio<i64>, n: usize) -> Result<usize> {
    if *density <= Ratio::from_integer(0) || *density > Ratio::from_integer(1) {
        return Err(Error::domain(format!("density {density} outside (0, 1]")));
    }
    let k = (*density * Ratio::from_integer(n as i64)).floor().to_integer() as usize;
    Ok(k.max(1))
}

/// A seeded sample of `k` distinct indices from `pool`, returned sorted.
fn sample(pool: &[usize], k: usize, seed: u64) -> Vec<usize> {
    let mut r = rng(seed);
    let mut v: Vec<usize> = pool.choose_multiple(&mut r, k).copied().collect();
    v.sort_unstable();
    v
}

pub fn gen_progression(group: &[u64], base: &[u64], generators: &[(Vec<u64>, u64)]) -> Result<GroupSet> {
    let spec = GroupSpec::new(group.to_vec())?;
    let base = GroupElement::new(base.to_vec());
    spec.check_element(&base)?;
    let mut current = vec![spec.index(&base)];
    for (v, len) in generators {
        let v = GroupElement::new(v.clone());
        spec.check_element(&v)?;
        if *len == 0 {
            return Err(Error::domain("progression length must be positive"));
        }
        let vi = spec.index(&v);
        current = current
            .iter()
            .flat_map(|&x| (0..*len as i64).map(move |l| (x, l)))
            .map(|(x, l)| spec.add_idx(x, spec.scale_idx(vi, l)))
            .collect();
        current.sort_unstable();
        current.dedup();
    }
    Ok(GroupSet::from_indices(spec, current))
}

pub fn gen_subgroup(group: &[u64], generators: &[Vec<u64>], limits: &Limits) -> Result<GroupSet> {
    let spec = GroupSpec::new(group.to_vec())?;
    let gens: Vec<GroupElement> = generators.iter().map(|g| GroupElement::new(g.clone())).collect();
    let h = spec.subgroup_closure(&gens, limits)?;
    Ok(GroupSet::from_indices(spec, h.element_indices().to_vec()))
}

pub fn gen_random(group: &[u64], density: &Ratio<i64>, seed: u64, limits: &Limits) -> Result<GroupSet> {
    let spec = GroupSpec::new(group.to_vec())?;
    limits.check_enumeration("random set", spec.cardinality())?;
    let pool: Vec<usize> = (0..spec.cardinality() as usize).collect();
    let k = sample_size(density, pool.len())?;
    Ok(GroupSet::from_indices(spec, sample(&pool, k, seed)))
}

/// A random subset of exactly `size` elements.
pub fn gen_random_of_size(group: &[u64], size: usize, seed: u64, limits: &Limits) -> Result<GroupSet> {
    let spec = GroupSpec::new(group.to_vec())?;
    limits.check_enumeration("random set", spec.cardinality())?;
    if size == 0 || size as u64 > spec.cardinality() {
        return Err(Error::domain(format!("size {size} outside [1, {}]", spec.cardinality())));
    }
    let pool: Vec<usize> = (0..spec.cardinality() as usize).collect();
    Ok(GroupSet::from_indices(spec, sample(&pool, size, seed)))
}

pub fn gen_random_in_progression(
    group: &[u64],
    generators: &[(Vec<u64>, u64)],
    density: &Ratio<i64>,
    seed: u64,
) -> Result<GroupSet> {
    let zero = vec![0; group.len()];
    let p = gen_progression(group, &zero, generators)?;
    let k = sample_size(density, p.len())?;
    Ok(GroupSet::from_indices(p.spec().clone(), sample(p.indices(), k, seed)))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The set of (x, x_1, …, x_k) ∈ Z/Q × ∏ Z/p_i with at most one x_i nonzero.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub set: GroupSet,
    pub doubling: DoublingReport,
    /// Q(Σp_i − k + 1), the count of the described tuples.
    pub counted_size: u64,
    /// Q(Σp_i − k − 1), the cardinality formula as printed in the source.
    pub printed_size: i64,
    /// t = (0, …, 0, 1): in any model ψ(t) − ψ(0) has order p_k.
    pub obstruction: Option<GroupElement>,
}

pub fn gen_counterexample(primes: &[u64], q: u64) -> Result<Counterexample> {
    if !is_prime(q) {
        return Err(Error::domain(format!("Q = {q} is not prime")));
    }
    let mut seen = std::collections::HashSet::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if !seen.insert(p) || p == q {
            return Err(Error::domain(format!("prime {p} repeated")));
        }
    }
    let mut orders = vec![q];
    orders.extend_from_slice(primes);
    let spec = GroupSpec::new(orders)?;
    let k = primes.len();
    let mut idx = Vec::new();
    for x in 0..q {
        let mut c = vec![0u64; k + 1];
        c[0] = x;
        idx.push(spec.index_of_coords(&c));
        for (i, &p) in primes.iter().enumerate() {
            for v in 1..p {
                let mut c = vec![0u64; k + 1];
                c[0] = x;
                c[i + 1] = v;
                idx.push(spec.index_of_coords(&c));
            }
        }
    }
    let set = GroupSet::from_indices(spec.clone(), idx);
    let sum_p: u64 = primes.iter().sum();
    let counted_size = q * (sum_p + 1 - k as u64);
    let printed_size = q as i64 * (sum_p as i64 - k as i64 - 1);
    let obstruction = (k > 0).then(|| {
        let mut c = vec![0u64; k + 1];
        c[k] = 1;
        GroupElement::new(c)
    });
    Ok(Counterexample { doubling: doubling(&set)?, set, counted_size, printed_size, obstruction })
}

pub fn generate(family: &FamilySpec, limits: &Limits) -> Result<Generated> {
    let mut notes = Vec::new();
    let set = match family {
        FamilySpec::Progression { group, base, generators } => gen_progression(group, base, generators)?,
        FamilySpec::Subgroup { group, generators } => gen_subgroup(group, generators, limits)?,
        FamilySpec::Random { group, density, seed } => gen_random(group, density, *seed, limits)?,
        FamilySpec::RandomInProgression { group, generators, density, seed } => {
            gen_random_in_progression(group, generators, density, *seed)?
        }
        FamilySpec::Counterexample { primes, q } => {
            let c = gen_counterexample(primes, *q)?;
            notes.push(format!("counted size {} (printed formula gives {})", c.counted_size, c.printed_size));
            if let Some(t) = &c.obstruction {
                notes.push(format!("obstruction element {t}: any model needs an element of order {}", primes.last().unwrap()));
            }
            c.set
        }
    };
    if set.is_empty() {
        return Err(Error::domain("generated set is empty"));
    }
    Ok(Generated { doubling: doubling(&set)?, set, notes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Greedy,
}

impl std::fmt::Display for SearchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Greedy => "greedy",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreResult {
    pub primes: Vec<u64>,
    pub mode: SearchMode,
    pub multipliers: Vec<u64>,
    pub set: Vec<u64>,
    pub sumset_size: usize,
    /// Number of multiplier vectors evaluated.
    pub evaluated: u64,
}

/// Above this many candidate vectors the search switches to greedy descent.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;

fn integer_sumset_size(s: &[u64]) -> usize {
    let mut sums: Vec<u64> = s.iter().flat_map(|&a| s.iter().map(move |&b| a + b)).collect();
    sums.sort_unstable();
    sums.dedup();
    sums.len()
}

fn build(primes: &[u64], lambda: &[u64]) -> Vec<u64> {
    let mut s: Vec<u64> = primes.iter().zip(lambda).map(|(p, l)| p * l).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Minimizes |S + S| over S = {λ_p p : p prime in [P, 2P)}, 1 ≤ λ_p ≤ X.
pub fn explore_multiple_cover_sumset(p: u64, x: u64, seed: u64) -> Result<ExploreResult> {
    if p < 1 || x < 1 {
        return Err(Error::domain("P and X must be positive"));
    }
    let primes: Vec<u64> = (p..2 * p).filter(|&n| is_prime(n)).collect();
    if primes.is_empty() {
        return Err(Error::domain(format!("no primes in [{p}, {})", 2 * p)));
    }
    let n = primes.len();
    let total = (x as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total <= EXHAUSTIVE_LIMIT as u128 {
        let mut best: Option<(usize, Vec<u64>)> = None;
        let mut lambda = vec![1u64; n];
        let mut evaluated = 0u64;
        loop {
            evaluated += 1;
            let size = integer_sumset_size(&build(&primes, &lambda));
            if best.as_ref().is_none_or(|(b, _)| size < *b) {
                best = Some((size, lambda.clone()));
            }
            // odometer over [1, X]^n, first coordinate slowest
            let mut i = n;
            loop {
                if i == 0 {
                    let (size, lambda) = best.unwrap();
                    return Ok(ExploreResult {
                        set: build(&primes, &lambda),
                        primes,
                        mode: SearchMode::Exhaustive,
                        multipliers: lambda,
                        sumset_size: size,
                        evaluated,
                    });
                }
                i -= 1;
                if lambda[i] < x {
                    lambda[i] += 1;
                    break;
                }
                lambda[i] = 1;
            }
        }
    }
    // seeded coordinate descent from a random start
    let mut r = rng(seed);
    let choices: Vec<u64> = (1..=x).collect();
    let mut lambda: Vec<u64> = (0..n).map(|_| *choices.choose(&mut r).unwrap()).collect();
    let mut size = integer_sumset_size(&build(&primes, &lambda));
    let mut evaluated = 1u64;
    loop {
        let mut improved = false;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        for i in order {
            for &c in &choices {
                if c == lambda[i] {
                    continue;
                }
                let old = lambda[i];
                lambda[i] = c;
                evaluated += 1;
                let s = integer_sumset_size(&build(&primes, &lambda));
                if s < size {
                    size = s;
                    improved = true;
                } else {
                    lambda[i] = old;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(ExploreResult { set: build(&primes, &lambda), primes, mode: SearchMode::Greedy, multipliers: lambda, sumset_size: size, evaluated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn progression_and_subgroup_doubling() {
        let ap = gen_progression(&[32], &[0], &[(vec![1], 5)]).unwrap();
        assert_eq!(doubling(&ap).unwrap().k(), Ratio::new(9, 5));
        let h = gen_subgroup(&[8], &[vec![4]], &lim()).unwrap();
        assert_eq!(h, GroupSet::cyclic(8, &[0, 4]).unwrap());
        assert_eq!(doubling(&h).unwrap().k(), Ratio::from_integer(1));
    }

    #[test]
    fn random_sets_are_seed_deterministic() {
        let a = gen_random(&[64], &Ratio::new(1, 4), 42, &lim()).unwrap();
        let b = gen_random(&[64], &Ratio::new(1, 4), 42, &lim()).unwrap();
        let c = gen_random(&[64], &Ratio::new(1, 4), 43, &lim()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 16);
        assert!(gen_random(&[64], &Ratio::new(0, 1), 1, &lim()).is_err());
    }

    #[test]
    fn random_in_progression_stays_inside() {
        let p = gen_progression(&[100], &[0], &[(vec![3], 20)]).unwrap();
        let a = gen_random_in_progression(&[100], &[(vec![3], 20)], &Ratio::new(1, 2), 7).unwrap();
        assert_eq!(a.len(), 10);
        assert!(a.is_subset(&p));
    }

    /// Counts tuples with at most `m` nonzero prime coordinates directly.
    fn count_support(primes: &[u64], q: u64, m: usize) -> u64 {
        let spec = GroupSpec::new(std::iter::once(q).chain(primes.iter().copied()).collect()).unwrap();
        (0..spec.cardinality() as usize)
            .filter(|&i| spec.coords_of(i)[1..].iter().filter(|&&c| c != 0).count() <= m)
            .count() as u64
    }

    #[test]
    fn counterexample_sizes() {
        let c = gen_counterexample(&[2, 3], 5).unwrap();
        assert_eq!(c.set.len(), 20);
        assert_eq!(c.doubling.sumset_size, 30);
        assert_eq!(c.doubling.k(), Ratio::new(3, 2));
        assert_eq!(c.set.len() as u64, count_support(&[2, 3], 5, 1));
        assert_eq!(c.doubling.sumset_size as u64, count_support(&[2, 3], 5, 2));
        assert_eq!(c.counted_size, 20);
        assert_eq!(c.printed_size, 10);

        let c = gen_counterexample(&[2], 3).unwrap();
        assert_eq!((c.set.len(), c.doubling.sumset_size), (6, 6));

        let c = gen_counterexample(&[], 7).unwrap();
        assert_eq!(c.set.len(), 7);
        assert_eq!(c.doubling.k(), Ratio::from_integer(1));

        assert!(gen_counterexample(&[2, 2], 5).is_err());
        assert!(gen_counterexample(&[4], 5).is_err());
        assert!(gen_counterexample(&[2], 9).is_err());
    }

    /// Brute-force minimum over all multiplier vectors.
    fn oracle_min(primes: &[u64], x: u64) -> usize {
        let n = primes.len();
        let mut best = usize::MAX;
        for code in 0..x.pow(n as u32) {
            let mut c = code;
            let lambda: Vec<u64> = (0..n)
                .map(|_| {
                    let v = c % x + 1;
                    c /= x;
                    v
                })
                .collect();
            let s: std::collections::BTreeSet<u64> = primes.iter().zip(&lambda).map(|(p, l)| p * l).collect();
            let sums: std::collections::BTreeSet<u64> = s.iter().flat_map(|a| s.iter().map(move |b| a + b)).collect();
            best = best.min(sums.len());
        }
        best
    }

    #[test]
    fn explorer_examples() {
        let r = explore_multiple_cover_sumset(5, 1, 0).unwrap();
        assert_eq!(r.primes, vec![5, 7]);
        assert_eq!(r.sumset_size, 3);
        let r = explore_multiple_cover_sumset(5, 2, 0).unwrap();
        assert_eq!(r.evaluated, 4);
        assert_eq!(r.sumset_size, oracle_min(&[5, 7], 2));
        let r = explore_multiple_cover_sumset(11, 3, 0).unwrap();
        assert_eq!(r.primes, vec![11, 13, 17, 19]);
        assert_eq!(r.mode, SearchMode::Exhaustive);
        assert_eq!(r.evaluated, 81);
        assert_eq!(r.sumset_size, oracle_min(&r.primes, 3));
    }

    #[test]
    fn explorer_greedy_is_deterministic() {
        // primes in [50, 100): 10 of them, 8^10 > 2^20 candidates
        let a = explore_multiple_cover_sumset(50, 8, 3).unwrap();
        let b = explore_multiple_cover_sumset(50, 8, 3).unwrap();
        assert_eq!(a.mode, SearchMode::Greedy);
        assert_eq!(a, b);
        assert_eq!(integer_sumset_size(&a.set), a.sumset_size);
    }
}
