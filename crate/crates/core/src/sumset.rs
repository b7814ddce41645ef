//! Exact sumset arithmetic and the Plünnecke–Ruzsa bound.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::set::GroupSet;

/// Above this cardinality sumsets are deduplicated with a hash set instead of
/// a dense membership table.
const DENSE_LIMIT: u64 = 1 << 26;

pub(crate) fn sum_indices(spec: &GroupSpec, a: &[usize], b: &[usize]) -> Vec<usize> {
    if spec.cardinality() <= DENSE_LIMIT {
        let mut seen = vec![false; spec.cardinality() as usize];
        let mut out = Vec::new();
        for &x in a {
            for &y in b {
                let z = spec.add_idx(x, y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                }
            }
        }
        out.sort_unstable();
        out
    } else {
        let set: HashSet<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| spec.add_idx(x, y))).collect();
        let mut out: Vec<usize> = set.into_iter().collect();
        out.sort_unstable();
        out
    }
}

/// A + B.
pub fn sumset(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.same_group(b)?;
    Ok(GroupSet::from_indices(a.spec().clone(), sum_indices(a.spec(), a.indices(), b.indices())))
}

/// A − B.
pub fn difference_set(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    sumset(a, &b.negate())
}

/// kA − lA.
pub fn iterated_sumset(a: &GroupSet, k: usize, l: usize) -> Result<GroupSet> {
    if k + l == 0 {
        return Err(Error::domain("0A - 0A is not defined"));
    }
    let neg = a.negate();
    let mut acc = if k > 0 { a.clone() } else { neg.clone() };
    for _ in 1..k {
        acc = sumset(&acc, a)?;
    }
    for _ in (if k > 0 { 0 } else { 1 })..l {
        acc = sumset(&acc, &neg)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingReport {
    pub set_size: usize,
    pub sumset_size: usize,
}

impl DoublingReport {
    /// K = |A+A| / |A|.
    pub fn k(&self) -> Ratio<i64> {
        Ratio::new(self.sumset_size as i64, self.set_size as i64)
    }

    pub fn k_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.sumset_size), BigInt::from(self.set_size))
    }
}

pub fn doubling(a: &GroupSet) -> Result<DoublingReport> {
    if a.is_empty() {
        return Err(Error::domain("doubling of the empty set"));
    }
    let s = sumset(a, a)?;
    Ok(DoublingReport { set_size: a.len(), sumset_size: s.len() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlunneckeReport {
    pub k: usize,
    pub l: usize,
    /// |kA − lA|
    pub lhs: usize,
    /// K^(k+l) |A|
    pub rhs: BigRational,
    pub holds: bool,
}

pub fn plunnecke_check(a: &GroupSet, k: usize, l: usize) -> Result<PlunneckeReport> {
    let rep = doubling(a)?;
    let s = iterated_sumset(a, k, l)?;
    let rhs = num_traits::pow(rep.k_big(), k + l) * BigInt::from(a.len());
    let lhs_big = BigRational::from_integer(BigInt::from(s.len()));
    Ok(PlunneckeReport { k, l, lhs: s.len(), holds: lhs_big <= rhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    fn cyc(n: u64, v: &[i64]) -> GroupSet {
        GroupSet::cyclic(n, v).unwrap()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&cyc(8, &[0, 1, 2]), &cyc(8, &[0, 1, 2])).unwrap(), cyc(8, &[0, 1, 2, 3, 4]));
        let g = GroupSpec::new(vec![2, 2]).unwrap();
        let all = GroupSet::whole(g);
        assert_eq!(sumset(&all, &all).unwrap(), all);
        let b = cyc(8, &[3, 5, 6]);
        assert_eq!(sumset(&cyc(8, &[0]), &b).unwrap(), b);
    }

    #[test]
    fn iterated_examples() {
        let a = cyc(8, &[0, 1]);
        assert_eq!(iterated_sumset(&a, 2, 2).unwrap(), cyc(8, &[6, 7, 0, 1, 2]));
        assert_eq!(iterated_sumset(&a, 1, 0).unwrap(), a);
        assert!(matches!(iterated_sumset(&a, 0, 0), Err(Error::Domain(_))));

        // brute-force oracle over all triples
        let a = cyc(16, &[0, 1, 3]);
        let mut oracle: Vec<usize> = Vec::new();
        for &x in a.indices() {
            for &y in a.indices() {
                for &z in a.indices() {
                    oracle.push((x + y + 16 - z) % 16);
                }
            }
        }
        assert_eq!(iterated_sumset(&a, 2, 1).unwrap(), GroupSet::from_indices(a.spec().clone(), oracle));
    }

    #[test]
    fn doubling_examples() {
        let r = doubling(&cyc(32, &[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(r.k(), Ratio::new(9, 5));
        let h = cyc(8, &[0, 4]);
        assert_eq!(doubling(&h).unwrap().k(), Ratio::from_integer(1));
        assert!(doubling(&GroupSet::empty(GroupSpec::cyclic(4).unwrap())).is_err());
    }

    #[test]
    fn plunnecke_examples() {
        let r = plunnecke_check(&cyc(8, &[0, 1]), 2, 2).unwrap();
        assert_eq!(r.lhs, 5);
        // (3/2)^4 * 2 = 81/8
        assert_eq!(r.rhs, BigRational::new(81.into(), 8.into()));
        assert!(r.holds);
        let h = cyc(12, &[0, 3, 6, 9]);
        for (k, l) in [(1, 1), (3, 1), (0, 4)] {
            let r = plunnecke_check(&h, k, l).unwrap();
            assert_eq!(r.lhs, 4);
            assert!(r.holds);
        }
    }

    #[test]
    fn mismatched_groups_fail() {
        let a = cyc(8, &[1]);
        let b = GroupSet::new(GroupSpec::cyclic(9).unwrap(), &[GroupElement::new(vec![1])]).unwrap();
        assert!(matches!(sumset(&a, &b), Err(Error::Structural(_))));
    }
}
