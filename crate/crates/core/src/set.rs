use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// A finite subset of a group, stored as sorted, deduplicated element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSet {
    spec: GroupSpec,
    idx: Vec<usize>,
}

impl GroupSet {
    pub fn new(spec: GroupSpec, elements: &[GroupElement]) -> Result<Self> {
        for x in elements {
            spec.check_element(x)?;
        }
        let idx = elements.iter().map(|x| spec.index(x)).collect();
        Ok(Self::from_indices(spec, idx))
    }

    pub fn from_indices(spec: GroupSpec, mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        idx.dedup();
        GroupSet { spec, idx }
    }

    /// Convenience constructor for subsets of a cyclic group.
    pub fn cyclic(n: u64, values: &[i64]) -> Result<Self> {
        let spec = GroupSpec::cyclic(n)?;
        let idx = values.iter().map(|v| v.rem_euclid(n as i64) as usize).collect();
        Ok(Self::from_indices(spec, idx))
    }

    pub fn empty(spec: GroupSpec) -> Self {
        GroupSet { spec, idx: Vec::new() }
    }

    pub fn whole(spec: GroupSpec) -> Self {
        let n = spec.cardinality() as usize;
        GroupSet { spec, idx: (0..n).collect() }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.idx.iter().map(|&i| self.spec.element(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn contains_idx(&self, x: usize) -> bool {
        self.idx.binary_search(&x).is_ok()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.spec.check_element(x).is_ok() && self.contains_idx(self.spec.index(x))
    }

    pub fn is_subset(&self, other: &GroupSet) -> bool {
        self.spec == other.spec && self.idx.iter().all(|&x| other.contains_idx(x))
    }

    pub fn same_group(&self, other: &GroupSet) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::structural(format!(
                "sets live in different groups ({} vs {})",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    /// The set translated by the element with index `t`.
    pub fn translate_idx(&self, t: usize) -> GroupSet {
        let idx = self.idx.iter().map(|&x| self.spec.add_idx(x, t)).collect();
        GroupSet::from_indices(self.spec.clone(), idx)
    }

    pub fn negate(&self) -> GroupSet {
        let idx = self.idx.iter().map(|&x| self.spec.neg_idx(x)).collect();
        GroupSet::from_indices(self.spec.clone(), idx)
    }

    /// |A| / |G| as an exact rational.
    pub fn density(&self) -> num_rational::Ratio<i64> {
        num_rational::Ratio::new(self.len() as i64, self.spec.cardinality() as i64)
    }
}
