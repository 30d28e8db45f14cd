use crate::error::{PursuitError, Result};

/// Ordered set of distinct 0-based column indices. Insertion order is kept:
/// the atom added at iteration `k` sits at position `k - 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a support from `indices`, rejecting duplicates.
    pub fn from_indices(indices: Vec<usize>) -> Result<Self> {
        for (p, i) in indices.iter().enumerate() {
            if indices[..p].contains(i) {
                return Err(PursuitError::InvalidArgument(format!(
                    "support index {i} appears more than once"
                )));
            }
        }
        Ok(Self { indices })
    }

    pub(crate) fn from_ordered_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(Self::from_indices(indices.clone()).is_ok());
        Self { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.indices.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.indices
    }

    /// Appends `index`; fails if it is already present.
    pub fn push(&mut self, index: usize) -> Result<()> {
        if self.contains(index) {
            return Err(PursuitError::InvalidArgument(format!(
                "index {index} is already in the support"
            )));
        }
        self.indices.push(index);
        Ok(())
    }

    /// Copy of `self` with `index` appended.
    pub fn with(&self, index: usize) -> Result<Self> {
        let mut out = self.clone();
        out.push(index)?;
        Ok(out)
    }

    /// `self` followed by the members of `other` not already present.
    pub fn union(&self, other: &SupportSet) -> Self {
        let mut out = self.clone();
        for &i in other.iter() {
            if !out.contains(i) {
                out.indices.push(i);
            }
        }
        out
    }

    pub fn is_disjoint(&self, other: &SupportSet) -> bool {
        other.iter().all(|i| !self.contains(*i))
    }

    pub fn intersection_count(&self, other: &SupportSet) -> usize {
        other.iter().filter(|i| self.contains(**i)).count()
    }

    /// Indices in ascending order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }

    pub(crate) fn check_bounds(&self, n: usize) -> Result<()> {
        match self.indices.iter().find(|&&i| i >= n) {
            Some(i) => Err(PursuitError::InvalidArgument(format!(
                "support index {i} out of range for {n} columns"
            ))),
            None => Ok(()),
        }
    }
}

impl<'a> IntoIterator for &'a SupportSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.indices.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert!(SupportSet::from_indices(vec![1, 2, 1]).is_err());
        let mut s = SupportSet::from_indices(vec![3, 0]).unwrap();
        assert!(s.push(3).is_err());
        s.push(7).unwrap();
        assert_eq!(s.as_slice(), &[3, 0, 7]);
    }

    #[test]
    fn union_keeps_order() {
        let a = SupportSet::from_indices(vec![4, 1]).unwrap();
        let b = SupportSet::from_indices(vec![1, 9, 2]).unwrap();
        assert_eq!(a.union(&b).as_slice(), &[4, 1, 9, 2]);
        assert_eq!(a.intersection_count(&b), 1);
        assert!(!a.is_disjoint(&b));
    }
}
