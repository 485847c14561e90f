//! Binary relations over `0..n`, stored as sorted successor lists.

use std::collections::BTreeSet;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Relation {
    succ: Vec<Vec<usize>>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Self {
            succ: vec![Vec::new(); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            succ: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Self {
            succ: (0..n).map(|_| (0..n).collect()).collect(),
        }
    }

    /// Pairs outside `0..n` are a caller bug and panic.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut sets = vec![BTreeSet::new(); n];
        for (a, b) in pairs {
            assert!(a < n && b < n, "relation pair ({a},{b}) out of range {n}");
            sets[a].insert(b);
        }
        Self {
            succ: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Size of the carrier set.
    pub fn domain_size(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, a: usize) -> &[usize] {
        &self.succ[a]
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.succ
            .get(a)
            .is_some_and(|s| s.binary_search(&b).is_ok())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs().all(|(a, b)| other.contains(a, b))
    }

    /// `self ∘ first`: a `first`-step followed by a `self`-step.
    pub fn after(&self, first: &Relation) -> Relation {
        compose(self, first)
    }

    /// Keeps only pairs whose endpoints both survive, renumbered by `map`.
    pub(crate) fn restrict(&self, map: &[Option<usize>], n: usize) -> Relation {
        Relation::from_pairs(
            n,
            self.pairs()
                .filter_map(|(a, b)| Some((map[a]?, map[b]?))),
        )
    }
}

/// `r ∘ s = {(x, z) | ∃y. (x, y) ∈ s ∧ (y, z) ∈ r}`: first `s`, then `r`.
pub fn compose(r: &Relation, s: &Relation) -> Relation {
    let n = s.domain_size().max(r.domain_size());
    Relation::from_pairs(
        n,
        s.pairs()
            .flat_map(|(x, y)| r.successors(y).iter().map(move |&z| (x, z))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2), (2, 2)]);
        assert_eq!(compose(&Relation::identity(3), &r), r);
        assert_eq!(compose(&r, &Relation::identity(3)), r);
    }

    #[test]
    fn first_s_then_r() {
        // a=0, b=1, c=2
        let r = Relation::from_pairs(3, [(1, 2)]);
        let s = Relation::from_pairs(3, [(0, 1)]);
        assert_eq!(compose(&r, &s), Relation::from_pairs(3, [(0, 2)]));
        assert!(compose(&s, &r).is_empty());
    }

    #[test]
    fn containment() {
        let r = Relation::from_pairs(2, [(0, 1), (0, 0)]);
        assert!(r.contains(0, 1));
        assert!(!r.contains(1, 0));
        assert!(r.is_subset(&Relation::total(2)));
        assert!(!Relation::total(2).is_subset(&r));
        assert_eq!(r.len(), 2);
    }
}
