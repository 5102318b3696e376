//! Symmetric multi-indices over the base directions.
//!
//! A multi-index records how many times each base direction occurs, so
//! `(t,x)` and `(x,t)` are the same value. Storage is a dense multiplicity
//! vector of fixed capacity [`MAX_DIM`], which keeps the type `Copy` and
//! cheap to hash when used as part of a jet-coordinate key.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported base dimension.
pub const MAX_DIM: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    dim: u8,
    counts: [u8; MAX_DIM],
}

impl MultiIndex {
    pub fn empty(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "base dimension {dim} out of range");
        MultiIndex {
            dim: dim as u8,
            counts: [0; MAX_DIM],
        }
    }

    pub fn unit(dim: usize, direction: usize) -> Self {
        Self::empty(dim).plus(direction)
    }

    /// Builds a multi-index from a sequence of directions; order is irrelevant.
    pub fn from_directions(dim: usize, directions: &[usize]) -> Self {
        directions.iter().fold(Self::empty(dim), |acc, &d| acc.plus(d))
    }

    pub fn from_counts(counts: &[u8]) -> Self {
        let mut mi = Self::empty(counts.len());
        mi.counts[..counts.len()].copy_from_slice(counts);
        mi
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts[..self.dim()]
    }

    pub fn count(&self, direction: usize) -> usize {
        self.counts[direction] as usize
    }

    pub fn degree(&self) -> usize {
        self.counts().iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.degree() == 0
    }

    /// `Λ + λ`.
    pub fn plus(mut self, direction: usize) -> Self {
        assert!(direction < self.dim(), "direction {direction} out of range");
        self.counts[direction] = self.counts[direction]
            .checked_add(1)
            .expect("multi-index multiplicity overflow");
        self
    }

    /// `Λ - λ`, if `λ` occurs in `Λ`.
    pub fn minus(mut self, direction: usize) -> Option<Self> {
        if direction >= self.dim() || self.counts[direction] == 0 {
            return None;
        }
        self.counts[direction] -= 1;
        Some(self)
    }

    /// Multiset union `Λ + Σ`.
    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let mut out = *self;
        for d in 0..self.dim() {
            out.counts[d] = self.counts[d]
                .checked_add(other.counts[d])
                .expect("multi-index multiplicity overflow");
        }
        Ok(out)
    }

    /// Directions in ascending order, with repetition.
    pub fn directions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        for d in 0..self.dim() {
            out.extend(std::iter::repeat_n(d, self.count(d)));
        }
        out
    }

    /// Number of distinct direction sequences representing this index:
    /// `degree! / prod(multiplicity!)`.
    pub fn orderings(&self) -> u64 {
        let mut acc: u64 = 1;
        let mut seen: u64 = 0;
        for &c in self.counts() {
            // Running product of binomials keeps intermediates exact.
            for j in 1..=c as u64 {
                seen += 1;
                acc = acc * seen / j;
            }
        }
        acc
    }

    /// Is `other` contained in `self` as a sub-multiset?
    pub fn contains(&self, other: &MultiIndex) -> bool {
        self.dim == other.dim && (0..self.dim()).all(|d| self.counts[d] >= other.counts[d])
    }

    /// `self - other`, if `other` is a sub-multiset.
    pub fn difference(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !self.contains(other) {
            return None;
        }
        let mut out = *self;
        for d in 0..self.dim() {
            out.counts[d] -= other.counts[d];
        }
        Some(out)
    }

    /// All multi-indices of degree exactly `k` over `dim` directions, in
    /// canonical order.
    pub fn enumerate(dim: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut counts = vec![0u8; dim];
        fill(&mut counts, 0, k, &mut out);
        out
    }

    /// All multi-indices of degree `0..=k`, by degree.
    pub fn enumerate_up_to(dim: usize, k: usize) -> Vec<MultiIndex> {
        (0..=k).flat_map(|j| Self::enumerate(dim, j)).collect()
    }
}

// Counts are filled greedily from the first direction, so the first index
// emitted has the largest multiplicity on direction 0: (t,t), (t,x), (x,x).
fn fill(counts: &mut [u8], pos: usize, remaining: usize, out: &mut Vec<MultiIndex>) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining as u8;
        out.push(MultiIndex::from_counts(counts));
        return;
    }
    for c in (0..=remaining).rev() {
        counts[pos] = c as u8;
        fill(counts, pos + 1, remaining - c, out);
    }
    counts[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.degree().cmp(&other.degree()))
            // Larger leading multiplicity first, i.e. (t,t) < (t,x) < (x,x).
            .then_with(|| other.counts().cmp(self.counts()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiIndex{:?}", self.directions())
    }
}

/// The base manifold: its dimension and coordinate names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSpec {
    names: Vec<String>,
}

impl BaseSpec {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_DIM {
            return Err(Error::InvalidSpec(format!(
                "base dimension must be between 1 and {MAX_DIM}, got {}",
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidSpec(format!("duplicate base coordinate {n}")));
            }
        }
        Ok(BaseSpec { names })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, direction: usize) -> &str {
        &self.names[direction]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn empty_index(&self) -> MultiIndex {
        MultiIndex::empty(self.dim())
    }

    /// Comma-joined sorted names, e.g. `t,x,x`.
    pub fn render(&self, index: &MultiIndex) -> String {
        index
            .directions()
            .iter()
            .map(|&d| self.names[d].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tx() -> BaseSpec {
        BaseSpec::new(["t", "x"]).unwrap()
    }

    #[test]
    fn add_examples() {
        let xx = MultiIndex::from_directions(1, &[0, 0]);
        let x = MultiIndex::unit(1, 0);
        assert_eq!(xx.add(&x).unwrap(), MultiIndex::from_directions(1, &[0, 0, 0]));
        assert_eq!(xx.add(&MultiIndex::empty(1)).unwrap(), xx);

        let t_x = MultiIndex::from_directions(2, &[0, 1]);
        let x2 = MultiIndex::unit(2, 1);
        let expect = MultiIndex::from_directions(2, &[0, 1, 1]);
        assert_eq!(t_x.add(&x2).unwrap(), expect);
        assert_eq!(x2.add(&t_x).unwrap(), expect);
        assert_eq!(tx().render(&expect), "t,x,x");
    }

    #[test]
    fn add_rejects_dimension_mismatch() {
        let a = MultiIndex::unit(1, 0);
        let b = MultiIndex::unit(2, 0);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn enumerate_examples() {
        let base = tx();
        let deg2: Vec<String> = MultiIndex::enumerate(2, 2).iter().map(|m| base.render(m)).collect();
        assert_eq!(deg2, ["t,t", "t,x", "x,x"]);
        assert_eq!(
            MultiIndex::enumerate(1, 4),
            vec![MultiIndex::from_directions(1, &[0, 0, 0, 0])]
        );
        for n in 1..=3 {
            assert_eq!(MultiIndex::enumerate(n, 0), vec![MultiIndex::empty(n)]);
        }
    }

    #[test]
    fn enumerate_is_sorted() {
        for n in 1..=4 {
            let all = MultiIndex::enumerate_up_to(n, 4);
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn enumerate_counts_match_binomial() {
        for n in 1..=4usize {
            for k in 0..=5usize {
                let got = MultiIndex::enumerate(n, k).len() as u64;
                assert_eq!(got, binomial((n + k - 1) as u64, k as u64), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn orderings_examples() {
        assert_eq!(MultiIndex::from_directions(2, &[0, 1]).orderings(), 2);
        assert_eq!(MultiIndex::from_directions(2, &[1, 1, 1]).orderings(), 1);
        assert_eq!(MultiIndex::from_directions(2, &[0, 0, 1]).orderings(), 3);
        assert_eq!(MultiIndex::empty(3).orderings(), 1);
    }

    // Brute force: count distinct permutations of the direction sequence.
    fn brute_orderings(m: &MultiIndex) -> u64 {
        fn perms(rest: &mut Vec<usize>, acc: &mut Vec<usize>, out: &mut std::collections::BTreeSet<Vec<usize>>) {
            if rest.is_empty() {
                out.insert(acc.clone());
                return;
            }
            for i in 0..rest.len() {
                let d = rest.remove(i);
                acc.push(d);
                perms(rest, acc, out);
                acc.pop();
                rest.insert(i, d);
            }
        }
        let mut out = std::collections::BTreeSet::new();
        perms(&mut m.directions(), &mut Vec::new(), &mut out);
        out.len() as u64
    }

    #[test]
    fn add_laws_exhaustive() {
        for n in 1..=3 {
            let all = MultiIndex::enumerate_up_to(n, 3);
            for a in &all {
                assert_eq!(a.add(&MultiIndex::empty(n)).unwrap(), *a);
                for b in &all {
                    let ab = a.add(b).unwrap();
                    assert_eq!(ab, b.add(a).unwrap());
                    assert_eq!(ab.degree(), a.degree() + b.degree());
                    for c in &all {
                        assert_eq!(ab.add(c).unwrap(), a.add(&b.add(c).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn orderings_against_brute_force() {
        for n in 1..=3 {
            let all = MultiIndex::enumerate_up_to(n, 4);
            for a in &all {
                assert_eq!(a.orderings(), brute_orderings(a));
                for b in &all {
                    if a.degree() + b.degree() > 4 {
                        continue;
                    }
                    let ab = a.add(b).unwrap();
                    assert!(ab.orderings() >= a.orderings() * b.orderings());
                }
            }
        }
    }

    #[test]
    fn base_spec_validation() {
        assert!(BaseSpec::new(Vec::<String>::new()).is_err());
        assert!(BaseSpec::new(["t", "t"]).is_err());
        assert!(BaseSpec::new(["a", "b", "c", "d", "e"]).is_err());
        assert_eq!(tx().index_of("x"), Some(1));
    }
}
