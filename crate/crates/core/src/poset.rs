//! Finite posets stored as closed order relations.
//!
//! Every finite poset is treated as a discrete bi-Esakia space, so this type
//! is also the frame object for the semantics and the dual space for the
//! algebra module. Points are dense indices `0..n`; labels are only used for
//! input and output.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pointset::{PointSet, MAX_POINTS};

mod cotree;
mod io;

pub use cotree::{
    canonical_code, classify, enumerate_cotrees, enumerate_posets, make_comb, make_hcomb,
    StructureClass, MAX_ENUMERATION_SIZE,
};
pub use io::FrameJson;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    // up[x] = ↑x, down[x] = ↓x, both reflexive.
    up: Vec<PointSet>,
    down: Vec<PointSet>,
    labels: Vec<String>,
}

impl FinitePoset {
    /// Builds the reflexive-transitive closure of `edges`, each `(a, b)`
    /// read as `a ≤ b`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n));
        }
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for &(a, b) in edges {
            for p in [a, b] {
                if p >= n {
                    return Err(Error::PointOutOfRange { point: p, size: n });
                }
            }
            up[a].insert(b);
        }
        for k in 0..n {
            let via = up[k];
            for row in up.iter_mut() {
                if row.contains(k) {
                    *row = row.union(via);
                }
            }
        }
        let mut down = vec![PointSet::EMPTY; n];
        for (x, row) in up.iter().enumerate() {
            for y in row.iter() {
                down[y].insert(x);
            }
        }
        for x in 0..n {
            if let Some(y) = up[x].intersection(down[x]).difference(PointSet::singleton(x)).first() {
                return Err(Error::Cycle(x.min(y), x.max(y)));
            }
        }
        Ok(FinitePoset {
            up,
            down,
            labels: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    /// Builds a poset from labelled points and `(lower, upper)` label pairs.
    pub fn from_labeled<S: AsRef<str>>(points: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicatePoint(p.as_ref().to_string()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownPoint(s.to_string()))
        };
        let idx_edges = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        let mut poset = FinitePoset::from_edges(points.len(), &idx_edges)?;
        poset.labels = points.iter().map(|p| p.as_ref().to_string()).collect();
        Ok(poset)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }

    pub fn labels_of(&self, s: PointSet) -> Vec<String> {
        s.iter().map(|x| self.labels[x].clone()).collect()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// `↑x`.
    pub fn up_of(&self, x: usize) -> PointSet {
        self.up[x]
    }

    /// `↓x`.
    pub fn down_of(&self, x: usize) -> PointSet {
        self.down[x]
    }

    /// `↑S`.
    pub fn up(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, x| acc.union(self.up[x]))
    }

    /// `↓S`.
    pub fn down(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, x| acc.union(self.down[x]))
    }

    /// Points strictly above some member of `s`.
    pub fn up_strict(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, x| {
            acc.union(self.up[x].difference(PointSet::singleton(x)))
        })
    }

    /// Points strictly below some member of `s`.
    pub fn down_strict(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, x| {
            acc.union(self.down[x].difference(PointSet::singleton(x)))
        })
    }

    /// Maximal elements of `s`.
    pub fn maximal(&self, s: PointSet) -> PointSet {
        s.iter()
            .filter(|&x| self.up[x].intersection(s) == PointSet::singleton(x))
            .collect()
    }

    /// Minimal elements of `s`.
    pub fn minimal(&self, s: PointSet) -> PointSet {
        s.iter()
            .filter(|&x| self.down[x].intersection(s) == PointSet::singleton(x))
            .collect()
    }

    pub fn max_points(&self) -> PointSet {
        self.maximal(self.all())
    }

    pub fn min_points(&self) -> PointSet {
        self.minimal(self.all())
    }

    /// The greatest element.
    pub fn co_root(&self) -> Result<usize> {
        self.points()
            .find(|&x| self.up[x] == PointSet::singleton(x) && self.down[x] == self.all())
            .ok_or(Error::NoGreatestElement)
    }

    /// `{z : z ≺ x}`.
    pub fn immediate_predecessors(&self, x: usize) -> PointSet {
        let below = self.down[x].difference(PointSet::singleton(x));
        self.maximal(below)
    }

    /// `{z : x ≺ z}`.
    pub fn immediate_successors(&self, x: usize) -> PointSet {
        let above = self.up[x].difference(PointSet::singleton(x));
        self.minimal(above)
    }

    /// Cover pairs `(lower, upper)` of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.points()
            .flat_map(|y| self.immediate_predecessors(y).iter().map(move |x| (x, y)))
            .collect()
    }

    pub fn is_upset(&self, s: PointSet) -> bool {
        self.up(s) == s
    }

    pub fn is_downset(&self, s: PointSet) -> bool {
        self.down(s) == s
    }

    pub fn is_chain(&self, s: PointSet) -> bool {
        s.iter()
            .all(|x| s.difference(self.up[x].union(self.down[x])).is_empty())
    }

    /// `[y, x] = ↑y ∩ ↓x`.
    pub fn interval(&self, y: usize, x: usize) -> PointSet {
        self.up[y].intersection(self.down[x])
    }

    /// `|↑x|`, the depth of a point in a co-tree.
    pub fn depth_of(&self, x: usize) -> usize {
        self.up[x].len()
    }

    /// Connected components of the comparability graph, ordered by least point.
    pub fn components(&self) -> Vec<PointSet> {
        let mut seen = PointSet::EMPTY;
        let mut out = Vec::new();
        for x in self.points() {
            if seen.contains(x) {
                continue;
            }
            let mut comp = PointSet::singleton(x);
            loop {
                let next = self.up(comp).union(self.down(comp));
                if next == comp {
                    break;
                }
                comp = next;
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// The subposet on `s`, with the map from new indices to old ones.
    pub fn induced(&self, s: PointSet) -> (FinitePoset, Vec<usize>) {
        let old: Vec<usize> = s.iter().collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &x) in old.iter().enumerate() {
            new_of[x] = i;
        }
        let remap = |set: PointSet| -> PointSet {
            set.intersection(s).iter().map(|x| new_of[x]).collect()
        };
        let sub = FinitePoset {
            up: old.iter().map(|&x| remap(self.up[x])).collect(),
            down: old.iter().map(|&x| remap(self.down[x])).collect(),
            labels: old.iter().map(|&x| self.labels[x].clone()).collect(),
        };
        (sub, old)
    }

    /// The same order transported along `perm` (old point `i` becomes
    /// `perm[i]`), labels included.
    pub fn permuted(&self, perm: &[usize]) -> FinitePoset {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let map = |s: PointSet| -> PointSet { s.iter().map(|x| perm[x]).collect() };
        let mut up = vec![PointSet::EMPTY; n];
        let mut down = vec![PointSet::EMPTY; n];
        let mut labels = vec![String::new(); n];
        for x in 0..n {
            up[perm[x]] = map(self.up[x]);
            down[perm[x]] = map(self.down[x]);
            labels[perm[x]] = self.labels[x].clone();
        }
        FinitePoset { up, down, labels }
    }

    /// Disjoint union; points of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &FinitePoset) -> Result<FinitePoset> {
        let n = self.len();
        let mut edges: Vec<(usize, usize)> = self.covers();
        edges.extend(other.covers().into_iter().map(|(a, b)| (a + n, b + n)));
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        FinitePoset::from_edges(n + other.len(), &edges)?.with_labels(labels)
    }

    /// Points listed so that every point precedes everything strictly below it.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.points().collect();
        order.sort_by_key(|&x| (self.up[x].len(), x));
        order
    }

    /// Has a greatest element and every principal upset is a chain.
    pub fn is_cotree(&self) -> bool {
        self.co_root().is_ok() && self.principal_upsets_are_chains()
    }

    /// Disjoint union of co-trees (the empty poset included).
    pub fn is_coforest(&self) -> bool {
        self.principal_upsets_are_chains()
            && self
                .components()
                .into_iter()
                .all(|c| self.maximal(c).len() == 1)
    }

    fn principal_upsets_are_chains(&self) -> bool {
        self.points().all(|x| self.is_chain(self.up[x]))
    }
}

/// Up-closure of `s` in `x`.
pub fn up(x: &FinitePoset, s: PointSet) -> PointSet {
    x.up(s)
}

/// Down-closure of `s` in `x`.
pub fn down(x: &FinitePoset, s: PointSet) -> PointSet {
    x.down(s)
}

pub fn immediate_predecessors(x: &FinitePoset, p: usize) -> PointSet {
    x.immediate_predecessors(p)
}

/// The n-element chain `0 < 1 < … < n-1`.
pub fn chain(n: usize) -> FinitePoset {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    FinitePoset::from_edges(n, &edges).expect("chains are acyclic")
}

/// The n-element antichain.
pub fn antichain(n: usize) -> FinitePoset {
    FinitePoset::from_edges(n, &[]).expect("antichains are acyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn closure_and_cycles() {
        let c2 = FinitePoset::from_edges(2, &[(0, 1)]).unwrap();
        assert!(c2.leq(0, 1) && !c2.leq(1, 0) && c2.leq(0, 0));
        assert_eq!(
            FinitePoset::from_edges(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(Error::Cycle(0, 1))
        );
        assert!(matches!(
            FinitePoset::from_edges(2, &[(0, 2)]),
            Err(Error::PointOutOfRange { point: 2, size: 2 })
        ));
        let c4 = FinitePoset::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(c4.leq(0, 3));
        assert_eq!(c4.covers(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn labelled_f0() {
        let f0 = FinitePoset::from_labeled(
            &["a", "b", "c", "d", "e"],
            &[("d", "b"), ("b", "a"), ("c", "a"), ("e", "c")],
        )
        .unwrap();
        let d = f0.index_of("d").unwrap();
        assert_eq!(f0.labels_of(f0.up_of(d)), vec!["a", "b", "d"]);
        assert!(f0.is_cotree());
        assert_eq!(f0.label(f0.co_root().unwrap()), "a");
        assert!(matches!(
            FinitePoset::from_labeled(&["a", "a"], &[]),
            Err(Error::DuplicatePoint(_))
        ));
        assert!(matches!(
            FinitePoset::from_labeled(&["a"], &[("a", "z")]),
            Err(Error::UnknownPoint(_))
        ));
    }

    #[test]
    fn closures() {
        let c = chain(2);
        assert_eq!(c.up(set(&[0])), set(&[0, 1]));
        assert_eq!(c.down(set(&[1])), set(&[0, 1]));
        assert_eq!(c.up_strict(set(&[0])), set(&[1]));
        assert_eq!(c.down_strict(set(&[0])), PointSet::EMPTY);
        assert_eq!(c.co_root(), Ok(1));
        assert_eq!(antichain(2).co_root(), Err(Error::NoGreatestElement));
        assert_eq!(antichain(1).immediate_predecessors(0), PointSet::EMPTY);
    }

    #[test]
    fn comb_minimal_points_by_brute_force() {
        let c2 = make_comb(2).unwrap();
        // brute force: x is minimal iff no y != x has y <= x
        let brute: PointSet = (0..4)
            .filter(|&x| (0..4).all(|y| y == x || !c2.leq(y, x)))
            .collect();
        assert_eq!(brute, c2.min_points());
        assert_eq!(c2.labels_of(brute), vec!["x1p", "x2p"]);
    }

    #[test]
    fn structure_tests() {
        assert!(chain(3).is_cotree());
        assert!(!antichain(2).is_cotree());
        assert!(antichain(2).is_coforest());
        assert!(antichain(0).is_coforest());
        // diamond 0 < 1,2 < 3
        let diamond = FinitePoset::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!diamond.is_coforest());
        // V shape 0,1 < 2 plus a separate point 3
        let v = FinitePoset::from_edges(4, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(v.components(), vec![set(&[0, 1, 2]), set(&[3])]);
        assert!(v.is_coforest());
        // Λ shape has two maxima in one component
        let lam = FinitePoset::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(!lam.is_coforest());
    }

    #[test]
    fn induced_and_permuted() {
        let c = make_comb(2).unwrap();
        let (sub, map) = c.induced(set(&[0, 1, 3]));
        assert_eq!(map, vec![0, 1, 3]);
        assert!(sub.leq(0, 1) && sub.leq(0, 2) && sub.leq(1, 2));
        assert_eq!(sub.labels(), ["x1p", "x1", "x2"]);
        let p = c.permuted(&[3, 2, 1, 0]);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(c.leq(x, y), p.leq(3 - x, 3 - y));
            }
        }
        assert_eq!(p.label(3), "x1p");
    }

    #[test]
    fn top_down_order_respects_order() {
        let c = make_comb(3).unwrap();
        let order = c.top_down_order();
        let pos: Vec<usize> = (0..c.len())
            .map(|x| order.iter().position(|&y| y == x).unwrap())
            .collect();
        for x in c.points() {
            for y in c.points() {
                if c.lt(x, y) {
                    assert!(pos[y] < pos[x]);
                }
            }
        }
    }
}
