//! Co-trees: combs, hcombs, canonical codes and exhaustive enumeration.
//!
//! A co-tree is the order dual of a rooted tree, so isomorphism testing and
//! enumeration both run on the dual side with AHU-style nested-parenthesis
//! codes: the code of a point is `(` followed by the sorted codes of its
//! immediate predecessors, then `)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::FinitePoset;
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// Largest size accepted by the enumerators.
pub const MAX_ENUMERATION_SIZE: usize = 10;

/// Shape of a finite poset as far as the comb classification is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum StructureClass {
    Comb { n: usize },
    HComb { n: usize },
    OtherCoTree,
    CoForest,
    NotCoForest,
}

impl StructureClass {
    pub fn is_comb_or_hcomb(self) -> bool {
        matches!(self, StructureClass::Comb { .. } | StructureClass::HComb { .. })
    }
}

/// The n-comb: spine `x1 < … < xn` with a tooth `xi' ≺ xi` under every spine
/// point. Tooth `xi'` is point `2(i-1)` (label `xip`), spine point `xi` is
/// point `2i-1` (label `xi`); `xn` is the co-root.
pub fn make_comb(n: usize) -> Result<FinitePoset> {
    if n == 0 {
        return Err(Error::Domain("combs are indexed by positive integers".into()));
    }
    let spine = |i: usize| 2 * i - 1;
    let tooth = |i: usize| 2 * i - 2;
    let mut edges = Vec::with_capacity(2 * n);
    let mut labels = vec![String::new(); 2 * n];
    for i in 1..=n {
        edges.push((tooth(i), spine(i)));
        if i < n {
            edges.push((spine(i), spine(i + 1)));
        }
        labels[tooth(i)] = format!("x{i}p");
        labels[spine(i)] = format!("x{i}");
    }
    FinitePoset::from_edges(2 * n, &edges)?.with_labels(labels)
}

/// The n-hcomb: an n-comb whose lowest spine point also covers the handle
/// `y0`. Point 0 is `y0`, tooth `yi'` is `2i-1`, spine point `yi` is `2i`.
/// The 0-hcomb is the singleton `{y0}`.
pub fn make_hcomb(n: usize) -> Result<FinitePoset> {
    let spine = |i: usize| 2 * i;
    let tooth = |i: usize| 2 * i - 1;
    let mut edges = Vec::with_capacity(2 * n + 1);
    let mut labels = vec!["y0".to_string(); 2 * n + 1];
    if n >= 1 {
        edges.push((0, spine(1)));
    }
    for i in 1..=n {
        edges.push((tooth(i), spine(i)));
        if i < n {
            edges.push((spine(i), spine(i + 1)));
        }
        labels[tooth(i)] = format!("y{i}p");
        labels[spine(i)] = format!("y{i}");
    }
    FinitePoset::from_edges(2 * n + 1, &edges)?.with_labels(labels)
}

/// Isomorphism-invariant code of a co-tree.
pub fn canonical_code(x: &FinitePoset) -> Result<Vec<u8>> {
    if !x.is_cotree() {
        return Err(Error::NotCoTree);
    }
    let root = x.co_root()?;
    Ok(code_at(x, root))
}

fn code_at(x: &FinitePoset, p: usize) -> Vec<u8> {
    let mut kids: Vec<Vec<u8>> = x
        .immediate_predecessors(p)
        .iter()
        .map(|c| code_at(x, c))
        .collect();
    kids.sort();
    let mut out = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
    out.push(b'(');
    for k in kids {
        out.extend(k);
    }
    out.push(b')');
    out
}

/// Rebuilds the co-tree of a well-formed code. Points are numbered in
/// preorder, so the co-root is point 0.
fn cotree_from_code(code: &[u8]) -> FinitePoset {
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for &b in code {
        if b == b'(' {
            if let Some(&parent) = stack.last() {
                edges.push((next, parent));
            }
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    FinitePoset::from_edges(next, &edges).expect("trees are acyclic")
}

/// Classifies a poset as comb, hcomb, other co-tree, co-forest, or neither.
pub fn classify(x: &FinitePoset) -> StructureClass {
    if !x.is_coforest() {
        return StructureClass::NotCoForest;
    }
    if x.components().len() != 1 {
        return StructureClass::CoForest;
    }
    let code = canonical_code(x).expect("a connected co-forest is a co-tree");
    let n = x.len() / 2;
    let reference = if x.len() % 2 == 0 {
        make_comb(n).map(|c| (c, StructureClass::Comb { n }))
    } else {
        make_hcomb(n).map(|c| (c, StructureClass::HComb { n }))
    };
    match reference {
        Ok((shape, class)) if canonical_code(&shape).ok() == Some(code) => class,
        _ => StructureClass::OtherCoTree,
    }
}

/// One representative per isomorphism class of co-trees with at most
/// `max_size` points, in order of size then code.
pub fn enumerate_cotrees(max_size: usize) -> Result<Vec<FinitePoset>> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&max_size) {
        return Err(Error::LimitExceeded {
            what: format!("co-tree enumeration size {max_size}"),
            limit: MAX_ENUMERATION_SIZE as u64,
        });
    }
    // codes[k] = canonical codes of rooted trees with k points
    let mut codes: Vec<Vec<Vec<u8>>> = vec![Vec::new(), vec![b"()".to_vec()]];
    for k in 2..=max_size {
        let mut found = BTreeSet::new();
        let mut chosen = Vec::new();
        forests(&codes, k - 1, (usize::MAX, usize::MAX), &mut chosen, &mut found);
        codes.push(found.into_iter().collect());
    }
    Ok(codes
        .iter()
        .flatten()
        .map(|c| cotree_from_code(c))
        .collect())
}

// Multisets of subtrees with total size `remaining`, listed in non-increasing
// (size, index) order so that each multiset is produced once.
fn forests(
    codes: &[Vec<Vec<u8>>],
    remaining: usize,
    bound: (usize, usize),
    chosen: &mut Vec<(usize, usize)>,
    found: &mut BTreeSet<Vec<u8>>,
) {
    if remaining == 0 {
        let mut kids: Vec<&Vec<u8>> = chosen.iter().map(|&(s, i)| &codes[s][i]).collect();
        kids.sort();
        let mut code = vec![b'('];
        for k in kids {
            code.extend(k);
        }
        code.push(b')');
        found.insert(code);
        return;
    }
    for size in (1..=remaining.min(bound.0)).rev() {
        let count = codes[size].len();
        let top = if size == bound.0 { bound.1.min(count - 1) } else { count - 1 };
        for idx in (0..=top).rev() {
            chosen.push((size, idx));
            forests(codes, remaining - size, (size, idx), chosen, found);
            chosen.pop();
        }
    }
}

/// One representative per isomorphism class of posets with at most
/// `max_size` points (brute force; capped at 6 points).
pub fn enumerate_posets(max_size: usize) -> Result<Vec<FinitePoset>> {
    const CAP: usize = 6;
    if max_size > CAP {
        return Err(Error::LimitExceeded {
            what: format!("poset enumeration size {max_size}"),
            limit: CAP as u64,
        });
    }
    let mut out = Vec::new();
    for n in 1..=max_size {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        // every poset has a linear extension, so relations contained in the
        // natural order reach every class
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let p = FinitePoset::from_edges(n, &edges).expect("upper-triangular relations are acyclic");
            // skip non-closed masks; the closed one of the same poset is visited too
            if p.points().map(|x| p.up_of(x).len() - 1).sum::<usize>() != edges.len() {
                continue;
            }
            let key = perms
                .iter()
                .map(|perm| relation_key(&p, perm))
                .min()
                .unwrap();
            if seen.insert(key) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn relation_key(p: &FinitePoset, perm: &[usize]) -> u64 {
    let n = p.len();
    let mut key = 0u64;
    for x in 0..n {
        for y in p.up_of(x).iter() {
            if x != y {
                key |= 1 << (perm[x] * n + perm[y]);
            }
        }
    }
    key
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: PointSet, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used.contains(i) {
                cur.push(i);
                go(cur, used.union(PointSet::singleton(i)), n, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), PointSet::EMPTY, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain, chain};

    #[test]
    fn comb_shapes() {
        let c1 = make_comb(1).unwrap();
        assert_eq!(c1.len(), 2);
        assert!(c1.is_chain(c1.all()));
        assert_eq!(c1.labels(), ["x1p", "x1"]);
        assert_eq!(make_comb(4).unwrap().len(), 8);
        assert!(matches!(make_comb(0), Err(Error::Domain(_))));

        let c3 = make_comb(3).unwrap();
        let x2 = c3.index_of("x2").unwrap();
        assert_eq!(
            c3.labels_of(c3.immediate_predecessors(x2)),
            vec!["x1", "x2p"]
        );
        assert_eq!(c3.label(c3.co_root().unwrap()), "x3");
        assert_eq!(c3.labels_of(c3.min_points()), vec!["x1p", "x2p", "x3p"]);
    }

    #[test]
    fn hcomb_shapes() {
        let h0 = make_hcomb(0).unwrap();
        assert_eq!(h0.len(), 1);
        let h1 = make_hcomb(1).unwrap();
        assert_eq!(h1.len(), 3);
        let y1 = h1.index_of("y1").unwrap();
        assert_eq!(h1.labels_of(h1.immediate_predecessors(y1)), vec!["y0", "y1p"]);
        assert_eq!(make_hcomb(3).unwrap().len(), 7);
    }

    #[test]
    fn classify_generators() {
        for n in 1..=8 {
            assert_eq!(classify(&make_comb(n).unwrap()), StructureClass::Comb { n });
        }
        for n in 0..=8 {
            assert_eq!(classify(&make_hcomb(n).unwrap()), StructureClass::HComb { n });
        }
        assert_eq!(classify(&antichain(2)), StructureClass::CoForest);
        assert_eq!(classify(&chain(3)), StructureClass::OtherCoTree);
        let diamond = FinitePoset::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(classify(&diamond), StructureClass::NotCoForest);
    }

    #[test]
    fn codes_distinguish_shapes() {
        let c2 = make_comb(2).unwrap();
        let relabeled = c2.permuted(&[2, 0, 3, 1]);
        assert_eq!(canonical_code(&c2), canonical_code(&relabeled));
        assert_eq!(canonical_code(&c2).unwrap(), b"((())())".to_vec());
        assert_eq!(canonical_code(&chain(1)).unwrap(), b"()".to_vec());
        assert_eq!(canonical_code(&antichain(2)), Err(Error::NotCoTree));
    }

    #[test]
    fn rooted_tree_counts() {
        let trees = enumerate_cotrees(8).unwrap();
        let mut counts = [0usize; 9];
        for t in &trees {
            assert!(t.is_cotree());
            counts[t.len()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 1, 2, 4, 9, 20, 48, 115]);
        assert_eq!(enumerate_cotrees(1).unwrap().len(), 1);
        assert!(matches!(enumerate_cotrees(0), Err(Error::LimitExceeded { .. })));
        assert!(matches!(enumerate_cotrees(11), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn poset_counts() {
        // unlabelled posets on 1..=5 points: 1, 2, 5, 16, 63
        let ps = enumerate_posets(5).unwrap();
        let mut counts = [0usize; 6];
        for p in &ps {
            counts[p.len()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 2, 5, 16, 63]);
    }
}
