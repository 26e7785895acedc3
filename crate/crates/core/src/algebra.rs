//! Upset algebras of finite posets and their bi-E-partitions.
//!
//! The upsets of a finite poset form a bi-Heyting algebra under `∩`, `∪`,
//!
//! ```text
//! U → V = X ∖ ↓(U ∖ V)        U ← V = ↑(U ∖ V)
//! ```
//!
//! Subalgebras correspond to bi-E-partitions of the frame, which turns
//! generation into a statement about partitions: a list of upsets generates
//! the whole algebra iff every bi-E-partition other than the identity merges
//! two points that some generator tells apart.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::pointset::PointSet;
use crate::poset::FinitePoset;
use crate::semantics::all_upsets;

/// Largest frame for which set partitions are enumerated.
pub const MAX_PARTITION_POINTS: usize = 9;

/// `Up(X)` with its operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsetAlgebra {
    pub frame: FinitePoset,
    pub elements: Vec<PointSet>,
}

impl UpsetAlgebra {
    pub fn new(frame: FinitePoset) -> Result<Self> {
        let elements = all_upsets(&frame)?;
        Ok(UpsetAlgebra { frame, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> PointSet {
        PointSet::EMPTY
    }

    pub fn top(&self) -> PointSet {
        self.frame.all()
    }

    pub fn imp(&self, u: PointSet, v: PointSet) -> Result<PointSet> {
        heyting_imp(&self.frame, u, v)
    }

    pub fn coimp(&self, u: PointSet, v: PointSet) -> Result<PointSet> {
        coimp(&self.frame, u, v)
    }

    /// Elements as lists of point labels.
    pub fn to_json(&self) -> serde_json::Value {
        let elems: Vec<Vec<String>> =
            self.elements.iter().map(|&u| self.frame.labels_of(u)).collect();
        serde_json::json!({ "size": self.len(), "elements": elems })
    }
}

fn check_upsets(x: &FinitePoset, sets: &[PointSet]) -> Result<()> {
    let all = x.all();
    if sets.iter().all(|&s| s.is_subset(all) && x.is_upset(s)) {
        Ok(())
    } else {
        Err(Error::NotUpset)
    }
}

pub fn heyting_imp(x: &FinitePoset, u: PointSet, v: PointSet) -> Result<PointSet> {
    check_upsets(x, &[u, v])?;
    Ok(x.all().difference(x.down(u.difference(v))))
}

pub fn coimp(x: &FinitePoset, u: PointSet, v: PointSet) -> Result<PointSet> {
    check_upsets(x, &[u, v])?;
    Ok(x.up(u.difference(v)))
}

/// Closure of `gens ∪ {∅, X}` under `∩`, `∪`, `→`, `←`.
pub fn generated_subalgebra(x: &FinitePoset, gens: &[PointSet]) -> Result<BTreeSet<PointSet>> {
    check_upsets(x, gens)?;
    let mut elems: BTreeSet<PointSet> = gens.iter().copied().collect();
    elems.insert(PointSet::EMPTY);
    elems.insert(x.all());
    let mut frontier: Vec<PointSet> = elems.iter().copied().collect();
    while !frontier.is_empty() {
        let current: Vec<PointSet> = elems.iter().copied().collect();
        let mut fresh = Vec::new();
        for &a in &frontier {
            for &b in &current {
                for c in [
                    a.intersection(b),
                    a.union(b),
                    heyting_imp(x, a, b)?,
                    heyting_imp(x, b, a)?,
                    coimp(x, a, b)?,
                    coimp(x, b, a)?,
                ] {
                    if elems.insert(c) {
                        fresh.push(c);
                    }
                }
            }
        }
        frontier = fresh;
    }
    Ok(elems)
}

/// Value of `f` in `Up(X)` when variable `v` denotes `assignment[v]`,
/// computed with the algebra operations.
pub fn evaluate(
    x: &FinitePoset,
    f: &Formula,
    assignment: &BTreeMap<String, PointSet>,
) -> Result<PointSet> {
    Ok(match f {
        Formula::Var(v) => {
            let u = *assignment
                .get(v)
                .ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
            check_upsets(x, &[u])?;
            u
        }
        Formula::Bot => PointSet::EMPTY,
        Formula::Top => x.all(),
        Formula::And(a, b) => evaluate(x, a, assignment)?.intersection(evaluate(x, b, assignment)?),
        Formula::Or(a, b) => evaluate(x, a, assignment)?.union(evaluate(x, b, assignment)?),
        Formula::Imp(a, b) => heyting_imp(x, evaluate(x, a, assignment)?, evaluate(x, b, assignment)?)?,
        Formula::Coimp(a, b) => coimp(x, evaluate(x, a, assignment)?, evaluate(x, b, assignment)?)?,
    })
}

/// `Up(X) ⊨ f = ⊤`, by enumerating every assignment of upsets.
pub fn algebra_validates(x: &FinitePoset, f: &Formula) -> Result<bool> {
    let vars: Vec<String> = f.variables().into_iter().collect();
    let ups = all_upsets(x)?;
    let mut idx = vec![0usize; vars.len()];
    loop {
        let assignment = vars.iter().cloned().zip(idx.iter().map(|&i| ups[i])).collect();
        if evaluate(x, f, &assignment)? != x.all() {
            return Ok(false);
        }
        // odometer, last variable fastest
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(true);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < ups.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// An equivalence relation on the points of a frame, stored as blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiEPartition {
    pub frame: FinitePoset,
    pub blocks: Vec<PointSet>,
}

impl BiEPartition {
    /// Checks that `blocks` partition the points and satisfy the bi-E
    /// conditions. Blocks are stored sorted by least point.
    pub fn new(frame: FinitePoset, mut blocks: Vec<PointSet>) -> Result<Self> {
        if !is_partition(&frame, &blocks) {
            return Err(Error::Invalid("blocks do not partition the points".into()));
        }
        if !is_bie_partition(&frame, &blocks) {
            return Err(Error::Invalid("not a bi-E-partition".into()));
        }
        blocks.sort_by_key(|b| b.first());
        Ok(BiEPartition { frame, blocks })
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn block_labels(&self) -> Vec<Vec<String>> {
        self.blocks.iter().map(|&b| self.frame.labels_of(b)).collect()
    }
}

fn is_partition(x: &FinitePoset, blocks: &[PointSet]) -> bool {
    let mut seen = PointSet::EMPTY;
    for &b in blocks {
        if b.is_empty() || !b.intersection(seen).is_empty() {
            return false;
        }
        seen = seen.union(b);
    }
    seen == x.all()
}

/// Up, Down and Refined on a finite frame. Returns false when `blocks` is
/// not a partition of the points.
pub fn is_bie_partition(x: &FinitePoset, blocks: &[PointSet]) -> bool {
    if !is_partition(x, blocks) {
        return false;
    }
    let mut block_of = vec![0; x.len()];
    for (i, b) in blocks.iter().enumerate() {
        for p in *b {
            block_of[p] = i;
        }
    }
    // the blocks met by ↑p, and by ↓p, as bitsets over block indices
    let meets = |s: PointSet| -> u128 { s.iter().fold(0, |acc, q| acc | 1 << block_of[q]) };
    for b in blocks {
        let p0 = b.first().expect("nonempty block");
        let (up0, down0) = (meets(x.up_of(p0)), meets(x.down_of(p0)));
        if !b.iter().all(|p| meets(x.up_of(p)) == up0 && meets(x.down_of(p)) == down0) {
            return false;
        }
    }
    let saturate = |s: PointSet| -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, q| acc.union(blocks[block_of[q]]))
    };
    // least saturated upset containing p
    let closure: Vec<PointSet> = x
        .points()
        .map(|p| {
            let mut s = PointSet::singleton(p);
            loop {
                let next = saturate(x.up(s));
                if next == s {
                    break s;
                }
                s = next;
            }
        })
        .collect();
    x.points().all(|p| {
        x.points()
            .all(|q| block_of[p] == block_of[q] || !closure[p].contains(q) || !closure[q].contains(p))
    })
}

/// Every set partition of the points, as block lists, in restricted
/// growth order.
pub fn set_partitions(n: usize) -> Result<Vec<Vec<PointSet>>> {
    if n > MAX_PARTITION_POINTS {
        return Err(Error::LimitExceeded {
            what: "points for partition enumeration".into(),
            limit: MAX_PARTITION_POINTS as u64,
        });
    }
    fn go(i: usize, n: usize, blocks: &mut Vec<PointSet>, out: &mut Vec<Vec<PointSet>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].insert(i);
            go(i + 1, n, blocks, out);
            blocks[b].remove(i);
        }
        blocks.push(PointSet::singleton(i));
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    Ok(out)
}

pub fn bie_partitions(x: &FinitePoset) -> Result<Vec<BiEPartition>> {
    Ok(set_partitions(x.len())?
        .into_iter()
        .filter(|p| is_bie_partition(x, p))
        .map(|blocks| BiEPartition {
            frame: x.clone(),
            blocks,
        })
        .collect())
}

/// Whether `gens` generate `Up(X)`, decided by the coloring criterion: every
/// bi-E-partition other than the identity must merge two points with
/// different colors, where a point's color is the set of generators
/// containing it.
pub fn coloring_generates(x: &FinitePoset, gens: &[PointSet]) -> Result<bool> {
    check_upsets(x, gens)?;
    let color = |p: usize| -> Vec<bool> { gens.iter().map(|g| g.contains(p)).collect() };
    for part in bie_partitions(x)? {
        if part.is_identity() {
            continue;
        }
        let monochrome = part.blocks.iter().all(|b| {
            let c = color(b.first().expect("nonempty block"));
            b.iter().all(|p| color(p) == c)
        });
        if monochrome {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An order isomorphism `↓w → ↓v`, if one exists.
fn downset_isomorphism(x: &FinitePoset, w: usize, v: usize) -> Option<Vec<(usize, usize)>> {
    let (dw, _) = x.induced(x.down_of(w));
    let (dv, _) = x.induced(x.down_of(v));
    let (wpts, vpts): (Vec<usize>, Vec<usize>) =
        (x.down_of(w).iter().collect(), x.down_of(v).iter().collect());
    if dw.len() != dv.len() {
        return None;
    }
    let e = crate::morphism::embedding_exists(&dw, &dv).ok()??;
    Some(e.map.iter().enumerate().map(|(i, &j)| (wpts[i], vpts[j])).collect())
}

/// Pairs `↓w` with `↓v` along an order isomorphism when `w` and `v` share an
/// immediate successor.
pub fn twin_partition(x: &FinitePoset, w: usize, v: usize) -> Result<Option<BiEPartition>> {
    if !x.is_cotree() {
        return Err(Error::NotCoTree);
    }
    for p in [w, v] {
        if p >= x.len() {
            return Err(Error::PointOutOfRange { point: p, size: x.len() });
        }
    }
    if w == v
        || x.immediate_successors(w)
            .intersection(x.immediate_successors(v))
            .is_empty()
    {
        return Ok(None);
    }
    let Some(pairs) = downset_isomorphism(x, w, v) else {
        return Ok(None);
    };
    let paired = x.down_of(w).union(x.down_of(v));
    let mut blocks: Vec<PointSet> = pairs
        .into_iter()
        .map(|(a, b)| [a, b].into_iter().collect())
        .collect();
    blocks.extend(x.all().difference(paired).iter().map(PointSet::singleton));
    BiEPartition::new(x.clone(), blocks).map(Some)
}

/// `y < x` and no branching occurs in `]y, x]`: `↓x ∖ [y, x] ⊆ ↓y ∖ {y}`.
pub fn is_isolated_chain(x: &FinitePoset, y: usize, top: usize) -> bool {
    if !x.lt(y, top) {
        return false;
    }
    let below_y = x.down_of(y).difference(PointSet::singleton(y));
    x.down_of(top).difference(x.interval(y, top)).is_subset(below_y)
}

/// All isolated chains `(y, x)` of a co-tree.
pub fn isolated_chains(x: &FinitePoset) -> Result<Vec<(usize, usize)>> {
    if !x.is_cotree() {
        return Err(Error::NotCoTree);
    }
    Ok(x.points()
        .flat_map(|t| x.points().map(move |y| (y, t)))
        .filter(|&(y, t)| is_isolated_chain(x, y, t))
        .collect())
}

/// The partition merging `[y, x]` and fixing everything else.
pub fn isolated_chain_partition(x: &FinitePoset, y: usize, top: usize) -> Result<Option<BiEPartition>> {
    if !x.is_cotree() {
        return Err(Error::NotCoTree);
    }
    if !is_isolated_chain(x, y, top) {
        return Ok(None);
    }
    let chain = x.interval(y, top);
    let mut blocks = vec![chain];
    blocks.extend(x.all().difference(chain).iter().map(PointSet::singleton));
    BiEPartition::new(x.clone(), blocks).map(Some)
}
