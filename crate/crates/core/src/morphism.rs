//! Bi-p-morphisms and order embeddings between finite posets.
//!
//! A map `f : X → Y` is a bi-p-morphism when it preserves the order and
//! satisfies the back conditions
//!
//! * Up: `f(x) ≤ y` implies `y = f(z)` for some `z ≥ x`;
//! * Down: `y ≤ f(x)` implies `y = f(z)` for some `z ≤ x`.
//!
//! Over co-forests, a surjection `X ↠ Y` onto a finite co-tree `Y` is exactly
//! what refutes the Jankov formula of `Y`, and an order embedding of `Y` into
//! `X` is exactly what refutes its subframe formula. Those formulas are never
//! built; [`refutes_jankov`] and [`refutes_subframe`] run the searches.
//! The characterization is only claimed for co-forest `X` and co-tree `Y`,
//! although the searches accept any pair of finite posets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poset::FinitePoset;

/// Default cap on search nodes (tentative point assignments).
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismKind {
    #[serde(rename = "bipmorphism")]
    BiPMorphism,
    #[serde(rename = "surjective_bipmorphism")]
    SurjectiveBiPMorphism,
    OrderEmbedding,
}

/// A point map certified to be of kind `kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismWitness {
    pub source: FinitePoset,
    pub target: FinitePoset,
    pub map: Vec<usize>,
    pub kind: MorphismKind,
}

impl MorphismWitness {
    /// Re-runs the checker for `kind`.
    pub fn verify(&self) -> bool {
        match self.kind {
            MorphismKind::BiPMorphism => is_bipmorphism(&self.source, &self.target, &self.map),
            MorphismKind::SurjectiveBiPMorphism => {
                is_bipmorphism(&self.source, &self.target, &self.map)
                    && is_surjective(&self.target, &self.map)
            }
            MorphismKind::OrderEmbedding => is_embedding(&self.source, &self.target, &self.map),
        }
    }

    /// `{"kind": "...", "map": {"x1": "a", ...}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<&str, &str> = self
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.label(x), self.target.label(y)))
            .collect();
        serde_json::json!({ "kind": self.kind, "map": map })
    }
}

pub fn is_order_preserving(x: &FinitePoset, y: &FinitePoset, f: &[usize]) -> bool {
    is_total(x, y, f)
        && x.points()
            .all(|a| x.up_of(a).iter().all(|b| y.leq(f[a], f[b])))
}

pub fn is_bipmorphism(x: &FinitePoset, y: &FinitePoset, f: &[usize]) -> bool {
    is_order_preserving(x, y, f)
        && x.points().all(|a| {
            image(f, x.up_of(a)) == y.up_of(f[a]) && image(f, x.down_of(a)) == y.down_of(f[a])
        })
}

/// Injective, order preserving and order reflecting.
pub fn is_embedding(y: &FinitePoset, x: &FinitePoset, f: &[usize]) -> bool {
    is_total(y, x, f)
        && image(f, y.all()).len() == y.len()
        && y.points()
            .all(|a| y.points().all(|b| y.leq(a, b) == x.leq(f[a], f[b])))
}

pub fn is_surjective(target: &FinitePoset, f: &[usize]) -> bool {
    image(f, PointSet::full(f.len())) == target.all()
}

fn is_total(x: &FinitePoset, y: &FinitePoset, f: &[usize]) -> bool {
    f.len() == x.len() && f.iter().all(|&b| b < y.len())
}

/// `f[S]`.
pub fn image(f: &[usize], s: PointSet) -> PointSet {
    s.iter().map(|a| f[a]).collect()
}

pub fn surjection_exists(x: &FinitePoset, y: &FinitePoset) -> Result<Option<MorphismWitness>> {
    surjection_exists_with(x, y, DEFAULT_NODE_BUDGET)
}

/// Backtracking search for a surjective bi-p-morphism `X ↠ Y`.
///
/// Points of `X` are assigned top-down, so `↑x` is fully mapped when `x` is
/// and the Up condition is checked on the spot; Down is checked as soon as
/// the last point of `↓x` is placed. Maxima go to maxima and minima to
/// minima. When both sides are co-trees the co-root goes to the co-root and
/// each point goes to the image of its successor or to a cover below it.
pub fn surjection_exists_with(
    x: &FinitePoset,
    y: &FinitePoset,
    budget: u64,
) -> Result<Option<MorphismWitness>> {
    if x.len() < y.len() || (y.is_empty() && !x.is_empty()) {
        return Ok(None);
    }
    let order = x.top_down_order();
    let mut pos = vec![0; x.len()];
    for (i, &p) in order.iter().enumerate() {
        pos[p] = i;
    }
    // down_done[i] = points whose downset is complete once order[i] is placed
    let mut down_done = vec![Vec::new(); x.len()];
    for p in x.points() {
        let last = x.down_of(p).iter().map(|q| pos[q]).max().unwrap();
        down_done[last].push(p);
    }
    let trees = x.is_cotree() && y.is_cotree();
    let (x_max, x_min) = (x.max_points(), x.min_points());
    let (y_max, y_min) = (y.max_points(), y.min_points());

    let mut search = SurjectionSearch {
        x,
        y,
        order: &order,
        down_done: &down_done,
        trees,
        x_max,
        x_min,
        y_max,
        y_min,
        map: vec![usize::MAX; x.len()],
        hit_count: vec![0; y.len()],
        nodes: 0,
        budget,
    };
    if search.go(0)? {
        let witness = MorphismWitness {
            source: x.clone(),
            target: y.clone(),
            map: search.map,
            kind: MorphismKind::SurjectiveBiPMorphism,
        };
        debug_assert!(witness.verify());
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

struct SurjectionSearch<'a> {
    x: &'a FinitePoset,
    y: &'a FinitePoset,
    order: &'a [usize],
    down_done: &'a [Vec<usize>],
    trees: bool,
    x_max: PointSet,
    x_min: PointSet,
    y_max: PointSet,
    y_min: PointSet,
    map: Vec<usize>,
    hit_count: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl SurjectionSearch<'_> {
    fn candidates(&self, p: usize) -> PointSet {
        let mut c = self.y.all();
        if self.x_max.contains(p) {
            c = c.intersection(self.y_max);
        }
        if self.x_min.contains(p) {
            c = c.intersection(self.y_min);
        }
        if self.trees {
            match self.x.immediate_successors(p).first() {
                None => c = c.intersection(self.y_max),
                Some(s) => {
                    let t = self.map[s];
                    let mut allowed = self.y.immediate_predecessors(t);
                    allowed.insert(t);
                    c = c.intersection(allowed);
                }
            }
        }
        c
    }

    fn go(&mut self, i: usize) -> Result<bool> {
        if i == self.order.len() {
            return Ok(self.hit_count.iter().all(|&c| c > 0));
        }
        let missing = self.hit_count.iter().filter(|&&c| c == 0).count();
        if missing > self.order.len() - i {
            return Ok(false);
        }
        let p = self.order[i];
        for t in self.candidates(p) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::budget(self.budget));
            }
            if !self.consistent(p, t) {
                continue;
            }
            self.map[p] = t;
            self.hit_count[t] += 1;
            let down_ok = self.down_done[i].iter().all(|&w| {
                image(&self.map, self.x.down_of(w)) == self.y.down_of(self.map[w])
            });
            if down_ok && self.go(i + 1)? {
                return Ok(true);
            }
            self.hit_count[t] -= 1;
            self.map[p] = usize::MAX;
        }
        Ok(false)
    }

    fn consistent(&self, p: usize, t: usize) -> bool {
        // everything above p is mapped already
        let above = self.x.up_of(p).difference(PointSet::singleton(p));
        if !above.iter().all(|z| self.y.leq(t, self.map[z])) {
            return false;
        }
        let mut img = image(&self.map, above);
        img.insert(t);
        img == self.y.up_of(t)
    }
}

pub fn embedding_exists(y: &FinitePoset, x: &FinitePoset) -> Result<Option<MorphismWitness>> {
    embedding_exists_with(y, x, DEFAULT_NODE_BUDGET)
}

/// Backtracking search for an order embedding `Y ↪ X`, assigning points of
/// `Y` top-down and checking order preservation and reflection against
/// every point placed so far.
pub fn embedding_exists_with(
    y: &FinitePoset,
    x: &FinitePoset,
    budget: u64,
) -> Result<Option<MorphismWitness>> {
    if y.len() > x.len() {
        return Ok(None);
    }
    let order = y.top_down_order();
    let mut map = vec![usize::MAX; y.len()];
    let mut nodes = 0u64;

    fn go(
        y: &FinitePoset,
        x: &FinitePoset,
        order: &[usize],
        i: usize,
        used: PointSet,
        map: &mut [usize],
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        if i == order.len() {
            return Ok(true);
        }
        let a = order[i];
        for t in x.all().difference(used) {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::budget(budget));
            }
            let fits = order[..i].iter().all(|&b| {
                y.leq(a, b) == x.leq(t, map[b]) && y.leq(b, a) == x.leq(map[b], t)
            });
            if !fits {
                continue;
            }
            map[a] = t;
            if go(y, x, order, i + 1, used.union(PointSet::singleton(t)), map, nodes, budget)? {
                return Ok(true);
            }
        }
        map[a] = usize::MAX;
        Ok(false)
    }

    if go(y, x, &order, 0, PointSet::EMPTY, &mut map, &mut nodes, budget)? {
        let witness = MorphismWitness {
            source: y.clone(),
            target: x.clone(),
            map,
            kind: MorphismKind::OrderEmbedding,
        };
        debug_assert!(witness.verify());
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

/// `X` refutes the Jankov formula of `Y`.
pub fn refutes_jankov(x: &FinitePoset, y: &FinitePoset) -> Result<bool> {
    Ok(surjection_exists(x, y)?.is_some())
}

/// `X` refutes the subframe formula of `Y`.
pub fn refutes_subframe(x: &FinitePoset, y: &FinitePoset) -> Result<bool> {
    Ok(embedding_exists(y, x)?.is_some())
}
