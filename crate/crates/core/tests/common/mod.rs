//! Random generators shared by the integration tests.
#![allow(dead_code)]

use logfc_core::poset::FinitePoset;
use logfc_core::semantics::Valuation;
use logfc_core::{Formula, PointSet};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

const VARS: [&str; 3] = ["p", "q", "r"];

/// Random formula of depth at most `depth` over the first `nvars` of p, q, r.
pub fn formula(rng: &mut impl Rng, depth: usize, nvars: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..8) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::var(VARS[rng.gen_range(0..nvars)]),
        };
    }
    let a = formula(rng, depth - 1, nvars);
    let b = formula(rng, depth - 1, nvars);
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::imp(a, b),
        _ => Formula::coimp(a, b),
    }
}

/// Random formula with exactly `connectives` binary connectives.
pub fn formula_with_size(rng: &mut impl Rng, connectives: usize, nvars: usize) -> Formula {
    if connectives == 0 {
        return match rng.gen_range(0..8) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::var(VARS[rng.gen_range(0..nvars)]),
        };
    }
    let left = rng.gen_range(0..connectives);
    let a = formula_with_size(rng, left, nvars);
    let b = formula_with_size(rng, connectives - 1 - left, nvars);
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::imp(a, b),
        _ => Formula::coimp(a, b),
    }
}

/// Random poset on `n` points: random relation on index order, then closed.
pub fn poset(rng: &mut impl Rng, n: usize) -> FinitePoset {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_ratio(1, 3) {
                edges.push((a, b));
            }
        }
    }
    FinitePoset::from_edges(n, &edges).unwrap()
}

/// Random co-tree on `n ≥ 1` points; point 0 is the co-root.
pub fn cotree(rng: &mut impl Rng, n: usize) -> FinitePoset {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i, rng.gen_range(0..i))).collect();
    FinitePoset::from_edges(n, &edges).unwrap()
}

pub fn upset(rng: &mut impl Rng, x: &FinitePoset) -> PointSet {
    let seed: PointSet = x.points().filter(|_| rng.gen_ratio(1, 3)).collect();
    x.up(seed)
}

pub fn valuation(rng: &mut impl Rng, x: &FinitePoset, vars: &[&str]) -> Valuation {
    let pairs: Vec<(&str, PointSet)> = vars.iter().map(|&v| (v, upset(rng, x))).collect();
    Valuation::from_pairs(x.clone(), &pairs).unwrap()
}

pub fn formula_strategy(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        Just(Formula::Top),
        prop::sample::select(VARS.to_vec()).prop_map(Formula::var),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        (inner.clone(), inner, 0..4u8).prop_map(|(a, b, op)| match op {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            2 => Formula::imp(a, b),
            _ => Formula::coimp(a, b),
        })
    })
}
