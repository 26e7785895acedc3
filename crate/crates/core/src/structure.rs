//! The four forbidden frames and the structural LFC test.
//!
//! A finite poset validates LFC when it is a co-forest, `F0` does not
//! order-embed into it, and no component maps onto `F1`, `F2` or `F3` by a
//! surjective bi-p-morphism. Finite co-trees passing the test are exactly
//! the combs and hcombs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::{embedding_exists, surjection_exists, MorphismKind, MorphismWitness};
use crate::poset::{make_comb, make_hcomb, FinitePoset};

/// `F0`..`F3`. Panics on `i > 3`.
pub fn frame_f(i: usize) -> FinitePoset {
    let (points, edges): (&[&str], &[(&str, &str)]) = match i {
        0 => (
            &["a", "b", "c", "d", "e"],
            &[("b", "a"), ("c", "a"), ("d", "b"), ("e", "c")],
        ),
        1 => (&["a", "b", "c"], &[("b", "a"), ("c", "b")]),
        2 => (
            &["a", "b", "c", "d", "ap"],
            &[("b", "a"), ("c", "b"), ("d", "c"), ("ap", "a")],
        ),
        3 => (
            &["a", "b", "c", "d"],
            &[("b", "a"), ("c", "a"), ("d", "a")],
        ),
        _ => panic!("frame_f: index {i} out of range 0..=3"),
    };
    FinitePoset::from_labeled(points, edges).expect("fixed frames are posets")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LfcReport {
    pub is_coforest: bool,
    pub f0_embeds: bool,
    pub f1_image: bool,
    pub f2_image: bool,
    pub f3_image: bool,
    pub verdict: bool,
    #[serde(skip)]
    pub witness: Option<MorphismWitness>,
}

impl LfcReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report JSON is always serializable");
        v["witness"] = match &self.witness {
            Some(w) => w.to_json(),
            None => serde_json::Value::Null,
        };
        v
    }
}

/// Runs all four frame tests; the witness is the first one found, in the
/// order `F0, F1, F2, F3`.
pub fn validates_lfc(x: &FinitePoset) -> Result<LfcReport> {
    let is_coforest = x.is_coforest();
    let f0 = embedding_exists(&frame_f(0), x)?;
    let mut images = [None, None, None];
    for comp in x.components() {
        let (sub, _) = x.induced(comp);
        for (i, slot) in images.iter_mut().enumerate() {
            if slot.is_none() {
                *slot = surjection_exists(&sub, &frame_f(i + 1))?;
            }
        }
    }
    let f0_embeds = f0.is_some();
    let [f1, f2, f3] = images;
    let (f1_image, f2_image, f3_image) = (f1.is_some(), f2.is_some(), f3.is_some());
    let witness = f0.or(f1).or(f2).or(f3);
    Ok(LfcReport {
        is_coforest,
        f0_embeds,
        f1_image,
        f2_image,
        f3_image,
        verdict: is_coforest && witness.is_none(),
        witness,
    })
}

/// Every point has at most two immediate predecessors.
pub fn branching_bound_check(x: &FinitePoset) -> Result<bool> {
    if !x.is_cotree() {
        return Err(Error::NotCoTree);
    }
    Ok(x.points().all(|p| x.immediate_predecessors(p).len() <= 2))
}

/// `C_{n+1} ↠ C'_n`: `x_1` and `x_1'` both go to the handle `y_0`, and
/// `x_{i+1}`, `x_{i+1}'` go to `y_i`, `y_i'`.
pub fn comb_to_hcomb(n: usize) -> Result<MorphismWitness> {
    let source = make_comb(n + 1)?;
    let target = make_hcomb(n)?;
    let map = source.points().map(|p| p.saturating_sub(1)).collect();
    Ok(MorphismWitness {
        source,
        target,
        map,
        kind: MorphismKind::SurjectiveBiPMorphism,
    })
}

/// `C_{n+1} ↠ C_n`: `x_1`, `x_1'` are fixed and `x_{i+1}`, `x_{i+1}'` go
/// to `x_i`, `x_i'`. Any formula refuted on `C_n` is refuted on `C_{n+1}`.
pub fn comb_shrink(n: usize) -> Result<MorphismWitness> {
    let source = make_comb(n + 1)?;
    let target = make_comb(n)?;
    let map = source.points().map(|p| if p < 2 { p } else { p - 2 }).collect();
    Ok(MorphismWitness {
        source,
        target,
        map,
        kind: MorphismKind::SurjectiveBiPMorphism,
    })
}
