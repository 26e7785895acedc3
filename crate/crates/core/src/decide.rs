//! Membership in the logic of the finite combs, and local tabularity of
//! extensions of bi-GD.
//!
//! A formula belongs to `Log(FC)` when every finite comb `C_n` validates it.
//! [`in_logfc`] checks `C_1..C_B` with `B = comb_bound(f)`. The bound counts
//! one spine pair for the refuting point and one per `→` or `←`
//! subformula; it is not proved here, and [`logfc_semidecide`] lets tests
//! look further. Refutation is monotone in `n` (`C_n` is a bi-p-morphic image
//! of `C_{n+1}`), so "valid on `C_1..C_B`" is the same as "valid on `C_B`".
//!
//! An extension of bi-GD by axioms `Σ` is locally tabular iff some axiom
//! lies outside `Log(FC)`.

use serde_json::json;

use crate::combcheck::{least_refuting_comb, least_refuting_comb_full, CombRefutation};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::poset::{chain, make_comb};
use crate::semantics::{find_countermodel_with, is_valid, Countermodel, Limits, DEFAULT_BUDGET};

/// `|S_←(f)| + |S_→(f)| + 2`.
pub fn comb_bound(f: &Formula) -> usize {
    let s = f.subformulas();
    s.coimps.len() + s.imps.len() + 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    RefutingComb(CombRefutation),
    ExhaustedUpTo(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub formula: Formula,
    pub in_logfc: bool,
    pub bound_used: usize,
    pub certificate: Certificate,
}

impl MembershipVerdict {
    /// Re-checks a refuting certificate by direct evaluation on `C_n`.
    pub fn verify(&self) -> Result<bool> {
        match &self.certificate {
            Certificate::RefutingComb(r) => Ok(!self.in_logfc
                && r.n <= self.bound_used
                && *r.countermodel.frame() == make_comb(r.n)?
                && r.countermodel.refutes(&self.formula)?),
            Certificate::ExhaustedUpTo(n) => Ok(self.in_logfc && *n == self.bound_used),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "formula": self.formula.to_string(),
            "in_logfc": self.in_logfc,
            "bound": self.bound_used,
            "certificate": certificate_json(&self.certificate),
        })
    }
}

fn certificate_json(c: &Certificate) -> serde_json::Value {
    match c {
        Certificate::RefutingComb(r) => refutation_json(r),
        Certificate::ExhaustedUpTo(n) => json!({ "exhausted_up_to": n }),
    }
}

pub fn refutation_json(r: &CombRefutation) -> serde_json::Value {
    let cm = &r.countermodel;
    json!({
        "comb": r.n,
        "valuation": cm.valuation.to_json(),
        "point": cm.frame().label(cm.point),
    })
}

pub fn in_logfc(f: &Formula) -> Result<MembershipVerdict> {
    in_logfc_with(f, DEFAULT_BUDGET)
}

/// Runs the spine automaton over `C_1..C_B`; `budget` caps its work.
pub fn in_logfc_with(f: &Formula, budget: u64) -> Result<MembershipVerdict> {
    let bound = comb_bound(f);
    let hit = least_refuting_comb(f, bound, budget)?;
    Ok(verdict(f, bound, hit))
}

/// Same verdict by exhaustive valuation search on each comb in turn. Only
/// practical for small bounds and few variables.
pub fn in_logfc_exhaustive(f: &Formula, limits: &Limits) -> Result<MembershipVerdict> {
    let bound = comb_bound(f);
    for n in 1..=bound {
        let comb = make_comb(n)?;
        let found = find_countermodel_with(&comb, f, limits).map_err(|e| match e {
            Error::SearchBudgetExceeded { budget, .. } => Error::SearchBudgetExceeded {
                budget,
                completed_up_to: (n > 1).then_some(n - 1),
            },
            e => e,
        })?;
        if let Some(countermodel) = found {
            return Ok(verdict(f, bound, Some(CombRefutation { n, countermodel })));
        }
    }
    Ok(verdict(f, bound, None))
}

fn verdict(f: &Formula, bound: usize, hit: Option<CombRefutation>) -> MembershipVerdict {
    MembershipVerdict {
        formula: f.clone(),
        in_logfc: hit.is_none(),
        bound_used: bound,
        certificate: match hit {
            Some(r) => Certificate::RefutingComb(r),
            None => Certificate::ExhaustedUpTo(bound),
        },
    }
}

/// First refuting comb among `C_1..C_max_n`, ignoring the bound. Every comb
/// up to `max_n` is examined; nothing is inferred from repeated layers.
pub fn logfc_semidecide(f: &Formula, max_n: usize) -> Result<Option<CombRefutation>> {
    least_refuting_comb_full(f, max_n, DEFAULT_BUDGET)
}

pub fn logfc_semidecide_with(f: &Formula, max_n: usize, budget: u64) -> Result<Option<CombRefutation>> {
    least_refuting_comb_full(f, max_n, budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabularityVerdict {
    pub axioms: Vec<Formula>,
    pub locally_tabular: bool,
    /// First axiom outside `Log(FC)`, with its verdict.
    pub witness: Option<(usize, MembershipVerdict)>,
    /// Some axiom fails on the one-point frame, so the extension proves `⊥`.
    pub inconsistent: bool,
}

impl TabularityVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "axioms": self.axioms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "locally_tabular": self.locally_tabular,
            "inconsistent": self.inconsistent,
            "witness": self.witness.as_ref().map(|(i, v)| json!({
                "axiom": i,
                "verdict": v.to_json(),
            })),
        })
    }
}

pub fn locally_tabular(axioms: &[Formula]) -> Result<TabularityVerdict> {
    locally_tabular_with(axioms, DEFAULT_BUDGET)
}

/// Stops at the first axiom outside `Log(FC)`. The empty list is bi-GD
/// itself, which is not locally tabular.
pub fn locally_tabular_with(axioms: &[Formula], budget: u64) -> Result<TabularityVerdict> {
    let mut witness = None;
    for (i, a) in axioms.iter().enumerate() {
        let v = in_logfc_with(a, budget)?;
        if !v.in_logfc {
            witness = Some((i, v));
            break;
        }
    }
    let point = chain(1);
    let mut inconsistent = false;
    for a in axioms {
        if !is_valid(&point, a)? {
            inconsistent = true;
            break;
        }
    }
    Ok(TabularityVerdict {
        axioms: axioms.to_vec(),
        locally_tabular: witness.is_some(),
        witness,
        inconsistent,
    })
}

/// A refuting model for a certificate, for callers that only need the
/// countermodel.
pub fn countermodel_of(v: &MembershipVerdict) -> Option<&Countermodel> {
    match &v.certificate {
        Certificate::RefutingComb(r) => Some(&r.countermodel),
        Certificate::ExhaustedUpTo(_) => None,
    }
}
