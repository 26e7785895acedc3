//! Formulas of the bi-intuitionistic propositional language.
//!
//! The AST has exactly seven constructors. Negation `!φ` and co-negation
//! `~φ` are sugar for `φ -> false` and `true <- φ`; the parser expands them
//! and the printer folds them back.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;

mod parse;

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(String),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Coimp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Self {
        Formula::Var(name.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn coimp(a: Formula, b: Formula) -> Self {
        Formula::Coimp(Box::new(a), Box::new(b))
    }

    /// `¬φ`, i.e. `φ → ⊥`.
    pub fn not(a: Formula) -> Self {
        Formula::imp(a, Formula::Bot)
    }

    /// `∼φ`, i.e. `⊤ ← φ`.
    pub fn conot(a: Formula) -> Self {
        Formula::coimp(Formula::Top, a)
    }

    /// Prelinearity `(p → q) ∨ (q → p)`.
    pub fn prelinearity() -> Self {
        let (p, q) = (Formula::var("p"), Formula::var("q"));
        Formula::or(Formula::imp(p.clone(), q.clone()), Formula::imp(q, p))
    }

    /// `¬((q ← p) ∧ (p ← q))`, valid exactly on chains among co-trees.
    pub fn chain_axiom() -> Self {
        let (p, q) = (Formula::var("p"), Formula::var("q"));
        Formula::not(Formula::and(
            Formula::coimp(q.clone(), p.clone()),
            Formula::coimp(p, q),
        ))
    }

    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => None,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Coimp(a, b) => {
                Some((a, b))
            }
        }
    }

    pub fn is_imp(&self) -> bool {
        matches!(self, Formula::Imp(..))
    }

    pub fn is_coimp(&self) -> bool {
        matches!(self, Formula::Coimp(..))
    }

    /// Number of AST nodes.
    pub fn node_count(&self) -> usize {
        match self.children() {
            None => 1,
            Some((a, b)) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Number of binary constructors.
    pub fn connective_count(&self) -> usize {
        match self.children() {
            None => 0,
            Some((a, b)) => 1 + a.connective_count() + b.connective_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            None => 0,
            Some((a, b)) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Implicative degree: `→` and `←` add one to the maximum of their
    /// arguments, `∧` and `∨` take the maximum, atoms and constants are 0.
    pub fn ipd(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.ipd().max(b.ipd()),
            Formula::Imp(a, b) | Formula::Coimp(a, b) => a.ipd().max(b.ipd()) + 1,
        }
    }

    /// Variable names in sorted order.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Bot | Formula::Top => {}
            _ => {
                let (a, b) = self.children().unwrap();
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn subformulas(&self) -> SubformulaSets {
        let mut all = BTreeSet::new();
        self.collect_subformulas(&mut all);
        let imps = all.iter().filter(|f| f.is_imp()).cloned().collect();
        let coimps = all.iter().filter(|f| f.is_coimp()).cloned().collect();
        SubformulaSets { all, imps, coimps }
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        if let Some((a, b)) = self.children() {
            a.collect_subformulas(out);
            b.collect_subformulas(out);
        }
        out.insert(self.clone());
    }

    /// Distinct subformulas ordered so that every formula comes after its
    /// immediate subformulas.
    pub fn subformulas_postorder(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.postorder_into(&mut seen, &mut out);
        out
    }

    fn postorder_into(&self, seen: &mut BTreeSet<Formula>, out: &mut Vec<Formula>) {
        if seen.contains(self) {
            return;
        }
        if let Some((a, b)) = self.children() {
            a.postorder_into(seen, out);
            b.postorder_into(seen, out);
        }
        seen.insert(self.clone());
        out.push(self.clone());
    }
}

/// Subformulas of a formula, split by main connective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaSets {
    pub all: BTreeSet<Formula>,
    pub imps: BTreeSet<Formula>,
    pub coimps: BTreeSet<Formula>,
}

pub fn ipd(f: &Formula) -> usize {
    f.ipd()
}

pub fn subformulas(f: &Formula) -> SubformulaSets {
    f.subformulas()
}

/// Canonical concrete syntax; `parse(&print(f))` returns `f`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

// Binding strength used by the printer; larger binds tighter.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, b) if **b == Formula::Bot => 4,
        Formula::Coimp(a, _) if **a == Formula::Top => 4,
        Formula::Var(_) | Formula::Bot | Formula::Top => 5,
        Formula::And(..) => 3,
        Formula::Or(..) => 2,
        Formula::Imp(..) | Formula::Coimp(..) => 1,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        write!(out, "(")?;
        write_at(f, 0, out)?;
        return write!(out, ")");
    }
    match f {
        Formula::Var(v) => write!(out, "{v}"),
        Formula::Bot => write!(out, "false"),
        Formula::Top => write!(out, "true"),
        Formula::Imp(a, b) if **b == Formula::Bot => {
            write!(out, "!")?;
            write_at(a, 4, out)
        }
        Formula::Coimp(a, b) if **a == Formula::Top => {
            write!(out, "~")?;
            write_at(b, 4, out)
        }
        Formula::And(a, b) => {
            write_at(a, 3, out)?;
            write!(out, " & ")?;
            write_at(b, 4, out)
        }
        Formula::Or(a, b) => {
            write_at(a, 2, out)?;
            write!(out, " | ")?;
            write_at(b, 3, out)
        }
        Formula::Imp(a, b) | Formula::Coimp(a, b) => {
            let op = if f.is_imp() { "->" } else { "<-" };
            write_at(a, 2, out)?;
            write!(out, " {op} ")?;
            // Right-nested arrows of the same kind chain without parentheses.
            let same_kind = std::mem::discriminant(&**b) == std::mem::discriminant(f);
            if level(b) == 1 && !same_kind {
                write!(out, "(")?;
                write_at(b, 0, out)?;
                write!(out, ")")
            } else {
                write_at(b, 1, out)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
