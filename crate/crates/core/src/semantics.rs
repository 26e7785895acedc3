//! Kripke semantics over finite posets.
//!
//! Forcing sets are computed a whole set at a time:
//!
//! ```text
//! V(φ → ψ) = X ∖ ↓(V(φ) ∖ V(ψ))
//! V(φ ← ψ) = ↑(V(φ) ∖ V(ψ))
//! ```
//!
//! [`forces_by_clauses`] evaluates the pointwise Kripke clauses directly and
//! serves as an independent check on the set formulas.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::pointset::PointSet;
use crate::poset::{FinitePoset, FrameJson};

/// Default cap on forcing-set evaluations for one exhaustive search.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Cap on the number of upsets [`all_upsets`] will list.
pub const UPSET_LIMIT: usize = 1 << 22;

/// Resource limits for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub budget: u64,
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

impl Limits {
    pub fn with_budget(budget: u64) -> Self {
        Limits {
            budget,
            ..Limits::default()
        }
    }
}

/// An assignment of upsets to variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    frame: FinitePoset,
    assignment: BTreeMap<String, PointSet>,
}

impl Valuation {
    /// Fails with [`Error::NotUpset`] if some assigned set is not an upset.
    pub fn new(frame: FinitePoset, assignment: BTreeMap<String, PointSet>) -> Result<Self> {
        for &s in assignment.values() {
            if !s.is_subset(frame.all()) || !frame.is_upset(s) {
                return Err(Error::NotUpset);
            }
        }
        Ok(Valuation { frame, assignment })
    }

    pub fn from_pairs<S: AsRef<str>>(frame: FinitePoset, pairs: &[(S, PointSet)]) -> Result<Self> {
        let map = pairs
            .iter()
            .map(|(v, s)| (v.as_ref().to_string(), *s))
            .collect();
        Valuation::new(frame, map)
    }

    pub fn frame(&self) -> &FinitePoset {
        &self.frame
    }

    pub fn assignment(&self) -> &BTreeMap<String, PointSet> {
        &self.assignment
    }

    pub fn get(&self, var: &str) -> Result<PointSet> {
        self.assignment
            .get(var)
            .copied()
            .ok_or_else(|| Error::UnassignedVariable(var.to_string()))
    }

    /// `{"p": ["x2", "x2p"], ...}` using point labels.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<&str, Vec<String>> = self
            .assignment
            .iter()
            .map(|(v, &s)| (v.as_str(), self.frame.labels_of(s)))
            .collect();
        serde_json::to_value(map).expect("valuation JSON is always serializable")
    }

    pub fn from_json(frame: FinitePoset, value: &serde_json::Value) -> Result<Self> {
        let map: BTreeMap<String, Vec<String>> = serde_json::from_value(value.clone())
            .map_err(|e| Error::Invalid(format!("valuation JSON: {e}")))?;
        let assignment = map
            .into_iter()
            .map(|(v, labels)| Ok((v, frame.set_from_labels(&labels)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Valuation::new(frame, assignment)
    }
}

/// A valuation read as a model; forcing sets are memoized per subformula
/// within each query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    valuation: Valuation,
}

impl Model {
    pub fn new(valuation: Valuation) -> Self {
        Model { valuation }
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn frame(&self) -> &FinitePoset {
        &self.valuation.frame
    }

    pub fn forcing_set(&self, f: &Formula) -> Result<PointSet> {
        let program = Program::compile(f);
        let values = program
            .vars
            .iter()
            .map(|v| self.valuation.get(v))
            .collect::<Result<Vec<_>>>()?;
        let mut buf = Vec::new();
        Ok(program.eval(self.frame(), &values, &mut buf))
    }

    pub fn forces(&self, x: usize, f: &Formula) -> Result<bool> {
        self.check_point(x)?;
        Ok(self.forcing_set(f)?.contains(x))
    }

    fn check_point(&self, x: usize) -> Result<()> {
        let size = self.frame().len();
        if x >= size {
            return Err(Error::PointOutOfRange { point: x, size });
        }
        Ok(())
    }
}

pub fn forcing_set(m: &Model, f: &Formula) -> Result<PointSet> {
    m.forcing_set(f)
}

pub fn forces(m: &Model, x: usize, f: &Formula) -> Result<bool> {
    m.forces(x, f)
}

/// Pointwise evaluation by the Kripke clauses, without forcing sets:
/// `x ⊨ φ → ψ` iff every `y ≥ x` forcing `φ` forces `ψ`, and `x ⊨ φ ← ψ`
/// iff some `y ≤ x` forces `φ` but not `ψ`.
pub fn forces_by_clauses(m: &Model, x: usize, f: &Formula) -> Result<bool> {
    m.check_point(x)?;
    let frame = m.frame();
    Ok(match f {
        Formula::Var(v) => m.valuation.get(v)?.contains(x),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::And(a, b) => forces_by_clauses(m, x, a)? && forces_by_clauses(m, x, b)?,
        Formula::Or(a, b) => forces_by_clauses(m, x, a)? || forces_by_clauses(m, x, b)?,
        Formula::Imp(a, b) => {
            for y in frame.up_of(x) {
                if forces_by_clauses(m, y, a)? && !forces_by_clauses(m, y, b)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Coimp(a, b) => {
            for y in frame.down_of(x) {
                if forces_by_clauses(m, y, a)? && !forces_by_clauses(m, y, b)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Every upset of `x`, sorted by bitset value: `∅` first, `X` last.
pub fn all_upsets(x: &FinitePoset) -> Result<Vec<PointSet>> {
    fn go(
        x: &FinitePoset,
        order: &[usize],
        i: usize,
        cur: PointSet,
        out: &mut Vec<PointSet>,
    ) -> bool {
        if i == order.len() {
            out.push(cur);
            return out.len() <= UPSET_LIMIT;
        }
        let p = order[i];
        // points above p were decided earlier
        if !go(x, order, i + 1, cur, out) {
            return false;
        }
        if x.up_of(p).difference(PointSet::singleton(p)).is_subset(cur) {
            let mut with = cur;
            with.insert(p);
            return go(x, order, i + 1, with, out);
        }
        true
    }
    let order = x.top_down_order();
    let mut out = Vec::new();
    if !go(x, &order, 0, PointSet::EMPTY, &mut out) {
        return Err(Error::LimitExceeded {
            what: "number of upsets".into(),
            limit: UPSET_LIMIT as u64,
        });
    }
    out.sort();
    Ok(out)
}

/// A valuation together with a point refuting the formula under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub valuation: Valuation,
    pub point: usize,
}

impl Countermodel {
    pub fn frame(&self) -> &FinitePoset {
        self.valuation.frame()
    }

    /// `{"frame": …, "valuation": …, "refuting_point": …}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CountermodelJson {
            frame: FrameJson::from(self.frame()),
            valuation: self.valuation.to_json(),
            refuting_point: self.frame().label(self.point).to_string(),
        })
        .expect("countermodel JSON is always serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: CountermodelJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Invalid(format!("countermodel JSON: {e}")))?;
        let frame = raw.frame.to_poset()?;
        let point = frame.index_of(&raw.refuting_point)?;
        let valuation = Valuation::from_json(frame, &raw.valuation)?;
        Ok(Countermodel { valuation, point })
    }

    /// Re-checks that the point does not force `f`.
    pub fn refutes(&self, f: &Formula) -> Result<bool> {
        Ok(!Model::new(self.valuation.clone()).forces(self.point, f)?)
    }
}

#[derive(Serialize, Deserialize)]
struct CountermodelJson {
    frame: FrameJson,
    valuation: serde_json::Value,
    refuting_point: String,
}

pub fn is_valid(x: &FinitePoset, f: &Formula) -> Result<bool> {
    is_valid_with(x, f, &Limits::default())
}

pub fn is_valid_with(x: &FinitePoset, f: &Formula, limits: &Limits) -> Result<bool> {
    Ok(find_countermodel_with(x, f, limits)?.is_none())
}

pub fn find_countermodel(x: &FinitePoset, f: &Formula) -> Result<Option<Countermodel>> {
    find_countermodel_with(x, f, &Limits::default())
}

/// Exhaustive search over `Up(X)^k` in lexicographic order of the sorted
/// upset list (first variable most significant). The first refuting
/// valuation is returned regardless of thread count.
pub fn find_countermodel_with(
    x: &FinitePoset,
    f: &Formula,
    limits: &Limits,
) -> Result<Option<Countermodel>> {
    let program = Program::compile(f);
    let k = program.vars.len() as u32;
    if k == 0 {
        let set = program.eval(x, &[], &mut Vec::new());
        return Ok(refuting_point(x, set).map(|point| Countermodel {
            valuation: Valuation::new(x.clone(), BTreeMap::new()).expect("empty valuation"),
            point,
        }));
    }
    let ups = all_upsets(x)?;
    let total = (ups.len() as u64)
        .checked_pow(k)
        .filter(|&t| t <= limits.budget)
        .ok_or_else(|| Error::budget(limits.budget))?;
    let all = x.all();
    let decode = |mut i: u64, values: &mut Vec<PointSet>| {
        values.clear();
        values.resize(k as usize, PointSet::EMPTY);
        for slot in values.iter_mut().rev() {
            *slot = ups[(i % ups.len() as u64) as usize];
            i /= ups.len() as u64;
        }
    };
    let refutes = |i: u64, values: &mut Vec<PointSet>, buf: &mut Vec<PointSet>| {
        decode(i, values);
        program.eval(x, values, buf) != all
    };

    let hit = if limits.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(limits.threads)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..total as usize)
                .into_par_iter()
                .map_init(
                    || (Vec::new(), Vec::new()),
                    |(values, buf), i| refutes(i as u64, values, buf).then_some(i as u64),
                )
                .find_first(Option::is_some)
                .flatten()
        })
    } else {
        let (mut values, mut buf) = (Vec::new(), Vec::new());
        (0..total).find(|&i| refutes(i, &mut values, &mut buf))
    };

    Ok(hit.map(|i| {
        let mut values = Vec::new();
        decode(i, &mut values);
        let set = program.eval(x, &values, &mut Vec::new());
        let assignment = program.vars.iter().cloned().zip(values).collect();
        Countermodel {
            valuation: Valuation::new(x.clone(), assignment).expect("upsets by construction"),
            point: refuting_point(x, set).expect("valuation refutes"),
        }
    }))
}

fn refuting_point(x: &FinitePoset, forced: PointSet) -> Option<usize> {
    x.all().difference(forced).first()
}

/// A formula flattened into its distinct subformulas, children first.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    nodes: Vec<Node>,
    pub(crate) vars: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Var(usize),
    Bot,
    Top,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Coimp(usize, usize),
}

impl Program {
    pub(crate) fn compile(f: &Formula) -> Program {
        let order = f.subformulas_postorder();
        let vars: Vec<String> = f.variables().into_iter().collect();
        let index: BTreeMap<&Formula, usize> =
            order.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let nodes = order
            .iter()
            .map(|g| match g {
                Formula::Var(v) => Node::Var(vars.binary_search(v).expect("collected")),
                Formula::Bot => Node::Bot,
                Formula::Top => Node::Top,
                Formula::And(a, b) => Node::And(index[&**a], index[&**b]),
                Formula::Or(a, b) => Node::Or(index[&**a], index[&**b]),
                Formula::Imp(a, b) => Node::Imp(index[&**a], index[&**b]),
                Formula::Coimp(a, b) => Node::Coimp(index[&**a], index[&**b]),
            })
            .collect();
        Program { nodes, vars }
    }

    /// Forcing set of the root given the upsets of `vars`, in order.
    pub(crate) fn eval(&self, x: &FinitePoset, values: &[PointSet], buf: &mut Vec<PointSet>) -> PointSet {
        let all = x.all();
        buf.clear();
        for node in &self.nodes {
            let s = match *node {
                Node::Var(i) => values[i],
                Node::Bot => PointSet::EMPTY,
                Node::Top => all,
                Node::And(a, b) => buf[a].intersection(buf[b]),
                Node::Or(a, b) => buf[a].union(buf[b]),
                Node::Imp(a, b) => all.difference(x.down(buf[a].difference(buf[b]))),
                Node::Coimp(a, b) => x.up(buf[a].difference(buf[b])),
            };
            buf.push(s);
        }
        *buf.last().expect("formulas are nonempty")
    }
}

/// Variables of all formulas, sorted.
pub fn variables_of<'a, I: IntoIterator<Item = &'a Formula>>(fs: I) -> BTreeSet<String> {
    fs.into_iter().flat_map(|f| f.variables()).collect()
}
