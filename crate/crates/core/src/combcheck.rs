//! Validity on finite combs by a left-to-right automaton over the spine.
//!
//! A valuation on `C_n` is read level by level: level `i` holds the spine
//! point `x_i` and its tooth `x_i'`. The automaton state after level `i` is
//! the truth vector of every subformula at `x_i`, plus a flag recording
//! whether the formula already failed somewhere at or below level `i`.
//!
//! `←` only looks down, so its value at `x_{i+1}` follows from level `i+1`
//! and the state. `→` looks up; its value at `x_i` is guessed and the guess
//! is checked one level later:
//!
//! ```text
//! x_i ⊨ φ → ψ   iff   (x_i ⊨ φ ⇒ x_i ⊨ ψ)  and  x_{i+1} ⊨ φ → ψ
//! ```
//!
//! At the top level `x_n` the guess must equal the local implication. A
//! formula is refuted on `C_n` iff layer `n` holds an accepting, flagged
//! state. All combs are handled in one pass, so the least refuting `n` falls
//! out directly, and a refuting valuation is rebuilt from parent links.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::pointset::PointSet;
use crate::poset::{make_comb, FinitePoset};
use crate::semantics::{Countermodel, Model, Valuation};

/// Largest number of distinct subformulas the automaton handles.
pub const MAX_NODES: usize = 128;
/// Largest number of variables the automaton handles.
pub const MAX_VARS: usize = 16;

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

type Bits = u128;
type Key = (Bits, bool);

fn bit(b: Bits, i: usize) -> bool {
    b >> i & 1 == 1
}

/// How a level was entered: the previous state and the level's variables.
#[derive(Debug, Clone, Copy)]
struct Parent {
    prev: Option<Key>,
    spine: u32,
    tooth: u32,
}

/// One successor of a state: new truth vector at the spine point, the
/// variable choice, and whether the root fails at this level.
#[derive(Debug, Clone, Copy)]
struct Step {
    sigma: Bits,
    spine: u32,
    tooth: u32,
    fails: bool,
}

/// A refuting model on `C_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombRefutation {
    pub n: usize,
    pub countermodel: Countermodel,
}

pub struct SpineAutomaton {
    nodes: Vec<Node>,
    vars: Vec<String>,
    root: usize,
}

impl SpineAutomaton {
    pub fn new(f: &Formula) -> Result<Self> {
        let order = f.subformulas_postorder();
        let vars: Vec<String> = f.variables().into_iter().collect();
        if order.len() > MAX_NODES {
            return Err(Error::LimitExceeded {
                what: "distinct subformulas".into(),
                limit: MAX_NODES as u64,
            });
        }
        if vars.len() > MAX_VARS {
            return Err(Error::LimitExceeded {
                what: "variables".into(),
                limit: MAX_VARS as u64,
            });
        }
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
        Ok(SpineAutomaton {
            nodes,
            vars,
            root: order.len() - 1,
        })
    }

    fn local_imp(sigma: Bits, a: usize, b: usize) -> bool {
        !bit(sigma, a) || bit(sigma, b)
    }

    /// Every guessed `→` agrees with its local value, as required at `x_n`.
    fn accepts_top(&self, sigma: Bits) -> bool {
        self.nodes.iter().enumerate().all(|(j, n)| match *n {
            Node::Imp(a, b) => bit(sigma, j) == Self::local_imp(sigma, a, b),
            _ => true,
        })
    }

    /// All successors of `prev` (or of the empty prefix when `None`).
    fn successors(&self, prev: Option<Bits>, work: &mut u64) -> Vec<Step> {
        let k = self.vars.len();
        let prev_spine: u32 = match prev {
            None => 0,
            Some(p) => self
                .nodes
                .iter()
                .enumerate()
                .filter_map(|(j, n)| match n {
                    Node::Var(v) if bit(p, j) => Some(1 << v),
                    _ => None,
                })
                .fold(0, |a, b| a | b),
        };
        let mut out = Vec::new();
        // each variable: (spine, tooth) ∈ {(0,0), (1,0), (1,1)}, spine forced
        // on when it held at the previous spine point
        let mut choice = vec![0u8; k];
        for (v, c) in choice.iter_mut().enumerate() {
            if prev_spine >> v & 1 == 1 {
                *c = 1;
            }
        }
        loop {
            let (mut spine, mut tooth) = (0u32, 0u32);
            for (v, &c) in choice.iter().enumerate() {
                if c >= 1 {
                    spine |= 1 << v;
                }
                if c == 2 {
                    tooth |= 1 << v;
                }
            }
            self.expand(prev, spine, tooth, 0, 0, 0, &mut out, work);
            // advance the mixed-radix counter
            let mut v = 0;
            loop {
                if v == k {
                    return out;
                }
                if choice[v] < 2 {
                    choice[v] += 1;
                    break;
                }
                choice[v] = if prev_spine >> v & 1 == 1 { 1 } else { 0 };
                v += 1;
            }
        }
    }

    /// Fills in subformula `j` onwards at the new spine point (`sigma`) and
    /// its tooth (`tau`), branching on free `→` guesses.
    #[allow(clippy::too_many_arguments)]
    fn expand(
        &self,
        prev: Option<Bits>,
        spine: u32,
        tooth: u32,
        j: usize,
        sigma: Bits,
        tau: Bits,
        out: &mut Vec<Step>,
        work: &mut u64,
    ) {
        *work += 1;
        if j == self.nodes.len() {
            out.push(Step {
                sigma,
                spine,
                tooth,
                fails: !bit(sigma, self.root) || !bit(tau, self.root),
            });
            return;
        }
        let set = |s: Bits, on: bool| if on { s | 1 << j } else { s };
        let (s, t) = match self.nodes[j] {
            Node::Var(v) => (spine >> v & 1 == 1, tooth >> v & 1 == 1),
            Node::Bot => (false, false),
            Node::Top => (true, true),
            Node::And(a, b) => (
                bit(sigma, a) && bit(sigma, b),
                bit(tau, a) && bit(tau, b),
            ),
            Node::Or(a, b) => (
                bit(sigma, a) || bit(sigma, b),
                bit(tau, a) || bit(tau, b),
            ),
            Node::Coimp(a, b) => {
                let loc_t = bit(tau, a) && !bit(tau, b);
                let loc_s = bit(sigma, a) && !bit(sigma, b);
                let below = prev.is_some_and(|p| bit(p, j));
                (loc_s || loc_t || below, loc_t)
            }
            Node::Imp(a, b) => {
                let loc_s = Self::local_imp(sigma, a, b);
                let loc_t = Self::local_imp(tau, a, b);
                // what the previous spine point demands of this one
                let forced = prev.and_then(|p| {
                    if bit(p, j) {
                        Some(true)
                    } else if Self::local_imp(p, a, b) {
                        Some(false)
                    } else {
                        None
                    }
                });
                let guesses: &[bool] = match forced {
                    Some(true) if !loc_s => &[],
                    Some(g) => if g { &[true] } else { &[false] },
                    None if loc_s => &[false, true],
                    None => &[false],
                };
                for &g in guesses {
                    self.expand(
                        prev,
                        spine,
                        tooth,
                        j + 1,
                        set(sigma, g),
                        set(tau, g && loc_t),
                        out,
                        work,
                    );
                }
                return;
            }
        };
        self.expand(prev, spine, tooth, j + 1, set(sigma, s), set(tau, t), out, work);
    }

    /// Least `n ≤ max_n` such that `C_n` refutes the formula, with a
    /// refuting model. `budget` caps the automaton's expansion steps. Stops
    /// early once a layer repeats the previous one, since every later layer
    /// is then the same.
    pub fn least_refutation(&self, max_n: usize, budget: u64) -> Result<Option<CombRefutation>> {
        self.search(max_n, budget, true)
    }

    /// As [`Self::least_refutation`], but always builds every layer up to
    /// `max_n`.
    pub fn least_refutation_full(&self, max_n: usize, budget: u64) -> Result<Option<CombRefutation>> {
        self.search(max_n, budget, false)
    }

    fn search(&self, max_n: usize, budget: u64, stop_when_stable: bool) -> Result<Option<CombRefutation>> {
        let mut work = 0u64;
        let mut memo: HashMap<Option<Bits>, Vec<Step>> = HashMap::new();
        let mut layers: Vec<BTreeMap<Key, Parent>> = Vec::new();
        let exceeded = |done: usize| Error::SearchBudgetExceeded {
            budget,
            completed_up_to: (done > 0).then_some(done),
        };

        for n in 1..=max_n {
            let mut layer: BTreeMap<Key, Parent> = BTreeMap::new();
            let prevs: Vec<Option<Key>> = match layers.last() {
                None => vec![None],
                Some(l) => l.keys().copied().map(Some).collect(),
            };
            for pk in prevs {
                let sigma_prev = pk.map(|(s, _)| s);
                if !memo.contains_key(&sigma_prev) {
                    let steps = self.successors(sigma_prev, &mut work);
                    memo.insert(sigma_prev, steps);
                }
                if work > budget {
                    return Err(exceeded(n - 1));
                }
                let flag = pk.is_some_and(|(_, f)| f);
                for st in &memo[&sigma_prev] {
                    layer.entry((st.sigma, flag || st.fails)).or_insert(Parent {
                        prev: pk,
                        spine: st.spine,
                        tooth: st.tooth,
                    });
                }
            }
            let hit = layer
                .keys()
                .find(|&&(s, f)| f && self.accepts_top(s))
                .copied();
            let stable =
                stop_when_stable && layers.last().is_some_and(|l| l.keys().eq(layer.keys()));
            layers.push(layer);
            if let Some(key) = hit {
                return Ok(Some(self.rebuild(&layers, key)?));
            }
            if stable {
                // every later layer is the same set of states
                return Ok(None);
            }
        }
        Ok(None)
    }

    fn rebuild(&self, layers: &[BTreeMap<Key, Parent>], key: Key) -> Result<CombRefutation> {
        let n = layers.len();
        let comb = make_comb(n)?;
        let mut sets = vec![PointSet::EMPTY; self.vars.len()];
        let mut cur = Some(key);
        for level in (1..=n).rev() {
            let p = layers[level - 1][&cur.expect("parents reach level 1")];
            for (v, s) in sets.iter_mut().enumerate() {
                if p.spine >> v & 1 == 1 {
                    s.insert(2 * level - 1);
                }
                if p.tooth >> v & 1 == 1 {
                    s.insert(2 * level - 2);
                }
            }
            cur = p.prev;
        }
        let assignment = self.vars.iter().cloned().zip(sets).collect();
        let valuation = Valuation::new(comb.clone(), assignment)?;
        let point = refuting_point(&comb, &valuation, self)?;
        Ok(CombRefutation {
            n,
            countermodel: Countermodel { valuation, point },
        })
    }
}

fn refuting_point(comb: &FinitePoset, valuation: &Valuation, a: &SpineAutomaton) -> Result<usize> {
    let f = a.formula();
    let forced = Model::new(valuation.clone()).forcing_set(&f)?;
    comb.all()
        .difference(forced)
        .first()
        .ok_or_else(|| Error::Invalid(format!("rebuilt valuation does not refute {f}")))
}

impl SpineAutomaton {
    /// The formula the automaton was built from.
    pub fn formula(&self) -> Formula {
        fn build(nodes: &[Node], vars: &[String], j: usize) -> Formula {
            let b = |i| Box::new(build(nodes, vars, i));
            match nodes[j] {
                Node::Var(v) => Formula::Var(vars[v].clone()),
                Node::Bot => Formula::Bot,
                Node::Top => Formula::Top,
                Node::And(x, y) => Formula::And(b(x), b(y)),
                Node::Or(x, y) => Formula::Or(b(x), b(y)),
                Node::Imp(x, y) => Formula::Imp(b(x), b(y)),
                Node::Coimp(x, y) => Formula::Coimp(b(x), b(y)),
            }
        }
        build(&self.nodes, &self.vars, self.root)
    }
}

/// Least `n ≤ max_n` with `C_n ⊭ f`, and a refuting model.
pub fn least_refuting_comb(f: &Formula, max_n: usize, budget: u64) -> Result<Option<CombRefutation>> {
    SpineAutomaton::new(f)?.least_refutation(max_n, budget)
}

/// As [`least_refuting_comb`] without the early stop.
pub fn least_refuting_comb_full(f: &Formula, max_n: usize, budget: u64) -> Result<Option<CombRefutation>> {
    SpineAutomaton::new(f)?.least_refutation_full(max_n, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::is_valid;

    fn least(f: &str, max_n: usize) -> Option<usize> {
        let f = crate::parse(f).unwrap();
        let r = least_refuting_comb(&f, max_n, u64::MAX).unwrap();
        if let Some(r) = &r {
            assert!(r.countermodel.refutes(&f).unwrap());
        }
        r.map(|r| r.n)
    }

    #[test]
    fn named_formulas() {
        assert_eq!(least("true", 10), None);
        assert_eq!(least("false", 10), Some(1));
        assert_eq!(least("p | !p", 10), Some(1));
        assert_eq!(least("(p -> q) | (q -> p)", 10), None);
        assert_eq!(least("!((q <- p) & (p <- q))", 10), Some(2));
        assert_eq!(least("p", 3), Some(1));
    }

    #[test]
    fn agrees_with_exhaustive_search() {
        let cases = [
            "p -> q",
            "~p | !~p",
            "(p <- q) -> p",
            "~~p -> p",
            "!!p -> p",
            "~(p -> q) | (p -> q)",
            "(p <- q) & (q <- p) -> false",
            "!(p <- q) | !(q <- p)",
            "~!p -> (p | ~p)",
        ];
        for s in cases {
            let f = crate::parse(s).unwrap();
            let expected = (1..=4).find(|&n| !is_valid(&make_comb(n).unwrap(), &f).unwrap());
            assert_eq!(least(s, 4), expected, "{s}");
        }
    }

    #[test]
    fn budget_reports_progress() {
        let f = crate::parse("!((q <- p) & (p <- q)) | (p -> q)").unwrap();
        match least_refuting_comb(&f, 20, 10) {
            Err(Error::SearchBudgetExceeded { budget: 10, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
