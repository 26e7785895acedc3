//! Frame JSON and Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::FinitePoset;
use crate::error::{Error, Result};

/// `{"points": [...], "covers": [[lower, upper], ...]}`. Any edge list is
/// accepted on input; the loader closes it reflexively and transitively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    pub points: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

impl FrameJson {
    pub fn to_poset(&self) -> Result<FinitePoset> {
        FinitePoset::from_labeled(&self.points, &self.covers)
    }
}

impl From<&FinitePoset> for FrameJson {
    fn from(p: &FinitePoset) -> Self {
        FrameJson {
            points: p.labels().to_vec(),
            covers: p
                .covers()
                .into_iter()
                .map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
                .collect(),
        }
    }
}

impl FinitePoset {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let frame: FrameJson =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("frame JSON: {e}")))?;
        frame.to_poset()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FrameJson::from(self)).expect("frame JSON is always serializable")
    }

    /// Hasse diagram in DOT, co-root on top, one rank per depth.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
        let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in self.points() {
            ranks.entry(self.depth_of(x)).or_default().push(x);
        }
        for members in ranks.values() {
            let names: Vec<String> = members.iter().map(|&x| format!("{:?};", self.label(x))).collect();
            let _ = writeln!(out, "  {{ rank=same; {} }}", names.join(" "));
        }
        for (a, b) in self.covers() {
            let _ = writeln!(out, "  {:?} -> {:?};", self.label(a), self.label(b));
        }
        out.push_str("}\n");
        out
    }
}
