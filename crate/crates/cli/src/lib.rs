//! The `logfc` command line.
//!
//! Every command prints one JSON document on stdout, including failures.
//! Exit codes: 0 completed, 1 usage or input error, 2 budget exceeded.
//! With `--corpus DIR` every `*.jsonl` file in `DIR` is read as a list of
//! cases and one JSON line is printed per case.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use logfc_core::decide::{
    in_logfc_with, locally_tabular_with, logfc_semidecide_with, refutation_json,
};
use logfc_core::morphism::{embedding_exists_with, surjection_exists_with, DEFAULT_NODE_BUDGET};
use logfc_core::poset::{
    antichain, chain, classify, enumerate_cotrees, enumerate_posets, make_comb, make_hcomb,
    FrameJson,
};
use logfc_core::semantics::{find_countermodel_with, Limits, Model, Valuation, DEFAULT_BUDGET};
use logfc_core::structure::{frame_f, validates_lfc};
use logfc_core::{parse, Error, FinitePoset, Formula};

#[derive(Parser, Debug)]
#[command(name = "logfc", version, about = "Bi-intuitionistic semantics over finite co-trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Formula text
    #[arg(long, global = true)]
    pub formula: Option<String>,

    /// File holding the formula (for decide-ltab: one axiom per line)
    #[arg(long, global = true)]
    pub formula_file: Option<PathBuf>,

    /// Frame JSON file, or one of comb:N, hcomb:N, chain:N, antichain:N, F0..F3
    #[arg(long, global = true)]
    pub frame: Option<String>,

    /// Second frame for morphism/embed, same forms as --frame
    #[arg(long, global = true)]
    pub target: Option<String>,

    /// Valuation JSON file: {"p": ["x1", ...], ...}
    #[arg(long, global = true)]
    pub valuation: Option<PathBuf>,

    /// Point label for eval
    #[arg(long, global = true)]
    pub point: Option<String>,

    /// Axiom for decide-ltab; repeat for several
    #[arg(long = "axioms", global = true)]
    pub axioms: Vec<String>,

    /// Check combs C_1..C_N regardless of the bound (decide-logfc)
    #[arg(long, global = true)]
    pub max_n: Option<usize>,

    /// Work budget for the underlying search
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Worker threads for exhaustive validity search
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    /// Run every case in DIR/*.jsonl and print one JSON line per case
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,

    /// What enumerate lists
    #[arg(long, global = true, value_enum, default_value_t = Kind::Cotrees)]
    pub kind: Kind,

    /// Largest size for enumerate
    #[arg(long, global = true, default_value_t = 5)]
    pub max_size: usize,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Parse and print a formula with its AST
    Parse,
    /// Forcing set of a formula under a valuation
    Eval,
    /// Validity on a frame, with a countermodel when invalid
    Valid,
    /// Surjective bi-p-morphism from --frame onto --target
    Morphism,
    /// Order embedding of --frame into --target
    Embed,
    /// Comb, hcomb, other co-tree, co-forest or neither
    Classify,
    /// Structural LFC test
    LfcCheck,
    /// Membership in the logic of the finite combs
    DecideLogfc,
    /// Local tabularity of bi-GD plus the given axioms
    DecideLtab,
    /// List co-trees or posets up to isomorphism
    Enumerate,
    /// Hasse diagram as DOT
    Render,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Cotrees,
    Posets,
}

/// Exit code and the text written to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure of one command.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::SearchBudgetExceeded { .. }) => 2,
            _ => 1,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Usage(m) => json!({ "error": { "kind": "usage", "message": m } }),
            Failure::Core(e) => {
                let mut err = json!({ "kind": error_kind(e), "message": e.to_string() });
                match e {
                    Error::Syntax { offset, .. } | Error::Ambiguity { offset } => {
                        err["offset"] = json!(offset);
                    }
                    Error::SearchBudgetExceeded { budget, completed_up_to } => {
                        err["budget"] = json!(budget);
                        err["completed_up_to"] = json!(completed_up_to);
                    }
                    _ => {}
                }
                json!({ "error": err })
            }
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::Ambiguity { .. } => "ambiguity",
        Error::Cycle(..) => "cycle",
        Error::PointOutOfRange { .. } => "point_out_of_range",
        Error::UnknownPoint(_) => "unknown_point",
        Error::DuplicatePoint(_) => "duplicate_point",
        Error::TooManyPoints(_) => "too_many_points",
        Error::NotCoTree => "not_cotree",
        Error::NoGreatestElement => "no_greatest_element",
        Error::Domain(_) => "domain",
        Error::LimitExceeded { .. } => "limit_exceeded",
        Error::UnassignedVariable(_) => "unassigned_variable",
        Error::NotUpset => "not_upset",
        Error::SearchBudgetExceeded { .. } => "budget_exceeded",
        Error::Invalid(_) => "invalid",
    }
}

/// Inputs of one command, from flags or from a corpus line.
#[derive(Debug, Clone, Default)]
struct Request {
    formula: Option<String>,
    axioms: Vec<String>,
    frame: Option<FrameSource>,
    target: Option<FrameSource>,
    valuation: Option<Value>,
    point: Option<String>,
    max_n: Option<usize>,
    budget: Option<u64>,
    threads: usize,
    kind: Option<Kind>,
    max_size: usize,
}

#[derive(Debug, Clone)]
enum FrameSource {
    Named(String),
    Inline(Value),
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                Outcome { code: 0, stdout: line(&json!({ "help": text })), stderr: String::new() }
            } else {
                usage_failure(text)
            };
        }
    };

    if let Some(dir) = &cli.corpus {
        return run_corpus(dir, cli.command, cli.threads);
    }
    let Some(command) = cli.command else {
        return usage_failure("no command given; try --help".into());
    };
    let outcome = request_from_cli(&cli).and_then(|req| execute(command, &req));
    match outcome {
        Ok(v) => Outcome { code: 0, stdout: line(&v), stderr: String::new() },
        Err(f) => {
            let stderr = format!("logfc: {}\n", f.to_json()["error"]["message"].as_str().unwrap_or(""));
            Outcome { code: f.code(), stdout: line(&f.to_json()), stderr }
        }
    }
}

fn usage_failure(message: String) -> Outcome {
    let f = Failure::Usage(message.trim_end().to_string());
    Outcome { code: 1, stdout: line(&f.to_json()), stderr: format!("{message}\n") }
}

fn line(v: &Value) -> String {
    format!("{v}\n")
}

fn request_from_cli(cli: &Cli) -> Result<Request, Failure> {
    let file_text = match &cli.formula_file {
        Some(p) => Some(
            fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?,
        ),
        None => None,
    };
    let mut axioms = cli.axioms.clone();
    let formula = match (&cli.formula, &file_text) {
        (Some(f), _) => Some(f.clone()),
        (None, Some(text)) => {
            let lines: Vec<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            if cli.command == Some(Command::DecideLtab) {
                axioms.extend(lines);
                None
            } else {
                Some(lines.join(" "))
            }
        }
        (None, None) => None,
    };
    let valuation = match &cli.valuation {
        Some(p) => Some(read_json(p)?),
        None => None,
    };
    Ok(Request {
        formula,
        axioms,
        frame: cli.frame.clone().map(FrameSource::Named),
        target: cli.target.clone().map(FrameSource::Named),
        valuation,
        point: cli.point.clone(),
        max_n: cli.max_n,
        budget: cli.budget,
        threads: cli.threads,
        kind: Some(cli.kind),
        max_size: cli.max_size,
    })
}

fn read_json(p: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(p)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}

fn load_frame(src: &FrameSource) -> Result<FinitePoset, Failure> {
    match src {
        FrameSource::Inline(Value::String(s)) => load_frame(&FrameSource::Named(s.clone())),
        FrameSource::Inline(v) => {
            let raw: FrameJson = serde_json::from_value(v.clone())
                .map_err(|e| Failure::Usage(format!("frame JSON: {e}")))?;
            Ok(raw.to_poset()?)
        }
        FrameSource::Named(s) => {
            if let Some(frame) = builtin_frame(s)? {
                return Ok(frame);
            }
            let text = fs::read_to_string(s)
                .map_err(|e| Failure::Usage(format!("cannot read frame {s}: {e}")))?;
            Ok(FinitePoset::from_json_str(&text)?)
        }
    }
}

fn builtin_frame(s: &str) -> Result<Option<FinitePoset>, Failure> {
    if let Some(i) = s.strip_prefix('F').and_then(|d| d.parse::<usize>().ok()) {
        if i <= 3 {
            return Ok(Some(frame_f(i)));
        }
    }
    let Some((name, n)) = s.split_once(':') else {
        return Ok(None);
    };
    let n: usize = n
        .parse()
        .map_err(|_| Failure::Usage(format!("bad size in frame `{s}`")))?;
    Ok(Some(match name {
        "comb" => make_comb(n)?,
        "hcomb" => make_hcomb(n)?,
        "chain" => chain(n),
        "antichain" => antichain(n),
        _ => return Ok(None),
    }))
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, cmd: Command) -> Result<&'a T, Failure> {
    v.as_ref()
        .ok_or_else(|| Failure::Usage(format!("{} requires --{flag}", command_name(cmd))))
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Parse => "parse",
        Command::Eval => "eval",
        Command::Valid => "valid",
        Command::Morphism => "morphism",
        Command::Embed => "embed",
        Command::Classify => "classify",
        Command::LfcCheck => "lfc-check",
        Command::DecideLogfc => "decide-logfc",
        Command::DecideLtab => "decide-ltab",
        Command::Enumerate => "enumerate",
        Command::Render => "render",
    }
}

fn command_from_name(s: &str) -> Option<Command> {
    use Command::*;
    [Parse, Eval, Valid, Morphism, Embed, Classify, LfcCheck, DecideLogfc, DecideLtab, Enumerate, Render]
        .into_iter()
        .find(|&c| command_name(c) == s)
}

/// AST as nested JSON: `{"imp": [{"var": "p"}, "false"]}`.
pub fn ast_json(f: &Formula) -> Value {
    match f {
        Formula::Var(v) => json!({ "var": v }),
        Formula::Bot => json!("false"),
        Formula::Top => json!("true"),
        Formula::And(a, b) => json!({ "and": [ast_json(a), ast_json(b)] }),
        Formula::Or(a, b) => json!({ "or": [ast_json(a), ast_json(b)] }),
        Formula::Imp(a, b) => json!({ "imp": [ast_json(a), ast_json(b)] }),
        Formula::Coimp(a, b) => json!({ "coimp": [ast_json(a), ast_json(b)] }),
    }
}

fn execute(cmd: Command, req: &Request) -> Result<Value, Failure> {
    let formula = || -> Result<Formula, Failure> { Ok(parse(need(&req.formula, "formula", cmd)?)?) };
    let frame = || load_frame(need(&req.frame, "frame", cmd)?);
    let target = || load_frame(need(&req.target, "target", cmd)?);
    let limits = Limits {
        budget: req.budget.unwrap_or(DEFAULT_BUDGET),
        threads: req.threads.max(1),
    };

    Ok(match cmd {
        Command::Parse => {
            let f = formula()?;
            let s = f.subformulas();
            json!({
                "formula": f.to_string(),
                "ast": ast_json(&f),
                "ipd": f.ipd(),
                "subformulas": s.all.len(),
                "imps": s.imps.len(),
                "coimps": s.coimps.len(),
                "variables": f.variables(),
            })
        }
        Command::Eval => {
            let (x, f) = (frame()?, formula()?);
            let v = need(&req.valuation, "valuation", cmd)?;
            let m = Model::new(Valuation::from_json(x.clone(), v)?);
            let set = m.forcing_set(&f)?;
            let mut out = json!({ "formula": f.to_string(), "forcing_set": x.labels_of(set) });
            if let Some(p) = &req.point {
                out["point"] = json!(p);
                out["forces"] = json!(m.forces(x.index_of(p)?, &f)?);
            }
            out
        }
        Command::Valid => {
            let (x, f) = (frame()?, formula()?);
            let cm = find_countermodel_with(&x, &f, &limits)?;
            json!({
                "formula": f.to_string(),
                "valid": cm.is_none(),
                "countermodel": cm.map(|c| c.to_json()),
            })
        }
        Command::Morphism => {
            let w = surjection_exists_with(&frame()?, &target()?, req.budget.unwrap_or(DEFAULT_NODE_BUDGET))?;
            json!({ "exists": w.is_some(), "witness": w.map(|w| w.to_json()) })
        }
        Command::Embed => {
            let w = embedding_exists_with(&frame()?, &target()?, req.budget.unwrap_or(DEFAULT_NODE_BUDGET))?;
            json!({ "exists": w.is_some(), "witness": w.map(|w| w.to_json()) })
        }
        Command::Classify => serde_json::to_value(classify(&frame()?)).expect("class serializes"),
        Command::LfcCheck => validates_lfc(&frame()?)?.to_json(),
        Command::DecideLogfc => {
            let f = formula()?;
            let budget = req.budget.unwrap_or(DEFAULT_BUDGET);
            match req.max_n {
                None => in_logfc_with(&f, budget)?.to_json(),
                Some(n) => {
                    let r = logfc_semidecide_with(&f, n, budget)?;
                    json!({
                        "formula": f.to_string(),
                        "max_n": n,
                        "refuted": r.is_some(),
                        "certificate": r.as_ref().map(refutation_json),
                    })
                }
            }
        }
        Command::DecideLtab => {
            let mut axioms = Vec::new();
            for a in &req.axioms {
                axioms.push(parse(a)?);
            }
            if let Some(f) = &req.formula {
                axioms.push(parse(f)?);
            }
            locally_tabular_with(&axioms, req.budget.unwrap_or(DEFAULT_BUDGET))?.to_json()
        }
        Command::Enumerate => {
            let kind = req.kind.unwrap_or(Kind::Cotrees);
            let frames = match kind {
                Kind::Cotrees => enumerate_cotrees(req.max_size)?,
                Kind::Posets => enumerate_posets(req.max_size)?,
            };
            let list: Vec<Value> = frames.iter().map(|x| x.to_json()).collect();
            json!({
                "kind": match kind { Kind::Cotrees => "cotrees", Kind::Posets => "posets" },
                "max_size": req.max_size,
                "count": list.len(),
                "frames": list,
            })
        }
        Command::Render => {
            let x = frame()?;
            json!({ "dot": x.to_dot(), "points": x.len(), "covers": x.covers().len() })
        }
    })
}

/// One case per line: `{"id": ..., "command": "decide-logfc", "formula": ...}`.
/// `frame` and `target` may be frame objects or builtin names.
fn run_corpus(dir: &Path, default: Option<Command>, threads: usize) -> Outcome {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect(),
        Err(e) => return usage_failure(format!("cannot read corpus {}: {e}", dir.display())),
    };
    files.sort();
    let (mut stdout, mut stderr, mut code) = (String::new(), String::new(), 0);
    for file in files {
        let text = match fs::read_to_string(&file) {
            Ok(t) => t,
            Err(e) => return usage_failure(format!("cannot read {}: {e}", file.display())),
        };
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let name = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let case = format!("{name}:{}", i + 1);
            let (out, c) = run_case(raw, default, threads, &case);
            if c != 0 {
                stderr.push_str(&format!("logfc: {case}: case failed with exit code {c}\n"));
            }
            code = code.max(c);
            stdout.push_str(&line(&out));
        }
    }
    Outcome { code, stdout, stderr }
}

fn run_case(raw: &str, default: Option<Command>, threads: usize, case: &str) -> (Value, i32) {
    let parsed: Result<(Command, Request, Value), Failure> = (|| {
        let v: Value = serde_json::from_str(raw).map_err(|e| Failure::Usage(format!("bad JSON: {e}")))?;
        let cmd = match v.get("command").and_then(Value::as_str) {
            Some(s) => command_from_name(s).ok_or_else(|| Failure::Usage(format!("unknown command `{s}`")))?,
            None => default.ok_or_else(|| Failure::Usage("case has no command".into()))?,
        };
        let str_field = |k: &str| v.get(k).and_then(Value::as_str).map(String::from);
        let axioms = match v.get("axioms") {
            None => Vec::new(),
            Some(Value::Array(a)) => a.iter().filter_map(Value::as_str).map(String::from).collect(),
            Some(Value::String(s)) => vec![s.clone()],
            Some(_) => return Err(Failure::Usage("axioms must be a list of strings".into())),
        };
        let req = Request {
            formula: str_field("formula"),
            axioms,
            frame: v.get("frame").cloned().map(FrameSource::Inline),
            target: v.get("target").cloned().map(FrameSource::Inline),
            valuation: v.get("valuation").cloned(),
            point: str_field("point"),
            max_n: v.get("max_n").and_then(Value::as_u64).map(|n| n as usize),
            budget: v.get("budget").and_then(Value::as_u64),
            threads,
            kind: match str_field("kind").as_deref() {
                Some("posets") => Some(Kind::Posets),
                _ => Some(Kind::Cotrees),
            },
            max_size: v.get("max_size").and_then(Value::as_u64).unwrap_or(5) as usize,
        };
        let id = v.get("id").cloned().unwrap_or(json!(case));
        Ok((cmd, req, id))
    })();
    match parsed {
        Err(f) => (json!({ "id": case, "ok": false, "error": f.to_json()["error"] }), f.code()),
        Ok((cmd, req, id)) => match execute(cmd, &req) {
            Ok(result) => (json!({ "id": id, "command": command_name(cmd), "ok": true, "result": result }), 0),
            Err(f) => (
                json!({ "id": id, "command": command_name(cmd), "ok": false, "error": f.to_json()["error"] }),
                f.code(),
            ),
        },
    }
}
