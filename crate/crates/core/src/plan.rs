//! Pipeline planner: predicts the digests a pipeline will produce from the
//! digests of its inputs and functions alone, without running anything.
//!
//! A plan file is JSON:
//!
//! ```json
//! {"version": "ut40.4",
//!  "steps": [{"kind": "value", "digest": "..."},
//!            {"kind": "function", "digest": "...", "outputs": 2}]}
//! ```
//!
//! Step kinds: `value` and `insert` append a value; `function` replaces all
//! values by `outputs` (default 1) new ones; `create` adds `outputs` values
//! in front of the existing ones; `remove_index` and `remove_name` remove a
//! value leaving a placeholder; `map_entry` inserts `key → digest`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codec::{decode, encode};
use crate::error::{Error, Result};
use crate::group::{GroupParams, UtElement};
use crate::store::Store;
use crate::workflow::{map_entry, verify_three_way, SlotKind, TupleState};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub version: String,
    pub steps: Vec<PlanStep>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanStep {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
}

impl PlanStep {
    pub fn value(digest: impl Into<String>) -> Self {
        PlanStep {
            kind: "value".into(),
            digest: Some(digest.into()),
            ..Default::default()
        }
    }

    pub fn function(digest: impl Into<String>, outputs: usize) -> Self {
        PlanStep {
            kind: "function".into(),
            digest: Some(digest.into()),
            outputs: Some(outputs),
            ..Default::default()
        }
    }

    pub fn create(digest: impl Into<String>, outputs: usize) -> Self {
        PlanStep {
            kind: "create".into(),
            ..PlanStep::function(digest, outputs)
        }
    }

    pub fn remove_index(index: usize) -> Self {
        PlanStep {
            kind: "remove_index".into(),
            index: Some(index),
            ..Default::default()
        }
    }

    pub fn remove_name(name: impl Into<String>) -> Self {
        PlanStep {
            kind: "remove_name".into(),
            name: Some(name.into()),
            ..Default::default()
        }
    }

    pub fn map_entry(key: impl Into<String>, digest: impl Into<String>) -> Self {
        PlanStep {
            kind: "map_entry".into(),
            key: Some(key.into()),
            digest: Some(digest.into()),
            ..Default::default()
        }
    }

    /// Rejects missing fields and fields the kind does not use.
    fn check_fields(&self, n: usize) -> Result<()> {
        let (needs, allows): (&[&str], &[&str]) = match self.kind.as_str() {
            "value" | "insert" => (&["digest"], &["digest"]),
            "function" => (&["digest"], &["digest", "outputs"]),
            "create" => (&["digest", "outputs"], &["digest", "outputs"]),
            "remove_index" => (&["index"], &["index"]),
            "remove_name" => (&["name"], &["name"]),
            "map_entry" => (&["key", "digest"], &["key", "digest"]),
            other => return Err(Error::MalformedPlan(format!("step {n}: unknown kind {other:?}"))),
        };
        let present = [
            ("digest", self.digest.is_some()),
            ("outputs", self.outputs.is_some()),
            ("index", self.index.is_some()),
            ("name", self.name.is_some()),
            ("key", self.key.is_some()),
        ];
        for (field, is_set) in present {
            if needs.contains(&field) && !is_set {
                return Err(Error::MalformedPlan(format!(
                    "step {n} ({}): missing {field}",
                    self.kind
                )));
            }
            if is_set && !allows.contains(&field) {
                return Err(Error::MalformedPlan(format!(
                    "step {n} ({}): unexpected {field}",
                    self.kind
                )));
            }
        }
        Ok(())
    }
}

impl PlanFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedPlan(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lookup {
    Hit,
    Miss,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub kind: String,
    /// Digest of the whole tuple after this step.
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lookup: Option<Lookup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotReport {
    pub digest: String,
    pub placeholder: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanReport {
    pub version: String,
    pub final_digest: String,
    pub steps: Vec<StepReport>,
    pub slots: Vec<SlotReport>,
    pub history: String,
    /// Process, data and history products agree.
    pub consistent: bool,
    pub auditable: bool,
}

fn digest_of(e: &UtElement) -> String {
    encode(e).expect("official version").into_string()
}

/// Outcome of folding a plan through the workflow algebra.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub state: TupleState,
    /// Elements operated on the tuple, in order.
    pub process: Vec<UtElement>,
    /// Tuple product after each step.
    pub running: Vec<UtElement>,
}

/// Folds the plan's steps through [`TupleState`].
pub fn evaluate(plan: &PlanFile) -> Result<Evaluation> {
    let params = GroupParams::from_name(&plan.version)?;
    if params.version().is_none() {
        return Err(Error::NoDigestSupport(params.name()));
    }
    let mut state = TupleState::new(params).with_tuple_removal(true);
    let mut process = Vec::new();
    let mut running = Vec::new();
    for (n, step) in plan.steps.iter().enumerate() {
        let n = n + 1;
        step.check_fields(n)?;
        let element = |d: &Option<String>| decode(d.as_deref().expect("checked"), params);
        state = match step.kind.as_str() {
            "value" | "insert" => {
                let x = element(&step.digest)?;
                process.push(x);
                state.insert_value_with_content(x, step.digest.clone().expect("checked"))?
            }
            "function" | "create" => {
                let f = element(&step.digest)?;
                let k = step.outputs.unwrap_or(1);
                process.push(f);
                if step.kind == "function" {
                    state.apply_function(f, k)?
                } else {
                    state.create_values(f, k)?
                }
            }
            "remove_index" => {
                let (next, delta) = state.remove_by_index(step.index.expect("checked"))?;
                process.push(delta);
                next
            }
            "remove_name" => {
                let (next, delta) = state.remove_by_name(step.name.as_deref().expect("checked"))?;
                process.push(delta);
                next
            }
            "map_entry" => {
                let key = step.key.as_deref().expect("checked");
                let x = element(&step.digest)?;
                process.push(map_entry(key, &x)?);
                state.insert_entry(key, x)?
            }
            _ => unreachable!("kind checked"),
        };
        running.push(state.product());
    }
    Ok(Evaluation {
        state,
        process,
        running,
    })
}

/// Evaluates `plan` and, when a store is given, reports whether each
/// step's tuple digest (after alias resolution) is already stored.
pub fn plan(plan: &PlanFile, store: Option<&Store>) -> Result<PlanReport> {
    let eval = evaluate(plan)?;
    let params = eval.state.params();
    if let Some(store) = store {
        if store.params() != params {
            return Err(Error::VersionMismatch(store.params().name(), params.name()));
        }
    }
    let mut steps = Vec::with_capacity(eval.running.len());
    for (i, (step, product)) in plan.steps.iter().zip(&eval.running).enumerate() {
        let digest = digest_of(product);
        let lookup = match store {
            Some(s) => Some(if s.has(&s.resolve(&digest)?)? {
                Lookup::Hit
            } else {
                Lookup::Miss
            }),
            None => None,
        };
        steps.push(StepReport {
            step: i + 1,
            kind: step.kind.clone(),
            digest,
            lookup,
        });
    }
    Ok(PlanReport {
        version: params.name(),
        final_digest: digest_of(&eval.state.product()),
        steps,
        slots: eval
            .state
            .slots()
            .iter()
            .map(|s| SlotReport {
                digest: digest_of(&s.element),
                placeholder: s.kind == SlotKind::Placeholder,
                name: s.name.clone(),
            })
            .collect(),
        history: eval.state.render_history(digest_of),
        consistent: verify_three_way(&eval.state, &eval.process),
        auditable: eval.state.is_auditable(),
    })
}

impl PlanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "version     {}", self.version);
        let _ = writeln!(out, "final       {}", self.final_digest);
        let _ = writeln!(out, "consistent  {}", self.consistent);
        let _ = writeln!(out, "auditable   {}", self.auditable);
        let _ = writeln!(out, "steps");
        let width = self.steps.iter().map(|s| s.kind.len()).max().unwrap_or(0);
        for s in &self.steps {
            let lookup = match s.lookup {
                Some(Lookup::Hit) => "  hit",
                Some(Lookup::Miss) => "  miss",
                None => "",
            };
            let _ = writeln!(out, "  {:>3}  {:<width$}  {}{}", s.step, s.kind, s.digest, lookup);
        }
        let _ = writeln!(out, "slots");
        for (i, s) in self.slots.iter().enumerate() {
            let mut tags = String::new();
            if s.placeholder {
                tags.push_str("  placeholder");
            }
            if let Some(name) = &s.name {
                let _ = write!(tags, "  name={name}");
            }
            let _ = writeln!(out, "  {:>3}  {}{}", i + 1, s.digest, tags);
        }
        let _ = writeln!(out, "history     {}", self.history);
        out
    }
}
