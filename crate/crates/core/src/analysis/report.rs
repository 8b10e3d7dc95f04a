use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

use crate::num::{fmt_rat, Rat};
use crate::strategy::Strategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumMode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rat),
    Interval(f64, f64),
}

/// Per-state values with provenance, serializable for the command line.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueReport {
    pub objective: String,
    pub mode: NumMode,
    pub ids: Vec<String>,
    pub values: Vec<Value>,
    pub witness: Option<Strategy>,
    /// Pessimistic/optimistic truncation bounds for countable inputs.
    pub bounds: Option<Vec<(Rat, Rat)>>,
}

impl ValueReport {
    pub fn exact(objective: String, ids: Vec<String>, values: &[Rat]) -> Self {
        ValueReport {
            objective,
            mode: NumMode::Exact,
            ids,
            values: values.iter().cloned().map(Value::Exact).collect(),
            witness: None,
            bounds: None,
        }
    }

    pub fn to_json(&self) -> Json {
        let mut values = Map::new();
        for (id, v) in self.ids.iter().zip(&self.values) {
            let j = match v {
                Value::Exact(r) => json!(fmt_rat(r)),
                Value::Interval(lo, hi) => json!([lo, hi]),
            };
            values.insert(id.clone(), j);
        }
        let mut out = Map::new();
        out.insert("objective".into(), json!(self.objective));
        out.insert("mode".into(), serde_json::to_value(self.mode).expect("mode"));
        out.insert("values".into(), Json::Object(values));
        if let Some(w) = &self.witness {
            out.insert("witness".into(), serde_json::to_value(w.to_doc()).expect("strategy"));
        }
        if let Some(b) = &self.bounds {
            let mut bm = Map::new();
            for (id, (lo, hi)) in self.ids.iter().zip(b) {
                bm.insert(id.clone(), json!([fmt_rat(lo), fmt_rat(hi)]));
            }
            out.insert("bounds".into(), Json::Object(bm));
        }
        Json::Object(out)
    }
}
