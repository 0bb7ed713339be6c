//! Run reports with a human rendering and a JSON rendering carrying the
//! same facts.

use std::time::Duration;

use bcpair_core::rat::{format_rat, Rat};
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub key: String,
    pub human: String,
    pub value: Value,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, Value)>,
    pub facts: Vec<Fact>,
    pub exit_code: i32,
    pub error: Option<String>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: Vec::new(),
            facts: Vec::new(),
            exit_code: 0,
            error: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.push((key.to_string(), value.into()));
    }

    /// A fact whose human text is the given string.
    pub fn fact(&mut self, key: &str, human: impl Into<String>, value: impl Into<Value>) {
        self.facts.push(Fact { key: key.to_string(), human: human.into(), value: value.into() });
    }

    /// A fact shown the same way in both renderings.
    pub fn text(&mut self, key: &str, text: impl Into<String>) {
        let t = text.into();
        self.fact(key, t.clone(), t);
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        self.fact(key, v.to_string(), v);
    }

    pub fn fail(&mut self, code: i32, msg: impl Into<String>) {
        self.exit_code = code;
        self.error = Some(msg.into());
    }

    pub fn status(&self) -> &'static str {
        match self.exit_code {
            0 => "ok",
            1 => "failed",
            _ => "error",
        }
    }

    pub fn render_human(&self) -> String {
        let mut out = format!("{}\n", self.command);
        let width = self.facts.iter().map(|f| f.key.len()).max().unwrap_or(0);
        for f in &self.facts {
            let mut lines = f.human.lines();
            out.push_str(&format!("  {:width$}  {}\n", f.key, lines.next().unwrap_or("")));
            for l in lines {
                out.push_str(&format!("  {:width$}  {l}\n", ""));
            }
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!("status: {} (exit {})\n", self.status(), self.exit_code));
        out
    }

    pub fn render_json(&self) -> String {
        let inputs: Map<String, Value> = self.inputs.iter().cloned().collect();
        let results: Map<String, Value> = self.facts.iter().map(|f| (f.key.clone(), f.value.clone())).collect();
        let v = json!({
            "command": self.command,
            "inputs": inputs,
            "results": results,
            "status": self.status(),
            "exit_code": self.exit_code,
            "error": self.error,
            "timings": { "elapsed_ms": self.elapsed.as_secs_f64() * 1000.0 },
        });
        serde_json::to_string_pretty(&v).expect("reports always serialize") + "\n"
    }
}

pub fn rat_value(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn matrix_value(m: &[Vec<Rat>]) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(rat_value).collect())).collect())
}

pub fn matrix_human(m: &[Vec<Rat>]) -> String {
    let cells: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_rat).collect()).collect();
    let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| format!("[{}]", row.iter().map(|c| format!("{c:>w$}")).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Ascending coefficients as a polynomial in `var`.
pub fn poly_human(coeffs: &[Rat], var: &str) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let one = num_traits::One::is_one(c);
        let neg_one = num_traits::One::is_one(&-c.clone());
        let term = match (mono.is_empty(), one, neg_one) {
            (true, _, _) => format_rat(c),
            (false, true, _) => mono,
            (false, _, true) => format!("-{mono}"),
            _ => format!("{}*{mono}", format_rat(c)),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {p}")),
        }
    }
    out
}
