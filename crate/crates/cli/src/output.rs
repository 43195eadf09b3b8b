//! Result envelope, manifest and exit status.
//!
//! JSON output (schema version 1) is one object:
//! `schema_version`, `verb`, `ring` (inline spec or null), `verdict`
//! (`true`/`false`/`unknown`/null), `certificate` (weakest over all
//! decisions, or null), `verdicts` (each with `name`, `verdict`,
//! `certificate`) and `result` (verb specific).
//!
//! The manifest adds `ring_spec` (file form), `ring_spec_sha256` and the
//! `bounds` and `seed` of the run, and drops `result`.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use cuntz_core::{Certificate, Ring, Verdict};

use crate::Global;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decided {
    pub name: String,
    pub verdict: Option<Verdict>,
    pub certificate: Certificate,
}

pub struct Outcome {
    pub ring: Option<Ring>,
    pub result: Value,
    pub text: String,
    pub dot: Option<String>,
    pub bounds: Map<String, Value>,
    pub decisions: Vec<Decided>,
}

impl Outcome {
    pub fn new() -> Outcome {
        Outcome {
            ring: None,
            result: Value::Null,
            text: String::new(),
            dot: None,
            bounds: Map::new(),
            decisions: Vec::new(),
        }
    }

    pub fn bound(&mut self, key: &str, v: impl Serialize) {
        self.bounds.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn decide(&mut self, name: &str, verdict: Verdict, certificate: Certificate) {
        self.decisions.push(Decided {
            name: name.into(),
            verdict: Some(verdict),
            certificate,
        });
    }

    /// A certificate on computed data that carries no verdict.
    pub fn certify(&mut self, name: &str, certificate: Certificate) {
        self.decisions.push(Decided {
            name: name.into(),
            verdict: None,
            certificate,
        });
    }

    /// Conjunction of the decisions; `None` for plain computations.
    pub fn verdict(&self) -> Option<Verdict> {
        self.decisions
            .iter()
            .filter_map(|d| d.verdict)
            .reduce(Verdict::and)
    }

    pub fn certificate(&self) -> Option<Certificate> {
        self.decisions.iter().map(|d| d.certificate).reduce(Certificate::weaker)
    }

    pub fn exit_code(&self) -> u8 {
        match self.verdict() {
            None | Some(Verdict::True) => 0,
            Some(Verdict::False) => 1,
            Some(Verdict::Unknown) => 3,
        }
    }

    fn envelope(&self, verb: &str) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "verb": verb,
            "ring": self.ring.as_ref().map(|r| r.spec().to_string()),
            "verdict": self.verdict(),
            "certificate": self.certificate(),
            "verdicts": self.decisions,
            "result": self.result,
        })
    }

    pub fn manifest(&self, verb: &str, g: &Global) -> Value {
        let spec = self.ring.as_ref().map(|r| r.spec().to_file_string());
        let digest = spec.as_ref().map(|s| hex::encode(Sha256::digest(s.as_bytes())));
        json!({
            "schema_version": SCHEMA_VERSION,
            "verb": verb,
            "ring": self.ring.as_ref().map(|r| r.spec().to_string()),
            "ring_spec": spec,
            "ring_spec_sha256": digest,
            "bounds": self.bounds,
            "budget": g.budget,
            "seed": g.seed,
            "verdict": self.verdict(),
            "certificate": self.certificate(),
            "verdicts": self.decisions,
        })
    }

    /// Writes the requested output and the manifest; returns the exit code.
    pub fn emit(&self, verb: &str, g: &Global) -> std::io::Result<u8> {
        let body = match g.out {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope(verb)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => self.text.clone(),
            Format::Dot => match &self.dot {
                Some(d) => d.clone(),
                None => {
                    eprintln!("error: {verb} has no diagram output");
                    return Ok(2);
                }
            },
        };
        match &g.output {
            Some(path) => std::fs::write(path, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        if let Some(path) = &g.manifest {
            let mut s = serde_json::to_string_pretty(&self.manifest(verb, g)).expect("serializable");
            s.push('\n');
            std::fs::write(path, s)?;
        }
        Ok(self.exit_code())
    }
}
