//! Report assembly and output files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{emit, ExperimentConfig};
use crate::run::{Invariant, Outcome};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub kind: crate::config::Kind,
    pub group: String,
    pub seed: u64,
    pub precision: u32,
    pub config: String,
    pub passed: bool,
    pub precision_exhausted: bool,
    pub invariants: Vec<Invariant>,
    pub results: serde_json::Value,
    /// Seconds since the epoch; not covered by `hash`.
    pub timestamp: u64,
    /// SHA-256 of the report serialized with `timestamp = 0` and `hash = ""`.
    pub hash: String,
}

impl Report {
    pub fn new(cfg: &ExperimentConfig, outcome: &Outcome, timestamp: u64) -> Report {
        let mut r = Report {
            kind: cfg.kind,
            group: cfg.group.to_string(),
            seed: cfg.seed,
            precision: cfg.precision,
            config: emit(cfg),
            passed: outcome.invariants.iter().all(|i| i.passed),
            precision_exhausted: outcome.precision_exhausted,
            invariants: outcome.invariants.clone(),
            results: outcome.results.clone(),
            timestamp: 0,
            hash: String::new(),
        };
        r.hash = r.digest();
        r.timestamp = timestamp;
        r
    }

    pub fn digest(&self) -> String {
        let mut bare = self.clone();
        bare.timestamp = 0;
        bare.hash.clear();
        hex::encode(Sha256::digest(serde_json::to_vec(&bare).expect("report serializes")))
    }

    /// 0 pass, 1 invariant failure, 3 precision exhausted.
    pub fn exit_code(&self) -> i32 {
        if self.precision_exhausted {
            3
        } else if self.passed {
            0
        } else {
            1
        }
    }

    pub fn summary(&self, outcome: &Outcome) -> String {
        let mut s = format!("{:?} on {} (seed {}, N = {})\n", self.kind, self.group, self.seed, self.precision);
        for line in &outcome.summary {
            s.push_str(line);
            s.push('\n');
        }
        for i in &self.invariants {
            let mark = if i.passed { "ok  " } else { "FAIL" };
            s.push_str(&format!("[{mark}] {}", i.name));
            if !i.detail.is_empty() {
                s.push_str(&format!(" ({})", i.detail));
            }
            s.push('\n');
        }
        if self.precision_exhausted {
            s.push_str("precision exhausted in at least one item\n");
        }
        s.push_str(&format!("hash {}\n", self.hash));
        s
    }
}

/// Writes `report.json`, `summary.txt` and `trace.jsonl` into `dir`.
pub fn write(dir: &Path, report: &Report, outcome: &Outcome) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report).expect("report serializes"))?;
    fs::write(dir.join("summary.txt"), report.summary(outcome))?;
    let mut trace = fs::File::create(dir.join("trace.jsonl"))?;
    for line in &outcome.trace {
        writeln!(trace, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::Invariant;

    #[test]
    fn exit_codes() {
        let cfg = crate::config::preset("a2-oracle").unwrap();
        let mut out = Outcome::default();
        assert_eq!(Report::new(&cfg, &out, 0).exit_code(), 0);
        out.invariants.push(Invariant { name: "x".into(), passed: false, detail: String::new() });
        assert_eq!(Report::new(&cfg, &out, 0).exit_code(), 1);
        out.precision_exhausted = true;
        assert_eq!(Report::new(&cfg, &out, 0).exit_code(), 3);
    }

    #[test]
    fn timestamp_is_outside_the_hash() {
        let cfg = crate::config::preset("a2-oracle").unwrap();
        let out = Outcome::default();
        assert_eq!(Report::new(&cfg, &out, 1).hash, Report::new(&cfg, &out, 99).hash);
    }
}
