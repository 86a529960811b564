use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::model::{HyperbolicSystem, Profile};

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Result of one study: a table, named scalars and checked assertions.
#[derive(Clone, Debug, Default)]
pub struct StudyRecord {
    pub name: String,
    pub fingerprint: String,
    pub seed: u64,
    /// Grid and study parameters, echoed into the meta file.
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub outputs: BTreeMap<String, f64>,
    pub assertions: Vec<Assertion>,
    pub flags: Vec<String>,
    pub wall_seconds: f64,
}

impl StudyRecord {
    pub fn new(name: &str, fingerprint: String, seed: u64, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            fingerprint,
            seed,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn flag(&mut self, message: impl Into<String>) {
        self.flags.push(message.into());
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn outputs_finite(&self) -> bool {
        self.outputs.values().all(|v| v.is_finite())
            && self.rows.iter().flatten().all(|v| v.is_finite())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn meta_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "study = {}", self.name);
        let _ = writeln!(s, "fingerprint = {}", self.fingerprint);
        let _ = writeln!(s, "seed = {}", self.seed);
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "param.{k} = {v}");
        }
        for (k, v) in &self.outputs {
            let _ = writeln!(s, "output.{k} = {v:.16e}");
        }
        for a in &self.assertions {
            let verdict = if a.passed { "pass" } else { "FAIL" };
            let _ = writeln!(s, "assert.{} = {verdict} ({})", a.name, a.detail);
        }
        for f in &self.flags {
            let _ = writeln!(s, "flag = {f}");
        }
        let _ = writeln!(s, "wall_seconds = {:.3}", self.wall_seconds);
        s
    }

    /// Write `<name>.csv` and `<name>.meta` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.write_csv(fs::File::create(dir.join(format!("{}.csv", self.name)))?)?;
        fs::write(dir.join(format!("{}.meta", self.name)), self.meta_text())?;
        Ok(())
    }
}

fn push_profile(s: &mut String, p: &Profile) {
    match p {
        Profile::Constant(v) => {
            let _ = write!(s, "c{:016x}", v.to_bits());
        }
        Profile::Samples(v) => {
            s.push('[');
            for x in v {
                let _ = write!(s, "{:016x},", x.to_bits());
            }
            s.push(']');
        }
    }
    s.push(';');
}

/// SHA-256 of a canonical bit-exact rendering of the system.
pub fn system_fingerprint(system: &HyperbolicSystem) -> String {
    let mut s = format!("k={};m={};", system.k(), system.m());
    for p in system.speeds().profiles() {
        push_profile(&mut s, p);
    }
    s.push_str(system.coupling().form_name());
    s.push(':');
    for p in system.coupling().matrix().entries() {
        push_profile(&mut s, p);
    }
    s.push_str("B:");
    for v in system.boundary().matrix().as_slice() {
        let _ = write!(s, "{:016x},", v.to_bits());
    }
    hex::encode(Sha256::digest(s.as_bytes()))
}
