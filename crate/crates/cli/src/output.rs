use std::fs;
use std::path::{Path, PathBuf};

use corset_core::export::Manifest;
use corset_core::{Error, Result, RunSpec};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Spec(format!("{}: {e}", path.display()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects artifacts of one run; nothing depends on wall time or thread count.
pub struct Output {
    dir: PathBuf,
    command: String,
    spec: RunSpec,
    budget: usize,
    results: Vec<(String, String)>,
    files: Vec<(String, String)>,
}

impl Output {
    pub fn new(dir: &Path, command: String, spec: RunSpec, budget: usize) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        Ok(Output {
            dir: dir.to_path_buf(),
            command,
            spec,
            budget,
            results: Vec::new(),
            files: Vec::new(),
        })
    }

    /// Adds a summary value; it appears in later files' headers and in `manifest.json`.
    pub fn result(&mut self, key: &str, value: impl ToString) {
        self.results.push((key.to_string(), value.to_string()));
    }

    pub fn manifest(&self) -> Manifest {
        let compact = |v: &Value| serde_json::to_string(v).expect("json values serialize");
        let spec = serde_json::to_value(&self.spec).expect("run specs serialize");
        let mut m: Manifest = vec![
            ("command".into(), self.command.clone()),
            ("corset".into(), env!("CARGO_PKG_VERSION").into()),
            ("budget".into(), self.budget.to_string()),
        ];
        for key in ["group", "peripherals", "subgroups", "params"] {
            if let Some(v) = spec.get(key) {
                m.push((key.into(), compact(v)));
            }
        }
        m.extend(self.results.iter().cloned());
        m
    }

    pub fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|e| io_error(&path, e))?;
        self.files.push((name.to_string(), sha256_hex(text.as_bytes())));
        Ok(())
    }

    /// Writes `manifest.json` and returns every path written.
    pub fn finish(self) -> Result<Vec<PathBuf>> {
        let outputs: serde_json::Map<String, Value> = self
            .files
            .iter()
            .map(|(f, h)| (f.clone(), Value::String(h.clone())))
            .collect();
        let results: serde_json::Map<String, Value> = self
            .results
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let doc = json!({
            "command": self.command,
            "corset": env!("CARGO_PKG_VERSION"),
            "budget": self.budget,
            "spec": self.spec,
            "results": results,
            "outputs": outputs,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("manifest serializes");
        text.push('\n');
        let path = self.dir.join("manifest.json");
        fs::write(&path, text).map_err(|e| io_error(&path, e))?;
        let mut paths: Vec<PathBuf> = self.files.iter().map(|(f, _)| self.dir.join(f)).collect();
        paths.push(path);
        Ok(paths)
    }
}
