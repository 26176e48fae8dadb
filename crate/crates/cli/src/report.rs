//! Artifact persistence and run manifests.
//!
//! Every subcommand that receives `--out DIR` routes its files through an
//! [`OutputSink`]: data files are hashed as they are written, and a final
//! `manifest.json` records the command line, options, timestamps, an input
//! digest, and the SHA-256 of each artifact.  Data files carry no
//! timestamps, so identical inputs produce byte-identical artifacts; all
//! run-specific metadata lives in the manifest alone.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// One data file emitted by a run.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Metadata for one archived invocation.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    /// Fully resolved options, including defaults the user did not spell out.
    pub options: BTreeMap<String, String>,
    /// SHA-256 over the command name and resolved options; two runs with the
    /// same digest are expected to produce byte-identical data files.
    pub input_digest: String,
    pub started: String,
    pub finished: String,
    pub artifacts: Vec<Artifact>,
}

/// Hex-encode a digest.
fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// RFC 3339 UTC timestamp at second resolution.
pub fn rfc3339_now() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    rfc3339_from_unix(secs)
}

/// Convert Unix seconds to an RFC 3339 UTC timestamp (proleptic Gregorian).
pub fn rfc3339_from_unix(secs: u64) -> String {
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    // Civil-from-days, era decomposition over 400-year cycles.
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = yoe + era * 400 + i64::from(month <= 2);
    format!(
        "{year:04}-{month:02}-{day:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Collects artifacts for one run and writes the closing manifest.
///
/// With no output directory every write is a no-op, so command code can
/// emit artifacts unconditionally.
pub struct OutputSink {
    dir: Option<PathBuf>,
    command: String,
    options: BTreeMap<String, String>,
    started: String,
    artifacts: Vec<Artifact>,
}

impl OutputSink {
    pub fn new(
        dir: Option<&Path>,
        command: &str,
        options: BTreeMap<String, String>,
    ) -> Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d)
                .with_context(|| format!("creating output directory {}", d.display()))?;
        }
        Ok(OutputSink {
            dir: dir.map(Path::to_path_buf),
            command: command.to_string(),
            options,
            started: rfc3339_now(),
            artifacts: Vec::new(),
        })
    }

    pub fn enabled(&self) -> bool {
        self.dir.is_some()
    }

    /// Write one data file under the output directory and record its hash.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.artifacts.push(Artifact {
            path: name.to_string(),
            sha256: hex(&hasher.finalize()),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    /// Serialize `value` as pretty JSON and write it as an artifact.
    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        if !self.enabled() {
            return Ok(());
        }
        let mut bytes = serde_json::to_vec_pretty(value).context("serializing report")?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    /// Close the run: write `manifest.json` listing every artifact.
    pub fn finish(self) -> Result<Vec<Artifact>> {
        let Some(dir) = &self.dir else { return Ok(self.artifacts) };
        let mut hasher = Sha256::new();
        hasher.update(self.command.as_bytes());
        for (k, v) in &self.options {
            hasher.update([0u8]);
            hasher.update(k.as_bytes());
            hasher.update([b'=']);
            hasher.update(v.as_bytes());
        }
        let manifest = RunManifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            options: self.options,
            input_digest: hex(&hasher.finalize()),
            started: self.started,
            finished: rfc3339_now(),
            artifacts: self.artifacts.clone(),
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest).context("serializing manifest")?;
        bytes.push(b'\n');
        let path = dir.join("manifest.json");
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(self.artifacts)
    }
}
