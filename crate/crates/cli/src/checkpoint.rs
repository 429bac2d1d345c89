//! Append-only shard checkpoints for long searches.
//!
//! The file starts with a `# key=value ...` header naming the run, followed by
//! one `shard_index,status,failures` line per finished shard. Only shards with
//! status `done` are skipped on resume; `failed` shards run again.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    Failed,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Done => "done",
            Status::Failed => "failed",
        }
    }
}

/// Parse checkpoint text. Returns the header (if any) and the `done` shards.
pub fn parse(text: &str) -> Result<(Option<String>, BTreeSet<u64>)> {
    let mut header = None;
    let mut done = BTreeSet::new();
    let mut seen_failed = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            if line_no != 1 || header.is_some() {
                bail!("checkpoint line {line_no}: header only allowed on the first line");
            }
            header = Some(h.trim().to_string());
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [index, status, failures] = fields[..] else {
            bail!("checkpoint line {line_no}: expected `index,status,failures`, got {raw:?}");
        };
        let index: u64 = index
            .parse()
            .with_context(|| format!("checkpoint line {line_no}: bad shard index {index:?}"))?;
        let failures: u64 = failures
            .parse()
            .with_context(|| format!("checkpoint line {line_no}: bad failure count {failures:?}"))?;
        if done.contains(&index) {
            bail!("checkpoint line {line_no}: duplicate entry for shard {index}");
        }
        match status {
            "done" if failures == 0 => {
                done.insert(index);
            }
            "done" => bail!("checkpoint line {line_no}: shard {index} marked done with {failures} failures"),
            "failed" => {
                if failures == 0 {
                    bail!("checkpoint line {line_no}: shard {index} marked failed with no failures");
                }
                if !seen_failed.insert(index) {
                    bail!("checkpoint line {line_no}: duplicate entry for shard {index}");
                }
            }
            other => bail!("checkpoint line {line_no}: unknown status {other:?}"),
        }
    }
    Ok((header, done))
}

/// Single writer for a checkpoint file, shared across worker threads.
pub struct Checkpoint {
    path: PathBuf,
    file: Mutex<File>,
}

impl Checkpoint {
    /// Open (creating if needed) and return the shards already done. A
    /// non-empty file must carry exactly `header`.
    pub fn open(path: &Path, header: &str) -> Result<(Self, BTreeSet<u64>)> {
        let existing = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
        };
        let (found, done) = parse(&existing).with_context(|| format!("in {}", path.display()))?;
        match found {
            Some(h) if h != header => {
                bail!("{} belongs to a different run ({h}); expected ({header})", path.display())
            }
            None if !done.is_empty() || existing.lines().any(|l| !l.trim().is_empty()) => {
                bail!("{} has shard lines but no header", path.display())
            }
            _ => {}
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        if existing.trim().is_empty() {
            writeln!(file, "# {header}")?;
            file.flush()?;
        } else if !existing.ends_with('\n') {
            writeln!(file)?;
        }
        Ok((Self { path: path.to_path_buf(), file: Mutex::new(file) }, done))
    }

    pub fn record(&self, index: u64, status: Status, failures: u64) -> Result<()> {
        let mut f = self.file.lock().expect("checkpoint writer poisoned");
        writeln!(f, "{index},{},{failures}", status.as_str())
            .and_then(|_| f.flush())
            .with_context(|| format!("writing {}", self.path.display()))
    }
}

/// Shards that are done, read from a checkpoint file without opening it for writing.
pub fn completed(path: &Path) -> Result<BTreeSet<u64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse(&text)?.1)
}
