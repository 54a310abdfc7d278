//! Append-only JSONL store of `f(n)` results.
//!
//! One record per line. A torn final line (no trailing newline) is what an
//! interrupted run leaves behind; it is dropped and the file truncated before
//! the next append. Any other unparseable or invalid line is a hard error.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use farey_core::counting::Sieve;
use farey_core::{BadPair, FResult, FareyOrder, Fraction};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cannot read cache {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cache {path}, line {line}: {reason}")]
    Invalid {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CacheRecord {
    pub n: u64,
    pub f: u64,
    pub witness_k: String,
    pub witness_l: String,
    pub k_index: u64,
    pub l_index: u64,
    pub elapsed_millis: u64,
    pub tool_version: String,
}

impl From<&FResult> for CacheRecord {
    fn from(r: &FResult) -> Self {
        CacheRecord {
            n: r.n,
            f: r.f,
            witness_k: r.witness.fk.to_string(),
            witness_l: r.witness.fl.to_string(),
            k_index: r.witness.k_index,
            l_index: r.witness.l_index,
            elapsed_millis: r.elapsed_millis,
            tool_version: TOOL_VERSION.to_owned(),
        }
    }
}

fn canonical_fraction(s: &str) -> Result<Fraction, String> {
    let x: Fraction = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if x.to_string() != s {
        return Err(format!("{s:?} is not in lowest terms"));
    }
    Ok(x)
}

impl CacheRecord {
    /// Converts back to an `FResult`, re-validating the witness.
    ///
    /// Records written by another tool version additionally get their
    /// indices re-derived from exact ranks.
    pub fn to_result(&self) -> Result<FResult, String> {
        let fk = canonical_fraction(&self.witness_k)?;
        let fl = canonical_fraction(&self.witness_l)?;
        let witness = BadPair {
            k_index: self.k_index,
            l_index: self.l_index,
            fk,
            fl,
        };
        if self.n < 4 {
            return Err(format!("order {} is below 4", self.n));
        }
        if !witness.is_valid() {
            return Err(format!("witness {fk}, {fl} is not a bad pair"));
        }
        if witness.distance() != self.f + 1 {
            return Err(format!(
                "witness distance {} does not match f = {}",
                witness.distance(),
                self.f
            ));
        }
        if fk.den() > self.n || fl.den() > self.n {
            return Err(format!("witness is not in F_{}", self.n));
        }
        if self.tool_version != TOOL_VERSION {
            let n = FareyOrder::new(self.n).map_err(|e| e.to_string())?;
            let sieve = Sieve::new(self.n).map_err(|e| e.to_string())?;
            let index = |x: Fraction| {
                if x == Fraction::ZERO {
                    1
                } else {
                    sieve.rank(n, x) + 2
                }
            };
            if index(fk) != self.k_index || index(fl) != self.l_index {
                return Err("witness indices do not match their ranks".to_owned());
            }
        }
        Ok(FResult {
            n: self.n,
            f: self.f,
            witness,
            elapsed_millis: self.elapsed_millis,
        })
    }
}

/// The loaded contents of a cache file plus a handle for appending.
#[derive(Debug)]
pub struct ScanCache {
    path: PathBuf,
    results: BTreeMap<u64, FResult>,
    /// Byte length of the well-formed prefix.
    valid_len: u64,
    writer: Option<File>,
}

impl ScanCache {
    /// Loads `path`; a missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, CacheError> {
        let path = path.as_ref().to_path_buf();
        let io_err = |source| CacheError::Io {
            path: path.clone(),
            source,
        };
        let text = match std::fs::read(&path) {
            Ok(bytes) => String::from_utf8(bytes).map_err(|e| CacheError::Invalid {
                path: path.clone(),
                line: 0,
                reason: e.to_string(),
            })?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(io_err(e)),
        };

        let mut results = BTreeMap::new();
        let mut valid_len = 0u64;
        let mut offset = 0usize;
        for (i, line) in text.split_inclusive('\n').enumerate() {
            let start = offset;
            offset += line.len();
            let terminated = line.ends_with('\n');
            let body = line.trim_end();
            if body.is_empty() {
                if terminated {
                    valid_len = offset as u64;
                }
                continue;
            }
            if !terminated {
                // Torn write from an interrupted run.
                valid_len = start as u64;
                break;
            }
            let invalid = |reason: String| CacheError::Invalid {
                path: path.clone(),
                line: i + 1,
                reason,
            };
            let record: CacheRecord =
                serde_json::from_str(body).map_err(|e| invalid(e.to_string()))?;
            let result = record.to_result().map_err(invalid)?;
            if results.insert(result.n, result).is_some() {
                return Err(invalid(format!("duplicate record for n = {}", record.n)));
            }
            valid_len = offset as u64;
        }
        Ok(ScanCache {
            path,
            results,
            valid_len,
            writer: None,
        })
    }

    pub fn get(&self, n: u64) -> Option<&FResult> {
        self.results.get(&n)
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }

    pub fn results(&self) -> impl Iterator<Item = &FResult> {
        self.results.values()
    }

    /// Appends `result` unless a record for its `n` already exists.
    pub fn append(&mut self, result: &FResult) -> Result<(), CacheError> {
        if self.results.contains_key(&result.n) {
            return Ok(());
        }
        let io_err = |source| CacheError::Io {
            path: self.path.clone(),
            source,
        };
        if self.writer.is_none() {
            if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(io_err)?;
            }
            let file = OpenOptions::new()
                .create(true)
                .truncate(false)
                .write(true)
                .open(&self.path)
                .map_err(io_err)?;
            file.set_len(self.valid_len).map_err(io_err)?;
            self.writer = Some(file);
        }
        let mut line =
            serde_json::to_string(&CacheRecord::from(result)).expect("record serializes");
        line.push('\n');
        let w = self.writer.as_mut().expect("opened above");
        use std::io::Seek;
        w.seek(io::SeekFrom::Start(self.valid_len))
            .map_err(io_err)?;
        w.write_all(line.as_bytes()).map_err(io_err)?;
        w.flush().map_err(io_err)?;
        self.valid_len += line.len() as u64;
        self.results.insert(result.n, *result);
        Ok(())
    }
}
