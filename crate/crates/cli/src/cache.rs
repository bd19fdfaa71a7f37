//! Content-addressed cache of Conway polynomials.
//!
//! Entries live at `<dir>/<k0k1>/<key>.json` where `key` is the SHA-256 of
//! the canonical braid, the invariant name, the algorithm tag and the tool
//! version. Writes go through a temporary file in the target directory and
//! a rename, so concurrent processes never see a torn entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use brunnian::polyinv::{ConwaySource, Direct, Engine};
use brunnian::{BraidWord, ConwayPoly, Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    braid: String,
    invariant: String,
    algorithm: String,
    version: String,
    /// `[a_0, a_1, ..]` as text, coefficients are unbounded.
    value: String,
    timestamp: u64,
}

pub struct Cache {
    dir: Option<PathBuf>,
    /// Probability of recomputing on a hit.
    verify_rate: f64,
    seed: u64,
    pub hits: AtomicUsize,
    pub verified: AtomicUsize,
}

/// Canonical text of a braid: strand count and the letter sequence.
pub fn canonical_braid(b: &BraidWord) -> String {
    format!("{}:{b}", b.strands())
}

fn digest(parts: &[&str]) -> [u8; 32] {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    h.finalize().into()
}

impl Cache {
    pub fn new(dir: Option<PathBuf>, verify_rate: f64, seed: u64) -> Self {
        Cache {
            dir,
            verify_rate,
            seed,
            hits: AtomicUsize::new(0),
            verified: AtomicUsize::new(0),
        }
    }

    pub fn disabled() -> Self {
        Self::new(None, 0.0, 0)
    }

    fn key(braid: &str, engine: Engine) -> String {
        hex::encode(digest(&[braid, "conway", engine.tag(), VERSION]))
    }

    fn path(dir: &Path, key: &str) -> PathBuf {
        dir.join(&key[..2]).join(format!("{key}.json"))
    }

    /// Deterministic sampling: the decision depends only on seed and key.
    fn sampled(&self, key: &str) -> bool {
        if self.verify_rate <= 0.0 {
            return false;
        }
        let d = digest(&[&self.seed.to_string(), key]);
        let x = u64::from_le_bytes(d[..8].try_into().unwrap());
        (x as f64 / u64::MAX as f64) < self.verify_rate
    }

    fn read(path: &Path) -> Option<ConwayPoly> {
        let text = fs::read_to_string(path).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        ConwayPoly::from_json(&entry.value).ok()
    }

    fn write(dir: &Path, key: &str, entry: &CacheEntry) -> std::io::Result<()> {
        let path = Self::path(dir, key);
        let parent = path.parent().expect("entry has a parent");
        fs::create_dir_all(parent)?;
        let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
        tmp.write_all(serde_json::to_string(entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}

impl ConwaySource for Cache {
    fn conway(&self, b: &BraidWord, engine: Engine) -> Result<ConwayPoly> {
        let Some(dir) = &self.dir else {
            return Direct.conway(b, engine);
        };
        let braid = canonical_braid(b);
        let key = Self::key(&braid, engine);
        let path = Self::path(dir, &key);
        if let Some(hit) = Self::read(&path) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            if self.sampled(&key) {
                self.verified.fetch_add(1, Ordering::Relaxed);
                let fresh = Direct.conway(b, engine)?;
                if fresh != hit {
                    return Err(Error::Integrity(format!(
                        "cache entry {} disagrees with recomputation",
                        path.display()
                    )));
                }
            }
            return Ok(hit);
        }
        let value = Direct.conway(b, engine)?;
        let entry = CacheEntry {
            braid,
            invariant: "conway".into(),
            algorithm: engine.tag().into(),
            version: VERSION.into(),
            value: value.to_json(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        };
        // a failed write only costs a recomputation later
        let _ = Self::write(dir, &key, &entry);
        Ok(value)
    }
}
