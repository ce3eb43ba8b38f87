//! On-disk result cache keyed by a hash of the canonical request.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Entries written by a different stamp are ignored.
pub const VERSION_STAMP: &str = concat!("ffhyper ", env!("CARGO_PKG_VERSION"), " cache v1");

pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub output: String,
    pub pass: bool,
}

/// Hex sha256 over the length-prefixed request parts.
pub fn key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(VERSION_STAMP.as_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: &Path) -> Cache {
        Cache { dir: dir.to_path_buf() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Entry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v["version"] != VERSION_STAMP {
            return None;
        }
        Some(Entry { output: v["output"].as_str()?.to_string(), pass: v["pass"].as_bool()? })
    }

    /// Best effort: a cache that cannot be written is skipped.
    pub fn put(&self, key: &str, entry: &Entry) {
        let v = json!({ "version": VERSION_STAMP, "pass": entry.pass, "output": entry.output });
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        if fs::write(&tmp, v.to_string()).is_ok() {
            let _ = fs::rename(&tmp, self.path(key));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_separates_parts() {
        assert_ne!(key(&["ab", "c"]), key(&["a", "bc"]));
        assert_eq!(key(&["x"]).len(), 64);
    }

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let e = Entry { output: "{}\n".into(), pass: false };
        assert_eq!(c.get("k"), None);
        c.put("k", &e);
        assert_eq!(c.get("k"), Some(e));
    }
}
