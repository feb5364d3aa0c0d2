//! Content-addressed result cache.
//!
//! Entries live in `$COLPERM_CACHE_DIR/<sha256 of descriptor>.json` and are
//! never rewritten. Each entry stores the SHA-256 of its payload; an entry
//! whose payload no longer matches is ignored and the value recomputed.

use std::fs;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "COLPERM_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    descriptor: Value,
    payload_sha256: String,
    payload: Value,
}

pub struct Cache {
    dir: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn from_env() -> Option<Cache> {
        std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(|d| Cache { dir: PathBuf::from(d) })
    }

    /// Key of a descriptor: the SHA-256 of its compact JSON.
    pub fn key(descriptor: &Value) -> String {
        sha256_hex(descriptor.to_string().as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", key))
    }

    /// The cached payload, if present and intact.
    pub fn load<T: DeserializeOwned>(&self, descriptor: &Value) -> Option<T> {
        let key = Self::key(descriptor);
        let text = fs::read_to_string(self.path(&key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.key != key || entry.descriptor != *descriptor {
            return None;
        }
        if sha256_hex(entry.payload.to_string().as_bytes()) != entry.payload_sha256 {
            eprintln!("warning: cache entry {} fails its hash check, recomputing", key);
            return None;
        }
        serde_json::from_value(entry.payload).ok()
    }

    /// Writes an entry unless one already exists. Failures are reported and
    /// otherwise ignored, since the cache is only an accelerator.
    pub fn store<T: Serialize>(&self, descriptor: &Value, payload: &T) {
        let key = Self::key(descriptor);
        let path = self.path(&key);
        if path.exists() && self.load::<Value>(descriptor).is_some() {
            return;
        }
        let result = (|| -> std::io::Result<()> {
            fs::create_dir_all(&self.dir)?;
            let payload = serde_json::to_value(payload)?;
            let entry = Entry {
                key: key.clone(),
                descriptor: descriptor.clone(),
                payload_sha256: sha256_hex(payload.to_string().as_bytes()),
                payload,
            };
            let tmp = self.dir.join(format!(".{}.{}.tmp", key, std::process::id()));
            fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)?;
            fs::rename(&tmp, &path)
        })();
        if let Err(e) = result {
            eprintln!("warning: cannot write cache entry {}: {}", path.display(), e);
        }
    }
}
