use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};

use super::ProviderError;

/// Content-addressed response cache on disk.
///
/// Entries are keyed by SHA-256 of `(namespace, payload)` and stored as the
/// raw response text under `<root>/<first two hex digits>/<key>`. Writes go
/// to a temporary file that is renamed into place, and writers of the same
/// key are serialized.
#[derive(Debug)]
pub struct DiskCache {
    root: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    counter: AtomicU64,
}

impl DiskCache {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, ProviderError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| ProviderError::Cache(format!("{}: {e}", root.display())))?;
        Ok(Self { root, locks: Mutex::new(HashMap::new()), counter: AtomicU64::new(0) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Hex SHA-256 of the namespace and payload, separated by a NUL byte.
    pub fn key(namespace: &str, payload: &str) -> String {
        let mut h = Sha256::new();
        h.update(namespace.as_bytes());
        h.update([0u8]);
        h.update(payload.as_bytes());
        hex::encode(h.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2]).join(key)
    }

    fn lock_for(&self, key: &str) -> Arc<Mutex<()>> {
        self.locks.lock().unwrap().entry(key.to_string()).or_default().clone()
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path_for(key)).ok()
    }

    pub fn put(&self, key: &str, content: &str) -> Result<(), ProviderError> {
        let lock = self.lock_for(key);
        let _guard = lock.lock().unwrap();
        let dest = self.path_for(key);
        let dir = dest.parent().expect("cache path has a parent");
        let err = |e: std::io::Error| ProviderError::Cache(format!("{}: {e}", dest.display()));
        fs::create_dir_all(dir).map_err(err)?;
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let tmp = dir.join(format!(".{key}.{}.{n}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp).map_err(err)?;
            f.write_all(content.as_bytes()).map_err(err)?;
            f.sync_all().map_err(err)?;
        }
        fs::rename(&tmp, &dest).map_err(err)
    }

    pub fn len(&self) -> usize {
        walk_count(&self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn walk_count(dir: &Path) -> usize {
    let Ok(entries) = fs::read_dir(dir) else { return 0 };
    entries
        .flatten()
        .map(|e| {
            let p = e.path();
            if p.is_dir() {
                walk_count(&p)
            } else if e.file_name().to_string_lossy().starts_with('.') {
                0
            } else {
                1
            }
        })
        .sum()
}
