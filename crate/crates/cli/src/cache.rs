//! On-disk cache of exact antichain counts of grids.
//!
//! One JSON file, `alpha-cache.json`, shaped
//! `{"alpha": {"t,n,engineVersion": "decimal"}}`. Writes go through a
//! temporary file and a rename.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CACHE_FILE: &str = "alpha-cache.json";
/// Tag for counts produced by the memoized oracle.
pub const ORACLE_VERSION: &str = "memo-1";

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheDocument {
    alpha: BTreeMap<String, String>,
}

#[derive(Debug, Default)]
pub struct AlphaCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, String>,
    dirty: bool,
}

fn key(t: u32, n: u32, version: &str) -> String {
    format!("{t},{n},{version}")
}

impl AlphaCache {
    /// An in-memory cache that never touches disk.
    pub fn disabled() -> Self {
        AlphaCache::default()
    }

    /// Loads `dir/alpha-cache.json`. A missing file gives an empty cache; a
    /// file that fails to parse is reported as an error rather than discarded.
    pub fn open(dir: &Path) -> CliResult<Self> {
        let path = dir.join(CACHE_FILE);
        let entries = match fs::read_to_string(&path) {
            Ok(text) => {
                let doc: CacheDocument =
                    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.clone(), source })?;
                doc.alpha
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(CliError::io(path, e)),
        };
        Ok(AlphaCache {
            path: Some(path),
            entries,
            dirty: false,
        })
    }

    /// A cached count for `[t]^n` from any engine version.
    pub fn get(&self, t: u32, n: u32) -> Option<Integer> {
        let prefix = format!("{t},{n},");
        self.entries
            .range(prefix.clone()..)
            .take_while(|(k, _)| k.starts_with(&prefix))
            .find_map(|(_, v)| v.parse().ok())
    }

    pub fn insert(&mut self, t: u32, n: u32, version: &str, alpha: &Integer) {
        let k = key(t, n, version);
        let v = alpha.to_string();
        if self.entries.get(&k) != Some(&v) {
            self.entries.insert(k, v);
            self.dirty = true;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes back if anything changed and the cache is disk-backed.
    pub fn save(&mut self) -> CliResult<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let dir = path.parent().expect("cache file has a parent directory");
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let doc = CacheDocument {
            alpha: self.entries.clone(),
        };
        let text = serde_json::to_string_pretty(&doc).expect("cache document serializes");
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = AlphaCache::open(dir.path()).unwrap();
        assert!(c.get(3, 3).is_none());
        c.insert(3, 3, "sos-1", &Integer::from(980));
        c.insert(3, 33, "sos-1", &Integer::from(1));
        c.save().unwrap();
        let c = AlphaCache::open(dir.path()).unwrap();
        assert_eq!(c.get(3, 3), Some(Integer::from(980)));
        assert_eq!(c.len(), 2);
        let text = fs::read_to_string(dir.path().join(CACHE_FILE)).unwrap();
        assert!(text.contains("\"3,3,sos-1\": \"980\""));
    }

    #[test]
    fn corrupt_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(CACHE_FILE), "{not json").unwrap();
        assert!(AlphaCache::open(dir.path()).is_err());
    }
}
