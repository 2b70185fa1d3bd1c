// SPDX-License-Identifier: Apache-2.0

//! On-disk memo of class groups and Bernoulli numbers.
//!
//! One JSON-lines file per kind. Files are rewritten whole through a temporary
//! file and a rename, so a reader never sees a partial record.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "K_EVEN_RANK_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheKind {
    Classgroup,
    Bernoulli,
}

impl CacheKind {
    fn file_name(self) -> &'static str {
        match self {
            CacheKind::Classgroup => "classgroup.jsonl",
            CacheKind::Bernoulli => "bernoulli.jsonl",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub version: u32,
    pub kind: CacheKind,
    /// Discriminant for class groups, index for Bernoulli numbers.
    pub param: i64,
    pub payload: String,
}

impl CacheRecord {
    pub fn new(kind: CacheKind, param: i64, payload: impl Into<String>) -> Self {
        CacheRecord { version: CACHE_VERSION, kind, param, payload: payload.into() }
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: CacheKind) -> PathBuf {
        self.dir.join(kind.file_name())
    }

    /// Current-version records of `kind`; unreadable lines and other versions
    /// are skipped.
    pub fn load(&self, kind: CacheKind) -> io::Result<BTreeMap<i64, String>> {
        let text = match fs::read_to_string(self.path(kind)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
            Err(e) => return Err(e),
        };
        Ok(text
            .lines()
            .filter_map(|l| serde_json::from_str::<CacheRecord>(l).ok())
            .filter(|r| r.version == CACHE_VERSION && r.kind == kind)
            .map(|r| (r.param, r.payload))
            .collect())
    }

    pub fn get(&self, kind: CacheKind, param: i64) -> io::Result<Option<String>> {
        Ok(self.load(kind)?.remove(&param))
    }

    /// Merge `entries` into the file for `kind`. Existing current-version
    /// records win; stale ones are dropped.
    pub fn store(&self, kind: CacheKind, entries: &BTreeMap<i64, String>) -> io::Result<()> {
        let mut all = self.load(kind)?;
        let before = all.len();
        for (k, v) in entries {
            all.entry(*k).or_insert_with(|| v.clone());
        }
        if all.len() == before && self.path(kind).exists() {
            return Ok(());
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        for (param, payload) in &all {
            let line = serde_json::to_string(&CacheRecord::new(kind, *param, payload.clone()))?;
            writeln!(tmp, "{line}")?;
        }
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(kind)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_version_filter() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert_eq!(cache.get(CacheKind::Classgroup, -23).unwrap(), None);
        let mut m = BTreeMap::new();
        m.insert(-23, "[3]".to_string());
        cache.store(CacheKind::Classgroup, &m).unwrap();
        assert_eq!(cache.get(CacheKind::Classgroup, -23).unwrap().as_deref(), Some("[3]"));
        assert_eq!(cache.get(CacheKind::Bernoulli, -23).unwrap(), None);

        let path = dir.path().join("bernoulli.jsonl");
        fs::write(&path, "{\"version\":0,\"kind\":\"bernoulli\",\"param\":12,\"payload\":\"1\"}\nnot json\n").unwrap();
        assert_eq!(cache.get(CacheKind::Bernoulli, 12).unwrap(), None);
        let mut b = BTreeMap::new();
        b.insert(12, "-691/2730".to_string());
        cache.store(CacheKind::Bernoulli, &b).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "{\"version\":1,\"kind\":\"bernoulli\",\"param\":12,\"payload\":\"-691/2730\"}\n");
    }
}
