//! On-disk cache of chain records.
//!
//! One JSON file per column, named after everything the result depends on.
//! Files from other engine versions simply never match. Writes go through
//! a temporary file in the same directory and a rename, so concurrent
//! writers of the same key leave one complete file behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use normchain_core::chain::{ChainRecord, EngineConfig, ENGINE_VERSION};

use crate::record::{from_json, to_json};

/// Overrides the default cache directory.
pub const CACHE_ENV: &str = "NORMCHAIN_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// `explicit`, else `$NORMCHAIN_CACHE_DIR`, else `$XDG_CACHE_HOME/normchain`
    /// or `~/.cache/normchain`, else `./.normchain-cache`.
    pub fn locate(explicit: Option<PathBuf>) -> Cache {
        let dir = explicit
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("normchain")))
            .or_else(|| std::env::var_os("HOME").map(|d| PathBuf::from(d).join(".cache").join("normchain")))
            .unwrap_or_else(|| PathBuf::from(".normchain-cache"));
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_name(cfg: &EngineConfig, n: u32, k_max: u32) -> String {
        format!(
            "chain-v{ENGINE_VERSION}-n{n}-k{k_max}-b{}-e{}-q{}-{}.json",
            cfg.base_depth,
            cfg.enum_bound_log2,
            cfg.quotient_bound_log2,
            cfg.centralizer.tag()
        )
    }

    fn path(&self, cfg: &EngineConfig, n: u32, k_max: u32) -> PathBuf {
        self.dir.join(Cache::file_name(cfg, n, k_max))
    }

    /// A cached record, if present and well formed.
    pub fn load(&self, cfg: &EngineConfig, n: u32, k_max: u32) -> Option<ChainRecord> {
        let text = fs::read_to_string(self.path(cfg, n, k_max)).ok()?;
        let rec = from_json(&text).ok()?;
        (rec.n == n && rec.base_depth == cfg.base_depth).then_some(rec)
    }

    pub fn store(&self, cfg: &EngineConfig, n: u32, k_max: u32, rec: &ChainRecord) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(to_json(rec).as_bytes())?;
        tmp.flush()?;
        let path = self.path(cfg, n, k_max);
        tmp.persist(&path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
