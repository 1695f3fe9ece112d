//! Computing several chain columns, through the cache and across threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::Result;
use normchain_core::chain::{ChainRecord, Engine, EngineConfig};

use crate::cache::Cache;

/// One column, from the cache when possible. Fresh results are stored.
pub fn column(cfg: &EngineConfig, n: u32, k_max: u32, cache: Option<&Cache>) -> Result<ChainRecord> {
    if let Some(rec) = cache.and_then(|c| c.load(cfg, n, k_max)) {
        return Ok(rec);
    }
    let rec = Engine::new(*cfg)?.chain(n, k_max)?;
    if let Some(c) = cache {
        c.store(cfg, n, k_max, &rec)?;
    }
    Ok(rec)
}

/// Columns for every `n` in `ns`, in that order, computed by up to `jobs` threads.
/// Each thread has its own engine; columns are independent.
pub fn columns(cfg: &EngineConfig, ns: &[u32], k_max: u32, jobs: usize, cache: Option<&Cache>) -> Vec<Result<ChainRecord>> {
    let slots: Vec<Mutex<Option<Result<ChainRecord>>>> = ns.iter().map(|_| Mutex::new(None)).collect();
    // largest columns first so one slow column does not end up last
    let mut order: Vec<usize> = (0..ns.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(ns[i]));
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, ns.len().max(1)) {
            s.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::Relaxed);
                let Some(&i) = order.get(t) else { break };
                let r = column(cfg, ns[i], k_max, cache);
                *slots[i].lock().expect("no panics while holding the lock") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("not poisoned").expect("every slot is filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let cfg = EngineConfig::default();
        let ns = [2, 3, 4, 5, 6];
        let par: Vec<_> = columns(&cfg, &ns, 9, 3, None).into_iter().map(Result::unwrap).collect();
        let seq: Vec<_> = ns.iter().map(|&n| column(&cfg, n, 9, None).unwrap()).collect();
        assert_eq!(par, seq);
    }

    #[test]
    fn cached_and_fresh_agree() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let cfg = EngineConfig::default();
        let fresh = column(&cfg, 5, 9, Some(&cache)).unwrap();
        let cached = column(&cfg, 5, 9, Some(&cache)).unwrap();
        assert_eq!(crate::record::to_json(&fresh), crate::record::to_json(&cached));
    }
}
