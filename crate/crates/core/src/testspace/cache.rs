use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};

use super::{GeometryKey, LocalSolve};
use crate::error::Result;
use crate::registry::Registry;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
}

impl CacheStats {
    pub fn lookups(&self) -> usize {
        self.hits + self.misses
    }

    pub fn hit_rate(&self) -> f64 {
        if self.lookups() == 0 {
            0.0
        } else {
            self.hits as f64 / self.lookups() as f64
        }
    }
}

/// Storage policy for per-cell local solves.
pub trait CoefficientCache: Send + Sync {
    fn name(&self) -> &'static str;

    /// Returns the entry for `key`, running `compute` on a miss.
    fn get_or_compute(
        &self,
        key: GeometryKey,
        compute: &mut dyn FnMut() -> Result<LocalSolve>,
    ) -> Result<Arc<LocalSolve>>;

    fn stats(&self) -> CacheStats;
}

#[derive(Default)]
struct Counters {
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl Counters {
    fn hit(&self) {
        self.hits.fetch_add(1, Ordering::Relaxed);
    }

    fn miss(&self) {
        self.misses.fetch_add(1, Ordering::Relaxed);
    }

    fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }
}

/// Map from geometry key to local solve. Concurrent misses on one key may
/// both compute; the first insert wins.
#[derive(Default)]
pub struct KeyedCache {
    map: RwLock<HashMap<GeometryKey, Arc<LocalSolve>>>,
    counters: Counters,
}

impl KeyedCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl CoefficientCache for KeyedCache {
    fn name(&self) -> &'static str {
        "keyed"
    }

    fn get_or_compute(
        &self,
        key: GeometryKey,
        compute: &mut dyn FnMut() -> Result<LocalSolve>,
    ) -> Result<Arc<LocalSolve>> {
        if let Some(hit) = self.map.read().get(&key) {
            self.counters.hit();
            return Ok(Arc::clone(hit));
        }
        self.counters.miss();
        let fresh = Arc::new(compute()?);
        let mut map = self.map.write();
        Ok(Arc::clone(map.entry(key).or_insert(fresh)))
    }

    fn stats(&self) -> CacheStats {
        self.counters.stats()
    }
}

/// Remembers only the most recent cell geometry.
#[derive(Default)]
pub struct LastCellCache {
    last: Mutex<Option<(GeometryKey, Arc<LocalSolve>)>>,
    counters: Counters,
}

impl CoefficientCache for LastCellCache {
    fn name(&self) -> &'static str {
        "last-cell"
    }

    fn get_or_compute(
        &self,
        key: GeometryKey,
        compute: &mut dyn FnMut() -> Result<LocalSolve>,
    ) -> Result<Arc<LocalSolve>> {
        let mut last = self.last.lock();
        if let Some((k, v)) = last.as_ref() {
            if *k == key {
                self.counters.hit();
                return Ok(Arc::clone(v));
            }
        }
        self.counters.miss();
        let fresh = Arc::new(compute()?);
        *last = Some((key, Arc::clone(&fresh)));
        Ok(fresh)
    }

    fn stats(&self) -> CacheStats {
        self.counters.stats()
    }
}

/// Recomputes every time.
#[derive(Default)]
pub struct NoCache {
    counters: Counters,
}

impl CoefficientCache for NoCache {
    fn name(&self) -> &'static str {
        "off"
    }

    fn get_or_compute(
        &self,
        _key: GeometryKey,
        compute: &mut dyn FnMut() -> Result<LocalSolve>,
    ) -> Result<Arc<LocalSolve>> {
        self.counters.miss();
        Ok(Arc::new(compute()?))
    }

    fn stats(&self) -> CacheStats {
        self.counters.stats()
    }
}

/// Registry with `keyed`, `last-cell` and `off`.
pub fn cache_registry() -> Registry<dyn CoefficientCache> {
    let mut r: Registry<dyn CoefficientCache> = Registry::new("cache");
    r.register("keyed", || Box::new(KeyedCache::new()));
    r.register("last-cell", || Box::<LastCellCache>::default());
    r.register("off", || Box::<NoCache>::default());
    r
}
