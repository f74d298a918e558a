//! Thread-safe point-count cache and a pool of per-prime counters.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use frey_core::traces::{CountCache, CountKey, Counter};

use crate::error::Result;

/// Counts shared across workers; concurrent readers, one writer at a time, last write wins.
#[derive(Debug, Default)]
pub struct SharedCache {
    map: RwLock<HashMap<CountKey, u64>>,
}

impl SharedCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl CountCache for SharedCache {
    fn get(&self, key: &CountKey) -> Option<u64> {
        self.map.read().unwrap().get(key).copied()
    }

    fn put(&self, key: CountKey, count: u64) {
        self.map.write().unwrap().insert(key, count);
    }
}

/// One counter per prime, built on first use.
pub struct CounterPool {
    kmax: u32,
    cap: u64,
    counters: Mutex<HashMap<u64, Arc<Counter>>>,
}

impl CounterPool {
    pub fn new(kmax: u32, cap: u64) -> Self {
        CounterPool { kmax, cap, counters: Mutex::new(HashMap::new()) }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn get(&self, q: u64) -> Result<Arc<Counter>> {
        if let Some(c) = self.counters.lock().unwrap().get(&q) {
            return Ok(c.clone());
        }
        // Built outside the lock; a racing duplicate is harmless.
        let c = Arc::new(Counter::new(q, self.kmax, self.cap)?);
        Ok(self.counters.lock().unwrap().entry(q).or_insert(c).clone())
    }

    pub fn as_fn(&self) -> impl Fn(u64) -> frey_core::Result<Arc<Counter>> + '_ {
        move |q| {
            self.get(q).map_err(|e| match e {
                crate::error::Error::Core(c) => c,
                other => frey_core::Error::Invalid(other.to_string()),
            })
        }
    }
}
