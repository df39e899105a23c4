//! Content-addressed expansion cache, in memory and optionally on disk.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::hseries::HSeries;
use crate::kernels::expand::{expand, Direction};
use crate::kernels::kern::Kern;
use crate::window::Window;

/// sha256 of kernel, direction, window and truncation order.
pub fn cache_key(k: &Kern, dir: &Direction, w: &Window) -> String {
    let mut h = Sha256::new();
    h.update(format!("{:?}|{:?}|{:?}|{:?}|{}", k, dir.0, w.vars, w.bounds, w.omin).as_bytes());
    h.update(format!("|n={}", w.n).as_bytes());
    hex::encode(h.finalize())
}

#[derive(Default)]
pub struct ExpansionCache {
    mem: Mutex<HashMap<String, HSeries>>,
    dir: Option<PathBuf>,
    pub hits: AtomicUsize,
    pub misses: AtomicUsize,
    pub discarded: AtomicUsize,
}

impl ExpansionCache {
    pub fn in_memory() -> Self {
        ExpansionCache::default()
    }

    pub fn on_disk(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| crate::Error::Io(format!("{}: {}", dir.display(), e)))?;
        Ok(ExpansionCache { dir: Some(dir.to_path_buf()), ..Default::default() })
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", key)))
    }

    fn load(&self, key: &str, w: &Window) -> Option<HSeries> {
        let p = self.path(key)?;
        let text = fs::read_to_string(&p).ok()?;
        let parsed = serde_json::from_str(&text).ok().and_then(|v| HSeries::from_json(&v).ok());
        match parsed {
            Some(s) if s.window == *w => Some(s),
            _ => {
                eprintln!("warning: discarding corrupt cache entry {}", p.display());
                self.discarded.fetch_add(1, Ordering::Relaxed);
                let _ = fs::remove_file(&p);
                None
            }
        }
    }

    fn store(&self, key: &str, s: &HSeries) {
        let Some(p) = self.path(key) else { return };
        if p.exists() {
            return;
        }
        let tmp = p.with_extension(format!("tmp{}", std::process::id()));
        let body = serde_json::to_string(&s.to_json()).expect("series serializes");
        if fs::write(&tmp, body).is_ok() && fs::rename(&tmp, &p).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    pub fn get_or_expand(&self, k: &Kern, dir: &Direction, w: &Window) -> Result<HSeries> {
        let key = cache_key(k, dir, w);
        if let Some(s) = self.mem.lock().unwrap().get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(s.clone());
        }
        let s = match self.load(&key, w) {
            Some(s) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                s
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                let s = expand(k, dir, w)?;
                self.store(&key, &s);
                s
            }
        };
        // insert-only: a concurrent writer of the same key produced the same value
        self.mem.lock().unwrap().entry(key).or_insert_with(|| s.clone());
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.mem.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

static ACTIVE: Mutex<Option<Arc<ExpansionCache>>> = Mutex::new(None);

/// Route `expand_cached` through `c`; `None` disables caching.
pub fn install(c: Option<Arc<ExpansionCache>>) {
    *ACTIVE.lock().unwrap() = c;
}

pub fn active() -> Option<Arc<ExpansionCache>> {
    ACTIVE.lock().unwrap().clone()
}

pub fn expand_cached(k: &Kern, dir: &Direction, w: &Window) -> Result<HSeries> {
    match active() {
        Some(c) => c.get_or_expand(k, dir, w),
        None => expand(k, dir, w),
    }
}
