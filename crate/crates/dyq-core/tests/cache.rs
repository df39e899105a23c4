use std::sync::atomic::Ordering;
use std::sync::Arc;

use dyq_core::kernels::cache::{cache_key, ExpansionCache};
use dyq_core::kernels::{expand, Direction, Kern};
use dyq_core::scalar::q;
use dyq_core::Window;

fn kern(c: i64) -> Kern {
    Kern::pair(2, 0, 1, q(c), -1).mul(&Kern::pair(2, 0, 1, q(1), 1))
}

fn tmpdir(tag: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("dyq-cache-{}-{}", tag, std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn distinct_inputs_get_distinct_keys() {
    let w = Window::new(&["z", "w"], 4, 0, 3);
    let d = Direction(vec![0, 1]);
    let keys = [
        cache_key(&kern(1), &d, &w),
        cache_key(&kern(2), &d, &w),
        cache_key(&kern(1), &Direction(vec![1, 0]), &w),
        cache_key(&kern(1), &d, &Window::new(&["z", "w"], 5, 0, 3)),
        cache_key(&kern(1), &d, &w.with_n(4)),
    ];
    let set: std::collections::BTreeSet<_> = keys.iter().collect();
    assert_eq!(set.len(), keys.len());
    assert_eq!(keys[0], cache_key(&kern(1), &d, &w));
}

#[test]
fn hits_return_the_stored_series() {
    let c = ExpansionCache::in_memory();
    let w = Window::new(&["z", "w"], 4, 0, 3);
    let d = Direction(vec![0, 1]);
    let a = c.get_or_expand(&kern(1), &d, &w).unwrap();
    let b = c.get_or_expand(&kern(1), &d, &w).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, expand(&kern(1), &d, &w).unwrap());
    assert_eq!(c.hits.load(Ordering::Relaxed), 1);
    assert_eq!(c.misses.load(Ordering::Relaxed), 1);
    c.get_or_expand(&kern(2), &d, &w).unwrap();
    assert_eq!(c.len(), 2);
}

#[test]
fn disk_entries_survive_and_corrupt_ones_are_dropped() {
    let dir = tmpdir("disk");
    let w = Window::new(&["z", "w"], 4, 0, 3);
    let d = Direction(vec![1, 0]);
    let truth = expand(&kern(3), &d, &w).unwrap();
    ExpansionCache::on_disk(&dir).unwrap().get_or_expand(&kern(3), &d, &w).unwrap();

    let warm = ExpansionCache::on_disk(&dir).unwrap();
    assert_eq!(warm.get_or_expand(&kern(3), &d, &w).unwrap(), truth);
    assert_eq!(warm.hits.load(Ordering::Relaxed), 1);

    let file = dir.join(format!("{}.json", cache_key(&kern(3), &d, &w)));
    std::fs::write(&file, "{\"vars\": [\"z\"], \"terms\": 7}").unwrap();
    let cold = ExpansionCache::on_disk(&dir).unwrap();
    assert_eq!(cold.get_or_expand(&kern(3), &d, &w).unwrap(), truth);
    assert_eq!(cold.discarded.load(Ordering::Relaxed), 1);
    assert_eq!(cold.misses.load(Ordering::Relaxed), 1);
    // rewritten after the discard
    assert!(file.exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn concurrent_inserts_agree() {
    let c = Arc::new(ExpansionCache::in_memory());
    let w = Window::new(&["z", "w"], 5, 0, 4);
    let out: Vec<_> = std::thread::scope(|s| {
        let hs: Vec<_> = (0..4)
            .map(|_| {
                let c = c.clone();
                let w = w.clone();
                s.spawn(move || c.get_or_expand(&kern(2), &Direction(vec![0, 1]), &w).unwrap())
            })
            .collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(out.windows(2).all(|p| p[0] == p[1]));
    assert_eq!(c.len(), 1);
}
