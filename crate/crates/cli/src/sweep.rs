//! Bounded parallel evaluation for table sweeps.

use crate::CliError;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Worker cap for sweeps: the FRONTFLUX_MAX_THREADS environment variable
/// when set, otherwise the machine's available parallelism capped at 8.
/// A set but unusable value is a usage error.
pub fn max_threads() -> Result<usize, CliError> {
    match std::env::var("FRONTFLUX_MAX_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism()
            .map_or(1, |p| p.get())
            .min(8)),
        Err(std::env::VarError::NotUnicode(_)) => Err(CliError::Usage(
            "FRONTFLUX_MAX_THREADS is not valid unicode".into(),
        )),
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "FRONTFLUX_MAX_THREADS must be a positive integer, got {raw:?}"
                ))
            }),
    }
}

/// Applies f to every item on up to `threads` workers. Results keep item
/// order, so downstream output is deterministic regardless of scheduling.
pub fn parallel_map<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = threads.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let cursor = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = cursor.fetch_add(1, Ordering::Relaxed);
                if idx >= items.len() {
                    break;
                }
                let value = f(&items[idx]);
                results.lock().unwrap()[idx] = Some(value);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|v| v.expect("every index was assigned to exactly one worker"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_map_preserves_order() {
        let items: Vec<u64> = (0..100).collect();
        let doubled = parallel_map(&items, 4, |&v| v * 2);
        assert_eq!(doubled, items.iter().map(|v| v * 2).collect::<Vec<_>>());
    }

    #[test]
    fn single_worker_path_matches() {
        let items = vec![1, 2, 3];
        assert_eq!(parallel_map(&items, 1, |&v| v + 1), vec![2, 3, 4]);
    }
}
