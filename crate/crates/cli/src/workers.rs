//! Worker-count control: `--workers` beats `GLIDERPATH_WORKERS` beats the
//! rayon default. Planning results are identical for any worker count.

pub const WORKERS_ENV: &str = "GLIDERPATH_WORKERS";

pub fn resolve(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n > 0)
    })
}

/// Run `f` on a pool with the requested worker count (or the global default).
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_beats_env() {
        std::env::set_var(WORKERS_ENV, "3");
        assert_eq!(resolve(Some(5)), Some(5));
        assert_eq!(resolve(None), Some(3));
        std::env::set_var(WORKERS_ENV, "not a number");
        assert_eq!(resolve(None), None);
        std::env::remove_var(WORKERS_ENV);
        assert_eq!(resolve(None), None);
    }

    #[test]
    fn pool_runs_closure() {
        let n = with_workers(Some(2), rayon::current_num_threads);
        assert_eq!(n, 2);
    }
}
