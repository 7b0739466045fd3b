use dfl_core::parallel::Executor;

/// Spreads work items over scoped OS threads. Output order follows input order,
/// so results never depend on the worker count.
#[derive(Debug, Clone, Copy)]
pub struct Threads {
    workers: usize,
}

impl Threads {
    pub fn new(workers: usize) -> Threads {
        Threads { workers: workers.max(1) }
    }
}

impl Executor for Threads {
    fn map<T: Send, U: Send, F: Fn(T) -> U + Sync>(&self, items: Vec<T>, f: F) -> Vec<U> {
        if self.workers == 1 || items.len() < 2 {
            return items.into_iter().map(f).collect();
        }
        let per = items.len().div_ceil(self.workers);
        let mut chunks: Vec<Vec<T>> = Vec::new();
        let mut it = items.into_iter().peekable();
        while it.peek().is_some() {
            chunks.push(it.by_ref().take(per).collect());
        }
        let f = &f;
        std::thread::scope(|s| {
            let handles: Vec<_> =
                chunks.into_iter().map(|c| s.spawn(move || c.into_iter().map(f).collect::<Vec<U>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    }
}
