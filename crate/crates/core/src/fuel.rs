//! Work budgets for lazy enumeration.
//!
//! Infinite orders, trees, and term systems are enumerated on demand. Any
//! operation that may have to probe an unbounded structure threads a [`Fuel`]
//! value through the probing loop; running dry surfaces as a [`Stall`] rather
//! than a hang. A stall is a non-answer, not an error: the caller decides
//! whether to retry with a bigger budget or report "unknown within budget".

use std::sync::Mutex;

/// Remaining probe steps for a lazy enumeration.
#[derive(Debug)]
pub struct Fuel {
    remaining: u64,
    spent: u64,
}

/// Budget ran out mid-enumeration. Enumeration state is kept, so the same
/// call can be retried with fresh fuel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("enumeration budget exhausted")]
pub struct Stall;

impl Fuel {
    pub fn new(units: u64) -> Self {
        Fuel { remaining: units, spent: 0 }
    }

    /// Effectively unbounded; used where the structure is known finite or the
    /// caller explicitly accepts long computation.
    pub fn unlimited() -> Self {
        Fuel::new(u64::MAX)
    }

    pub fn consume(&mut self, units: u64) -> Result<(), Stall> {
        if self.remaining < units {
            self.remaining = 0;
            Err(Stall)
        } else {
            self.remaining -= units;
            self.spent = self.spent.saturating_add(units);
            Ok(())
        }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }
}

/// Default budget for internal materialization (e.g. resolving a code passed
/// to `compare` that has not been enumerated yet).
pub const DEFAULT_FUEL: u64 = 4_000_000;

/// A memoized lazy stream. The generator is pulled as needed; produced items
/// are cached so repeated access is pure. Safe for concurrent use; callers
/// observe the same sequence regardless of interleaving.
pub struct MemoStream<T: Clone + Send> {
    inner: Mutex<MemoInner<T>>,
}

struct MemoInner<T> {
    items: Vec<T>,
    done: bool,
    gen: Box<dyn FnMut(&mut Fuel) -> Result<Option<T>, Stall> + Send>,
}

impl<T: Clone + Send> MemoStream<T> {
    pub fn new(gen: impl FnMut(&mut Fuel) -> Result<Option<T>, Stall> + Send + 'static) -> Self {
        MemoStream {
            inner: Mutex::new(MemoInner { items: Vec::new(), done: false, gen: Box::new(gen) }),
        }
    }

    /// The `i`-th item, materializing through the generator as needed.
    /// `Ok(None)` means the stream ended before `i`.
    pub fn get(&self, i: usize, fuel: &mut Fuel) -> Result<Option<T>, Stall> {
        let mut g = self.inner.lock().unwrap();
        while g.items.len() <= i && !g.done {
            match (g.gen)(fuel)? {
                Some(item) => g.items.push(item),
                None => g.done = true,
            }
        }
        Ok(g.items.get(i).cloned())
    }

    /// Number of items materialized so far (no generator pull).
    pub fn materialized(&self) -> usize {
        self.inner.lock().unwrap().items.len()
    }

    /// Whether the stream is known to have ended.
    pub fn finished(&self) -> bool {
        self.inner.lock().unwrap().done
    }

    /// Linear scan for the first index whose item satisfies `pred`.
    pub fn position(
        &self,
        mut pred: impl FnMut(&T) -> bool,
        fuel: &mut Fuel,
    ) -> Result<Option<usize>, Stall> {
        let mut i = 0;
        loop {
            match self.get(i, fuel)? {
                Some(item) => {
                    if pred(&item) {
                        return Ok(Some(i));
                    }
                    i += 1;
                }
                None => return Ok(None),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memo_stream_caches_and_ends() {
        let mut n = 0u64;
        let s = MemoStream::new(move |fuel| {
            fuel.consume(1)?;
            if n < 3 {
                n += 1;
                Ok(Some(n - 1))
            } else {
                Ok(None)
            }
        });
        let mut fuel = Fuel::new(100);
        assert_eq!(s.get(2, &mut fuel).unwrap(), Some(2));
        assert_eq!(s.get(0, &mut fuel).unwrap(), Some(0));
        assert_eq!(s.get(3, &mut fuel).unwrap(), None);
        assert!(s.finished());
    }

    #[test]
    fn stall_preserves_state() {
        let mut n = 0u64;
        let s = MemoStream::new(move |fuel| {
            fuel.consume(10)?;
            n += 1;
            Ok(Some(n))
        });
        let mut tiny = Fuel::new(5);
        assert_eq!(s.get(0, &mut tiny), Err(Stall));
        let mut enough = Fuel::new(100);
        assert_eq!(s.get(0, &mut enough).unwrap(), Some(1));
    }
}
