//! Order-preserving parallel map; sequential when the `parallel` feature is off.

#[cfg(feature = "parallel")]
pub(crate) fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Distinct-value counter over `0..q` reusing one buffer between calls.
pub(crate) struct Stamp {
    seen: Vec<u32>,
    gen: u32,
}

impl Stamp {
    pub(crate) fn new(q: u32) -> Self {
        Stamp { seen: vec![0; q as usize], gen: 0 }
    }

    pub(crate) fn next(&mut self) {
        self.gen = self.gen.wrapping_add(1);
        if self.gen == 0 {
            self.seen.fill(0);
            self.gen = 1;
        }
    }

    /// Marks `x`; returns whether it was unseen in the current generation.
    #[inline]
    pub(crate) fn mark(&mut self, x: u32) -> bool {
        let slot = &mut self.seen[x as usize];
        if *slot == self.gen {
            false
        } else {
            *slot = self.gen;
            true
        }
    }
}
