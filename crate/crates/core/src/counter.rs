//! Per-thread tally of rational multiplications.
//!
//! Every routine in this crate that multiplies two rationals reports the
//! number of products it formed here. Counting is exact and deterministic,
//! so it is the quantity benchmarks and tests assert on (wall time is not).

use std::cell::Cell;

thread_local! {
    static MULS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub(crate) fn tally(n: u64) {
    MULS.with(|c| c.set(c.get() + n));
}

/// Current value of this thread's multiplication counter.
pub fn rational_muls() -> u64 {
    MULS.with(Cell::get)
}

/// Runs `f` and returns its result with the number of rational
/// multiplications it performed on this thread.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = rational_muls();
    let out = f();
    (out, rational_muls() - before)
}
