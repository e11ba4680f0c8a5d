//! Thread-local instrumentation counters.
//!
//! Settlement tests assert that every mutating ledger path runs the group
//! membership check and that transfers run signature verification; the
//! benchmark suite asserts the pairing cost of each verifier. Counters are
//! per-thread so parallel tests do not interfere.

use std::cell::Cell;

thread_local! {
    static PAIRINGS: Cell<u64> = const { Cell::new(0) };
    static GVF_CALLS: Cell<u64> = const { Cell::new(0) };
    static UVF_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of pairing evaluations on this thread since the last [`reset`].
pub fn pairings() -> u64 {
    PAIRINGS.with(|c| c.get())
}

/// Number of group-verification calls on this thread since the last [`reset`].
pub fn gvf_calls() -> u64 {
    GVF_CALLS.with(|c| c.get())
}

/// Number of signature-verification calls on this thread since the last [`reset`].
pub fn uvf_calls() -> u64 {
    UVF_CALLS.with(|c| c.get())
}

/// Zero all counters on this thread.
pub fn reset() {
    PAIRINGS.with(|c| c.set(0));
    GVF_CALLS.with(|c| c.set(0));
    UVF_CALLS.with(|c| c.set(0));
}

pub(crate) fn bump_pairings() {
    PAIRINGS.with(|c| c.set(c.get() + 1));
}

pub(crate) fn bump_gvf() {
    GVF_CALLS.with(|c| c.set(c.get() + 1));
}

pub(crate) fn bump_uvf() {
    UVF_CALLS.with(|c| c.set(c.get() + 1));
}
