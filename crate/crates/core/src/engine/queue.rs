//! Time-ordered event queue with deterministic tie-breaking.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use super::{Event, EventKind};

#[derive(Debug)]
struct Entry {
    event: Event,
    token: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // BinaryHeap is a max-heap: reverse so the earliest (time, seq) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .event
            .time
            .total_cmp(&self.event.time)
            .then_with(|| other.event.seq.cmp(&self.event.seq))
    }
}

/// Events pop in `(time, seq)` order; `seq` is the insertion counter, so
/// simultaneous events are processed in the order they were scheduled.
#[derive(Debug, Default)]
pub(crate) struct EventQueue {
    heap: BinaryHeap<Entry>,
    next_seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    /// Schedules `kind` at `time`. `token` lets the owner recognise stale
    /// entries (a cancelled clock, an abandoned mobilization).
    pub fn push(&mut self, time: f64, kind: EventKind, token: u64) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Entry { event: Event { time, seq, kind }, token });
    }

    pub fn pop(&mut self) -> Option<(Event, u64)> {
        self.heap.pop().map(|e| (e.event, e.token))
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.heap.len()
    }
}
