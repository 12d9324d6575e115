use std::collections::BTreeMap;

use thiserror::Error;

use super::time::{SimDuration, SimTime};
use crate::address::CommunityAddress;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("event scheduled in the past: fire_at {at} < now {now}")]
    ScheduleInPast { at: SimTime, now: SimTime },
    #[error("cannot run backwards: requested {requested} < now {now}")]
    RunBackwards { requested: SimTime, now: SimTime },
}

/// Who an event is addressed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Node(CommunityAddress),
    Engine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event<P> {
    pub fire_at: SimTime,
    pub seq: u64,
    pub target: Target,
    pub payload: P,
}

/// Opaque handle returned by [`Scheduler::schedule`], usable for cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventHandle {
    fire_at: SimTime,
    seq: u64,
}

/// Single-threaded discrete-event queue ordered by `(fire_at, seq)`.
///
/// The sequence counter is global to the scheduler, so events scheduled for
/// the same instant dispatch in insertion order.
#[derive(Debug)]
pub struct Scheduler<P> {
    now: SimTime,
    next_seq: u64,
    queue: BTreeMap<(SimTime, u64), (Target, P)>,
    dispatched: u64,
}

impl<P> Default for Scheduler<P> {
    fn default() -> Self {
        Self::new()
    }
}

impl<P> Scheduler<P> {
    pub fn new() -> Self {
        Scheduler {
            now: SimTime::ZERO,
            next_seq: 0,
            queue: BTreeMap::new(),
            dispatched: 0,
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    /// Total events dispatched over the scheduler's lifetime.
    pub fn dispatched(&self) -> u64 {
        self.dispatched
    }

    pub fn schedule(
        &mut self,
        fire_at: SimTime,
        target: Target,
        payload: P,
    ) -> Result<EventHandle, SimError> {
        if fire_at < self.now {
            return Err(SimError::ScheduleInPast {
                at: fire_at,
                now: self.now,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.queue.insert((fire_at, seq), (target, payload));
        Ok(EventHandle { fire_at, seq })
    }

    pub fn schedule_in(&mut self, delay: SimDuration, target: Target, payload: P) -> EventHandle {
        self.schedule(self.now + delay, target, payload)
            .expect("relative schedule is never in the past")
    }

    /// Returns true if the event was still pending.
    pub fn cancel(&mut self, handle: EventHandle) -> bool {
        self.queue.remove(&(handle.fire_at, handle.seq)).is_some()
    }

    pub fn pending_len(&self) -> usize {
        self.queue.len()
    }

    /// Pending events in dispatch order.
    pub fn pending(&self) -> impl Iterator<Item = (SimTime, &Target, &P)> {
        self.queue
            .iter()
            .map(|((t, _), (target, p))| (*t, target, p))
    }

    /// Removes and returns the next event with `fire_at <= horizon`, advancing the clock.
    pub fn pop_until(&mut self, horizon: SimTime) -> Option<Event<P>> {
        let (&(fire_at, seq), _) = self.queue.first_key_value()?;
        if fire_at > horizon {
            return None;
        }
        let (target, payload) = self
            .queue
            .remove(&(fire_at, seq))
            .expect("key just observed");
        self.now = fire_at;
        self.dispatched += 1;
        Some(Event {
            fire_at,
            seq,
            target,
            payload,
        })
    }

    /// Dispatches every event with `fire_at <= until` in order and leaves the
    /// clock at `until`. A handler error aborts the run.
    pub fn run_until<F>(&mut self, until: SimTime, mut handler: F) -> Result<usize, SimError>
    where
        F: FnMut(&mut Scheduler<P>, Event<P>) -> Result<(), SimError>,
    {
        if until < self.now {
            return Err(SimError::RunBackwards {
                requested: until,
                now: self.now,
            });
        }
        let mut count = 0;
        while let Some(event) = self.pop_until(until) {
            handler(self, event)?;
            count += 1;
        }
        self.now = until;
        Ok(count)
    }
}
