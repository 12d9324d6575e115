//! Deterministic discrete-event kernel: integer-microsecond clock, a
//! `(time, seq)`-ordered event queue and seeded random streams.

mod engine;
mod rng;
mod time;

pub use engine::{Event, EventHandle, Scheduler, SimError, Target};
pub use rng::{RandomStream, StreamId};
pub use time::{SimDuration, SimTime};
