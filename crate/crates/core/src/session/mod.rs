//! Voice calls: constant-bit-rate capture, playout and transport switching.

mod call;
mod media;
mod playout;

pub use call::{
    CallEvent, CallState, CalleeSession, CallerSession, Env, Linger, Phase, Purpose, SessionAction,
    SessionConfig, SessionTimer, Transport,
};
pub use media::{Direction, FlowId, MediaPacket, MediaSource};
pub use playout::{PlayedPacket, Playout, PlayoutBuffer, PlayoutCounters, Reception};
