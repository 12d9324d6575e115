//! On-demand path discovery with a rebroadcast budget, per-path route state,
//! hop-by-hop heartbeat monitoring and upstream path-error propagation.
//!
//! Hop accounting: a request leaves its origin with `hop_budget = 7` and
//! every rebroadcast spends one unit, so a target `k` links away is
//! discoverable iff `k <= 8`.

mod message;
mod node;
pub mod wire;

pub use message::{
    Heartbeat, MediaFrame, Message, PathError, PathId, PathReply, PathRequest, RequestId,
};
pub use node::{
    Action, DropReason, Notification, RouteEntry, RoutingConfig, RoutingError, RoutingNode,
    RoutingStats, Timer,
};

pub(crate) use message::has_duplicates;
