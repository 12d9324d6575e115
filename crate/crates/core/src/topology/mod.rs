//! Node placement, mobility and the radio/cellular link models.

mod link;
mod medium;
mod mobility;

pub use link::{AdHocMode, LinkMode, LinkModel, LinkModelError};
pub use medium::{
    GsmChannel, MediumStats, NodeProfile, Topology, TopologyConfig, TopologyError, TopologySnapshot,
};
pub use mobility::{MobilityError, NodeKinematics, Position, Waypoint};
