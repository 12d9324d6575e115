//! Simulator and protocol library for community mobile networks: voice calls
//! relayed peer-to-peer over multi-hop ad hoc links, with mid-call switching
//! between community paths and a GSM fallback.

pub mod address;
pub mod harness;
pub mod routing;
pub mod session;
pub mod sim;
pub mod topology;
