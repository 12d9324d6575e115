use std::fmt;

use crate::address::CommunityAddress;
use crate::session::MediaPacket;

/// Globally unique discovery identifier: originator plus its local counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RequestId {
    pub origin: CommunityAddress,
    pub seq: u32,
}

/// Identifies one discovered path. `epoch` is the sequence number of the
/// discovery that produced it, so every rediscovery yields a fresh path id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathId {
    pub origin: CommunityAddress,
    pub target: CommunityAddress,
    pub epoch: u32,
}

impl PathId {
    pub fn for_request(request: RequestId, target: CommunityAddress) -> Self {
        PathId {
            origin: request.origin,
            target,
            epoch: request.seq,
        }
    }
}

impl fmt::Display for RequestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.origin, self.seq)
    }
}

impl fmt::Display for PathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}#{}", self.origin, self.target, self.epoch)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRequest {
    pub request_id: RequestId,
    pub target: CommunityAddress,
    /// Remaining rebroadcast allowance.
    pub hop_budget: u8,
    /// Nodes the request has visited, starting with the origin.
    pub traversed_path: Vec<CommunityAddress>,
}

impl PathRequest {
    pub fn origin(&self) -> CommunityAddress {
        self.request_id.origin
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathReply {
    pub request_id: RequestId,
    pub responder: CommunityAddress,
    pub target: CommunityAddress,
    /// Origin first, target last.
    pub full_path: Vec<CommunityAddress>,
    pub served_by_relay: bool,
}

impl PathReply {
    pub fn path_id(&self) -> PathId {
        PathId::for_request(self.request_id, self.target)
    }

    pub fn hop_count(&self) -> usize {
        self.full_path.len().saturating_sub(1)
    }
}

/// Keep-alive sent to the next hop on an active path; the ack echoes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Heartbeat {
    pub path: PathId,
    pub seq: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathError {
    pub path: PathId,
    pub broken_at: CommunityAddress,
}

/// Voice frame in transit along a community path toward `dst`, which is
/// either the path's origin or its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MediaFrame {
    pub path: PathId,
    pub dst: CommunityAddress,
    pub packet: MediaPacket,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    PathRequest(PathRequest),
    PathReply(PathReply),
    Heartbeat(Heartbeat),
    HeartbeatAck(Heartbeat),
    PathError(PathError),
    Media(MediaFrame),
}

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::PathRequest(_) => "PREQ",
            Message::PathReply(_) => "PREP",
            Message::Heartbeat(_) => "HB",
            Message::HeartbeatAck(_) => "HBACK",
            Message::PathError(_) => "PERR",
            Message::Media(_) => "MEDIA",
        }
    }
}

pub(crate) fn has_duplicates(path: &[CommunityAddress]) -> bool {
    path.iter().enumerate().any(|(i, a)| path[..i].contains(a))
}
