use crate::address::CommunityAddress;
use crate::sim::{SimDuration, SimTime};

/// Identifies one voice stream: caller, callee and the path epoch the frame
/// was sent under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowId {
    pub caller: CommunityAddress,
    pub callee: CommunityAddress,
    pub epoch: u32,
}

/// A sequence-numbered, timestamped voice frame (the RTP packet stand-in).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MediaPacket {
    pub flow: FlowId,
    pub seq: u32,
    pub media_timestamp: SimTime,
    pub payload_size: u16,
}

/// Which way a frame travels within a call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// caller → callee
    Forward,
    /// callee → caller
    Reverse,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Forward, Direction::Reverse];

    pub fn index(self) -> usize {
        match self {
            Direction::Forward => 0,
            Direction::Reverse => 1,
        }
    }
}

/// Constant-bit-rate capture: one frame every `frame_interval` from `start`.
///
/// Frame `k` is captured at `start + k * frame_interval`; there is no drift
/// because the schedule is computed from the index, not accumulated.
#[derive(Debug, Clone)]
pub struct MediaSource {
    start: SimTime,
    frame_interval: SimDuration,
    payload_size: u16,
    next_seq: u32,
}

impl MediaSource {
    pub fn new(start: SimTime, frame_interval: SimDuration, payload_size: u16) -> Self {
        assert!(
            frame_interval > SimDuration::ZERO,
            "frame interval must be positive"
        );
        MediaSource {
            start,
            frame_interval,
            payload_size,
            next_seq: 0,
        }
    }

    /// Capture time of the next frame.
    pub fn next_capture(&self) -> SimTime {
        self.start + self.frame_interval.mul(self.next_seq as u64)
    }

    /// Frames emitted so far.
    pub fn emitted(&self) -> u32 {
        self.next_seq
    }

    /// Produces the next frame, stamped with its capture time.
    pub fn capture(
        &mut self,
        caller: CommunityAddress,
        callee: CommunityAddress,
        epoch: u32,
    ) -> MediaPacket {
        let pkt = MediaPacket {
            flow: FlowId {
                caller,
                callee,
                epoch,
            },
            seq: self.next_seq,
            media_timestamp: self.next_capture(),
            payload_size: self.payload_size,
        };
        self.next_seq += 1;
        pkt
    }
}
