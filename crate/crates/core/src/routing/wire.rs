//! Canonical byte encoding of protocol messages.
//!
//! Every message starts with a one-byte tag. Integers are big-endian,
//! addresses are their four octets, and path lists carry a one-byte length
//! prefix followed by that many addresses. A path id is
//! `origin(4) target(4) epoch(u32)`; a request id is `origin(4) seq(u32)`.
//!
//! | tag | message  | body                                                              |
//! |-----|----------|-------------------------------------------------------------------|
//! | 1   | request  | request_id, target, hop_budget u8, path                           |
//! | 2   | reply    | request_id, responder, target, flags u8 (bit 0 = relay), path     |
//! | 3   | heartbeat| path_id, seq u32                                                  |
//! | 4   | ack      | path_id, seq u32                                                  |
//! | 5   | error    | path_id, broken_at                                                |
//! | 6   | media    | path_id, dst, caller, callee, epoch u32, seq u32, timestamp_us u64, payload_size u16 |

use thiserror::Error;

use super::message::*;
use crate::address::CommunityAddress;
use crate::session::{FlowId, MediaPacket};
use crate::sim::SimTime;

const TAG_REQUEST: u8 = 1;
const TAG_REPLY: u8 = 2;
const TAG_HEARTBEAT: u8 = 3;
const TAG_ACK: u8 = 4;
const TAG_ERROR: u8 = 5;
const TAG_MEDIA: u8 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WireError {
    #[error("message truncated")]
    Truncated,
    #[error("unknown message tag {0}")]
    UnknownTag(u8),
    #[error("{0} trailing bytes after message")]
    TrailingBytes(usize),
    #[error("reserved flag bits set: {0:#04x}")]
    BadFlags(u8),
    #[error("path list longer than 255 entries")]
    PathTooLong,
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_be_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_be_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_be_bytes());
    }
    fn addr(&mut self, a: CommunityAddress) {
        self.0.extend_from_slice(&a.octets());
    }
    fn request_id(&mut self, r: RequestId) {
        self.addr(r.origin);
        self.u32(r.seq);
    }
    fn path_id(&mut self, p: PathId) {
        self.addr(p.origin);
        self.addr(p.target);
        self.u32(p.epoch);
    }
    fn path(&mut self, path: &[CommunityAddress]) -> Result<(), WireError> {
        let n = u8::try_from(path.len()).map_err(|_| WireError::PathTooLong)?;
        self.u8(n);
        path.iter().for_each(|a| self.addr(*a));
        Ok(())
    }
}

struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], WireError> {
        if self.0.len() < N {
            return Err(WireError::Truncated);
        }
        let (head, rest) = self.0.split_at(N);
        self.0 = rest;
        Ok(head.try_into().expect("length checked"))
    }
    fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take::<1>()?[0])
    }
    fn u16(&mut self) -> Result<u16, WireError> {
        Ok(u16::from_be_bytes(self.take()?))
    }
    fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_be_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_be_bytes(self.take()?))
    }
    fn addr(&mut self) -> Result<CommunityAddress, WireError> {
        Ok(CommunityAddress::new(self.take()?))
    }
    fn request_id(&mut self) -> Result<RequestId, WireError> {
        Ok(RequestId {
            origin: self.addr()?,
            seq: self.u32()?,
        })
    }
    fn path_id(&mut self) -> Result<PathId, WireError> {
        Ok(PathId {
            origin: self.addr()?,
            target: self.addr()?,
            epoch: self.u32()?,
        })
    }
    fn path(&mut self) -> Result<Vec<CommunityAddress>, WireError> {
        let n = self.u8()?;
        (0..n).map(|_| self.addr()).collect()
    }
}

pub fn encode(msg: &Message) -> Result<Vec<u8>, WireError> {
    let mut w = Writer(Vec::with_capacity(64));
    match msg {
        Message::PathRequest(r) => {
            w.u8(TAG_REQUEST);
            w.request_id(r.request_id);
            w.addr(r.target);
            w.u8(r.hop_budget);
            w.path(&r.traversed_path)?;
        }
        Message::PathReply(r) => {
            w.u8(TAG_REPLY);
            w.request_id(r.request_id);
            w.addr(r.responder);
            w.addr(r.target);
            w.u8(u8::from(r.served_by_relay));
            w.path(&r.full_path)?;
        }
        Message::Heartbeat(h) | Message::HeartbeatAck(h) => {
            w.u8(if matches!(msg, Message::Heartbeat(_)) {
                TAG_HEARTBEAT
            } else {
                TAG_ACK
            });
            w.path_id(h.path);
            w.u32(h.seq);
        }
        Message::PathError(e) => {
            w.u8(TAG_ERROR);
            w.path_id(e.path);
            w.addr(e.broken_at);
        }
        Message::Media(m) => {
            w.u8(TAG_MEDIA);
            w.path_id(m.path);
            w.addr(m.dst);
            w.addr(m.packet.flow.caller);
            w.addr(m.packet.flow.callee);
            w.u32(m.packet.flow.epoch);
            w.u32(m.packet.seq);
            w.u64(m.packet.media_timestamp.as_micros());
            w.u16(m.packet.payload_size);
        }
    }
    Ok(w.0)
}

pub fn decode(bytes: &[u8]) -> Result<Message, WireError> {
    let mut r = Reader(bytes);
    let msg = match r.u8()? {
        TAG_REQUEST => Message::PathRequest(PathRequest {
            request_id: r.request_id()?,
            target: r.addr()?,
            hop_budget: r.u8()?,
            traversed_path: r.path()?,
        }),
        TAG_REPLY => {
            let request_id = r.request_id()?;
            let responder = r.addr()?;
            let target = r.addr()?;
            let flags = r.u8()?;
            if flags & !1 != 0 {
                return Err(WireError::BadFlags(flags));
            }
            Message::PathReply(PathReply {
                request_id,
                responder,
                target,
                served_by_relay: flags & 1 == 1,
                full_path: r.path()?,
            })
        }
        tag @ (TAG_HEARTBEAT | TAG_ACK) => {
            let hb = Heartbeat {
                path: r.path_id()?,
                seq: r.u32()?,
            };
            if tag == TAG_HEARTBEAT {
                Message::Heartbeat(hb)
            } else {
                Message::HeartbeatAck(hb)
            }
        }
        TAG_ERROR => Message::PathError(PathError {
            path: r.path_id()?,
            broken_at: r.addr()?,
        }),
        TAG_MEDIA => {
            let path = r.path_id()?;
            let dst = r.addr()?;
            let flow = FlowId {
                caller: r.addr()?,
                callee: r.addr()?,
                epoch: r.u32()?,
            };
            let packet = MediaPacket {
                flow,
                seq: r.u32()?,
                media_timestamp: SimTime::from_micros(r.u64()?),
                payload_size: r.u16()?,
            };
            Message::Media(MediaFrame { path, dst, packet })
        }
        other => return Err(WireError::UnknownTag(other)),
    };
    if !r.0.is_empty() {
        return Err(WireError::TrailingBytes(r.0.len()));
    }
    Ok(msg)
}
