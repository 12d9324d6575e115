use std::collections::{BTreeMap, BTreeSet};

use super::media::MediaPacket;
use crate::sim::{SimDuration, SimTime};

/// Outcome of handing an arriving packet to the buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reception {
    /// Held until `play_at`.
    Scheduled {
        play_at: SimTime,
    },
    /// Arrived after its playout deadline.
    Late,
    Duplicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayedPacket {
    pub packet: MediaPacket,
    pub arrived_at: SimTime,
    pub played_at: SimTime,
}

/// Result of one due packet leaving the buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Playout {
    Played(PlayedPacket),
    /// Due, but an equal or later seq of its epoch already played.
    Skipped(MediaPacket),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlayoutCounters {
    /// Distinct packets that reached the buffer.
    pub received: u64,
    pub played: u64,
    pub lost_at_playout: u64,
    pub duplicates: u64,
}

/// Receiver-side jitter buffer.
///
/// Each epoch gets its own playout offset, fixed by the first packet that
/// arrives in it: `offset = transit(first) + depth`. Every later packet of
/// the epoch plays at `media_timestamp + offset` if it arrived by then.
/// Packets of an older epoch that are still in transit after a switch keep
/// their own offset, so a handover does not by itself cause loss.
#[derive(Debug, Clone)]
pub struct PlayoutBuffer {
    depth: SimDuration,
    offsets: BTreeMap<u32, SimDuration>,
    highest_played: BTreeMap<u32, u32>,
    seen: BTreeSet<u32>,
    held: BTreeMap<(SimTime, u32), (MediaPacket, SimTime)>,
    counters: PlayoutCounters,
}

impl PlayoutBuffer {
    pub fn new(depth: SimDuration) -> Self {
        PlayoutBuffer {
            depth,
            offsets: BTreeMap::new(),
            highest_played: BTreeMap::new(),
            seen: BTreeSet::new(),
            held: BTreeMap::new(),
            counters: PlayoutCounters::default(),
        }
    }

    pub fn depth(&self) -> SimDuration {
        self.depth
    }

    pub fn counters(&self) -> PlayoutCounters {
        self.counters
    }

    /// Packets accepted but not yet played.
    pub fn held(&self) -> usize {
        self.held.len()
    }

    pub fn offset(&self, epoch: u32) -> Option<SimDuration> {
        self.offsets.get(&epoch).copied()
    }

    pub fn receive(&mut self, packet: MediaPacket, now: SimTime) -> Reception {
        if !self.seen.insert(packet.seq) {
            self.counters.duplicates += 1;
            return Reception::Duplicate;
        }
        self.counters.received += 1;
        let depth = self.depth;
        let offset = *self
            .offsets
            .entry(packet.flow.epoch)
            .or_insert_with(|| now.saturating_since(packet.media_timestamp) + depth);
        let play_at = packet.media_timestamp + offset;
        if now > play_at {
            self.counters.lost_at_playout += 1;
            return Reception::Late;
        }
        self.held.insert((play_at, packet.seq), (packet, now));
        Reception::Scheduled { play_at }
    }

    /// Plays every held packet whose time has come, earliest first.
    pub fn play_due(&mut self, now: SimTime) -> Vec<Playout> {
        let mut out = Vec::new();
        while let Some(entry) = self.held.first_entry() {
            let (play_at, _) = *entry.key();
            if play_at > now {
                break;
            }
            let (packet, arrived_at) = entry.remove();
            let epoch = packet.flow.epoch;
            match self.highest_played.get(&epoch) {
                Some(&h) if h >= packet.seq => {
                    self.counters.lost_at_playout += 1;
                    out.push(Playout::Skipped(packet));
                }
                _ => {
                    self.highest_played.insert(epoch, packet.seq);
                    self.counters.played += 1;
                    out.push(Playout::Played(PlayedPacket {
                        packet,
                        arrived_at,
                        played_at: play_at,
                    }));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::CommunityAddress;
    use crate::session::FlowId;

    fn pkt(seq: u32, epoch: u32) -> MediaPacket {
        MediaPacket {
            flow: FlowId {
                caller: CommunityAddress::new([128, 0, 0, 1]),
                callee: CommunityAddress::new([128, 0, 0, 2]),
                epoch,
            },
            seq,
            media_timestamp: SimTime::from_millis(20 * seq as u64),
            payload_size: 160,
        }
    }

    fn ms(v: u64) -> SimTime {
        SimTime::from_millis(v)
    }

    #[test]
    fn constant_transit_plays_at_depth_plus_transit() {
        let mut b = PlayoutBuffer::new(SimDuration::from_millis(100));
        for s in 0..5 {
            let p = pkt(s, 0);
            assert_eq!(
                b.receive(p, p.media_timestamp + SimDuration::from_millis(5)),
                Reception::Scheduled {
                    play_at: p.media_timestamp + SimDuration::from_millis(105)
                }
            );
        }
        let played = b.play_due(ms(10_000));
        assert_eq!(played.len(), 5);
        assert!(played.iter().all(|p| matches!(p, Playout::Played(p)
            if p.played_at - p.packet.media_timestamp == SimDuration::from_millis(105))));
    }

    #[test]
    fn packet_beyond_depth_is_lost_at_playout() {
        let mut b = PlayoutBuffer::new(SimDuration::from_millis(100));
        b.receive(pkt(0, 0), ms(5));
        // deadline for seq 1 is 20 + 105 = 125 ms
        assert_eq!(b.receive(pkt(1, 0), ms(126)), Reception::Late);
        assert_eq!(b.counters().lost_at_playout, 1);
    }

    #[test]
    fn out_of_order_pair_plays_in_seq_order() {
        let mut b = PlayoutBuffer::new(SimDuration::from_millis(100));
        b.receive(pkt(0, 0), ms(5));
        b.receive(pkt(2, 0), ms(46));
        b.receive(pkt(1, 0), ms(50));
        let seqs: Vec<u32> = b
            .play_due(ms(1000))
            .iter()
            .map(|p| match p {
                Playout::Played(p) => p.packet.seq,
                Playout::Skipped(_) => panic!("skipped"),
            })
            .collect();
        assert_eq!(seqs, vec![0, 1, 2]);
    }

    #[test]
    fn duplicate_is_discarded() {
        let mut b = PlayoutBuffer::new(SimDuration::from_millis(100));
        b.receive(pkt(0, 0), ms(5));
        assert_eq!(b.receive(pkt(0, 0), ms(6)), Reception::Duplicate);
        assert_eq!(b.play_due(ms(1000)).len(), 1);
        assert_eq!(b.counters().duplicates, 1);
    }

    #[test]
    fn stale_epoch_keeps_its_own_offset() {
        let mut b = PlayoutBuffer::new(SimDuration::from_millis(100));
        // epoch 0 over a slow transport, epoch 1 over a fast one
        b.receive(pkt(0, 0), ms(110));
        b.receive(pkt(2, 1), ms(45));
        // seq 1 of the old epoch arrives after the switch, still in time
        assert_eq!(
            b.receive(pkt(1, 0), ms(130)),
            Reception::Scheduled { play_at: ms(230) }
        );
        assert_eq!(b.play_due(ms(1000)).len(), 3);
        assert_eq!(b.counters().lost_at_playout, 0);
    }

    #[test]
    fn only_due_packets_play() {
        let mut b = PlayoutBuffer::new(SimDuration::from_millis(100));
        b.receive(pkt(0, 0), ms(5));
        b.receive(pkt(1, 0), ms(25));
        assert_eq!(b.play_due(ms(104)).len(), 0);
        assert_eq!(b.play_due(ms(105)).len(), 1);
        assert_eq!(b.held(), 1);
    }
}
