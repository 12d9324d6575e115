use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::link::{AdHocMode, LinkModel};
use super::mobility::{NodeKinematics, Position};
use crate::address::CommunityAddress;
use crate::sim::{EventHandle, RandomStream, Scheduler, SimDuration, SimTime, StreamId, Target};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("unknown node {0}")]
    UnknownNode(CommunityAddress),
    #[error("duplicate node {0}")]
    DuplicateNode(CommunityAddress),
    #[error("no cellular coverage at {0}")]
    ChannelUnavailable(CommunityAddress),
    #[error("cellular channel not usable until {usable_at}")]
    ChannelNotReady { usable_at: SimTime },
    #[error("{0} is not an endpoint of this cellular channel")]
    NotAnEndpoint(CommunityAddress),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeProfile {
    pub kinematics: NodeKinematics,
    pub gsm_coverage: bool,
    pub busy: bool,
}

impl NodeProfile {
    pub fn stationary(at: Position) -> Self {
        NodeProfile {
            kinematics: NodeKinematics::stationary(at),
            gsm_coverage: true,
            busy: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologyConfig {
    pub mode: AdHocMode,
    pub wlan: LinkModel,
    pub bluetooth: LinkModel,
    pub gsm: LinkModel,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        TopologyConfig {
            mode: AdHocMode::Wlan,
            wlan: LinkModel::wlan(),
            bluetooth: LinkModel::bluetooth(),
            gsm: LinkModel::gsm(),
        }
    }
}

impl TopologyConfig {
    pub fn active(&self) -> &LinkModel {
        match self.mode {
            AdHocMode::Wlan => &self.wlan,
            AdHocMode::Bluetooth => &self.bluetooth,
        }
    }
}

/// Undirected adjacency at one instant; pairs are stored low address first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologySnapshot {
    pub time: SimTime,
    pub adjacency: BTreeSet<(CommunityAddress, CommunityAddress)>,
}

impl TopologySnapshot {
    pub fn contains(&self, a: CommunityAddress, b: CommunityAddress) -> bool {
        self.adjacency.contains(&(a.min(b), a.max(b)))
    }
}

/// Provider path between two nodes. Opening it takes `gsm_setup_time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GsmChannel {
    pub a: CommunityAddress,
    pub b: CommunityAddress,
    pub opened_at: SimTime,
    pub usable_at: SimTime,
}

impl GsmChannel {
    pub fn connects(&self, x: CommunityAddress, y: CommunityAddress) -> bool {
        (self.a == x && self.b == y) || (self.a == y && self.b == x)
    }
}

/// Counters the medium keeps about its own behaviour.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MediumStats {
    pub delivered: u64,
    pub out_of_range: u64,
    pub lost: u64,
}

/// Node placement plus the unit-disk radio medium and the cellular pipe.
///
/// Reachability is evaluated at send time. A message that left the sender is
/// delivered even if the nodes drift apart while it is in the air.
#[derive(Debug, Clone)]
pub struct Topology {
    config: TopologyConfig,
    nodes: BTreeMap<CommunityAddress, NodeProfile>,
    loss_rng: RandomStream,
    latency_rng: RandomStream,
    gsm_rng: RandomStream,
    stats: MediumStats,
}

impl Topology {
    pub fn new(config: TopologyConfig, seed: u64) -> Self {
        Topology {
            config,
            nodes: BTreeMap::new(),
            loss_rng: RandomStream::new(seed, StreamId::LinkLoss),
            latency_rng: RandomStream::new(seed, StreamId::LinkLatency),
            gsm_rng: RandomStream::new(seed, StreamId::Gsm),
            stats: MediumStats::default(),
        }
    }

    pub fn add_node(
        &mut self,
        addr: CommunityAddress,
        profile: NodeProfile,
    ) -> Result<(), TopologyError> {
        if self.nodes.contains_key(&addr) {
            return Err(TopologyError::DuplicateNode(addr));
        }
        self.nodes.insert(addr, profile);
        Ok(())
    }

    pub fn config(&self) -> &TopologyConfig {
        &self.config
    }

    pub fn link(&self) -> &LinkModel {
        self.config.active()
    }

    pub fn stats(&self) -> MediumStats {
        self.stats
    }

    pub fn nodes(&self) -> impl Iterator<Item = CommunityAddress> + '_ {
        self.nodes.keys().copied()
    }

    pub fn profile(&self, node: CommunityAddress) -> Result<&NodeProfile, TopologyError> {
        self.nodes
            .get(&node)
            .ok_or(TopologyError::UnknownNode(node))
    }

    pub fn position_of(
        &self,
        node: CommunityAddress,
        t: SimTime,
    ) -> Result<Position, TopologyError> {
        Ok(self.profile(node)?.kinematics.position_at(t))
    }

    pub fn in_range(&self, a: CommunityAddress, b: CommunityAddress, t: SimTime) -> bool {
        if a == b {
            return false;
        }
        match (self.nodes.get(&a), self.nodes.get(&b)) {
            (Some(pa), Some(pb)) => {
                let d = pa
                    .kinematics
                    .position_at(t)
                    .distance(&pb.kinematics.position_at(t));
                d <= self.link().radio_range_m
            }
            _ => false,
        }
    }

    /// Nodes within radio range of `node` under the active ad hoc mode.
    pub fn neighbors(&self, node: CommunityAddress, t: SimTime) -> BTreeSet<CommunityAddress> {
        let Some(me) = self.nodes.get(&node) else {
            return BTreeSet::new();
        };
        let here = me.kinematics.position_at(t);
        let range = self.link().radio_range_m;
        self.nodes
            .iter()
            .filter(|(addr, p)| {
                **addr != node && p.kinematics.position_at(t).distance(&here) <= range
            })
            .map(|(addr, _)| *addr)
            .collect()
    }

    pub fn snapshot(&self, t: SimTime) -> TopologySnapshot {
        let positions: Vec<(CommunityAddress, Position)> = self
            .nodes
            .iter()
            .map(|(a, p)| (*a, p.kinematics.position_at(t)))
            .collect();
        let range = self.link().radio_range_m;
        let mut adjacency = BTreeSet::new();
        for (i, (a, pa)) in positions.iter().enumerate() {
            for (b, pb) in &positions[i + 1..] {
                if pa.distance(pb) <= range {
                    adjacency.insert((*a, *b));
                }
            }
        }
        TopologySnapshot { time: t, adjacency }
    }

    fn draw_latency(&mut self) -> SimDuration {
        let (lo, hi) = self.link().latency_bounds();
        SimDuration::from_micros(self.latency_rng.uniform_inclusive(lo, hi))
    }

    /// Attempts a one-hop transmission at `t` (which must not precede the
    /// scheduler clock). Returns the delivery event, or `None` when the
    /// destination is out of range or the loss draw kills the frame.
    pub fn unicast<P>(
        &mut self,
        sched: &mut Scheduler<P>,
        src: CommunityAddress,
        dst: CommunityAddress,
        payload: P,
        t: SimTime,
    ) -> Option<EventHandle> {
        if !self.in_range(src, dst, t) {
            self.stats.out_of_range += 1;
            return None;
        }
        if self.loss_rng.bernoulli(self.link().loss_probability) {
            self.stats.lost += 1;
            return None;
        }
        let at = t + self.draw_latency();
        self.stats.delivered += 1;
        Some(
            sched
                .schedule(at, Target::Node(dst), payload)
                .expect("delivery after send time"),
        )
    }

    /// One independent unicast attempt per current neighbor, in address order.
    pub fn broadcast<P: Clone>(
        &mut self,
        sched: &mut Scheduler<P>,
        src: CommunityAddress,
        payload: P,
        t: SimTime,
    ) -> Vec<EventHandle> {
        self.neighbors(src, t)
            .into_iter()
            .filter_map(|n| self.unicast(sched, src, n, payload.clone(), t))
            .collect()
    }

    pub fn gsm_channel(
        &self,
        src: CommunityAddress,
        dst: CommunityAddress,
        t: SimTime,
    ) -> Result<GsmChannel, TopologyError> {
        for n in [src, dst] {
            if !self.profile(n)?.gsm_coverage {
                return Err(TopologyError::ChannelUnavailable(n));
            }
        }
        Ok(GsmChannel {
            a: src,
            b: dst,
            opened_at: t,
            usable_at: t + self.config.gsm.gsm_setup_time,
        })
    }

    /// Sends over an open cellular channel. `Ok(None)` means the (configurable)
    /// cellular loss draw dropped the message.
    pub fn gsm_send<P>(
        &mut self,
        sched: &mut Scheduler<P>,
        channel: &GsmChannel,
        from: CommunityAddress,
        to: CommunityAddress,
        payload: P,
        t: SimTime,
    ) -> Result<Option<EventHandle>, TopologyError> {
        if !channel.connects(from, to) {
            return Err(TopologyError::NotAnEndpoint(
                if channel.a == from || channel.b == from {
                    to
                } else {
                    from
                },
            ));
        }
        if t < channel.usable_at {
            return Err(TopologyError::ChannelNotReady {
                usable_at: channel.usable_at,
            });
        }
        let gsm = &self.config.gsm;
        if self.gsm_rng.bernoulli(gsm.loss_probability) {
            return Ok(None);
        }
        let (lo, hi) = gsm.latency_bounds();
        let at = t + SimDuration::from_micros(self.gsm_rng.uniform_inclusive(lo, hi));
        Ok(Some(
            sched
                .schedule(at, Target::Node(to), payload)
                .expect("delivery after send time"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::mobility::Waypoint;
    use proptest::prelude::*;

    fn addr(i: u8) -> CommunityAddress {
        CommunityAddress::new([128, 0, 0, i])
    }

    fn static_topology(points: &[(f64, f64)], config: TopologyConfig, seed: u64) -> Topology {
        let mut t = Topology::new(config, seed);
        for (i, (x, y)) in points.iter().enumerate() {
            t.add_node(
                addr(i as u8),
                NodeProfile::stationary(Position::new(*x, *y)),
            )
            .unwrap();
        }
        t
    }

    fn brute_force_neighbors(
        points: &[(f64, f64)],
        i: usize,
        range: f64,
    ) -> BTreeSet<CommunityAddress> {
        (0..points.len())
            .filter(|&j| j != i)
            .filter(|&j| {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                (dx * dx + dy * dy).sqrt() <= range
            })
            .map(|j| addr(j as u8))
            .collect()
    }

    #[test]
    fn range_membership() {
        let t = static_topology(
            &[(0.0, 0.0), (50.0, 0.0), (200.0, 0.0)],
            TopologyConfig::default(),
            1,
        );
        assert!(t.neighbors(addr(0), SimTime::ZERO).contains(&addr(1)));
        assert!(!t.neighbors(addr(1), SimTime::ZERO).contains(&addr(2)));
    }

    #[test]
    fn line_interior_nodes_have_two_neighbors() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (90.0 * i as f64, 0.0)).collect();
        let t = static_topology(&pts, TopologyConfig::default(), 1);
        for i in 0..10 {
            let n = t.neighbors(addr(i as u8), SimTime::ZERO);
            assert_eq!(n, brute_force_neighbors(&pts, i, 100.0));
            let expected = if i == 0 || i == 9 { 1 } else { 2 };
            assert_eq!(n.len(), expected, "node {i}");
        }
    }

    #[test]
    fn unknown_node_is_an_error() {
        let t = static_topology(&[(0.0, 0.0)], TopologyConfig::default(), 1);
        assert_eq!(
            t.position_of(addr(9), SimTime::ZERO),
            Err(TopologyError::UnknownNode(addr(9)))
        );
    }

    #[test]
    fn degenerate_latency_is_exact() {
        let mut cfg = TopologyConfig::default();
        cfg.wlan.latency_jitter = SimDuration::ZERO;
        let mut t = static_topology(&[(0.0, 0.0), (10.0, 0.0)], cfg, 1);
        let mut s = Scheduler::new();
        t.unicast(&mut s, addr(0), addr(1), (), SimTime::ZERO)
            .unwrap();
        let e = s.pop_until(SimTime::from_secs(1)).unwrap();
        assert_eq!(e.fire_at, SimTime::from_millis(5));
        assert_eq!(e.target, Target::Node(addr(1)));
    }

    #[test]
    fn out_of_range_and_certain_loss_drop_silently() {
        let mut cfg = TopologyConfig::default();
        let mut t = static_topology(&[(0.0, 0.0), (150.0, 0.0)], cfg.clone(), 1);
        let mut s: Scheduler<()> = Scheduler::new();
        assert!(t
            .unicast(&mut s, addr(0), addr(1), (), SimTime::ZERO)
            .is_none());
        cfg.wlan.loss_probability = 1.0;
        let mut t = static_topology(&[(0.0, 0.0), (50.0, 0.0)], cfg, 1);
        for _ in 0..50 {
            assert!(t
                .unicast(&mut s, addr(0), addr(1), (), SimTime::ZERO)
                .is_none());
        }
        assert_eq!(s.pending_len(), 0);
    }

    #[test]
    fn broadcast_reaches_each_neighbor_once() {
        let mut t = static_topology(
            &[(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (-10.0, 0.0)],
            TopologyConfig::default(),
            1,
        );
        let mut s = Scheduler::new();
        assert_eq!(t.broadcast(&mut s, addr(0), 0u8, SimTime::ZERO).len(), 3);
        let mut lonely = static_topology(&[(0.0, 0.0), (500.0, 0.0)], TopologyConfig::default(), 1);
        assert!(lonely
            .broadcast(&mut s, addr(0), 0u8, SimTime::ZERO)
            .is_empty());
    }

    #[test]
    fn broadcast_loss_matches_binomial() {
        let mut cfg = TopologyConfig::default();
        cfg.wlan.loss_probability = 0.1;
        let mut t = static_topology(&[(0.0, 0.0), (10.0, 0.0)], cfg, 2024);
        let mut s = Scheduler::new();
        let delivered: usize = (0..1000)
            .map(|_| t.broadcast(&mut s, addr(0), (), SimTime::ZERO).len())
            .sum();
        let sigma = (1000.0f64 * 0.1 * 0.9).sqrt();
        assert!(
            (delivered as f64 - 900.0).abs() <= 3.0 * sigma,
            "delivered {delivered}"
        );
    }

    #[test]
    fn gsm_channel_setup_and_delay() {
        let mut t = static_topology(&[(0.0, 0.0), (5000.0, 0.0)], TopologyConfig::default(), 1);
        let ch = t
            .gsm_channel(addr(0), addr(1), SimTime::from_secs(1))
            .unwrap();
        assert_eq!(ch.usable_at, SimTime::from_secs(11));
        let mut s = Scheduler::new();
        assert_eq!(
            t.gsm_send(&mut s, &ch, addr(0), addr(1), (), SimTime::from_secs(5)),
            Err(TopologyError::ChannelNotReady {
                usable_at: SimTime::from_secs(11)
            })
        );
        t.gsm_send(&mut s, &ch, addr(1), addr(0), (), SimTime::from_secs(11))
            .unwrap()
            .unwrap();
        let e = s.pop_until(SimTime::from_secs(20)).unwrap();
        assert_eq!(
            e.fire_at,
            SimTime::from_secs(11) + SimDuration::from_millis(110)
        );
    }

    #[test]
    fn gsm_unavailable_without_coverage() {
        let mut t = Topology::new(TopologyConfig::default(), 1);
        t.add_node(addr(0), NodeProfile::stationary(Position::default()))
            .unwrap();
        let mut p = NodeProfile::stationary(Position::default());
        p.gsm_coverage = false;
        t.add_node(addr(1), p).unwrap();
        assert_eq!(
            t.gsm_channel(addr(0), addr(1), SimTime::ZERO),
            Err(TopologyError::ChannelUnavailable(addr(1)))
        );
    }

    #[test]
    fn moving_node_leaves_range() {
        let mut t = Topology::new(TopologyConfig::default(), 1);
        t.add_node(addr(0), NodeProfile::stationary(Position::default()))
            .unwrap();
        let k = NodeKinematics::new(vec![
            Waypoint {
                at: SimTime::ZERO,
                position: Position::new(50.0, 0.0),
            },
            Waypoint {
                at: SimTime::from_secs(10),
                position: Position::new(150.0, 0.0),
            },
        ])
        .unwrap();
        t.add_node(
            addr(1),
            NodeProfile {
                kinematics: k,
                gsm_coverage: true,
                busy: false,
            },
        )
        .unwrap();
        assert!(t.in_range(addr(0), addr(1), SimTime::from_secs(5)));
        assert!(!t.in_range(addr(0), addr(1), SimTime::from_secs(6)));
    }

    proptest! {
        #[test]
        fn neighbors_agree_with_brute_force_and_are_symmetric(
            pts in prop::collection::vec((0.0f64..300.0, 0.0f64..300.0), 2..25),
        ) {
            let t = static_topology(&pts, TopologyConfig::default(), 3);
            let snap = t.snapshot(SimTime::ZERO);
            for i in 0..pts.len() {
                let n = t.neighbors(addr(i as u8), SimTime::ZERO);
                prop_assert_eq!(&n, &brute_force_neighbors(&pts, i, 100.0));
                for j in &n {
                    prop_assert!(t.neighbors(*j, SimTime::ZERO).contains(&addr(i as u8)));
                    prop_assert!(snap.contains(addr(i as u8), *j));
                }
            }
        }

        #[test]
        fn latency_stays_within_bounds(seed in 0u64..1000, jitter_us in 0u64..5000) {
            let mut cfg = TopologyConfig::default();
            cfg.wlan.latency_jitter = SimDuration::from_micros(jitter_us);
            let mut t = static_topology(&[(0.0, 0.0), (10.0, 0.0)], cfg.clone(), seed);
            let mut s = Scheduler::new();
            for _ in 0..20 {
                t.unicast(&mut s, addr(0), addr(1), (), SimTime::ZERO).unwrap();
            }
            let (lo, hi) = cfg.wlan.latency_bounds();
            let mut n = 0;
            while let Some(e) = s.pop_until(SimTime::from_secs(1)) {
                prop_assert!((lo..=hi).contains(&e.fire_at.as_micros()));
                n += 1;
            }
            prop_assert_eq!(n, 20);
        }
    }
}
