use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::message::*;
use crate::address::CommunityAddress;
use crate::session::MediaPacket;
use crate::sim::{SimDuration, SimTime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingConfig {
    /// Rebroadcast allowance carried by a fresh request.
    pub hop_budget: u8,
    pub discovery_timeout: SimDuration,
    pub heartbeat_interval: SimDuration,
    /// Consecutive unacknowledged heartbeats that declare a path lost.
    pub miss_threshold: u32,
    /// How long a heartbeat waits for its ack before it counts as missed.
    /// This is the round-trip bound of the detection window.
    pub heartbeat_ack_timeout: SimDuration,
}

impl Default for RoutingConfig {
    fn default() -> Self {
        RoutingConfig {
            hop_budget: 7,
            discovery_timeout: SimDuration::from_secs(2),
            heartbeat_interval: SimDuration::from_secs(1),
            miss_threshold: 3,
            heartbeat_ack_timeout: SimDuration::from_millis(50),
        }
    }
}

impl RoutingConfig {
    /// Longest possible path in nodes: origin, one node per rebroadcast, target.
    pub fn max_path_nodes(&self) -> usize {
        self.hop_budget as usize + 2
    }

    fn seen_lifetime(&self) -> SimDuration {
        self.discovery_timeout.mul(2)
    }

    /// Age after which a cached route may no longer back a relay reply.
    pub fn relay_staleness(&self) -> SimDuration {
        self.heartbeat_interval.mul(2 * self.miss_threshold as u64)
    }

    /// Upstream silence after which an intermediate stops monitoring.
    fn upstream_silence_limit(&self) -> SimDuration {
        self.heartbeat_interval.mul(self.miss_threshold as u64) + self.heartbeat_ack_timeout
    }

    /// Upper bound between a link break and its detection.
    pub fn detection_bound(&self) -> SimDuration {
        self.heartbeat_interval.mul(self.miss_threshold as u64) + self.heartbeat_ack_timeout
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    #[error("a node cannot discover a path to itself")]
    SelfTarget,
    #[error("discovery toward {0} already pending")]
    AlreadyPending(CommunityAddress),
}

/// Per-path forwarding state at one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteEntry {
    pub destination: CommunityAddress,
    /// Toward the target; `None` at the target itself.
    pub next_hop: Option<CommunityAddress>,
    /// Toward the origin; `None` at the origin itself.
    pub predecessor: Option<CommunityAddress>,
    /// Hops of the whole path, origin to target.
    pub hop_count: u8,
    pub last_refreshed: SimTime,
    pub full_path: Vec<CommunityAddress>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ReverseRoute {
    via: CommunityAddress,
    recorded_at: SimTime,
}

#[derive(Debug, Clone)]
struct PendingDiscovery {
    target: CommunityAddress,
}

#[derive(Debug, Clone)]
struct Monitor {
    next_hop: CommunityAddress,
    generation: u64,
    next_seq: u32,
    outstanding: BTreeSet<u32>,
    misses: u32,
    /// Set at intermediates, which only keep monitoring while upstream does.
    last_upstream: Option<SimTime>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Timer {
    DiscoveryTimeout(RequestId),
    HeartbeatTick {
        path: PathId,
        generation: u64,
    },
    AckDeadline {
        path: PathId,
        generation: u64,
        seq: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    NoRoute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Notification {
    DiscoveryResolved {
        request: RequestId,
        reply: PathReply,
    },
    DiscoveryTimedOut {
        request: RequestId,
        target: CommunityAddress,
    },
    /// A path this node was on is gone. `rediscovery` is the discovery now
    /// pending at this node toward the path target, if any.
    PathLost {
        path: PathId,
        broken_at: CommunityAddress,
        detected_here: bool,
        rediscovery: Option<RequestId>,
    },
    MediaDelivered {
        path: PathId,
        from: CommunityAddress,
        packet: MediaPacket,
    },
    MediaDropped {
        path: PathId,
        dst: CommunityAddress,
        packet: MediaPacket,
        reason: DropReason,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Broadcast {
        message: Message,
        relayed: bool,
    },
    Unicast {
        to: CommunityAddress,
        message: Message,
        relayed: bool,
    },
    SetTimer {
        after: SimDuration,
        timer: Timer,
    },
    Notify(Notification),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoutingStats {
    pub requests_originated: u64,
    pub rebroadcasts: u64,
    pub replies_sent: u64,
    pub relay_replies: u64,
    pub duplicates_dropped: u64,
    pub budget_drops: u64,
    pub routing_losses: u64,
    pub heartbeats_sent: u64,
    pub acks_received: u64,
    pub path_losses_detected: u64,
}

/// On-demand routing state machine for one node.
///
/// The node never touches a clock or a socket: every entry point takes the
/// current time and returns the [`Action`]s the caller must carry out.
#[derive(Debug, Clone)]
pub struct RoutingNode {
    addr: CommunityAddress,
    config: RoutingConfig,
    next_request_seq: u32,
    seen: BTreeMap<RequestId, SimTime>,
    reverse: BTreeMap<RequestId, ReverseRoute>,
    replies_forwarded: BTreeSet<RequestId>,
    pending: BTreeMap<RequestId, PendingDiscovery>,
    routes: BTreeMap<PathId, RouteEntry>,
    monitors: BTreeMap<PathId, Monitor>,
    monitor_generation: u64,
    forwarded: BTreeMap<PathId, u64>,
    stats: RoutingStats,
}

impl RoutingNode {
    pub fn new(addr: CommunityAddress, config: RoutingConfig) -> Self {
        RoutingNode {
            addr,
            config,
            next_request_seq: 0,
            seen: BTreeMap::new(),
            reverse: BTreeMap::new(),
            replies_forwarded: BTreeSet::new(),
            pending: BTreeMap::new(),
            routes: BTreeMap::new(),
            monitors: BTreeMap::new(),
            monitor_generation: 0,
            forwarded: BTreeMap::new(),
            stats: RoutingStats::default(),
        }
    }

    pub fn addr(&self) -> CommunityAddress {
        self.addr
    }

    pub fn config(&self) -> &RoutingConfig {
        &self.config
    }

    pub fn stats(&self) -> RoutingStats {
        self.stats
    }

    pub fn route(&self, path: PathId) -> Option<&RouteEntry> {
        self.routes.get(&path)
    }

    pub fn routes(&self) -> impl Iterator<Item = (&PathId, &RouteEntry)> {
        self.routes.iter()
    }

    pub fn forwarded(&self, path: PathId) -> u64 {
        self.forwarded.get(&path).copied().unwrap_or(0)
    }

    pub fn pending_for(&self, target: CommunityAddress) -> Option<RequestId> {
        self.pending
            .iter()
            .find(|(_, p)| p.target == target)
            .map(|(id, _)| *id)
    }

    pub fn is_monitoring(&self, path: PathId) -> bool {
        self.monitors.contains_key(&path)
    }

    /// Broadcasts a fresh request toward `target`.
    pub fn initiate_discovery(
        &mut self,
        now: SimTime,
        target: CommunityAddress,
    ) -> Result<(RequestId, Vec<Action>), RoutingError> {
        if target == self.addr {
            return Err(RoutingError::SelfTarget);
        }
        if self.pending_for(target).is_some() {
            return Err(RoutingError::AlreadyPending(target));
        }
        let request_id = RequestId {
            origin: self.addr,
            seq: self.next_request_seq,
        };
        self.next_request_seq += 1;
        self.pending.insert(request_id, PendingDiscovery { target });
        self.seen.insert(request_id, now);
        self.stats.requests_originated += 1;
        let req = PathRequest {
            request_id,
            target,
            hop_budget: self.config.hop_budget,
            traversed_path: vec![self.addr],
        };
        Ok((
            request_id,
            vec![
                Action::Broadcast {
                    message: Message::PathRequest(req),
                    relayed: false,
                },
                Action::SetTimer {
                    after: self.config.discovery_timeout,
                    timer: Timer::DiscoveryTimeout(request_id),
                },
            ],
        ))
    }

    pub fn handle_message(
        &mut self,
        now: SimTime,
        from: CommunityAddress,
        msg: Message,
    ) -> Vec<Action> {
        match msg {
            Message::PathRequest(req) => self.handle_path_request(now, from, req),
            Message::PathReply(rep) => self.handle_path_reply(now, from, rep),
            Message::Heartbeat(hb) => self.handle_heartbeat(now, from, hb),
            Message::HeartbeatAck(hb) => self.handle_heartbeat_ack(now, from, hb),
            Message::PathError(err) => self.handle_path_error(now, from, err),
            Message::Media(frame) => self.handle_media(now, from, frame),
        }
    }

    pub fn handle_timer(&mut self, now: SimTime, timer: Timer) -> Vec<Action> {
        match timer {
            Timer::DiscoveryTimeout(request) => match self.pending.remove(&request) {
                Some(p) => vec![Action::Notify(Notification::DiscoveryTimedOut {
                    request,
                    target: p.target,
                })],
                None => Vec::new(),
            },
            Timer::HeartbeatTick { path, generation } => self.heartbeat_tick(now, path, generation),
            Timer::AckDeadline {
                path,
                generation,
                seq,
            } => self.ack_deadline(now, path, generation, seq),
        }
    }

    fn expire_caches(&mut self, now: SimTime) {
        let lifetime = self.config.seen_lifetime();
        self.seen
            .retain(|_, at| now.saturating_since(*at) <= lifetime);
        self.reverse
            .retain(|_, r| now.saturating_since(r.recorded_at) <= lifetime);
        let seen = &self.seen;
        self.replies_forwarded.retain(|id| seen.contains_key(id));
    }

    fn record_reverse(&mut self, now: SimTime, request: RequestId, via: CommunityAddress) {
        self.reverse.entry(request).or_insert(ReverseRoute {
            via,
            recorded_at: now,
        });
    }

    /// A fresh cached route to `target` this node could splice into a reply,
    /// returned as (path id, downstream part starting at this node).
    fn relay_candidate(
        &self,
        now: SimTime,
        req: &PathRequest,
    ) -> Option<(CommunityAddress, Vec<CommunityAddress>)> {
        let staleness = self.config.relay_staleness();
        self.routes
            .iter()
            .filter(|(id, r)| {
                r.destination == req.target
                    && id.origin != req.origin()
                    && r.next_hop.is_some()
                    && now.saturating_since(r.last_refreshed) <= staleness
            })
            .filter_map(|(_, r)| {
                let idx = r.full_path.iter().position(|a| *a == self.addr)?;
                let downstream = r.full_path[idx..].to_vec();
                let spliced_len = req.traversed_path.len() + downstream.len();
                let loop_free = downstream.iter().all(|a| !req.traversed_path.contains(a));
                (loop_free && spliced_len <= self.config.max_path_nodes())
                    .then(|| (r.next_hop.unwrap(), downstream))
            })
            .min_by_key(|(_, d)| d.len())
    }

    fn handle_path_request(
        &mut self,
        now: SimTime,
        from: CommunityAddress,
        req: PathRequest,
    ) -> Vec<Action> {
        let well_formed = req.traversed_path.first() == Some(&req.origin())
            && req.traversed_path.last() == Some(&from)
            && !has_duplicates(&req.traversed_path)
            && req.hop_budget <= self.config.hop_budget
            && req.traversed_path.len() < self.config.max_path_nodes();
        if !well_formed || req.origin() == self.addr || req.traversed_path.contains(&self.addr) {
            return Vec::new();
        }
        self.expire_caches(now);
        let first_copy = !self.seen.contains_key(&req.request_id);

        if req.target == self.addr {
            // Every copy is answered; the origin keeps whichever reply lands first.
            self.seen.entry(req.request_id).or_insert(now);
            self.record_reverse(now, req.request_id, from);
            let mut full_path = req.traversed_path.clone();
            full_path.push(self.addr);
            let path_id = PathId::for_request(req.request_id, self.addr);
            self.routes.entry(path_id).or_insert(RouteEntry {
                destination: self.addr,
                next_hop: None,
                predecessor: Some(from),
                hop_count: (full_path.len() - 1) as u8,
                last_refreshed: now,
                full_path: full_path.clone(),
            });
            self.stats.replies_sent += 1;
            let reply = PathReply {
                request_id: req.request_id,
                responder: self.addr,
                target: self.addr,
                full_path,
                served_by_relay: false,
            };
            return vec![Action::Unicast {
                to: from,
                message: Message::PathReply(reply),
                relayed: false,
            }];
        }

        if !first_copy {
            self.stats.duplicates_dropped += 1;
            return Vec::new();
        }
        self.seen.insert(req.request_id, now);

        if let Some((next_hop, downstream)) = self.relay_candidate(now, &req) {
            self.record_reverse(now, req.request_id, from);
            let mut full_path = req.traversed_path.clone();
            full_path.extend_from_slice(&downstream);
            let path_id = PathId::for_request(req.request_id, req.target);
            self.routes.insert(
                path_id,
                RouteEntry {
                    destination: req.target,
                    next_hop: Some(next_hop),
                    predecessor: Some(from),
                    hop_count: (full_path.len() - 1) as u8,
                    last_refreshed: now,
                    full_path: full_path.clone(),
                },
            );
            self.replies_forwarded.insert(req.request_id);
            self.stats.relay_replies += 1;
            let reply = PathReply {
                request_id: req.request_id,
                responder: self.addr,
                target: req.target,
                full_path,
                served_by_relay: true,
            };
            return vec![
                Action::Unicast {
                    to: from,
                    message: Message::PathReply(reply.clone()),
                    relayed: false,
                },
                Action::Unicast {
                    to: next_hop,
                    message: Message::PathReply(reply),
                    relayed: false,
                },
            ];
        }

        if req.hop_budget == 0 {
            self.stats.budget_drops += 1;
            return Vec::new();
        }
        self.record_reverse(now, req.request_id, from);
        let mut fwd = req;
        fwd.hop_budget -= 1;
        fwd.traversed_path.push(self.addr);
        self.stats.rebroadcasts += 1;
        vec![Action::Broadcast {
            message: Message::PathRequest(fwd),
            relayed: true,
        }]
    }

    fn handle_path_reply(
        &mut self,
        now: SimTime,
        from: CommunityAddress,
        rep: PathReply,
    ) -> Vec<Action> {
        let path = &rep.full_path;
        if has_duplicates(path)
            || path.len() < 2
            || path.len() > self.config.max_path_nodes()
            || path.first() != Some(&rep.request_id.origin)
            || path.last() != Some(&rep.target)
        {
            return Vec::new();
        }
        let (Some(idx), Some(resp_idx)) = (
            path.iter().position(|a| *a == self.addr),
            path.iter().position(|a| *a == rep.responder),
        ) else {
            return Vec::new();
        };
        let path_id = rep.path_id();
        let hop_count = (path.len() - 1) as u8;

        if idx > resp_idx {
            // Downstream leg of a relay reply: install state toward the target.
            if path[idx - 1] != from {
                return Vec::new();
            }
            let next_hop = path.get(idx + 1).copied();
            self.routes.entry(path_id).or_insert(RouteEntry {
                destination: rep.target,
                next_hop,
                predecessor: Some(from),
                hop_count,
                last_refreshed: now,
                full_path: path.clone(),
            });
            return match next_hop {
                Some(to) => vec![Action::Unicast {
                    to,
                    message: Message::PathReply(rep),
                    relayed: true,
                }],
                None => Vec::new(),
            };
        }
        if idx == resp_idx || path[idx + 1] != from {
            return Vec::new();
        }

        if idx == 0 {
            if self.pending.remove(&rep.request_id).is_none() {
                return Vec::new();
            }
            self.routes.insert(
                path_id,
                RouteEntry {
                    destination: rep.target,
                    next_hop: Some(path[1]),
                    predecessor: None,
                    hop_count,
                    last_refreshed: now,
                    full_path: path.clone(),
                },
            );
            return vec![Action::Notify(Notification::DiscoveryResolved {
                request: rep.request_id,
                reply: rep,
            })];
        }

        self.expire_caches(now);
        if self.replies_forwarded.contains(&rep.request_id) {
            return Vec::new();
        }
        let Some(reverse) = self.reverse.get(&rep.request_id).copied() else {
            return Vec::new();
        };
        if reverse.via != path[idx - 1] {
            return Vec::new();
        }
        self.replies_forwarded.insert(rep.request_id);
        self.routes.insert(
            path_id,
            RouteEntry {
                destination: rep.target,
                next_hop: Some(from),
                predecessor: Some(reverse.via),
                hop_count,
                last_refreshed: now,
                full_path: path.clone(),
            },
        );
        vec![Action::Unicast {
            to: reverse.via,
            message: Message::PathReply(rep),
            relayed: true,
        }]
    }

    /// Begins heartbeating toward the next hop of `path`. Used by the path
    /// initiator; intermediates start on their own when heartbeats arrive.
    pub fn start_heartbeat(&mut self, now: SimTime, path: PathId) -> Vec<Action> {
        self.start_monitor(now, path, None)
    }

    pub fn stop_heartbeat(&mut self, path: PathId) {
        self.monitors.remove(&path);
    }

    fn start_monitor(
        &mut self,
        now: SimTime,
        path: PathId,
        upstream: Option<SimTime>,
    ) -> Vec<Action> {
        let Some(next_hop) = self.routes.get(&path).and_then(|r| r.next_hop) else {
            return Vec::new();
        };
        if self.monitors.contains_key(&path) {
            return Vec::new();
        }
        self.monitor_generation += 1;
        let generation = self.monitor_generation;
        self.monitors.insert(
            path,
            Monitor {
                next_hop,
                generation,
                next_seq: 0,
                outstanding: BTreeSet::new(),
                misses: 0,
                last_upstream: upstream,
            },
        );
        self.heartbeat_tick(now, path, generation)
    }

    fn heartbeat_tick(&mut self, now: SimTime, path: PathId, generation: u64) -> Vec<Action> {
        let silence = self.config.upstream_silence_limit();
        let Some(m) = self
            .monitors
            .get_mut(&path)
            .filter(|m| m.generation == generation)
        else {
            return Vec::new();
        };
        if let Some(last) = m.last_upstream {
            if now.saturating_since(last) > silence {
                self.monitors.remove(&path);
                return Vec::new();
            }
        }
        let seq = m.next_seq;
        m.next_seq += 1;
        m.outstanding.insert(seq);
        let to = m.next_hop;
        self.stats.heartbeats_sent += 1;
        vec![
            Action::Unicast {
                to,
                message: Message::Heartbeat(Heartbeat { path, seq }),
                relayed: false,
            },
            Action::SetTimer {
                after: self.config.heartbeat_ack_timeout,
                timer: Timer::AckDeadline {
                    path,
                    generation,
                    seq,
                },
            },
            Action::SetTimer {
                after: self.config.heartbeat_interval,
                timer: Timer::HeartbeatTick { path, generation },
            },
        ]
    }

    fn ack_deadline(
        &mut self,
        now: SimTime,
        path: PathId,
        generation: u64,
        seq: u32,
    ) -> Vec<Action> {
        let threshold = self.config.miss_threshold;
        let Some(m) = self
            .monitors
            .get_mut(&path)
            .filter(|m| m.generation == generation)
        else {
            return Vec::new();
        };
        if !m.outstanding.remove(&seq) {
            return Vec::new();
        }
        m.misses += 1;
        if m.misses < threshold {
            return Vec::new();
        }
        let broken_at = m.next_hop;
        self.stats.path_losses_detected += 1;
        self.path_lost(now, path, broken_at, true)
    }

    /// Tears down `path` here, notifies the predecessor and makes sure a
    /// discovery toward the target is pending when this node detected the
    /// break or originated the path.
    fn path_lost(
        &mut self,
        now: SimTime,
        path: PathId,
        broken_at: CommunityAddress,
        detected_here: bool,
    ) -> Vec<Action> {
        self.monitors.remove(&path);
        let Some(route) = self.routes.remove(&path) else {
            return Vec::new();
        };
        let mut actions = Vec::new();
        if let Some(pred) = route.predecessor {
            actions.push(Action::Unicast {
                to: pred,
                message: Message::PathError(PathError { path, broken_at }),
                relayed: !detected_here,
            });
        }
        let rediscovery = if detected_here || route.predecessor.is_none() {
            match self.pending_for(path.target) {
                Some(id) => Some(id),
                None => match self.initiate_discovery(now, path.target) {
                    Ok((id, more)) => {
                        actions.extend(more);
                        Some(id)
                    }
                    Err(_) => None,
                },
            }
        } else {
            None
        };
        actions.push(Action::Notify(Notification::PathLost {
            path,
            broken_at,
            detected_here,
            rediscovery,
        }));
        actions
    }

    fn handle_heartbeat(
        &mut self,
        now: SimTime,
        from: CommunityAddress,
        hb: Heartbeat,
    ) -> Vec<Action> {
        let Some(route) = self.routes.get_mut(&hb.path) else {
            // No state for this path any more: stay silent so upstream notices.
            return Vec::new();
        };
        route.predecessor = Some(from);
        route.last_refreshed = now;
        let is_intermediate = route.next_hop.is_some();
        let mut actions = vec![Action::Unicast {
            to: from,
            message: Message::HeartbeatAck(hb),
            relayed: false,
        }];
        if is_intermediate {
            match self.monitors.get_mut(&hb.path) {
                Some(m) => {
                    if m.last_upstream.is_some() {
                        m.last_upstream = Some(now);
                    }
                }
                None => actions.extend(self.start_monitor(now, hb.path, Some(now))),
            }
        }
        actions
    }

    fn handle_heartbeat_ack(
        &mut self,
        now: SimTime,
        from: CommunityAddress,
        hb: Heartbeat,
    ) -> Vec<Action> {
        if let Some(m) = self.monitors.get_mut(&hb.path) {
            if m.next_hop == from && m.outstanding.remove(&hb.seq) {
                m.misses = 0;
                self.stats.acks_received += 1;
                if let Some(r) = self.routes.get_mut(&hb.path) {
                    r.last_refreshed = now;
                }
            }
        }
        Vec::new()
    }

    fn handle_path_error(
        &mut self,
        now: SimTime,
        from: CommunityAddress,
        err: PathError,
    ) -> Vec<Action> {
        match self.routes.get(&err.path) {
            Some(r) if r.next_hop == Some(from) => {
                self.path_lost(now, err.path, err.broken_at, false)
            }
            _ => Vec::new(),
        }
    }

    fn next_toward(&self, path: PathId, dst: CommunityAddress) -> Option<CommunityAddress> {
        let route = self.routes.get(&path)?;
        if dst == path.target {
            route.next_hop
        } else if dst == path.origin {
            route.predecessor
        } else {
            None
        }
    }

    /// Sends a locally produced frame along `path` toward `dst`.
    pub fn send_media(
        &mut self,
        path: PathId,
        dst: CommunityAddress,
        packet: MediaPacket,
    ) -> Vec<Action> {
        match self.next_toward(path, dst) {
            Some(to) => vec![Action::Unicast {
                to,
                message: Message::Media(MediaFrame { path, dst, packet }),
                relayed: false,
            }],
            None => {
                self.stats.routing_losses += 1;
                vec![Action::Notify(Notification::MediaDropped {
                    path,
                    dst,
                    packet,
                    reason: DropReason::NoRoute,
                })]
            }
        }
    }

    fn handle_media(
        &mut self,
        _now: SimTime,
        from: CommunityAddress,
        frame: MediaFrame,
    ) -> Vec<Action> {
        if frame.dst == frame.path.target {
            if let Some(r) = self.routes.get_mut(&frame.path) {
                r.predecessor = Some(from);
            }
        }
        if frame.dst == self.addr {
            return vec![Action::Notify(Notification::MediaDelivered {
                path: frame.path,
                from,
                packet: frame.packet,
            })];
        }
        match self.next_toward(frame.path, frame.dst) {
            Some(to) => {
                *self.forwarded.entry(frame.path).or_default() += 1;
                vec![Action::Unicast {
                    to,
                    message: Message::Media(frame),
                    relayed: true,
                }]
            }
            None => {
                self.stats.routing_losses += 1;
                vec![Action::Notify(Notification::MediaDropped {
                    path: frame.path,
                    dst: frame.dst,
                    packet: frame.packet,
                    reason: DropReason::NoRoute,
                })]
            }
        }
    }
}
