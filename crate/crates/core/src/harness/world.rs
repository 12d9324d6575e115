use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use super::metrics::{DirectionTotals, Fate, PacketRecord, QosFigures};
use super::report::{CallReport, ProtocolAudit, RunReport};
use super::scenario::Scenario;
use crate::address::CommunityAddress;
use crate::routing::{
    self, Action, Message, Notification, RequestId, RoutingError, RoutingNode, Timer,
};
use crate::session::{
    CallEvent, CalleeSession, CallerSession, Direction, Env, MediaPacket, Playout, PlayoutBuffer,
    Reception, SessionAction, SessionTimer, Transport,
};
use crate::sim::{
    Event, RandomStream, Scheduler, SimDuration, SimError, SimTime, StreamId, Target,
};
use crate::topology::{GsmChannel, Topology, TopologyError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record one trace line per dispatched event.
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Caller,
    Callee,
}

#[derive(Debug, Clone)]
pub enum WorldEvent {
    Dial(usize),
    Hangup(usize),
    /// A frame arriving over the ad hoc medium.
    Deliver {
        from: CommunityAddress,
        message: Message,
    },
    /// A relayed frame leaving a busy node after its extra forwarding delay.
    Transmit {
        from: CommunityAddress,
        to: Option<CommunityAddress>,
        message: Message,
    },
    GsmDeliver {
        call: usize,
        from: CommunityAddress,
        packet: MediaPacket,
    },
    RoutingTimer(Timer),
    SessionTimer {
        call: usize,
        side: Side,
        timer: SessionTimer,
    },
    Playout {
        call: usize,
        dir: Direction,
    },
}

struct CallRuntime {
    caller: CallerSession,
    callee: CalleeSession,
    gsm: Option<GsmChannel>,
    buffers: [PlayoutBuffer; 2],
    totals: [DirectionTotals; 2],
    log: [Vec<PacketRecord>; 2],
    arrivals: [u64; 2],
    events: Vec<(SimTime, Side, CallEvent)>,
    first_playable: Option<SimTime>,
}

struct WorldState {
    scenario: Scenario,
    topology: Topology,
    routers: BTreeMap<CommunityAddress, RoutingNode>,
    calls: Vec<CallRuntime>,
    busy_rng: RandomStream,
    trace: Option<String>,
    audit: ProtocolAudit,
    rebroadcasts: BTreeMap<(RequestId, CommunityAddress), u32>,
}

/// One simulation run of a scenario under a given seed.
pub struct World {
    sched: Scheduler<WorldEvent>,
    state: WorldState,
}

impl World {
    pub fn new(scenario: &Scenario, seed: u64, options: RunOptions) -> Result<World, RunError> {
        let mut topology = Topology::new(scenario.topology.clone(), seed);
        let mut routers = BTreeMap::new();
        for n in &scenario.nodes {
            topology.add_node(n.addr, n.profile.clone())?;
            routers.insert(n.addr, RoutingNode::new(n.addr, scenario.routing.clone()));
        }
        let mut sched = Scheduler::new();
        let mut calls = Vec::new();
        for (i, c) in scenario.calls.iter().enumerate() {
            let covered = topology.profile(c.caller)?.gsm_coverage
                && topology.profile(c.callee)?.gsm_coverage;
            let depth = scenario.session.playout_depth;
            calls.push(CallRuntime {
                caller: CallerSession::new(c.caller, c.callee, scenario.session.clone(), covered),
                callee: CalleeSession::new(c.caller, c.callee, scenario.session.clone()),
                gsm: None,
                buffers: [PlayoutBuffer::new(depth), PlayoutBuffer::new(depth)],
                totals: Default::default(),
                log: Default::default(),
                arrivals: [0; 2],
                events: Vec::new(),
                first_playable: None,
            });
            sched.schedule(c.dial_at, Target::Node(c.caller), WorldEvent::Dial(i))?;
            sched.schedule(c.hangup_at, Target::Node(c.caller), WorldEvent::Hangup(i))?;
        }
        Ok(World {
            sched,
            state: WorldState {
                scenario: scenario.clone(),
                topology,
                routers,
                calls,
                busy_rng: RandomStream::new(seed, StreamId::BusyForwarding),
                trace: options.trace.then(String::new),
                audit: ProtocolAudit::default(),
                rebroadcasts: BTreeMap::new(),
            },
        })
    }

    /// Runs to the scenario horizon and collects the report.
    pub fn run(mut self, seed: u64) -> Result<RunReport, RunError> {
        let horizon = self.state.scenario.horizon;
        let state = &mut self.state;
        self.sched
            .run_until(horizon, |sched, ev| state.handle(sched, ev))?;
        Ok(self.state.finish(&self.sched, seed))
    }

    pub fn routers(&self) -> &BTreeMap<CommunityAddress, RoutingNode> {
        &self.state.routers
    }
}

pub fn run_scenario(
    scenario: &Scenario,
    seed: u64,
    options: RunOptions,
) -> Result<RunReport, RunError> {
    World::new(scenario, seed, options)?.run(seed)
}

/// Runs every seed on the rayon pool; results come back in seed order.
pub fn run_batch(
    scenario: &Scenario,
    seeds: &[u64],
    options: RunOptions,
) -> Result<Vec<RunReport>, RunError> {
    seeds
        .par_iter()
        .map(|&s| run_scenario(scenario, s, options))
        .collect()
}

fn direction_of(packet: &MediaPacket, dst: CommunityAddress) -> Direction {
    if dst == packet.flow.callee {
        Direction::Forward
    } else {
        Direction::Reverse
    }
}

impl WorldState {
    fn handle(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        ev: Event<WorldEvent>,
    ) -> Result<(), SimError> {
        let node = match ev.target {
            Target::Node(a) => a,
            Target::Engine => return Ok(()),
        };
        if self.trace.is_some() {
            let line = format!(
                "{} {} {}",
                ev.fire_at.as_micros(),
                node,
                self.describe(&ev.payload)
            );
            if let Some(trace) = &mut self.trace {
                let _ = writeln!(trace, "{line}");
            }
        }
        let now = sched.now();
        match ev.payload {
            WorldEvent::Dial(i) => {
                let env = self.env(node, now);
                let acts = self.calls[i].caller.dial(env);
                self.apply_session(sched, i, Side::Caller, acts);
            }
            WorldEvent::Hangup(i) => {
                let acts = self.calls[i].caller.hangup(now);
                self.apply_session(sched, i, Side::Caller, acts);
                self.calls[i].callee.hangup();
                self.calls[i].gsm = None;
            }
            WorldEvent::Deliver { from, message } => {
                let acts = self.router(node).handle_message(now, from, message);
                self.apply_routing(sched, node, acts);
            }
            WorldEvent::Transmit { from, to, message } => self.send_now(sched, from, to, message),
            WorldEvent::GsmDeliver { call, from, packet } => {
                let dir = if from == packet.flow.caller {
                    Direction::Forward
                } else {
                    Direction::Reverse
                };
                self.receive_media(sched, call, dir, packet, Transport::Gsm);
            }
            WorldEvent::RoutingTimer(timer) => {
                let acts = self.router(node).handle_timer(now, timer);
                self.apply_routing(sched, node, acts);
            }
            WorldEvent::SessionTimer { call, side, timer } => {
                let acts = match side {
                    Side::Caller => {
                        let env = self.env(node, now);
                        self.calls[call].caller.on_timer(env, timer)
                    }
                    Side::Callee => self.calls[call].callee.on_timer(now, timer),
                };
                self.apply_session(sched, call, side, acts);
            }
            WorldEvent::Playout { call, dir } => self.play(call, dir, now),
        }
        Ok(())
    }

    fn router(&mut self, node: CommunityAddress) -> &mut RoutingNode {
        self.routers.get_mut(&node).expect("declared node")
    }

    fn env(&self, node: CommunityAddress, now: SimTime) -> Env {
        Env {
            now,
            has_neighbors: !self.topology.neighbors(node, now).is_empty(),
        }
    }

    /// The call a media packet belongs to: the latest call between its
    /// endpoints dialed no later than the packet's capture time.
    fn call_of(&self, packet: &MediaPacket) -> Option<usize> {
        self.scenario
            .calls
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.caller == packet.flow.caller
                    && c.callee == packet.flow.callee
                    && c.dial_at <= packet.media_timestamp
            })
            .max_by_key(|(_, c)| c.dial_at)
            .map(|(i, _)| i)
    }

    fn apply_routing(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        node: CommunityAddress,
        acts: Vec<Action>,
    ) {
        for act in acts {
            match act {
                Action::Broadcast { message, relayed } => {
                    self.transmit(sched, node, None, message, relayed)
                }
                Action::Unicast {
                    to,
                    message,
                    relayed,
                } => self.transmit(sched, node, Some(to), message, relayed),
                Action::SetTimer { after, timer } => {
                    sched.schedule_in(after, Target::Node(node), WorldEvent::RoutingTimer(timer));
                }
                Action::Notify(n) => self.on_notification(sched, node, n),
            }
        }
    }

    fn transmit(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        from: CommunityAddress,
        to: Option<CommunityAddress>,
        message: Message,
        relayed: bool,
    ) {
        let busy = relayed && self.topology.profile(from).is_ok_and(|p| p.busy);
        if busy {
            let extra = self
                .busy_rng
                .uniform_inclusive(0, self.scenario.busy_delay_max.as_micros());
            if extra > 0 {
                sched.schedule_in(
                    SimDuration::from_micros(extra),
                    Target::Node(from),
                    WorldEvent::Transmit { from, to, message },
                );
                return;
            }
        }
        self.send_now(sched, from, to, message);
    }

    fn send_now(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        from: CommunityAddress,
        to: Option<CommunityAddress>,
        message: Message,
    ) {
        self.audit_message(from, &message);
        let now = sched.now();
        let media = match &message {
            Message::Media(f) => Some(*f),
            _ => None,
        };
        match to {
            Some(to) => {
                let sent = self.topology.unicast(
                    sched,
                    from,
                    to,
                    WorldEvent::Deliver { from, message },
                    now,
                );
                if let (None, Some(f)) = (sent, media) {
                    self.transit_loss(&f.packet, direction_of(&f.packet, f.dst));
                }
            }
            None => {
                self.topology
                    .broadcast(sched, from, WorldEvent::Deliver { from, message }, now);
            }
        }
    }

    fn audit_message(&mut self, from: CommunityAddress, message: &Message) {
        let limit = self.scenario.routing.max_path_nodes();
        let audit = &mut self.audit;
        audit.control_messages += u64::from(!matches!(message, Message::Media(_)));
        match message {
            Message::PathRequest(r) => {
                if routing::has_duplicates(&r.traversed_path) {
                    audit.loop_violations += 1;
                }
                if r.hop_budget > self.scenario.routing.hop_budget || r.traversed_path.len() > limit
                {
                    audit.budget_violations += 1;
                }
                if from != r.origin() {
                    let n = self.rebroadcasts.entry((r.request_id, from)).or_default();
                    *n += 1;
                    audit.max_rebroadcasts_per_request = audit.max_rebroadcasts_per_request.max(*n);
                }
            }
            Message::PathReply(r) => {
                if routing::has_duplicates(&r.full_path) {
                    audit.loop_violations += 1;
                }
                if r.full_path.len() > limit {
                    audit.budget_violations += 1;
                }
                audit.longest_path_nodes = audit.longest_path_nodes.max(r.full_path.len());
            }
            _ => {}
        }
    }

    fn transit_loss(&mut self, packet: &MediaPacket, dir: Direction) {
        let Some(i) = self.call_of(packet) else {
            return;
        };
        let call = &mut self.calls[i];
        let d = dir.index();
        if let Some(rec) = call.log[d].get_mut(packet.seq as usize) {
            rec.fate = Fate::LostInTransit;
        }
        call.totals[d].lost_in_transit += 1;
    }

    fn on_notification(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        node: CommunityAddress,
        n: Notification,
    ) {
        let now = sched.now();
        match n {
            Notification::DiscoveryResolved { request, reply } => {
                for i in self.callers_at(node) {
                    if self.calls[i].caller.awaiting() == Some(request) {
                        let env = self.env(node, now);
                        let acts = self.calls[i]
                            .caller
                            .on_discovery_resolved(env, request, &reply);
                        self.apply_session(sched, i, Side::Caller, acts);
                    }
                }
            }
            Notification::DiscoveryTimedOut { request, .. } => {
                for i in self.callers_at(node) {
                    if self.calls[i].caller.awaiting() == Some(request) {
                        let env = self.env(node, now);
                        let acts = self.calls[i].caller.on_discovery_timed_out(env, request);
                        self.apply_session(sched, i, Side::Caller, acts);
                    }
                }
            }
            Notification::PathLost {
                path, rediscovery, ..
            } => {
                self.audit.path_losses += 1;
                for i in self.callers_at(node) {
                    let env = self.env(node, now);
                    let acts = self.calls[i].caller.on_path_lost(env, path, rediscovery);
                    self.apply_session(sched, i, Side::Caller, acts);
                }
            }
            Notification::MediaDelivered { path, packet, .. } => {
                let Some(i) = self.call_of(&packet) else {
                    return;
                };
                let dir = if node == packet.flow.callee {
                    Direction::Forward
                } else {
                    Direction::Reverse
                };
                self.receive_media(sched, i, dir, packet, Transport::Community(path));
            }
            Notification::MediaDropped { packet, dst, .. } => {
                self.transit_loss(&packet, direction_of(&packet, dst))
            }
        }
    }

    fn callers_at(&self, node: CommunityAddress) -> Vec<usize> {
        (0..self.calls.len())
            .filter(|&i| self.scenario.calls[i].caller == node)
            .collect()
    }

    fn apply_session(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        i: usize,
        side: Side,
        acts: Vec<SessionAction>,
    ) {
        let now = sched.now();
        let spec = &self.scenario.calls[i];
        let (me, peer) = match side {
            Side::Caller => (spec.caller, spec.callee),
            Side::Callee => (spec.callee, spec.caller),
        };
        for act in acts {
            match act {
                SessionAction::Discover => match self.router(me).initiate_discovery(now, peer) {
                    Ok((id, racts)) => {
                        self.calls[i].caller.discovery_started(id);
                        self.apply_routing(sched, me, racts);
                    }
                    Err(RoutingError::AlreadyPending(_)) => {
                        if let Some(id) = self.router(me).pending_for(peer) {
                            self.calls[i].caller.discovery_started(id);
                        }
                    }
                    Err(RoutingError::SelfTarget) => {}
                },
                SessionAction::OpenGsm => {
                    self.calls[i].gsm = self.topology.gsm_channel(me, peer, now).ok();
                }
                SessionAction::CloseGsm => self.calls[i].gsm = None,
                SessionAction::StartHeartbeat(p) => {
                    let racts = self.router(me).start_heartbeat(now, p);
                    self.apply_routing(sched, me, racts);
                }
                SessionAction::StopHeartbeat(p) => self.router(me).stop_heartbeat(p),
                SessionAction::Send {
                    to,
                    packet,
                    transport,
                } => self.send_media(sched, i, side, me, to, packet, transport),
                SessionAction::SetTimer { after, timer } => {
                    sched.schedule_in(
                        after,
                        Target::Node(me),
                        WorldEvent::SessionTimer {
                            call: i,
                            side,
                            timer,
                        },
                    );
                }
                SessionAction::Log(e) => self.calls[i].events.push((now, side, e)),
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn send_media(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        i: usize,
        side: Side,
        me: CommunityAddress,
        to: CommunityAddress,
        packet: MediaPacket,
        transport: Transport,
    ) {
        let now = sched.now();
        let dir = match side {
            Side::Caller => Direction::Forward,
            Side::Callee => Direction::Reverse,
        };
        let d = dir.index();
        {
            let call = &mut self.calls[i];
            debug_assert_eq!(call.log[d].len(), packet.seq as usize);
            call.totals[d].sent += 1;
            call.log[d].push(PacketRecord {
                seq: packet.seq,
                epoch: packet.flow.epoch,
                media_timestamp: packet.media_timestamp,
                sent_at: now,
                arrived_at: None,
                arrival_index: None,
                played_at: None,
                fate: Fate::InFlight,
            });
        }
        match transport {
            Transport::Community(path) => {
                let acts = self.router(me).send_media(path, to, packet);
                self.apply_routing(sched, me, acts);
            }
            Transport::Gsm => {
                let sent = match self.calls[i].gsm {
                    Some(ch) => matches!(
                        self.topology.gsm_send(
                            sched,
                            &ch,
                            me,
                            to,
                            WorldEvent::GsmDeliver {
                                call: i,
                                from: me,
                                packet
                            },
                            now
                        ),
                        Ok(Some(_))
                    ),
                    None => false,
                };
                if !sent {
                    self.transit_loss(&packet, dir);
                }
            }
        }
    }

    fn receive_media(
        &mut self,
        sched: &mut Scheduler<WorldEvent>,
        i: usize,
        dir: Direction,
        packet: MediaPacket,
        via: Transport,
    ) {
        let now = sched.now();
        if dir == Direction::Forward {
            let acts = self.calls[i].callee.on_media(now, &packet, via);
            self.apply_session(sched, i, Side::Callee, acts);
        }
        let receiver = match dir {
            Direction::Forward => self.scenario.calls[i].callee,
            Direction::Reverse => self.scenario.calls[i].caller,
        };
        let call = &mut self.calls[i];
        let d = dir.index();
        let reception = call.buffers[d].receive(packet, now);
        if reception == Reception::Duplicate {
            call.totals[d].duplicates += 1;
            return;
        }
        let transit = now.as_micros() as i64 - packet.media_timestamp.as_micros() as i64;
        call.totals[d].jitter.update(transit);
        let index = call.arrivals[d];
        call.arrivals[d] += 1;
        let rec = &mut call.log[d][packet.seq as usize];
        rec.arrived_at = Some(now);
        rec.arrival_index = Some(index);
        match reception {
            Reception::Late => {
                rec.fate = Fate::LostAtPlayout;
                call.totals[d].lost_at_playout += 1;
            }
            Reception::Scheduled { play_at } => {
                if dir == Direction::Forward && call.first_playable.is_none() {
                    call.first_playable = Some(now);
                }
                sched
                    .schedule(
                        play_at,
                        Target::Node(receiver),
                        WorldEvent::Playout { call: i, dir },
                    )
                    .expect("playout not in the past");
            }
            Reception::Duplicate => unreachable!(),
        }
    }

    fn play(&mut self, i: usize, dir: Direction, now: SimTime) {
        let call = &mut self.calls[i];
        let d = dir.index();
        for out in call.buffers[d].play_due(now) {
            match out {
                Playout::Played(p) => {
                    let rec = &mut call.log[d][p.packet.seq as usize];
                    rec.played_at = Some(p.played_at);
                    rec.fate = Fate::Played;
                    call.totals[d].played += 1;
                    call.totals[d].delay_sum_us +=
                        (p.played_at - p.packet.media_timestamp).as_micros() as u128;
                }
                Playout::Skipped(pkt) => {
                    call.log[d][pkt.seq as usize].fate = Fate::LostAtPlayout;
                    call.totals[d].lost_at_playout += 1;
                }
            }
        }
    }

    fn finish(mut self, sched: &Scheduler<WorldEvent>, seed: u64) -> RunReport {
        let mut in_flight: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (_, _, ev) in sched.pending() {
            let hit = match ev {
                WorldEvent::Deliver {
                    message: Message::Media(f),
                    ..
                }
                | WorldEvent::Transmit {
                    message: Message::Media(f),
                    ..
                } => self
                    .call_of(&f.packet)
                    .map(|i| (i, direction_of(&f.packet, f.dst).index())),
                WorldEvent::GsmDeliver { call, from, packet } => {
                    Some((*call, if *from == packet.flow.caller { 0 } else { 1 }))
                }
                _ => None,
            };
            if let Some(k) = hit {
                *in_flight.entry(k).or_default() += 1;
            }
        }
        let mut calls = Vec::new();
        for (i, (spec, rt)) in self
            .scenario
            .calls
            .iter()
            .zip(self.calls.iter_mut())
            .enumerate()
        {
            for d in 0..2 {
                rt.totals[d].in_flight =
                    in_flight.get(&(i, d)).copied().unwrap_or(0) + rt.buffers[d].held() as u64;
            }
            let setup = rt.first_playable.map(|t| t - spec.dial_at);
            let qos = QosFigures::from_totals(&rt.totals, setup);
            let initial_hops = rt.events.iter().find_map(|(_, _, e)| match e {
                CallEvent::Established { hops, .. } => Some(*hops),
                _ => None,
            });
            calls.push(CallReport {
                label: spec.label.clone(),
                caller: spec.caller,
                callee: spec.callee,
                dial_at: spec.dial_at,
                hangup_at: spec.hangup_at,
                flags: qos.check_recommendations(),
                qos,
                totals: rt.totals,
                timeline: rt.caller.timeline().to_vec(),
                events: rt
                    .events
                    .iter()
                    .map(|(t, s, e)| (*t, *s, e.clone()))
                    .collect(),
                failed: rt.caller.failed(),
                initial_hops: initial_hops.flatten(),
                first_playable: rt.first_playable,
                packets: std::mem::take(&mut rt.log),
            });
        }
        self.audit.dispatched = sched.dispatched();
        self.audit.heartbeat_acks = self.routers.values().map(|r| r.stats().acks_received).sum();
        self.audit.routing_losses = self
            .routers
            .values()
            .map(|r| r.stats().routing_losses)
            .sum();
        RunReport {
            scenario: self.scenario.name.clone(),
            seed,
            calls,
            audit: self.audit,
            trace: self.trace,
        }
    }

    fn describe(&self, ev: &WorldEvent) -> String {
        let label = |i: usize| self.scenario.calls[i].label.as_str();
        match ev {
            WorldEvent::Dial(i) => format!("dial call={}", label(*i)),
            WorldEvent::Hangup(i) => format!("hangup call={}", label(*i)),
            WorldEvent::Deliver { from, message } => {
                format!("rx from={from} {}", describe_message(message))
            }
            WorldEvent::Transmit { to, message, .. } => match to {
                Some(to) => format!("tx to={to} {}", describe_message(message)),
                None => format!("tx to=* {}", describe_message(message)),
            },
            WorldEvent::GsmDeliver { call, from, packet } => {
                format!(
                    "gsm-rx call={} from={from} seq={} epoch={}",
                    label(*call),
                    packet.seq,
                    packet.flow.epoch
                )
            }
            WorldEvent::RoutingTimer(t) => match t {
                Timer::DiscoveryTimeout(r) => format!("timer discovery-timeout rid={r}"),
                Timer::HeartbeatTick { path, generation } => {
                    format!("timer heartbeat path={path} gen={generation}")
                }
                Timer::AckDeadline {
                    path,
                    generation,
                    seq,
                } => {
                    format!("timer ack-deadline path={path} gen={generation} seq={seq}")
                }
            },
            WorldEvent::SessionTimer { call, side, timer } => {
                let side = match side {
                    Side::Caller => "caller",
                    Side::Callee => "callee",
                };
                let t = match timer {
                    SessionTimer::MediaTick => "media-tick".to_string(),
                    SessionTimer::MonitorTick => "monitor-tick".to_string(),
                    SessionTimer::GsmReady { attempt } => format!("gsm-ready attempt={attempt}"),
                    SessionTimer::Linger(l) => format!("linger {l:?}"),
                };
                format!("session call={} side={side} {t}", label(*call))
            }
            WorldEvent::Playout { call, dir } => {
                format!("playout call={} dir={dir:?}", label(*call))
            }
        }
    }
}

fn join_path(p: &[CommunityAddress]) -> String {
    p.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(">")
}

fn describe_message(m: &Message) -> String {
    match m {
        Message::PathRequest(r) => format!(
            "PREQ rid={} target={} budget={} path={}",
            r.request_id,
            r.target,
            r.hop_budget,
            join_path(&r.traversed_path)
        ),
        Message::PathReply(r) => format!(
            "PREP rid={} responder={} relay={} path={}",
            r.request_id,
            r.responder,
            r.served_by_relay,
            join_path(&r.full_path)
        ),
        Message::Heartbeat(h) => format!("HB path={} seq={}", h.path, h.seq),
        Message::HeartbeatAck(h) => format!("HBACK path={} seq={}", h.path, h.seq),
        Message::PathError(e) => format!("PERR path={} broken_at={}", e.path, e.broken_at),
        Message::Media(f) => format!(
            "MEDIA path={} dst={} seq={} epoch={}",
            f.path, f.dst, f.packet.seq, f.packet.flow.epoch
        ),
    }
}
