use std::fmt;

use super::media::{MediaPacket, MediaSource};
use crate::address::CommunityAddress;
use crate::routing::{PathId, PathReply, RequestId};
use crate::sim::{SimDuration, SimTime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub frame_interval: SimDuration,
    pub payload_size: u16,
    pub playout_depth: SimDuration,
    /// How often an active call looks for a better transport.
    pub monitor_interval: SimDuration,
    pub gsm_setup_time: SimDuration,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            frame_interval: SimDuration::from_millis(20),
            payload_size: 160,
            playout_depth: SimDuration::from_millis(100),
            monitor_interval: SimDuration::from_secs(2),
            gsm_setup_time: SimDuration::from_secs(10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Idle,
    Discovering,
    ActiveCommunity,
    ActiveGsm,
    Switching,
}

impl Phase {
    pub fn is_active(self) -> bool {
        matches!(self, Phase::ActiveCommunity | Phase::ActiveGsm)
    }

    pub fn can_become(self, next: Phase) -> bool {
        use Phase::*;
        matches!(
            (self, next),
            (_, Idle)
                | (Idle, Discovering)
                | (Discovering, ActiveCommunity | ActiveGsm)
                | (ActiveCommunity | ActiveGsm, Switching)
                | (Switching, ActiveCommunity | ActiveGsm)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Idle => "IDLE",
            Phase::Discovering => "DISCOVERING",
            Phase::ActiveCommunity => "ACTIVE_COMMUNITY",
            Phase::ActiveGsm => "ACTIVE_GSM",
            Phase::Switching => "SWITCHING",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What carries a call's media.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transport {
    Community(PathId),
    Gsm,
}

impl fmt::Display for Transport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transport::Community(p) => write!(f, "community({p})"),
            Transport::Gsm => f.write_str("gsm"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Initial,
    Recovery,
    Monitor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Linger {
    StopHeartbeat(PathId),
    CloseGsm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SessionTimer {
    MediaTick,
    MonitorTick,
    GsmReady { attempt: u32 },
    Linger(Linger),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CallEvent {
    Dialed,
    Established {
        transport: Transport,
        hops: Option<u8>,
    },
    Answered {
        transport: Transport,
    },
    PathLost {
        path: PathId,
    },
    Switched {
        from: Transport,
        to: Transport,
        epoch: u32,
        hops: Option<u8>,
    },
    Failed,
    HungUp,
}

/// Requests a session makes of its node. The host carries them out and
/// feeds results back through the session's `on_*` methods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionAction {
    /// Start (or join) a discovery toward the peer, then report its id via
    /// [`CallerSession::discovery_started`].
    Discover,
    OpenGsm,
    CloseGsm,
    StartHeartbeat(PathId),
    StopHeartbeat(PathId),
    Send {
        to: CommunityAddress,
        packet: MediaPacket,
        transport: Transport,
    },
    SetTimer {
        after: SimDuration,
        timer: SessionTimer,
    },
    Log(CallEvent),
}

/// What the session may observe about its node at the moment of a call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Env {
    pub now: SimTime,
    pub has_neighbors: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallState {
    pub phase: Phase,
    pub current_path: Option<Vec<CommunityAddress>>,
    pub epoch: u32,
    pub dialed_at: SimTime,
    pub established_at: Option<SimTime>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GsmLink {
    Closed,
    Opening,
    Open,
}

#[derive(Debug, Clone, Copy)]
struct Awaiting {
    purpose: Purpose,
    request: Option<RequestId>,
}

/// Caller-side call controller.
#[derive(Debug, Clone)]
pub struct CallerSession {
    caller: CommunityAddress,
    callee: CommunityAddress,
    config: SessionConfig,
    gsm_available: bool,
    state: CallState,
    timeline: Vec<(SimTime, Phase)>,
    transport: Option<Transport>,
    hops: Option<u8>,
    awaiting: Option<Awaiting>,
    gsm: GsmLink,
    gsm_attempt: u32,
    source: Option<MediaSource>,
    failed: bool,
}

impl CallerSession {
    /// `gsm_available` is whether both ends have cellular coverage.
    pub fn new(
        caller: CommunityAddress,
        callee: CommunityAddress,
        config: SessionConfig,
        gsm_available: bool,
    ) -> Self {
        CallerSession {
            caller,
            callee,
            config,
            gsm_available,
            state: CallState {
                phase: Phase::Idle,
                current_path: None,
                epoch: 0,
                dialed_at: SimTime::ZERO,
                established_at: None,
            },
            timeline: Vec::new(),
            transport: None,
            hops: None,
            awaiting: None,
            gsm: GsmLink::Closed,
            gsm_attempt: 0,
            source: None,
            failed: false,
        }
    }

    pub fn state(&self) -> &CallState {
        &self.state
    }

    pub fn phase(&self) -> Phase {
        self.state.phase
    }

    pub fn timeline(&self) -> &[(SimTime, Phase)] {
        &self.timeline
    }

    pub fn transport(&self) -> Option<Transport> {
        self.transport
    }

    pub fn hops(&self) -> Option<u8> {
        self.hops
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn emitted(&self) -> u32 {
        self.source.as_ref().map_or(0, MediaSource::emitted)
    }

    /// Discovery the session is waiting on, if the host has bound one.
    pub fn awaiting(&self) -> Option<RequestId> {
        self.awaiting.and_then(|a| a.request)
    }

    fn set_phase(&mut self, now: SimTime, next: Phase) {
        debug_assert!(
            self.state.phase.can_become(next),
            "{} -> {}",
            self.state.phase,
            next
        );
        self.state.phase = next;
        self.timeline.push((now, next));
    }

    pub fn dial(&mut self, env: Env) -> Vec<SessionAction> {
        if self.state.phase != Phase::Idle || self.failed {
            return Vec::new();
        }
        self.state.dialed_at = env.now;
        self.set_phase(env.now, Phase::Discovering);
        let mut out = vec![SessionAction::Log(CallEvent::Dialed)];
        if env.has_neighbors {
            self.awaiting = Some(Awaiting {
                purpose: Purpose::Initial,
                request: None,
            });
            out.push(SessionAction::Discover);
        } else if self.gsm_available {
            self.open_gsm(&mut out);
        } else {
            self.fail(env.now, &mut out);
        }
        out
    }

    /// Binds the discovery the host started in response to [`SessionAction::Discover`].
    pub fn discovery_started(&mut self, request: RequestId) {
        if let Some(a) = self.awaiting.as_mut() {
            a.request = Some(request);
        }
    }

    fn open_gsm(&mut self, out: &mut Vec<SessionAction>) {
        if self.gsm != GsmLink::Closed {
            return;
        }
        self.gsm = GsmLink::Opening;
        self.gsm_attempt += 1;
        out.push(SessionAction::OpenGsm);
        out.push(SessionAction::SetTimer {
            after: self.config.gsm_setup_time,
            timer: SessionTimer::GsmReady {
                attempt: self.gsm_attempt,
            },
        });
    }

    fn fail(&mut self, now: SimTime, out: &mut Vec<SessionAction>) {
        self.failed = true;
        self.awaiting = None;
        self.set_phase(now, Phase::Idle);
        out.push(SessionAction::Log(CallEvent::Failed));
    }

    fn establish(
        &mut self,
        now: SimTime,
        transport: Transport,
        reply: Option<&PathReply>,
        out: &mut Vec<SessionAction>,
    ) {
        let phase = match transport {
            Transport::Community(_) => Phase::ActiveCommunity,
            Transport::Gsm => Phase::ActiveGsm,
        };
        self.set_phase(now, phase);
        self.state.established_at = Some(now);
        self.adopt(transport, reply);
        if let Transport::Community(p) = transport {
            out.push(SessionAction::StartHeartbeat(p));
        }
        self.source = Some(MediaSource::new(
            now,
            self.config.frame_interval,
            self.config.payload_size,
        ));
        out.push(SessionAction::Log(CallEvent::Established {
            transport,
            hops: self.hops,
        }));
        out.push(SessionAction::SetTimer {
            after: SimDuration::ZERO,
            timer: SessionTimer::MediaTick,
        });
        out.push(SessionAction::SetTimer {
            after: self.config.monitor_interval,
            timer: SessionTimer::MonitorTick,
        });
    }

    fn adopt(&mut self, transport: Transport, reply: Option<&PathReply>) {
        self.transport = Some(transport);
        self.hops = reply.map(|r| r.hop_count() as u8);
        self.state.current_path = reply.map(|r| r.full_path.clone());
    }

    fn switch_to(
        &mut self,
        now: SimTime,
        to: Transport,
        reply: Option<&PathReply>,
        out: &mut Vec<SessionAction>,
    ) {
        let Some(from) = self.transport else { return };
        if self.state.phase != Phase::Switching {
            self.set_phase(now, Phase::Switching);
        }
        self.state.epoch += 1;
        self.adopt(to, reply);
        let phase = match to {
            Transport::Community(p) => {
                out.push(SessionAction::StartHeartbeat(p));
                Phase::ActiveCommunity
            }
            Transport::Gsm => Phase::ActiveGsm,
        };
        self.set_phase(now, phase);
        let linger = self.config.playout_depth;
        match from {
            Transport::Community(p) => out.push(SessionAction::SetTimer {
                after: linger,
                timer: SessionTimer::Linger(Linger::StopHeartbeat(p)),
            }),
            Transport::Gsm => out.push(SessionAction::SetTimer {
                after: linger,
                timer: SessionTimer::Linger(Linger::CloseGsm),
            }),
        }
        if to != Transport::Gsm && self.gsm == GsmLink::Opening {
            self.gsm = GsmLink::Closed;
            out.push(SessionAction::CloseGsm);
        }
        out.push(SessionAction::Log(CallEvent::Switched {
            from,
            to,
            epoch: self.state.epoch,
            hops: self.hops,
        }));
    }

    pub fn on_discovery_resolved(
        &mut self,
        env: Env,
        request: RequestId,
        reply: &PathReply,
    ) -> Vec<SessionAction> {
        let mut out = Vec::new();
        let Some(aw) = self.awaiting.filter(|a| a.request == Some(request)) else {
            return out;
        };
        self.awaiting = None;
        let to = Transport::Community(reply.path_id());
        let hops = reply.hop_count() as u8;
        match (aw.purpose, self.state.phase) {
            (Purpose::Initial, Phase::Discovering) => {
                self.establish(env.now, to, Some(reply), &mut out)
            }
            (_, Phase::Switching) => self.switch_to(env.now, to, Some(reply), &mut out),
            (Purpose::Monitor, Phase::ActiveGsm) => {
                self.switch_to(env.now, to, Some(reply), &mut out)
            }
            (Purpose::Monitor, Phase::ActiveCommunity) if self.hops.is_some_and(|h| hops < h) => {
                self.switch_to(env.now, to, Some(reply), &mut out)
            }
            _ => {}
        }
        out
    }

    pub fn on_discovery_timed_out(&mut self, env: Env, request: RequestId) -> Vec<SessionAction> {
        let mut out = Vec::new();
        let Some(aw) = self.awaiting.filter(|a| a.request == Some(request)) else {
            return out;
        };
        self.awaiting = None;
        match (aw.purpose, self.state.phase) {
            (Purpose::Initial, Phase::Discovering) => {
                if self.gsm_available {
                    self.open_gsm(&mut out);
                } else {
                    self.fail(env.now, &mut out);
                }
            }
            (Purpose::Recovery, Phase::Switching) => {
                if self.gsm_available {
                    self.open_gsm(&mut out);
                }
                // Keep looking for a community path; whichever transport is
                // ready first wins.
                self.awaiting = Some(Awaiting {
                    purpose: Purpose::Recovery,
                    request: None,
                });
                out.push(SessionAction::Discover);
            }
            _ => {}
        }
        out
    }

    /// The node lost `path`; `rediscovery` is the discovery routing already
    /// has pending toward the callee.
    pub fn on_path_lost(
        &mut self,
        env: Env,
        path: PathId,
        rediscovery: Option<RequestId>,
    ) -> Vec<SessionAction> {
        let mut out = Vec::new();
        if self.state.phase != Phase::ActiveCommunity
            || self.transport != Some(Transport::Community(path))
        {
            return out;
        }
        self.set_phase(env.now, Phase::Switching);
        out.push(SessionAction::Log(CallEvent::PathLost { path }));
        self.awaiting = Some(Awaiting {
            purpose: Purpose::Recovery,
            request: rediscovery,
        });
        if rediscovery.is_none() {
            out.push(SessionAction::Discover);
        }
        if !env.has_neighbors && self.gsm_available {
            self.open_gsm(&mut out);
        }
        out
    }

    pub fn on_timer(&mut self, env: Env, timer: SessionTimer) -> Vec<SessionAction> {
        let mut out = Vec::new();
        if self.state.phase == Phase::Idle {
            return out;
        }
        match timer {
            SessionTimer::MediaTick => {
                let (Some(src), Some(transport)) = (self.source.as_mut(), self.transport) else {
                    return out;
                };
                let packet = src.capture(self.caller, self.callee, self.state.epoch);
                out.push(SessionAction::Send {
                    to: self.callee,
                    packet,
                    transport,
                });
                let after = src.next_capture().saturating_since(env.now);
                out.push(SessionAction::SetTimer {
                    after,
                    timer: SessionTimer::MediaTick,
                });
            }
            SessionTimer::MonitorTick => {
                out.push(SessionAction::SetTimer {
                    after: self.config.monitor_interval,
                    timer: SessionTimer::MonitorTick,
                });
                let improvable = match self.state.phase {
                    Phase::ActiveGsm => true,
                    Phase::ActiveCommunity => self.hops.is_some_and(|h| h > 1),
                    _ => false,
                };
                if improvable && self.awaiting.is_none() && env.has_neighbors {
                    self.awaiting = Some(Awaiting {
                        purpose: Purpose::Monitor,
                        request: None,
                    });
                    out.push(SessionAction::Discover);
                }
            }
            SessionTimer::GsmReady { attempt } => {
                if attempt != self.gsm_attempt || self.gsm != GsmLink::Opening {
                    return out;
                }
                self.gsm = GsmLink::Open;
                match self.state.phase {
                    Phase::Discovering => {
                        self.awaiting = None;
                        self.establish(env.now, Transport::Gsm, None, &mut out)
                    }
                    Phase::Switching => {
                        self.awaiting = None;
                        self.switch_to(env.now, Transport::Gsm, None, &mut out)
                    }
                    _ => {}
                }
            }
            SessionTimer::Linger(Linger::StopHeartbeat(p)) => {
                if self.transport != Some(Transport::Community(p)) {
                    out.push(SessionAction::StopHeartbeat(p));
                }
            }
            SessionTimer::Linger(Linger::CloseGsm) => {
                if self.transport != Some(Transport::Gsm) && self.gsm == GsmLink::Open {
                    self.gsm = GsmLink::Closed;
                    out.push(SessionAction::CloseGsm);
                }
            }
        }
        out
    }

    pub fn hangup(&mut self, now: SimTime) -> Vec<SessionAction> {
        let mut out = Vec::new();
        if self.state.phase == Phase::Idle {
            return out;
        }
        if let Some(Transport::Community(p)) = self.transport {
            out.push(SessionAction::StopHeartbeat(p));
        }
        if self.gsm != GsmLink::Closed {
            self.gsm = GsmLink::Closed;
            out.push(SessionAction::CloseGsm);
        }
        self.awaiting = None;
        self.set_phase(now, Phase::Idle);
        out.push(SessionAction::Log(CallEvent::HungUp));
        out
    }
}

/// Callee-side controller. The callee answers on the first media frame and
/// always replies over the transport of the newest epoch it has seen.
#[derive(Debug, Clone)]
pub struct CalleeSession {
    caller: CommunityAddress,
    callee: CommunityAddress,
    config: SessionConfig,
    transport: Option<Transport>,
    epoch: u32,
    source: Option<MediaSource>,
    answered_at: Option<SimTime>,
    hung_up: bool,
}

impl CalleeSession {
    pub fn new(caller: CommunityAddress, callee: CommunityAddress, config: SessionConfig) -> Self {
        CalleeSession {
            caller,
            callee,
            config,
            transport: None,
            epoch: 0,
            source: None,
            answered_at: None,
            hung_up: false,
        }
    }

    pub fn transport(&self) -> Option<Transport> {
        self.transport
    }

    pub fn answered_at(&self) -> Option<SimTime> {
        self.answered_at
    }

    pub fn emitted(&self) -> u32 {
        self.source.as_ref().map_or(0, MediaSource::emitted)
    }

    pub fn on_media(
        &mut self,
        now: SimTime,
        packet: &MediaPacket,
        via: Transport,
    ) -> Vec<SessionAction> {
        let mut out = Vec::new();
        if self.hung_up {
            return out;
        }
        match self.transport {
            None => {
                self.transport = Some(via);
                self.epoch = packet.flow.epoch;
                self.answered_at = Some(now);
                self.source = Some(MediaSource::new(
                    now,
                    self.config.frame_interval,
                    self.config.payload_size,
                ));
                out.push(SessionAction::Log(CallEvent::Answered { transport: via }));
                out.push(SessionAction::SetTimer {
                    after: SimDuration::ZERO,
                    timer: SessionTimer::MediaTick,
                });
            }
            Some(_) if packet.flow.epoch > self.epoch => {
                self.transport = Some(via);
                self.epoch = packet.flow.epoch;
            }
            Some(_) => {}
        }
        out
    }

    pub fn on_timer(&mut self, now: SimTime, timer: SessionTimer) -> Vec<SessionAction> {
        let mut out = Vec::new();
        if self.hung_up || timer != SessionTimer::MediaTick {
            return out;
        }
        let (Some(src), Some(transport)) = (self.source.as_mut(), self.transport) else {
            return out;
        };
        let packet = src.capture(self.caller, self.callee, self.epoch);
        out.push(SessionAction::Send {
            to: self.caller,
            packet,
            transport,
        });
        let after = src.next_capture().saturating_since(now);
        out.push(SessionAction::SetTimer {
            after,
            timer: SessionTimer::MediaTick,
        });
        out
    }

    pub fn hangup(&mut self) {
        self.hung_up = true;
    }
}
