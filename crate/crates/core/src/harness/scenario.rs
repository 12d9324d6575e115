use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::address::{AddressPlan, CommunityAddress, PhoneNumber};
use crate::routing::RoutingConfig;
use crate::session::SessionConfig;
use crate::sim::{SimDuration, SimTime};
use crate::topology::{
    AdHocMode, LinkModel, NodeKinematics, NodeProfile, Position, TopologyConfig, Waypoint,
};

/// One semantic problem, located by a dotted path such as `call[2].callee`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub at: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.at, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{} validation error(s):\n{}", .0.len(), .0.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Issue>),
}

impl ScenarioError {
    pub fn issues(&self) -> &[Issue] {
        match self {
            ScenarioError::Invalid(v) => v,
            _ => &[],
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    scenario: RawHeader,
    #[serde(default)]
    link: RawLinks,
    #[serde(default)]
    protocol: RawProtocol,
    #[serde(default)]
    node: Vec<RawNode>,
    #[serde(default)]
    call: Vec<RawCall>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHeader {
    name: Option<String>,
    seed: Option<u64>,
    horizon_s: f64,
    mode: Option<String>,
    address_prefix: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLinks {
    wlan: Option<RawRadio>,
    bluetooth: Option<RawRadio>,
    gsm: Option<RawGsm>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRadio {
    range_m: Option<f64>,
    latency_ms: Option<f64>,
    jitter_ms: Option<f64>,
    loss: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGsm {
    setup_s: Option<f64>,
    delay_ms: Option<f64>,
    jitter_ms: Option<f64>,
    loss: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProtocol {
    hop_budget: Option<u8>,
    discovery_timeout_ms: Option<f64>,
    heartbeat_interval_ms: Option<f64>,
    heartbeat_ack_timeout_ms: Option<f64>,
    miss_threshold: Option<u32>,
    monitor_interval_ms: Option<f64>,
    playout_depth_ms: Option<f64>,
    frame_interval_ms: Option<f64>,
    payload_bytes: Option<u16>,
    busy_delay_max_ms: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    name: Option<String>,
    number: String,
    position: Option<[f64; 2]>,
    waypoints: Option<Vec<[f64; 3]>>,
    gsm_coverage: Option<bool>,
    busy: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCall {
    label: Option<String>,
    caller: String,
    callee: String,
    dial_s: f64,
    hangup_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub name: Option<String>,
    pub number: PhoneNumber,
    pub addr: CommunityAddress,
    pub profile: NodeProfile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSpec {
    pub label: String,
    pub caller: CommunityAddress,
    pub callee: CommunityAddress,
    pub dial_at: SimTime,
    pub hangup_at: SimTime,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub horizon: SimTime,
    pub topology: TopologyConfig,
    pub routing: RoutingConfig,
    pub session: SessionConfig,
    /// Upper end of the uniform extra forwarding delay at busy relays.
    pub busy_delay_max: SimDuration,
    pub nodes: Vec<NodeSpec>,
    pub calls: Vec<CallSpec>,
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Scenario::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let raw: RawScenario =
            toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        Validator::default().run(raw)
    }

    pub fn node(&self, addr: CommunityAddress) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.addr == addr)
    }
}

/// Seconds or milliseconds as written in the file, converted to whole
/// microseconds (rounded to nearest).
fn to_micros(value: f64, unit_us: f64) -> Option<u64> {
    let us = (value * unit_us).round();
    (value.is_finite() && value >= 0.0 && us <= u64::MAX as f64).then_some(us as u64)
}

#[derive(Default)]
struct Validator {
    issues: Vec<Issue>,
}

impl Validator {
    fn issue(&mut self, at: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            at: at.into(),
            message: message.into(),
        });
    }

    fn dur(
        &mut self,
        at: &str,
        value: Option<f64>,
        unit_us: f64,
        default: SimDuration,
    ) -> SimDuration {
        match value {
            None => default,
            Some(v) => match to_micros(v, unit_us) {
                Some(us) => SimDuration::from_micros(us),
                None => {
                    self.issue(
                        at,
                        format!("must be a finite, non-negative number (got {v})"),
                    );
                    default
                }
            },
        }
    }

    fn positive(&mut self, at: &str, d: SimDuration) {
        if d == SimDuration::ZERO {
            self.issue(at, "must be greater than zero");
        }
    }

    fn probability(&mut self, at: &str, value: Option<f64>, default: f64) -> f64 {
        match value {
            Some(p) if !(0.0..=1.0).contains(&p) => {
                self.issue(at, format!("must lie in [0, 1] (got {p})"));
                default
            }
            Some(p) => p,
            None => default,
        }
    }

    fn radio(&mut self, at: &str, raw: Option<RawRadio>, mut model: LinkModel) -> LinkModel {
        let raw = raw.unwrap_or_default();
        if let Some(r) = raw.range_m {
            if r.is_finite() && r > 0.0 {
                model.radio_range_m = r;
            } else {
                self.issue(
                    format!("{at}.range_m"),
                    format!("must be positive (got {r})"),
                );
            }
        }
        model.latency_mean = self.dur(
            &format!("{at}.latency_ms"),
            raw.latency_ms,
            1e3,
            model.latency_mean,
        );
        model.latency_jitter = self.dur(
            &format!("{at}.jitter_ms"),
            raw.jitter_ms,
            1e3,
            model.latency_jitter,
        );
        model.loss_probability =
            self.probability(&format!("{at}.loss"), raw.loss, model.loss_probability);
        model
    }

    fn run(mut self, raw: RawScenario) -> Result<Scenario, ScenarioError> {
        let h = &raw.scenario;
        let horizon = match to_micros(h.horizon_s, 1e6) {
            Some(us) if us > 0 => SimTime::from_micros(us),
            _ => {
                self.issue(
                    "scenario.horizon_s",
                    format!("must be positive (got {})", h.horizon_s),
                );
                SimTime::ZERO
            }
        };
        let mode = match h.mode.as_deref().map(str::parse::<AdHocMode>) {
            None => AdHocMode::default(),
            Some(Ok(m)) => m,
            Some(Err(e)) => {
                self.issue("scenario.mode", e);
                AdHocMode::default()
            }
        };
        let plan = match h.address_prefix.as_deref().map(AddressPlan::new) {
            None => AddressPlan::default(),
            Some(Ok(p)) => p,
            Some(Err(e)) => {
                self.issue("scenario.address_prefix", e.to_string());
                AddressPlan::default()
            }
        };

        let wlan = self.radio("link.wlan", raw.link.wlan, LinkModel::wlan());
        let bluetooth = self.radio("link.bluetooth", raw.link.bluetooth, LinkModel::bluetooth());
        let mut gsm = LinkModel::gsm();
        let g = raw.link.gsm.unwrap_or_default();
        gsm.gsm_setup_time = self.dur("link.gsm.setup_s", g.setup_s, 1e6, gsm.gsm_setup_time);
        gsm.gsm_one_way_delay =
            self.dur("link.gsm.delay_ms", g.delay_ms, 1e3, gsm.gsm_one_way_delay);
        gsm.latency_mean = gsm.gsm_one_way_delay;
        gsm.latency_jitter = self.dur("link.gsm.jitter_ms", g.jitter_ms, 1e3, gsm.latency_jitter);
        gsm.loss_probability = self.probability("link.gsm.loss", g.loss, gsm.loss_probability);

        let p = raw.protocol;
        let rd = RoutingConfig::default();
        let sd = SessionConfig::default();
        let routing = RoutingConfig {
            hop_budget: p.hop_budget.unwrap_or(rd.hop_budget),
            discovery_timeout: self.dur(
                "protocol.discovery_timeout_ms",
                p.discovery_timeout_ms,
                1e3,
                rd.discovery_timeout,
            ),
            heartbeat_interval: self.dur(
                "protocol.heartbeat_interval_ms",
                p.heartbeat_interval_ms,
                1e3,
                rd.heartbeat_interval,
            ),
            miss_threshold: p.miss_threshold.unwrap_or(rd.miss_threshold),
            heartbeat_ack_timeout: self.dur(
                "protocol.heartbeat_ack_timeout_ms",
                p.heartbeat_ack_timeout_ms,
                1e3,
                rd.heartbeat_ack_timeout,
            ),
        };
        self.positive("protocol.discovery_timeout_ms", routing.discovery_timeout);
        self.positive("protocol.heartbeat_interval_ms", routing.heartbeat_interval);
        self.positive(
            "protocol.heartbeat_ack_timeout_ms",
            routing.heartbeat_ack_timeout,
        );
        if routing.miss_threshold == 0 {
            self.issue("protocol.miss_threshold", "must be at least 1");
        }
        if routing.hop_budget > 30 {
            self.issue("protocol.hop_budget", "must be at most 30");
        }
        let session = SessionConfig {
            frame_interval: self.dur(
                "protocol.frame_interval_ms",
                p.frame_interval_ms,
                1e3,
                sd.frame_interval,
            ),
            payload_size: p.payload_bytes.unwrap_or(sd.payload_size),
            playout_depth: self.dur(
                "protocol.playout_depth_ms",
                p.playout_depth_ms,
                1e3,
                sd.playout_depth,
            ),
            monitor_interval: self.dur(
                "protocol.monitor_interval_ms",
                p.monitor_interval_ms,
                1e3,
                sd.monitor_interval,
            ),
            gsm_setup_time: gsm.gsm_setup_time,
        };
        self.positive("protocol.frame_interval_ms", session.frame_interval);
        self.positive("protocol.monitor_interval_ms", session.monitor_interval);
        let busy_delay_max = self.dur(
            "protocol.busy_delay_max_ms",
            p.busy_delay_max_ms,
            1e3,
            SimDuration::from_millis(2),
        );

        let mut nodes = Vec::new();
        let mut by_ref: BTreeMap<String, CommunityAddress> = BTreeMap::new();
        let mut seen_addr = BTreeSet::new();
        for (i, n) in raw.node.into_iter().enumerate() {
            let at = format!("node[{i}]");
            let parsed = plan
                .parse_number(&n.number)
                .and_then(|num| plan.encode(&num).map(|a| (num, a)));
            let (number, addr) = match parsed {
                Ok(v) => v,
                Err(e) => {
                    self.issue(format!("{at}.number"), e.to_string());
                    continue;
                }
            };
            if !seen_addr.insert(addr) {
                self.issue(
                    format!("{at}.number"),
                    format!("number {} declared twice", n.number),
                );
                continue;
            }
            let kinematics = match (n.position, n.waypoints) {
                (Some([x, y]), None) if x.is_finite() && y.is_finite() => {
                    NodeKinematics::stationary(Position { x, y })
                }
                (None, Some(wps)) => {
                    let mut list = Vec::new();
                    let mut ok = true;
                    for (k, [t, x, y]) in wps.into_iter().enumerate() {
                        match to_micros(t, 1e6) {
                            Some(us) => list.push(Waypoint {
                                at: SimTime::from_micros(us),
                                position: Position { x, y },
                            }),
                            None => {
                                self.issue(
                                    format!("{at}.waypoints[{k}]"),
                                    "time must be a non-negative number of seconds",
                                );
                                ok = false;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    match NodeKinematics::new(list) {
                        Ok(k) => k,
                        Err(e) => {
                            self.issue(format!("{at}.waypoints"), e.to_string());
                            continue;
                        }
                    }
                }
                (Some(_), None) => {
                    self.issue(format!("{at}.position"), "coordinates must be finite");
                    continue;
                }
                (Some(_), Some(_)) => {
                    self.issue(at, "give either position or waypoints, not both");
                    continue;
                }
                (None, None) => {
                    self.issue(at, "missing position or waypoints");
                    continue;
                }
            };
            if let Some(name) = &n.name {
                if by_ref.insert(name.clone(), addr).is_some() {
                    self.issue(format!("{at}.name"), format!("name {name:?} used twice"));
                }
            }
            by_ref.insert(n.number.clone(), addr);
            nodes.push(NodeSpec {
                name: n.name,
                number,
                addr,
                profile: NodeProfile {
                    kinematics,
                    gsm_coverage: n.gsm_coverage.unwrap_or(true),
                    busy: n.busy.unwrap_or(false),
                },
            });
        }

        let mut calls = Vec::new();
        for (i, c) in raw.call.into_iter().enumerate() {
            let at = format!("call[{i}]");
            let endpoint = |field: &str, name: &str, v: &mut Validator| match by_ref.get(name) {
                Some(a) => Some(*a),
                None => {
                    v.issue(
                        format!("{at}.{field}"),
                        format!("references undeclared node {name:?}"),
                    );
                    None
                }
            };
            let caller = endpoint("caller", &c.caller, &mut self);
            let callee = endpoint("callee", &c.callee, &mut self);
            let dial = to_micros(c.dial_s, 1e6).map(SimTime::from_micros);
            let hangup = to_micros(c.hangup_s, 1e6).map(SimTime::from_micros);
            if dial.is_none() {
                self.issue(
                    format!("{at}.dial_s"),
                    "must be a non-negative number of seconds",
                );
            }
            if hangup.is_none() {
                self.issue(
                    format!("{at}.hangup_s"),
                    "must be a non-negative number of seconds",
                );
            }
            let (Some(caller), Some(callee), Some(dial_at), Some(hangup_at)) =
                (caller, callee, dial, hangup)
            else {
                continue;
            };
            if caller == callee {
                self.issue(at.clone(), "caller and callee are the same node");
                continue;
            }
            if dial_at >= hangup_at {
                self.issue(at.clone(), "dial_s must come before hangup_s");
                continue;
            }
            if hangup_at > horizon {
                self.issue(format!("{at}.hangup_s"), "lies beyond scenario.horizon_s");
                continue;
            }
            calls.push(CallSpec {
                label: c.label.unwrap_or_else(|| format!("call{i}")),
                caller,
                callee,
                dial_at,
                hangup_at,
            });
        }
        for (i, a) in calls.iter().enumerate() {
            for (j, b) in calls.iter().enumerate().skip(i + 1) {
                let shared = [a.caller, a.callee]
                    .iter()
                    .any(|n| *n == b.caller || *n == b.callee);
                if shared && a.dial_at < b.hangup_at && b.dial_at < a.hangup_at {
                    self.issue(
                        format!("call[{j}]"),
                        format!("overlaps call[{i}] on a shared node"),
                    );
                }
            }
        }
        let mut labels = BTreeSet::new();
        for (i, c) in calls.iter().enumerate() {
            if !labels.insert(c.label.clone()) {
                self.issue(
                    format!("call[{i}].label"),
                    format!("label {:?} used twice", c.label),
                );
            }
        }

        if !self.issues.is_empty() {
            return Err(ScenarioError::Invalid(self.issues));
        }
        Ok(Scenario {
            name: raw.scenario.name.unwrap_or_else(|| "scenario".to_string()),
            seed: raw.scenario.seed.unwrap_or(1),
            horizon,
            topology: TopologyConfig {
                mode,
                wlan,
                bluetooth,
                gsm,
            },
            routing,
            session,
            busy_delay_max,
            nodes,
            calls,
        })
    }
}
