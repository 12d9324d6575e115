use crate::sim::{SimDuration, SimTime};

/// ITU-T Y.1541 style limits the report checks against.
pub const DELAY_LIMIT_MS: f64 = 100.0;
pub const JITTER_LIMIT_MS: f64 = 50.0;
pub const LOSS_LIMIT: f64 = 0.001;

/// What finally happened to one media packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fate {
    /// Still queued in the medium or held in the playout buffer.
    InFlight,
    Played,
    LostInTransit,
    LostAtPlayout,
}

/// One sent packet as seen end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketRecord {
    pub seq: u32,
    pub epoch: u32,
    pub media_timestamp: SimTime,
    pub sent_at: SimTime,
    pub arrived_at: Option<SimTime>,
    /// Position among this direction's arrivals, in dispatch order.
    pub arrival_index: Option<u64>,
    pub played_at: Option<SimTime>,
    pub fate: Fate,
}

/// RFC 3550 interarrival jitter in its integer form: the estimate is kept
/// scaled by 16 and updated with `J += |D| - ((J + 8) >> 4)`.
///
/// Besides the running value this keeps the sum of the estimate after every
/// update, so the mean estimate over the call can be reported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JitterEstimator {
    last_transit: Option<i64>,
    scaled: u64,
    pub samples: u64,
    pub scaled_sum: u128,
}

impl JitterEstimator {
    pub fn update(&mut self, transit_us: i64) {
        if let Some(last) = self.last_transit {
            let d = (transit_us - last).unsigned_abs();
            self.scaled = self.scaled + d - ((self.scaled + 8) >> 4);
            self.samples += 1;
            self.scaled_sum += self.scaled as u128;
        }
        self.last_transit = Some(transit_us);
    }

    /// Current estimate in microseconds.
    pub fn current_us(&self) -> f64 {
        self.scaled as f64 / 16.0
    }
}

/// Exact per-direction accumulators, maintained while the run progresses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DirectionTotals {
    pub sent: u64,
    pub played: u64,
    pub lost_in_transit: u64,
    pub lost_at_playout: u64,
    pub duplicates: u64,
    pub in_flight: u64,
    /// Sum over played packets of `played_at - media_timestamp`, in µs.
    pub delay_sum_us: u128,
    pub jitter: JitterEstimator,
}

impl DirectionTotals {
    /// `sent = played + lost_in_transit + lost_at_playout + duplicates + in_flight`
    pub fn conserved(&self) -> bool {
        self.sent
            == self.played
                + self.lost_in_transit
                + self.lost_at_playout
                + self.duplicates
                + self.in_flight
    }
}

/// Call-level figures as printed in the report. `None` marks an undefined
/// metric (nothing played, fewer than two arrivals, no media sent).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QosFigures {
    pub delay_ms: Option<f64>,
    pub jitter_ms: Option<f64>,
    pub loss: Option<f64>,
    pub setup_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    pub delay_ok: Option<bool>,
    pub jitter_ok: Option<bool>,
    pub loss_ok: Option<bool>,
}

impl QosFigures {
    /// Pools both directions of a call.
    pub fn from_totals(totals: &[DirectionTotals; 2], setup: Option<SimDuration>) -> Self {
        let played: u64 = totals.iter().map(|t| t.played).sum();
        let sent: u64 = totals.iter().map(|t| t.sent).sum();
        let delay_sum: u128 = totals.iter().map(|t| t.delay_sum_us).sum();
        let samples: u64 = totals.iter().map(|t| t.jitter.samples).sum();
        let jitter_sum: u128 = totals.iter().map(|t| t.jitter.scaled_sum).sum();
        QosFigures {
            delay_ms: (played > 0).then(|| delay_sum as f64 / played as f64 / 1_000.0),
            jitter_ms: (samples > 0).then(|| jitter_sum as f64 / samples as f64 / 16.0 / 1_000.0),
            loss: (sent > 0).then(|| (sent - played) as f64 / sent as f64),
            setup_s: setup.map(SimDuration::as_secs_f64),
        }
    }

    pub fn check_recommendations(&self) -> Flags {
        Flags {
            delay_ok: self.delay_ms.map(|d| d <= DELAY_LIMIT_MS),
            jitter_ok: self.jitter_ms.map(|j| j <= JITTER_LIMIT_MS),
            loss_ok: self.loss.map(|l| l <= LOSS_LIMIT),
        }
    }

    /// Mean over runs, each metric averaged over the runs where it is defined.
    pub fn mean<'a>(runs: impl IntoIterator<Item = &'a QosFigures>) -> QosFigures {
        fn avg(v: Vec<f64>) -> Option<f64> {
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        }
        let runs: Vec<&QosFigures> = runs.into_iter().collect();
        QosFigures {
            delay_ms: avg(runs.iter().filter_map(|r| r.delay_ms).collect()),
            jitter_ms: avg(runs.iter().filter_map(|r| r.jitter_ms).collect()),
            loss: avg(runs.iter().filter_map(|r| r.loss).collect()),
            setup_s: avg(runs.iter().filter_map(|r| r.setup_s).collect()),
        }
    }
}
