use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::sim::SimDuration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkMode {
    Wlan,
    Bluetooth,
    Gsm,
}

/// The ad hoc transport active for a whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AdHocMode {
    #[default]
    Wlan,
    Bluetooth,
}

impl From<AdHocMode> for LinkMode {
    fn from(m: AdHocMode) -> Self {
        match m {
            AdHocMode::Wlan => LinkMode::Wlan,
            AdHocMode::Bluetooth => LinkMode::Bluetooth,
        }
    }
}

impl FromStr for AdHocMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "wlan" | "wifi" => Ok(AdHocMode::Wlan),
            "bluetooth" | "bt" => Ok(AdHocMode::Bluetooth),
            other => Err(format!(
                "unknown ad hoc mode {other:?} (expected wlan or bluetooth)"
            )),
        }
    }
}

impl fmt::Display for AdHocMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdHocMode::Wlan => "wlan",
            AdHocMode::Bluetooth => "bluetooth",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkModelError {
    #[error("{0:?} radio range must be positive and finite")]
    BadRange(LinkMode),
    #[error("{0:?} loss probability must lie in [0, 1]")]
    BadLoss(LinkMode),
}

/// Radio/transport parameters for one link mode.
///
/// Latency per hop is drawn uniformly from
/// `[latency_mean - latency_jitter, latency_mean + latency_jitter]`
/// (lower end clamped at zero). The GSM fields only apply to [`LinkMode::Gsm`],
/// whose per-message latency is `gsm_one_way_delay` with the same jitter rule.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkModel {
    pub mode: LinkMode,
    pub radio_range_m: f64,
    pub latency_mean: SimDuration,
    pub latency_jitter: SimDuration,
    pub loss_probability: f64,
    pub gsm_setup_time: SimDuration,
    pub gsm_one_way_delay: SimDuration,
}

impl LinkModel {
    pub fn wlan() -> Self {
        LinkModel {
            mode: LinkMode::Wlan,
            radio_range_m: 100.0,
            latency_mean: SimDuration::from_millis(5),
            latency_jitter: SimDuration::from_millis(2),
            loss_probability: 0.0,
            gsm_setup_time: SimDuration::ZERO,
            gsm_one_way_delay: SimDuration::ZERO,
        }
    }

    pub fn bluetooth() -> Self {
        LinkModel {
            mode: LinkMode::Bluetooth,
            radio_range_m: 10.0,
            ..LinkModel::wlan()
        }
    }

    pub fn gsm() -> Self {
        LinkModel {
            mode: LinkMode::Gsm,
            radio_range_m: f64::INFINITY,
            latency_mean: SimDuration::ZERO,
            latency_jitter: SimDuration::ZERO,
            loss_probability: 0.0,
            gsm_setup_time: SimDuration::from_secs(10),
            gsm_one_way_delay: SimDuration::from_millis(110),
        }
    }

    pub fn validate(&self) -> Result<(), LinkModelError> {
        if self.mode != LinkMode::Gsm
            && !(self.radio_range_m.is_finite() && self.radio_range_m > 0.0)
        {
            return Err(LinkModelError::BadRange(self.mode));
        }
        if !(0.0..=1.0).contains(&self.loss_probability) {
            return Err(LinkModelError::BadLoss(self.mode));
        }
        Ok(())
    }

    /// Base one-way latency: per-hop mean for ad hoc modes, fixed delay for GSM.
    pub fn base_latency(&self) -> SimDuration {
        match self.mode {
            LinkMode::Gsm => self.gsm_one_way_delay,
            _ => self.latency_mean,
        }
    }

    /// Inclusive bounds of the latency draw in microseconds.
    pub fn latency_bounds(&self) -> (u64, u64) {
        let mean = self.base_latency().as_micros();
        let j = self.latency_jitter.as_micros();
        (mean.saturating_sub(j), mean + j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        for m in [LinkModel::wlan(), LinkModel::bluetooth(), LinkModel::gsm()] {
            m.validate().unwrap();
        }
        assert_eq!(LinkModel::gsm().gsm_setup_time, SimDuration::from_secs(10));
        assert_eq!(LinkModel::gsm().latency_bounds(), (110_000, 110_000));
        assert_eq!(LinkModel::wlan().latency_bounds(), (3_000, 7_000));
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut m = LinkModel::wlan();
        m.radio_range_m = 0.0;
        assert_eq!(m.validate(), Err(LinkModelError::BadRange(LinkMode::Wlan)));
        let mut m = LinkModel::bluetooth();
        m.loss_probability = 1.5;
        assert_eq!(
            m.validate(),
            Err(LinkModelError::BadLoss(LinkMode::Bluetooth))
        );
    }

    #[test]
    fn jitter_larger_than_mean_clamps_at_zero() {
        let mut m = LinkModel::wlan();
        m.latency_jitter = SimDuration::from_millis(9);
        assert_eq!(m.latency_bounds(), (0, 14_000));
    }
}
