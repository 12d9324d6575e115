#![allow(dead_code)]

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::PathBuf;

use comonet::harness::{CallReport, Fate, RunOptions, RunReport, Scenario};
use comonet::session::Direction;
use comonet::sim::SimDuration;
use comonet::topology::Position;

pub fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

pub fn load(name: &str) -> Scenario {
    Scenario::load(scenario_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every scenario file shipped in the repository, sorted by name.
pub fn all_scenarios() -> Vec<(String, Scenario)> {
    let mut names: Vec<String> = std::fs::read_dir(scenario_dir())
        .expect("scenario directory")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".toml"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n))).collect()
}

pub fn run(s: &Scenario, seed: u64) -> RunReport {
    comonet::harness::run_scenario(s, seed, RunOptions::default()).expect("run")
}

pub fn run_traced(s: &Scenario, seed: u64) -> RunReport {
    comonet::harness::run_scenario(s, seed, RunOptions { trace: true }).expect("run")
}

pub fn number(i: usize) -> String {
    format!("07710{i:05}")
}

/// A static scenario with one call from node 0 to node `callee`.
pub fn static_scenario(
    name: &str,
    points: &[(f64, f64)],
    callee: usize,
    dial_s: f64,
    hangup_s: f64,
    wlan_jitter_ms: f64,
) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "[scenario]\nname = {name:?}\nhorizon_s = {}\n",
        hangup_s + 1.0
    );
    let _ = writeln!(t, "[link.wlan]\njitter_ms = {wlan_jitter_ms}\n");
    for (i, (x, y)) in points.iter().enumerate() {
        let _ = writeln!(
            t,
            "[[node]]\nname = \"n{i}\"\nnumber = \"{}\"\nposition = [{x}, {y}]\n",
            number(i)
        );
    }
    let _ = writeln!(t, "[[call]]\nlabel = \"c\"\ncaller = \"n0\"\ncallee = \"n{callee}\"\ndial_s = {dial_s}\nhangup_s = {hangup_s}");
    t
}

/// Nodes on the x axis, `spacing` apart, calling end to end.
pub fn line(nodes: usize, spacing: f64) -> Scenario {
    let points: Vec<(f64, f64)> = (0..nodes).map(|i| (i as f64 * spacing, 0.0)).collect();
    Scenario::parse(&static_scenario("line", &points, nodes - 1, 1.0, 15.0, 2.0))
        .expect("line scenario")
}

/// Link count of the shortest path between `from` and `to` in the unit-disk
/// graph, by plain breadth-first search.
pub fn bfs_hops(points: &[(f64, f64)], range: f64, from: usize, to: usize) -> Option<usize> {
    let pos: Vec<Position> = points.iter().map(|(x, y)| Position::new(*x, *y)).collect();
    let mut dist = vec![None; pos.len()];
    dist[from] = Some(0);
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        let du = dist[u].expect("visited");
        for v in 0..pos.len() {
            if v != u && dist[v].is_none() && pos[u].distance(&pos[v]) <= range {
                dist[v] = Some(du + 1);
                q.push_back(v);
            }
        }
    }
    dist[to]
}

/// Largest interval between consecutive playouts in one direction.
pub fn max_playout_gap(call: &CallReport, dir: Direction) -> SimDuration {
    let mut times: Vec<_> = call.packets[dir.index()]
        .iter()
        .filter_map(|p| p.played_at)
        .collect();
    times.sort();
    times
        .windows(2)
        .map(|w| w[1] - w[0])
        .max()
        .unwrap_or(SimDuration::ZERO)
}

/// Aggregates recomputed from the raw packet log alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Recomputed {
    pub sent: u64,
    pub played: u64,
    pub lost_in_transit: u64,
    pub lost_at_playout: u64,
    pub in_flight: u64,
    pub delay_sum_us: u128,
    pub jitter_samples: u64,
    /// Sum of the ×16 integer jitter estimate after each sample.
    pub jitter_scaled_sum: u128,
}

pub fn recompute(call: &CallReport, dir: Direction) -> Recomputed {
    let log = &call.packets[dir.index()];
    let mut r = Recomputed {
        sent: log.len() as u64,
        ..Default::default()
    };
    for p in log {
        match p.fate {
            Fate::Played => {
                r.played += 1;
                let played = p.played_at.expect("played packet has a playout time");
                r.delay_sum_us += (played.as_micros() - p.media_timestamp.as_micros()) as u128;
            }
            Fate::LostInTransit => r.lost_in_transit += 1,
            Fate::LostAtPlayout => r.lost_at_playout += 1,
            Fate::InFlight => r.in_flight += 1,
        }
    }
    let mut arrivals: Vec<_> = log
        .iter()
        .filter_map(|p| Some((p.arrival_index?, p)))
        .collect();
    arrivals.sort_by_key(|(i, _)| *i);
    let transits: Vec<i64> = arrivals
        .iter()
        .map(|(_, p)| {
            p.arrived_at.expect("arrived").as_micros() as i64 - p.media_timestamp.as_micros() as i64
        })
        .collect();
    let mut j: i64 = 0;
    for w in transits.windows(2) {
        let d = (w[1] - w[0]).abs();
        // J(i) = J(i-1) + (|D| - J(i-1)) / 16, kept in sixteenths with rounding
        j += d - (j + 8) / 16;
        r.jitter_samples += 1;
        r.jitter_scaled_sum += j as u128;
    }
    r
}

/// Pooled figures computed from [`Recomputed`] for both directions.
pub fn pooled(call: &CallReport) -> (Option<f64>, Option<f64>, Option<f64>) {
    let f = recompute(call, Direction::Forward);
    let r = recompute(call, Direction::Reverse);
    let played = f.played + r.played;
    let sent = f.sent + r.sent;
    let samples = f.jitter_samples + r.jitter_samples;
    let delay =
        (played > 0).then(|| (f.delay_sum_us + r.delay_sum_us) as f64 / played as f64 / 1_000.0);
    let jitter = (samples > 0).then(|| {
        (f.jitter_scaled_sum + r.jitter_scaled_sum) as f64 / samples as f64 / 16.0 / 1_000.0
    });
    let loss = (sent > 0).then(|| (sent - played) as f64 / sent as f64);
    (delay, jitter, loss)
}
