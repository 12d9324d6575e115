use std::fmt::Write as _;

use super::metrics::{
    DirectionTotals, Flags, PacketRecord, QosFigures, DELAY_LIMIT_MS, JITTER_LIMIT_MS, LOSS_LIMIT,
};
use super::world::Side;
use crate::address::CommunityAddress;
use crate::session::{CallEvent, Phase};
use crate::sim::SimTime;

/// Protocol-level counters gathered while a run progresses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProtocolAudit {
    pub dispatched: u64,
    pub control_messages: u64,
    /// Control messages whose carried path repeats a node.
    pub loop_violations: u64,
    /// Requests over the budget, or paths longer than the budget allows.
    pub budget_violations: u64,
    /// Largest number of times any one node re-broadcast any one request.
    pub max_rebroadcasts_per_request: u32,
    pub longest_path_nodes: usize,
    pub path_losses: u64,
    pub heartbeat_acks: u64,
    pub routing_losses: u64,
}

#[derive(Debug, Clone)]
pub struct CallReport {
    pub label: String,
    pub caller: CommunityAddress,
    pub callee: CommunityAddress,
    pub dial_at: SimTime,
    pub hangup_at: SimTime,
    pub qos: QosFigures,
    pub flags: Flags,
    /// Indexed by [`crate::session::Direction::index`].
    pub totals: [DirectionTotals; 2],
    pub timeline: Vec<(SimTime, Phase)>,
    pub events: Vec<(SimTime, Side, CallEvent)>,
    pub failed: bool,
    /// Hop count of the first community path, if the call started on one.
    pub initial_hops: Option<u8>,
    /// First media packet the callee could play.
    pub first_playable: Option<SimTime>,
    /// Every sent packet, indexed by seq, per direction.
    pub packets: [Vec<PacketRecord>; 2],
}

impl CallReport {
    /// Phase the caller was in at `t`.
    pub fn phase_at(&self, t: SimTime) -> Phase {
        self.timeline
            .iter()
            .take_while(|(at, _)| *at <= t)
            .last()
            .map_or(Phase::Idle, |(_, p)| *p)
    }

    /// First time the caller entered `phase` at or after `from`.
    pub fn entered(&self, phase: Phase, from: SimTime) -> Option<SimTime> {
        self.timeline
            .iter()
            .find(|(t, p)| *p == phase && *t >= from)
            .map(|(t, _)| *t)
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub calls: Vec<CallReport>,
    pub audit: ProtocolAudit,
    /// Event trace, when requested.
    pub trace: Option<String>,
}

impl RunReport {
    pub fn call(&self, label: &str) -> Option<&CallReport> {
        self.calls.iter().find(|c| c.label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
}

fn num(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "n/a",
    }
}

fn table(out: &mut String, labels: &[&str], figures: &[QosFigures]) {
    let mut rows: Vec<(&str, Vec<String>, String)> = vec![
        (
            "Delay (ms)",
            figures.iter().map(|q| num(q.delay_ms)).collect(),
            format!("{DELAY_LIMIT_MS:.0}"),
        ),
        (
            "Jitter (ms)",
            figures.iter().map(|q| num(q.jitter_ms)).collect(),
            format!("{JITTER_LIMIT_MS:.0}"),
        ),
        (
            "Packet loss",
            figures.iter().map(|q| num(q.loss)).collect(),
            format!("{LOSS_LIMIT}"),
        ),
        (
            "Setup (s)",
            figures.iter().map(|q| num(q.setup_s)).collect(),
            "-".to_string(),
        ),
    ];
    let flags: Vec<Flags> = figures
        .iter()
        .map(QosFigures::check_recommendations)
        .collect();
    rows.push((
        "Delay ok",
        flags.iter().map(|f| flag(f.delay_ok).to_string()).collect(),
        String::new(),
    ));
    rows.push((
        "Jitter ok",
        flags
            .iter()
            .map(|f| flag(f.jitter_ok).to_string())
            .collect(),
        String::new(),
    ));
    rows.push((
        "Loss ok",
        flags.iter().map(|f| flag(f.loss_ok).to_string()).collect(),
        String::new(),
    ));

    let head_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let mut widths: Vec<usize> = labels.iter().map(|l| l.len()).collect();
    for (_, cells, _) in &rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.len());
        }
    }
    let rec_w = rows
        .iter()
        .map(|r| r.2.len())
        .max()
        .unwrap_or(0)
        .max("Recomd".len());

    let mut line = format!("{:<head_w$}", "");
    for (l, w) in labels.iter().zip(&widths) {
        let _ = write!(line, "  {l:>w$}");
    }
    let _ = write!(line, "  {:>rec_w$}", "Recomd");
    let _ = writeln!(out, "{}", line.trim_end());
    for (head, cells, rec) in &rows {
        let mut line = format!("{head:<head_w$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(line, "  {c:>w$}");
        }
        let _ = write!(line, "  {rec:>rec_w$}");
        let _ = writeln!(out, "{}", line.trim_end());
    }
}

fn secs(t: SimTime) -> String {
    format!("{:.6}", t.as_secs_f64())
}

/// Human-readable rendering of one run: QoS table, then each call's phase
/// timeline.
pub fn render_table(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {} seed {}", report.scenario, report.seed);
    let labels: Vec<&str> = report.calls.iter().map(|c| c.label.as_str()).collect();
    let figures: Vec<QosFigures> = report.calls.iter().map(|c| c.qos).collect();
    table(&mut out, &labels, &figures);
    for c in &report.calls {
        let _ = writeln!(out);
        let _ = writeln!(out, "timeline {} ({} -> {})", c.label, c.caller, c.callee);
        for (t, p) in &c.timeline {
            let _ = writeln!(out, "  {} {}", secs(*t), p.as_str());
        }
    }
    out
}

/// Per-seed tables followed by the mean over all seeds.
pub fn render_batch_table(reports: &[RunReport]) -> String {
    if let [one] = reports {
        return render_table(one);
    }
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "scenario {} seed {}", r.scenario, r.seed);
        let labels: Vec<&str> = r.calls.iter().map(|c| c.label.as_str()).collect();
        let figures: Vec<QosFigures> = r.calls.iter().map(|c| c.qos).collect();
        table(&mut out, &labels, &figures);
        let _ = writeln!(out);
    }
    if let Some(first) = reports.first() {
        let _ = writeln!(
            out,
            "scenario {} mean over {} seeds",
            first.scenario,
            reports.len()
        );
        let labels: Vec<&str> = first.calls.iter().map(|c| c.label.as_str()).collect();
        table(&mut out, &labels, &mean_figures(reports));
    }
    out
}

/// Per-call mean over runs of the same scenario.
pub fn mean_figures(reports: &[RunReport]) -> Vec<QosFigures> {
    let calls = reports.first().map_or(0, |r| r.calls.len());
    (0..calls)
        .map(|i| QosFigures::mean(reports.iter().map(|r| &r.calls[i].qos)))
        .collect()
}

const CSV_HEADER: [&str; 9] = [
    "seed",
    "call",
    "delay_ms",
    "jitter_ms",
    "loss",
    "setup_s",
    "delay_ok",
    "jitter_ok",
    "loss_ok",
];

fn csv_num(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:.6}"))
}

fn csv_flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

fn csv_row(seed: &str, label: &str, q: &QosFigures) -> [String; 9] {
    let f = q.check_recommendations();
    [
        seed.to_string(),
        label.to_string(),
        csv_num(q.delay_ms),
        csv_num(q.jitter_ms),
        csv_num(q.loss),
        csv_num(q.setup_s),
        csv_flag(f.delay_ok).to_string(),
        csv_flag(f.jitter_ok).to_string(),
        csv_flag(f.loss_ok).to_string(),
    ]
}

/// One row per (seed, call); with more than one seed, `mean` rows follow.
pub fn render_csv(reports: &[RunReport]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in reports {
        for c in &r.calls {
            w.write_record(csv_row(&r.seed.to_string(), &c.label, &c.qos))
                .expect("in-memory write");
        }
    }
    if reports.len() > 1 {
        for (c, q) in reports[0].calls.iter().zip(mean_figures(reports)) {
            w.write_record(csv_row("mean", &c.label, &q))
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn render(reports: &[RunReport], format: Format) -> String {
    match format {
        Format::Table => render_batch_table(reports),
        Format::Csv => render_csv(reports),
    }
}
