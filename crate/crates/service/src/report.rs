//! Plain-text study report.

use std::fmt::Write;

use percept_core::session::{aggregate_study, FieldSummary};
use percept_core::{mean_sus_score, sus_score, InterfaceMode, SessionLog, SusResponse};

fn opt<T: ToString>(value: Option<T>) -> String {
    value.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn summary_cell(s: &FieldSummary) -> String {
    match (s.mean, s.min, s.max) {
        (Some(mean), Some(min), Some(max)) => {
            format!("{mean:.2} [{min:.2}..{max:.2}] n={} excl={}", s.count, s.excluded)
        }
        _ => format!("- n=0 excl={}", s.excluded),
    }
}

pub fn render_report(log: &SessionLog, sus: &[SusResponse]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "SESSIONS");
    let _ = writeln!(
        out,
        "{:<16} {:<12} {:>14} {:<20} {:>6} {:>6} {:>7}",
        "session", "mode", "first_sat_ms", "intervals_ms", "viewed", "sat", "ratio"
    );
    for m in log.all_session_metrics() {
        let intervals = format!(
            "[{}]",
            m.satisfactory_intervals_ms
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        let ratio = m.satisfaction_ratio.map(|_| format!("{}/{}", m.videos_satisfactory, m.videos_viewed));
        let _ = writeln!(
            out,
            "{:<16} {:<12} {:>14} {:<20} {:>6} {:>6} {:>7}",
            m.session_id,
            opt(m.interface_mode),
            opt(m.time_to_first_satisfactory_ms),
            intervals,
            m.videos_viewed,
            m.videos_satisfactory,
            opt(ratio),
        );
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "BY MODE (mean [min..max])");
    for mode in InterfaceMode::ALL {
        let Ok(s) = aggregate_study(log, mode) else {
            let _ = writeln!(out, "{mode}: no sessions");
            continue;
        };
        let _ = writeln!(out, "{mode}: {} session(s)", s.sessions);
        let _ = writeln!(out, "  time_to_first_satisfactory_ms  {}", summary_cell(&s.time_to_first_satisfactory_ms));
        let _ = writeln!(out, "  satisfactory_interval_ms       {}", summary_cell(&s.satisfactory_interval_ms));
        let _ = writeln!(out, "  videos_viewed                  {}", summary_cell(&s.videos_viewed));
        let _ = writeln!(out, "  videos_satisfactory            {}", summary_cell(&s.videos_satisfactory));
        let _ = writeln!(out, "  satisfaction_ratio             {}", summary_cell(&s.satisfaction_ratio));
    }

    if !sus.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "SUS");
        for r in sus {
            let _ = writeln!(out, "{:<16} {:>6.1}", r.participant_id, sus_score(r));
        }
        if let Ok(mean) = mean_sus_score(sus) {
            let _ = writeln!(out, "{:<16} {:>6.2}", "mean", mean);
        }
    }
    out
}
