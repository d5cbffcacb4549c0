//! Self-contained SVG trajectory plots.
//!
//! Each record gets a panel in the work plane (`y` to the right, `z` up)
//! showing the object outline every few taps, the sensor tip path, the start
//! and final tip discs, and the target with its termination and approach
//! circles.

use std::fmt::Write;

use super::trial::{Outcome, TrialRecord};
use crate::scene::{PusherTip, Vec2};

/// Outline stride in taps.
pub const DEFAULT_EVERY: usize = 5;
const PANEL: f64 = 320.0;
const MARGIN: f64 = 16.0;
const TITLE: f64 = 18.0;
const COLUMNS: usize = 4;
const TERMINATION_MM: f64 = 20.0;
const APPROACH_MM: f64 = 60.0;

struct Frame {
    min: Vec2,
    scale: f64,
    ox: f64,
    oy: f64,
    height: f64,
}

impl Frame {
    fn map(&self, p: &Vec2) -> (f64, f64) {
        let x = self.ox + (p.x - self.min.x) * self.scale;
        let y = self.oy + self.height - (p.y - self.min.y) * self.scale;
        (x, y)
    }
}

fn points_attr(frame: &Frame, pts: &[Vec2]) -> String {
    let mut s = String::new();
    for p in pts {
        let (x, y) = frame.map(p);
        let _ = write!(s, "{x:.2},{y:.2} ");
    }
    s.trim_end().to_string()
}

fn colour(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Reached => "#2a7f3f",
        Outcome::LostContact => "#b8860b",
        Outcome::MaxTaps => "#b03030",
        Outcome::PhysicsFault => "#7030a0",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn panel(svg: &mut String, rec: &TrialRecord, every: usize, ox: f64, oy: f64) {
    let tip = PusherTip::default().radius;
    let target = Vec2::new(rec.target.y, rec.target.z);
    let path: Vec<Vec2> = rec.taps.iter().map(|t| Vec2::new(t.pusher.y, t.pusher.z)).collect();
    let outlines: Vec<Vec<Vec2>> = rec
        .taps
        .iter()
        .enumerate()
        .filter(|(i, _)| i % every.max(1) == 0 || *i + 1 == rec.taps.len())
        .map(|(_, t)| rec.shape.world_outline(&t.object, 48))
        .collect();

    let mut lo = target - Vec2::new(APPROACH_MM, APPROACH_MM);
    let mut hi = target + Vec2::new(APPROACH_MM, APPROACH_MM);
    for p in path.iter().chain(outlines.iter().flatten()) {
        lo = lo.inf(&(p - Vec2::new(tip, tip)));
        hi = hi.sup(&(p + Vec2::new(tip, tip)));
    }
    let inner = PANEL - 2.0 * MARGIN;
    let span = (hi - lo).max().max(1.0);
    let scale = inner / span;
    let frame = Frame {
        min: lo,
        scale,
        ox: ox + MARGIN + (inner - (hi.x - lo.x) * scale) / 2.0,
        oy: oy + TITLE + MARGIN - (inner - (hi.y - lo.y) * scale) / 2.0,
        height: inner,
    };

    let _ = writeln!(
        svg,
        r##"<rect x="{ox}" y="{oy}" width="{PANEL}" height="{h}" fill="white" stroke="#ccc"/>"##,
        h = PANEL + TITLE
    );
    let y_targ = rec.y_targ_mm.map(|y| format!(" y_targ {y:.2} mm")).unwrap_or_default();
    let _ = writeln!(
        svg,
        r##"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" fill="{c}">{id} | {o} | {n} taps{y_targ}</text>"##,
        x = ox + 4.0,
        y = oy + 13.0,
        c = colour(rec.outcome),
        id = escape(&rec.scenario_id),
        o = rec.outcome.as_str(),
        n = rec.tap_total,
    );

    let (tx, ty) = frame.map(&target);
    for (r, dash) in [(APPROACH_MM, "4 3"), (TERMINATION_MM, "none")] {
        let _ = writeln!(
            svg,
            r##"<circle cx="{tx:.2}" cy="{ty:.2}" r="{:.2}" fill="none" stroke="#d04040" stroke-dasharray="{dash}"/>"##,
            r * scale
        );
    }
    let _ = writeln!(svg, r##"<circle cx="{tx:.2}" cy="{ty:.2}" r="2" fill="#d04040"/>"##);

    let n = outlines.len();
    for (k, o) in outlines.iter().enumerate() {
        let opacity = 0.25 + 0.75 * (k + 1) as f64 / n as f64;
        let _ = writeln!(
            svg,
            r##"<polygon points="{}" fill="none" stroke="#3060b0" stroke-opacity="{opacity:.2}" stroke-width="0.8"/>"##,
            points_attr(&frame, o)
        );
    }
    if !path.is_empty() {
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#202020" stroke-width="1"/>"##,
            points_attr(&frame, &path)
        );
        for (p, fill) in [(path[0], "#bbbbbb"), (path[path.len() - 1], "#202020")] {
            let (x, y) = frame.map(&p);
            let _ = writeln!(
                svg,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="{fill}" fill-opacity="0.25" stroke="{fill}"/>"##,
                tip * scale
            );
        }
    }
}

/// SVG document with one panel per record, object outlines every `every`
/// taps.
pub fn plot_records(records: &[TrialRecord], every: usize) -> String {
    let cols = records.len().clamp(1, COLUMNS);
    let rows = records.len().div_ceil(cols).max(1);
    let width = cols as f64 * PANEL;
    let height = rows as f64 * (PANEL + TITLE);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for (i, rec) in records.iter().enumerate() {
        let ox = (i % cols) as f64 * PANEL;
        let oy = (i / cols) as f64 * (PANEL + TITLE);
        panel(&mut svg, rec, every, ox, oy);
    }
    svg.push_str("</svg>\n");
    svg
}
