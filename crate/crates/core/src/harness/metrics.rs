use serde::{Deserialize, Serialize};

use super::trial::{Outcome, TrialRecord};

/// Summary of tap totals across trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TapStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub trials: usize,
    pub reached: usize,
    pub lost_contact: usize,
    pub max_taps: usize,
    pub physics_fault: usize,
    pub success_rate: f64,
    /// Over reached trials only; `None` when nothing was reached.
    pub mean_y_targ_mm: Option<f64>,
    /// Sample standard deviation (n - 1); `None` below two reached trials.
    pub std_y_targ_mm: Option<f64>,
    pub taps: Option<TapStats>,
}

/// Welford's running mean and variance.
#[derive(Debug, Clone, Copy, Default)]
struct Running {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn sample_std(&self) -> Option<f64> {
        (self.n > 1).then(|| (self.m2 / (self.n - 1) as f64).sqrt())
    }
}

impl Metrics {
    pub fn from_records(records: &[TrialRecord]) -> Metrics {
        let count = |o: Outcome| records.iter().filter(|r| r.outcome == o).count();
        let mut y = Running::default();
        for v in records.iter().filter_map(|r| r.y_targ_mm) {
            y.push(v);
        }
        let mut totals: Vec<usize> = records.iter().map(|r| r.tap_total).collect();
        totals.sort_unstable();
        let taps = (!totals.is_empty()).then(|| {
            let n = totals.len();
            let median = if n % 2 == 1 {
                totals[n / 2] as f64
            } else {
                0.5 * (totals[n / 2 - 1] + totals[n / 2]) as f64
            };
            TapStats {
                min: totals[0],
                max: totals[n - 1],
                mean: totals.iter().sum::<usize>() as f64 / n as f64,
                median,
            }
        });
        let reached = count(Outcome::Reached);
        Metrics {
            trials: records.len(),
            reached,
            lost_contact: count(Outcome::LostContact),
            max_taps: count(Outcome::MaxTaps),
            physics_fault: count(Outcome::PhysicsFault),
            success_rate: if records.is_empty() {
                0.0
            } else {
                reached as f64 / records.len() as f64
            },
            mean_y_targ_mm: (y.n > 0).then_some(y.mean),
            std_y_targ_mm: y.sample_std(),
            taps,
        }
    }

    /// `mean ± std` of y_targ, or a dash.
    pub fn y_targ_summary(&self) -> String {
        match (self.mean_y_targ_mm, self.std_y_targ_mm) {
            (Some(m), Some(s)) => format!("{m:.2} ± {s:.2} mm"),
            (Some(m), None) => format!("{m:.2} mm"),
            _ => "-".into(),
        }
    }
}
