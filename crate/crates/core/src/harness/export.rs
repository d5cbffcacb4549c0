//! Record export.
//!
//! `taps.csv` has one row per logged tap. Its first line is a comment naming
//! the schema version; the header row follows. Floats are written in their
//! shortest exact form, so reloading reproduces every value bit for bit.
//!
//! | columns | meaning |
//! |---|---|
//! | `scenario_id`, `seed`, `outcome` | trial identity and result, repeated per row |
//! | `tap` | tap index at which the contact was sensed |
//! | `pusher_x` .. `pusher_gamma` | sensor pose, work frame, mm / deg |
//! | `object_y`, `object_z`, `object_alpha` | true object pose |
//! | `in_contact`, `pred_z`, `pred_alpha`, `pred_beta`, `clamped` | sensed contact pose (empty without contact) |
//! | `theta_deg`, `r_mm`, `r_tip_mm`, `v_mm` | target bearing, distances, lateral move |
//! | `err_x` .. `err_gamma` | servo error |
//! | `int_x` .. `int_gamma` | servo integral |
//! | `alignment_engaged`, `status` | outer-loop gate and controller status |
//! | `target_x` .. `target_gamma` | target pose |

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::metrics::Metrics;
use super::plot::plot_records;
use super::trial::{Outcome, TrialRecord};
use crate::controller::Status;
use crate::error::{Error, Result};

pub const CSV_SCHEMA: &str = "# tactile-push taps.csv schema v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapRow {
    pub scenario_id: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub tap: usize,
    pub pusher_x: f64,
    pub pusher_y: f64,
    pub pusher_z: f64,
    pub pusher_alpha: f64,
    pub pusher_beta: f64,
    pub pusher_gamma: f64,
    pub object_y: f64,
    pub object_z: f64,
    pub object_alpha: f64,
    pub in_contact: bool,
    pub pred_z: Option<f64>,
    pub pred_alpha: Option<f64>,
    pub pred_beta: Option<f64>,
    pub clamped: bool,
    pub theta_deg: f64,
    pub r_mm: f64,
    pub r_tip_mm: f64,
    pub v_mm: f64,
    pub err_x: f64,
    pub err_y: f64,
    pub err_z: f64,
    pub err_alpha: f64,
    pub err_beta: f64,
    pub err_gamma: f64,
    pub int_x: f64,
    pub int_y: f64,
    pub int_z: f64,
    pub int_alpha: f64,
    pub int_beta: f64,
    pub int_gamma: f64,
    pub alignment_engaged: bool,
    pub status: Status,
    pub target_x: f64,
    pub target_y: f64,
    pub target_z: f64,
    pub target_alpha: f64,
    pub target_beta: f64,
    pub target_gamma: f64,
}

pub fn tap_rows(record: &TrialRecord) -> impl Iterator<Item = TapRow> + '_ {
    let g = record.target;
    record.taps.iter().map(move |t| {
        let p = t.pusher;
        let e = t.servo_error;
        let i = t.integral6;
        TapRow {
            scenario_id: record.scenario_id.clone(),
            seed: record.seed,
            outcome: record.outcome,
            tap: t.tap,
            pusher_x: p.x,
            pusher_y: p.y,
            pusher_z: p.z,
            pusher_alpha: p.alpha,
            pusher_beta: p.beta,
            pusher_gamma: p.gamma,
            object_y: t.object.y,
            object_z: t.object.z,
            object_alpha: t.object.alpha,
            in_contact: t.prediction.in_contact,
            pred_z: t.prediction.z_depth,
            pred_alpha: t.prediction.alpha,
            pred_beta: t.prediction.beta,
            clamped: t.prediction.clamped,
            theta_deg: t.theta_deg,
            r_mm: t.r_mm,
            r_tip_mm: t.r_tip_mm,
            v_mm: t.v_mm,
            err_x: e.x,
            err_y: e.y,
            err_z: e.z,
            err_alpha: e.alpha,
            err_beta: e.beta,
            err_gamma: e.gamma,
            int_x: i[0],
            int_y: i[1],
            int_z: i[2],
            int_alpha: i[3],
            int_beta: i[4],
            int_gamma: i[5],
            alignment_engaged: t.alignment_engaged,
            status: t.status,
            target_x: g.x,
            target_y: g.y,
            target_z: g.z,
            target_alpha: g.alpha,
            target_beta: g.beta,
            target_gamma: g.gamma,
        }
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the tap table of `records` to any writer.
pub fn write_taps_csv<W: Write>(records: &[TrialRecord], out: W, label: &Path) -> Result<()> {
    let mut out = out;
    writeln!(out, "{CSV_SCHEMA}").map_err(|e| Error::io(label, e))?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        for row in tap_rows(r) {
            w.serialize(row).map_err(csv_err(label))?;
        }
    }
    w.flush().map_err(|e| Error::io(label, e))
}

pub fn read_taps_csv(path: impl AsRef<Path>) -> Result<Vec<TapRow>> {
    let path = path.as_ref();
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(csv_err(path))?;
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err(path))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value).map_err(|e| Error::io(path, e.into()))?;
    f.flush().map_err(|e| Error::io(path, e))
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<TrialRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    pub name: String,
    pub metrics: Metrics,
}

/// Paths written by [`export`].
#[derive(Debug, Clone, PartialEq)]
pub struct Exported {
    pub records: PathBuf,
    pub taps: PathBuf,
    pub metrics: PathBuf,
    pub plot: PathBuf,
}

/// Writes `records.json`, `taps.csv`, `metrics.json` and `trajectories.svg`
/// into `dir`, creating it if needed. Nothing is written for an empty record
/// list.
pub fn export(name: &str, records: &[TrialRecord], dir: impl AsRef<Path>) -> Result<Exported> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = Exported {
        records: dir.join("records.json"),
        taps: dir.join("taps.csv"),
        metrics: dir.join("metrics.json"),
        plot: dir.join("trajectories.svg"),
    };
    write_json(&records, &paths.records)?;
    let mut f = create(&paths.taps)?;
    write_taps_csv(records, &mut f, &paths.taps)?;
    f.flush().map_err(|e| Error::io(&paths.taps, e))?;
    let metrics = MetricsFile {
        name: name.to_string(),
        metrics: Metrics::from_records(records),
    };
    write_json(&metrics, &paths.metrics)?;
    write_plot(records, &paths.plot)?;
    Ok(paths)
}

/// Renders `records` to an SVG file, one panel per record.
pub fn write_plot(records: &[TrialRecord], path: impl AsRef<Path>) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let path = path.as_ref();
    std::fs::write(path, plot_records(records, super::plot::DEFAULT_EVERY)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{compute_y_targ, run_trial};
    use crate::pose::EulerPose;
    use crate::scene::ScenarioFile;

    fn short_record() -> TrialRecord {
        let mut f = ScenarioFile::new("csv");
        f.target_pose_mm_deg = [0.0, 30.0, 200.0, 0.0, 0.0, 0.0];
        f.rng_seed = 5;
        run_trial(&f.resolve().unwrap())
    }

    #[test]
    fn empty_records_write_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        assert!(matches!(export("x", &[], &out), Err(Error::EmptyRecords)));
        assert!(!out.exists());
    }

    #[test]
    fn one_record_exports_every_file() {
        let dir = tempfile::tempdir().unwrap();
        let rec = short_record();
        let paths = export("one", std::slice::from_ref(&rec), dir.path()).unwrap();
        for p in [&paths.records, &paths.taps, &paths.metrics, &paths.plot] {
            assert!(p.metadata().unwrap().len() > 0, "{p:?}");
        }
        let text = std::fs::read_to_string(&paths.taps).unwrap();
        assert!(text.starts_with(CSV_SCHEMA));
        let svg = std::fs::read_to_string(&paths.plot).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(read_records(&paths.records).unwrap()[0], rec);
    }

    #[test]
    fn csv_reload_reproduces_y_targ() {
        let dir = tempfile::tempdir().unwrap();
        let rec = short_record();
        assert_eq!(rec.outcome, Outcome::Reached);
        let paths = export("rt", std::slice::from_ref(&rec), dir.path()).unwrap();
        let rows = read_taps_csv(&paths.taps).unwrap();
        assert_eq!(rows.len(), rec.tap_total);
        let expected: Vec<TapRow> = tap_rows(&rec).collect();
        assert_eq!(rows, expected);
        let last = rows.last().unwrap();
        let pusher = EulerPose::new(
            last.pusher_x,
            last.pusher_y,
            last.pusher_z,
            last.pusher_alpha,
            last.pusher_beta,
            last.pusher_gamma,
        );
        let target = EulerPose::new(
            last.target_x,
            last.target_y,
            last.target_z,
            last.target_alpha,
            last.target_beta,
            last.target_gamma,
        );
        let y = compute_y_targ(&pusher.to_transform(), &target.to_transform());
        assert_eq!(Some(y), rec.y_targ_mm);
    }

    #[test]
    fn unwritable_path_names_the_file() {
        let rec = short_record();
        let err = write_plot(&[rec], "/nonexistent-dir/plot.svg").unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/plot.svg"));
    }
}
