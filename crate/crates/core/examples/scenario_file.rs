//! Load a scenario file, run it and export the results.
//!
//! `cargo run --example scenario_file -- scenarios/exp1_baseline.json /tmp/out`

use tactile_push::harness::{export, run_trial};
use tactile_push::scene::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/exp1_baseline.json").into());
    let out = args.next().unwrap_or_else(|| "out/scenario_file".into());

    let scenario = load_scenario(&path)?;
    let record = run_trial(&scenario);
    println!(
        "{}: {:?} after {} taps, y_targ {:?}",
        record.scenario_id, record.outcome, record.tap_total, record.y_targ_mm
    );
    for t in record.taps.iter().step_by(10) {
        println!(
            "  tap {:3}: tip ({:7.1}, {:7.1}) heading {:7.1}  theta {:7.2}  v {:5.2}",
            t.tap, t.pusher.y, t.pusher.z, t.pusher.alpha, t.theta_deg, t.v_mm
        );
    }
    let paths = export(&scenario.id, &[record], &out)?;
    println!("wrote {}", paths.plot.display());
    Ok(())
}
