//! The three experiment grids and the friction/noise robustness sweep.
//!
//! `cargo run --release --example experiments -- [exp1|exp2|exp3|robustness] [trials]`

use tactile_push::harness::{
    irregular_shapes, prism_shapes, run_experiment_1, run_experiment_2, run_experiment_3, run_robustness,
    ExperimentConfig, ExperimentResult, Outcome,
};

fn show(r: &ExperimentResult) {
    let m = &r.metrics;
    println!(
        "{:10} {:4}/{:<4} reached  y_targ {}",
        r.name,
        m.reached,
        m.trials,
        m.y_targ_summary()
    );
    for rec in r.records.iter().filter(|r| r.outcome != Outcome::Reached) {
        println!(
            "    {} ended {:?} after {} taps",
            rec.scenario_id, rec.outcome, rec.tap_total
        );
    }
}

fn main() -> tactile_push::Result<()> {
    let mut args = std::env::args().skip(1);
    let which = args.next().unwrap_or_else(|| "all".into());
    let trials = args.next().and_then(|t| t.parse().ok()).unwrap_or(3);
    let cfg = ExperimentConfig {
        trials_per_cell: trials,
        ..ExperimentConfig::default()
    };
    let all = which == "all";
    if all || which == "exp1" {
        show(&run_experiment_1(&cfg)?);
    }
    if all || which == "exp2" {
        show(&run_experiment_2(&prism_shapes(), &cfg)?);
    }
    if all || which == "exp3" {
        show(&run_experiment_3(&irregular_shapes(), &cfg)?);
    }
    if all || which == "robustness" {
        show(&run_robustness(&cfg, 0.5, 2.0)?);
    }
    Ok(())
}
