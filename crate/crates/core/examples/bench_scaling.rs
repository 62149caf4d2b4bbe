//! Timing the OV pipeline over a small size grid and fitting the log-log slope.

use std::time::Duration;

use hdt::harness::{bench_scaling, write_bench_csv, BenchConfig};

fn main() -> hdt::Result<()> {
    let cfg = BenchConfig {
        grid: vec![(2, 2), (3, 3), (4, 4), (5, 5)],
        repetitions: 2,
        timeout: Some(Duration::from_secs(30)),
        ..BenchConfig::default()
    };
    let summary = bench_scaling(&cfg)?;
    write_bench_csv(&summary.records, std::io::stdout())?;
    match summary.slope {
        Some(s) => println!("slope of log(time) against log(nm): {s:.3}"),
        None => println!("not enough points for a slope"),
    }
    Ok(())
}
