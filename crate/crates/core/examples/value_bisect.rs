//! Bracketing the optimal Hausdorff distance under translation.

use hdt::scalar::rational;
use hdt::solver::{format_bracket, value_bisect, Direction, SolverOptions};
use hdt::{Norm, Point, PointSet};

fn main() -> hdt::Result<()> {
    let a = PointSet::new("A", vec![Point::new(0, 0), Point::new(1, 0), Point::new(0, 1)]);
    let b = PointSet::new("B", vec![Point::new(5, 5), Point::new(7, 5), Point::new(5, 6)]);
    let tol = rational(1, 4096);
    for norm in [Norm::L1, Norm::L2, Norm::Linf] {
        for dir in Direction::ALL {
            let br = value_bisect(&a, &b, norm, dir, &tol, &SolverOptions::default())?;
            println!("{norm:>4} {dir:<3}: {}  after {} decisions", format_bracket(&br), br.decisions);
        }
    }
    Ok(())
}
