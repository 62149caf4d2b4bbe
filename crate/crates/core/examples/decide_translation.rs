//! Exact decision: is there τ with δH(A, B + τ) ≤ δ?

use hdt::scalar::rational;
use hdt::solver::{decide_at_candidate, decide_translation_with, Direction, SolverOptions};
use hdt::{Norm, Point, PointSet};

fn main() -> hdt::Result<()> {
    let a = PointSet::new("A", vec![Point::new(0, 0), Point::new(4, 0), Point::new(2, 3)]);
    let b = PointSet::new("B", vec![Point::new(10, 10), Point::new(14, 10), Point::new(12, 12)]);

    let opts = SolverOptions::default();
    for norm in [Norm::L1, Norm::L2, Norm::Linf] {
        for delta in [rational(1, 2), rational(1, 1)] {
            for dir in Direction::ALL {
                let r = decide_translation_with(&a, &b, &delta, norm, dir, &opts)?;
                let verdict = match &r.witness {
                    Some(w) => {
                        // Re-check the witness independently of the search.
                        assert!(decide_at_candidate(&a, &b, w, &delta, norm, dir)?);
                        format!("feasible, {w}")
                    }
                    None => "infeasible".to_string(),
                };
                println!(
                    "{norm:>4} δ={delta:<3} {dir:<3}: {verdict} ({} candidates, {} tested)",
                    r.stats.candidates_generated, r.stats.candidates_tested
                );
            }
        }
    }

    let parallel = SolverOptions { workers: 4, ..SolverOptions::default() };
    let r = decide_translation_with(&a, &b, &rational(1, 1), Norm::L2, Direction::Undirected, &parallel)?;
    println!("4 workers: feasible = {}", r.feasible);
    Ok(())
}
