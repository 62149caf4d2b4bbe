//! Directed and undirected Hausdorff distances under several norms.

use hdt::geometry::{directed_hausdorff, undirected_hausdorff};
use hdt::{Norm, Point, PointSet};

fn main() -> hdt::Result<()> {
    let a = PointSet::new("A", vec![Point::new(0, 0), Point::new(2, 0), Point::new(1, 3)]);
    let b = PointSet::new("B", vec![Point::new(0, 1), Point::new(3, 1)]);

    for norm in [Norm::L1, Norm::L2, Norm::Linf, Norm::Lp(3)] {
        let (ab, (i, j)) = directed_hausdorff(&a, &b, norm)?;
        let (ba, _) = directed_hausdorff(&b, &a, norm)?;
        let und = undirected_hausdorff(&a, &b, norm)?;
        println!(
            "{norm:>4}: A→B {:.4} (a{i}→b{j})  B→A {:.4}  undirected {:.4}",
            ab.approx_distance(),
            ba.approx_distance(),
            und.approx_distance()
        );
    }

    let moved = b.translate(&Point::new(1, -1));
    let d = undirected_hausdorff(&a, &moved, Norm::L2)?;
    println!("after moving B by (1, −1): {:.4}", d.approx_distance());
    Ok(())
}
