//! Brute-force reference solvers.
//!
//! These are deliberately simple scans and share no code with the geometric
//! side, so they can serve as ground truth for the reductions.

use crate::reduction::conv3sum::{Conv3SumInstance, ThreeSumInstance};
use crate::reduction::ov::OVInstance;

/// First `(i, j)` in lexicographic order with `x_i · y_j = 0`.
pub fn ov_brute(inst: &OVInstance) -> Option<(usize, usize)> {
    for (i, x) in inst.x.iter().enumerate() {
        for (j, y) in inst.y.iter().enumerate() {
            if x.iter().zip(y).all(|(&a, &b)| !(a && b)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Some `(x, y, z)` with `x + y = z`, found by binary search over sorted `Z`.
pub fn threesum_brute(inst: &ThreeSumInstance) -> Option<(i64, i64, i64)> {
    let mut z = inst.z.clone();
    z.sort_unstable();
    for &x in &inst.x {
        for &y in &inst.y {
            let target = x.checked_add(y)?;
            if z.binary_search(&target).is_ok() {
                return Some((x, y, target));
            }
        }
    }
    None
}

/// First `(i, j)` with `i + j ≤ n − 1` and `x_i + x_j = x_{i+j}`.
///
/// `i = j` and zero indices are allowed. Since all values are positive, a
/// zero index can never be part of a solution.
pub fn conv3sum_brute(inst: &Conv3SumInstance) -> Option<(usize, usize)> {
    let xs = &inst.x;
    let n = xs.len();
    for i in 0..n {
        for j in 0..n - i {
            if xs[i] + xs[j] == xs[i + j] {
                return Some((i, j));
            }
        }
    }
    None
}
