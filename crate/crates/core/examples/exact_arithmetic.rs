//! Arithmetic in Q(√2) and exact signs of nested radicals.

use std::cmp::Ordering;

use hdt::scalar::{rational, RadicalExpr};
use hdt::ExactScalar;

fn main() -> hdt::Result<()> {
    let s = ExactScalar::sqrt2();
    let x = &ExactScalar::from_ratio(3, 2) + &s; // 3/2 + √2
    println!("x = {x}, x² = {}, x ≈ {:.12}", x.square(), x.to_f64());

    let inv = x.inverse()?;
    println!("1/x = {inv}, x·(1/x) = {}", &x * &inv);

    // 99/70 is a convergent of √2; the sign is decided without rounding.
    let gap = &s - &ExactScalar::from_rational(rational(99, 70));
    println!("√2 − 99/70 = {gap}, sign {:?}", gap.sign());

    // 1 + √2 − √(3 + 2√2) is exactly zero.
    let k = &ExactScalar::from_int(3) + &(&s * &ExactScalar::from_int(2));
    let e = RadicalExpr::new(&ExactScalar::one() + &s, ExactScalar::from_int(-1), k);
    assert_eq!(e.sign()?, Ordering::Equal);
    println!("sign(1 + √2 − √(3 + 2√2)) = {:?}", e.sign()?);

    // Negative radicands are rejected.
    let bad = RadicalExpr::new(ExactScalar::zero(), ExactScalar::one(), ExactScalar::from_int(-1));
    println!("√(−1): {}", bad.sign().unwrap_err());
    Ok(())
}
