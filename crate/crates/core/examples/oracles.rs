//! Brute-force oracles for OV, 3SUM and Conv3SUM.

use hdt::oracles::{conv3sum_brute, ov_brute, threesum_brute};
use hdt::reduction::conv3sum::{Conv3SumInstance, ThreeSumInstance};
use hdt::reduction::ov::OVInstance;

fn main() -> hdt::Result<()> {
    let ov = OVInstance::from_strings(&["110", "011"], &["001", "101"])?;
    println!("OV: {:?}", ov_brute(&ov));

    let ts = ThreeSumInstance::new(vec![1, 5], vec![2, 9], vec![7, 4])?;
    println!("3SUM: {:?}", threesum_brute(&ts));

    for x in [vec![4, 1, 6, 7], vec![1, 1, 1], vec![2, 3, 5, 8, 1]] {
        let inst = Conv3SumInstance::new(x.clone())?;
        println!("Conv3SUM {x:?}: {:?}", conv3sum_brute(&inst));
    }
    Ok(())
}
