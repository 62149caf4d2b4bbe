//! Conv3SUM to Hausdorff under translation (L2), with the diagonal padding variant.

use hdt::oracles::conv3sum_brute;
use hdt::reduction::conv3sum::{reduce_conv3sum_with, witness_translation, Conv3SumInstance};
use hdt::solver::{decide_at_translation, decide_translation, Direction};

fn main() -> hdt::Result<()> {
    let yes = Conv3SumInstance::new(vec![4, 1, 6, 7])?;
    let no = Conv3SumInstance::new(vec![1, 1, 1])?;

    for inst in [&yes, &no] {
        let truth = conv3sum_brute(inst);
        println!("x = {:?}, M = {}: oracle {truth:?}", inst.x, inst.m);
        for extend in [false, true] {
            let (out, params) = reduce_conv3sum_with(inst, extend)?;
            let tag = if extend { "padded" } else { "plain " };
            println!("  {tag} |A| = {} |B| = {} ε = {}", out.a.len(), out.b.len(), params.eps);
            if let Some((i, j)) = truth {
                let tau = witness_translation(i, j, inst, &params)?;
                let ok = decide_at_translation(&out.a, &out.b, &tau, &out.delta, out.norm, Direction::Undirected);
                println!("    witness τ for ({i}, {j}) feasible: {ok}");
            }
            for dir in [Direction::AToB, Direction::Undirected] {
                let r = decide_translation(&out.a, &out.b, &out.delta, out.norm, dir)?;
                println!("    {dir:<3}: feasible = {}", r.feasible);
            }
        }
    }
    Ok(())
}
