//! Orthogonal Vectors to Hausdorff under translation, for L1, L∞ and L2.

use hdt::oracles::ov_brute;
use hdt::reduction::ov::{decode_ov_witness, ov_witness_translation, reduce_ov, OVInstance};
use hdt::solver::{decide_at_translation, decide_translation, Direction};
use hdt::Norm;

fn main() -> hdt::Result<()> {
    let inst = OVInstance::from_strings(&["1100", "0110", "1010"], &["1011", "0101", "1110"])?;
    let expected = ov_brute(&inst);
    println!("{inst}oracle: {expected:?}");

    for norm in [Norm::L1, Norm::Linf, Norm::L2] {
        let (out, _, params) = reduce_ov(&inst, norm)?;
        println!("\n{norm}: |A| = {}, |B| = {}, δ = {}, ε = {}", out.a.len(), out.b.len(), out.delta, params.eps);

        if let Some((i, j)) = expected {
            let tau = ov_witness_translation(i, j, &params);
            let ok = decide_at_translation(&out.a, &out.b, &tau, &out.delta, norm, Direction::Undirected);
            println!("  constructed τ for ({i}, {j}) = {tau}: feasible = {ok}");
        }

        for dir in [Direction::BToA, Direction::Undirected] {
            let r = decide_translation(&out.a, &out.b, &out.delta, norm, dir)?;
            let decoded = r.witness.as_ref().map(|w| decode_ov_witness(w.approx(), &params));
            println!("  {dir:<3}: feasible = {} decoded pair = {decoded:?}", r.feasible);
        }
    }
    Ok(())
}
