//! Random instances through reduction, solver and oracle, checked for agreement.

use hdt::harness::{gen_conv3sum, gen_ov, verify_batch, PipelineConfig, PipelineInput};
use hdt::solver::Direction;
use hdt::Norm;

fn main() -> hdt::Result<()> {
    let config = PipelineConfig::default();

    let ov: Vec<(String, PipelineInput)> = (0..12)
        .map(|s| Ok((format!("ov-{s}"), PipelineInput::Ov(gen_ov(3, 3, 4, s % 2 == 0, s)?))))
        .collect::<hdt::Result<_>>()?;
    for norm in [Norm::L1, Norm::Linf] {
        let runs = verify_batch(&ov, norm, Direction::Undirected, &config, 4);
        let agree = runs.iter().filter(|r| matches!(r, Ok(rep) if rep.agreement)).count();
        println!("OV {norm}: {agree}/{} agree", runs.len());
    }

    let conv: Vec<(String, PipelineInput)> = (0..4)
        .map(|s| Ok((format!("c-{s}"), PipelineInput::Conv3Sum(gen_conv3sum(3, 6, s % 2 == 0, s)?))))
        .collect::<hdt::Result<_>>()?;
    for r in verify_batch(&conv, Norm::L2, Direction::Undirected, &config, 4) {
        let rep = r?;
        println!("{}: oracle {} solver {} ({} ms)", rep.id, rep.oracle, rep.solver, rep.solve_ns / 1_000_000);
    }
    Ok(())
}
