//! Pessimistic truncations of a transient walk approach the return probability.

use parity_forge::analysis::solve_reach;
use parity_forge::gallery;
use parity_forge::num::fmt_rat;
use parity_forge::transform::{truncate, TruncMode};

fn main() -> parity_forge::Result<()> {
    // moving up with probability 3/5, the walk returns to 0 from 1 with
    // probability 2/3
    let walk = gallery::build_spec("walk(p=3/5)")?;
    for l in [2, 4, 8, 16, 32] {
        let t = truncate(&*walk, &["1".to_string()], l, 8, TruncMode::Pessimistic)?;
        let target = t.mask_of(["0"])?;
        let v = &solve_reach(&t, &target).values[t.initial()[0]];
        println!("l = {l:2}: {} states, P(reach 0) >= {} ({:.4})", t.len(), fmt_rat(v), parity_forge::num::to_f64(v));
    }
    Ok(())
}
