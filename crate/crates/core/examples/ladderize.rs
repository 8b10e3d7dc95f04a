//! Replaces an infinitely branching root by its ladder gadget.

use parity_forge::gallery;
use parity_forge::mdp::materialize;
use parity_forge::num::fmt_rat;

fn main() -> parity_forge::Result<()> {
    let m = gallery::build_spec("ladder(controlled=true)")?;
    let (x, frontier) = materialize(&*m, 5, 4)?;
    println!(
        "{} states within depth 5, {} on the frontier",
        x.len(),
        frontier.unexpanded.len() + frontier.controlled_truncated.len()
    );
    for i in 0..x.len() {
        let succ: Vec<&str> = x.succ(i).iter().map(|&t| x.id(t)).collect();
        println!("{:12} color {} -> {}", x.id(i), x.color(i), succ.join(" "));
    }
    let r = gallery::build_spec("ladder")?;
    let (y, _) = materialize(&*r, 8, 4)?;
    let root = y.initial()[0];
    println!(
        "random root row: {:?}",
        y.random_row(root).iter().map(|(t, p)| (y.id(*t), fmt_rat(p))).collect::<Vec<_>>()
    );
    Ok(())
}
