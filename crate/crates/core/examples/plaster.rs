//! ε-optimal MD strategy on a layered acyclic model by plastering.

use parity_forge::gallery;
use parity_forge::mdp::materialize;
use parity_forge::num::{fmt_rat, rat};
use parity_forge::synthesis::plaster_parity;
use parity_forge::transform::layer;

fn main() -> parity_forge::Result<()> {
    let dag = gallery::build_spec("acyclic_dag(n=10,seed=24)")?;
    let (m, _) = materialize(&*dag, usize::MAX, 16)?;
    let l = layer(&m);
    let mut start = vec![false; l.mdp.len()];
    let root = l.state_node(m.initial()[0], 0);
    start[root] = true;
    let c = l.closure(&start);
    let l0: Vec<usize> = (0..c.len()).filter(|&i| c[i]).collect();
    let (_, rep) = plaster_parity(&l, &l0, &rat(1, 10))?;
    println!(
        "gamma {} beta {} alpha {} shifted {}",
        fmt_rat(&rep.gamma),
        fmt_rat(&rep.beta),
        fmt_rat(&rep.alpha),
        rep.shifted
    );
    for it in &rep.iterations {
        let fixed = it.fix.iter().filter(|x| **x).count();
        println!("color {}: {} fixed, slack {}", it.color, fixed, fmt_rat(&it.invariant_slack));
    }
    println!("root value {} attains {}", fmt_rat(&rep.values[root]), fmt_rat(&rep.attainment[root]));
    println!("checks ok: {}", rep.ok());
    Ok(())
}
