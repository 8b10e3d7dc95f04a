//! Bounded sea-urchin rounds on a truncated almost-surely winning walk.

use parity_forge::gallery;
use parity_forge::num::fmt_rat;
use parity_forge::synthesis::{sea_urchin_rounds, UrchinParams};
use parity_forge::transform::{layer, truncate, TruncMode};

fn main() -> parity_forge::Result<()> {
    let walk = gallery::build_spec("as_win_walk")?;
    let m = truncate(&*walk, &walk.initial(), 6, 8, TruncMode::Optimistic)?;
    let l = layer(&m);
    let mut start = vec![false; l.mdp.len()];
    for &s in m.initial() {
        start[l.state_node(s, 0)] = true;
    }
    let c = l.closure(&start);
    let l0: Vec<usize> = (0..c.len()).filter(|&i| c[i]).collect();
    let params = UrchinParams::default();
    println!("progress factor in round 1: {}", fmt_rat(&params.progress_factor(1)));
    let out = sea_urchin_rounds(&l.mdp, &l.sibling, &l0, 3, &params)?;
    for r in &out.rounds {
        let worst = r.p.iter().min().map(fmt_rat).unwrap_or_default();
        println!("round {} radius {} min p {}", r.round, r.radius, worst);
    }
    println!("checks ok: {}", out.checks.ok());
    Ok(())
}
