//! Layers a model and synthesizes an optimal 1-bit strategy.

use parity_forge::gallery::random_mdp;
use parity_forge::synthesis::{optimal_parity_1bit, OneBitOptions};
use parity_forge::transform::layer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> parity_forge::Result<()> {
    let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(7), 5, 3, &[0, 1, 2, 3]);
    let l = layer(&m);
    println!("{} states, {} edges; layered: {} states", m.len(), m.edge_count(), l.mdp.len());
    let out = optimal_parity_1bit(&m, &OneBitOptions { simplify: false, ..OneBitOptions::default() })?;
    println!("uniformize rounds: {}, never flips: {}", out.uniformize_rounds, out.strategy.never_flips());
    println!("{}", out.strategy.to_json_pretty());
    for c in &out.checks.items {
        println!("{} {}: {}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
