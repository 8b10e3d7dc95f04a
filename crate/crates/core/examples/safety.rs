//! ε-optimal MD strategies for safety on an acyclic model.

use parity_forge::analysis::solve_safety;
use parity_forge::gallery::random_dag;
use parity_forge::num::{fmt_rat, rat};
use parity_forge::strategy::md_rows;
use parity_forge::synthesis::safety_eps_md;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> parity_forge::Result<()> {
    let m = random_dag(&mut ChaCha8Rng::seed_from_u64(11), 12, 3, &[0, 1]);
    let bad = m.mask_where(|c| c == 1);
    let val = solve_safety(&m, &bad).values;
    let eps = rat(1, 10);
    let sigma = safety_eps_md(&m, &bad, &eps)?;
    let rows = md_rows(&m, &sigma)?;
    println!("{} rows in the induced chain", rows.len());
    for i in 0..m.len() {
        if let Some(t) = sigma.get(i) {
            println!("{:4} value {:>8} -> {}", m.id(i), fmt_rat(&val[i]), m.id(t));
        }
    }
    Ok(())
}
