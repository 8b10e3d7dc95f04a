//! Conditions a model on winning and checks that the result wins almost surely.

use parity_forge::analysis::solve_parity;
use parity_forge::gallery::random_mdp;
use parity_forge::num::fmt_rat;
use parity_forge::transform::condition;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> parity_forge::Result<()> {
    let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(17), 8, 3, &[1, 2, 3]);
    let v = solve_parity(&m).values;
    let c = condition(&m, &v)?;
    let cv = solve_parity(&c.mdp).values;
    println!("kept {} of {} states", c.mdp.len(), m.len());
    for (i, &o) in c.to_orig.iter().enumerate() {
        println!("{:4} value {:>6} conditioned {}", m.id(o), fmt_rat(&v[o]), fmt_rat(&cv[i]));
    }
    Ok(())
}
