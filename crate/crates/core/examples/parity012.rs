//! Optimal MD strategy for colors {0,1,2}.

use parity_forge::analysis::{attainment, solve_parity, Objective};
use parity_forge::gallery::random_mdp;
use parity_forge::num::fmt_rat;
use parity_forge::synthesis::parity012_opt_md;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> parity_forge::Result<()> {
    let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(3), 8, 3, &[0, 1, 2]);
    let (sigma, checks) = parity012_opt_md(&m)?;
    let att = attainment(&m, &sigma, &Objective::Parity)?;
    let val = solve_parity(&m).values;
    for i in 0..m.len() {
        println!("{:4} value {:>6} attains {:>6}", m.id(i), fmt_rat(&val[i]), fmt_rat(&att[i]));
    }
    println!("checks ok: {}", checks.ok());
    Ok(())
}
