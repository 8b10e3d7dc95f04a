//! ε-optimal MD strategy for a co-Büchi objective.

use parity_forge::gallery::random_mdp;
use parity_forge::num::{fmt_rat, rat};
use parity_forge::synthesis::cobuchi_eps_md;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> parity_forge::Result<()> {
    let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(19), 8, 3, &[0, 1]);
    let (sigma, rep) = cobuchi_eps_md(&m, &rat(1, 10))?;
    println!(
        "eps1 {} eps2 {} k {} tau1 {}",
        fmt_rat(&rep.eps1),
        fmt_rat(&rep.eps2),
        fmt_rat(&rep.k),
        fmt_rat(&rep.tau1)
    );
    for i in 0..m.len() {
        let to = sigma.get(i).map_or("", |t| m.id(t));
        println!("{:4} value {:>8} attains {:>8} {to}", m.id(i), fmt_rat(&rep.values[i]), fmt_rat(&rep.attainment[i]));
    }
    println!("checks ok: {}", rep.checks.ok());
    Ok(())
}
