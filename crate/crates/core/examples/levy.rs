//! Checks the Lévy zero-one behavior on a fair gambler's ruin.

use num::One;
use parity_forge::analysis::{check_levy, LevyParams};
use parity_forge::mdp::MdpBuilder;
use parity_forge::num::rat;
use parity_forge::Rat;

fn main() -> parity_forge::Result<()> {
    let mut b = MdpBuilder::new().random("g0", 1, &[("g0", Rat::one())]);
    for i in 1..6 {
        let (lo, hi) = (format!("g{}", i - 1), format!("g{}", i + 1));
        b = b.random(&format!("g{i}"), 1, &[(&lo, rat(1, 2)), (&hi, rat(1, 2))]);
    }
    let c = b.random("g6", 2, &[("g6", Rat::one())]).build()?;
    let rep = check_levy(&c, &LevyParams::default());
    for item in &rep.items {
        println!("{} {}: {}", if item.ok { "ok  " } else { "FAIL" }, item.name, item.detail);
    }
    Ok(())
}
