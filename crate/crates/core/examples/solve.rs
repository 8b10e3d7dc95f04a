//! Exact parity values and an optimal MD witness for a small model.

use parity_forge::analysis::solve_parity;
use parity_forge::mdp::MdpBuilder;
use parity_forge::num::{fmt_rat, rat};

fn main() -> parity_forge::Result<()> {
    let m = MdpBuilder::new()
        .controlled("s", 1, &["risky", "safe"])
        .random("risky", 1, &[("win", rat(2, 3)), ("lose", rat(1, 3))])
        .random("safe", 1, &[("win", rat(1, 2)), ("s", rat(1, 2))])
        .controlled("win", 2, &["win"])
        .controlled("lose", 1, &["lose"])
        .build()?;
    let sol = solve_parity(&m);
    for i in 0..m.len() {
        let choice = sol.witness.get(i).map(|t| m.id(t).to_string()).unwrap_or_default();
        println!("{:6} {:>4} {}", m.id(i), fmt_rat(&sol.values[i]), choice);
    }
    Ok(())
}
