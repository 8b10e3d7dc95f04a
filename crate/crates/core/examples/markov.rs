//! Unrolls time into the state space and reads off a Markov strategy.

use parity_forge::analysis::{solve_parity, strategy_attainment, Objective};
use parity_forge::gallery::fig3;
use parity_forge::num::{fmt_rat, rat};
use parity_forge::transform::{acyclify, markov_from_acyclified, truncate, TruncMode};
use parity_forge::MdpModel;

fn main() -> parity_forge::Result<()> {
    let m = fig3(&rat(2, 3));
    let a = acyclify(m.clone());
    let t = truncate(&a, &a.initial(), 6, 8, TruncMode::Pessimistic)?;
    println!("acyclified truncation: {} states", t.len());
    let w = solve_parity(&t).witness.to_strategy(&t).without_sinks();
    let sigma = markov_from_acyclified(&w)?;
    println!("horizon {:?}", sigma.horizon);
    let att = strategy_attainment(&m, &sigma, m.initial(), &Objective::Parity)?;
    println!("attains {} from a (value {})", fmt_rat(&att[0]), fmt_rat(&solve_parity(&m).values[0]));
    Ok(())
}
