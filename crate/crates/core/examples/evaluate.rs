//! Evaluates a strategy exactly and by simulation.

use parity_forge::analysis::{solve_parity, strategy_attainment, Objective};
use parity_forge::cli::wilson;
use parity_forge::gallery::fig3;
use parity_forge::num::{fmt_rat, rat};
use parity_forge::strategy::{induce_chain, sample_runs};

fn main() -> parity_forge::Result<()> {
    let m = fig3(&rat(3, 5));
    let sigma = solve_parity(&m).witness.to_strategy(&m);
    let exact = strategy_attainment(&m, &sigma, m.initial(), &Objective::Parity)?;
    let chain = induce_chain(&m, &sigma, m.initial())?.chain;
    let n = 10_000;
    let runs = sample_runs(&chain, chain.initial()[0], 40, n, 1);
    let wins = runs.iter().filter(|r| chain.color(*r.states.last().unwrap()) % 2 == 0).count();
    let (lo, hi) = wilson(wins, n);
    println!("exact {} simulated {:.4} in [{lo:.4}, {hi:.4}]", fmt_rat(&exact[0]), wins as f64 / n as f64);
    Ok(())
}
