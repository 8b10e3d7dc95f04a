use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mdp::ExplicitMdp;
use crate::num::to_f64;

/// A sampled finite prefix of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRun {
    pub states: Vec<usize>,
    pub induced: bool,
}

/// Samples `steps` transitions of `chain` from `start`. Controlled states,
/// if any, take their lowest-index successor.
pub fn sample_run(chain: &ExplicitMdp, start: usize, steps: usize, seed: u64) -> PartialRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(chain, start, steps, &mut rng)
}

pub(crate) fn sample_with(chain: &ExplicitMdp, start: usize, steps: usize, rng: &mut impl Rng) -> PartialRun {
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = start;
    states.push(s);
    for _ in 0..steps {
        s = if chain.is_controlled(s) {
            *chain.succ(s).iter().min().expect("successor")
        } else {
            let u: f64 = rng.gen();
            let st = chain.state(s);
            let mut acc = 0.0;
            let mut pick = *st.succ.last().expect("successor");
            for (t, p) in st.succ.iter().zip(&st.prob) {
                acc += to_f64(p);
                if u < acc {
                    pick = *t;
                    break;
                }
            }
            pick
        };
        states.push(s);
    }
    PartialRun { states, induced: true }
}

/// Samples `n` runs with one generator seeded once.
pub fn sample_runs(chain: &ExplicitMdp, start: usize, steps: usize, n: usize, seed: u64) -> Vec<PartialRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_with(chain, start, steps, &mut rng)).collect()
}
