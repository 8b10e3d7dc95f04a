//! Finite encodings of the derived objectives as plain parity objectives.

use crate::mdp::{ExplicitMdp, State};

/// Colors of absorbing sinks made by the encodings.
pub const LOSE_COLOR: u32 = 1;
pub const WIN_COLOR: u32 = 2;

/// Same indices and ids; states in `lose`/`win` become absorbing with a
/// losing/winning color and the rest are recolored by `recolor`.
pub fn sink_encode(m: &ExplicitMdp, lose: &[bool], win: &[bool], recolor: impl Fn(usize, u32) -> u32) -> ExplicitMdp {
    let mut out = m.with_colors(recolor);
    for i in 0..m.len() {
        if win[i] {
            out.replace_state(i, State::absorbing("", WIN_COLOR, i));
        } else if lose[i] {
            out.replace_state(i, State::absorbing("", LOSE_COLOR, i));
        }
    }
    out
}

/// Win through color `e` while avoiding `avoid`: avoided states and colors
/// above `e` are losing sinks, `e` becomes 2 and smaller colors 1.
pub fn theta(m: &ExplicitMdp, avoid: &[bool], e: u32) -> ExplicitMdp {
    let lose: Vec<bool> = (0..m.len()).map(|i| avoid[i] || m.color(i) > e).collect();
    let none = vec![false; m.len()];
    sink_encode(m, &lose, &none, |_, c| if c == e { 2 } else { 1 })
}

/// Parity while never entering `avoid`.
pub fn avoiding(m: &ExplicitMdp, avoid: &[bool]) -> ExplicitMdp {
    sink_encode(m, avoid, &vec![false; m.len()], |_, c| c)
}

/// Product encoding of "reach a core, or win through a color above `e`
/// without ever visiting `fixed`". Node `2s + f` is state `s` with flag `f`
/// recording a visit to `fixed`; the node of `s` at the start of a run is
/// `2s + fixed[s]`.
#[derive(Clone, Debug)]
pub struct PsiProduct {
    pub mdp: ExplicitMdp,
}

impl PsiProduct {
    pub fn start(&self, s: usize, fixed: &[bool]) -> usize {
        2 * s + fixed[s] as usize
    }
}

pub fn psi(m: &ExplicitMdp, fixed: &[bool], cores: &[bool], e: u32) -> PsiProduct {
    let node = |t: usize, f: bool| 2 * t + (f || fixed[t]) as usize;
    let mut states = Vec::with_capacity(2 * m.len());
    for s in 0..m.len() {
        for f in [false, true] {
            let me = 2 * s + f as usize;
            let id = format!("{}|{}", m.id(s), f as u8);
            if cores[s] {
                states.push(State::absorbing(id, WIN_COLOR, me));
                continue;
            }
            let color = if f || m.color(s) <= e { 1 } else { m.color(s) };
            let st = m.state(s);
            let mut succ: Vec<usize> = Vec::new();
            let mut prob = Vec::new();
            for (k, &t) in st.succ.iter().enumerate() {
                let n = node(t, f);
                match succ.iter().position(|&x| x == n) {
                    Some(j) if !st.is_controlled() => prob[j] += &st.prob[k],
                    Some(_) => {}
                    None => {
                        succ.push(n);
                        if !st.is_controlled() {
                            prob.push(st.prob[k].clone());
                        }
                    }
                }
            }
            states.push(if st.is_controlled() {
                State::controlled(id, color, succ)
            } else {
                State::random(id, color, succ.into_iter().zip(prob).collect())
            });
        }
    }
    let initial = m.initial().iter().map(|&s| node(s, false)).collect();
    PsiProduct { mdp: ExplicitMdp::new(states, initial) }
}
