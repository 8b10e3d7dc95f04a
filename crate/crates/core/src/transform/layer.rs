//! The layered MDP: two bit-indexed copies of every state and transition,
//! so that one bit of memory becomes part of the state.

use num::One;

use crate::mdp::{ExplicitMdp, Kind, State};
use crate::num::Rat;
use crate::strategy::{MdStrategy, Mode, Strategy, StrategyClass};
use crate::Result;

/// Provenance of a layered state. `k` indexes the source state's successor
/// list, so `Trans { src, k, .. }` is the transition `src -> succ(src)[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerNode {
    State { src: usize, bit: u8 },
    Trans { src: usize, k: usize, bit: u8 },
}

#[derive(Clone, Debug)]
pub struct LayeredMdp {
    pub mdp: ExplicitMdp,
    pub sibling: Vec<usize>,
    pub origin: Vec<LayerNode>,
    src_len: usize,
    trans_base: Vec<usize>,
}

/// Builds the layered MDP of `m`. State copies come first (`2s + b`), then
/// transition copies in source order.
pub fn layer(m: &ExplicitMdp) -> LayeredMdp {
    let n = m.len();
    let mut trans_base = Vec::with_capacity(n);
    let mut acc = 0;
    for s in 0..n {
        trans_base.push(acc);
        acc += m.succ(s).len();
    }
    let tnode = |s: usize, k: usize, b: usize| 2 * n + 2 * (trans_base[s] + k) + b;
    let mut states = Vec::with_capacity(2 * (n + acc));
    let mut origin = Vec::with_capacity(2 * (n + acc));
    for s in 0..n {
        for b in 0..2 {
            let id = format!("(q:{},{b})", m.id(s));
            let st = if m.is_controlled(s) {
                State::controlled(id, m.color(s), (0..m.succ(s).len()).map(|k| tnode(s, k, b)).collect())
            } else {
                State::random(
                    id,
                    m.color(s),
                    m.state(s).prob.iter().enumerate().map(|(k, p)| (tnode(s, k, b), p.clone())).collect(),
                )
            };
            states.push(st);
            origin.push(LayerNode::State { src: s, bit: b as u8 });
        }
    }
    for s in 0..n {
        for (k, &t) in m.succ(s).iter().enumerate() {
            for b in 0..2 {
                let id = format!("(t:{}->{},{b})", m.id(s), m.id(t));
                states.push(State::controlled(id, m.color(t), vec![2 * t, 2 * t + 1]));
                origin.push(LayerNode::Trans { src: s, k, bit: b as u8 });
            }
        }
    }
    let sibling = (0..states.len()).map(|i| i ^ 1).collect();
    let initial = m.initial().iter().map(|&s| 2 * s).collect();
    LayeredMdp { mdp: ExplicitMdp::new(states, initial), sibling, origin, src_len: n, trans_base }
}

impl LayeredMdp {
    pub fn state_node(&self, s: usize, bit: u8) -> usize {
        2 * s + bit as usize
    }

    pub fn trans_node(&self, s: usize, k: usize, bit: u8) -> usize {
        2 * self.src_len + 2 * (self.trans_base[s] + k) + bit as usize
    }

    pub fn source_len(&self) -> usize {
        self.src_len
    }

    /// Smallest sibling-closed superset of `mask`.
    pub fn closure(&self, mask: &[bool]) -> Vec<bool> {
        (0..mask.len()).map(|i| mask[i] || mask[self.sibling[i]]).collect()
    }

    pub fn is_closed(&self, mask: &[bool]) -> bool {
        (0..mask.len()).all(|i| mask[i] == mask[self.sibling[i]])
    }

    /// Same layering bookkeeping over a re-weighted or re-colored copy of
    /// the layered MDP that keeps the state indices.
    pub fn with_mdp(&self, mdp: ExplicitMdp) -> LayeredMdp {
        assert_eq!(mdp.len(), self.mdp.len());
        LayeredMdp { mdp, ..self.clone() }
    }

    /// The 1-bit strategy on the source induced by an MD strategy on the
    /// layered MDP. A controlled state with bit b follows τ to (t,b) and then
    /// to (s',b'); at a random state the bit update reads the realized
    /// transition copy. Missing choices are left out of the table.
    pub fn unlayer_strategy(&self, src: &ExplicitMdp, tau: &MdStrategy) -> Strategy {
        let mut u = Strategy::new(StrategyClass::KBit(1), Mode::bits(0));
        let target_of = |node: usize| match self.origin[node] {
            LayerNode::State { src, bit } => (src, bit),
            LayerNode::Trans { .. } => unreachable!("transition copies lead to state copies"),
        };
        for s in 0..src.len() {
            for b in 0..2u8 {
                if src.is_controlled(s) {
                    let Some(tn) = tau.get(self.state_node(s, b)) else { continue };
                    let Some(next) = tau.get(tn) else { continue };
                    let (t, b2) = target_of(next);
                    u.set(Mode::bits(b as u32), src.id(s), src.id(t), Mode::bits(b2 as u32));
                } else {
                    for k in 0..src.succ(s).len() {
                        let Some(next) = tau.get(self.trans_node(s, k, b)) else { continue };
                        let (t, b2) = target_of(next);
                        if b2 != b {
                            u.set(Mode::bits(b as u32), src.id(s), src.id(t), Mode::bits(b2 as u32));
                        }
                    }
                }
            }
        }
        u
    }

    /// The MD strategy on the layered MDP corresponding to a 1-bit strategy
    /// on the source. Transition copies the source strategy never uses keep
    /// their bit; missing source choices default to the lowest successor.
    pub fn layer_strategy(&self, src: &ExplicitMdp, u: &Strategy) -> Result<MdStrategy> {
        let mut tau = vec![None; self.mdp.len()];
        for s in 0..src.len() {
            for b in 0..2u8 {
                let mode = Mode::bits(b as u32);
                for (k, &t) in src.succ(s).iter().enumerate() {
                    tau[self.trans_node(s, k, b)] = Some(self.state_node(t, b));
                }
                if src.is_controlled(s) {
                    let (k, b2) = match u.choice(mode, src.id(s)) {
                        Some((to, m2)) => {
                            let t = src.index_of(to).expect("strategy names source states");
                            let k = src.succ(s).iter().position(|&x| x == t).expect("strategy follows edges");
                            (k, m2.bits as u8)
                        }
                        None => {
                            let low = *src.succ(s).iter().min().expect("successor");
                            (src.succ(s).iter().position(|&x| x == low).expect("present"), b)
                        }
                    };
                    let tn = self.trans_node(s, k, b);
                    tau[self.state_node(s, b)] = Some(tn);
                    tau[tn] = Some(self.state_node(src.succ(s)[k], b2));
                } else {
                    for (k, &t) in src.succ(s).iter().enumerate() {
                        let b2 = u.update(mode, src.id(s), src.id(t)).map(|m| m.bits as u8).unwrap_or(b);
                        tau[self.trans_node(s, k, b)] = Some(self.state_node(t, b2));
                    }
                }
            }
        }
        Ok(MdStrategy(tau))
    }

    fn src_of(&self, i: usize) -> usize {
        match self.origin[i] {
            LayerNode::State { src, .. } | LayerNode::Trans { src, .. } => src,
        }
    }

    /// Layered counterpart of acyclicity up to absorbing sinks: every cycle
    /// stays among the copies of one source state whose only successor is
    /// itself.
    pub fn is_acyclic_up_to_sinks(&self) -> std::result::Result<(), usize> {
        let m = &self.mdp;
        let alive = vec![true; m.len()];
        for c in crate::mdp::graph::sccs(m.len(), &alive, |i| m.succ(i).to_vec()) {
            let cyclic = c.len() > 1 || m.succ(c[0]).contains(&c[0]);
            if !cyclic {
                continue;
            }
            let s = self.src_of(c[0]);
            if c.iter().any(|&i| self.src_of(i) != s || m.succ(i).iter().any(|&j| self.src_of(j) != s)) {
                return Err(c[0]);
            }
        }
        Ok(())
    }

    /// Checks the structural invariants of the construction.
    pub fn check_structure(&self, src: &ExplicitMdp) -> std::result::Result<(), String> {
        let l = &self.mdp;
        if l.len() != 2 * (src.len() + src.edge_count()) {
            return Err(format!("|L| = {} but 2(|S|+|->|) = {}", l.len(), 2 * (src.len() + src.edge_count())));
        }
        for i in 0..l.len() {
            match self.origin[i] {
                LayerNode::State { src: s, bit } => {
                    if l.color(i) != src.color(s) || l.state(i).kind != src.state(s).kind {
                        return Err(format!("state copy {} differs from its source", l.id(i)));
                    }
                    for k in 0..src.succ(s).len() {
                        let tn = self.trans_node(s, k, bit);
                        let want = if src.is_controlled(s) { Rat::one() } else { src.state(s).prob[k].clone() };
                        if l.prob(i, tn) != want {
                            return Err(format!("edge {} -> {} has wrong weight", l.id(i), l.id(tn)));
                        }
                    }
                }
                LayerNode::Trans { src: s, k, .. } => {
                    let t = src.succ(s)[k];
                    if l.state(i).kind != Kind::Controlled || l.color(i) != src.color(t) {
                        return Err(format!("transition copy {} is malformed", l.id(i)));
                    }
                    if l.succ(i) != [2 * t, 2 * t + 1] {
                        return Err(format!("transition copy {} has wrong successors", l.id(i)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use crate::num::rat;

    #[test]
    fn self_loop_layers_to_four_states() {
        let m = MdpBuilder::new().controlled("s", 2, &["s"]).build().unwrap();
        let l = layer(&m);
        assert_eq!(l.mdp.len(), 4);
        let ids: Vec<&str> = (0..4).map(|i| l.mdp.id(i)).collect();
        assert_eq!(ids, vec!["(q:s,0)", "(q:s,1)", "(t:s->s,0)", "(t:s->s,1)"]);
        assert_eq!(l.mdp.succ(0), &[2]);
        assert_eq!(l.mdp.succ(2), &[0, 1]);
        assert!(l.check_structure(&m).is_ok());
    }

    #[test]
    fn random_weights_carry_over() {
        let m = MdpBuilder::new()
            .random("s", 1, &[("a", rat(1, 3)), ("b", rat(2, 3))])
            .controlled("a", 1, &["a"])
            .controlled("b", 2, &["b"])
            .build()
            .unwrap();
        let l = layer(&m);
        let t = l.trans_node(0, 0, 1);
        assert_eq!(l.mdp.prob(1, t), rat(1, 3));
        assert_eq!(l.mdp.color(t), 1);
        assert!(l.mdp.validate().is_valid());
    }
}
