//! Bounded-radius neighbourhoods.

use std::collections::{BTreeSet, VecDeque};

use crate::mdp::{Branching, ExplicitMdp, MdpModel};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bubble {
    pub center: Vec<usize>,
    pub radius: usize,
    pub members: Vec<bool>,
}

impl Bubble {
    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// States reachable from `r` in at most `l` steps.
pub fn bubble(m: &ExplicitMdp, r: &[usize], l: usize) -> Bubble {
    let mut depth = vec![usize::MAX; m.len()];
    let mut queue = VecDeque::new();
    for &s in r {
        if depth[s] != 0 {
            depth[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        if depth[s] == l {
            continue;
        }
        for &t in m.succ(s) {
            if depth[t] == usize::MAX {
                depth[t] = depth[s] + 1;
                queue.push_back(t);
            }
        }
    }
    Bubble { center: r.to_vec(), radius: l, members: depth.iter().map(|&d| d != usize::MAX).collect() }
}

/// Bubble over a lazy model. Infinite enumerations are cut at `cap` if given
/// and rejected otherwise.
pub fn bubble_model<M: MdpModel + ?Sized>(
    m: &M,
    r: &[String],
    l: usize,
    cap: Option<usize>,
) -> Result<BTreeSet<String>> {
    let mut seen: BTreeSet<String> = r.iter().cloned().collect();
    let mut layer: Vec<String> = seen.iter().cloned().collect();
    for _ in 0..l {
        let mut next = Vec::new();
        for s in &layer {
            let succs = m.successors(s);
            let finite = m.declared_finitely_branching() || succs.branching == Branching::Finite;
            let it: Box<dyn Iterator<Item = _>> = match (finite, cap) {
                (true, _) => succs.iter,
                (false, Some(c)) => Box::new(succs.iter.take(c)),
                (false, None) => return Err(Error::InfiniteBranch(s.clone())),
            };
            for (t, _) in it {
                if seen.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        layer = next;
    }
    Ok(seen)
}
