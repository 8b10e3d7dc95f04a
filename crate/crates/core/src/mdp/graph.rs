//! Graph utilities over index-based adjacency.

use super::ExplicitMdp;

/// Forward-reachable states from `from` under all edges.
pub fn reachable(m: &ExplicitMdp, from: &[usize]) -> Vec<bool> {
    reach_where(m.len(), from, |i| m.succ(i).to_vec())
}

/// Forward reachability over an arbitrary adjacency function.
pub fn reach_where(n: usize, from: &[usize], succ: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    for &s in from {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(s) = stack.pop() {
        for t in succ(s) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Predecessor lists of `m`.
pub fn predecessors(m: &ExplicitMdp) -> Vec<Vec<usize>> {
    let mut pre = vec![Vec::new(); m.len()];
    for i in 0..m.len() {
        for &t in m.succ(i) {
            pre[t].push(i);
        }
    }
    pre
}

/// Strongly connected components of the subgraph induced by `alive`, in
/// Tarjan emission order: every SCC comes after all SCCs it can reach.
pub fn sccs(n: usize, alive: &[bool], succ: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if !alive[root] || index[root] != UNSEEN {
            continue;
        }
        // (node, successor list, next position)
        let mut work: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        let adj: Vec<usize> = succ(root).into_iter().filter(|&t| alive[t]).collect();
        work.push((root, adj, 0));
        while let Some(top) = work.last_mut() {
            let v = top.0;
            if top.2 < top.1.len() {
                let w = top.1[top.2];
                top.2 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let adj: Vec<usize> = succ(w).into_iter().filter(|&t| alive[t]).collect();
                    work.push((w, adj, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(parent) = work.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Bottom SCCs of a chain given by `succ` (all states alive).
pub fn bottom_sccs(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let alive = vec![true; n];
    let comps = sccs(n, &alive, &succ);
    let mut comp_of = vec![0; n];
    for (k, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = k;
        }
    }
    comps
        .iter()
        .enumerate()
        .filter(|(k, c)| c.iter().all(|&s| succ(s).iter().all(|&t| comp_of[t] == *k)))
        .map(|(_, c)| c.clone())
        .collect()
}

/// True if every cycle of `m` is a self-loop on a state whose only successor
/// is itself. Finite MDPs need such absorbing states since every state must
/// have a successor.
pub fn is_acyclic_up_to_sinks(m: &ExplicitMdp) -> Result<(), usize> {
    let alive = vec![true; m.len()];
    for c in sccs(m.len(), &alive, |i| m.succ(i).to_vec()) {
        if c.len() > 1 {
            return Err(c[0]);
        }
        let s = c[0];
        if m.succ(s).contains(&s) && m.succ(s).len() > 1 {
            return Err(s);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;

    #[test]
    fn chain_reachability() {
        let m = MdpBuilder::new()
            .controlled("a", 0, &["b"])
            .controlled("b", 0, &["c"])
            .controlled("c", 0, &["c"])
            .build()
            .unwrap();
        assert_eq!(reachable(&m, &[0]), vec![true, true, true]);
        assert_eq!(reachable(&m, &[2]), vec![false, false, true]);
    }

    #[test]
    fn sccs_come_after_their_successors() {
        // 0 -> 1 <-> 2 -> 3
        let adj = [vec![1], vec![2], vec![1, 3], vec![3]];
        let comps = sccs(4, &[true; 4], |i| adj[i].clone());
        assert_eq!(comps, vec![vec![3], vec![1, 2], vec![0]]);
        assert_eq!(bottom_sccs(4, |i| adj[i].clone()), vec![vec![3]]);
    }

    #[test]
    fn acyclicity_allows_absorbing_loops_only() {
        let m = MdpBuilder::new()
            .controlled("a", 0, &["b", "c"])
            .controlled("b", 0, &["b"])
            .controlled("c", 0, &["c"])
            .build()
            .unwrap();
        assert!(is_acyclic_up_to_sinks(&m).is_ok());
        let m = MdpBuilder::new().controlled("a", 0, &["a", "b"]).controlled("b", 0, &["b"]).build().unwrap();
        assert_eq!(is_acyclic_up_to_sinks(&m), Err(0));
    }
}
