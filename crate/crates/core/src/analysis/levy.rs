//! Exact checks of the zero-one-law inequalities on finite chains.

use num::{One, Zero};
use serde_json::{json, Value as Json};

use super::linear::reach_probabilities;
use super::{chain_values, Objective};
use crate::mdp::graph::bottom_sccs;
use crate::mdp::ExplicitMdp;
use crate::num::{fmt_rat, rat, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub suite: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(suite: &str) -> Self {
        CheckReport { suite: suite.into(), items: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.items.push(CheckItem { name: name.into(), ok, detail: detail.into() });
    }

    pub fn ok(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| !i.ok).collect()
    }

    pub fn extend(&mut self, other: CheckReport) {
        let prefix = other.suite.clone();
        for mut it in other.items {
            if !prefix.is_empty() {
                it.name = format!("{prefix}/{}", it.name);
            }
            self.items.push(it);
        }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "suite": self.suite,
            "passed": self.ok(),
            "items": self.items.iter().map(|i| json!({"name": i.name, "ok": i.ok, "detail": i.detail})).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevyParams {
    pub beta1: Rat,
    pub beta2: Rat,
    pub beta: Rat,
    pub eps: Rat,
    pub eps_prime: Rat,
    pub max_n: usize,
    pub cylinder_len: usize,
}

impl Default for LevyParams {
    fn default() -> Self {
        LevyParams {
            beta1: rat(1, 4),
            beta2: rat(3, 4),
            beta: rat(1, 2),
            eps: rat(1, 10),
            eps_prime: rat(1, 100),
            max_n: 500,
            cylinder_len: 4,
        }
    }
}

fn rows_of(c: &ExplicitMdp) -> Vec<Vec<(usize, Rat)>> {
    (0..c.len())
        .map(|i| {
            if c.is_controlled(i) {
                vec![(*c.succ(i).iter().min().expect("successor"), Rat::one())]
            } else {
                c.random_row(i)
            }
        })
        .collect()
}

/// Runs checks (a)-(d) for the parity objective of chain `c`.
pub fn check_levy(c: &ExplicitMdp, p: &LevyParams) -> CheckReport {
    let mut rep = CheckReport::new("levy");
    let n = c.len();
    let rows = rows_of(c);
    let v = chain_values(c, &Objective::Parity);
    let colors: Vec<u32> = (0..n).map(|i| c.color(i)).collect();

    // (a) P_s(G Safe(b1)) >= (b2 - b1)/(1 - b1) on Safe(b2)
    let safe1: Vec<bool> = v.iter().map(|x| *x >= p.beta1).collect();
    let leave: Vec<bool> = safe1.iter().map(|b| !b).collect();
    let stay: Vec<Rat> = reach_probabilities(&rows, &leave).into_iter().map(|x| Rat::one() - x).collect();
    let bound = if p.beta1 < Rat::one() { (&p.beta2 - &p.beta1) / (Rat::one() - &p.beta1) } else { Rat::one() };
    let bad_a = (0..n).find(|&s| v[s] >= p.beta2 && stay[s] < bound);
    rep.push(
        "a:stay-safe",
        bad_a.is_none(),
        match bad_a {
            None => format!("P(G Safe({})) >= {} on Safe({})", fmt_rat(&p.beta1), fmt_rat(&bound), fmt_rat(&p.beta2)),
            Some(s) => format!("state {}: {} < {}", c.id(s), fmt_rat(&stay[s]), fmt_rat(&bound)),
        },
    );

    // (b) FG Safe(b) and the objective agree almost surely
    let safe: Vec<bool> = v.iter().map(|x| *x >= p.beta).collect();
    let mut fg_not_win = vec![false; n];
    let mut win_not_fg = vec![false; n];
    for b in bottom_sccs(n, |i| rows[i].iter().map(|(t, _)| *t).collect()) {
        let inside = b.iter().all(|&s| safe[s]);
        let wins = b.iter().map(|&s| colors[s]).max().unwrap_or(1) % 2 == 0;
        for &s in &b {
            fg_not_win[s] = inside && !wins;
            win_not_fg[s] = wins && !inside;
        }
    }
    let d1 = reach_probabilities(&rows, &fg_not_win);
    let d2 = reach_probabilities(&rows, &win_not_fg);
    let bad_b = (0..n).find(|&s| !d1[s].is_zero() || !d2[s].is_zero());
    rep.push(
        "b:tail-agreement",
        bad_b.is_none(),
        match bad_b {
            None => "both differences are 0".to_string(),
            Some(s) => format!("state {}: {} and {}", c.id(s), fmt_rat(&d1[s]), fmt_rat(&d2[s])),
        },
    );

    // (c) P(phi and reach Safe(1-eps) within n) >= P(phi) - eps'
    let x: Vec<bool> = v.iter().map(|val| *val >= Rat::one() - &p.eps).collect();
    let base: Vec<Rat> = (0..n).map(|s| if x[s] { v[s].clone() } else { Rat::zero() }).collect();
    let mut hist: Vec<Vec<Rat>> = vec![base];
    let mut found = None;
    for k in 0..=p.max_n {
        let h = &hist[k];
        if (0..n).all(|s| h[s] >= &v[s] - &p.eps_prime) {
            found = Some(k);
            break;
        }
        let next = (0..n)
            .map(|s| if x[s] { v[s].clone() } else { rows[s].iter().fold(Rat::zero(), |a, (t, q)| a + q * &h[*t]) })
            .collect();
        hist.push(next);
    }
    rep.push(
        "c:finite-horizon",
        found.is_some(),
        match found {
            Some(k) => format!("n = {k} suffices for eps' = {}", fmt_rat(&p.eps_prime)),
            None => format!("no n <= {} found", p.max_n),
        },
    );

    // (d) quasi-tail with E' = phi and F^{<=n} Safe(1-eps): on every cylinder
    // R of bounded length, P(E' and R) >= P(phi and R) - eps'
    let Some(nn) = found else {
        rep.push("d:quasi-tail", false, "skipped: no horizon from (c)");
        return rep;
    };
    let mut worst: Option<(String, Rat, Rat)> = None;
    let mut count = 0usize;
    for s0 in 0..n {
        let mut stack = vec![(s0, Rat::one(), x[s0], 0usize, c.id(s0).to_string())];
        while let Some((s, pr, hit, k, path)) = stack.pop() {
            count += 1;
            let pe = &pr * &v[s];
            let pe2 = if hit {
                pe.clone()
            } else if k <= nn {
                &pr * &hist[nn - k][s]
            } else {
                Rat::zero()
            };
            if pe2 < &pe - &p.eps_prime && worst.is_none() {
                worst = Some((path.clone(), pe2, pe));
            }
            if k < p.cylinder_len {
                for (t, q) in &rows[s] {
                    let hit2 = hit || (k < nn && x[*t]);
                    stack.push((*t, &pr * q, hit2, k + 1, format!("{path} {}", c.id(*t))));
                }
            }
        }
    }
    rep.push(
        "d:quasi-tail",
        worst.is_none(),
        match worst {
            None => format!("{count} cylinders checked"),
            Some((path, a, b)) => format!("cylinder [{path}]: {} < {} - eps'", fmt_rat(&a), fmt_rat(&b)),
        },
    );
    rep
}

/// P(FG not Safe(tau) and FG outside bad) for the safety objective avoiding
/// `bad`; must be zero everywhere.
pub fn check_return_to_safe(c: &ExplicitMdp, bad: &[bool], tau: &Rat) -> CheckItem {
    let n = c.len();
    let rows = rows_of(c);
    let u: Vec<Rat> = reach_probabilities(&rows, bad).into_iter().map(|x| Rat::one() - x).collect();
    let mut ev = vec![false; n];
    for b in bottom_sccs(n, |i| rows[i].iter().map(|(t, _)| *t).collect()) {
        let never_safe = b.iter().all(|&s| u[s] < *tau);
        let avoids = b.iter().all(|&s| !bad[s]);
        for &s in &b {
            ev[s] = never_safe && avoids;
        }
    }
    let pr = reach_probabilities(&rows, &ev);
    let bad_state = (0..n).find(|&s| !pr[s].is_zero());
    CheckItem {
        name: format!("return-to-safe({})", fmt_rat(tau)),
        ok: bad_state.is_none(),
        detail: match bad_state {
            None => "probability 0 everywhere".into(),
            Some(s) => format!("state {}: {}", c.id(s), fmt_rat(&pr[s])),
        },
    }
}
