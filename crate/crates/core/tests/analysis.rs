mod common;

use num::{One, Zero};
use parity_forge::analysis::{
    chain_values, check_levy, check_return_to_safe, ec_decomposition, safe_set, solve, solve_interval, solve_parity,
    solve_reach, solve_safety, LevyParams, Objective, SafeFlavor, ValueReport,
};
use parity_forge::gallery::{random_chain, random_dag, random_mdp};
use parity_forge::mdp::MdpBuilder;
use parity_forge::num::{rat, to_f64, Rat};
use parity_forge::strategy::MdStrategy;
use parity_forge::ExplicitMdp;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coin(win_color: u32, lose_color: u32) -> ExplicitMdp {
    MdpBuilder::new()
        .random("s", 1, &[("w", rat(1, 2)), ("l", rat(1, 2))])
        .controlled("w", win_color, &["w"])
        .controlled("l", lose_color, &["l"])
        .build()
        .unwrap()
}

fn brute_reach(m: &ExplicitMdp, target: &[bool]) -> Vec<Rat> {
    let mut best = vec![Rat::zero(); m.len()];
    for c in common::all_md(m) {
        for (b, v) in best.iter_mut().zip(common::chain_reach(&common::md_rows(m, &c), target)) {
            if v > *b {
                *b = v;
            }
        }
    }
    best
}

/// Fair gambler's ruin on 0..=4, absorbing and winning at 4.
fn gambler() -> ExplicitMdp {
    let mut b = MdpBuilder::new().random("g0", 1, &[("g0", Rat::one())]);
    for i in 1..4 {
        let (lo, hi) = (format!("g{}", i - 1), format!("g{}", i + 1));
        b = b.random(&format!("g{i}"), 1, &[(&lo, rat(1, 2)), (&hi, rat(1, 2))]);
    }
    b.random("g4", 2, &[("g4", Rat::one())]).build().unwrap()
}

#[test]
fn reach_examples() {
    let m = coin(2, 1);
    assert!(solve_reach(&m, &[true, false, false]).values[0].is_one());
    assert_eq!(solve_reach(&m, &[false, true, false]).values[0], rat(1, 2));

    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..100 {
        let m = random_mdp(&mut rng, 5, 3, &[0, 1]);
        let target = m.mask_where(|c| c == 1);
        let sol = solve_reach(&m, &target);
        assert_eq!(sol.values, brute_reach(&m, &target));
        let att = common::chain_reach(&common::md_rows(&m, &sol.witness.0), &target);
        assert_eq!(att, sol.values);
    }
}

#[test]
fn safety_examples() {
    let m = MdpBuilder::new().controlled("a", 1, &["a"]).controlled("t", 1, &["t"]).build().unwrap();
    assert!(solve_safety(&m, &[false, true]).values.iter().take(1).all(|v| v.is_one()));

    let leak = MdpBuilder::new()
        .random("s", 1, &[("s", rat(3, 4)), ("t", rat(1, 4))])
        .controlled("t", 1, &["t"])
        .build()
        .unwrap();
    assert_eq!(solve_safety(&leak, &[false, true]).values, vec![Rat::zero(), Rat::zero()]);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let m = random_dag(&mut rng, 12, 3, &[0, 1]);
        let bad = m.mask_where(|c| c == 1);
        let sol = solve_safety(&m, &bad);
        assert_eq!(sol.values, common::dag_safety(&m, &bad, None));
        assert_eq!(common::dag_safety(&m, &bad, Some(&sol.witness.0)), sol.values);
    }
}

#[test]
fn parity_examples() {
    let loop2 =
        MdpBuilder::new().random("a", 1, &[("b", Rat::one())]).random("b", 2, &[("a", Rat::one())]).build().unwrap();
    assert!(solve_parity(&loop2).values.iter().all(|v| v.is_one()));
    assert_eq!(solve_parity(&coin(2, 1)).values[0], rat(1, 2));

    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..150 {
        let m = random_mdp(&mut rng, 6, 3, &[0, 1, 2, 3, 4]);
        let sol = solve_parity(&m);
        assert_eq!(sol.values, common::brute_parity(&m));
        assert_eq!(common::md_parity(&m, &sol.witness), sol.values);
    }
}

#[test]
fn parity_splits_by_top_color() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..60 {
        let m = random_mdp(&mut rng, 7, 3, &[0, 1, 2, 3, 4]);
        let sol = solve_parity(&m);
        let rows = common::md_rows(&m, &sol.witness.0);
        let mut even = vec![Rat::zero(); m.len()];
        let mut total = vec![Rat::zero(); m.len()];
        for e in 0..=4u32 {
            // recolor so that "2 is the top color seen infinitely often"
            // means exactly "e is"
            let cols: Vec<u32> = (0..m.len())
                .map(|i| match m.color(i).cmp(&e) {
                    std::cmp::Ordering::Less => 1,
                    std::cmp::Ordering::Equal => 2,
                    std::cmp::Ordering::Greater => 3,
                })
                .collect();
            let p = common::chain_parity(&rows, &cols);
            for s in 0..m.len() {
                total[s] += &p[s];
                if e % 2 == 0 {
                    even[s] += &p[s];
                }
            }
        }
        assert_eq!(even, sol.values);
        assert!(total.iter().all(|t| t.is_one()));
    }
}

#[test]
fn chain_lassos() {
    let lasso = |c: u32| {
        MdpBuilder::new()
            .random("a", 3, &[("b", Rat::one())])
            .random("b", 0, &[("c", Rat::one())])
            .random("c", c, &[("b", Rat::one())])
            .build()
            .unwrap()
    };
    assert!(chain_values(&lasso(2), &Objective::Parity).iter().all(|v| v.is_one()));
    assert!(chain_values(&lasso(1), &Objective::Parity).iter().all(|v| v.is_zero()));
}

#[test]
fn safe_set_extremes() {
    let m = coin(2, 1);
    let all = safe_set(&m, None, &Objective::Parity, &Rat::zero()).unwrap();
    assert_eq!(all.count(), 3);
    assert_eq!(all.flavor, SafeFlavor::Value);
    let sure = safe_set(&m, None, &Objective::Parity, &Rat::one()).unwrap();
    assert_eq!(m.ids_of(&sure.members), vec!["w"]);
    let by = safe_set(&m, Some(&MdStrategy::lowest(&m)), &Objective::Parity, &rat(1, 2)).unwrap();
    assert_eq!(by.flavor, SafeFlavor::Strategy);
    assert_eq!(m.ids_of(&by.members), vec!["s", "w"]);
}

#[test]
fn gambler_stays_safe() {
    let g = gambler();
    let v = chain_values(&g, &Objective::Parity);
    assert_eq!(v, (0..5).map(|i| rat(i, 4)).collect::<Vec<_>>());
    let p = LevyParams { beta1: rat(1, 4), beta2: rat(3, 4), ..LevyParams::default() };
    let rep = check_levy(&g, &p);
    assert!(rep.ok(), "{rep:?}");
    // exact left-hand side from g3: never falling below 1/4 means never
    // hitting g0
    let rows: common::Rows = (0..g.len()).map(|i| g.random_row(i)).collect();
    let hit0 = common::chain_reach(&rows, &[true, false, false, false, false]);
    let lhs = Rat::one() - &hit0[3];
    assert_eq!(lhs, rat(3, 4));
    assert!(lhs >= rat(2, 3));
}

#[test]
fn levy_and_return_to_safe_on_random_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..60 {
        let c = random_chain(&mut rng, 7, 3, &[0, 1, 2, 3]);
        let rep = check_levy(&c, &LevyParams::default());
        assert!(rep.ok(), "{:?}", rep.failures());
        let bad = c.mask_where(|x| x % 2 == 1);
        for tau in [rat(1, 2), rat(3, 4)] {
            assert!(check_return_to_safe(&c, &bad, &tau).ok);
        }
    }
}

#[test]
fn interval_mode_brackets_exact_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for _ in 0..60 {
        let m = random_mdp(&mut rng, 8, 3, &[0, 1, 2, 3]);
        for obj in
            [Objective::Parity, Objective::Reach(m.mask_where(|c| c == 2)), Objective::Safety(m.mask_where(|c| c == 1))]
        {
            let exact = solve(&m, &obj).values;
            for (v, (lo, hi)) in exact.iter().zip(solve_interval(&m, &obj, 1e-9)) {
                let x = to_f64(v);
                assert!(lo <= hi && hi - lo <= 1e-9);
                assert!(lo <= x + 1e-12 && x <= hi + 1e-12, "{x} not in [{lo}, {hi}]");
            }
        }
    }
}

#[test]
fn mec_decomposition_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..80 {
        let m = random_mdp(&mut rng, 8, 3, &[0, 1, 2, 3]);
        let d = ec_decomposition(&m);
        let values = solve_parity(&m).values;
        let mut owner = vec![None; m.len()];
        for (k, mec) in d.mecs.iter().enumerate() {
            let inside = |t: usize| mec.states.contains(&t);
            for &s in &mec.states {
                assert!(owner[s].is_none(), "MECs overlap");
                owner[s] = Some(k);
                if m.is_controlled(s) {
                    assert!(m.succ(s).iter().any(|&t| inside(t)));
                } else {
                    assert!(m.succ(s).iter().all(|&t| inside(t)));
                }
                if mec.winning {
                    assert!(values[s].is_one());
                }
            }
            // strongly connected through internal edges
            for &s in &mec.states {
                let mut seen = vec![s];
                let mut i = 0;
                while i < seen.len() {
                    let x = seen[i];
                    for &t in m.succ(x) {
                        if inside(t) && !seen.contains(&t) {
                            seen.push(t);
                        }
                    }
                    i += 1;
                }
                assert_eq!(seen.len(), mec.states.len());
            }
            assert_eq!(mec.max_color, mec.states.iter().map(|&s| m.color(s)).max().unwrap());
        }
    }
}

#[test]
fn value_report_json() {
    let m = coin(2, 1);
    let sol = solve_parity(&m);
    let ids = (0..m.len()).map(|i| m.id(i).to_string()).collect();
    let mut rep = ValueReport::exact("parity".into(), ids, &sol.values);
    rep.witness = Some(sol.witness.to_strategy(&m));
    let j = rep.to_json();
    assert_eq!(j["mode"], "exact");
    assert_eq!(j["values"], serde_json::json!({"s": "1/2", "w": "1/1", "l": "0/1"}));
    assert_eq!(j["witness"]["class"], "md");
    let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["objective", "mode", "values", "witness"]);
}
