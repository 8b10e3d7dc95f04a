mod common;

use num::{One, Zero};
use parity_forge::analysis::{attainment, solve_parity, solve_reach, solve_safety, Objective};
use parity_forge::gallery::{self, random_dag, random_mdp, Params};
use parity_forge::mdp::{MdpBuilder, MdpModel};
use parity_forge::num::{pow2_neg, rat, Rat};
use parity_forge::strategy::{MdStrategy, Mode};
use parity_forge::synthesis::{
    cobuchi_eps_md, optimal_parity_1bit, parity012_opt_md, plaster_parity, reach_eps_md, safety_eps_md,
    sea_urchin_rounds, thresholds, uniformize_as, AsEngine, OneBitOptions, SpikeEngine, UrchinParams,
};
use parity_forge::transform::{layer, truncate, LayeredMdp, TruncMode};
use parity_forge::{Error, ExplicitMdp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Closure of the bit-0 copies of `states`.
fn l0_of(l: &LayeredMdp, states: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; l.mdp.len()];
    for &s in states {
        mask[l.state_node(s, 0)] = true;
    }
    let c = l.closure(&mask);
    (0..c.len()).filter(|&i| c[i]).collect()
}

// ---- safety and reachability

#[test]
fn safety_tie_and_slack() {
    let m = MdpBuilder::new()
        .controlled("s", 0, &["a", "b"])
        .random("a", 0, &[("a", Rat::one())])
        .random("b", 0, &[("ok", rat(9, 10)), ("t", rat(1, 10))])
        .controlled("ok", 0, &["ok"])
        .controlled("t", 1, &["t"])
        .build()
        .unwrap();
    let bad = m.mask_where(|c| c == 1);
    let v = solve_safety(&m, &bad).values;
    assert_eq!((v[0].clone(), v[1].clone(), v[2].clone()), (Rat::one(), Rat::one(), rat(9, 10)));
    // at index 0 the slack is 1 - eps/2, so 9/10 would not do for eps = 1/10
    let s = safety_eps_md(&m, &bad, &rat(1, 10)).unwrap();
    assert_eq!(s.get(0), Some(1));
    // a large epsilon lets both successors qualify and the lowest index wins
    let s = safety_eps_md(&m, &bad, &rat(9, 10)).unwrap();
    assert_eq!(s.get(0), Some(1));
    let tie = MdpBuilder::new()
        .controlled("s", 0, &["b", "a"])
        .controlled("a", 0, &["a"])
        .controlled("b", 0, &["b"])
        .build()
        .unwrap();
    assert_eq!(safety_eps_md(&tie, &[false; 3], &rat(1, 10)).unwrap().get(0), Some(1));
}

#[test]
fn safety_multiplicative_bound_on_dags() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..60 {
        let m = random_dag(&mut rng, 20, 3, &[0, 1]);
        let bad = m.mask_where(|c| c == 1);
        let val = common::dag_safety(&m, &bad, None);
        for eps in [rat(1, 2), rat(1, 10)] {
            let s = safety_eps_md(&m, &bad, &eps).unwrap();
            let att = common::dag_safety(&m, &bad, Some(&s.0));
            for i in 0..m.len() {
                assert!(att[i] >= &val[i] * (Rat::one() - &eps));
            }
        }
    }
    let cyc = MdpBuilder::new().controlled("a", 0, &["b"]).controlled("b", 0, &["a"]).build().unwrap();
    assert!(matches!(safety_eps_md(&cyc, &[false, false], &rat(1, 10)), Err(Error::NotAcyclic(_))));
    assert!(matches!(safety_eps_md(&cyc, &[false, false], &Rat::zero()), Err(Error::BadParams(_))));
}

#[test]
fn reach_eps_is_the_optimal_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..40 {
        let m = random_mdp(&mut rng, 6, 3, &[0, 1]);
        let t = m.mask_where(|c| c == 1);
        let s = reach_eps_md(&m, &t, &rat(1, 10)).unwrap();
        assert_eq!(common::chain_reach(&common::md_rows(&m, &s.0), &t), solve_reach(&m, &t).values);
    }
}

// ---- co-Büchi

#[test]
fn cobuchi_examples() {
    let zero = MdpBuilder::new().controlled("a", 0, &["a", "b"]).random("b", 0, &[("a", Rat::one())]).build().unwrap();
    let (s, r) = cobuchi_eps_md(&zero, &rat(1, 10)).unwrap();
    assert!(attainment(&zero, &s, &Objective::Parity).unwrap().iter().all(|x| x.is_one()));
    assert_eq!(
        (r.eps1.clone(), r.eps2.clone(), r.k.clone(), r.tau1.clone()),
        (rat(1, 40), rat(1, 40), rat(20, 1), rat(39, 40))
    );
    assert_eq!(r.lambda, rat(1, 1600));
    assert_eq!(r.tau2, Rat::one() - rat(1, 800) + rat(1, 1600));

    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..60 {
        let m = random_mdp(&mut rng, 10, 3, &[0, 1]);
        let val = solve_parity(&m).values;
        for eps in [rat(2, 5), rat(1, 10)] {
            let (s, r) = cobuchi_eps_md(&m, &eps).unwrap();
            let att = common::md_parity(&m, &s);
            let factor = Rat::one() - Rat::one() / &r.k;
            for i in 0..m.len() {
                assert!(att[i] >= &val[i] - &eps);
                assert!(att[i] >= (&val[i] - &r.eps1 - &r.eps2) * &factor);
            }
            assert!(r.checks.ok());
        }
    }
    let three = MdpBuilder::new().controlled("a", 2, &["a"]).build().unwrap();
    assert!(matches!(cobuchi_eps_md(&three, &rat(1, 10)), Err(Error::Precondition(_))));
}

// ---- {0,1,2}-parity and uniformization

#[test]
fn parity012_degenerate_branches() {
    // no color 2: a pure safety game
    let safety = MdpBuilder::new()
        .controlled("s", 0, &["r", "q"])
        .random("r", 0, &[("s", rat(1, 2)), ("x", rat(1, 2))])
        .random("q", 0, &[("q", rat(2, 3)), ("x", rat(1, 3))])
        .controlled("x", 1, &["x"])
        .build()
        .unwrap();
    let (s, rep) = parity012_opt_md(&safety).unwrap();
    assert!(rep.ok());
    assert_eq!(common::md_parity(&safety, &s), common::brute_parity(&safety));
    // Büchi through color 2 with one winning MEC
    let buchi = MdpBuilder::new()
        .controlled("s", 1, &["t", "d"])
        .random("t", 1, &[("s", rat(1, 2)), ("w", rat(1, 2))])
        .controlled("w", 2, &["s"])
        .controlled("d", 1, &["d"])
        .build()
        .unwrap();
    let (s, rep) = parity012_opt_md(&buchi).unwrap();
    assert!(rep.ok());
    assert_eq!(common::md_parity(&buchi, &s), solve_parity(&buchi).values);
    assert!(common::md_parity(&buchi, &s)[0].is_one());
}

#[test]
fn parity012_is_optimal_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for k in 0..100 {
        let m = random_mdp(&mut rng, 8, 3, &[0, 1, 2]);
        let (s, rep) = parity012_opt_md(&m).unwrap();
        assert!(rep.ok());
        let att = common::md_parity(&m, &s);
        if k < 30 {
            assert_eq!(att, common::brute_parity(&m));
        } else {
            assert_eq!(att, solve_parity(&m).values);
        }
    }
}

#[test]
fn uniformize_rounds_and_stitching() {
    let one = MdpBuilder::new().controlled("a", 2, &["b"]).random("b", 1, &[("a", Rat::one())]).build().unwrap();
    let (_, rounds) = uniformize_as(&one, |x, _| Ok(solve_parity(x).witness)).unwrap();
    assert_eq!(rounds, 1);
    let two = MdpBuilder::new().controlled("a", 2, &["a"]).controlled("b", 2, &["b"]).build().unwrap();
    assert_eq!(uniformize_as(&two, |x, _| Ok(solve_parity(x).witness)).unwrap().1, 2);

    // an engine that only cares about its start state and parks every
    // other state on a losing self-loop
    let m = MdpBuilder::new()
        .controlled("b", 1, &["b", "w"])
        .controlled("a", 1, &["a", "b"])
        .controlled("w", 2, &["w"])
        .build()
        .unwrap();
    let local = |x: &ExplicitMdp, s: usize| -> parity_forge::Result<MdStrategy> {
        let w = solve_parity(x).witness;
        let mut seen = vec![false; x.len()];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            if !std::mem::replace(&mut seen[i], true) {
                stack.extend(if x.is_controlled(i) { vec![w.get(i).unwrap()] } else { x.succ(i).to_vec() });
            }
        }
        Ok(MdStrategy(
            (0..x.len()).map(|i| x.is_controlled(i).then(|| if seen[i] { w.get(i).unwrap() } else { i })).collect(),
        ))
    };
    let first = local(&m, 0).unwrap();
    assert!(common::md_parity(&m, &first)[1].is_zero());
    let (s, rounds) = uniformize_as(&m, local).unwrap();
    assert_eq!(rounds, 2);
    assert!(common::md_parity(&m, &s).iter().all(|v| v.is_one()));

    let coin = MdpBuilder::new()
        .random("s", 1, &[("w", rat(1, 2)), ("l", rat(1, 2))])
        .controlled("w", 2, &["w"])
        .controlled("l", 1, &["l"])
        .build()
        .unwrap();
    assert!(matches!(uniformize_as(&coin, |x, _| Ok(solve_parity(x).witness)), Err(Error::NotAlmostSure(_))));
}

// ---- plastering

#[test]
fn plaster_thresholds_and_trivial_instance() {
    assert_eq!(thresholds(&rat(2, 5), 2), (rat(1, 10), rat(9, 10), rat(99, 100)));
    let m = MdpBuilder::new()
        .controlled("a", 2, &["b", "c"])
        .controlled("b", 2, &["b"])
        .controlled("c", 2, &["c"])
        .build()
        .unwrap();
    let l = layer(&m);
    let l0 = l0_of(&l, &[0]);
    let (s, rep) = plaster_parity(&l, &l0, &rat(1, 5)).unwrap();
    assert!(rep.ok());
    assert_eq!(rep.iterations.len(), 1);
    assert!(rep.iterations[0].fix.iter().all(|x| *x));
    assert!(common::md_parity(&l.mdp, &s).iter().all(|v| v.is_one()));
}

#[test]
fn plaster_commits_per_branch() {
    // one branch wins only through color 2, the other only through color 4
    let m = MdpBuilder::new()
        .random("r", 1, &[("x", rat(1, 2)), ("y", rat(1, 2))])
        .controlled("x", 1, &["x2", "x3"])
        .controlled("y", 1, &["y4", "y5", "y3"])
        .random("x2", 2, &[("x2w", rat(3, 4)), ("x3", rat(1, 4))])
        .controlled("x2w", 2, &["x2w"])
        .controlled("x3", 3, &["x3"])
        .random("y4", 1, &[("y4w", rat(2, 3)), ("y5", rat(1, 3))])
        .controlled("y4w", 4, &["y4w"])
        .controlled("y5", 5, &["y5"])
        .controlled("y3", 3, &["y3"])
        .build()
        .unwrap();
    let val = common::brute_parity(&m);
    assert_eq!(val[0], rat(17, 24));
    let l = layer(&m);
    for eps in [rat(1, 2), rat(1, 5), rat(1, 50)] {
        let l0 = l0_of(&l, &[0]);
        let (s, rep) = plaster_parity(&l, &l0, &eps).unwrap();
        assert!(rep.ok(), "{:?}", rep.checks.failures());
        let att = common::md_parity(&l.mdp, &s);
        for &i in &l0 {
            let src = match l.origin[i] {
                parity_forge::transform::LayerNode::State { src, .. } => src,
                _ => unreachable!(),
            };
            assert!(att[i] >= &val[src] - &eps);
        }
        for it in &rep.iterations {
            assert!(it.invariant_slack >= Rat::zero());
            assert!((0..l.mdp.len()).all(|i| !it.r[i] || it.fix[i]));
            assert!((0..l.mdp.len()).all(|i| !it.core[i] || it.fix[i]));
        }
    }
}

#[test]
fn plaster_rejects_cycles() {
    let m = MdpBuilder::new().controlled("a", 2, &["b"]).controlled("b", 1, &["a"]).build().unwrap();
    let l = layer(&m);
    assert!(matches!(plaster_parity(&l, &[0, 1], &rat(1, 5)), Err(Error::NotAcyclic(_))));
}

// ---- sea urchin

#[test]
fn urchin_trivial_and_walk() {
    let m = MdpBuilder::new().controlled("a", 2, &["a"]).build().unwrap();
    let l = layer(&m);
    let out = sea_urchin_rounds(&l.mdp, &l.sibling, &l0_of(&l, &[0]), 1, &UrchinParams::default()).unwrap();
    assert!(out.rounds[0].p.iter().all(|p| p.is_one()));

    let mut p = Params::new();
    p.insert("p".into(), "1/3".into());
    let walk = gallery::build("as_win_walk", &p).unwrap();
    let t = truncate(&walk, &walk.initial(), 6, 8, TruncMode::Optimistic).unwrap();
    let l = layer(&t);
    let l0 = l0_of(&l, t.initial());
    for engine in [SpikeEngine::Plaster, SpikeEngine::Exact] {
        let params = UrchinParams { engine, ..UrchinParams::default() };
        let out = sea_urchin_rounds(&l.mdp, &l.sibling, &l0, 4, &params).unwrap();
        assert!(out.checks.ok(), "{:?}", out.checks.failures());
        assert_eq!(out.rounds.len(), 4);
        for (i, rd) in out.rounds.iter().enumerate() {
            let floor = Rat::one() - pow2_neg(i as u32 + 1);
            assert!(rd.p.iter().all(|x| *x >= floor));
        }
        assert!(out.rounds[3].p.iter().all(|x| *x >= rat(15, 16)));
        for w in out.rounds.windows(2) {
            assert!(w[0].p.iter().zip(&w[1].p).all(|(a, b)| a <= b));
        }
    }
    let coin = MdpBuilder::new()
        .random("s", 1, &[("w", rat(1, 2)), ("l", rat(1, 2))])
        .controlled("w", 2, &["w"])
        .controlled("l", 1, &["l"])
        .build()
        .unwrap();
    let l = layer(&coin);
    assert!(matches!(
        sea_urchin_rounds(&l.mdp, &l.sibling, &l0_of(&l, &[0]), 2, &UrchinParams::default()),
        Err(Error::NotAlmostSure(_))
    ));
    let weak = UrchinParams {
        alpha: rat(9, 10),
        beta: rat(8, 10),
        gamma: rat(6, 10),
        err_shift: 4,
        ..UrchinParams::default()
    };
    assert!(matches!(weak.validate(), Err(Error::BadParams(_))));
}

// ---- optimal 1-bit

#[test]
fn one_bit_md_sufficient_instance_never_flips() {
    let m = gallery::fig3(&rat(1, 2));
    let out = optimal_parity_1bit(&m, &OneBitOptions::default()).unwrap();
    assert!(out.checks.ok());
    assert!(out.simplified && out.strategy.never_flips());
}

#[test]
fn one_bit_raw_output_can_toggle_and_stays_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let opts = OneBitOptions { simplify: false, ..OneBitOptions::default() };
    let mut toggling = 0;
    for _ in 0..200 {
        let n = rng.gen_range(3..=6);
        let m = random_mdp(&mut rng, n, 3, &[0, 1, 2, 3]);
        let out = optimal_parity_1bit(&m, &opts).unwrap();
        assert!(out.checks.ok());
        if !out.strategy.never_flips() {
            toggling += 1;
            assert_eq!(common::one_bit_parity(&m, &out.strategy), solve_parity(&m).values);
        }
    }
    assert!(toggling > 0, "no instance produced a toggling strategy");
}

#[test]
fn one_bit_initial_bit_is_irrelevant() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    for _ in 0..50 {
        let m = random_mdp(&mut rng, 6, 3, &[0, 1, 2, 3, 4]);
        let val = common::brute_parity(&m);
        let out = optimal_parity_1bit(&m, &OneBitOptions { simplify: false, ..OneBitOptions::default() }).unwrap();
        let mut u = out.strategy.clone();
        for bit in 0..2 {
            u.m0 = Mode::bits(bit);
            assert_eq!(common::one_bit_parity(&m, &u), val);
        }
    }
}

#[test]
fn one_bit_with_urchin_engine() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    for _ in 0..8 {
        let m = random_mdp(&mut rng, 4, 2, &[1, 2]);
        let opts = OneBitOptions { engine: AsEngine::Urchin(UrchinParams::default()), simplify: false };
        let out = optimal_parity_1bit(&m, &opts).unwrap();
        assert!(out.checks.ok(), "{:?}", out.checks.failures());
        assert_eq!(common::one_bit_parity(&m, &out.strategy), common::brute_parity(&m));
    }
}

#[test]
fn as_win_walk_truncation_is_almost_sure() {
    let walk = gallery::build("as_win_walk", &Params::new()).unwrap();
    let t = truncate(&walk, &walk.initial(), 5, 8, TruncMode::Optimistic).unwrap();
    assert!(solve_parity(&t).values.iter().all(|v| v.is_one()));
    assert!(walk.is_controlled("3") && !walk.is_controlled("3:l"));
}
